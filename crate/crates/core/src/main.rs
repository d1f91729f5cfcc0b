fn main() {
    std::process::exit(binperf::cli::run_cli(std::env::args_os()));
}
