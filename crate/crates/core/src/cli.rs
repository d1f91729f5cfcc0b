//! The `binperf` command line.
//!
//! Each verb is a [`Verb`] registered in [`verbs`]; the root parser is built
//! from the registry, so an unknown verb is rejected before any computation.
//! Exit codes: 0 success, 1 a verification verb found a failure, 2 usage or
//! input error. Results go to the primary stream, diagnostics to the other.

use std::io::{self, Write};

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use serde::Serialize;

use crate::catalog::{self, Catalog};
use crate::error::{Error, Result};
use crate::factor;
use crate::kernel;
use crate::poly::Poly;
use crate::search::{self, BaseSet, SearchConfig, Stage, StageItems};
use crate::sigma;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub enum Outcome {
    Ok,
    /// A verification verb found a mismatch.
    Failed,
}

pub struct Ctx<'a> {
    pub out: &'a mut (dyn Write + Send),
    pub err: &'a mut (dyn Write + Send),
    pub json: bool,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        self.line(&s)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(io_err)
    }

    fn diag(&mut self, s: &str) {
        let _ = writeln!(self.err, "{s}");
    }
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

pub trait Verb: Send + Sync {
    fn name(&self) -> &'static str;

    /// Subcommand definition: arguments only, the name comes from [`Verb::name`].
    fn command(&self) -> Command;

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome>;
}

/// Accepts canonical text, `0x` hex, or a catalog name such as `M4` or `T10`.
pub fn parse_poly_arg(s: &str) -> Result<Poly> {
    if let Some(e) = catalog::catalog().by_name(s.trim()) {
        return Ok(e.poly.clone());
    }
    Poly::parse(s)
}

fn poly_arg(m: &ArgMatches, id: &str) -> Result<Poly> {
    parse_poly_arg(m.get_one::<String>(id).expect("required"))
}

fn poly_positional(help: &'static str) -> Arg {
    Arg::new("poly").required(true).help(help)
}

struct SigmaVerb;

impl Verb for SigmaVerb {
    fn name(&self) -> &'static str {
        "sigma"
    }

    fn command(&self) -> Command {
        Command::new(self.name()).about("Sum of all divisors").arg(poly_positional("polynomial"))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let p = poly_arg(m, "poly")?;
        let s = sigma::sigma(&p)?;
        if ctx.json {
            #[derive(Serialize)]
            struct Out<'a> {
                input: &'a Poly,
                sigma: &'a Poly,
                perfect: bool,
            }
            ctx.emit(&Out { input: &p, sigma: &s, perfect: s == p })?;
        } else {
            ctx.line(&s.to_string())?;
        }
        Ok(Outcome::Ok)
    }
}

struct FactorVerb;

impl Verb for FactorVerb {
    fn name(&self) -> &'static str {
        "factor"
    }

    fn command(&self) -> Command {
        Command::new(self.name()).about("Complete factorization").arg(poly_positional("polynomial"))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let f = factor::factor_full(&poly_arg(m, "poly")?)?;
        if ctx.json {
            ctx.emit(&f)?;
        } else {
            ctx.line(&f.to_text())?;
        }
        Ok(Outcome::Ok)
    }
}

struct ReprVerb;

impl Verb for ReprVerb {
    fn name(&self) -> &'static str {
        "repr"
    }

    fn command(&self) -> Command {
        Command::new(self.name()).about("Representation and length of an odd polynomial").arg(poly_positional("odd polynomial"))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let r = catalog::representation(&poly_arg(m, "poly")?)?;
        if ctx.json {
            ctx.emit(&r)?;
        } else {
            ctx.line(&r.to_string())?;
        }
        Ok(Outcome::Ok)
    }
}

struct ClassifyVerb;

impl Verb for ClassifyVerb {
    fn name(&self) -> &'static str {
        "classify"
    }

    fn command(&self) -> Command {
        Command::new(self.name()).about("k-Mersenne classification").arg(poly_positional("odd polynomial"))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let c = catalog::classify(&poly_arg(m, "poly")?)?;
        if ctx.json {
            ctx.emit(&c)?;
        } else {
            ctx.line(&c.to_string())?;
        }
        Ok(Outcome::Ok)
    }
}

struct VerifyCatalogVerb;

impl Verb for VerifyCatalogVerb {
    fn name(&self) -> &'static str {
        "verify-catalog"
    }

    fn command(&self) -> Command {
        Command::new(self.name()).about("Recheck every catalog entry")
    }

    fn run(&self, _m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let cat = catalog::catalog();
        let report = cat.self_check();
        if ctx.json {
            #[derive(Serialize)]
            struct Out<'a> {
                report: &'a catalog::CatalogReport,
                entries: &'a [catalog::CatalogEntry],
            }
            ctx.emit(&Out { report: &report, entries: cat.entries() })?;
        } else {
            ctx.line(&report.summary())?;
        }
        for f in &report.failures {
            ctx.diag(&format!("catalog: {f}"));
        }
        Ok(if report.is_ok() { Outcome::Ok } else { Outcome::Failed })
    }
}

struct TablesVerb;

impl Verb for TablesVerb {
    fn name(&self) -> &'static str {
        "tables"
    }

    fn command(&self) -> Command {
        Command::new(self.name())
            .about("Rows where sigma(S^(2h)) factors over the catalog family")
            .arg(Arg::new("base").long("base").default_value("all").help("x, F1, F2 or all"))
            .arg(hmax_arg(None))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let base = m.get_one::<String>("base").expect("default");
        let sets = if base.eq_ignore_ascii_case("all") {
            vec![BaseSet::XAndConjugate, BaseSet::F1, BaseSet::F2]
        } else {
            vec![base.parse()?]
        };
        let hmax = m.get_one::<u64>("hmax").copied();
        let tables: Vec<_> = sets.into_iter().flat_map(|s| search::sigma_factor_tables(s, hmax)).collect();
        if ctx.json {
            return ctx.emit(&tables).map(|_| Outcome::Ok);
        }
        let cat = catalog::catalog();
        for t in &tables {
            ctx.line(&format!("base {} (h <= {}): {} rows", t.name, t.h_max, t.rows.len()))?;
            for r in &t.rows {
                ctx.line(&format!("  h={}: {}", r.h, cat.label_factors(&r.factors)))?;
            }
        }
        Ok(Outcome::Ok)
    }
}

fn hmax_arg(default: Option<&'static str>) -> Arg {
    let a = Arg::new("hmax").long("hmax").value_parser(value_parser!(u64)).help("largest h scanned");
    match default {
        Some(d) => a.default_value(d),
        None => a,
    }
}

struct SearchVerb;

impl Verb for SearchVerb {
    fn name(&self) -> &'static str {
        "search"
    }

    fn command(&self) -> Command {
        Command::new(self.name())
            .about("Staged exponent search for perfect polynomials")
            .arg(Arg::new("stage").long("stage").default_value("final").help("1, 2, 3 or final"))
            .arg(
                Arg::new("require-uv")
                    .long("require-uv")
                    .action(ArgAction::SetTrue)
                    .help("also require u >= 3 or v >= 3 at stage 1"),
            )
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let stage: Stage = m.get_one::<String>("stage").expect("default").parse()?;
        let cfg = SearchConfig { require_uv: m.get_flag("require-uv") };
        let res = search::run_search(stage, cfg);
        if ctx.json {
            ctx.emit(&res)?;
        } else {
            ctx.line(&res.summary_line())?;
            let cat = catalog::catalog();
            match &res.items {
                StageItems::Tuples(ts) => {
                    for t in ts {
                        let row: Vec<String> = t.iter().map(u64::to_string).collect();
                        ctx.line(&format!("[{}]", row.join(",")))?;
                    }
                }
                StageItems::Polys(ps) => {
                    for p in ps {
                        let f = factor::factor_full(p)?;
                        let name = cat.name_of(p).map(|n| format!("{n}: ")).unwrap_or_default();
                        ctx.line(&format!("{name}{}", cat.label_factors(&f)))?;
                    }
                }
            }
        }
        if res.matches_expected() {
            Ok(Outcome::Ok)
        } else {
            ctx.diag(&res.filter_diff());
            Ok(Outcome::Failed)
        }
    }
}

struct ReciprocalVerb;

impl Verb for ReciprocalVerb {
    fn name(&self) -> &'static str {
        "reciprocal"
    }

    fn command(&self) -> Command {
        Command::new(self.name())
            .about("Classify reciprocals of irreducible 1 + x^a (x+1)^b M1^c")
            .arg(Arg::new("max-abc").long("max-abc").value_parser(value_parser!(u64).range(1..)).default_value("6"))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let r = search::explore_reciprocal(*m.get_one::<u64>("max-abc").expect("default"))?;
        if ctx.json {
            return ctx.emit(&r).map(|_| Outcome::Ok);
        }
        for e in &r.entries {
            let (a, b, c) = e.abc;
            let class = serde_json::to_value(e.class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            ctx.line(&format!("({a},{b},{c}) {} star={} {class}", e.label, e.star_label))?;
        }
        ctx.line(&format!("star mersenne: {}", r.star_mersenne.join(" ")))?;
        ctx.line(&format!("self reciprocal: {}", r.self_reciprocal.join(" ")))?;
        let pairs: Vec<String> = r.star_pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        ctx.line(&format!("star pairs: {}", pairs.join(" ")))?;
        Ok(Outcome::Ok)
    }
}

struct IdentitiesVerb;

impl Verb for IdentitiesVerb {
    fn name(&self) -> &'static str {
        "identities"
    }

    fn command(&self) -> Command {
        Command::new(self.name())
            .about("Exhaustive check of the five split identities")
            .arg(Arg::new("max-exp").long("max-exp").value_parser(value_parser!(u64).range(2..)).default_value("32"))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let r = search::verify_split_identities(*m.get_one::<u64>("max-exp").expect("default"));
        if ctx.json {
            ctx.emit(&r)?;
        } else {
            for f in &r.families {
                ctx.line(&format!(
                    "({}) {}: found={} missing={} unexpected={}",
                    f.id,
                    f.identity,
                    f.found.len(),
                    f.missing.len(),
                    f.unexpected.len()
                ))?;
            }
        }
        for f in r.families.iter().filter(|f| !f.ok()) {
            ctx.diag(&format!("({}) missing {:?} unexpected {:?}", f.id, f.missing, f.unexpected));
        }
        Ok(if r.ok() { Outcome::Ok } else { Outcome::Failed })
    }
}

struct ConjectureVerb;

impl Verb for ConjectureVerb {
    fn name(&self) -> &'static str {
        "conjecture"
    }

    fn command(&self) -> Command {
        Command::new(self.name())
            .about("Look for non-Mersenne prime factors of sigma(base^(2h))")
            .arg(Arg::new("base").required(true).help("odd irreducible base, or F1 for every Mersenne prime"))
            .arg(hmax_arg(Some("20")))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let cat = catalog::catalog();
        let arg = m.get_one::<String>("base").expect("required");
        let bases = if arg.eq_ignore_ascii_case("F1") { cat.f1() } else { vec![parse_poly_arg(arg)?] };
        let hmax = *m.get_one::<u64>("hmax").expect("default");
        let scans = bases.iter().map(|b| search::conjecture_scan(b, hmax)).collect::<Result<Vec<_>>>()?;
        if ctx.json {
            ctx.emit(&scans)?;
        } else {
            for s in &scans {
                ctx.line(&format!("base {} (length {})", cat.label(&s.base), s.base_length))?;
                for r in &s.rows {
                    let w = r.witness.as_ref().map(|w| cat.label(w)).unwrap_or_else(|| "NONE".into());
                    ctx.line(&format!("  h={} witness={} factors={}", r.h, w, cat.label_factors(&r.factors)))?;
                }
            }
        }
        let mut failed = false;
        for s in &scans {
            for h in s.counterexamples() {
                failed = true;
                ctx.diag(&format!("COUNTEREXAMPLE CANDIDATE: base {} h={h} has no witness", cat.label(&s.base)));
            }
        }
        Ok(if failed { Outcome::Failed } else { Outcome::Ok })
    }
}

struct AdmissibleVerb;

impl Verb for AdmissibleVerb {
    fn name(&self) -> &'static str {
        "admissible"
    }

    fn command(&self) -> Command {
        Command::new(self.name())
            .about("Check the admissibility conditions of a family of odd primes")
            .arg(Arg::new("family").required(true).num_args(1..).help("members; F, F1 and F2 expand to catalog families"))
            .arg(Arg::new("budget").long("budget").value_parser(value_parser!(u64).range(1..)))
    }

    fn run(&self, m: &ArgMatches, ctx: &mut Ctx) -> Result<Outcome> {
        let cat = catalog::catalog();
        let mut family = Vec::new();
        for a in m.get_many::<String>("family").expect("required") {
            family.extend(expand_family(cat, a)?);
        }
        let r = catalog::is_admissible(&family, m.get_one::<u64>("budget").copied())?;
        if ctx.json {
            return ctx.emit(&r).map(|_| Outcome::Ok);
        }
        ctx.line(&format!("admissible={}", r.admissible))?;
        for (name, c) in [("i", &r.cond_i), ("ii", &r.cond_ii), ("iii", &r.cond_iii)] {
            ctx.line(&format!("({name}) holds={}", c.holds))?;
            for w in &c.witnesses {
                ctx.line(&format!("  {w}"))?;
            }
        }
        Ok(Outcome::Ok)
    }
}

fn expand_family(cat: &Catalog, a: &str) -> Result<Vec<Poly>> {
    Ok(match a.to_ascii_uppercase().as_str() {
        "F" => cat.family(),
        "F1" => cat.f1(),
        "F2" => cat.f2(),
        _ => vec![parse_poly_arg(a)?],
    })
}

static VERBS: [&dyn Verb; 11] = [
    &SigmaVerb,
    &FactorVerb,
    &ReprVerb,
    &ClassifyVerb,
    &VerifyCatalogVerb,
    &TablesVerb,
    &SearchVerb,
    &ReciprocalVerb,
    &IdentitiesVerb,
    &ConjectureVerb,
    &AdmissibleVerb,
];

pub fn verbs() -> &'static [&'static dyn Verb] {
    &VERBS
}

pub fn root_command() -> Command {
    let mut cmd = Command::new("binperf")
        .about("Perfect polynomials over GF(2)")
        .subcommand_required(true)
        .arg(Arg::new("json").long("json").global(true).action(ArgAction::SetTrue).help("JSON output"))
        .arg(
            Arg::new("jobs")
                .long("jobs")
                .global(true)
                .value_parser(value_parser!(usize))
                .help("worker threads for enumeration"),
        )
        .arg(Arg::new("kernel").long("kernel").global(true).help("multiplication kernel (clmul, schoolbook)"));
    for v in verbs() {
        cmd = cmd.subcommand(v.command().name(v.name()));
    }
    cmd
}

/// Parses `argv` (program name first) and runs the selected verb.
pub fn run_cli_with<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match root_command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let verb = verbs().iter().find(|v| v.name() == name).expect("registered verb");
    if let Some(k) = sub.get_one::<String>("kernel") {
        if let Err(e) = kernel::set_default_kernel(k) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    }
    let json = sub.get_flag("json");
    let jobs = sub.get_one::<usize>("jobs").copied();
    let mut ctx = Ctx { out, err, json };
    let result = search::with_jobs(jobs, || verb.run(sub, &mut ctx));
    let _ = ctx.out.flush();
    match result.and_then(|r| r) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Failed) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_cli_with(argv, &mut io::stdout(), &mut io::stderr())
}
