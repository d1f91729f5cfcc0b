//! Exact arithmetic over GF(2)\[x\] and the machinery for studying perfect
//! binary polynomials: divisor sums, Mersenne and 2-Mersenne classification,
//! admissible families, and the exhaustive exponent search that pins down the
//! perfect polynomials built from a fixed family of odd primes.
//!
//! - [`poly`]: dense bit-packed polynomials, conjugate and reciprocal maps.
//! - [`kernel`]: registry of interchangeable word multiplication kernels.
//! - [`factor`]: irreducibility, square-freeness, full factorization.
//! - [`sigma`]: the divisor-sum function and exponent bookkeeping.
//! - [`catalog`]: the named Mersenne, 2-Mersenne and perfect polynomials.
//! - [`search`]: factor tables, staged search, reciprocal and identity sweeps,
//!   conjecture scans.
//! - [`cli`]: the `binperf` command line, one registered verb per operation.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod factor;
pub mod kernel;
pub mod poly;
pub mod search;
pub mod sigma;

pub use error::{Error, Result};
pub use factor::FactorMap;
pub use poly::Poly;
