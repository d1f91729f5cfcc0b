//! The computational side: divisor-sum factor tables, the staged exponent
//! search, reciprocal classification, split identities and conjecture scans.

mod conjecture;
mod identities;
mod reciprocal;
mod stages;
mod tables;

pub use conjecture::{conjecture_scan, ConjectureRow, ConjectureScan, WitnessRule};
pub use identities::{verify_split_identities, IdentityFamily, IdentityReport};
pub use reciprocal::{explore_reciprocal, ReciprocalEntry, ReciprocalReport, StarClass};
pub use stages::{
    run_search, stage3_candidates, Candidate, FilterCount, SearchConfig, Stage, StageItems, StageResult,
};
pub use tables::{sigma_factor_tables, sigma_table, BaseSet, SigmaRow, SigmaTable};

use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `jobs` workers, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidArgument("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
