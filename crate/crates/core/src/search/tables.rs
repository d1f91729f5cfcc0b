use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, DEGREE_SUM};
use crate::error::Error;
use crate::factor::{divide_out, FactorMap};
use crate::poly::Poly;
use crate::sigma::sigma_of_prime_power_unchecked;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseSet {
    /// `x` and `x + 1`
    XAndConjugate,
    F1,
    F2,
}

impl FromStr for BaseSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "x" | "x-and-conjugate" => Ok(BaseSet::XAndConjugate),
            "f1" => Ok(BaseSet::F1),
            "f2" => Ok(BaseSet::F2),
            _ => Err(Error::InvalidArgument(format!("unknown base set `{s}` (expected x, F1 or F2)"))),
        }
    }
}

impl BaseSet {
    pub fn bases(self) -> Vec<Poly> {
        let cat = catalog::catalog();
        match self {
            BaseSet::XAndConjugate => vec![Poly::x(), Poly::x_plus_one()],
            BaseSet::F1 => cat.f1(),
            BaseSet::F2 => cat.f2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaRow {
    pub h: u64,
    pub factors: FactorMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaTable {
    pub base: Poly,
    pub name: String,
    pub h_max: u64,
    pub rows: Vec<SigmaRow>,
}

fn default_h_max(base: &Poly) -> u64 {
    (DEGREE_SUM / (2 * base.degree().unwrap_or(1).max(1))) as u64
}

/// Rows `h <= h_max` where `sigma(base^(2h))` factors over `F`.
pub fn sigma_table(base: &Poly, h_max: Option<u64>) -> SigmaTable {
    let cat = catalog::catalog();
    let family = cat.family();
    let members: Vec<&Poly> = family.iter().collect();
    let h_max = h_max.unwrap_or_else(|| default_h_max(base));
    let rows: Vec<SigmaRow> = (1..=h_max)
        .into_par_iter()
        .filter_map(|h| {
            let s = sigma_of_prime_power_unchecked(base, 2 * h);
            divide_out(&s, &members).map(|factors| SigmaRow { h, factors })
        })
        .collect();
    SigmaTable { base: base.clone(), name: cat.label(base), h_max, rows }
}

/// One table per base; `h_max` overrides the degree budget.
pub fn sigma_factor_tables(base_set: BaseSet, h_max: Option<u64>) -> Vec<SigmaTable> {
    base_set.bases().iter().map(|b| sigma_table(b, h_max)).collect()
}
