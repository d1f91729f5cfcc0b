use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::factor::{self, FactorMap};
use crate::poly::Poly;
use crate::sigma::sigma_of_prime_power_unchecked;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRule {
    /// Mersenne base: look for a factor of length >= 2.
    NonMersenne,
    /// Any other base: look for a factor of length >= 3.
    NonOneOrTwoMersenne,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub h: u64,
    pub factors: FactorMap,
    pub lengths: Vec<usize>,
    pub witness: Option<Poly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureScan {
    pub base: Poly,
    pub base_length: usize,
    pub rule: WitnessRule,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureScan {
    /// Rows without a witness: counterexample candidates.
    pub fn counterexamples(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| r.witness.is_none()).map(|r| r.h).collect()
    }
}

pub fn conjecture_scan(base: &Poly, h_max: u64) -> Result<ConjectureScan> {
    if base.is_zero() {
        return Err(Error::ZeroInput("conjecture_scan"));
    }
    if !base.is_odd() || base.degree() == Some(0) {
        return Err(Error::EvenInput { op: "conjecture_scan", poly: base.to_string() });
    }
    if !factor::is_irreducible(base)? {
        return Err(Error::Reducible { op: "conjecture_scan", poly: base.to_string() });
    }
    if h_max < 2 {
        return Err(Error::InvalidArgument("h_max must be at least 2".into()));
    }
    let base_length = catalog::length(base)?;
    let (rule, min_len) = if base_length == 1 {
        (WitnessRule::NonMersenne, 2)
    } else {
        (WitnessRule::NonOneOrTwoMersenne, 3)
    };
    let rows = (2..=h_max)
        .into_par_iter()
        .map(|h| -> Result<ConjectureRow> {
            let s = sigma_of_prime_power_unchecked(base, 2 * h);
            let factors = factor::factor_full(&s)?;
            let lengths = factors.primes().map(catalog::length).collect::<Result<Vec<_>>>()?;
            let witness = factors.primes().zip(&lengths).find(|(_, &l)| l >= min_len).map(|(p, _)| p.clone());
            Ok(ConjectureRow { h, factors, lengths, witness })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConjectureScan { base: base.clone(), base_length, rule, rows })
}
