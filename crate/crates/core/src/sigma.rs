//! The divisor-sum function and the exponent bookkeeping used by the search.

use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::factor::{self, divide_out, FactorMap};
use crate::poly::Poly;

/// Splits `e` as `2^t * s - 1` with `s` odd.
pub fn split_exponent(e: u64) -> (u32, u64) {
    let k = e + 1;
    let t = k.trailing_zeros();
    (t, k >> t)
}

/// `1 + p + ... + p^e` by Horner's rule. `p` must be irreducible.
pub fn sigma_prime_power(p: &Poly, e: u64) -> Result<Poly> {
    ensure_prime(p, "sigma_prime_power")?;
    Ok(geometric_sum(p, e))
}

fn geometric_sum(p: &Poly, e: u64) -> Poly {
    let one = Poly::one();
    let mut acc = Poly::one();
    for _ in 0..e {
        acc = acc.mul(p).add(&one);
    }
    acc
}

fn ensure_prime(p: &Poly, op: &'static str) -> Result<()> {
    if p.degree().unwrap_or(0) == 0 || !factor::is_irreducible(p)? {
        return Err(Error::Reducible { op, poly: p.to_string() });
    }
    Ok(())
}

/// `sigma(p^e)` in the shape `(1 + p)^(2^t - 1) * sigma(p^(s-1))^(2^t)` where
/// `e = 2^t * s - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredSigma {
    pub t: u32,
    pub s: u64,
    /// `1 + p`
    pub one_plus: Poly,
    /// `sigma(p^(s-1))`
    pub odd_part: Poly,
}

impl FactoredSigma {
    pub fn expand(&self) -> Poly {
        let outer = 1u64 << self.t;
        let left = self.one_plus.pow_nonzero_exp(outer - 1);
        let mut right = self.odd_part.clone();
        for _ in 0..self.t {
            right = right.square();
        }
        left.mul(&right)
    }
}

pub fn sigma_prime_power_factored(p: &Poly, e: u64) -> Result<FactoredSigma> {
    ensure_prime(p, "sigma_prime_power_factored")?;
    Ok(factored_unchecked(p, e))
}

fn factored_unchecked(p: &Poly, e: u64) -> FactoredSigma {
    let (t, s) = split_exponent(e);
    FactoredSigma {
        t,
        s,
        one_plus: p.add(&Poly::one()),
        odd_part: geometric_sum(p, s - 1),
    }
}

/// `sigma(p^e)` for a prime already known to be irreducible.
pub(crate) fn sigma_of_prime_power_unchecked(p: &Poly, e: u64) -> Poly {
    factored_unchecked(p, e).expand()
}

/// Sum of all divisors of `a`.
pub fn sigma(a: &Poly) -> Result<Poly> {
    if a.is_zero() {
        return Err(Error::ZeroInput("sigma"));
    }
    Ok(sigma_of_factored(&factor::factor_full(a)?))
}

pub fn sigma_of_factored(f: &FactorMap) -> Poly {
    f.iter()
        .fold(Poly::one(), |acc, (p, e)| acc.mul(&sigma_of_prime_power_unchecked(p, e)))
}

pub fn is_perfect(a: &Poly) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput("is_perfect"));
    }
    Ok(sigma(a)? == *a)
}

pub const MAX_INDECOMPOSABLE_OMEGA: usize = 30;

/// True when no split of the prime powers of `a` into two nonconstant
/// coprime parts makes both parts perfect.
pub fn is_indecomposable_perfect(a: &Poly) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput("is_indecomposable_perfect"));
    }
    let fm = factor::factor_full(a)?;
    if sigma_of_factored(&fm) != *a {
        return Err(Error::NotPerfect(a.to_string()));
    }
    let w = fm.omega();
    if w > MAX_INDECOMPOSABLE_OMEGA {
        return Err(Error::TooManyFactors { count: w, limit: MAX_INDECOMPOSABLE_OMEGA });
    }
    if w < 2 {
        return Ok(true);
    }
    let primes: Vec<&Poly> = fm.primes().collect();
    let exps: Vec<i64> = fm.iter().map(|(_, e)| e as i64).collect();
    // contribution[i][k] = exponent of prime k in sigma(p_i^e_i) minus e_i at k = i
    let contribution: Vec<Vec<i64>> = fm
        .iter()
        .enumerate()
        .map(|(i, (p, e))| {
            let s = sigma_of_prime_power_unchecked(p, e);
            let sf = divide_out(&s, &primes).expect("sigma of a perfect polynomial's prime power divides it");
            let mut v: Vec<i64> = primes.iter().map(|q| sf.exponent_of(q) as i64).collect();
            v[i] -= exps[i];
            v
        })
        .collect();
    // a subset is perfect iff its contributions sum to zero; the complement of
    // a perfect subset is perfect too, so fix index 0 inside the subset and
    // walk the remaining bits in Gray-code order
    let rest = w - 1;
    let mut sum = contribution[0].clone();
    let mut gray = 0u64;
    for step in 1..(1u64 << rest) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let idx = bit + 1;
        let sign = if gray >> bit & 1 == 1 { 1 } else { -1 };
        for (s, c) in sum.iter_mut().zip(&contribution[idx]) {
            *s += sign * c;
        }
        let full = gray.count_ones() as usize == rest;
        if !full && sum.iter().all(|&s| s == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The exponent parameters of a candidate
/// `x^a (x+1)^b prod M_i^c_i prod S_j^d_j` with every exponent written as
/// `2^k * odd - 1`. Index `i - 1` of `ni`/`ui` describes `M_i` (i = 1..5) and
/// index `j - 1` of `mj`/`vj` describes `S_j` (j = 1..8).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentTuple {
    pub n: u32,
    pub u: u64,
    pub m: u32,
    pub v: u64,
    pub ni: [u32; 5],
    pub ui: [u64; 5],
    pub mj: [u32; 8],
    pub vj: [u64; 8],
}

impl Default for ExponentTuple {
    fn default() -> Self {
        ExponentTuple { n: 0, u: 1, m: 0, v: 1, ni: [0; 5], ui: [1; 5], mj: [0; 8], vj: [1; 8] }
    }
}

pub const U_DOMAIN: [u64; 7] = [1, 3, 5, 7, 9, 13, 15];
pub const U1_DOMAIN: [u64; 5] = [1, 3, 5, 7, 15];
pub const SMALL_ODD_DOMAIN: [u64; 2] = [1, 3];

fn reconstruct(k: u32, odd: u64) -> u64 {
    (1u64 << k) * odd - 1
}

impl ExponentTuple {
    pub fn a(&self) -> u64 {
        reconstruct(self.n, self.u)
    }

    pub fn b(&self) -> u64 {
        reconstruct(self.m, self.v)
    }

    /// Exponent of `M_i`, `i` in 1..=5.
    pub fn c(&self, i: usize) -> u64 {
        reconstruct(self.ni[i - 1], self.ui[i - 1])
    }

    /// Exponent of `S_j`, `j` in 1..=8.
    pub fn d(&self, j: usize) -> u64 {
        reconstruct(self.mj[j - 1], self.vj[j - 1])
    }

    /// Checks the bounded search domain; the error names the first violated
    /// bound.
    pub fn check_domain(&self) -> Result<()> {
        let fail = |what: String| Err(Error::OutOfDomain(what));
        if !U_DOMAIN.contains(&self.u) {
            return fail(format!("u = {} not in {U_DOMAIN:?}", self.u));
        }
        if !U_DOMAIN.contains(&self.v) {
            return fail(format!("v = {} not in {U_DOMAIN:?}", self.v));
        }
        if !U1_DOMAIN.contains(&self.ui[0]) {
            return fail(format!("u1 = {} not in {U1_DOMAIN:?}", self.ui[0]));
        }
        for (name, val) in [("u2", self.ui[1]), ("u3", self.ui[2]), ("v1", self.vj[0])] {
            if !SMALL_ODD_DOMAIN.contains(&val) {
                return fail(format!("{name} = {val} not in {{1, 3}}"));
            }
        }
        for (i, &u) in self.ui.iter().enumerate().skip(3) {
            if u != 1 {
                return fail(format!("u{} = {u} must be 1", i + 1));
            }
        }
        for (j, &v) in self.vj.iter().enumerate().skip(1) {
            if v != 1 {
                return fail(format!("v{} = {v} must be 1", j + 1));
            }
        }
        let bounds = [
            ("n", self.n, 4),
            ("m", self.m, 4),
            ("n1", self.ni[0], 4),
            ("n2", self.ni[1], 3),
            ("n3", self.ni[2], 3),
            ("m1", self.mj[0], 3),
            ("n4", self.ni[3], 5),
            ("n5", self.ni[4], 5),
        ];
        for (name, val, max) in bounds {
            if val > max {
                return fail(format!("{name} = {val} exceeds {max}"));
            }
        }
        for (j, &m) in self.mj.iter().enumerate().skip(1) {
            if m > 1 {
                return fail(format!("m{} = {m} not in {{0, 1}}", j + 1));
            }
        }
        Ok(())
    }

    /// The candidate polynomial this tuple describes.
    pub fn materialize(&self) -> Poly {
        let cat = catalog::catalog();
        let mut fm = vec![(Poly::x(), self.a()), (Poly::x_plus_one(), self.b())];
        for i in 1..=5 {
            fm.push((cat.mersenne(i).poly.clone(), self.c(i)));
        }
        for j in 1..=8 {
            fm.push((cat.two_mersenne(j).poly.clone(), self.d(j)));
        }
        FactorMap::from_pairs(fm).product()
    }
}

/// Indicator sums over the odd parts of the exponents of `x` and `x + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorProfile {
    pub xi1: u64,
    pub xi2: u64,
    pub xi3: u64,
    pub xi4: u64,
}

/// Indicator of the singleton `{w}`.
pub fn chi(w: u64, t: u64) -> u64 {
    u64::from(w == t)
}

impl IndicatorProfile {
    pub fn new(u: u64, v: u64) -> Self {
        let p = IndicatorProfile {
            xi1: chi(3, u) + chi(9, u) + chi(15, u),
            xi2: chi(3, v) + chi(9, v) + chi(15, v),
            xi3: chi(5, u) + chi(15, u),
            xi4: chi(5, v) + chi(15, v),
        };
        assert!(p.xi1 <= 1 && p.xi2 <= 1 && p.xi3 <= 1 && p.xi4 <= 1);
        p
    }
}

/// Exponents of `x`, `x + 1`, `M_1..M_5` and `S_1..S_8` in `sigma(A)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SigmaExponents {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: [u64; 5],
    pub delta: [u64; 8],
}

/// Closed-form exponents of `sigma(A(t))`. Pure integer evaluation.
pub fn sigma_exponents(t: &ExponentTuple) -> Result<SigmaExponents> {
    t.check_domain()?;
    Ok(sigma_exponents_unchecked(t))
}

pub(crate) fn sigma_exponents_unchecked(t: &ExponentTuple) -> SigmaExponents {
    let cat = catalog::catalog();
    let p2 = |k: u32| 1u64 << k;
    let xi = IndicatorProfile::new(t.u, t.v);
    let (u, v, u1, u2, u3, v1) = (t.u, t.v, t.ui[0], t.ui[1], t.ui[2], t.vj[0]);
    let (n, m, n1, n2, n3, m1) = (t.n, t.m, t.ni[0], t.ni[1], t.ni[2], t.mj[0]);

    let mut alpha = p2(m) - 1;
    let mut beta = p2(n) - 1;
    for i in 1..=5 {
        let (ai, bi) = cat.mersenne(i).mersenne_params.expect("mersenne entry");
        alpha += (p2(t.ni[i - 1]) - 1) * ai;
        beta += (p2(t.ni[i - 1]) - 1) * bi;
    }
    let mut gamma1 = 0;
    for j in 1..=8 {
        let (aj, bj, nuj) = cat.two_mersenne(j).two_mersenne_params.expect("2-mersenne entry");
        let k = p2(t.mj[j - 1]) - 1;
        alpha += k * aj;
        beta += k * bj;
        gamma1 += k * nuj;
    }
    gamma1 += xi.xi1 * p2(n) + xi.xi2 * p2(m) + chi(3, u2) * p2(n2) + chi(3, u3) * p2(n3);
    let gamma23 = chi(7, u) * p2(n) + chi(7, v) * p2(m) + chi(7, u1) * p2(n1);
    let gamma4 = xi.xi3 * p2(n)
        + chi(15, v) * p2(m)
        + chi(15, u1) * p2(n1)
        + chi(3, u3) * p2(n3)
        + chi(3, v1) * p2(m1);
    let gamma5 = chi(15, u) * p2(n)
        + xi.xi4 * p2(m)
        + chi(15, u1) * p2(n1)
        + chi(3, u2) * p2(n2)
        + chi(3, v1) * p2(m1);

    let delta = [
        chi(15, u) * p2(n) + chi(15, v) * p2(m) + (chi(3, u1) + chi(15, u1)) * p2(n1),
        chi(7, u1) * p2(n1),
        chi(13, u) * p2(n),
        chi(9, u) * p2(n),
        chi(9, v) * p2(m),
        chi(13, v) * p2(m),
        // S_7 comes only from sigma(M_1^14); S_8 from sigma(M_1^4) and sigma(M_1^14)
        chi(15, u1) * p2(n1),
        (chi(5, u1) + chi(15, u1)) * p2(n1),
    ];
    SigmaExponents { alpha, beta, gamma: [gamma1, gamma23, gamma23, gamma4, gamma5], delta }
}
