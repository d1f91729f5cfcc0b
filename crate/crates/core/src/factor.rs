//! Irreducibility, square-freeness and factorization over GF(2).
//!
//! Full factorization runs the usual three phases: square-free decomposition
//! (taking square roots whenever the derivative vanishes), distinct-degree
//! splitting, and equal-degree splitting with random trace polynomials. The
//! random source is seeded from the input's coefficients so results and any
//! traces are reproducible run to run.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Multiset of irreducible factors in canonical order (degree, then value).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactorMap {
    entries: Vec<(Poly, u64)>,
}

impl FactorMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map from `(prime, exp)` pairs, merging repeats and dropping
    /// zero exponents. Primality is the caller's responsibility.
    pub fn from_pairs<I: IntoIterator<Item = (Poly, u64)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<Poly, u64> = BTreeMap::new();
        for (p, e) in pairs {
            *acc.entry(p).or_default() += e;
        }
        FactorMap { entries: acc.into_iter().filter(|(_, e)| *e > 0).collect() }
    }

    pub fn entries(&self) -> &[(Poly, u64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Poly, u64)> {
        self.entries.iter().map(|(p, e)| (p, *e))
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exponent_of(&self, prime: &Poly) -> u64 {
        self.entries
            .binary_search_by(|(p, _)| p.cmp(prime))
            .map_or(0, |i| self.entries[i].1)
    }

    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> Poly {
        self.entries
            .iter()
            .fold(Poly::one(), |acc, (p, e)| acc.mul(&p.pow_nonzero_exp(*e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.iter().all(|(_, e)| *e == 1)
    }

    /// Compact text form, e.g. `x^2 * (x+1) * (x^2+x+1)^3`.
    pub fn to_text(&self) -> String {
        if self.entries.is_empty() {
            return "1".to_string();
        }
        self.entries
            .iter()
            .map(|(p, e)| {
                let base = if p.weight() > 1 { format!("({p})") } else { p.to_string() };
                if *e == 1 { base } else { format!("{base}^{e}") }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

#[derive(Serialize)]
struct FactorJson<'a> {
    prime: &'a Poly,
    exp: u64,
}

impl Serialize for FactorMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FactorMap", 2)?;
        st.serialize_field("poly", &self.product())?;
        let factors: Vec<_> = self.entries.iter().map(|(prime, exp)| FactorJson { prime, exp: *exp }).collect();
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

fn sqr_mod(a: &Poly, m: &Poly) -> Poly {
    a.square().rem(m).expect("nonzero modulus")
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `x^(2^d) = x mod P` and `gcd(x^(2^(d/p)) - x, P) = 1` for
/// every prime `p | d`.
pub fn is_irreducible(p: &Poly) -> Result<bool> {
    let d = p.degree().ok_or(Error::ZeroInput("is_irreducible"))?;
    if d == 0 {
        return Err(Error::ConstantInput("is_irreducible"));
    }
    if d == 1 {
        return Ok(true);
    }
    if !p.eval_at_zero() {
        return Ok(false);
    }
    let x = Poly::x();
    // frob[k] = x^(2^k) mod p
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(x.clone());
    for k in 1..=d {
        let next = sqr_mod(&frob[k - 1], p);
        frob.push(next);
    }
    if frob[d] != x {
        return Ok(false);
    }
    for q in prime_divisors(d) {
        let h = frob[d / q].add(&x);
        if !h.gcd(p).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_squarefree(p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroInput("is_squarefree"));
    }
    if p.degree() == Some(0) {
        return Ok(true);
    }
    let d = p.derivative();
    if d.is_zero() {
        // a nonconstant square
        return Ok(false);
    }
    Ok(p.gcd(&d).is_one())
}

/// Complete factorization into irreducibles.
pub fn factor_full(p: &Poly) -> Result<FactorMap> {
    if p.is_zero() {
        return Err(Error::ZeroInput("factor_full"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(coefficient_hash(p));
    let mut out = Vec::new();
    squarefree_decompose(p, 1, &mut |part, mult| {
        for (block, deg) in distinct_degree(part) {
            for prime in equal_degree(&block, deg, &mut rng) {
                out.push((prime, mult));
            }
        }
    });
    Ok(FactorMap::from_pairs(out))
}

/// FNV-1a over the coefficient words.
fn coefficient_hash(p: &Poly) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in p.words() {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Calls `emit(part, multiplicity)` for square-free parts whose product with
/// multiplicities reconstructs `f`.
fn squarefree_decompose(f: &Poly, mult: u64, emit: &mut dyn FnMut(&Poly, u64)) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let d = f.derivative();
    if d.is_zero() {
        let root = f.sqrt().expect("zero derivative means a square");
        squarefree_decompose(&root, mult * 2, emit);
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            emit(&fac, mult * i);
        }
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
        i += 1;
    }
    if !c.is_one() {
        // what remains has multiplicities divisible by 2
        let root = c.sqrt().expect("remaining cofactor is a square");
        squarefree_decompose(&root, mult * 2, emit);
    }
}

/// Splits a square-free `f` into blocks whose primes share a degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x();
    let mut h = x.rem(&rest).expect("nonzero");
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = sqr_mod(&h, &rest);
        let g = rest.gcd(&h.add(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting in characteristic 2 with the trace map
/// `a + a^2 + ... + a^(2^(d-1))`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a = random_below(n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut t = a.clone();
        let mut pow = a;
        for _ in 1..d {
            pow = sqr_mod(&pow, f);
            t = t.add(&pow);
        }
        let g = f.gcd(&t);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

fn random_below(n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
    if n % 64 != 0 {
        let last = words.len() - 1;
        words[last] &= (1u64 << (n % 64)) - 1;
    }
    Poly::from_words(words)
}

/// Factors `p` using only members of `family`, allowing multiplicities.
/// Returns `None` when something outside the family remains.
pub fn factor_over_family(p: &Poly, family: &[Poly]) -> Result<Option<FactorMap>> {
    if p.is_zero() {
        return Err(Error::ZeroInput("factor_over_family"));
    }
    let mut members: Vec<&Poly> = family.iter().collect();
    members.sort();
    members.dedup();
    for m in &members {
        if m.degree().unwrap_or(0) == 0 || !is_irreducible(m)? {
            return Err(Error::Reducible { op: "factor_over_family", poly: m.to_string() });
        }
    }
    Ok(divide_out(p, &members))
}

/// [`factor_over_family`] for a family already known to be irreducible.
pub(crate) fn divide_out(p: &Poly, members: &[&Poly]) -> Option<FactorMap> {
    let mut rest = p.clone();
    let mut found = Vec::new();
    for m in members {
        let mut e = 0;
        while let Some(q) = rest.div_exact(m) {
            rest = q;
            e += 1;
        }
        if e > 0 {
            found.push(((*m).clone(), e));
        }
        if rest.is_one() {
            break;
        }
    }
    rest.is_one().then(|| FactorMap::from_pairs(found))
}
