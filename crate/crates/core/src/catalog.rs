//! Named polynomials: the Mersenne primes `M1..M13`, the 2-Mersenne primes
//! `S1..S15` and the perfect polynomials `T1..T11`; plus representation,
//! length, k-Mersenne classification and admissibility.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{self, FactorMap};
use crate::poly::Poly;
use crate::sigma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Mersenne,
    TwoMersenne,
    Perfect,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub poly: Poly,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mersenne_params: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_mersenne_params: Option<(u64, u64, u64)>,
    pub bar_partner: String,
}

/// `(a_i, b_i)` with `M_i = 1 + x^a_i (x+1)^b_i`.
pub const MERSENNE_PARAMS: [(u64, u64); 13] = [
    (1, 1),
    (1, 2),
    (2, 1),
    (1, 3),
    (3, 1),
    (3, 2),
    (3, 4),
    (6, 1),
    (2, 3),
    (4, 3),
    (1, 6),
    (1, 8),
    (8, 1),
];

/// `(alpha_j, beta_j, nu_j)` with `S_j = 1 + x^alpha_j (x+1)^beta_j M1^nu_j`.
pub const TWO_MERSENNE_PARAMS: [(u64, u64, u64); 15] = [
    (1, 1, 1),
    (2, 2, 1),
    (1, 3, 4),
    (3, 1, 1),
    (1, 3, 1),
    (3, 1, 4),
    (1, 1, 3),
    (3, 3, 1),
    (1, 1, 5),
    (4, 1, 1),
    (1, 2, 1),
    (2, 1, 2),
    (1, 4, 1),
    (2, 1, 1),
    (1, 2, 2),
];

const MERSENNE_BAR: [usize; 13] = [1, 3, 2, 5, 4, 9, 10, 11, 6, 7, 8, 13, 12];
const TWO_MERSENNE_BAR: [usize; 15] = [1, 2, 6, 5, 4, 3, 7, 8, 9, 13, 14, 15, 10, 11, 12];

pub struct Catalog {
    entries: Vec<CatalogEntry>,
    by_bits: HashMap<Poly, usize>,
}

const M_COUNT: usize = 13;
const S_COUNT: usize = 15;
const T_COUNT: usize = 11;

fn split_poly(a: u64, b: u64) -> Poly {
    Poly::monomial(a as usize).mul(&Poly::x_plus_one().pow_nonzero_exp(b))
}

/// `1 + x^a (x+1)^b Q^c`
pub fn q_abc(q: &Poly, a: u64, b: u64, c: u64) -> Poly {
    split_poly(a, b).mul(&q.pow_nonzero_exp(c)).add(&Poly::one())
}

impl Catalog {
    fn build() -> Catalog {
        let mut entries = Vec::with_capacity(M_COUNT + S_COUNT + T_COUNT);
        for (i, &(a, b)) in MERSENNE_PARAMS.iter().enumerate() {
            entries.push(CatalogEntry {
                name: format!("M{}", i + 1),
                poly: split_poly(a, b).add(&Poly::one()),
                kind: Kind::Mersenne,
                mersenne_params: Some((a, b)),
                two_mersenne_params: None,
                bar_partner: format!("M{}", MERSENNE_BAR[i]),
            });
        }
        let m1 = entries[0].poly.clone();
        for (j, &(a, b, c)) in TWO_MERSENNE_PARAMS.iter().enumerate() {
            entries.push(CatalogEntry {
                name: format!("S{}", j + 1),
                poly: q_abc(&m1, a, b, c),
                kind: Kind::TwoMersenne,
                mersenne_params: None,
                two_mersenne_params: Some((a, b, c)),
                bar_partner: format!("S{}", TWO_MERSENNE_BAR[j]),
            });
        }

        let m = |i: usize| entries[i - 1].poly.clone();
        let s1 = entries[M_COUNT].poly.clone();
        let prod = |a: u64, b: u64, rest: &[Poly]| rest.iter().fold(split_poly(a, b), |acc, p| acc.mul(p));
        let t1 = prod(2, 1, &[m(1)]);
        let t3 = prod(4, 3, &[m(4)]);
        let t5 = prod(4, 4, &[m(4), m(5)]);
        let t6 = prod(6, 3, &[m(2), m(3)]);
        let t8 = prod(4, 6, &[m(2), m(3), m(4)]);
        let t10 = prod(2, 1, &[s1, m(1), m(1)]);
        let ts = [
            t1.clone(),
            t1.bar(),
            t3.clone(),
            t3.bar(),
            t5,
            t6.clone(),
            t6.bar(),
            t8.clone(),
            t8.bar(),
            t10.clone(),
            t10.bar(),
        ];
        const T_BAR: [usize; 11] = [2, 1, 4, 3, 5, 7, 6, 9, 8, 11, 10];
        for (k, t) in ts.into_iter().enumerate() {
            entries.push(CatalogEntry {
                name: format!("T{}", k + 1),
                poly: t,
                kind: Kind::Perfect,
                mersenne_params: None,
                two_mersenne_params: None,
                bar_partner: format!("T{}", T_BAR[k]),
            });
        }

        let by_bits = entries.iter().enumerate().map(|(i, e)| (e.poly.clone(), i)).collect();
        let cat = Catalog { entries, by_bits };
        let report = cat.self_check();
        assert!(report.is_ok(), "catalog self-check failed: {:?}", report.failures);
        cat
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// `M_i`, `i` in 1..=13.
    pub fn mersenne(&self, i: usize) -> &CatalogEntry {
        assert!((1..=M_COUNT).contains(&i));
        &self.entries[i - 1]
    }

    /// `S_j`, `j` in 1..=15.
    pub fn two_mersenne(&self, j: usize) -> &CatalogEntry {
        assert!((1..=S_COUNT).contains(&j));
        &self.entries[M_COUNT + j - 1]
    }

    /// `T_k`, `k` in 1..=11.
    pub fn perfect_entry(&self, k: usize) -> &CatalogEntry {
        assert!((1..=T_COUNT).contains(&k));
        &self.entries[M_COUNT + S_COUNT + k - 1]
    }

    pub fn mersennes(&self) -> &[CatalogEntry] {
        &self.entries[..M_COUNT]
    }

    pub fn two_mersennes(&self) -> &[CatalogEntry] {
        &self.entries[M_COUNT..M_COUNT + S_COUNT]
    }

    pub fn perfect(&self) -> &[CatalogEntry] {
        &self.entries[M_COUNT + S_COUNT..]
    }

    pub fn f1(&self) -> Vec<Poly> {
        self.mersennes().iter().map(|e| e.poly.clone()).collect()
    }

    pub fn f2(&self) -> Vec<Poly> {
        self.two_mersennes().iter().map(|e| e.poly.clone()).collect()
    }

    /// `F = F1 ∪ F2`
    pub fn family(&self) -> Vec<Poly> {
        let mut f = self.f1();
        f.extend(self.f2());
        f
    }

    pub fn degree_sum(&self) -> usize {
        self.entries[..M_COUNT + S_COUNT].iter().map(|e| e.poly.degree().unwrap_or(0)).sum()
    }

    pub fn by_name(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name.eq_ignore_ascii_case(name))
    }

    /// Position in catalog order (M's, then S's, then T's).
    pub fn index_of(&self, p: &Poly) -> Option<usize> {
        self.by_bits.get(p).copied()
    }

    pub fn name_of(&self, p: &Poly) -> Option<&str> {
        self.by_bits.get(p).map(|&i| self.entries[i].name.as_str())
    }

    /// Catalog name when known, canonical text otherwise.
    pub fn label(&self, p: &Poly) -> String {
        match self.name_of(p) {
            Some(n) => n.to_string(),
            None => p.to_string(),
        }
    }

    /// FactorMap rendered with catalog names, e.g. `x^2 * M1 * S4`.
    pub fn label_factors(&self, f: &FactorMap) -> String {
        if f.is_empty() {
            return "1".into();
        }
        f.iter()
            .map(|(p, e)| {
                let base = if *p == Poly::x() || self.name_of(p).is_some() {
                    self.label(p)
                } else {
                    format!("({p})")
                };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }

    /// Rechecks every stored invariant without panicking.
    pub fn self_check(&self) -> CatalogReport {
        let mut failures = Vec::new();
        let mut irreducible = 0;
        let mut perfect = 0;
        for e in &self.entries {
            match e.kind {
                Kind::Mersenne | Kind::TwoMersenne => {
                    if factor::is_irreducible(&e.poly).unwrap_or(false) {
                        irreducible += 1;
                    } else {
                        failures.push(format!("{} is not irreducible", e.name));
                    }
                    let rebuilt = match (e.mersenne_params, e.two_mersenne_params) {
                        (Some((a, b)), _) => split_poly(a, b).add(&Poly::one()),
                        (_, Some((a, b, c))) => q_abc(&self.entries[0].poly, a, b, c),
                        _ => Poly::zero(),
                    };
                    if rebuilt != e.poly {
                        failures.push(format!("{} does not match its parameters", e.name));
                    }
                }
                Kind::Perfect => {
                    if sigma::is_perfect(&e.poly).unwrap_or(false) {
                        perfect += 1;
                    } else {
                        failures.push(format!("{} is not perfect", e.name));
                    }
                }
            }
            match self.entries.iter().find(|p| p.name == e.bar_partner) {
                Some(p) if p.poly == e.poly.bar() => {}
                _ => failures.push(format!("bar({}) is not {}", e.name, e.bar_partner)),
            }
        }
        CatalogReport { irreducible, perfect, degree_sum: self.degree_sum(), failures }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub irreducible: usize,
    pub perfect: usize,
    pub degree_sum: usize,
    pub failures: Vec<String>,
}

pub const DEGREE_SUM: usize = 184;

impl CatalogReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
            && self.irreducible == M_COUNT + S_COUNT
            && self.perfect == T_COUNT
            && self.degree_sum == DEGREE_SUM
    }

    pub fn summary(&self) -> String {
        format!(
            "{} primes irreducible, {} perfect, degree-sum {}",
            self.irreducible, self.perfect, self.degree_sum
        )
    }
}

pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(Catalog::build)
}

pub fn catalog_constants() -> &'static [CatalogEntry] {
    catalog().entries()
}

/// `[[a1,b1],...,[ar,br]]` together with its length `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub pairs: Vec<(u64, u64)>,
    pub length: usize,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.pairs.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
        write!(f, "[{}] length={}", body.join(","), self.length)
    }
}

fn ensure_odd(p: &Poly, op: &'static str) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroInput(op));
    }
    if p.degree() == Some(0) {
        return Err(Error::ConstantInput(op));
    }
    if !p.is_odd() {
        return Err(Error::EvenInput { op, poly: p.to_string() });
    }
    Ok(())
}

/// One step: `1 + p = x^a (x+1)^b q`; returns `(a, b, q)`.
fn peel(p: &Poly) -> (u64, u64, Poly) {
    let s = p.add(&Poly::one());
    let a = s.val_x().expect("odd input of positive degree");
    let s = s.shr(a);
    let b = s.val_x1().expect("nonzero");
    let q = s.div_exact(&Poly::x_plus_one().pow_nonzero_exp(b as u64)).expect("valuation divides");
    (a as u64, b as u64, q)
}

pub fn representation(p: &Poly) -> Result<Representation> {
    ensure_odd(p, "representation")?;
    let mut pairs = Vec::new();
    let mut cur = p.clone();
    while !cur.is_one() {
        let (a, b, next) = peel(&cur);
        pairs.push((a, b));
        cur = next;
    }
    let length = pairs.len();
    Ok(Representation { pairs, length })
}

pub fn length(p: &Poly) -> Result<usize> {
    representation(p).map(|r| r.length)
}

/// `P = 1 + x^a (x+1)^b M^c` with `M` Mersenne and `a, b, c >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoMersenneShape {
    pub a: u64,
    pub b: u64,
    pub base: Poly,
    pub c: u64,
}

/// Recognizes the shape `1 + x^a (x+1)^b M^c` directly from the cofactor of
/// the first step, whatever the length of `P`.
pub fn two_mersenne_shape(p: &Poly) -> Result<Option<TwoMersenneShape>> {
    ensure_odd(p, "two_mersenne_shape")?;
    let (a, b, q) = peel(p);
    if q.is_one() {
        return Ok(None);
    }
    let fm = factor::factor_full(&q)?;
    if fm.omega() != 1 {
        return Ok(None);
    }
    let (base, c) = fm.entries()[0].clone();
    if length(&base)? != 1 {
        return Ok(None);
    }
    Ok(Some(TwoMersenneShape { a, b, base, c }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// The `k` of k-Mersenne (the length).
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mersenne_params: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_mersenne: Option<TwoMersenneShape>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-mersenne", self.k)?;
        if let Some((a, b)) = self.mersenne_params {
            write!(f, " a={a} b={b}")?;
        }
        if let Some(s) = &self.two_mersenne {
            let cat = catalog();
            write!(f, " a={} b={} M={} c={}", s.a, s.b, cat.label(&s.base), s.c)?;
        }
        Ok(())
    }
}

pub fn classify(p: &Poly) -> Result<Classification> {
    let rep = representation(p)?;
    let mut out = Classification { k: rep.length, mersenne_params: None, two_mersenne: None };
    match rep.length {
        1 => out.mersenne_params = Some(rep.pairs[0]),
        2 => out.two_mersenne = two_mersenne_shape(p)?,
        _ => {}
    }
    Ok(out)
}

/// Outcome of one admissibility condition with its evidence.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionTrace {
    pub holds: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// `Some(n)` when a fixed budget was requested, `None` for the degree rule.
    pub budget_override: Option<u64>,
    pub cond_i: ConditionTrace,
    pub cond_ii: ConditionTrace,
    pub cond_iii: ConditionTrace,
}

/// `floor(total / (2 deg s))` with `total` the degree sum of `G ∪ F`.
pub fn default_budget(family: &[Poly], s: &Poly) -> u64 {
    let mut all: Vec<Poly> = catalog().family();
    all.extend(family.iter().cloned());
    all.sort();
    all.dedup();
    let total: usize = all.iter().map(|p| p.degree().unwrap_or(0)).sum();
    (total / (2 * s.degree().unwrap_or(1).max(1))) as u64
}

pub fn is_admissible(family: &[Poly], h_budget: Option<u64>) -> Result<AdmissibilityReport> {
    for p in family {
        ensure_odd(p, "is_admissible")?;
        if !factor::is_irreducible(p)? {
            return Err(Error::Reducible { op: "is_admissible", poly: p.to_string() });
        }
    }
    if h_budget == Some(0) {
        return Err(Error::InvalidArgument("h_budget must be at least 1".into()));
    }
    let mut fam: Vec<Poly> = family.to_vec();
    fam.sort();
    fam.dedup();
    let cat = catalog();
    let budget = |s: &Poly| h_budget.unwrap_or_else(|| default_budget(&fam, s));

    let mut w1 = Vec::new();
    let mut ok1 = true;
    for t in &fam {
        let star = t.star()?;
        let bar = t.bar();
        if fam.contains(&star) {
            w1.push(format!("{}* = {}", cat.label(t), cat.label(&star)));
        } else if fam.contains(&bar) {
            w1.push(format!("bar({}) = {}", cat.label(t), cat.label(&bar)));
        } else {
            ok1 = false;
            w1.push(format!("{}: neither reciprocal nor conjugate in family", cat.label(t)));
        }
    }

    let mut w2 = Vec::new();
    let hb = budget(&Poly::x());
    'outer: for h in 1..=hb {
        for base in [Poly::x(), Poly::x_plus_one()] {
            let s = sigma::sigma_of_prime_power_unchecked(&base, 2 * h);
            if let Some(fm) = factor::factor_over_family(&s, &fam)? {
                w2.push(format!("sigma({}^{}) = {}", cat.label(&base), 2 * h, cat.label_factors(&fm)));
                break 'outer;
            }
        }
    }
    let ok2 = !w2.is_empty();
    if !ok2 {
        w2.push(format!("no h <= {hb}"));
    }

    let mut ext = fam.clone();
    ext.push(Poly::x());
    ext.push(Poly::x_plus_one());
    let mut w3 = Vec::new();
    let mut ok3 = true;
    for t in &fam {
        let one_plus = t.add(&Poly::one());
        if let Some(fm) = factor::factor_over_family(&one_plus, &ext)? {
            w3.push(format!("1+{} = {}", cat.label(t), cat.label_factors(&fm)));
            continue;
        }
        let hb = budget(t);
        let found = (1..=hb).find_map(|h| {
            let s = sigma::sigma_of_prime_power_unchecked(t, 2 * h);
            factor::divide_out(&s, &ext.iter().collect::<Vec<_>>()).map(|fm| (h, fm))
        });
        match found {
            Some((h, fm)) => {
                w3.push(format!("sigma({}^{}) = {}", cat.label(t), 2 * h, cat.label_factors(&fm)))
            }
            None => {
                ok3 = false;
                w3.push(format!("{}: no witness with h <= {hb}", cat.label(t)));
            }
        }
    }

    Ok(AdmissibilityReport {
        admissible: ok1 || ok2 || ok3,
        budget_override: h_budget,
        cond_i: ConditionTrace { holds: ok1, witnesses: w1 },
        cond_ii: ConditionTrace { holds: ok2, witnesses: w2 },
        cond_iii: ConditionTrace { holds: ok3, witnesses: w3 },
    })
}
