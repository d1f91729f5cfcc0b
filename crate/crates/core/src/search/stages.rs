use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::poly::Poly;
use crate::sigma::{self, ExponentTuple, SMALL_ODD_DOMAIN, U1_DOMAIN, U_DOMAIN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    One,
    Two,
    Three,
    Final,
}

impl Stage {
    /// Published size of each stage's output.
    pub fn expected_count(self) -> usize {
        match self {
            Stage::One => 10944,
            Stage::Two => 4484,
            Stage::Three => 44,
            Stage::Final => 6,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::One => "1",
            Stage::Two => "2",
            Stage::Three => "3",
            Stage::Final => "final",
        })
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "1" => Ok(Stage::One),
            "2" => Ok(Stage::Two),
            "3" => Ok(Stage::Three),
            "final" => Ok(Stage::Final),
            _ => Err(Error::InvalidArgument(format!("unknown stage `{s}` (expected 1, 2, 3 or final)"))),
        }
    }
}

impl Serialize for Stage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchConfig {
    /// Also require `u >= 3 or v >= 3` at stage 1.
    pub require_uv: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum StageItems {
    Tuples(Vec<Vec<u64>>),
    Polys(Vec<Poly>),
}

impl StageItems {
    pub fn len(&self) -> usize {
        match self {
            StageItems::Tuples(t) => t.len(),
            StageItems::Polys(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Survivors after a cumulative filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterCount {
    pub stage: String,
    pub filter: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageResult {
    pub stage: Stage,
    pub count: usize,
    pub expected: usize,
    pub items: StageItems,
    pub filters: Vec<FilterCount>,
}

impl StageResult {
    pub fn matches_expected(&self) -> bool {
        self.count == self.expected
    }

    pub fn summary_line(&self) -> String {
        format!("stage={} count={}", self.stage, self.count)
    }

    /// Marginal survivor counts of every filter applied so far.
    pub fn filter_diff(&self) -> String {
        let mut out = format!("stage {}: count {} (published {})\n", self.stage, self.count, self.expected);
        for f in &self.filters {
            out.push_str(&format!("  [stage {}] {:<52} {}\n", f.stage, f.filter, f.count));
        }
        out
    }
}

/// A stage-3 candidate together with the tuple that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub tuple: ExponentTuple,
    pub poly: Poly,
}

fn fc(stage: &str, filter: &str, count: usize) -> FilterCount {
    FilterCount { stage: stage.into(), filter: filter.into(), count }
}

fn stage1(cfg: SearchConfig) -> (Vec<ExponentTuple>, Vec<FilterCount>) {
    let mut prefixes = Vec::new();
    for n in 0..=4 {
        for &u in &U_DOMAIN {
            for m in 0..=4 {
                for &v in &U_DOMAIN {
                    prefixes.push((n, u, m, v));
                }
            }
        }
    }
    let chunks: Vec<([usize; 3], Vec<ExponentTuple>)> = prefixes
        .par_iter()
        .map(|&(n, u, m, v)| {
            let mut counts = [0usize; 3];
            let mut kept = Vec::new();
            let base = ExponentTuple { n, u, m, v, ..Default::default() };
            let (a, b) = (base.a(), base.b());
            if a < 1 || a > b {
                return (counts, kept);
            }
            let uv = u >= 3 || v >= 3;
            for n1 in 0..=4 {
                for &u1 in &U1_DOMAIN {
                    for n2 in 0..=3 {
                        for &u2 in &SMALL_ODD_DOMAIN {
                            let mut t = base;
                            t.ni[0] = n1;
                            t.ui[0] = u1;
                            t.ni[1] = n2;
                            t.ui[1] = u2;
                            counts[0] += 1;
                            let s = sigma::sigma_exponents_unchecked(&t);
                            if t.c(2) != s.gamma[1] {
                                continue;
                            }
                            counts[1] += 1;
                            if uv {
                                counts[2] += 1;
                            }
                            if uv || !cfg.require_uv {
                                kept.push(t);
                            }
                        }
                    }
                }
            }
            (counts, kept)
        })
        .collect();
    let mut totals = [0usize; 3];
    let mut out = Vec::new();
    for (c, k) in chunks {
        for i in 0..3 {
            totals[i] += c[i];
        }
        out.extend(k);
    }
    let mut filters = vec![
        fc("1", "a >= 1, a <= b", totals[0]),
        fc("1", "+ c2 = gamma2", totals[1]),
        fc("1", "+ (u >= 3 or v >= 3)", totals[2]),
    ];
    filters.push(fc("1", if cfg.require_uv { "kept (uv filter on)" } else { "kept (uv filter off)" }, out.len()));
    (out, filters)
}

/// All `(m1, v1)` with `2^m1 v1 - 1 = d`, `m1 <= 3`, `v1` in {1, 3}.
fn solve_d1(d: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::new();
    for m1 in 0..=3u32 {
        for &v1 in &SMALL_ODD_DOMAIN {
            if (1u64 << m1) * v1 - 1 == d {
                out.push((m1, v1));
            }
        }
    }
    out
}

fn stage2(s1: &[ExponentTuple]) -> (Vec<ExponentTuple>, Vec<FilterCount>) {
    let per: Vec<([usize; 3], Vec<ExponentTuple>)> = s1
        .par_iter()
        .map(|t| {
            let s = sigma::sigma_exponents_unchecked(t);
            let sols = solve_d1(s.delta[0]);
            let rest_ok = s.delta[1..].iter().all(|&d| d <= 1);
            let counts = [
                usize::from(!sols.is_empty()),
                usize::from(rest_ok),
                usize::from(rest_ok && !sols.is_empty()),
            ];
            let mut kept = Vec::new();
            if rest_ok {
                for (m1, v1) in sols {
                    let mut e = *t;
                    e.mj[0] = m1;
                    e.vj[0] = v1;
                    for j in 1..8 {
                        e.mj[j] = s.delta[j] as u32;
                    }
                    kept.push(e);
                }
            }
            (counts, kept)
        })
        .collect();
    let mut totals = [0usize; 3];
    let mut out = Vec::new();
    for (c, k) in per {
        for i in 0..3 {
            totals[i] += c[i];
        }
        out.extend(k);
    }
    let filters = vec![
        fc("2", "d1 = delta1 solvable (m1 <= 3, v1 in {1,3}) alone", totals[0]),
        fc("2", "d_j = delta_j in {0,1} for j >= 2 alone", totals[1]),
        fc("2", "both", totals[2]),
        fc("2", "18-tuples", out.len()),
    ];
    (out, filters)
}

/// `k` with `2^k - 1 = c`, `k <= 5`.
fn mersenne_log(c: u64) -> Option<u32> {
    let k = (c + 1).trailing_zeros();
    (c + 1 == 1 << k && k <= 5).then_some(k)
}

fn stage3(s2: &[ExponentTuple]) -> (Vec<Candidate>, Vec<FilterCount>) {
    let per: Vec<([usize; 3], Option<Candidate>)> = s2
        .par_iter()
        .map(|t2| {
            let mut counts = [0usize; 3];
            let mut t = *t2;
            // c3 = gamma3 = gamma2 = c2
            t.ni[2] = t.ni[1];
            t.ui[2] = t.ui[1];
            let s = sigma::sigma_exponents_unchecked(&t);
            let (Some(n4), Some(n5)) = (mersenne_log(s.gamma[3]), mersenne_log(s.gamma[4])) else {
                return (counts, None);
            };
            counts[0] = 1;
            t.ni[3] = n4;
            t.ni[4] = n5;
            let s = sigma::sigma_exponents_unchecked(&t);
            if s.alpha != t.a() {
                return (counts, None);
            }
            counts[1] = 1;
            if s.beta != t.b() {
                return (counts, None);
            }
            counts[2] = 1;
            let poly = t.materialize();
            (counts, Some(Candidate { tuple: t, poly }))
        })
        .collect();
    let mut totals = [0usize; 3];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (c, cand) in per {
        for i in 0..3 {
            totals[i] += c[i];
        }
        if let Some(cand) = cand {
            if seen.insert(cand.poly.clone()) {
                out.push(cand);
            }
        }
    }
    let filters = vec![
        fc("3", "c3 = c2, c4 = gamma4, c5 = gamma5 of form 2^k - 1", totals[0]),
        fc("3", "+ a = alpha", totals[1]),
        fc("3", "+ b = beta", totals[2]),
        fc("3", "distinct polynomials", out.len()),
    ];
    (out, filters)
}

fn final_stage(cands: &[Candidate]) -> (Vec<Poly>, Vec<FilterCount>) {
    let checked: Vec<(bool, bool)> = cands
        .par_iter()
        .map(|c| {
            let perfect = sigma::is_perfect(&c.poly).unwrap_or(false);
            let split = c.tuple.materialize() == split_part(&c.tuple);
            (perfect, !split)
        })
        .collect();
    let perfect = checked.iter().filter(|c| c.0).count();
    let out: Vec<Poly> = cands
        .iter()
        .zip(&checked)
        .filter(|(_, &(p, ns))| p && ns)
        .map(|(c, _)| c.poly.clone())
        .collect();
    let filters = vec![fc("final", "sigma(A) = A", perfect), fc("final", "+ A not splitting", out.len())];
    (out, filters)
}

fn split_part(t: &ExponentTuple) -> Poly {
    Poly::monomial(t.a() as usize).mul(&Poly::x_plus_one().pow_nonzero_exp(t.b()))
}

/// The deduplicated stage-3 candidates with their generating tuples.
pub fn stage3_candidates(cfg: SearchConfig) -> Vec<Candidate> {
    let (s1, _) = stage1(cfg);
    let (s2, _) = stage2(&s1);
    stage3(&s2).0
}

fn stage2_row(t: &ExponentTuple) -> Vec<u64> {
    let mut row = vec![t.n as u64, t.u, t.m as u64, t.v, t.ni[0] as u64, t.ui[0], t.ni[1] as u64, t.ui[1]];
    row.extend((1..=8).map(|j| t.d(j)));
    row.push(t.mj[0] as u64);
    row.push(t.vj[0]);
    row
}

/// Runs stages `1..=stage`, recomputing predecessors.
pub fn run_search(stage: Stage, cfg: SearchConfig) -> StageResult {
    let (s1, mut filters) = stage1(cfg);
    let finish = |items: StageItems, filters: Vec<FilterCount>| StageResult {
        stage,
        count: items.len(),
        expected: stage.expected_count(),
        items,
        filters,
    };
    if stage == Stage::One {
        let rows = s1
            .iter()
            .map(|t| vec![t.n as u64, t.u, t.m as u64, t.v, t.ni[0] as u64, t.ui[0], t.ni[1] as u64, t.ui[1]])
            .collect();
        return finish(StageItems::Tuples(rows), filters);
    }
    let (s2, f2) = stage2(&s1);
    filters.extend(f2);
    if stage == Stage::Two {
        return finish(StageItems::Tuples(s2.iter().map(stage2_row).collect()), filters);
    }
    let (s3, f3) = stage3(&s2);
    filters.extend(f3);
    if stage == Stage::Three {
        return finish(StageItems::Polys(s3.into_iter().map(|c| c.poly).collect()), filters);
    }
    let (fin, ff) = final_stage(&s3);
    filters.extend(ff);
    finish(StageItems::Polys(fin), filters)
}
