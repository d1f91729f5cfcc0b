use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, q_abc};
use crate::error::Result;
use crate::factor;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StarClass {
    Mersenne,
    SelfReciprocal,
    TwoMersenneOverM1,
    Outside,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocalEntry {
    pub abc: (u64, u64, u64),
    pub poly: Poly,
    pub label: String,
    pub star: Poly,
    pub star_label: String,
    pub class: StarClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocalReport {
    pub max_abc: u64,
    pub entries: Vec<ReciprocalEntry>,
    /// Labels of `Q` whose reciprocal is Mersenne.
    pub star_mersenne: Vec<String>,
    pub self_reciprocal: Vec<String>,
    /// Unordered pairs `{Q, Q*}` of distinct 2-Mersenne primes over `M1`.
    pub star_pairs: Vec<(String, String)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn classify_star(q: &Poly, star: &Poly, m1: &Poly) -> Result<StarClass> {
    if star == q {
        return Ok(StarClass::SelfReciprocal);
    }
    if catalog::length(star)? == 1 {
        return Ok(StarClass::Mersenne);
    }
    Ok(match catalog::two_mersenne_shape(star)? {
        Some(s) if s.base == *m1 => StarClass::TwoMersenneOverM1,
        _ => StarClass::Outside,
    })
}

/// Irreducible `1 + x^a (x+1)^b M1^c` for `a, b, c <= max_abc` with
/// `gcd(a, b, c) = 1`, classified by their reciprocals.
pub fn explore_reciprocal(max_abc: u64) -> Result<ReciprocalReport> {
    let cat = catalog::catalog();
    let m1 = cat.mersenne(1).poly.clone();
    let mut triples = Vec::new();
    for a in 1..=max_abc {
        for b in 1..=max_abc {
            for c in 1..=max_abc {
                if gcd(gcd(a, b), c) == 1 {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let found: Vec<Option<ReciprocalEntry>> = triples
        .par_iter()
        .map(|&(a, b, c)| -> Result<Option<ReciprocalEntry>> {
            let q = q_abc(&m1, a, b, c);
            if !factor::is_irreducible(&q)? {
                return Ok(None);
            }
            let star = q.star()?;
            let class = classify_star(&q, &star, &m1)?;
            Ok(Some(ReciprocalEntry {
                abc: (a, b, c),
                label: cat.label(&q),
                star_label: cat.label(&star),
                poly: q,
                star,
                class,
            }))
        })
        .collect::<Result<_>>()?;
    let entries: Vec<ReciprocalEntry> = found.into_iter().flatten().collect();

    // catalog order first, then unnamed polynomials in canonical order
    let key = |p: &Poly| (cat.index_of(p).unwrap_or(usize::MAX), p.clone());
    let pick = |cls: StarClass| -> Vec<String> {
        let mut hits: Vec<&ReciprocalEntry> = entries.iter().filter(|e| e.class == cls).collect();
        hits.sort_by_key(|e| key(&e.poly));
        hits.into_iter().map(|e| e.label.clone()).collect()
    };
    let star_mersenne = pick(StarClass::Mersenne);
    let self_reciprocal = pick(StarClass::SelfReciprocal);
    let mut star_pairs: Vec<(String, String)> = Vec::new();
    for e in entries.iter().filter(|e| e.class == StarClass::TwoMersenneOverM1) {
        let (lo, hi) = if key(&e.poly) <= key(&e.star) { (&e.poly, &e.star) } else { (&e.star, &e.poly) };
        let pair = (cat.label(lo), cat.label(hi));
        if !star_pairs.contains(&pair) {
            star_pairs.push(pair);
        }
    }
    star_pairs.sort_by_key(|(a, _)| cat.by_name(a).map(|e| key(&e.poly)));
    Ok(ReciprocalReport { max_abc, entries, star_mersenne, self_reciprocal, star_pairs })
}
