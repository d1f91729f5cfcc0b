use std::collections::BTreeSet;

use serde::Serialize;

use crate::poly::Poly;

/// Brute-force solutions of one identity against its predicted parameter set.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityFamily {
    pub id: &'static str,
    pub identity: &'static str,
    pub found: Vec<Vec<u64>>,
    pub missing: Vec<Vec<u64>>,
    pub unexpected: Vec<Vec<u64>>,
}

impl IdentityFamily {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub max_exp: u64,
    pub families: Vec<IdentityFamily>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.families.iter().all(IdentityFamily::ok)
    }
}

fn m1() -> Poly {
    Poly::from_u128(0b111)
}

fn x1_pow(e: u64) -> Poly {
    Poly::x_plus_one().pow_nonzero_exp(e)
}

/// `(i, j)` with `p = x^i (x+1)^j`.
fn split_exponents(p: &Poly) -> Option<(u64, u64)> {
    if p.is_zero() {
        return None;
    }
    let i = p.val_x().ok()?;
    let rest = p.shr(i);
    let j = rest.val_x1().ok()? as u64;
    (rest == x1_pow(j)).then_some((i as u64, j))
}

fn powers_of_two(limit: u64) -> impl Iterator<Item = u64> {
    (0..64).map(|r| 1u64 << r).take_while(move |&p| p <= limit)
}

fn family(
    id: &'static str,
    identity: &'static str,
    found: BTreeSet<Vec<u64>>,
    expected: BTreeSet<Vec<u64>>,
) -> IdentityFamily {
    IdentityFamily {
        id,
        identity,
        missing: expected.difference(&found).cloned().collect(),
        unexpected: found.difference(&expected).cloned().collect(),
        found: found.into_iter().collect(),
    }
}

/// Exhausts every free exponent in `1..=max_exp` for the five split
/// identities; the exponents on the other side are read off the result.
pub fn verify_split_identities(max_exp: u64) -> IdentityReport {
    let n = max_exp;
    let m1 = m1();
    let one = Poly::one();
    let mut families = Vec::new();

    // 1 + M1^a = x^b (x+1)^c
    let mut found = BTreeSet::new();
    let mut m1_pows = vec![Poly::one()];
    for a in 1..=n {
        let next = m1_pows[a as usize - 1].mul(&m1);
        m1_pows.push(next);
    }
    for a in 1..=n {
        if let Some((b, c)) = split_exponents(&m1_pows[a as usize].add(&one)) {
            found.insert(vec![a, b, c]);
        }
    }
    let expected = powers_of_two(n).map(|p| vec![p, p, p]).collect();
    families.push(family("i", "1+(x^2+x+1)^a = x^b(x+1)^c", found, expected));

    // (x+1)^a + M1^b = x^c
    let x1_pows: Vec<Poly> = (0..=n).map(x1_pow).collect();
    let mut found = BTreeSet::new();
    for a in 1..=n {
        for b in 1..=n {
            let s = x1_pows[a as usize].add(&m1_pows[b as usize]);
            if s.weight() == 1 {
                found.insert(vec![a, b, s.degree().unwrap() as u64]);
            }
        }
    }
    let mut expected = BTreeSet::new();
    for p in powers_of_two(n) {
        expected.insert(vec![p, p, 2 * p]);
        if 2 * p <= n {
            expected.insert(vec![2 * p, p, p]);
        }
        if 3 * p <= n {
            expected.insert(vec![3 * p, p, 3 * p]);
        }
    }
    families.push(family("ii", "(x+1)^a+(x^2+x+1)^b = x^c", found, expected));

    // (x+1)^a M1^b = 1 + x^c
    let mut found = BTreeSet::new();
    for a in 1..=n {
        for b in 1..=n {
            let s = x1_pows[a as usize].mul(&m1_pows[b as usize]).add(&one);
            if s.weight() == 1 {
                found.insert(vec![a, b, s.degree().unwrap() as u64]);
            }
        }
    }
    let expected = powers_of_two(n).map(|p| vec![p, p, 3 * p]).collect();
    families.push(family("iii", "(x+1)^a(x^2+x+1)^b = 1+x^c", found, expected));

    // (x+1)^a + (x+1)^b = x^c (x+1)^d, a <= b
    let mut found = BTreeSet::new();
    for a in 1..=n {
        for b in a..=n {
            if let Some((c, d)) = split_exponents(&x1_pows[a as usize].add(&x1_pows[b as usize])) {
                found.insert(vec![a, b, c, d]);
            }
        }
    }
    let mut expected = BTreeSet::new();
    for a in 1..=n {
        for p in powers_of_two(n) {
            if a + p <= n {
                expected.insert(vec![a, a + p, p, a]);
            }
        }
    }
    families.push(family("iv", "(x+1)^a+(x+1)^b = x^c(x+1)^d, a <= b", found, expected));

    // 1 + (x+1)^a = x^b M1^c
    let mut found = BTreeSet::new();
    for a in 1..=n {
        let s = x1_pows[a as usize].add(&one);
        let b = s.val_x().expect("nonzero");
        let mut rest = s.shr(b);
        let mut c = 0u64;
        while let Some(q) = rest.div_exact(&m1) {
            rest = q;
            c += 1;
        }
        if rest.is_one() {
            found.insert(vec![a, b as u64, c]);
        }
    }
    let mut expected = BTreeSet::new();
    for p in powers_of_two(n) {
        expected.insert(vec![p, p, 0]);
        if 3 * p <= n {
            expected.insert(vec![3 * p, p, p]);
        }
    }
    families.push(family("v", "1+(x+1)^a = x^b(x^2+x+1)^c", found, expected));

    IdentityReport { max_exp, families }
}
