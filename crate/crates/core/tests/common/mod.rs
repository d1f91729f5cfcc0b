//! Independent reference arithmetic on `u128` bit patterns, used as test
//! oracles. Nothing here calls into the library's arithmetic.
#![allow(dead_code)]

use binperf::Poly;

pub fn deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

pub fn mul(a: u128, b: u128) -> u128 {
    let mut r = 0;
    for i in 0..128 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    r
}

pub fn divmod(mut a: u128, b: u128) -> (u128, u128) {
    assert!(b != 0);
    let db = deg(b);
    let mut q = 0;
    while a != 0 && deg(a) >= db {
        let s = deg(a) - db;
        q ^= 1 << s;
        a ^= b << s;
    }
    (q, a)
}

/// Irreducibility by trial division over every polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(a: u128) -> bool {
    let d = deg(a);
    if d < 1 {
        return false;
    }
    for cand in 2u128..(1 << (d / 2 + 1)) {
        if divmod(a, cand).1 == 0 {
            return false;
        }
    }
    true
}

/// All irreducibles of degree `<= max_deg`, increasing.
pub fn irreducibles(max_deg: i32) -> Vec<u128> {
    (2u128..(1 << (max_deg + 1))).filter(|&p| is_irreducible(p)).collect()
}

/// Factorization by trial division with `primes` (increasing).
pub fn trial_factor(mut a: u128, primes: &[u128]) -> Vec<(u128, u64)> {
    let mut out = Vec::new();
    for &p in primes {
        if deg(p) > deg(a) {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = divmod(a, p);
            if r != 0 {
                break;
            }
            a = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    assert_eq!(a, 1, "prime list too short");
    out
}

/// Sum of all divisors by pairing `d` with `a / d` for `deg d <= deg a / 2`.
pub fn naive_sigma(a: u128) -> u128 {
    let n = deg(a);
    let mut s = 0;
    for d in 1u128..(1 << (n / 2 + 1)) {
        let (q, r) = divmod(a, d);
        if r != 0 {
            continue;
        }
        s ^= d;
        // cofactors of degree <= n/2 are reached by the scan themselves
        if deg(q) > n / 2 {
            s ^= q;
        }
    }
    s
}

pub fn to_poly(a: u128) -> Poly {
    Poly::from_u128(a)
}

pub fn from_poly(p: &Poly) -> u128 {
    p.to_u128().expect("fits in 128 bits")
}
