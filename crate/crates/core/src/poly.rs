//! Dense polynomials over GF(2).
//!
//! Coefficients are packed little-endian into `u64` words: bit `i` of the
//! vector is the coefficient of `x^i`. Values are always normalized (no zero
//! high words), so the zero polynomial is the empty vector and structural
//! equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{self, MulKernel};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    words: Vec<u64>,
}

fn normalize(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    pub fn x() -> Self {
        Poly { words: vec![2] }
    }

    pub fn x_plus_one() -> Self {
        Poly { words: vec![3] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Poly { words }
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        normalize(&mut words);
        Poly { words }
    }

    /// Polynomial from the integer whose bit `i` is the coefficient of `x^i`.
    pub fn from_u128(bits: u128) -> Self {
        Poly::from_words(vec![bits as u64, (bits >> 64) as u64])
    }

    /// Sum of `x^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut words = Vec::new();
        for e in exps {
            if words.len() <= e / 64 {
                words.resize(e / 64 + 1, 0);
            }
            words[e / 64] ^= 1 << (e % 64);
        }
        Poly::from_words(words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Value as an integer, if it fits in 128 bits.
    pub fn to_u128(&self) -> Option<u128> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0] as u128),
            2 => Some(self.words[0] as u128 | (self.words[1] as u128) << 64),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    /// Exponents with a nonzero coefficient, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate().rev() {
            let mut w = w;
            while w != 0 {
                let top = 63 - w.leading_zeros() as usize;
                out.push(wi * 64 + top);
                w ^= 1 << top;
            }
        }
        out
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Value at `x = 1`.
    pub fn eval_at_one(&self) -> bool {
        self.weight() % 2 == 1
    }

    /// Value at `x = 0`.
    pub fn eval_at_zero(&self) -> bool {
        self.coeff(0)
    }

    /// Odd means nonzero with no linear factor, i.e. no root in GF(2).
    pub fn is_odd(&self) -> bool {
        self.eval_at_zero() && self.eval_at_one()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Poly::from_words(words)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_with(other, kernel::default_kernel())
    }

    pub fn mul_with(&self, other: &Poly, kernel: &dyn MulKernel) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        Poly::from_words(kernel.mul_words(&self.words, &other.words))
    }

    /// `self^2`, computed by spreading bits (`A(x)^2 = A(x^2)`).
    pub fn square(&self) -> Poly {
        let mut words = Vec::with_capacity(self.words.len() * 2);
        for &w in &self.words {
            words.push(spread(w as u32));
            words.push(spread((w >> 32) as u32));
        }
        Poly::from_words(words)
    }

    /// Square root, when every odd-index coefficient is zero.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.words.iter().any(|w| w & 0xAAAA_AAAA_AAAA_AAAA != 0) {
            return None;
        }
        let mut words = vec![0u64; self.words.len().div_ceil(2)];
        for (i, &w) in self.words.iter().enumerate() {
            let half = compress(w) as u64;
            words[i / 2] |= half << (32 * (i % 2));
        }
        Some(Poly::from_words(words))
    }

    pub fn pow(&self, exp: u64) -> Result<Poly> {
        if exp == 0 {
            if self.is_zero() {
                return Err(Error::ZeroToZero);
            }
            return Ok(Poly::one());
        }
        Ok(self.pow_nonzero_exp(exp))
    }

    pub(crate) fn pow_nonzero_exp(&self, exp: u64) -> Poly {
        let mut result = Poly::one();
        for bit in (0..64 - exp.leading_zeros()).rev() {
            result = result.square();
            if exp >> bit & 1 == 1 {
                result = result.mul(self);
            }
        }
        result
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.words.clone();
        let mut quot = vec![0u64; (nd - dd) / 64 + 1];
        for i in (dd..=nd).rev() {
            if rem[i / 64] >> (i % 64) & 1 == 1 {
                let shift = i - dd;
                quot[shift / 64] |= 1 << (shift % 64);
                xor_shifted_into(&mut rem, &divisor.words, shift);
            }
        }
        Ok((Poly::from_words(quot), Poly::from_words(rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok(Poly::zero());
        };
        if nd < dd {
            return Ok(self.clone());
        }
        let mut rem = self.words.clone();
        for i in (dd..=nd).rev() {
            if rem[i / 64] >> (i % 64) & 1 == 1 {
                xor_shifted_into(&mut rem, &divisor.words, i - dd);
            }
        }
        Ok(Poly::from_words(rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_ok_and(|r| r.is_zero())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// Formal derivative: the coefficient of `x^(i-1)` is `i * c_i mod 2`.
    pub fn derivative(&self) -> Poly {
        // odd positions 2k+1 move to 2k, always within the same word
        Poly::from_words(self.words.iter().map(|w| (w & 0xAAAA_AAAA_AAAA_AAAA) >> 1).collect())
    }

    /// Conjugate: the substitution `x -> x + 1`.
    pub fn bar(&self) -> Poly {
        let Some(deg) = self.degree() else {
            return Poly::zero();
        };
        // Horner: acc <- acc * (x + 1) + c_i
        let mut acc = vec![0u64; deg / 64 + 1];
        for i in (0..=deg).rev() {
            let mut carry = 0u64;
            for w in acc.iter_mut() {
                let v = *w;
                *w = v ^ ((v << 1) | carry);
                carry = v >> 63;
            }
            if self.coeff(i) {
                acc[0] ^= 1;
            }
        }
        Poly::from_words(acc)
    }

    /// Reciprocal `x^deg * P(1/x)`: the coefficient string reversed down to
    /// the lowest set bit.
    pub fn star(&self) -> Result<Poly> {
        let deg = self.degree().ok_or(Error::ZeroInput("star"))?;
        let low = self.val_x()?;
        Ok(Poly::from_exponents(
            self.exponents().into_iter().map(|e| deg - e).filter(|&e| e <= deg - low),
        ))
    }

    /// Multiplicity of `x` as a factor.
    pub fn val_x(&self) -> Result<usize> {
        let (i, w) = self
            .words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .ok_or(Error::ZeroInput("val_x"))?;
        Ok(i * 64 + w.trailing_zeros() as usize)
    }

    /// Multiplicity of `x + 1` as a factor.
    pub fn val_x1(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroInput("val_x1"));
        }
        self.bar().val_x()
    }

    /// Shift right by `k` bits (exact division by `x^k` when `k <= val_x`).
    pub fn shr(&self, k: usize) -> Poly {
        let (ws, bs) = (k / 64, k % 64);
        if ws >= self.words.len() {
            return Poly::zero();
        }
        let src = &self.words[ws..];
        let words = (0..src.len())
            .map(|i| {
                let hi = if bs == 0 { 0 } else { src.get(i + 1).map_or(0, |w| w << (64 - bs)) };
                (src[i] >> bs) | hi
            })
            .collect();
        Poly::from_words(words)
    }

    /// Multiply by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut words = vec![0u64; self.words.len() + k / 64 + 1];
        xor_shifted_into(&mut words, &self.words, k);
        Poly::from_words(words)
    }

    /// Lowercase hex of the little-endian coefficient integer.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".to_string();
        }
        let mut s = String::from("0x");
        let top = self.words.len() - 1;
        s.push_str(&format!("{:x}", self.words[top]));
        for w in self.words[..top].iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    /// Parse either the term grammar (`x^9+x^8+1`) or hex (`0x301`).
    pub fn parse(text: &str) -> Result<Poly> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        if trimmed.is_empty() {
            return Err(Error::Parse { offset: 0, msg: "empty input".into() });
        }
        if let Some(hex) = trimmed.strip_prefix("0x").or_else(|| trimmed.strip_prefix("0X")) {
            return parse_hex(hex, lead + 2);
        }
        parse_terms(text)
    }
}

fn parse_hex(hex: &str, base: usize) -> Result<Poly> {
    if hex.is_empty() {
        return Err(Error::Parse { offset: base, msg: "missing hex digits".into() });
    }
    let mut words = vec![0u64; hex.len().div_ceil(16)];
    for (k, (off, ch)) in hex.char_indices().rev().enumerate() {
        let d = ch.to_digit(16).ok_or_else(|| Error::Parse {
            offset: base + off,
            msg: format!("invalid hex digit `{ch}`"),
        })? as u64;
        words[k / 16] |= d << (4 * (k % 16));
    }
    Ok(Poly::from_words(words))
}

fn parse_terms(text: &str) -> Result<Poly> {
    let mut exps = Vec::new();
    let mut offset = 0usize;
    for raw in text.split('+') {
        let lead = raw.len() - raw.trim_start().len();
        let term = raw.trim();
        let at = offset + lead;
        let err = |msg: String| Error::Parse { offset: at, msg };
        match term {
            "" => return Err(err("empty term".into())),
            "0" => {}
            "1" => exps.push(0),
            "x" => exps.push(1),
            _ => {
                let digits = term
                    .strip_prefix("x^")
                    .ok_or_else(|| err(format!("malformed term `{term}`")))?;
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err(format!("malformed exponent in `{term}`")));
                }
                let k: usize = digits
                    .parse()
                    .map_err(|_| err(format!("exponent too large in `{term}`")))?;
                if k < 2 {
                    return Err(err(format!("write `{}` instead of `{term}`", if k == 0 { "1" } else { "x" })));
                }
                if k > 1 << 24 {
                    return Err(err(format!("exponent too large in `{term}`")));
                }
                exps.push(k);
            }
        }
        offset += raw.len() + 1;
    }
    Ok(Poly::from_exponents(exps))
}

fn xor_shifted_into(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    if bs == 0 {
        for (i, &s) in src.iter().enumerate() {
            dst[ws + i] ^= s;
        }
        return;
    }
    let mut carry = 0u64;
    for (i, &s) in src.iter().enumerate() {
        dst[ws + i] ^= (s << bs) | carry;
        carry = s >> (64 - bs);
    }
    if carry != 0 {
        dst[ws + src.len()] ^= carry;
    }
}

fn spread(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

fn compress(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

/// Canonical order: by degree, then by little-endian coefficient value.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in self.exponents() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Poly::parse(s)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Poly::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("x^2+x+1").exponents(), vec![2, 1, 0]);
        assert_eq!(p("1"), Poly::one());
        assert_eq!(p("1").degree(), Some(0));
        assert_eq!(p("x^9+x^8+1").to_string(), "x^9+x^8+1");
        assert_eq!(p("1+x+x^2").to_string(), "x^2+x+1");
        assert_eq!(p("x+x+1"), Poly::one());
        assert_eq!(p("x+x").to_string(), "0");
        assert_eq!(p("0"), Poly::zero());
        assert_eq!(p(" x^3 + 1 ").to_string(), "x^3+1");
    }

    #[test]
    fn parse_hex_form() {
        assert_eq!(p("0x7"), p("x^2+x+1"));
        assert_eq!(p("0x301"), p("x^9+x^8+1"));
        assert_eq!(p("x^9+x^8+1").to_hex(), "0x301");
        let big = Poly::monomial(130).add(&Poly::one());
        assert_eq!(p(&big.to_hex()), big);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert!(matches!(Poly::parse(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(Poly::parse("x^2+"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(Poly::parse("x^2+y"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(Poly::parse("x^1"), Err(Error::Parse { .. })));
        assert!(matches!(Poly::parse("x^"), Err(Error::Parse { .. })));
        assert!(matches!(Poly::parse("0xg1"), Err(Error::Parse { offset: 2, .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let m2 = p("x^3+x+1");
        let m3 = p("x^3+x^2+1");
        assert_eq!(m2.mul(&m3).to_string(), "x^6+x^5+x^4+x^3+x^2+x+1");
        assert!(m2.add(&m2).is_zero());
        let (q, r) = p("x^3+1").divrem(&p("x+1")).unwrap();
        assert_eq!(q, p("x^2+x+1"));
        assert!(r.is_zero());
        assert_eq!(p("x^2+x+1").derivative(), Poly::one());
        assert_eq!(p("x^5+x^4+x").derivative(), p("x^4+1"));
        assert_eq!(p("x^4+x^2").derivative(), Poly::zero());
        assert_eq!(Poly::monomial(65).derivative(), Poly::monomial(64));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(p("x").divrem(&Poly::zero()), Err(Error::DivisionByZero));
        assert_eq!(p("x").rem(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn pow_rules() {
        assert_eq!(Poly::zero().pow(0), Err(Error::ZeroToZero));
        assert_eq!(Poly::zero().pow(3).unwrap(), Poly::zero());
        assert_eq!(p("x+1").pow(0).unwrap(), Poly::one());
        assert_eq!(p("x+1").pow(4).unwrap(), p("x^4+1"));
        assert_eq!(p("x+1").pow(3).unwrap(), p("x^3+x^2+x+1"));
    }

    #[test]
    fn transforms() {
        // M4 -> M5 under the conjugate
        assert_eq!(p("x^4+x^3+x^2+x+1").bar(), p("x^4+x^3+1"));
        assert_eq!(p("x^4+x+1").star().unwrap(), p("x^4+x^3+1"));
        let m7 = p("x^7+x^3+1");
        assert_eq!(m7.bar().bar(), m7);
        assert_eq!(Poly::zero().star(), Err(Error::ZeroInput("star")));
        assert_eq!(p("x^5+x^2").star().unwrap(), p("x^3+1"));
    }

    #[test]
    fn valuations() {
        assert_eq!(p("x^5+x^2").val_x().unwrap(), 2);
        assert_eq!(Poly::one().val_x().unwrap(), 0);
        let f = p("x^4+x");
        assert_eq!((f.val_x().unwrap(), f.val_x1().unwrap()), (1, 1));
        assert!(Poly::zero().val_x().is_err());
        assert!(Poly::zero().val_x1().is_err());
        assert_eq!(Poly::monomial(70).val_x().unwrap(), 70);
    }

    #[test]
    fn square_and_sqrt() {
        let a = p("x^40+x^33+x^3+1");
        let sq = a.square();
        assert_eq!(sq, a.mul(&a));
        assert_eq!(sq.sqrt().unwrap(), a);
        assert!(a.sqrt().is_none());
    }

    #[test]
    fn ordering_is_degree_then_value() {
        let mut v = vec![p("x^2+x+1"), p("x"), p("x+1"), p("x^3+x+1"), p("x^3+x^2+1")];
        v.sort();
        let names: Vec<_> = v.iter().map(|q| q.to_string()).collect();
        assert_eq!(names, ["x", "x+1", "x^2+x+1", "x^3+x+1", "x^3+x^2+1"]);
    }

    #[test]
    fn shifts() {
        let a = p("x^70+x^3");
        assert_eq!(a.shr(3), p("x^67+1"));
        assert_eq!(a.shl(60), p("x^130+x^63"));
        assert_eq!(a.shr(71), Poly::zero());
    }
}
