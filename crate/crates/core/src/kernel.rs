//! Word-level multiplication kernels.
//!
//! Every kernel computes the same carry-less product of two little-endian
//! word slices; they differ only in speed. Kernels are registered by name and
//! the process-wide default can be switched at runtime (the CLI exposes this
//! as `--kernel`).

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub trait MulKernel: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Carry-less product of `a` and `b`. The output has `a.len() + b.len()`
    /// words and may carry zero high words.
    fn mul_words(&self, a: &[u64], b: &[u64]) -> Vec<u64>;
}

/// Bit-serial shift-and-xor over whole words.
pub struct Schoolbook;

impl MulKernel for Schoolbook {
    fn name(&self) -> &'static str {
        "schoolbook"
    }

    fn description(&self) -> &'static str {
        "word-level shift/xor schoolbook product"
    }

    fn mul_words(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len()];
        if a.is_empty() || b.is_empty() {
            return out;
        }
        // iterate over the set bits of the shorter operand
        let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for (wi, &w) in short.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                xor_shifted(&mut out[wi..], long, bit);
            }
        }
        out
    }
}

fn xor_shifted(out: &mut [u64], src: &[u64], shift: usize) {
    if shift == 0 {
        for (o, s) in out.iter_mut().zip(src) {
            *o ^= s;
        }
        return;
    }
    let mut carry = 0u64;
    for (i, &s) in src.iter().enumerate() {
        out[i] ^= (s << shift) | carry;
        carry = s >> (64 - shift);
    }
    out[src.len()] ^= carry;
}

/// 64x64 -> 128 carry-less word products (PCLMULQDQ when the CPU has it,
/// a 4-bit windowed software product otherwise).
pub struct Clmul;

impl MulKernel for Clmul {
    fn name(&self) -> &'static str {
        "clmul"
    }

    fn description(&self) -> &'static str {
        "per-word carry-less multiply (hardware pclmulqdq if available)"
    }

    fn mul_words(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len()];
        let word_mul = select_word_mul();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let (lo, hi) = word_mul(x, y);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        out
    }
}

type WordMul = fn(u64, u64) -> (u64, u64);

fn select_word_mul() -> WordMul {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            return clmul64_hw;
        }
    }
    clmul64_soft
}

#[cfg(target_arch = "x86_64")]
fn clmul64_hw(a: u64, b: u64) -> (u64, u64) {
    // SAFETY: only selected after runtime detection of pclmulqdq.
    unsafe { clmul64_pclmul(a, b) }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_set_epi64x, _mm_srli_si128};
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(va, vb, 0x00);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_srli_si128(r, 8)) as u64;
    (lo, hi)
}

/// Portable 64x64 carry-less product with a 16-entry window table.
pub fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let mut table = [0u128; 16];
    let b = b as u128;
    for i in 1..16usize {
        let mut acc = 0u128;
        for k in 0..4 {
            if i >> k & 1 == 1 {
                acc ^= b << k;
            }
        }
        table[i] = acc;
    }
    let mut r = 0u128;
    for nib in (0..16).rev() {
        r <<= 4;
        r ^= table[(a >> (nib * 4) & 0xf) as usize];
    }
    (r as u64, (r >> 64) as u64)
}

static KERNELS: [&dyn MulKernel; 2] = [&Clmul, &Schoolbook];

static DEFAULT_KERNEL: AtomicUsize = AtomicUsize::new(0);

pub fn kernels() -> &'static [&'static dyn MulKernel] {
    &KERNELS
}

pub fn kernel(name: &str) -> Option<&'static dyn MulKernel> {
    KERNELS.iter().copied().find(|k| k.name() == name)
}

pub fn default_kernel() -> &'static dyn MulKernel {
    KERNELS[DEFAULT_KERNEL.load(Ordering::Relaxed)]
}

pub fn set_default_kernel(name: &str) -> Result<()> {
    let idx = KERNELS
        .iter()
        .position(|k| k.name() == name)
        .ok_or_else(|| Error::UnknownKernel(name.to_string()))?;
    DEFAULT_KERNEL.store(idx, Ordering::Relaxed);
    Ok(())
}
