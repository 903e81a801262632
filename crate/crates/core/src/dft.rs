//! Radix-2 discrete Fourier transforms at working precision.
//!
//! The forward transform uses the positive exponent, `out[h] = Σ_i ω^{hi} v[i]`
//! with `ω = exp(2πi/q)`, which is the orientation needed both for evaluating a
//! folded polynomial at the `q`-th roots of unity and for applying the matrix
//! `Ω = [ω^{hi}]` to a vector of quotients.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Error;
use crate::numctx::root_of_unity_prec;
use crate::numctx::{Complex, PrecisionContext};
use crate::poly::FoldedPolynomial;

type TableKey = (usize, usize);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<Vec<Complex>>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<Vec<Complex>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ω_n^j` for `0 ≤ j < n`, rounded to `prec` bits. Cached per `(n, prec)`.
pub(crate) fn root_table(n: usize, prec: usize) -> Arc<Vec<Complex>> {
    let key = (n, prec);
    if let Some(t) = table_cache().lock().expect("root table cache").get(&key) {
        return t.clone();
    }
    let table = Arc::new(build_table(n, prec));
    table_cache().lock().expect("root table cache").insert(key, table.clone());
    table
}

fn build_table(n: usize, prec: usize) -> Vec<Complex> {
    if n <= 8 {
        return (0..n).map(|j| root_of_unity_prec(n, j, prec)).collect();
    }
    // Each entry is a product of at most lg n accurately computed powers
    // ω^{2^k}; the guard bits absorb the accumulated rounding.
    let lg = n.trailing_zeros() as usize;
    let guard = prec + 2 * lg + 16;
    let pow2: Vec<Complex> = (0..lg).map(|k| root_of_unity_prec(n, 1 << k, guard)).collect();
    let half = n / 2;
    let mut wide: Vec<Complex> = Vec::with_capacity(half);
    wide.push(Complex::one(guard));
    for j in 1..half {
        let hb = usize::BITS - 1 - j.leading_zeros();
        let rest = j - (1 << hb);
        let w = if rest == 0 { pow2[hb as usize].clone() } else { &wide[rest] * &pow2[hb as usize] };
        wide.push(w);
    }
    let mut out: Vec<Complex> = wide.iter().map(|w| w.round_to(prec)).collect();
    out.extend(wide.iter().map(|w| (-w).round_to(prec)));
    out
}

fn bit_reverse_permute(a: &mut [Complex]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place transform of a power-of-two length slice with the table for that length.
/// Only the first half of the table is read.
pub(crate) fn fft_in_place(a: &mut [Complex], roots: &[Complex], inverse: bool) {
    debug_assert_eq!(roots.len(), a.len());
    bit_reverse_permute(a);
    combine(a, &roots[..roots.len() / 2], inverse);
}

/// Radix-2 butterflies, depth first.
fn combine(a: &mut [Complex], half_roots: &[Complex], inverse: bool) {
    let n = a.len();
    if n < 2 {
        return;
    }
    let half = n / 2;
    let table_step = 2 * half_roots.len() / n;
    combine(&mut a[..half], half_roots, inverse);
    combine(&mut a[half..], half_roots, inverse);
    let (lo, hi) = a.split_at_mut(half);
    for (k, (u, v)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
        if k == 0 {
            let t = v.clone();
            *v = &*u - &t;
            *u += &t;
        } else if inverse {
            // ω^{−j} = −ω^{N/2−j}
            let t = &*v * &half_roots[half_roots.len() - k * table_step];
            *v = &*u + &t;
            *u -= &t;
        } else {
            let t = &*v * &half_roots[k * table_step];
            *v = &*u - &t;
            *u += &t;
        }
    }
}

/// Size and root table of a `q`-point transform at a fixed precision.
#[derive(Clone, Debug)]
pub struct DftPlan {
    q: usize,
    prec: usize,
    roots: Arc<Vec<Complex>>,
}

impl DftPlan {
    /// Plan for `q` points, `q` a power of two and at least 2.
    pub fn new(q: usize, ctx: &PrecisionContext) -> Result<Self, Error> {
        Self::with_prec(q, ctx.lambda())
    }

    pub(crate) fn with_prec(q: usize, prec: usize) -> Result<Self, Error> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("DFT size {q} is not a power of two ≥ 2")));
        }
        Ok(DftPlan { q, prec, roots: root_table(q, prec) })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// `ω_q^j`.
    pub fn root(&self, j: usize) -> &Complex {
        &self.roots[j % self.q]
    }

    pub fn roots(&self) -> &[Complex] {
        &self.roots
    }

    fn check_len(&self, v: &[Complex]) -> Result<(), Error> {
        if v.len() != self.q {
            return Err(Error::LengthMismatch { expected: self.q, got: v.len() });
        }
        Ok(())
    }

    /// `Ω·v` with `Ω = [ω^{hi}]`, in `O(q log q)` operations.
    pub fn forward(&self, v: &[Complex]) -> Result<Vec<Complex>, Error> {
        self.check_len(v)?;
        let mut a = v.to_vec();
        fft_in_place(&mut a, &self.roots, false);
        Ok(a)
    }

    /// `Ω^{-1}·v = (1/q)·conj(Ω)·v`.
    pub fn inverse(&self, v: &[Complex]) -> Result<Vec<Complex>, Error> {
        self.check_len(v)?;
        let mut a = v.to_vec();
        fft_in_place(&mut a, &self.roots, true);
        let k = -(self.q.trailing_zeros() as i32);
        Ok(a.iter().map(|x| x.mul_pow2(k)).collect())
    }
}

/// Forward transform `out[h] = Σ_i ω^{hi} v[i]`.
pub fn dft_forward(plan: &DftPlan, v: &[Complex]) -> Result<Vec<Complex>, Error> {
    plan.forward(v)
}

/// Values `p(ω^j)`, `0 ≤ j < q`, of the polynomial that was folded into `fp`.
pub fn eval_at_roots(fp: &FoldedPolynomial, plan: &DftPlan) -> Result<Vec<Complex>, Error> {
    if fp.q() != plan.q() {
        return Err(Error::LengthMismatch { expected: plan.q(), got: fp.q() });
    }
    plan.forward(fp.coeffs())
}

/// Product of two coefficient sequences by transform, rounded to `prec` bits.
pub(crate) fn fft_multiply(a: &[Complex], b: &[Complex], prec: usize) -> Vec<Complex> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let mut prod = fft_cyclic(a, b, out_len.next_power_of_two().max(2), prec);
    prod.truncate(out_len);
    prod
}

/// `a·b mod (x^n − 1)` for a power of two `n`; longer inputs are folded first.
pub(crate) fn fft_cyclic(a: &[Complex], b: &[Complex], n: usize, prec: usize) -> Vec<Complex> {
    debug_assert!(n.is_power_of_two() && n >= 2);
    let roots = root_table(n, prec);
    let fold = |src: &[Complex]| {
        let mut v: Vec<Complex> = src.iter().take(n).map(|c| c.round_to(prec)).collect();
        v.resize(n, Complex::zero(prec));
        for (i, c) in src.iter().enumerate().skip(n) {
            v[i % n] += c;
        }
        v
    };
    let mut fa = fold(a);
    fft_in_place(&mut fa, &roots, false);
    {
        let mut fb = fold(b);
        fft_in_place(&mut fb, &roots, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = &*x * y;
        }
    }
    fft_in_place(&mut fa, &roots, true);
    let k = -(n.trailing_zeros() as i32);
    for x in fa.iter_mut() {
        *x = x.mul_pow2(k);
    }
    fa
}
