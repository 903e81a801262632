//! Fast multipoint evaluation with a subproduct tree.
//!
//! The points are grouped into `m` monic moduli `P_j` of degree `n`; the tree
//! holds the products of siblings up to `Π P_j`. Remainders of `F` are pushed
//! down the tree, dividing by reversal and power-series inversion, so that a
//! linear leaf `x − a` ends with `F(a)`.
//!
//! Rounding errors grow with the size of the tree coefficients, which is
//! bounded in terms of the magnitude `2^ρ` of the points, so evaluation runs at
//! `λ = ℓ + 4·(τ₁·⌈lg m⌉ + m·n·ρ + ⌈lg(mn)⌉ + 10)` bits for an `ℓ`-bit result.

use crate::dft::{fft_cyclic, fft_multiply};
use crate::error::Error;
use crate::numctx::{Complex, PrecisionContext};
use crate::poly::{horner, mul_naive, Polynomial};

/// Operand length above which products go through the transform.
const FFT_CUTOFF: usize = 24;

fn ceil_lg(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Bits needed for an `ell`-bit result from `m` moduli of degree `n` whose
/// roots are bounded by `2^rho`, reducing an `F` with `lg‖F‖ ≤ tau1`.
pub fn tree_precision(ell: usize, tau1: usize, m: usize, n: usize, rho: usize) -> usize {
    let m = m.max(1);
    let n = n.max(1);
    ell + 4 * (tau1 * ceil_lg(m) + m * n * rho + ceil_lg(m * n) + 10)
}

/// Smallest `ρ ≥ 1` with every point inside `|x| ≤ 2^ρ`.
pub fn magnitude_bits(points: &[Complex]) -> usize {
    let lg = points.iter().map(Complex::log2_abs).fold(f64::NEG_INFINITY, f64::max);
    if lg <= 1.0 {
        1
    } else {
        (lg - 1e-12).ceil() as usize
    }
}

fn mul(a: &[Complex], b: &[Complex], prec: usize) -> Vec<Complex> {
    if a.len().min(b.len()) > FFT_CUTOFF {
        fft_multiply(a, b, prec)
    } else {
        mul_naive(a, b)
    }
}

/// Product of two monic polynomials; only the low parts go through `mul`, so
/// a transform of length `deg a + deg b` suffices.
fn mul_monic(a: &[Complex], b: &[Complex], prec: usize) -> Vec<Complex> {
    let (n, m) = (a.len() - 1, b.len() - 1);
    if n == 0 || m == 0 {
        return if n == 0 { b.to_vec() } else { a.to_vec() };
    }
    let mut out = mul(&a[..n], &b[..m], prec);
    out.resize(n + m + 1, Complex::zero(prec));
    for (i, c) in b[..m].iter().enumerate() {
        out[n + i] += c;
    }
    for (i, c) in a[..n].iter().enumerate() {
        out[m + i] += c;
    }
    out[n + m] = Complex::one(prec);
    out
}

/// Products of the moduli, leaves first. Every node is a monic coefficient
/// vector (lowest degree first).
#[derive(Clone, Debug)]
pub struct SubproductTree {
    levels: Vec<Vec<Vec<Complex>>>,
    leaf_degree: usize,
    points: Vec<Complex>,
    rho: usize,
    prec: usize,
}

/// Builds the tree over `points`, `n` points per leaf (the last leaf may hold fewer).
pub fn build_tree(points: &[Complex], n: usize, ctx: &PrecisionContext) -> Result<SubproductTree, Error> {
    build_tree_prec(points, n, ctx.lambda())
}

pub(crate) fn build_tree_prec(points: &[Complex], n: usize, prec: usize) -> Result<SubproductTree, Error> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no evaluation points".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("leaf degree must be at least 1".into()));
    }
    let points: Vec<Complex> = points.iter().map(|a| a.round_to(prec)).collect();
    let leaves: Vec<Vec<Complex>> = points
        .chunks(n)
        .map(|chunk| {
            let mut c = vec![Complex::one(prec)];
            for a in chunk {
                c = mul_naive(&c, &[-a, Complex::one(prec)]);
            }
            c
        })
        .collect();
    let mut levels = vec![leaves];
    while levels.last().map_or(0, Vec::len) > 1 {
        let below = levels.last().expect("nonempty");
        let next = below
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => mul_monic(a, b, prec),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
        levels.push(next);
    }
    let rho = magnitude_bits(&points);
    Ok(SubproductTree { levels, leaf_degree: n, points, rho, prec })
}

impl SubproductTree {
    /// `Π P_j`.
    pub fn root(&self) -> &[Complex] {
        &self.levels.last().expect("nonempty tree")[0]
    }

    pub fn leaves(&self) -> &[Vec<Complex>] {
        &self.levels[0]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Number of moduli `m`.
    pub fn moduli(&self) -> usize {
        self.levels[0].len()
    }

    pub fn leaf_degree(&self) -> usize {
        self.leaf_degree
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// `F mod P_j` for every leaf.
    pub fn reduce(&self, f: &[Complex]) -> Vec<Vec<Complex>> {
        let prec = self.prec;
        let mut current: Vec<Vec<Complex>> = vec![f.iter().map(|c| c.round_to(prec)).collect()];
        for level in self.levels.iter().rev() {
            current = level
                .iter()
                .enumerate()
                .map(|(i, node)| rem_monic(&current[if current.len() == level.len() { i } else { i / 2 }], node, prec))
                .collect();
        }
        current
    }

    /// `F(a)` at every point.
    pub fn evaluate(&self, f: &[Complex]) -> Vec<Complex> {
        let rems = self.reduce(f);
        let zero = Complex::zero(self.prec);
        if self.leaf_degree == 1 {
            return rems.into_iter().map(|r| r.into_iter().next().unwrap_or_else(|| zero.clone())).collect();
        }
        // Wider leaves: finish each remainder with Horner at the leaf's points.
        self.points
            .chunks(self.leaf_degree)
            .zip(&rems)
            .flat_map(|(chunk, r)| chunk.iter().map(move |a| horner(r, a)))
            .collect()
    }
}

/// Remainder of `a` modulo the monic `b`.
fn rem_monic(a: &[Complex], b: &[Complex], prec: usize) -> Vec<Complex> {
    let n = b.len() - 1;
    let mut a: Vec<Complex> = a.to_vec();
    while a.last().is_some_and(Complex::is_zero) && a.len() > 1 {
        a.pop();
    }
    if a.len() <= n {
        return a;
    }
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![horner(&a, &-&b[0])];
    }
    let k = a.len() - n;
    if k.min(n) <= FFT_CUTOFF {
        return rem_naive(a, b);
    }
    // rev(Q) = rev(A)·rev(B)^{-1} mod x^k
    let rev_a: Vec<Complex> = a.iter().rev().take(k).cloned().collect();
    let rev_b: Vec<Complex> = b.iter().rev().take(k).cloned().collect();
    let inv = series_inverse(&rev_b, k, prec);
    let mut rev_q = mul(&rev_a, &inv, prec);
    rev_q.truncate(k);
    rev_q.reverse();
    // deg(A − QB) < n, so the product is only needed modulo x^N − 1 with N ≥ n.
    let big_n = n.next_power_of_two();
    let qb = fft_cyclic(&rev_q, b, big_n, prec);
    let mut a_fold: Vec<Complex> = a.iter().take(big_n).cloned().collect();
    for (i, c) in a.iter().enumerate().skip(big_n) {
        a_fold[i % big_n] += c;
    }
    a_fold.iter().zip(&qb).take(n).map(|(x, y)| x - y).collect()
}

fn rem_naive(mut r: Vec<Complex>, b: &[Complex]) -> Vec<Complex> {
    let n = b.len() - 1;
    for k in (0..r.len() - n).rev() {
        let t = r[k + n].clone();
        if t.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate().take(n) {
            r[k + j] -= &(&t * bc);
        }
    }
    r.truncate(n);
    r
}

/// `g` with `f·g ≡ 1 mod x^k`, for `f_0 = 1`, by Newton iteration `g ← g(2 − f g)`.
fn series_inverse(f: &[Complex], k: usize, prec: usize) -> Vec<Complex> {
    let mut g = vec![Complex::one(prec)];
    while g.len() < k {
        let half = g.len();
        let len = (2 * half).min(k);
        let ft: Vec<Complex> = f.iter().take(len).cloned().collect();
        // f g ≡ 1 mod x^half, so wrap-around only lands on the known low half.
        let e: Vec<Complex> = if half > FFT_CUTOFF {
            let n = len.next_power_of_two();
            fft_cyclic(&ft, &g, n, prec)[half..len].to_vec()
        } else {
            let mut e = mul_naive(&ft, &g);
            e.truncate(len);
            e.split_off(half)
        };
        let mut corr = mul(&e, &g, prec);
        corr.truncate(len - half);
        g.extend(corr.iter().map(|c| -c));
    }
    g
}

/// Bits used by [`eval_many_to`] for a batch: `m` points reducing a degree-`deg`
/// polynomial with coefficient bound `tau1`.
pub fn eval_precision(ell: usize, tau1: usize, points: &[Complex]) -> usize {
    tree_precision(ell, tau1, points.len(), 1, magnitude_bits(points))
}

/// `p(a)` for every `a` in `points`, each within `2^{−ℓ}` of exact.
///
/// Point sets larger than `deg p + 1` are split into batches of `deg p + 1`
/// points, each with its own tree.
pub fn eval_many_to(p: &Polynomial, points: &[Complex], ell: usize) -> Vec<Complex> {
    if points.is_empty() {
        return Vec::new();
    }
    let batch = p.degree() + 1;
    let mut out = Vec::with_capacity(points.len());
    for chunk in points.chunks(batch) {
        let prec = eval_precision(ell, p.tau(), chunk);
        if p.degree() == 0 {
            out.extend(chunk.iter().map(|_| p.coeffs()[0].round_to(prec)));
            continue;
        }
        let tree = build_tree_prec(chunk, 1, prec).expect("nonempty batch");
        out.extend(tree.evaluate(p.coeffs()));
    }
    out
}

/// `p(a)` for every `a` in `points`, rounded to the context's working precision.
pub fn eval_many(p: &Polynomial, points: &[Complex], ctx: &PrecisionContext) -> Vec<Complex> {
    let lambda = ctx.lambda();
    eval_many_to(p, points, lambda).into_iter().map(|v| v.round_to(lambda)).collect()
}

/// `(p(a), p'(a))` for every `a`, sharing one tree per batch.
pub(crate) fn eval_many_with_derivative(
    p: &Polynomial,
    dp: &[Complex],
    points: &[Complex],
    ell: usize,
) -> Vec<(Complex, Complex)> {
    let batch = p.degree() + 1;
    let mut out = Vec::with_capacity(points.len());
    for chunk in points.chunks(batch) {
        let prec = eval_precision(ell, p.tau(), chunk);
        let tree = build_tree_prec(chunk, 1, prec).expect("nonempty batch");
        let v = tree.evaluate(p.coeffs());
        let dv = if dp.is_empty() { vec![Complex::zero(prec); chunk.len()] } else { tree.evaluate(dp) };
        out.extend(v.into_iter().zip(dv));
    }
    out
}
