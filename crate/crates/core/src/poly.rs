//! Dense univariate polynomials over [`Complex`] and the elementary transforms
//! used by the refinement pipeline.

use crate::error::Error;
use crate::numctx::{Complex, Real};

/// `p(x) = Σ p_i x^i` with nonzero leading coefficient.
///
/// `tau` is the smallest non-negative integer with `lg max|p_i| ≤ tau`; it is
/// always recomputed from the coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
    tau: usize,
}

/// The length-`q` coefficient sequence `p_{q,i} = Σ_j p_{i+jq}`; agrees with
/// `p` at every `q`-th root of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldedPolynomial {
    q: usize,
    coeffs: Vec<Complex>,
}

/// Result of [`Polynomial::reverse`]. `dropped` counts the degrees lost to
/// vanishing low-order coefficients of the input (zero when `p(0) ≠ 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct Reversed {
    pub poly: Polynomial,
    pub dropped: usize,
}

pub(crate) fn tau_of(coeffs: &[Complex]) -> usize {
    let lg = coeffs.iter().map(Complex::log2_abs).fold(f64::NEG_INFINITY, f64::max);
    if lg <= 0.0 {
        0
    } else {
        (lg - 1e-12).ceil() as usize
    }
}

/// Horner evaluation of a raw coefficient slice (low to high).
pub(crate) fn horner(coeffs: &[Complex], x: &Complex) -> Complex {
    let mut it = coeffs.iter().rev();
    let mut acc = match it.next() {
        Some(c) => c.clone(),
        None => return Complex::zero(x.prec()),
    };
    for c in it {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Schoolbook product of raw coefficient slices.
pub(crate) fn mul_naive(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let prec = a[0].prec().max(b[0].prec());
    let mut out = vec![Complex::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

impl Polynomial {
    /// Builds a polynomial from coefficients `p_0, …, p_d`. Trailing zero
    /// coefficients are dropped; the all-zero sequence is rejected.
    pub fn new(mut coeffs: Vec<Complex>) -> Result<Self, Error> {
        while coeffs.last().is_some_and(Complex::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let tau = tau_of(&coeffs);
        Ok(Polynomial { coeffs, tau })
    }

    /// Real coefficients given as `f64`, lowest degree first.
    pub fn from_f64(coeffs: &[f64], prec: usize) -> Result<Self, Error> {
        Self::new(coeffs.iter().map(|&c| Complex::from_f64(c, 0.0, prec)).collect())
    }

    /// The monic polynomial `Π (x − r_i)`.
    pub fn from_roots(roots: &[Complex], prec: usize) -> Self {
        let mut coeffs = vec![Complex::one(prec)];
        for r in roots {
            let mut next = vec![Complex::zero(prec); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &(c * r);
            }
            coeffs = next;
        }
        Polynomial::new(coeffs).expect("monic product is nonzero")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Complex> {
        self.coeffs.get(i)
    }

    pub fn leading(&self) -> &Complex {
        self.coeffs.last().expect("nonempty")
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Largest coefficient precision.
    pub fn prec(&self) -> usize {
        self.coeffs.iter().map(Complex::prec).max().unwrap_or(0)
    }

    /// `lg max_i |p_i|`.
    pub fn log2_max_coeff(&self) -> f64 {
        self.coeffs.iter().map(Complex::log2_abs).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Coefficients rounded to `prec` bits.
    pub fn round_to(&self, prec: usize) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.round_to(prec)).collect())
            .expect("rounding a nonzero polynomial")
    }

    /// `p(x)` by Horner's rule.
    pub fn eval(&self, x: &Complex) -> Complex {
        horner(&self.coeffs, x)
    }

    /// `(p(x), p'(x))` in one Horner pass.
    pub fn eval_with_derivative(&self, x: &Complex) -> (Complex, Complex) {
        let mut it = self.coeffs.iter().rev();
        let mut val = it.next().expect("nonempty").clone();
        let mut der = Complex::zero(val.prec().max(x.prec()));
        for c in it {
            der = &(&der * x) + &val;
            val = &(&val * x) + c;
        }
        (val, der)
    }

    /// `p'`; constant polynomials have nothing to differentiate.
    pub fn derivative(&self) -> Result<Polynomial, Error> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::DegreeTooSmall { degree: 0, minimum: 1 });
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Real::from_u64(i as u64 + 1, c.prec().max(64))))
            .collect();
        Polynomial::new(coeffs)
    }

    /// `p^{(n)}`, with `p^{(0)} = p`.
    pub fn nth_derivative(&self, n: usize) -> Result<Polynomial, Error> {
        (0..n).try_fold(self.clone(), |acc, _| acc.derivative())
    }

    /// `x^d p(1/x)`: the roots of the result are the reciprocals of the roots of `p`.
    pub fn reverse(&self) -> Reversed {
        let dropped = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let coeffs: Vec<Complex> = self.coeffs.iter().rev().cloned().collect();
        Reversed { poly: Polynomial::new(coeffs).expect("nonzero"), dropped }
    }

    /// `g(y) = p(center + radius·y)`, by the quadratic Horner-style shift recurrence.
    pub fn taylor_shift_scale(&self, center: &Complex, radius: &Real) -> Polynomial {
        let mut b = self.coeffs.clone();
        let d = self.degree();
        if !center.is_zero() {
            for k in 0..d {
                for j in (k..d).rev() {
                    let t = &b[j + 1] * center;
                    b[j] += &t;
                }
            }
        }
        let mut pow = Real::one(radius.prec());
        for c in b.iter_mut().skip(1) {
            pow = &pow * radius;
            *c = c.scale(&pow);
        }
        Polynomial::new(b).expect("shift of a nonzero polynomial is nonzero")
    }

    /// Folds `p` modulo `x^q − 1`, using fewer than `d` complex additions.
    pub fn fold(&self, q: usize) -> FoldedPolynomial {
        assert!(q >= 1, "fold length must be positive");
        let prec = self.prec();
        let mut coeffs: Vec<Complex> = self.coeffs.iter().take(q).cloned().collect();
        coeffs.resize(q, Complex::zero(prec));
        for (i, c) in self.coeffs.iter().enumerate().skip(q) {
            coeffs[i % q] += c;
        }
        FoldedPolynomial { q, coeffs }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        Polynomial::new(mul_naive(&self.coeffs, &other.coeffs)).expect("product of nonzero polynomials")
    }

    pub fn scale(&self, k: &Complex) -> Result<Polynomial, Error> {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Long division: returns `(quotient, remainder)` with `deg remainder < deg divisor`.
    /// The remainder is returned as a raw coefficient vector since it may vanish.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Vec<Complex>, Vec<Complex>) {
        let n = divisor.degree();
        let prec = self.prec().max(divisor.prec());
        if self.degree() < n {
            return (Vec::new(), self.coeffs.clone());
        }
        let mut r = self.coeffs.clone();
        let inv_lead = divisor.leading().recip();
        let mut quot = vec![Complex::zero(prec); self.degree() - n + 1];
        for k in (0..quot.len()).rev() {
            let t = &r[k + n] * &inv_lead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let s = &t * dc;
                r[k + j] -= &s;
            }
            quot[k] = t;
        }
        r.truncate(n);
        (quot, r)
    }
}

impl FoldedPolynomial {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Complex) -> Complex {
        horner(&self.coeffs, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::{root_of_unity, PrecisionContext};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: usize = 192;

    fn real_poly(c: &[f64]) -> Polynomial {
        Polynomial::from_f64(c, P).unwrap()
    }

    fn f64s(p: &Polynomial) -> Vec<(f64, f64)> {
        p.coeffs().iter().map(Complex::to_f64_pair).collect()
    }

    fn random_poly(rng: &mut ChaCha8Rng, d: usize, prec: usize) -> Polynomial {
        let c = (0..=d)
            .map(|_| Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), prec))
            .collect();
        Polynomial::new(c).unwrap()
    }

    /// Σ p_i x^i with explicitly formed powers; independent of Horner.
    fn naive_eval(p: &Polynomial, x: &Complex) -> Complex {
        let mut acc = Complex::zero(x.prec());
        for (i, c) in p.coeffs().iter().enumerate() {
            acc += &(c * &x.powu(i as u64));
        }
        acc
    }

    fn close(a: &Complex, b: &Complex, log2_tol: f64) -> bool {
        (a - b).log2_abs() <= log2_tol
    }

    #[test]
    fn construction_and_tau() {
        let p = Polynomial::from_f64(&[1.0, 0.0, 0.0, 0.0], P).unwrap();
        assert_eq!(p.degree(), 0);
        assert!(matches!(Polynomial::from_f64(&[0.0, 0.0], P), Err(Error::ZeroPolynomial)));
        assert_eq!(real_poly(&[3.0, 0.5]).tau(), 2);
        assert_eq!(real_poly(&[4.0, 1.0]).tau(), 2);
        assert_eq!(real_poly(&[0.25]).tau(), 0);
    }

    #[test]
    fn eval_examples() {
        let x2m2 = real_poly(&[-2.0, 0.0, 1.0]);
        assert_eq!(x2m2.eval(&Complex::one(P)).to_f64_pair(), (-1.0, 0.0));
        let p = real_poly(&[3.0, 1.0, 0.0, 2.0, 0.0, 1.0]);
        assert_eq!(p.eval(&Complex::from_f64(-1.0, 0.0, P)).to_f64_pair(), (-1.0, 0.0));
    }

    #[test]
    fn eval_matches_naive_power_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lam = 256;
        for _ in 0..5 {
            let p = random_poly(&mut rng, 50, lam);
            let x = Complex::from_f64(rng.gen_range(-1.1..1.1), rng.gen_range(-1.1..1.1), lam);
            assert!(close(&p.eval(&x), &naive_eval(&p, &x), -(lam as f64) + 20.0));
            let (v, dv) = p.eval_with_derivative(&x);
            assert_eq!(v, p.eval(&x));
            assert!(close(&dv, &p.derivative().unwrap().eval(&x), -(lam as f64) + 20.0));
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(f64s(&real_poly(&[-2.0, 0.0, 1.0]).derivative().unwrap()), vec![(0.0, 0.0), (2.0, 0.0)]);
        let x5 = real_poly(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).derivative().unwrap();
        assert_eq!(x5.degree(), 4);
        assert_eq!(x5.leading().to_f64_pair(), (5.0, 0.0));
        assert_eq!(f64s(&real_poly(&[3.0, 4.0]).derivative().unwrap()), vec![(4.0, 0.0)]);
        assert!(real_poly(&[3.0]).derivative().is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [3usize, 10, 33] {
            let p = random_poly(&mut rng, d, P).scale(&Complex::from_f64(37.0, 0.0, P)).unwrap();
            let dp = p.derivative().unwrap();
            let lgd = (d as f64).log2().ceil() as usize;
            assert!(dp.tau() <= p.tau() + lgd);
        }
    }

    #[test]
    fn reverse_examples() {
        let r = real_poly(&[5.0, 3.0, 2.0]).reverse();
        assert_eq!(f64s(&r.poly), vec![(2.0, 0.0), (3.0, 0.0), (5.0, 0.0)]);
        assert_eq!(r.dropped, 0);
        let r = real_poly(&[-0.5, 1.0]).reverse();
        assert_eq!(f64s(&r.poly), vec![(1.0, 0.0), (-0.5, 0.0)]);
        assert_eq!(r.poly.eval(&Complex::from_f64(2.0, 0.0, P)).to_f64_pair(), (0.0, 0.0));
        let r = real_poly(&[0.0, 0.0, 1.0, 1.0]).reverse();
        assert_eq!(r.dropped, 2);
        assert_eq!(r.poly.degree(), 1);
    }

    #[test]
    fn reverse_maps_roots_to_reciprocals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let roots: Vec<Complex> = (0..6)
            .map(|_| Complex::from_f64(rng.gen_range(0.3..2.0), rng.gen_range(-2.0..2.0), P))
            .collect();
        let rev = Polynomial::from_roots(&roots, P).reverse().poly;
        for r in &roots {
            let v = rev.eval(&r.recip());
            assert!(v.log2_abs() < -150.0);
        }
    }

    #[test]
    fn taylor_shift_examples() {
        let one = Real::one(P);
        let g = real_poly(&[0.0, 0.0, 1.0]).taylor_shift_scale(&Complex::one(P), &one);
        assert_eq!(f64s(&g), vec![(1.0, 0.0), (2.0, 0.0), (1.0, 0.0)]);
        let g = real_poly(&[-4.0, 1.0]).taylor_shift_scale(&Complex::zero(P), &Real::from_f64(2.0, P));
        assert_eq!(f64s(&g), vec![(-4.0, 0.0), (2.0, 0.0)]);
    }

    #[test]
    fn taylor_shift_matches_horner_and_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lam = 256;
        let p = random_poly(&mut rng, 12, lam);
        let x0 = Complex::from_f64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), lam);
        let r = Real::from_f64(rng.gen_range(0.1..3.0), lam);
        let g = p.taylor_shift_scale(&x0, &r);
        for _ in 0..20 {
            let y = Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), lam);
            let x = &x0 + &y.scale(&r);
            assert!(close(&g.eval(&y), &p.eval(&x), -(lam as f64) + 30.0));
        }
        let bound = p.tau() as f64 + 12.0 * (2f64).max(x0.abs_f64() + r.to_f64()).log2();
        assert!(g.tau() as f64 <= bound.ceil());

        // The round trip is accurate relative to the coefficient growth of both shifts.
        let inv_center = -&x0.scale(&r.recip());
        let inv_radius = r.recip();
        let back = g.taylor_shift_scale(&inv_center, &inv_radius);
        let growth = |c: &Complex, s: &Real| 12.0 * ((1.0 + c.abs_f64()) * s.to_f64().max(1.0)).log2();
        let scale = p.log2_max_coeff() + growth(&x0, &r) + growth(&inv_center, &inv_radius);
        for (a, b) in back.coeffs().iter().zip(p.coeffs()) {
            assert!(close(a, b, scale - lam as f64 + 12f64.log2() + 5.0));
        }

        let lhs = g.derivative().unwrap();
        let rhs = p.derivative().unwrap().taylor_shift_scale(&x0, &r);
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!(close(a, &b.scale(&r), lhs.log2_max_coeff() - lam as f64 + 20.0));
        }
    }

    #[test]
    fn fold_examples() {
        let p = real_poly(&[3.0, 1.0, 0.0, 2.0, 0.0, 1.0]);
        let f = p.fold(2);
        assert_eq!(f.coeffs().iter().map(Complex::to_f64_pair).collect::<Vec<_>>(), vec![(3.0, 0.0), (4.0, 0.0)]);
        assert_eq!(f.eval(&Complex::one(P)).to_f64_pair(), (7.0, 0.0));
        assert_eq!(f.eval(&Complex::from_f64(-1.0, 0.0, P)).to_f64_pair(), (-1.0, 0.0));
        let small = real_poly(&[1.0, 2.0]).fold(4);
        assert_eq!(
            small.coeffs().iter().map(Complex::to_f64_pair).collect::<Vec<_>>(),
            vec![(1.0, 0.0), (2.0, 0.0), (0.0, 0.0), (0.0, 0.0)]
        );
    }

    #[test]
    fn fold_agrees_at_roots_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ctx = PrecisionContext::with_lambda(256, 128, 0).unwrap();
        let p = random_poly(&mut rng, 1000, 256);
        let f = p.fold(16);
        for j in 0..16 {
            let w = root_of_unity(16, j, &ctx);
            assert!(close(&f.eval(&w), &p.eval(&w), -256.0 + 40.0));
        }
    }

    #[test]
    fn division_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_poly(&mut rng, 9, P);
        let b = random_poly(&mut rng, 4, P);
        let (q, r) = a.div_rem(&b);
        let mut back = mul_naive(&q, b.coeffs());
        for (i, c) in r.iter().enumerate() {
            back[i] += c;
        }
        for (x, y) in back.iter().zip(a.coeffs()) {
            assert!(close(x, y, -150.0));
        }
    }
}
