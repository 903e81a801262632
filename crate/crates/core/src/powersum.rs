//! Power sums of the roots inside an isolated disc, estimated from `q` samples
//! of the logarithmic derivative on a circle.
//!
//! For a contour normalised to the unit circle, with the roots of interest
//! inside `|y| ≤ z` and all others outside `|y| ≥ 1/z`, the estimate
//!
//! ```text
//! s_k^* = (1/q) Σ_j ω^{j(k+1)} p'(ω^j)/p(ω^j)
//! ```
//!
//! differs from the true power sum `s_k` by aliased Laurent coefficients of
//! `p'/p`, which gives the certified radius
//! `|s_k^* − s_k| ≤ (z^{q+k} + (d−1)·z^{q−k}) / (1 − z^q)`.
//!
//! An [`IsolatedDisc`] `D(X, r)` with isolation ratio `ρ = (1+η)²` is
//! normalised by placing the contour on the middle circle `|x − X| = r(1+η)`,
//! so `z = 1/(1+η)` and local coordinates are `y = (x − X)/(r(1+η))`.

use crate::dft::{eval_at_roots, DftPlan};
use crate::error::Error;
use crate::numctx::{Complex, PrecisionContext, Real};
use crate::poly::Polynomial;

/// `D(center, radius)` with no roots in the annulus `radius ≤ |x − center| ≤ isolation·radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedDisc {
    pub center: Complex,
    pub radius: Real,
    pub isolation: f64,
    /// Number of roots inside, counted with multiplicity, when known.
    pub claimed_root_count: Option<usize>,
}

impl IsolatedDisc {
    pub fn new(center: Complex, radius: Real, isolation: f64) -> Result<Self, Error> {
        if !(isolation > 1.0) || !isolation.is_finite() {
            return Err(Error::NotIsolated(isolation));
        }
        if radius.is_zero() || radius.is_negative() {
            return Err(Error::InvalidArgument("disc radius must be positive".into()));
        }
        Ok(IsolatedDisc { center, radius, isolation, claimed_root_count: None })
    }

    pub fn with_root_count(mut self, count: usize) -> Self {
        self.claimed_root_count = Some(count);
        self
    }

    /// `η` with `isolation = (1+η)²`.
    pub fn eta(&self) -> f64 {
        self.isolation.sqrt() - 1.0
    }

    /// Certified bound on `min(|y|, 1/|y|)` over all roots in local coordinates.
    pub fn z(&self) -> f64 {
        1.0 / self.isolation.sqrt()
    }

    /// Radius `r(1+η)` of the sampling circle.
    pub fn contour_radius(&self, prec: usize) -> Real {
        self.radius.round_to(prec) * Real::from_f64(self.isolation, prec).sqrt()
    }

    pub(crate) fn check(&self) -> Result<(), Error> {
        if !(self.isolation > 1.0) {
            return Err(Error::NotIsolated(self.isolation));
        }
        Ok(())
    }

    /// Discs with `|X_i − X_j| ≤ r_i + r_j` intersect.
    pub fn overlaps(&self, other: &IsolatedDisc) -> bool {
        let dist = (&self.center - &other.center).abs();
        dist <= &self.radius + &other.radius
    }
}

/// One power-sum estimate in local disc coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumEstimate {
    pub k: usize,
    pub value: Complex,
    pub error_radius: f64,
    pub q_used: usize,
}

/// How the logarithmic derivative is sampled on the contour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContourPath {
    /// Shift and scale `p` into local coordinates, fold modulo `y^q − 1` and
    /// evaluate `p` and `p'` with two DFTs.
    ShiftAndFold,
    /// Evaluate `p` and `p'` directly at the mapped nodes `X + R·ω^j`.
    Direct,
}

/// `(z^{q+k} + (d−1)·z^{q−k}) / (1 − z^q)`, for `q > k`.
pub fn error_bound(z: f64, k: usize, d: usize, q: usize) -> f64 {
    let zq = z.powi(q as i32);
    let inner = z.powi((q + k) as i32);
    let outer = (d.saturating_sub(1)) as f64 * z.powi((q - k) as i32);
    (inner + outer) / (1.0 - zq)
}

fn check_z(z: f64) -> Result<(), Error> {
    if !(z > 0.0 && z < 1.0) {
        // Report the isolation ratio that this z corresponds to.
        return Err(Error::NotIsolated(if z > 0.0 { 1.0 / (z * z) } else { f64::INFINITY }));
    }
    Ok(())
}

/// Smallest power of two `q ≥ 2`, `q > k`, whose error bound is at most `delta`.
pub fn select_q(z: f64, k: usize, d: usize, delta: f64) -> Result<usize, Error> {
    select_q_by(z, delta, |q| error_bound(z, k, d, q), k)
}

pub(crate) fn select_q_by(
    z: f64,
    delta: f64,
    bound: impl Fn(usize) -> f64,
    k: usize,
) -> Result<usize, Error> {
    check_z(z)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("target error {delta} must be positive")));
    }
    let mut q = 2usize;
    while q <= k {
        q <<= 1;
    }
    while bound(q) > delta {
        if q >= 1 << 24 {
            return Err(Error::InvalidArgument(format!(
                "target error {delta} needs more than 2^24 contour points at z = {z}"
            )));
        }
        q <<= 1;
    }
    Ok(q)
}

/// Fails if some sample `|p(node)|` is below `2^{−λ/2}·max|p_i|`.
pub(crate) fn contour_guard(values: &[Complex], coeff_log2_max: f64, lambda: usize) -> Result<(), Error> {
    let threshold = coeff_log2_max - lambda as f64 / 2.0;
    for (node, v) in values.iter().enumerate() {
        let lg = v.log2_abs();
        if lg < threshold {
            return Err(Error::ContourProximity { node, log2_value: lg });
        }
    }
    Ok(())
}

/// `(c·[1] + Ω)·v`: the transform of `v` plus `c·Σ_j v_j` in every row.
pub fn apply_shifted_omega(plan: &DftPlan, v: &[Complex], c: &Complex) -> Result<Vec<Complex>, Error> {
    let mut out = plan.forward(v)?;
    if c.is_zero() {
        return Ok(out);
    }
    let total = v.iter().fold(Complex::zero(plan.prec()), |acc, x| &acc + x);
    let shift = c * &total;
    for o in &mut out {
        *o += &shift;
    }
    Ok(out)
}

/// Turns the sampled quotients `v_j = p'/p` into estimates `s_0^*, …, s_kmax^*`.
pub(crate) fn estimates_from_quotients(
    v: &[Complex],
    plan: &DftPlan,
    kmax: usize,
    z: f64,
    d: usize,
) -> Result<Vec<PowerSumEstimate>, Error> {
    let q = plan.q();
    let out = plan.forward(v)?;
    let scale = -(q.trailing_zeros() as i32);
    Ok((0..=kmax)
        .map(|k| PowerSumEstimate {
            k,
            value: out[(k + 1) % q].mul_pow2(scale),
            error_radius: error_bound(z, k, d, q),
            q_used: q,
        })
        .collect())
}

fn check_q_k(q: usize, kmax: usize) -> Result<(), Error> {
    if q < 2 || !q.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("q = {q} is not a power of two ≥ 2")));
    }
    if kmax >= q {
        return Err(Error::InvalidArgument(format!("power index {kmax} needs q > {kmax}, got {q}")));
    }
    Ok(())
}

/// Quotients `p'(ω^j)/p(ω^j)` on the unit circle via folding and two DFTs.
pub(crate) fn unit_circle_quotients(p: &Polynomial, plan: &DftPlan) -> Result<Vec<Complex>, Error> {
    let q = plan.q();
    let lambda = plan.prec();
    let p = p.round_to(lambda);
    if p.degree() == 0 {
        return Ok(vec![Complex::zero(lambda); q]);
    }
    let dp = p.derivative()?;
    let vals = eval_at_roots(&p.fold(q), plan)?;
    contour_guard(&vals, p.log2_max_coeff(), lambda)?;
    let dvals = eval_at_roots(&dp.fold(q), plan)?;
    Ok(dvals.iter().zip(&vals).map(|(a, b)| a / b).collect())
}

/// Quotients `R·p'(x_j)/p(x_j)` at `x_j = X + R·ω^j`, by Horner evaluation.
pub(crate) fn direct_quotients(
    p: &Polynomial,
    center: &Complex,
    contour_radius: &Real,
    plan: &DftPlan,
) -> Result<Vec<Complex>, Error> {
    let lambda = plan.prec();
    let p = p.round_to(lambda);
    let center = center.round_to(lambda);
    let mut vals = Vec::with_capacity(plan.q());
    let mut ders = Vec::with_capacity(plan.q());
    for w in plan.roots() {
        let x = &center + &w.scale(contour_radius);
        let (v, dv) = p.eval_with_derivative(&x);
        vals.push(v);
        ders.push(dv);
    }
    contour_guard(&vals, p.log2_max_coeff(), lambda)?;
    Ok(ders.iter().zip(&vals).map(|(a, b)| (a / b).scale(contour_radius)).collect())
}

/// Power sums of the roots of `p` inside the unit circle, `k = 0..=kmax`.
///
/// `isolation` certifies that `p` has no roots in `1/√ρ < |y| < √ρ`; it only
/// feeds the error radii. `s_0^*` estimates the number of roots inside.
pub fn power_sums_unit_disc(
    p: &Polynomial,
    q: usize,
    kmax: usize,
    isolation: f64,
    ctx: &PrecisionContext,
) -> Result<Vec<PowerSumEstimate>, Error> {
    check_q_k(q, kmax)?;
    let z = 1.0 / isolation.sqrt();
    check_z(z)?;
    let plan = DftPlan::new(q, ctx)?;
    let v = unit_circle_quotients(p, &plan)?;
    estimates_from_quotients(&v, &plan, kmax, z, p.degree())
}

/// Quotient vector for `disc` sampled at `q` contour points, in local coordinates.
pub(crate) fn disc_quotients(
    p: &Polynomial,
    disc: &IsolatedDisc,
    plan: &DftPlan,
    path: ContourPath,
) -> Result<Vec<Complex>, Error> {
    disc.check()?;
    let lambda = plan.prec();
    let radius = disc.contour_radius(lambda);
    match path {
        ContourPath::ShiftAndFold => {
            let g = p.round_to(lambda).taylor_shift_scale(&disc.center.round_to(lambda), &radius);
            unit_circle_quotients(&g, plan)
        }
        ContourPath::Direct => direct_quotients(p, &disc.center, &radius, plan),
    }
}

/// Power sums of the roots inside `disc` with a fixed number of contour points.
pub fn power_sums_with_q(
    p: &Polynomial,
    disc: &IsolatedDisc,
    q: usize,
    kmax: usize,
    path: ContourPath,
    ctx: &PrecisionContext,
) -> Result<Vec<PowerSumEstimate>, Error> {
    disc.check()?;
    check_q_k(q, kmax)?;
    let plan = DftPlan::new(q, ctx)?;
    let v = disc_quotients(p, disc, &plan, path)?;
    estimates_from_quotients(&v, &plan, kmax, disc.z(), p.degree())
}

/// Power sums `s_0 … s_kmax` of the roots inside `disc`, in the local
/// coordinate `y = (x − X)/(r(1+η))`, each certified to at most `delta`.
pub fn power_sums_in_disc(
    p: &Polynomial,
    disc: &IsolatedDisc,
    kmax: usize,
    delta: f64,
    ctx: &PrecisionContext,
) -> Result<Vec<PowerSumEstimate>, Error> {
    disc.check()?;
    let q = select_q(disc.z(), kmax, p.degree(), delta)?;
    power_sums_with_q(p, disc, q, kmax, ContourPath::ShiftAndFold, ctx)
}

/// The `k = 1` row of `(c·[1] + Ω)·v / q`: `s_1^* + c·σ` with
/// `σ = (1/q)·Σ_j v_j`. The radius is that of `s_1^*` about `s_1 + c·σ`.
pub fn shifted_power_sums(
    p: &Polynomial,
    disc: &IsolatedDisc,
    c: &Complex,
    q: usize,
    ctx: &PrecisionContext,
) -> Result<PowerSumEstimate, Error> {
    disc.check()?;
    check_q_k(q, 1)?;
    let plan = DftPlan::new(q, ctx)?;
    let v = disc_quotients(p, disc, &plan, ContourPath::ShiftAndFold)?;
    shifted_estimate(&v, &plan, c, disc.z(), p.degree())
}

pub(crate) fn shifted_estimate(
    v: &[Complex],
    plan: &DftPlan,
    c: &Complex,
    z: f64,
    d: usize,
) -> Result<PowerSumEstimate, Error> {
    let q = plan.q();
    let out = apply_shifted_omega(plan, v, c)?;
    let value = out[2 % q].mul_pow2(-(q.trailing_zeros() as i32));
    let error_radius = error_bound(z, 1, d, q);
    Ok(PowerSumEstimate { k: 1, value, error_radius, q_used: q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::root_of_unity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(lambda: usize) -> PrecisionContext {
        PrecisionContext::with_lambda(lambda, 64, 0).unwrap()
    }

    fn poly_from_roots(roots: &[(f64, f64)], prec: usize) -> Polynomial {
        let r: Vec<Complex> = roots.iter().map(|&(a, b)| Complex::from_f64(a, b, prec)).collect();
        Polynomial::from_roots(&r, prec)
    }

    #[test]
    fn bound_examples() {
        // Values of the closed form at q = 9, 10 for z = 1/2, k = 1, d = 4.
        let b9 = error_bound(0.5, 1, 4, 9);
        let b10 = error_bound(0.5, 1, 4, 10);
        assert!((b9 - 0.012720).abs() < 1e-5, "{b9}");
        assert!((b10 - 0.0063536).abs() < 1e-6, "{b10}");
        assert_eq!(select_q(0.5, 1, 4, 0.0125).unwrap(), 16);
        assert!((error_bound(0.5, 1, 2, 2) - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(select_q(0.5, 1, 2, 0.9).unwrap(), 2);
        assert_eq!(select_q(0.5, 1, 2, 5.0 / 6.0).unwrap(), 2);
        assert!(select_q(1.0, 1, 2, 0.1).is_err());
        assert!(select_q(0.5, 1, 2, 0.0).is_err());
        assert_eq!(select_q(0.5, 5, 2, 10.0).unwrap(), 8);
    }

    #[test]
    fn bound_decreases_with_q() {
        for &z in &[0.3, 0.7, 0.95] {
            for k in 0..4 {
                let mut q = 8;
                while q <= 256 {
                    assert!(error_bound(z, k, 20, 2 * q) < error_bound(z, k, 20, q));
                    q *= 2;
                }
            }
        }
    }

    #[test]
    fn closed_form_single_inner_root() {
        let c = ctx(160);
        let p = Polynomial::from_f64(&[-0.5, 1.0], 160).unwrap();
        let est = power_sums_unit_disc(&p, 8, 1, 4.0, &c).unwrap();
        let expect = Real::from_f64(0.5, 160) + Real::one(160) / Real::from_u64(510, 160);
        let err = (&est[1].value.re - &expect).abs();
        assert!(err.log2_abs() < -150.0);
        assert!(est[1].value.im.log2_abs() < -150.0);
        assert!((est[1].value.re.to_f64() - 0.5).abs() <= est[1].error_radius);
        assert!((est[0].value.re.to_f64() - 1.0).abs() <= est[0].error_radius);
    }

    #[test]
    fn closed_form_outer_root_only_aliases() {
        let c = ctx(160);
        let p = poly_from_roots(&[(0.0, 0.0), (4.0, 0.0)], 160);
        let est = power_sums_unit_disc(&p, 4, 1, 16.0, &c).unwrap();
        let expect = -(Real::from_u64(4, 160) / Real::from_u64(255, 160));
        assert!((&est[1].value.re - &expect).abs().log2_abs() < -150.0);
        assert!(est[1].value.re.to_f64().abs() <= est[1].error_radius);
    }

    #[test]
    fn root_at_center_gives_zero() {
        let c = ctx(128);
        let p = Polynomial::from_f64(&[0.0, 1.0], 128).unwrap();
        for q in [2usize, 4, 16] {
            let est = power_sums_unit_disc(&p, q, 1, 100.0, &c).unwrap();
            assert!(est[1].value.is_zero(), "q={q}: {:?}", est[1].value);
        }
    }

    #[test]
    fn degree_below_q_is_exact() {
        let c = ctx(200);
        let roots = [(0.3, 0.1), (-0.2, 0.25), (0.1, -0.4)];
        let p = poly_from_roots(&roots, 200);
        let est = power_sums_unit_disc(&p, 32, 4, 4.0, &c).unwrap();
        for k in 0..=4 {
            let truth = roots.iter().fold(Complex::zero(200), |acc, &(a, b)| {
                &acc + &Complex::from_f64(a, b, 200).powu(k as u64)
            });
            // Inner-only aliasing starts at z^{32}; far below the tolerance here.
            assert!((&est[k].value - &truth).log2_abs() < -40.0);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let c = ctx(128);
        let p = Polynomial::from_f64(&[-0.5, 1.0], 128).unwrap();
        assert!(power_sums_unit_disc(&p, 6, 1, 4.0, &c).is_err());
        assert!(power_sums_unit_disc(&p, 4, 4, 4.0, &c).is_err());
        assert!(power_sums_unit_disc(&p, 4, 1, 1.0, &c).is_err());
        assert!(IsolatedDisc::new(c.zero(), Real::one(128), 0.9).is_err());
        // A root exactly on the sampling circle.
        let on = Polynomial::from_f64(&[-1.0, 1.0], 128).unwrap();
        assert!(matches!(power_sums_unit_disc(&on, 4, 1, 4.0, &c), Err(Error::ContourProximity { .. })));
    }

    #[test]
    fn disc_example_local_root_at_origin() {
        let c = ctx(200);
        let p = poly_from_roots(&[(3.0, 0.0), (10.0, 0.0)], 200);
        // The other root is 7 away from the center of D(3, 1), so the true ratio is 7.
        let disc = IsolatedDisc::new(c.complex(3.0, 0.0), Real::one(200), 7.0).unwrap();
        let est = power_sums_in_disc(&p, &disc, 1, 1e-10, &c).unwrap();
        assert!(est[1].value.abs_f64() <= est[1].error_radius);
        assert!(est[1].error_radius <= 1e-10);
    }

    #[test]
    fn disc_centered_on_root() {
        let c = ctx(160);
        let p = Polynomial::from_f64(&[-2.5, 1.0], 160).unwrap();
        for r in [0.01, 1.0, 30.0] {
            let disc = IsolatedDisc::new(c.complex(2.5, 0.0), Real::from_f64(r, 160), 9.0).unwrap();
            for path in [ContourPath::ShiftAndFold, ContourPath::Direct] {
                let est = power_sums_with_q(&p, &disc, 8, 1, path, &c).unwrap();
                assert!(est[1].value.log2_abs() < -140.0, "{path:?} r={r}");
            }
        }
    }

    #[test]
    fn root_count_in_disc() {
        let c = ctx(160);
        let p = poly_from_roots(&[(0.5, 0.5), (-1.0, 0.2), (5.0, 0.0), (0.0, -9.0)], 160);
        let disc = IsolatedDisc::new(c.zero(), Real::from_f64(1.2, 160), 4.0).unwrap();
        let est = power_sums_in_disc(&p, &disc, 0, 0.25, &c).unwrap();
        assert!(est[0].error_radius < 0.5);
        assert_eq!(est[0].value.re.round_to_i64(), Some(2));
    }

    #[test]
    fn paths_agree() {
        let c = ctx(200);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let roots: Vec<(f64, f64)> = (0..7).map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
        let p = poly_from_roots(&roots, 200);
        let (a, b) = roots[0];
        let nn = roots[1..].iter().map(|&(x, y)| (x - a).hypot(y - b)).fold(f64::INFINITY, f64::min);
        let disc = IsolatedDisc::new(c.complex(a + nn / 20.0, b), Real::from_f64(nn / 5.0, 200), 4.0).unwrap();
        let fold = power_sums_with_q(&p, &disc, 32, 3, ContourPath::ShiftAndFold, &c).unwrap();
        let direct = power_sums_with_q(&p, &disc, 32, 3, ContourPath::Direct, &c).unwrap();
        for (x, y) in fold.iter().zip(&direct) {
            assert!((&x.value - &y.value).log2_abs() < -150.0);
        }
    }

    #[test]
    fn shifted_matrix_examples() {
        let c = ctx(200);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let plan = DftPlan::new(16, &c).unwrap();
        let v: Vec<Complex> = (0..16).map(|_| c.complex(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let plain = apply_shifted_omega(&plan, &v, &c.zero()).unwrap();
        assert_eq!(plain, plan.forward(&v).unwrap());
        let one = apply_shifted_omega(&plan, &v, &c.one()).unwrap();
        let total = v.iter().fold(c.zero(), |acc, x| &acc + x);
        for (a, b) in one.iter().zip(&plain) {
            assert!((&(a - b) - &total).log2_abs() < -190.0);
        }
        // Naive (c + ω^{hj}) product.
        let shift = c.complex(0.3, -1.7);
        let fast = apply_shifted_omega(&plan, &v, &shift).unwrap();
        for h in 0..16 {
            let mut acc = c.zero();
            for (j, x) in v.iter().enumerate() {
                acc += &(&(&shift + &root_of_unity(16, h * j, &c)) * x);
            }
            assert!((&acc - &fast[h]).log2_abs() <= -200.0 + 20.0);
        }
    }

    #[test]
    fn shifted_estimate_with_zero_shift_matches_plain() {
        let c = ctx(160);
        let p = poly_from_roots(&[(0.2, 0.1), (3.0, 1.0)], 160);
        let disc = IsolatedDisc::new(c.complex(0.1, 0.0), Real::from_f64(0.5, 160), 4.0).unwrap();
        let plain = power_sums_with_q(&p, &disc, 16, 15, ContourPath::ShiftAndFold, &c).unwrap();
        let shifted = shifted_power_sums(&p, &disc, &c.zero(), 16, &c).unwrap();
        assert_eq!(shifted.value, plain[1].value);
        assert_eq!(shifted.error_radius, plain[1].error_radius);
        let unit = shifted_power_sums(&p, &disc, &c.one(), 16, &c).unwrap();
        // The h = 0 row of Ω·v / q is the k = q − 1 estimate.
        assert!((&(&unit.value - &plain[1].value) - &plain[15].value).log2_abs() < -150.0);
    }
}
