//! Refining several roots at once, and recovering the factor for a cluster.
//!
//! [`refine_all`] samples `p` and `p'` on the contour of every disc in one
//! batch of multipoint evaluations, estimates each root from the first power
//! sum, and then runs Newton on all discs in lock-step sweeps, each sweep
//! batching the evaluations at the current iterates.
//!
//! [`extract_factor`] turns the power sums of the `m` roots in a disc into the
//! coefficients of `f = Π (x − x_i)` through Newton's identities.

use crate::boost::{boost_isolation, boost_target, BoostResult};
use crate::dft::DftPlan;
use crate::error::Error;
use crate::multipoint::eval_many_with_derivative;
use crate::newton::{finish, iteration_target, newton_refine, Advance, NewtonTracker, RefinementRequest, RefinementResult};
use crate::numctx::{Complex, PrecisionContext, Real};
use crate::poly::Polynomial;
use crate::powersum::{contour_guard, estimates_from_quotients, power_sums_in_disc, select_q, IsolatedDisc};

/// Validated discs for [`refine_all`], with the contour size chosen per disc.
#[derive(Clone, Debug, PartialEq)]
pub struct AllRootsPlan {
    discs: Vec<IsolatedDisc>,
    q: Vec<usize>,
    request: RefinementRequest,
    degree: usize,
}

impl AllRootsPlan {
    /// Checks that the discs are isolated and pairwise disjoint and picks, for
    /// each, the smallest `q` whose first power sum meets the boost target.
    pub fn new(p: &Polynomial, discs: Vec<IsolatedDisc>, request: RefinementRequest) -> Result<Self, Error> {
        let d = p.degree();
        if d == 0 {
            return Err(Error::DegreeTooSmall { degree: 0, minimum: 1 });
        }
        if discs.is_empty() {
            return Err(Error::InvalidArgument("no discs".into()));
        }
        let mut total = 0;
        for disc in &discs {
            disc.check()?;
            total += multiplicity_of(disc);
        }
        if total > d {
            return Err(Error::InvalidArgument(format!("discs claim {total} roots of a degree-{d} polynomial")));
        }
        for i in 0..discs.len() {
            for j in i + 1..discs.len() {
                if discs[i].overlaps(&discs[j]) {
                    return Err(Error::OverlappingDiscs(i, j));
                }
            }
        }
        let q = discs
            .iter()
            .map(|disc| {
                let m = multiplicity_of(disc);
                let delta = boost_target(disc.radius.to_f64(), disc.eta(), d);
                let contour = disc.radius.to_f64() * disc.isolation.sqrt();
                select_q(disc.z(), 1, d, delta * m as f64 / contour)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AllRootsPlan { discs, q, request, degree: d })
    }

    pub fn discs(&self) -> &[IsolatedDisc] {
        &self.discs
    }

    /// Contour points per disc.
    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn total_points(&self) -> usize {
        self.q.iter().sum()
    }

    pub fn request(&self) -> &RefinementRequest {
        &self.request
    }
}

fn multiplicity_of(disc: &IsolatedDisc) -> usize {
    disc.claimed_root_count.unwrap_or(1)
}

/// Boost and Newton for one disc. The multiplicity comes from the request if
/// it is above one, else from the disc's declared root count.
pub fn refine_root(
    p: &Polynomial,
    disc: &IsolatedDisc,
    request: &RefinementRequest,
    ctx: &PrecisionContext,
) -> Result<RefinementResult, Error> {
    let m = if request.multiplicity() > 1 { request.multiplicity() } else { multiplicity_of(disc) };
    let disc = disc.clone().with_root_count(m);
    let start = boost_isolation(p, &disc, ctx)?;
    newton_refine(p, &start, &request.with_multiplicity(m)?, ctx)
}

/// Refines the root in every disc of `plan`. Failures are reported per disc;
/// the output is in disc order.
pub fn refine_all(
    p: &Polynomial,
    plan: &AllRootsPlan,
    ctx: &PrecisionContext,
) -> Result<Vec<Result<RefinementResult, Error>>, Error> {
    if p.degree() != plan.degree {
        return Err(Error::InvalidArgument(format!(
            "plan was built for degree {}, polynomial has degree {}",
            plan.degree,
            p.degree()
        )));
    }
    if plan.discs.len() == 1 {
        return Ok(vec![refine_root(p, &plan.discs[0], &plan.request, ctx)]);
    }
    let starts = boost_all(p, plan, ctx)?;
    newton_all(p, plan, starts, ctx)
}

/// Boosted centers for every disc from one batch of contour evaluations.
pub fn boost_all(
    p: &Polynomial,
    plan: &AllRootsPlan,
    ctx: &PrecisionContext,
) -> Result<Vec<Result<BoostResult, Error>>, Error> {
    let lambda = ctx.lambda();
    let d = p.degree();
    let p = p.round_to(lambda);
    let dp = p.derivative()?;

    let mut nodes = Vec::with_capacity(plan.total_points());
    let mut dft_plans = Vec::with_capacity(plan.discs.len());
    let mut radii = Vec::with_capacity(plan.discs.len());
    for (disc, &q) in plan.discs.iter().zip(&plan.q) {
        let dft = DftPlan::new(q, ctx)?;
        let radius = disc.contour_radius(lambda);
        let center = disc.center.round_to(lambda);
        nodes.extend(dft.roots().iter().map(|w| &center + &w.scale(&radius)));
        dft_plans.push(dft);
        radii.push(radius);
    }
    let values: Vec<(Complex, Complex)> = eval_many_with_derivative(&p, dp.coeffs(), &nodes, lambda)
        .into_iter()
        .map(|(v, dv)| (v.round_to(lambda), dv.round_to(lambda)))
        .collect();

    let mut offset = 0;
    let mut out = Vec::with_capacity(plan.discs.len());
    for ((disc, dft), radius) in plan.discs.iter().zip(&dft_plans).zip(&radii) {
        let q = dft.q();
        let batch = &values[offset..offset + q];
        offset += q;
        out.push(boost_from_samples(&p, disc, dft, radius, batch, d, lambda));
    }
    Ok(out)
}

fn boost_from_samples(
    p: &Polynomial,
    disc: &IsolatedDisc,
    dft: &DftPlan,
    radius: &Real,
    samples: &[(Complex, Complex)],
    d: usize,
    lambda: usize,
) -> Result<BoostResult, Error> {
    let vals: Vec<Complex> = samples.iter().map(|(v, _)| v.clone()).collect();
    contour_guard(&vals, p.log2_max_coeff(), lambda)?;
    let quotients: Vec<Complex> = samples.iter().map(|(v, dv)| (dv / v).scale(radius)).collect();
    let est = estimates_from_quotients(&quotients, dft, 1, disc.z(), d)?;
    let m = multiplicity_of(disc);
    let mut offset = est[1].value.scale(radius);
    if m > 1 {
        offset = offset.scale(&Real::from_u64(m as u64, lambda).recip());
    }
    let contour = radius.to_f64();
    Ok(BoostResult {
        center: &disc.center.round_to(lambda) + &offset,
        delta: boost_target(disc.radius.to_f64(), disc.eta(), d),
        certified: est[1].error_radius * contour / m as f64,
        q_used: dft.q(),
        multiplicity: m,
    })
}

/// Lock-step Newton from the boosted centers; each sweep evaluates the
/// iteration targets at all active iterates in one batch per multiplicity.
fn newton_all(
    p: &Polynomial,
    plan: &AllRootsPlan,
    starts: Vec<Result<BoostResult, Error>>,
    ctx: &PrecisionContext,
) -> Result<Vec<Result<RefinementResult, Error>>, Error> {
    let lambda = ctx.lambda();
    let eps = plan.request.log2_epsilon();
    let n = starts.len();
    let mut results: Vec<Option<Result<RefinementResult, Error>>> = (0..n).map(|_| None).collect();
    let mut trackers: Vec<Option<NewtonTracker>> = Vec::with_capacity(n);
    let mut q_used = vec![0; n];
    for (i, s) in starts.into_iter().enumerate() {
        match s {
            Ok(b) => {
                q_used[i] = b.q_used;
                trackers.push(Some(NewtonTracker::new(b.center.round_to(lambda), b.delta, eps, lambda)));
            }
            Err(e) => {
                results[i] = Some(Err(e));
                trackers.push(None);
            }
        }
    }

    let mut multiplicities: Vec<usize> = plan.discs.iter().map(multiplicity_of).collect();
    multiplicities.sort_unstable();
    multiplicities.dedup();
    let mut targets = Vec::with_capacity(multiplicities.len());
    for &m in &multiplicities {
        let h = iteration_target(p, m, lambda)?;
        let dh: Vec<Complex> = if h.degree() == 0 { Vec::new() } else { h.derivative()?.coeffs().to_vec() };
        targets.push((m, h, dh));
    }

    while trackers.iter().any(Option::is_some) {
        for (m, h, dh) in &targets {
            let active: Vec<usize> = (0..n)
                .filter(|&i| trackers[i].is_some() && multiplicity_of(&plan.discs[i]) == *m)
                .collect();
            if active.is_empty() {
                continue;
            }
            let points: Vec<Complex> =
                active.iter().map(|&i| trackers[i].as_ref().expect("active").current().clone()).collect();
            let values = eval_many_with_derivative(h, dh, &points, lambda);
            for (&i, (v, dv)) in active.iter().zip(values) {
                let tracker = trackers[i].as_mut().expect("active");
                match tracker.advance(&v.round_to(lambda), &dv.round_to(lambda)) {
                    Ok(Advance::Continue) => {}
                    Ok(Advance::Converged { error_log2 }) => {
                        let t = trackers[i].take().expect("active");
                        results[i] = Some(Ok(finish(p, t, error_log2, q_used[i])));
                    }
                    Err(e) => {
                        trackers[i] = None;
                        results[i] = Some(Err(e));
                    }
                }
            }
        }
    }
    Ok(results.into_iter().map(|r| r.expect("every disc settles")).collect())
}

/// Monic factor of `p` whose roots are the roots of `p` in a disc.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    /// `f_0, …, f_m` with `f_m = 1`.
    pub coeffs: Vec<Complex>,
    pub degree: usize,
    /// `lg(‖p mod f‖∞ / ‖p‖∞)`.
    pub residual_log2: f64,
    /// Contour points used for the power sums.
    pub q_used: usize,
}

impl Factor {
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone()).expect("monic")
    }
}

/// `e_1, …, e_m` from `s_1, …, s_m` by `k·e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} s_i`.
pub fn elementary_from_power_sums(s: &[Complex], prec: usize) -> Vec<Complex> {
    let mut e = vec![Complex::one(prec)];
    for k in 1..=s.len() {
        let mut acc = Complex::zero(prec);
        for i in 1..=k {
            let t = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        e.push(acc.scale(&Real::from_u64(k as u64, prec).recip()));
    }
    e
}

/// The monic factor for the roots in `disc`, of degree given by the rounded
/// zeroth power sum (checked against `disc.claimed_root_count` if present).
pub fn extract_factor(p: &Polynomial, disc: &IsolatedDisc, ctx: &PrecisionContext) -> Result<Factor, Error> {
    let lambda = ctx.lambda();
    let d = p.degree();
    if d == 0 {
        return Err(Error::DegreeTooSmall { degree: 0, minimum: 1 });
    }
    let count = power_sums_in_disc(p, disc, 0, 0.25, ctx)?;
    if count[0].error_radius >= 0.5 {
        return Err(Error::AmbiguousRootCount(count[0].error_radius));
    }
    let estimated = count[0].value.re.round_to_i64().unwrap_or(-1);
    if let Some(declared) = disc.claimed_root_count {
        if estimated != declared as i64 {
            return Err(Error::RootCountMismatch { declared, estimated });
        }
    }
    if estimated < 1 || estimated as usize > d {
        return Err(Error::RootCountMismatch { declared: disc.claimed_root_count.unwrap_or(0), estimated });
    }
    let m = estimated as usize;

    // Local power-sum errors are amplified by at most 2^m through Newton's
    // identities and by (1 + |X| + R)^m on the way back to x.
    let radius = disc.contour_radius(lambda);
    let spread = (disc.center.abs_f64() + radius.to_f64()).max(1.0).log2();
    let lg_delta = -(ctx.ell() as f64) - m as f64 * (1.0 + spread) - 4.0;
    let sums = power_sums_in_disc(p, disc, m, lg_delta.exp2(), ctx)?;
    let s: Vec<Complex> = sums[1..].iter().map(|e| e.value.clone()).collect();
    let e = elementary_from_power_sums(&s, lambda);

    // g(y) = Σ (−1)^k e_k y^{m−k}, and f(x) = R^m·g((x − X)/R).
    let local: Vec<Complex> = (0..=m)
        .map(|i| {
            let k = m - i;
            if k.is_multiple_of(2) {
                e[k].clone()
            } else {
                -&e[k]
            }
        })
        .collect();
    let g = Polynomial::new(local)?;
    let inv_r = radius.recip();
    let center = disc.center.round_to(lambda).scale(&inv_r);
    let shifted = g.taylor_shift_scale(&-center, &inv_r);
    let rm = (0..m).fold(Real::one(lambda), |acc, _| &acc * &radius);
    let coeffs: Vec<Complex> = shifted.coeffs().iter().map(|c| c.scale(&rm)).collect();

    let f = Polynomial::new(coeffs.clone())?;
    let (_, rem) = p.round_to(lambda).div_rem(&f);
    let rem_log2 = rem.iter().map(Complex::log2_abs).fold(f64::NEG_INFINITY, f64::max);
    Ok(Factor {
        coeffs,
        degree: m,
        residual_log2: rem_log2 - p.log2_max_coeff(),
        q_used: sums[0].q_used,
    })
}
