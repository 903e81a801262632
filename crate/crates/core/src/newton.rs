//! Newton's iteration from a boosted center.
//!
//! Started at the center of a `5d²`-isolated disc holding a simple root, the
//! iteration `x ← x − p(x)/p'(x)` contracts quadratically from the first step.
//! An `m`-fold root is refined as the simple root of `p^{(m−1)}`.
//!
//! Stopping rule: in the contracting regime `|x_k − α| ≤ 2|x_{k+1} − x_k|`,
//! so `x_k` is returned with radius `2|step_k|` as soon as that is at most ε.
//! A step counts as contracting when `|s_k|/Δ ≤ 4(|s_{k−1}|/Δ)²` or it is at
//! the rounding floor. Three non-contracting steps in a row abort.

use crate::boost::BoostResult;
use crate::error::Error;
use crate::numctx::{Complex, PrecisionContext};
use crate::poly::Polynomial;

/// Target accuracy and the multiplicity of the root being refined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinementRequest {
    log2_epsilon: f64,
    multiplicity: usize,
}

impl RefinementRequest {
    /// ε = `epsilon`, which must lie in (0, 1).
    pub fn new(epsilon: f64) -> Result<Self, Error> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("error bound {epsilon} must lie in (0, 1)")));
        }
        Ok(RefinementRequest { log2_epsilon: epsilon.log2(), multiplicity: 1 })
    }

    /// ε = 2^{−bits}.
    pub fn bits(bits: usize) -> Result<Self, Error> {
        if bits == 0 {
            return Err(Error::InvalidArgument("ε = 2^0 is not below 1".into()));
        }
        Ok(RefinementRequest { log2_epsilon: -(bits as f64), multiplicity: 1 })
    }

    pub fn with_multiplicity(mut self, m: usize) -> Result<Self, Error> {
        if m == 0 {
            return Err(Error::InvalidArgument("multiplicity must be at least 1".into()));
        }
        self.multiplicity = m;
        Ok(self)
    }

    pub fn log2_epsilon(&self) -> f64 {
        self.log2_epsilon
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementResult {
    pub root: Complex,
    /// `lg` of the certified error radius (at most `lg ε` on success).
    pub error_log2: f64,
    pub iterations: usize,
    /// `lg|p(root)|`.
    pub residual_log2: f64,
    /// Contour points used by the boosting stage.
    pub q_used: usize,
    /// All iterates `x_0 = c, x_1, …, x_iterations`.
    pub iterates: Vec<Complex>,
}

impl RefinementResult {
    pub fn error_radius(&self) -> f64 {
        self.error_log2.exp2()
    }
}

/// One step `x − h(x)/h'(x)`.
pub fn newton_step(p: &Polynomial, x: &Complex) -> Complex {
    let (v, dv) = p.eval_with_derivative(x);
    x - &(&v / &dv)
}

pub(crate) enum Advance {
    Continue,
    Converged { error_log2: f64 },
}

/// Step bookkeeping shared by the single-root and batched drivers.
pub(crate) struct NewtonTracker {
    scale_log2: f64,
    eps_log2: f64,
    lambda: usize,
    prev_step_log2: Option<f64>,
    failures: usize,
    max_iterations: usize,
    pub(crate) iterates: Vec<Complex>,
}

impl NewtonTracker {
    pub(crate) fn new(start: Complex, start_radius: f64, eps_log2: f64, lambda: usize) -> Self {
        let max_iterations = 2 * (usize::BITS - lambda.leading_zeros()) as usize + 16;
        NewtonTracker {
            scale_log2: start_radius.log2(),
            eps_log2,
            lambda,
            prev_step_log2: None,
            failures: 0,
            max_iterations,
            iterates: vec![start],
        }
    }

    pub(crate) fn current(&self) -> &Complex {
        self.iterates.last().expect("start iterate")
    }

    pub(crate) fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    /// Feeds `h(x_k)`, `h'(x_k)` at the current iterate.
    pub(crate) fn advance(&mut self, h: &Complex, dh: &Complex) -> Result<Advance, Error> {
        let x = self.current().clone();
        let floor_log2 = x.log2_abs().max(self.scale_log2) - self.lambda as f64 + 12.0;
        if h.is_zero() {
            return Ok(Advance::Converged { error_log2: floor_log2 });
        }
        if dh.is_zero() {
            return Err(Error::NewtonDivergence { iterations: self.iterations() });
        }
        let step = h / dh;
        let step_log2 = step.log2_abs();
        let contracting = match self.prev_step_log2 {
            // The start satisfies the convergence hypothesis by construction.
            None => true,
            Some(prev) => step_log2 <= (2.0 * prev - self.scale_log2 + 2.0).max(floor_log2),
        };
        if contracting {
            self.failures = 0;
        } else {
            self.failures += 1;
        }
        let error_log2 = (step_log2 + 1.0).max(floor_log2);
        if contracting && error_log2 <= self.eps_log2 {
            return Ok(Advance::Converged { error_log2 });
        }
        if step_log2 < floor_log2 {
            return Err(Error::InvalidArgument(format!(
                "working precision {} bits cannot certify 2^{:.1}",
                self.lambda, self.eps_log2
            )));
        }
        if self.failures >= 3 || self.iterations() >= self.max_iterations {
            return Err(Error::NewtonDivergence { iterations: self.iterations() });
        }
        self.prev_step_log2 = Some(step_log2);
        self.iterates.push(&x - &step);
        Ok(Advance::Continue)
    }
}

/// The polynomial Newton actually runs on: `p^{(m−1)}` at working precision.
pub(crate) fn iteration_target(p: &Polynomial, m: usize, lambda: usize) -> Result<Polynomial, Error> {
    if m == 0 || m > p.degree() {
        return Err(Error::InvalidArgument(format!(
            "multiplicity {m} is outside 1..={}",
            p.degree()
        )));
    }
    p.round_to(lambda).nth_derivative(m - 1)
}

/// Refines the root certified by `start` to within `req`'s ε.
pub fn newton_refine(
    p: &Polynomial,
    start: &BoostResult,
    req: &RefinementRequest,
    ctx: &PrecisionContext,
) -> Result<RefinementResult, Error> {
    let lambda = ctx.lambda();
    let target = iteration_target(p, req.multiplicity(), lambda)?;
    let mut tracker = NewtonTracker::new(start.center.round_to(lambda), start.delta, req.log2_epsilon(), lambda);
    loop {
        let (h, dh) = target.eval_with_derivative(tracker.current());
        if let Advance::Converged { error_log2 } = tracker.advance(&h, &dh)? {
            return Ok(finish(p, tracker, error_log2, start.q_used));
        }
    }
}

pub(crate) fn finish(p: &Polynomial, tracker: NewtonTracker, error_log2: f64, q_used: usize) -> RefinementResult {
    let root = tracker.current().clone();
    let residual_log2 = p.eval(&root).log2_abs();
    RefinementResult {
        root,
        error_log2,
        iterations: tracker.iterations(),
        residual_log2,
        q_used,
        iterates: tracker.iterates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_lambda(300, 256, 0).unwrap()
    }

    fn start(c: Complex, delta: f64) -> BoostResult {
        BoostResult { center: c, delta, certified: delta, q_used: 0, multiplicity: 1 }
    }

    #[test]
    fn single_step_example() {
        let p = Polynomial::from_f64(&[-2.0, 0.0, 1.0], 300).unwrap();
        let x1 = newton_step(&p, &Complex::from_f64(1.5, 0.0, 300));
        let want = crate::numctx::Real::from_u64(17, 300) / crate::numctx::Real::from_u64(12, 300);
        assert!((&x1.re - &want).abs().log2_abs() < -295.0);
    }

    #[test]
    fn linear_converges_in_one_iteration() {
        let c = ctx();
        let p = Polynomial::from_f64(&[-3.25, 1.0], 300).unwrap();
        let r = newton_refine(&p, &start(c.complex(10.0, -4.0), 20.0), &RefinementRequest::bits(200).unwrap(), &c)
            .unwrap();
        assert_eq!(r.iterations, 1);
        assert!((&r.root - &c.complex(3.25, 0.0)).log2_abs() < -250.0);
    }

    #[test]
    fn double_root_via_derivative() {
        let c = ctx();
        let p = Polynomial::from_f64(&[1.0, -2.0, 1.0], 300).unwrap();
        let req = RefinementRequest::bits(128).unwrap().with_multiplicity(2).unwrap();
        let r = newton_refine(&p, &start(c.complex(1.3, 0.2), 0.5), &req, &c).unwrap();
        assert_eq!(r.iterations, 1);
        assert!((&r.root - &c.one()).log2_abs() < -250.0);
        assert!(r.error_log2 <= -128.0);
    }

    #[test]
    fn sqrt_two_quadratic() {
        let c = ctx();
        let p = Polynomial::from_f64(&[-2.0, 0.0, 1.0], 300).unwrap();
        let r = newton_refine(&p, &start(c.complex(1.4, 0.0), 0.05), &RefinementRequest::bits(256).unwrap(), &c)
            .unwrap();
        let sqrt2 = crate::numctx::Real::from_u64(2, 300).sqrt();
        assert!((&r.root.re - &sqrt2).abs().log2_abs() <= -256.0);
        assert!(r.error_log2 <= -256.0);
        assert!(r.iterations <= 11);
    }

    #[test]
    fn bad_start_is_reported() {
        let c = ctx();
        // x^2 + 1 from a real start never converges.
        let p = Polynomial::from_f64(&[1.0, 0.0, 1.0], 300).unwrap();
        let err = newton_refine(&p, &start(c.complex(0.3, 0.0), 1e-3), &RefinementRequest::bits(100).unwrap(), &c);
        assert!(matches!(err, Err(Error::NewtonDivergence { .. })));
    }

    #[test]
    fn deterministic() {
        let c = ctx();
        let p = Polynomial::from_f64(&[-2.0, 0.0, 1.0], 300).unwrap();
        let s = start(c.complex(1.4, 0.01), 0.05);
        let req = RefinementRequest::bits(200).unwrap();
        assert_eq!(newton_refine(&p, &s, &req, &c).unwrap(), newton_refine(&p, &s, &req, &c).unwrap());
    }

    #[test]
    fn request_validation() {
        assert!(RefinementRequest::new(1.0).is_err());
        assert!(RefinementRequest::new(0.0).is_err());
        assert!(RefinementRequest::bits(0).is_err());
        assert!(RefinementRequest::bits(3).unwrap().with_multiplicity(0).is_err());
        let c = ctx();
        let p = Polynomial::from_f64(&[-2.0, 1.0], 300).unwrap();
        let req = RefinementRequest::bits(10).unwrap().with_multiplicity(3).unwrap();
        assert!(newton_refine(&p, &start(c.one(), 0.1), &req, &c).is_err());
    }
}
