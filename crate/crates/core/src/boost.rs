//! Shrinking a mildly isolated disc around a single root into a `5d²`-isolated one.
//!
//! With `D(X, r)` being `(1+η)²`-isolated, any center `c` within
//! `Δ = 0.2·r·η/d²` of the root leaves the other roots at least `rη = 5d²Δ`
//! away from `c`, so `D(c, Δ)` is `5d²`-isolated. The center is the first
//! power sum of the roots in the disc (the root itself, or `m` times an
//! `m`-fold root), estimated with enough contour points to meet `Δ`.

use crate::error::Error;
use crate::numctx::{Complex, PrecisionContext};
use crate::poly::Polynomial;
use crate::powersum::{power_sums_with_q, select_q, ContourPath, IsolatedDisc};

#[derive(Clone, Debug, PartialEq)]
pub struct BoostResult {
    /// Boosted center in global coordinates.
    pub center: Complex,
    /// `Δ = 0.2·r·η/d²`; the root lies in `D(center, delta)`.
    pub delta: f64,
    /// The certified distance bound actually achieved (at most `delta`).
    pub certified: f64,
    pub q_used: usize,
    /// Multiplicity of the root the disc was declared to hold.
    pub multiplicity: usize,
}

/// `0.2·r·η/d²`.
pub fn boost_target(radius: f64, eta: f64, d: usize) -> f64 {
    0.2 * radius * eta / (d * d) as f64
}

/// Estimates the root in `disc` to within `Δ = 0.2·r·η/d²`.
///
/// The disc must hold exactly one distinct root; its multiplicity is taken
/// from `disc.claimed_root_count` (default 1).
pub fn boost_isolation(
    p: &Polynomial,
    disc: &IsolatedDisc,
    ctx: &PrecisionContext,
) -> Result<BoostResult, Error> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::DegreeTooSmall { degree: 0, minimum: 1 });
    }
    if !(disc.isolation > 1.0) {
        return Err(Error::NotIsolated(disc.isolation));
    }
    let m = disc.claimed_root_count.unwrap_or(1);
    if m == 0 || m > d {
        return Err(Error::InvalidArgument(format!("multiplicity {m} is outside 1..={d}")));
    }
    let lambda = ctx.lambda();
    let contour = disc.contour_radius(lambda);
    let contour_f = contour.to_f64();
    let delta = boost_target(disc.radius.to_f64(), disc.eta(), d);

    // A local error ε on s_1 moves the global center by R·ε/m.
    let local_target = delta * m as f64 / contour_f;
    let q = select_q(disc.z(), 1, d, local_target)?;
    let est = power_sums_with_q(p, disc, q, 1, ContourPath::ShiftAndFold, ctx)?;
    let s1 = &est[1];

    let mut offset = s1.value.scale(&contour);
    if m > 1 {
        offset = offset.scale(&crate::numctx::Real::from_u64(m as u64, lambda).recip());
    }
    let center = &disc.center.round_to(lambda) + &offset;
    Ok(BoostResult {
        center,
        delta,
        certified: s1.error_radius * contour_f / m as f64,
        q_used: q,
        multiplicity: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::Real;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_lambda(192, 100, 0).unwrap()
    }

    #[test]
    fn target_formula() {
        assert!((boost_target(0.5, 1.0, 2) - 0.025).abs() < 1e-15);
    }

    #[test]
    fn linear_root_at_center() {
        let c = ctx();
        let p = Polynomial::from_f64(&[-4.0, 1.0], 192).unwrap();
        let disc = IsolatedDisc::new(c.complex(4.0, 0.0), Real::one(192), 1e6).unwrap();
        let b = boost_isolation(&p, &disc, &c).unwrap();
        assert!((&b.center - &c.complex(4.0, 0.0)).log2_abs() < -180.0);
        assert!((b.delta - 0.2 * (1e3 - 1.0)).abs() < 1e-9);
        assert!(b.certified <= b.delta);
    }

    #[test]
    fn four_real_roots() {
        let c = ctx();
        let roots: Vec<Complex> = [0.5, 3.0, 5.0, 7.0].iter().map(|&x| c.complex(x, 0.0)).collect();
        let p = Polynomial::from_roots(&roots, 192);
        // The nearest other root is 2.5 from the center.
        let iso = (2.5f64 / 0.9).min(2.9);
        let disc = IsolatedDisc::new(c.complex(0.5, 0.0), Real::from_f64(0.9, 192), iso).unwrap();
        let b = boost_isolation(&p, &disc, &c).unwrap();
        let dist = (&b.center - &roots[0]).abs_f64();
        assert!(dist <= b.delta, "{dist} > {}", b.delta);
        assert!(b.certified <= b.delta);
        // Other roots are at least 5d²Δ away.
        let nearest = roots[1..].iter().map(|r| (&b.center - r).abs_f64()).fold(f64::INFINITY, f64::min);
        assert!(nearest / b.delta >= 5.0 * 16.0);
    }

    #[test]
    fn double_root_is_divided_by_multiplicity() {
        let c = ctx();
        let roots: Vec<Complex> = [1.0, 1.0, 3.0].iter().map(|&x| c.complex(x, 0.0)).collect();
        let p = Polynomial::from_roots(&roots, 192);
        let disc = IsolatedDisc::new(c.complex(1.1, 0.1), Real::from_f64(0.4, 192), 4.0)
            .unwrap()
            .with_root_count(2);
        let b = boost_isolation(&p, &disc, &c).unwrap();
        assert_eq!(b.multiplicity, 2);
        assert!((&b.center - &roots[0]).abs_f64() <= b.delta);
    }

    #[test]
    fn rejects_unisolated_disc() {
        let c = ctx();
        let p = Polynomial::from_f64(&[-4.0, 1.0], 192).unwrap();
        let mut disc = IsolatedDisc::new(c.complex(4.0, 0.0), Real::one(192), 2.0).unwrap();
        disc.isolation = 1.0;
        assert!(matches!(boost_isolation(&p, &disc, &c), Err(Error::NotIsolated(_))));
    }
}
