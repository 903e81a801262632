//! Precision-controlled arithmetic and the working-precision schedule.
//!
//! All arithmetic is done on [`Real`] and [`Complex`] values backed by
//! `astro-float` big-floats, rounded half-to-even at the precision carried by
//! the operands. A [`PrecisionContext`] fixes that precision (λ bits) for a
//! computation whose result must be accurate to ℓ bits.

mod complex;
mod real;

pub use complex::Complex;
pub use real::{Real, ROUNDING};

use crate::error::Error;

/// Working precision λ, target output precision ℓ and coefficient bound τ, all in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    lambda: usize,
    ell: usize,
    tau: usize,
}

/// Bits of working precision needed so that the estimator pipeline on a
/// degree-`d` polynomial with `lg‖p‖∞ ≤ tau` delivers `ell` correct bits:
///
/// `λ = ⌈ℓ + τ·lg(8d) + (3/2)·lg²d + (13/2)·lg d + 4·lg lg d + 18⌉`
pub fn working_precision_for(ell: usize, tau: usize, d: usize) -> Result<usize, Error> {
    if ell < 1 {
        return Err(Error::InvalidArgument("target precision must be at least 1 bit".into()));
    }
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d, minimum: 2 });
    }
    let lg = (d as f64).log2();
    let lam = ell as f64
        + tau as f64 * (8.0 * d as f64).log2()
        + 1.5 * lg * lg
        + 6.5 * lg
        + 4.0 * lg.log2()
        + 18.0;
    // The sum is exact for power-of-two degrees; elsewhere absorb the last-ulp noise.
    Ok((lam - 1e-9).ceil() as usize)
}

impl PrecisionContext {
    /// Context for an `ell`-bit result on a degree-`d` input with coefficient bound `tau`.
    ///
    /// Linear inputs (d = 1) skip the schedule and use `ℓ + τ + 8` bits.
    pub fn new(ell: usize, tau: usize, d: usize) -> Result<Self, Error> {
        let lambda = match d {
            0 => return Err(Error::DegreeTooSmall { degree: 0, minimum: 1 }),
            1 => {
                if ell < 1 {
                    return Err(Error::InvalidArgument(
                        "target precision must be at least 1 bit".into(),
                    ));
                }
                ell + tau + 8
            }
            _ => working_precision_for(ell, tau, d)?,
        };
        Ok(PrecisionContext { lambda, ell, tau })
    }

    /// Context with an explicit working precision (e.g. a command-line override).
    pub fn with_lambda(lambda: usize, ell: usize, tau: usize) -> Result<Self, Error> {
        if ell < 1 {
            return Err(Error::InvalidArgument("target precision must be at least 1 bit".into()));
        }
        if lambda < ell {
            return Err(Error::InvalidArgument(format!(
                "working precision {lambda} is below the target precision {ell}"
            )));
        }
        Ok(PrecisionContext { lambda, ell, tau })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Same targets, `extra` more bits of working precision.
    pub fn widened(&self, extra: usize) -> Self {
        PrecisionContext { lambda: self.lambda + extra, ..*self }
    }

    pub fn real(&self, x: f64) -> Real {
        Real::from_f64(x, self.lambda)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::from_f64(re, im, self.lambda)
    }

    pub fn zero(&self) -> Complex {
        Complex::zero(self.lambda)
    }

    pub fn one(&self) -> Complex {
        Complex::one(self.lambda)
    }
}

/// `exp(2πi·j/q)` rounded to `ctx.lambda()` bits. Indices are taken modulo `q`;
/// multiples of an eighth turn are produced exactly (up to the rounding of √½).
pub fn root_of_unity(q: usize, j: usize, ctx: &PrecisionContext) -> Complex {
    root_of_unity_prec(q, j, ctx.lambda())
}

pub(crate) fn root_of_unity_prec(q: usize, j: usize, prec: usize) -> Complex {
    assert!(q >= 1, "root of unity order must be positive");
    let j = j % q;
    if (4 * j).is_multiple_of(q) {
        return match 4 * j / q {
            0 => Complex::one(prec),
            1 => Complex::i(prec),
            2 => -Complex::one(prec),
            _ => -Complex::i(prec),
        };
    }
    if (8 * j).is_multiple_of(q) {
        let s = Real::from_f64(0.5, prec).sqrt();
        let (re, im) = match 8 * j / q {
            1 => (s.clone(), s),
            3 => (-&s, s),
            5 => (-&s, -s),
            _ => (s.clone(), -s),
        };
        return Complex::new(re, im);
    }
    let guard = prec + 32;
    let theta = Real::pi(guard).mul_pow2(1) * Real::from_u64(j as u64, guard)
        / Real::from_u64(q as u64, guard);
    Complex::new(theta.cos().round_to(prec), theta.sin().round_to(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form evaluated term by term in a different order, with exact
    /// power-of-two logarithms handled separately.
    fn schedule_oracle(ell: f64, tau: f64, d: f64) -> f64 {
        let lgd = d.ln() / std::f64::consts::LN_2;
        let lglgd = lgd.ln() / std::f64::consts::LN_2;
        let terms = [18.0, 4.0 * lglgd, 13.0 * lgd / 2.0, 3.0 * lgd * lgd / 2.0, tau * (3.0 + lgd), ell];
        terms.iter().sum::<f64>()
    }

    #[test]
    fn schedule_examples() {
        assert_eq!(working_precision_for(100, 8, 16).unwrap(), 232);
        assert_eq!(working_precision_for(1, 0, 2).unwrap(), 27);
        // 256 + 144 + 54 + 39 + 4·lg 6 + 18 = 521.34...
        let o = schedule_oracle(256.0, 16.0, 64.0);
        assert!((o - 521.3399).abs() < 1e-3, "{o}");
        assert_eq!(working_precision_for(256, 16, 64).unwrap(), 522);
    }

    #[test]
    fn schedule_matches_oracle_and_is_monotone() {
        for d in 2..200usize {
            for tau in [0usize, 1, 7, 30] {
                for ell in [1usize, 53, 200] {
                    let got = working_precision_for(ell, tau, d).unwrap();
                    let want = schedule_oracle(ell as f64, tau as f64, d as f64);
                    assert!(got as f64 >= want - 1e-6 && (got as f64) < want + 1.0);
                    assert!(working_precision_for(ell + 1, tau, d).unwrap() >= got);
                    assert!(working_precision_for(ell, tau + 1, d).unwrap() >= got);
                    assert!(working_precision_for(ell, tau, d + 1).unwrap() >= got);
                }
            }
        }
    }

    #[test]
    fn schedule_rejects_degenerate_inputs() {
        assert!(matches!(working_precision_for(10, 0, 1), Err(Error::DegreeTooSmall { .. })));
        assert!(working_precision_for(0, 0, 4).is_err());
        let lin = PrecisionContext::new(100, 5, 1).unwrap();
        assert_eq!(lin.lambda(), 113);
        assert!(PrecisionContext::with_lambda(50, 100, 0).is_err());
    }

    #[test]
    fn roots_of_unity_examples() {
        let ctx = PrecisionContext::with_lambda(200, 100, 0).unwrap();
        assert_eq!(root_of_unity(4, 1, &ctx), Complex::i(200));
        assert_eq!(root_of_unity(2, 1, &ctx), -Complex::one(200));
        assert_eq!(root_of_unity(7, 0, &ctx), Complex::one(200));
        let w = root_of_unity(8, 1, &ctx);
        let s = Real::from_f64(2.0, 200).sqrt().mul_pow2(-1);
        assert!((&w.re - &s).abs() <= Real::pow2(-199, 200));
        assert!((&w.im - &s).abs() <= Real::pow2(-199, 200));
    }

    #[test]
    fn roots_of_unity_are_unimodular_and_inverse_paired() {
        let ctx = PrecisionContext::with_lambda(256, 128, 0).unwrap();
        let lam = ctx.lambda() as i32;
        for q in [3usize, 5, 12, 64, 100] {
            for j in 0..q {
                let w = root_of_unity(q, j, &ctx);
                let err = (w.abs() - Real::one(256)).abs();
                assert!(err <= Real::pow2(1 - lam, 64), "q={q} j={j}");
                let prod = &w * &root_of_unity(q, q - j, &ctx);
                assert!((&prod - &Complex::one(256)).abs() <= Real::pow2(2 - lam, 64));
            }
        }
    }
}
