//! Independent reference root finder and disc generator.
//!
//! Aberth–Ehrlich simultaneous iteration started from a perturbed circle whose
//! radius is the Cauchy bound (the positive root of
//! `|p_d|x^d − Σ_{i<d} |p_i| x^i`). A cheap 64-bit pass gets every estimate
//! close, then the requested precision finishes the job.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::numctx::{Complex, Real};
use crate::poly::Polynomial;
use crate::powersum::IsolatedDisc;

const LOW_PREC: usize = 64;
const LOW_SWEEPS: usize = 2000;
const HIGH_SWEEPS: usize = 60;

/// Isolation reported for the disc of a lone root.
pub const LONE_ROOT_ISOLATION: f64 = 1e6;

/// Positive root of `|p_d|x^d − Σ |p_i|x^i`, found by bisection in `f64`.
pub fn cauchy_bound(p: &Polynomial) -> f64 {
    let a: Vec<f64> = p.coeffs().iter().map(Complex::abs_f64).collect();
    let d = p.degree();
    let f = |x: f64| {
        let mut s = 0.0;
        for (i, &ai) in a.iter().enumerate().take(d) {
            s += ai * x.powi(i as i32);
        }
        a[d] * x.powi(d as i32) - s
    };
    let mut hi = 1.0;
    while f(hi) <= 0.0 && hi < 1e300 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn starts(p: &Polynomial, prec: usize) -> Vec<Complex> {
    let d = p.degree();
    let radius = cauchy_bound(p).max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ab3_e47d ^ d as u64);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    (0..d)
        .map(|k| {
            let t = phase + std::f64::consts::TAU * (k as f64 + rng.gen_range(-0.2..0.2)) / d as f64;
            let r = radius * rng.gen_range(0.9..1.0);
            Complex::from_f64(r * t.cos(), r * t.sin(), prec)
        })
        .collect()
}

/// Runs sweeps until every correction is below `2^{tol_log2}·max(1, |z|)`.
fn aberth(p: &Polynomial, z: &mut [Complex], tol_log2: f64, max_sweeps: usize) -> Result<(), Error> {
    let d = z.len();
    for _ in 0..max_sweeps {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..d {
            let (v, dv) = p.eval_with_derivative(&z[i]);
            if v.is_zero() {
                continue;
            }
            let newton = &v / &dv;
            let mut repulse = Complex::zero(z[i].prec());
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = &z[i] - zj;
                    if !diff.is_zero() {
                        repulse += &diff.recip();
                    }
                }
            }
            let denom = &Complex::one(z[i].prec()) - &(&newton * &repulse);
            let step = if denom.is_zero() { newton } else { &newton / &denom };
            let rel = step.log2_abs() - z[i].log2_abs().max(0.0);
            worst = worst.max(rel);
            z[i] = &z[i] - &step;
        }
        if worst <= tol_log2 {
            return Ok(());
        }
    }
    Err(Error::OracleNonConvergence { sweeps: max_sweeps })
}

/// All `d` roots of `p` at `precision` bits, checked by residual and pairwise
/// separation. Fails on (near-)multiple roots instead of returning them.
pub fn oracle_roots(p: &Polynomial, precision: usize) -> Result<Vec<Complex>, Error> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::DegreeTooSmall { degree: 0, minimum: 1 });
    }
    let prec = precision.max(LOW_PREC);
    if d == 1 {
        let hp = p.round_to(prec);
        return Ok(vec![-&(&hp.coeffs()[0] / &hp.coeffs()[1])]);
    }
    let low = p.round_to(LOW_PREC);
    let mut z = starts(p, LOW_PREC);
    aberth(&low, &mut z, -40.0, LOW_SWEEPS)?;

    let high = p.round_to(prec);
    let mut z: Vec<Complex> = z.iter().map(|x| x.round_to(prec)).collect();
    aberth(&high, &mut z, -(prec as f64) * 0.75, HIGH_SWEEPS)?;

    let scale = |x: &Complex| x.log2_abs().max(0.0);
    for i in 0..d {
        for j in i + 1..d {
            let gap = (&z[i] - &z[j]).log2_abs();
            if gap < scale(&z[i]).max(scale(&z[j])) - prec as f64 / 4.0 {
                return Err(Error::OracleMultipleRoot(i));
            }
        }
    }
    let norm = high.log2_max_coeff();
    for x in &z {
        let bound = -(prec as f64) / 2.0 + norm + d as f64 * scale(x);
        if high.eval(x).log2_abs() > bound {
            return Err(Error::OracleNonConvergence { sweeps: HIGH_SWEEPS });
        }
    }
    Ok(z)
}

/// Discs `D(z_i + δ_i, r_i)`, one per root, each `isolation`-isolated, with
/// `r_i = nn_i/(isolation + 1/2)` and `|δ_i| = r_i/8` in a seeded direction.
pub fn discs_from_roots(roots: &[Complex], isolation: f64) -> Result<Vec<IsolatedDisc>, Error> {
    if !(isolation > 1.0) {
        return Err(Error::NotIsolated(isolation));
    }
    let prec = roots.first().map_or(64, Complex::prec);
    if roots.len() == 1 {
        let center = &roots[0] + &Complex::from_f64(0.125, 0.0, prec);
        return Ok(vec![IsolatedDisc::new(center, Real::one(prec), LONE_ROOT_ISOLATION)?]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d15c ^ roots.len() as u64);
    let mut discs = Vec::with_capacity(roots.len());
    for (i, zi) in roots.iter().enumerate() {
        let nn = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, zj)| (zi - zj).abs_f64())
            .fold(f64::INFINITY, f64::min);
        if !(nn > 0.0) {
            return Err(Error::TooClustered(i, i));
        }
        let r = nn / (isolation + 0.5);
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let center = zi + &Complex::from_f64(r / 8.0 * t.cos(), r / 8.0 * t.sin(), prec);
        discs.push(IsolatedDisc::new(center, Real::from_f64(r, prec), isolation)?);
    }
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if discs[i].overlaps(&discs[j]) {
                return Err(Error::TooClustered(i, j));
            }
        }
    }
    Ok(discs)
}

/// Oracle roots of `p` at its own precision, wrapped in isolated discs.
pub fn oracle_discs(p: &Polynomial, isolation: f64) -> Result<Vec<IsolatedDisc>, Error> {
    discs_from_roots(&oracle_roots(p, p.prec())?, isolation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(a: &Complex, x: f64, y: f64, lg_tol: f64) -> bool {
        (a - &Complex::from_f64(x, y, a.prec())).log2_abs() <= lg_tol
    }

    #[test]
    fn imaginary_unit_pair() {
        let p = Polynomial::from_f64(&[1.0, 0.0, 1.0], 128).unwrap();
        let mut z = oracle_roots(&p, 128).unwrap();
        z.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!(near(&z[0], 0.0, -1.0, -100.0));
        assert!(near(&z[1], 0.0, 1.0, -100.0));
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = Polynomial::from_f64(&[-1.0, 0.0, 0.0, 1.0], 128).unwrap();
        let z = oracle_roots(&p, 128).unwrap();
        let h = 3f64.sqrt() / 2.0;
        for (x, y) in [(1.0, 0.0), (-0.5, h), (-0.5, -h)] {
            assert!(z.iter().any(|r| near(r, x, y, -50.0)));
        }
        for r in &z {
            assert!(p.round_to(128).eval(r).log2_abs() < -100.0);
        }
    }

    #[test]
    fn random_degree_32_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let prec = 200;
        let coeffs: Vec<Complex> =
            (0..=32).map(|_| Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), prec)).collect();
        let p = Polynomial::new(coeffs).unwrap();
        let z = oracle_roots(&p, prec).unwrap();
        assert_eq!(z.len(), 32);
        for x in &z {
            let bound = -(prec as f64) / 2.0 + p.log2_max_coeff() + 32.0 * x.log2_abs().max(0.0);
            assert!(p.eval(x).log2_abs() <= bound);
        }
    }

    #[test]
    fn rejects_double_root() {
        let p = Polynomial::from_f64(&[1.0, -2.0, 1.0], 128).unwrap();
        assert!(oracle_roots(&p, 128).is_err());
    }

    #[test]
    fn two_root_discs() {
        let roots = [Complex::from_f64(1.0, 0.0, 64), Complex::from_f64(5.0, 0.0, 64)];
        let discs = discs_from_roots(&roots, 4.0).unwrap();
        for (d, z) in discs.iter().zip(&roots) {
            assert!(d.radius.to_f64() <= 1.0);
            assert!((&d.center - z).abs_f64() <= d.radius.to_f64() / 4.0);
        }
        let lone = discs_from_roots(&roots[..1], 4.0).unwrap();
        assert_eq!(lone[0].isolation, LONE_ROOT_ISOLATION);
    }

    #[test]
    fn degree_16_discs_isolate_one_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let prec = 160;
        let coeffs: Vec<Complex> =
            (0..=16).map(|_| Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), prec)).collect();
        let p = Polynomial::new(coeffs).unwrap();
        let roots = oracle_roots(&p, prec).unwrap();
        let discs = discs_from_roots(&roots, 3.0).unwrap();
        for d in &discs {
            let r = d.radius.to_f64();
            let dist: Vec<f64> = roots.iter().map(|z| (z - &d.center).abs_f64()).collect();
            assert_eq!(dist.iter().filter(|&&x| x <= r).count(), 1);
            assert!(dist.iter().all(|&x| x <= r || x >= d.isolation * r));
        }
    }
}
