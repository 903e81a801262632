//! Contour power sums of the roots inside a disc, with their certified radii.

use polyrefine::powersum::power_sums_in_disc;
use polyrefine::{Complex, IsolatedDisc, Polynomial, PrecisionContext, Real};

fn main() -> Result<(), polyrefine::Error> {
    let prec = 256;
    let c = |re: f64, im: f64| Complex::from_f64(re, im, prec);
    let inside = [c(0.3, 0.0), c(0.0, -0.2)];
    let outside = [c(3.0, 0.0), c(-4.0, 1.0), c(0.5, 3.5)];
    let roots: Vec<Complex> = inside.iter().chain(&outside).cloned().collect();
    let p = Polynomial::from_roots(&roots, prec);

    // Roots within 1 of the origin, none between 1 and 3.
    let disc = IsolatedDisc::new(c(0.0, 0.0), Real::one(prec), 3.0)?;
    let ctx = PrecisionContext::new(128, p.tau(), p.degree())?;
    let est = power_sums_in_disc(&p, &disc, 4, 2f64.powi(-100), &ctx)?;

    // Estimates are in the local coordinate y = x / R with R the contour radius.
    let r = disc.contour_radius(prec);
    println!("q = {} contour points, contour radius {:.6}", est[0].q_used, r.to_f64());
    for e in &est {
        let mut exact = Complex::zero(prec);
        for x in &inside {
            exact += &(x / &Complex::from_real(r.clone())).powu(e.k as u64);
        }
        let dev = (&e.value - &exact).log2_abs();
        println!(
            "s_{} = {:.20}  radius 2^{:.1}  actual error 2^{:.1}",
            e.k,
            e.value,
            e.error_radius.log2(),
            dev
        );
    }
    Ok(())
}
