//! Refines every root of x^24 − 1 together, one contour batch for all discs.

use std::time::Instant;

use polyrefine::cli::oracle::discs_from_roots;
use polyrefine::{refine_all, root_of_unity, AllRootsPlan, Complex, Polynomial, PrecisionContext, RefinementRequest};

fn main() -> Result<(), polyrefine::Error> {
    let d = 24;
    let bits = 300;
    let mut coeffs = vec![Complex::zero(64); d + 1];
    coeffs[0] = Complex::from_f64(-1.0, 0.0, 64);
    coeffs[d] = Complex::one(64);
    let p = Polynomial::new(coeffs)?;

    // Start from rough approximations of the roots.
    let rough: Vec<Complex> = (0..d)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / d as f64;
            Complex::from_f64(t.cos() * 1.001, t.sin() * 0.999, 64)
        })
        .collect();
    let discs = discs_from_roots(&rough, 3.0)?;

    let ctx = PrecisionContext::new(bits, p.tau(), d)?;
    let plan = AllRootsPlan::new(&p, discs, RefinementRequest::bits(bits)?)?;
    println!("{} discs, {} contour points", plan.discs().len(), plan.total_points());
    let t = Instant::now();
    let results = refine_all(&p, &plan, &ctx)?;
    println!("refined in {:.2?}", t.elapsed());

    let exact = PrecisionContext::with_lambda(ctx.lambda() + 64, bits, 0)?;
    for (j, r) in results.iter().enumerate() {
        let r = r.as_ref().map_err(Clone::clone)?;
        let dev = (&r.root - &root_of_unity(d, j, &exact).round_to(ctx.lambda())).log2_abs();
        println!("root {j:2}: {:.12}  certified 2^{:.1}  actual 2^{:.1}", r.root, r.error_log2, dev);
    }
    Ok(())
}
