//! A double root, refined by Newton on the derivative with the multiplicity given.

use polyrefine::{refine_root, Complex, IsolatedDisc, Polynomial, PrecisionContext, Real, RefinementRequest};

fn main() -> Result<(), polyrefine::Error> {
    let prec = 128;
    let c = |re: f64, im: f64| Complex::from_f64(re, im, prec);
    let double = c(0.75, 0.25);
    let p = Polynomial::from_roots(&[double.clone(), double.clone(), c(-2.0, 0.0), c(3.0, 3.0)], prec);
    let disc = IsolatedDisc::new(c(0.7, 0.2), Real::from_f64(0.2, prec), 5.0)?.with_root_count(2);

    let ctx = PrecisionContext::new(256, p.tau(), p.degree())?;
    let req = RefinementRequest::bits(256)?.with_multiplicity(2)?;
    let r = refine_root(&p, &disc, &req, &ctx)?;
    println!("{} steps, certified 2^{:.1}", r.iterations, r.error_log2);
    println!("root {:.40}", r.root);
    println!("actual error 2^{:.1}", (&r.root - &double).log2_abs());
    Ok(())
}
