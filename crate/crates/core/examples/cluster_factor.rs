//! Extracts the factor of p whose roots form a tight cluster near the origin.

use polyrefine::{extract_factor, Complex, IsolatedDisc, Polynomial, PrecisionContext, Real};

fn main() -> Result<(), polyrefine::Error> {
    let prec = 256;
    let c = |re: f64, im: f64| Complex::from_f64(re, im, prec);
    let cluster = [c(0.01, 0.0), c(-0.02, 0.005), c(0.0, 0.015)];
    let far = [c(2.0, 0.0), c(-3.0, 1.0), c(1.0, -5.0)];
    let roots: Vec<Complex> = cluster.iter().chain(&far).cloned().collect();
    let p = Polynomial::from_roots(&roots, prec);

    let disc = IsolatedDisc::new(c(0.0, 0.0), Real::from_f64(0.1, prec), 10.0)?;
    let ctx = PrecisionContext::new(200, p.tau(), p.degree())?;
    let f = extract_factor(&p, &disc, &ctx)?;
    println!("factor of degree {} from q = {} contour points", f.degree, f.q_used);
    for (i, a) in f.coeffs.iter().enumerate() {
        println!("  x^{i}: {:.30}", a);
    }
    println!("lg ‖p mod f‖ − lg ‖p‖ = {:.1}", f.residual_log2);

    let expected = Polynomial::from_roots(&cluster, prec);
    let dev = f
        .coeffs
        .iter()
        .zip(expected.coeffs())
        .map(|(a, b)| (a - b).log2_abs())
        .fold(f64::NEG_INFINITY, f64::max);
    println!("largest coefficient error 2^{dev:.1}");
    Ok(())
}
