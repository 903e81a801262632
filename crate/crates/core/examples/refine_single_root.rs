//! Refines √2 to 1000 bits from a coarse isolating disc around it.

use polyrefine::{refine_root, Complex, IsolatedDisc, Polynomial, PrecisionContext, Real, RefinementRequest};

fn main() -> Result<(), polyrefine::Error> {
    let bits = 1000;
    // x² − 2
    let p = Polynomial::from_f64(&[-2.0, 0.0, 1.0], 64)?;
    let ctx = PrecisionContext::new(bits, p.tau(), p.degree())?;
    let disc = IsolatedDisc::new(Complex::from_f64(1.5, 0.0, 64), Real::from_f64(0.2, 64), 9.0)?;

    let result = refine_root(&p, &disc, &RefinementRequest::bits(bits)?, &ctx)?;
    println!("working precision: {} bits", ctx.lambda());
    println!("newton steps:      {}", result.iterations);
    println!("certified error:   2^{:.1}", result.error_log2);
    println!("root:              {}", result.root.re.to_decimal_string(60));

    let exact = Real::from_f64(2.0, ctx.lambda()).sqrt();
    let err = (&result.root.re - &exact).log2_abs();
    println!("distance to sqrt(2): 2^{err:.1}");
    Ok(())
}
