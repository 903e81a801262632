//! The two stages of refinement: one power-sum estimate shrinks the disc,
//! then Newton's iteration converges quadratically from the new center.

use polyrefine::{boost_isolation, newton_refine, Complex, IsolatedDisc, Polynomial, PrecisionContext, Real, RefinementRequest};

fn main() -> Result<(), polyrefine::Error> {
    // Wide enough that p is the exact product.
    let prec = 1024;
    let c = |re: f64, im: f64| Complex::from_f64(re, im, prec);
    let target = c(0.31, -0.12);
    let mut roots = vec![target.clone()];
    for k in 0..11 {
        let t = k as f64 * 0.57 + 0.2;
        roots.push(c(2.5 * t.cos(), 2.5 * t.sin()));
    }
    let p = Polynomial::from_roots(&roots, prec);
    let disc = IsolatedDisc::new(c(0.0, 0.0), Real::from_f64(0.5, prec), 4.0)?;
    let ctx = PrecisionContext::new(512, p.tau(), p.degree())?;

    let boost = boost_isolation(&p, &disc, &ctx)?;
    let moved = (&boost.center - &target).abs_f64();
    println!("boost: q = {}, Δ = {:.3e}, center off by {:.3e}", boost.q_used, boost.delta, moved);

    let result = newton_refine(&p, &boost, &RefinementRequest::bits(512)?, &ctx)?;
    let exact = target.round_to(ctx.lambda());
    for (i, x) in result.iterates.iter().enumerate() {
        println!("x_{i}: error 2^{:.1}", (x - &exact).log2_abs());
    }
    println!("certified 2^{:.1} after {} steps", result.error_log2, result.iterations);
    Ok(())
}
