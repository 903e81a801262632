//! Values of a polynomial at the q-th roots of unity from its fold modulo x^q − 1.

use polyrefine::dft::{eval_at_roots, DftPlan};
use polyrefine::{Polynomial, PrecisionContext};

fn main() -> Result<(), polyrefine::Error> {
    let ctx = PrecisionContext::with_lambda(128, 64, 0)?;
    // 1 + 2x + 3x² + … + 12x^11, folded to 8 coefficients.
    let coeffs: Vec<f64> = (1..=12).map(f64::from).collect();
    let p = Polynomial::from_f64(&coeffs, 128)?;
    let q = 8;
    let plan = DftPlan::new(q, &ctx)?;
    let values = eval_at_roots(&p.fold(q), &plan)?;
    for (j, v) in values.iter().enumerate() {
        let direct = p.eval(plan.root(j));
        println!("p(ω^{j}) = {:.15}   |Δ| = 2^{:.1}", v, (v - &direct).log2_abs());
    }
    Ok(())
}
