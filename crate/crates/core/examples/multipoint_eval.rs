//! Evaluates a degree-255 polynomial at 256 points through a subproduct tree
//! and compares with Horner's rule.

use std::time::Instant;

use polyrefine::multipoint::{eval_many_to, eval_precision};
use polyrefine::{Complex, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), polyrefine::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 256;
    let ell = 100;
    let coeffs: Vec<Complex> =
        (0..n).map(|_| Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 64)).collect();
    let p = Polynomial::new(coeffs)?;
    let points: Vec<Complex> = (0..n)
        .map(|_| {
            let (r, t) = (rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            Complex::from_f64(r * t.cos(), r * t.sin(), 64)
        })
        .collect();

    let lambda = eval_precision(ell, p.tau(), &points);
    println!("{n} points, target 2^-{ell}, tree precision {lambda} bits");

    let t = Instant::now();
    let fast = eval_many_to(&p, &points, ell);
    println!("tree:   {:.2?}", t.elapsed());

    let t = Instant::now();
    let hp = p.round_to(lambda);
    let slow: Vec<Complex> = points.iter().map(|a| hp.eval(&a.round_to(lambda))).collect();
    println!("horner: {:.2?}", t.elapsed());

    let dev = fast.iter().zip(&slow).map(|(a, b)| (a - b).log2_abs()).fold(f64::NEG_INFINITY, f64::max);
    println!("largest deviation 2^{dev:.1}");
    Ok(())
}
