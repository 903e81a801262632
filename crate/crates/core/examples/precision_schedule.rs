//! Working precision chosen for a few output targets, bit sizes and degrees.

use polyrefine::multipoint::tree_precision;
use polyrefine::working_precision_for;

fn main() -> Result<(), polyrefine::Error> {
    println!("{:>6} {:>4} {:>6} {:>8}", "bits", "tau", "degree", "lambda");
    for (ell, tau, d) in [(64, 0, 2), (100, 8, 16), (256, 16, 64), (1000, 32, 256), (4096, 64, 1024)] {
        println!("{ell:>6} {tau:>4} {d:>6} {:>8}", working_precision_for(ell, tau, d)?);
    }
    println!();
    println!("multipoint evaluation, points in the unit disc:");
    for m in [64, 256, 1024] {
        println!("  {m:>5} points, 2^-128 out: {} bits", tree_precision(128, 8, m, 1, 1));
    }
    Ok(())
}
