//! Monte Carlo checks of the random-matrix definitions against the exact
//! convolution targets.

use finfree::matrix::{mc_boxplus, mc_compression};

fn main() -> finfree::Result<()> {
    let rep = mc_boxplus(&[1, 2, 3, 4], &[0, 0, 1, 1], 20_000, 42)?;
    println!("conjugation sum, d = 4, {} samples:", rep.samples);
    for c in &rep.coeffs {
        println!(
            "  coeff {}: mean {:+.5} target {:+.5} z = {:+.2}",
            c.k, c.mean, c.target, c.z_score
        );
    }
    println!("max |z| = {:.3}\n", rep.max_abs_z);

    let rep = mc_compression(&[1, 2, 3, 5, 8], 2, 20_000, 7)?;
    println!("random compression to 2 dimensions, d = 5:");
    for c in &rep.coeffs {
        println!(
            "  coeff {}: mean {:+.5} target {:+.5} z = {:+.2}",
            c.k, c.mean, c.target, c.z_score
        );
    }
    println!("max |z| = {:.3}", rep.max_abs_z);
    Ok(())
}
