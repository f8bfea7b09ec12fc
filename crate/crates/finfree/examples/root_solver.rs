//! The multiprecision simultaneous root solver on hard inputs: a dense
//! rational grid recovered far below 1e-30, and a geometric spread of
//! magnitudes handled by the Newton-polygon initialization.

use finfree::poly::MonicPoly;
use finfree::roots::{find_roots, RootSolveConfig};
use finfree::scalar::Scalar;

fn main() -> finfree::Result<()> {
    let roots: Vec<Scalar> = (1..=40).map(|k| Scalar::ratio(k, 10)).collect();
    let p = MonicPoly::from_roots(&roots);
    let cfg = RootSolveConfig {
        tol: 1e-30,
        ..Default::default()
    };
    let rep = find_roots(&p, &cfg)?;
    let worst = rep
        .roots
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.sub(&Scalar::ratio((i + 1) as i64, 10).to_real(256))
                .abs()
                .log2_abs()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "grid of 40 roots at spacing 1/10: worst error 2^{worst:.0} in {} iterations",
        rep.iterations
    );

    let spread = MonicPoly::from_integer_roots(&[1, 3, 10, 40, 200, 1500, 20000]);
    let rep = find_roots(&spread, &RootSolveConfig::default())?;
    println!(
        "geometric spread over 5 orders of magnitude: {:?}",
        rep.roots.iter().map(|r| r.to_f64()).collect::<Vec<_>>()
    );
    Ok(())
}
