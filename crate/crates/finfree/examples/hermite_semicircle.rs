//! Roots of scaled Hermite polynomials against the semicircle law.

use finfree::appell::hermite;
use finfree::bigfloat::BigFloat;
use finfree::measures::{dilate_measure, erm, kolmogorov_distance, ReferenceLaw};
use finfree::roots::{find_roots, RootSolveConfig};

fn main() -> finfree::Result<()> {
    for d in [50usize, 100, 200] {
        let report = find_roots(&hermite(d), &RootSolveConfig::default())?;
        let scale = BigFloat::from_f64(1.0 / (d as f64).sqrt(), 256);
        let mu = dilate_measure(&erm(&report.roots), &scale);
        let ks = kolmogorov_distance(&mu, &ReferenceLaw::Semicircle)?;
        println!(
            "d = {d:4}: KS distance to the semicircle = {ks:.6} (solver: {} iterations at {} bits)",
            report.iterations, report.precision_bits
        );
    }
    Ok(())
}
