//! The cosine-generated Appell family has explicit cotangent roots, and its
//! empirical root measure lands on the standard Cauchy law at the exact
//! midpoint grid: the KS distance is 1/(2d) on the nose.

use finfree::appell::appell_poly;
use finfree::measures::{erm, kolmogorov_distance, ReferenceLaw};
use finfree::roots::{find_roots, RootSolveConfig};
use finfree::scalar::Scalar;
use finfree::series::TruncatedSeries;

fn cosine_series(order: usize) -> TruncatedSeries {
    let mut c = vec![Scalar::zero(); order + 1];
    c[0] = Scalar::one();
    let mut fact = Scalar::one();
    for k in 1..=order {
        fact = fact.mul(&Scalar::from_int(k as i64));
        if k % 2 == 0 {
            c[k] = fact.recip();
            if (k / 2) % 2 == 1 {
                c[k] = c[k].neg();
            }
        }
    }
    TruncatedSeries::from_coeffs(c)
}

fn main() -> finfree::Result<()> {
    for d in [40usize, 100, 200] {
        let a = appell_poly(&cosine_series(d), d)?;
        let report = find_roots(&a, &RootSolveConfig::default())?;
        // closed-form check on the extreme root
        let theta = std::f64::consts::PI / (2.0 * d as f64);
        let largest = report.roots.last().unwrap().to_f64();
        let ks = kolmogorov_distance(&erm(&report.roots), &ReferenceLaw::Cauchy)?;
        println!(
            "d = {d:4}: KS = {ks:.10} (expected {:.10}), largest root {largest:.6} vs cot {:.6}",
            1.0 / (2.0 * d as f64),
            1.0 / theta.tan()
        );
    }
    Ok(())
}
