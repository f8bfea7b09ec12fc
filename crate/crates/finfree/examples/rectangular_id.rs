//! Rectangular families from positive-zero data: the normalized family's
//! transform is a truncation of -s g'(s)/g(s), and the limiting transform
//! is a finite sum over the symmetrized reciprocal zeros.

use finfree::appell::{lpi_series, normalized_laguerre_appell, rect_levy_data, LpiData};
use finfree::cumulants::{log_derivative, rect_finite_r};
use finfree::measures::c_transform_eval;
use finfree::scalar::Scalar;

fn main() -> finfree::Result<()> {
    let data = LpiData::new(Scalar::one(), vec![Scalar::from_int(1), Scalar::from_int(4)])?;
    let d = 40usize;
    let g = lpi_series(&data, d);
    let n = Scalar::zero();
    let lhat = normalized_laguerre_appell(&g, d, &n)?;
    let r = rect_finite_r(&lhat, &n)?;
    let expected = log_derivative(&g)?.truncate(d).shift_up(1).neg();
    println!(
        "transform equals -s g'/g exactly at degree {d}: {}",
        (0..=d).all(|k| r.coeff(k) == expected.coeff(k))
    );

    let levy = rect_levy_data(&data, 128)?;
    let atoms: Vec<(f64, f64)> = levy
        .g
        .atoms
        .iter()
        .map(|(x, w)| (x.to_f64(), w.to_f64()))
        .collect();
    for z in [-0.05f64, -0.02, -0.01] {
        let series_val = {
            // exact rational evaluation of the truncation
            let zr = Scalar::ratio((z * 100.0) as i64, 100);
            r.evaluate(&zr).to_f64()
        };
        let transform_val = c_transform_eval(&atoms, z)?;
        println!(
            "z = {z:6.3}: truncated series {series_val:.10}, atomic transform {transform_val:.10}"
        );
    }
    Ok(())
}
