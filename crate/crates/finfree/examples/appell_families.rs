//! Appell and Jensen families from Laguerre–Pólya data: recurrence,
//! normalized variants, and the limiting measure data they encode.

use finfree::appell::{
    appell_poly, hermite, jensen_poly, levy_data, lp_series, normalized_appell,
    LaguerrePolyaData,
};
use finfree::cumulants::finite_r;
use finfree::scalar::Scalar;

fn main() -> finfree::Result<()> {
    // Gaussian data reproduces the Hermite family
    let gauss = LaguerrePolyaData::new(Scalar::zero(), Scalar::one(), vec![])?;
    let f = lp_series(&gauss, 8);
    println!("A_4 for Gaussian data equals He_4: {}", appell_poly(&f, 4)? == hermite(4));

    // the defining recurrence D A_d = d A_{d-1}
    let data = LaguerrePolyaData::new(
        Scalar::ratio(1, 2),
        Scalar::one(),
        vec![Scalar::from_int(2), Scalar::from_int(-3)],
    )?;
    let f = lp_series(&data, 10);
    let ok = (2..=10).all(|d| {
        appell_poly(&f, d).unwrap().differentiate()
            == appell_poly(&f, d - 1)
                .unwrap()
                .as_poly()
                .scale(&Scalar::from_int(d as i64))
    });
    println!("recurrence D A_d = d A_(d-1) through degree 10: {ok}");

    // Jensen polynomials are the reversals
    println!(
        "reverse(A_6) equals J_6: {}",
        appell_poly(&f, 6)?.reverse() == jensen_poly(&f, 6)?
    );

    // the normalized family pins the transform across degrees
    for d in [3usize, 6, 9] {
        let ahat = normalized_appell(&gauss, d)?;
        let r = finite_r(&ahat);
        println!(
            "normalized Gaussian family, d = {d}: transform = s exactly: {}",
            (0..=d).all(|k| r.coeff(k) == if k == 1 { Scalar::one() } else { Scalar::zero() })
        );
    }

    // limiting drift and measure data
    let levy = levy_data(&data);
    println!("limit drift gamma = {}", levy.gamma.to_f64());
    for (loc, mass) in &levy.g_f.atoms {
        println!("  G_f atom at {} with mass {}", loc.to_f64(), mass.to_f64());
    }
    Ok(())
}
