//! Square and rectangular finite free convolutions, computed through two
//! independent routes each, with the transform additivity they induce.

use finfree::convolve::{
    boxplus, boxplus_power, boxplus_via_operators, rect_boxplus, rect_boxplus_via_operators,
};
use finfree::cumulants::{finite_r, rect_finite_r};
use finfree::poly::MonicPoly;
use finfree::scalar::Scalar;

fn main() -> finfree::Result<()> {
    let p = MonicPoly::from_integer_roots(&[1, -1]);
    let q = MonicPoly::from_integer_roots(&[2, 0]);

    let direct = boxplus(&p, &q)?;
    let via_ops = boxplus_via_operators(&p, &q)?;
    println!("square convolution: {}", coeffs(&direct));
    println!("operator route agrees exactly: {}", direct == via_ops);

    // the transform is additive on the cumulant range
    let r = finite_r(&direct);
    let sum = finite_r(&p).add(&finite_r(&q));
    println!(
        "transform additivity (first {} coefficients): {}",
        p.degree(),
        (0..p.degree()).all(|k| r.coeff(k) == sum.coeff(k))
    );

    // convolution powers via one symbol exponentiation
    let pow3 = boxplus_power(&p, 3)?;
    let iterated = boxplus(&boxplus(&p, &p)?, &p)?;
    println!("3-fold power equals iterated convolution: {}", pow3 == iterated);

    // rectangular case, fractional index included
    let a = MonicPoly::from_integer_roots(&[1, 4]);
    let b = MonicPoly::from_integer_roots(&[0, 9]);
    for n in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::from_int(3)] {
        let r1 = rect_boxplus(&a, &b, &n)?;
        let r2 = rect_boxplus_via_operators(&a, &b, &n)?;
        let rt = rect_finite_r(&r1, &n)?;
        let rsum = rect_finite_r(&a, &n)?.add(&rect_finite_r(&b, &n)?);
        println!(
            "rectangular (n = {n}): {} | routes agree: {} | transform additive: {}",
            coeffs(&r1),
            r1 == r2,
            (0..a.degree()).all(|k| rt.coeff(k) == rsum.coeff(k))
        );
    }
    Ok(())
}

fn coeffs(p: &MonicPoly) -> String {
    (0..=p.degree())
        .map(|k| p.coeff(k).to_exact_string())
        .collect::<Vec<_>>()
        .join(", ")
}
