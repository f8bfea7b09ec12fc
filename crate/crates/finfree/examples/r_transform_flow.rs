//! The truncated transforms evolve by an explicit rescaling under repeated
//! differentiation and under the rectangular operator; both identities are
//! exact in rational arithmetic.

use finfree::cumulants::{
    derivative_flow_r_identity_check, mn_flow_r_identity_check, rect_cumulant_k,
};
use finfree::poly::MonicPoly;
use finfree::scalar::Scalar;

fn main() -> finfree::Result<()> {
    let p = MonicPoly::from_integer_roots(&[-3, -1, 0, 2, 5, 6]);
    for j in 0..p.degree() {
        let chk = derivative_flow_r_identity_check(&p, j)?;
        println!(
            "derivative flow, depth {j}: exact = {} ({} coefficients compared)",
            chk.exact, chk.orders_compared
        );
    }

    let q = MonicPoly::from_integer_roots(&[1, 2, 4, 9]);
    for n in [Scalar::zero(), Scalar::ratio(1, 2)] {
        for j in 0..q.degree() {
            let chk = mn_flow_r_identity_check(&q, &n, j)?;
            println!("operator flow, n = {n}, depth {j}: exact = {}", chk.exact);
        }
        // the unscaled rectangular cumulants are flow invariants
        let qj = q.apply_mn_power_normalized(&n, 2)?;
        let same = (1..=2).all(|k| {
            rect_cumulant_k(&qj, k, &n).unwrap() == rect_cumulant_k(&q, k, &n).unwrap()
        });
        println!("cumulant invariance under two operator steps (n = {n}): {same}");
    }
    Ok(())
}
