//! Property tests for the library-level invariants that quantify over inputs:
//! root-location preservation under the operators and convolutions, Jensen
//! rescaling convergence, class membership, and algebraic round trips.

use finfree::appell::{
    appell_poly, jensen_poly, lp_series, lpi_membership, lpi_series, LaguerrePolyaData, LpiData,
};
use finfree::convolve::boxplus;
use finfree::corpus::PolyGen;
use finfree::poly::MonicPoly;
use finfree::roots::{find_roots, RootSolveConfig};
use finfree::scalar::Scalar;
use finfree::series::TruncatedSeries;
use proptest::prelude::*;

#[test]
fn mn_preserves_nonnegative_roots() {
    // nonnegative-rooted input and n > -1 keep the image nonnegative-rooted
    let mut gen = PolyGen::new(2024);
    let ns = [Scalar::ratio(-1, 2), Scalar::zero(), Scalar::from_int(3)];
    for _ in 0..12 {
        let p = gen.integer_rooted(4..=30, 0..=12);
        for n in &ns {
            let q = p.apply_mn(n).unwrap().monicize().unwrap();
            let report = find_roots(&q, &RootSolveConfig::default()).unwrap();
            let min = report.roots.first().unwrap().to_f64();
            assert!(
                min >= -1e-18,
                "negative root {min} after operator with n={n}, degree {}",
                p.degree()
            );
        }
    }
}

#[test]
fn convolution_preserves_real_roots() {
    // 100 seeded real-rooted pairs: outputs solve with tiny imaginary
    // residuals (the solver errors out otherwise)
    let mut gen = PolyGen::new(7);
    for trial in 0..100 {
        let p = gen.integer_rooted(2..=20, -8..=8);
        let q = gen.integer_rooted_of_degree(p.degree(), -8..=8);
        let r = boxplus(&p, &q).unwrap();
        let report = find_roots(&r, &RootSolveConfig::default())
            .unwrap_or_else(|e| panic!("trial {trial}, degree {}: {e}", r.degree()));
        assert!(report.max_im_residual <= 1e-20);
    }
}

#[test]
fn jensen_rescaling_converges_uniformly() {
    // max over a grid in [-2, 2] of |J_d(z/d) - f(z)| decreases through
    // d = 25, 50, 100, 200
    let data = LaguerrePolyaData::new(
        Scalar::ratio(1, 4),
        Scalar::one(),
        vec![Scalar::from_int(2), Scalar::from_int(-3)],
    )
    .unwrap();
    let f_ref = lp_series(&data, 60); // tail beyond order 60 is ~1e-60 on |z|<=2
    let grid: Vec<Scalar> = (-20..=20).map(|k| Scalar::ratio(k, 10)).collect();
    let mut sups = Vec::new();
    for d in [25usize, 50, 100, 200] {
        let j = jensen_poly(&lp_series(&data, d), d).unwrap();
        let mut sup = 0.0f64;
        for z in &grid {
            let jd = j.evaluate(&z.div(&Scalar::from_int(d as i64)));
            let fv = f_ref.evaluate(z);
            sup = sup.max(jd.sub(&fv).abs().to_f64());
        }
        sups.push(sup);
    }
    for w in sups.windows(2) {
        assert!(w[1] < w[0], "sup gaps not decreasing: {sups:?}");
    }
    assert!(sups[3] < 0.2, "did not approach the limit: {sups:?}");
}

#[test]
fn lpi_membership_classification() {
    // constructed data passes through degree 20
    let data = LpiData::new(
        Scalar::one(),
        vec![Scalar::from_int(1), Scalar::from_int(4)],
    )
    .unwrap();
    let g = lpi_series(&data, 20);
    let verdict = lpi_membership(&g, 20, &Scalar::zero()).unwrap();
    assert!(verdict.passed(), "failure: {:?}", verdict.failure);
    // g = 1 + z^2 has zeros off the real line and fails at a small degree
    let bad = TruncatedSeries::from_coeffs(vec![
        Scalar::one(),
        Scalar::zero(),
        Scalar::one(),
        Scalar::zero(),
        Scalar::zero(),
    ]);
    let verdict = lpi_membership(&bad, 4, &Scalar::zero()).unwrap();
    assert!(!verdict.passed());
    assert!(verdict.failure.unwrap().0 <= 3);
    // trivial g = 1 passes
    let one = TruncatedSeries::one(6);
    assert!(lpi_membership(&one, 6, &Scalar::one()).unwrap().passed());
}

#[test]
fn wilkinson_grid_to_spec_degree() {
    // prod (x - k/10) for k = 1..50, recovered to 1e-30 at 256 bits
    let roots: Vec<Scalar> = (1..=50).map(|k| Scalar::ratio(k, 10)).collect();
    let p = MonicPoly::from_roots(&roots);
    let cfg = RootSolveConfig {
        tol: 1e-30,
        ..Default::default()
    };
    let rep = find_roots(&p, &cfg).unwrap();
    for (i, r) in rep.roots.iter().enumerate() {
        let exact = Scalar::ratio((i + 1) as i64, 10).to_real(256);
        let err = r.sub(&exact).abs();
        assert!(
            err.is_zero() || err.log2_abs() < -99.6,
            "root {i}: err 2^{}",
            err.log2_abs()
        );
    }
}

#[test]
fn hermite_cosine_closed_form_roots() {
    // cot grid oracle at d = 100, to well below 1e-12 in f64 comparison
    let d = 100usize;
    let mut c = vec![Scalar::zero(); d + 1];
    c[0] = Scalar::one();
    let mut fact = Scalar::one();
    for k in 1..=d {
        fact = fact.mul(&Scalar::from_int(k as i64));
        if k % 2 == 0 {
            c[k] = fact.recip();
            if (k / 2) % 2 == 1 {
                c[k] = c[k].neg();
            }
        }
    }
    let a = appell_poly(&TruncatedSeries::from_coeffs(c), d).unwrap();
    let rep = find_roots(&a, &RootSolveConfig::default()).unwrap();
    for (i, r) in rep.roots.iter().enumerate() {
        let k = d - 1 - i;
        let theta = (2 * k + 1) as f64 * std::f64::consts::PI / (2.0 * d as f64);
        let expect = 1.0 / theta.tan();
        assert!(
            (r.to_f64() - expect).abs() <= 1e-11 * (1.0 + expect.abs()),
            "root {i}: {} vs {expect}",
            r.to_f64()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dilation_round_trip(roots in proptest::collection::vec(-9i64..=9, 1..7),
                           num in 1i64..6, den in 1i64..6) {
        let p = MonicPoly::from_integer_roots(&roots);
        let alpha = Scalar::ratio(num, den);
        let back = p.dilate(&alpha).unwrap().dilate(&alpha.recip()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn reverse_involution(roots in proptest::collection::vec(1i64..=9, 1..7)) {
        // nonzero constant coefficient guaranteed by positive roots
        let p = MonicPoly::from_integer_roots(&roots);
        prop_assert_eq!(p.reverse().reverse(), p.as_poly().clone());
    }

    #[test]
    fn series_exp_log_round_trip(raw in proptest::collection::vec((-20i64..=20, 1i64..=9), 1..9)) {
        let mut coeffs = vec![Scalar::zero()];
        for (n, d) in raw {
            coeffs.push(Scalar::ratio(n, d));
        }
        let f = TruncatedSeries::from_coeffs(coeffs);
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn convolution_affine_linearity(u in proptest::collection::vec(-5i64..=5, 4),
                                    v in proptest::collection::vec(-5i64..=5, 4),
                                    w in proptest::collection::vec(-5i64..=5, 4)) {
        // F(u+v) + F(0) = F(u) + F(v) coefficient-wise, F = boxplus(., q)
        let mk = |a: &[i64]| -> MonicPoly {
            let mut coeffs = vec![Scalar::one()];
            for (k, &val) in a.iter().enumerate() {
                let c = Scalar::from_int(val);
                coeffs.push(if (k + 1) % 2 == 0 { c } else { c.neg() });
            }
            MonicPoly::from_coeffs(coeffs).unwrap()
        };
        let q = mk(&w);
        let uv: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let zero = vec![0i64; u.len()];
        let lhs = boxplus(&mk(&uv), &q).unwrap().as_poly()
            .add(boxplus(&mk(&zero), &q).unwrap().as_poly());
        let rhs = boxplus(&mk(&u), &q).unwrap().as_poly()
            .add(boxplus(&mk(&v), &q).unwrap().as_poly());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn erm_scaling_consistency(roots in proptest::collection::vec(-40i64..=40, 2..6)) {
        // moments of the root measure match the coefficient route
        let mut sorted = roots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assume!(sorted.len() == roots.len()); // simple roots only
        let p = MonicPoly::from_integer_roots(&roots);
        let rep = find_roots(&p, &RootSolveConfig::default()).unwrap();
        let mu = finfree::measures::erm(&rep.roots);
        let m2_coeff = finfree::cumulants::moment(&p, 2).to_f64();
        prop_assert!((mu.moment(2) - m2_coeff).abs() <= 1e-9 * (1.0 + m2_coeff.abs()));
    }
}
