//! Moments, finite free cumulants (square and rectangular), operator
//! symbols, truncated R-transforms, and the flow identities they satisfy
//! under repeated differentiation / `M_n` application.
//!
//! Conventions pinned here (validated at small degree against one another):
//! - the normalized symbol `P` of `p` satisfies `P(D/d) x^d = p(x)` with
//!   coefficient `c_k d^k / (d)_k` at `s^k`;
//! - `R_p(s) = -(1/d) P'(s)/P(s)` carries `d+1` coefficients `s^0..s^d`;
//!   the `s^{j-1}` coefficient is the `j`-th cumulant, so additivity under
//!   the convolution holds for `s^0..s^{d-1}`;
//! - the rectangular transform `R_p^{(n)}(s) = -(s/d) P'(s)/P(s)` (symbol in
//!   `M_n/(d(d+n))`) has the scaled rectangular cumulant of order `2k` as
//!   its `s^k` coefficient.

use crate::partitions::partitions;
use crate::poly::MonicPoly;
use crate::scalar::{falling_scalar, Scalar};
use crate::series::TruncatedSeries;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

// ---------------------------------------------------------------------------
// Moments via Newton's identities (no root finding)
// ---------------------------------------------------------------------------

/// First `jmax` moments `m_1..m_jmax` of the empirical root measure,
/// computed from the coefficients alone. Exact in rational mode.
pub fn moments(p: &MonicPoly, jmax: usize) -> Vec<Scalar> {
    let d = p.degree();
    // Newton: p_k - e_1 p_{k-1} + ... + (-1)^{k-1} e_{k-1} p_1 + (-1)^k k e_k = 0,
    // with e_k = a_k (zero above the degree).
    let e = |k: usize| -> Scalar {
        if k <= d {
            p.a(k)
        } else {
            Scalar::zero()
        }
    };
    let mut power_sums: Vec<Scalar> = Vec::with_capacity(jmax + 1);
    power_sums.push(Scalar::from_int(d as i64)); // p_0 = d
    for k in 1..=jmax {
        let mut acc = Scalar::zero();
        for i in 1..k {
            let term = e(i).mul(&power_sums[k - i]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        let ke = Scalar::from_int(k as i64).mul(&e(k));
        acc = if k % 2 == 1 { acc.add(&ke) } else { acc.sub(&ke) };
        power_sums.push(acc);
    }
    let dd = Scalar::from_int(d as i64);
    power_sums[1..].iter().map(|s| s.div(&dd)).collect()
}

pub fn moment(p: &MonicPoly, j: usize) -> Scalar {
    assert!(j >= 1, "moments are indexed from 1");
    moments(p, j).pop().unwrap()
}

// ---------------------------------------------------------------------------
// Operator symbols
// ---------------------------------------------------------------------------

/// Symbol of `p` as a series in the differentiation operator.
///
/// Normalized: `P(D/d) x^d = p(x)`, coefficient `c_k d^k/(d)_k`.
/// Unnormalized: `P(D) x^d = p(x)`, coefficient `c_k/(d)_k`.
pub fn to_operator_symbol(p: &MonicPoly, normalized: bool) -> TruncatedSeries {
    let d = p.degree();
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let fall = falling_scalar(&Scalar::from_int(d as i64), k as u32);
        let mut c = p.coeff(k).div(&fall);
        if normalized {
            c = c.mul(&Scalar::from_int(d as i64).pow_u32(k as u32));
        }
        coeffs.push(c);
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Symbol of `p` in the operator `M_n`.
///
/// Normalized: `P(M_n/(d(d+n))) x^d = p(x)`, coefficient
/// `c_k (d(d+n))^k / ((d)_k (n+d)_k)`; unnormalized drops the power factor.
pub fn to_rect_operator_symbol(
    p: &MonicPoly,
    n: &Scalar,
    normalized: bool,
) -> Result<TruncatedSeries> {
    if !n.gt_int(-1) {
        return Err(Error::invalid("operator index must satisfy n > -1"));
    }
    let d = p.degree();
    let nd = n.add(&Scalar::from_int(d as i64));
    let scale = Scalar::from_int(d as i64).mul(&nd);
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let fall = falling_scalar(&Scalar::from_int(d as i64), k as u32)
            .mul(&falling_scalar(&nd, k as u32));
        let mut c = p.coeff(k).div(&fall);
        if normalized {
            c = c.mul(&scale.pow_u32(k as u32));
        }
        coeffs.push(c);
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Apply a differentiation-operator symbol to `x^d`.
pub fn apply_diff_symbol(sym: &TruncatedSeries, d: usize, normalized: bool) -> Result<MonicPoly> {
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let fall = falling_scalar(&Scalar::from_int(d as i64), k as u32);
        let mut c = sym.coeff(k).mul(&fall);
        if normalized {
            c = c.div(&Scalar::from_int(d as i64).pow_u32(k as u32));
        }
        coeffs.push(c);
    }
    MonicPoly::from_coeffs(coeffs)
}

/// Apply an `M_n`-operator symbol to `x^d`.
pub fn apply_mn_symbol(
    sym: &TruncatedSeries,
    d: usize,
    n: &Scalar,
    normalized: bool,
) -> Result<MonicPoly> {
    if !n.gt_int(-1) {
        return Err(Error::invalid("operator index must satisfy n > -1"));
    }
    let nd = n.add(&Scalar::from_int(d as i64));
    let scale = Scalar::from_int(d as i64).mul(&nd);
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let fall = falling_scalar(&Scalar::from_int(d as i64), k as u32)
            .mul(&falling_scalar(&nd, k as u32));
        let mut c = sym.coeff(k).mul(&fall);
        if normalized {
            c = c.div(&scale.pow_u32(k as u32));
        }
        coeffs.push(c);
    }
    MonicPoly::from_coeffs(coeffs)
}

// ---------------------------------------------------------------------------
// Log-derivative of a series, two independent routes
// ---------------------------------------------------------------------------

/// `(log f)'` computed through series division `f'/f`. The input must have
/// constant term 1; the result is known to one order less, and its first
/// `m` coefficients depend only on the first `m+1` coefficients of `f`.
pub fn log_derivative(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !f.coeff(0).is_one() {
        return Err(Error::invalid("log derivative needs constant term 1"));
    }
    let m = f.order();
    if m == 0 {
        return Ok(TruncatedSeries::zero(0));
    }
    f.derivative().div(&f.truncate(m - 1))
}

/// `(log f)'` through the partition expansion of the log coefficients:
/// with `f = 1 + sum a_k s^k / k!`, `log f = sum b_k s^k / k!` where
/// `b_k = sum over partitions of [k] of a_pi (-1)^{|pi|-1} (|pi|-1)!`.
/// Independent oracle for [`log_derivative`].
pub fn log_derivative_partition(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !f.coeff(0).is_one() {
        return Err(Error::invalid("log derivative needs constant term 1"));
    }
    let m = f.order();
    if m == 0 {
        return Ok(TruncatedSeries::zero(0));
    }
    // a_k = k! f_k
    let mut a = vec![Scalar::zero(); m + 1];
    let mut fact = BigInt::one();
    for k in 1..=m {
        fact *= BigInt::from(k as i64);
        a[k] = f.coeff(k).mul(&Scalar::from_bigint(fact.clone()));
    }
    let mut out = Vec::with_capacity(m);
    let mut fact_km1 = BigInt::one();
    for k in 1..=m {
        let mut bk = Scalar::zero();
        for part in partitions(k)? {
            let mut term = moebius_sign_factorial(part.num_blocks());
            for block in &part.blocks {
                term = term.mul(&a[block.len()]);
            }
            bk = bk.add(&term);
        }
        // coefficient of s^{k-1} in (log f)': b_k / (k-1)!
        if k >= 2 {
            fact_km1 *= BigInt::from((k - 1) as i64);
        }
        out.push(bk.div(&Scalar::from_bigint(fact_km1.clone())));
    }
    Ok(TruncatedSeries::from_coeffs(out))
}

/// `(-1)^{r-1} (r-1)!` as a scalar.
fn moebius_sign_factorial(r: usize) -> Scalar {
    let mut f = BigInt::one();
    for i in 1..r {
        f *= BigInt::from(i as i64);
    }
    if r % 2 == 0 {
        Scalar::from_bigint(-f)
    } else {
        Scalar::from_bigint(f)
    }
}

// ---------------------------------------------------------------------------
// Finite R-transforms
// ---------------------------------------------------------------------------

/// Truncated R-transform `-(1/d) P'(s)/P(s)` carrying `s^0..s^d`.
pub fn finite_r(p: &MonicPoly) -> TruncatedSeries {
    let d = p.degree();
    if d == 0 {
        return TruncatedSeries::zero(0);
    }
    let sym = to_operator_symbol(p, true);
    // P is a degree-d polynomial, so P' is fully known and the quotient is
    // well defined at every retained order.
    let mut dcoeffs: Vec<Scalar> = (1..=d)
        .map(|k| sym.coeff(k).mul(&Scalar::from_int(k as i64)))
        .collect();
    dcoeffs.resize(d + 1, Scalar::zero());
    let num = TruncatedSeries::from_coeffs(dcoeffs);
    let quot = num.div(&sym).expect("symbol has constant term 1");
    quot.scale(&Scalar::ratio(-1, d as i64))
}

/// Rectangular truncated R-transform `-(s/d) P'(s)/P(s)`, `s^0..s^d`.
pub fn rect_finite_r(p: &MonicPoly, n: &Scalar) -> Result<TruncatedSeries> {
    let d = p.degree();
    if d == 0 {
        return Ok(TruncatedSeries::zero(0));
    }
    let sym = to_rect_operator_symbol(p, n, true)?;
    let mut dcoeffs: Vec<Scalar> = (1..=d)
        .map(|k| sym.coeff(k).mul(&Scalar::from_int(k as i64)))
        .collect();
    dcoeffs.resize(d + 1, Scalar::zero());
    let num = TruncatedSeries::from_coeffs(dcoeffs);
    let quot = num.div(&sym).expect("symbol has constant term 1");
    Ok(quot.shift_up(1).scale(&Scalar::ratio(-1, d as i64)))
}

// ---------------------------------------------------------------------------
// Cumulants
// ---------------------------------------------------------------------------

/// Möbius weight `W(pi) = sum over sigma >= pi of
/// (-1)^{|sigma|} (|sigma|-1)! / prod_{B in sigma} (d)_{|B|}`,
/// a function of the block-size signature of `pi` only. Cached per
/// `(signature, d)` since it is reused across polynomials and orders.
fn moebius_weight(sizes: &[u32], d: usize) -> BigRational {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<u32>, usize), BigRational>>> = OnceLock::new();
    let mut key: Vec<u32> = sizes.to_vec();
    key.sort_unstable();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(key.clone(), d)) {
        return v.clone();
    }
    let r = sizes.len();
    let mut total = BigRational::zero();
    for sigma in partitions(r).expect("block count within enumeration range") {
        let mut den = BigRational::one();
        for block in &sigma.blocks {
            let merged: u32 = block.iter().map(|&i| sizes[i - 1]).sum();
            den *= BigRational::from(crate::scalar::falling_int(d as i64, merged));
        }
        let s = sigma.num_blocks();
        let mut f = BigInt::one();
        for i in 1..s {
            f *= BigInt::from(i as i64);
        }
        let signed = if s % 2 == 0 { f } else { -f };
        total += BigRational::from(signed) / den;
    }
    cache.lock().unwrap().insert((key, d), total.clone());
    total
}

/// `j`-th finite free cumulant through the moment / partition formula:
///
/// `kappa_j = ((-d)^{j-1}/(j-1)!) * sum_{pi in P(j)} d^{|pi|} m_pi
///            [prod_V (|V|-1)!] (-1)^{j-|pi|+1} W(pi)`.
///
/// Exact partition sum, independent of the R-transform route.
pub fn ff_cumulant(p: &MonicPoly, j: usize) -> Result<Scalar> {
    let d = p.degree();
    if j < 1 || j > d {
        return Err(Error::invalid(format!(
            "cumulant order must satisfy 1 <= j <= degree, got {j} for degree {d}"
        )));
    }
    let ms = moments(p, j);
    let mut total = Scalar::zero();
    for part in partitions(j)? {
        let sizes = part.block_sizes();
        let mut term = Scalar::Rat(moebius_weight(&sizes, d));
        for &s in &sizes {
            term = term.mul(&ms[s as usize - 1]);
            let mut f = BigInt::one();
            for i in 1..s {
                f *= BigInt::from(i as i64);
            }
            term = term.mul(&Scalar::from_bigint(f));
        }
        let npi = sizes.len();
        term = term.mul(&Scalar::from_int(d as i64).pow_u32(npi as u32));
        if (j - npi + 1) % 2 == 1 {
            term = term.neg();
        }
        total = total.add(&term);
    }
    let mut lead = Scalar::from_int(-(d as i64)).pow_u32((j - 1) as u32);
    let mut fact = BigInt::one();
    for i in 1..j {
        fact *= BigInt::from(i as i64);
    }
    lead = lead.div(&Scalar::from_bigint(fact));
    Ok(lead.mul(&total))
}

/// All cumulants `kappa_1..kappa_d` read off the R-transform
/// (`kappa_j` is the `s^{j-1}` coefficient). Second, independent route.
pub fn ff_cumulants_from_r(p: &MonicPoly) -> Vec<Scalar> {
    let d = p.degree();
    let r = finite_r(p);
    (0..d).map(|k| r.coeff(k)).collect()
}

/// Unscaled rectangular cumulant of order `2k`:
///
/// `K_{2k} = ((-1)^k/(k-1)!) sum_{pi in P(k)} (-1)^{|pi|-1}(|pi|-1)!
///           N!_pi a_pi / ((d)_pi (n+d)_pi)`.
pub fn rect_cumulant_k(p: &MonicPoly, k: usize, n: &Scalar) -> Result<Scalar> {
    let d = p.degree();
    if k < 1 || k > d {
        return Err(Error::invalid(format!(
            "rectangular cumulant order must satisfy 1 <= k <= degree, got {k} for degree {d}"
        )));
    }
    if !n.gt_int(-1) {
        return Err(Error::invalid("operator index must satisfy n > -1"));
    }
    let nd = n.add(&Scalar::from_int(d as i64));
    let mut total = Scalar::zero();
    for part in partitions(k)? {
        let mut term = moebius_sign_factorial(part.num_blocks());
        for block in &part.blocks {
            let s = block.len() as u32;
            let mut f = BigInt::one();
            for i in 2..=s {
                f *= BigInt::from(i as i64);
            }
            term = term.mul(&Scalar::from_bigint(f)); // N!_pi factor
            term = term.mul(&p.a(s as usize));
            term = term.div(&falling_scalar(&Scalar::from_int(d as i64), s));
            term = term.div(&falling_scalar(&nd, s));
        }
        total = total.add(&term);
    }
    let mut fact = BigInt::one();
    for i in 1..k {
        fact *= BigInt::from(i as i64);
    }
    let mut lead = Scalar::from_bigint(fact).recip();
    if k % 2 == 1 {
        lead = lead.neg();
    }
    Ok(lead.mul(&total))
}

/// Scaled rectangular cumulant `kappa_{2k} = -d^{2k-1} (1 + n/d)^k K_{2k}`;
/// equals the `s^k` coefficient of the rectangular R-transform.
pub fn rect_cumulant_scaled(p: &MonicPoly, k: usize, n: &Scalar) -> Result<Scalar> {
    let d = p.degree();
    let kk = rect_cumulant_k(p, k, n)?;
    let dd = Scalar::from_int(d as i64);
    let scale = dd
        .pow_u32((2 * k - 1) as u32)
        .mul(&Scalar::one().add(&n.div(&dd)).pow_u32(k as u32));
    Ok(scale.mul(&kk).neg())
}

/// Exact factor picked up by the scaled rectangular cumulant of order `2k`
/// under the normalized `M_n^j` flow:
///
/// `kappa_{2k}^{(n, d-j)}[p_j] = ((d-j)/d)^{k-1} ((n+d-j)/(n+d))^k
///                               * kappa_{2k}^{(n, d)}[p]`.
///
/// At `n = 0` this collapses to `((d-j)/d)^{2k-1}`. It follows from the
/// unscaled invariance together with the definition of the scaling, and is
/// equivalently the `s^k` coefficient relation of the rectangular
/// R-transform flow identity.
pub fn scaled_flow_factor(d: usize, j: usize, k: usize, n: &Scalar) -> Scalar {
    let dmj = Scalar::from_int((d - j) as i64);
    let dd = Scalar::from_int(d as i64);
    dmj.div(&dd)
        .pow_u32((k - 1) as u32)
        .mul(&n.add(&dmj).div(&n.add(&dd)).pow_u32(k as u32))
}

// ---------------------------------------------------------------------------
// Flow identity checks
// ---------------------------------------------------------------------------

/// Outcome of an exact identity check: both sides evaluated independently.
#[derive(Clone, Debug)]
pub struct FlowCheck {
    pub max_discrepancy: f64,
    pub exact: bool,
    pub orders_compared: usize,
}

fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries, orders: usize) -> FlowCheck {
    let mut max = 0.0f64;
    let mut exact = true;
    for k in 0..orders {
        let diff = lhs.coeff(k).sub(&rhs.coeff(k));
        if !diff.is_zero() {
            exact = false;
        }
        max = max.max(diff.abs().to_f64());
    }
    FlowCheck {
        max_discrepancy: max,
        exact,
        orders_compared: orders,
    }
}

/// Check `R_{p_j}(s) = R_p((d-j)/d * s)` on the cumulant range
/// `s^0..s^{d-j-1}`, where `p_j` is the normalized `j`-th derivative.
/// Zero discrepancy expected in rational mode. (The `s^{d-j}` coefficient
/// of either side depends on how the truncated symbol is completed beyond
/// its degree, so it is excluded by convention.)
pub fn derivative_flow_r_identity_check(p: &MonicPoly, j: usize) -> Result<FlowCheck> {
    let d = p.degree();
    if j >= d {
        return Err(Error::invalid("flow depth j must satisfy 0 <= j < d"));
    }
    let pj = p.normalized_derivative(d - j)?;
    let lhs = finite_r(&pj);
    let rhs = finite_r(p).compose_scale(&Scalar::ratio((d - j) as i64, d as i64));
    Ok(compare(&lhs, &rhs, d - j))
}

/// Check `R_{p_j}^{(n)}(s) = d/(d-j) * R_p^{(n)}((d-j)(n+d-j)/(d(n+d)) s)`
/// on the cumulant range `s^0..s^{d-j-1}` (see
/// [`derivative_flow_r_identity_check`] for why the top coefficient is
/// excluded), where `p_j` is the normalized `M_n^j` image.
pub fn mn_flow_r_identity_check(p: &MonicPoly, n: &Scalar, j: usize) -> Result<FlowCheck> {
    let d = p.degree();
    if j >= d {
        return Err(Error::invalid("flow depth j must satisfy 0 <= j < d"));
    }
    let pj = p.apply_mn_power_normalized(n, j)?;
    let lhs = rect_finite_r(&pj, n)?;
    let dmj = Scalar::from_int((d - j) as i64);
    let dd = Scalar::from_int(d as i64);
    let ratio = dmj.mul(&n.add(&dmj)).div(&dd.mul(&n.add(&dd)));
    let rhs = rect_finite_r(p, n)?
        .compose_scale(&ratio)
        .scale(&dd.div(&dmj));
    Ok(compare(&lhs, &rhs, d - j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonicPoly;

    fn ip(roots: &[i64]) -> MonicPoly {
        MonicPoly::from_integer_roots(roots)
    }

    #[test]
    fn moments_from_coefficients() {
        let p = ip(&[1, -1]);
        assert_eq!(moment(&p, 2), Scalar::one());
        let p = ip(&[0, 2]);
        assert_eq!(moment(&p, 1), Scalar::one());
        // roots 1,2,3: m_3 = (1+8+27)/3 = 12
        let p = ip(&[1, 2, 3]);
        assert_eq!(moment(&p, 3), Scalar::from_int(12));
    }

    #[test]
    fn symbol_round_trip() {
        let p = ip(&[2, -3, 5, 5, -1]);
        for normalized in [true, false] {
            let sym = to_operator_symbol(&p, normalized);
            let back = apply_diff_symbol(&sym, p.degree(), normalized).unwrap();
            assert_eq!(back, p);
        }
        // x^d has symbol 1
        let sym = to_operator_symbol(&MonicPoly::monomial(6), true);
        assert!(sym.sub(&TruncatedSeries::one(6)).is_zero());
    }

    #[test]
    fn rect_symbol_round_trip() {
        let p = ip(&[1, 4, 9, 2]);
        for n in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::from_int(3)] {
            for normalized in [true, false] {
                let sym = to_rect_operator_symbol(&p, &n, normalized).unwrap();
                let back = apply_mn_symbol(&sym, p.degree(), &n, normalized).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn hermite_symbol_is_gaussian_series() {
        // exp(-D^2/(2d)) x^d has normalized symbol exp(-d s^2/2)
        let d = 8usize;
        let mut coeffs = vec![Scalar::zero(); d + 1];
        coeffs[2] = Scalar::ratio(-(d as i64), 2);
        let gauss = TruncatedSeries::from_coeffs(coeffs).exp().unwrap();
        let p = apply_diff_symbol(&gauss, d, true).unwrap();
        let sym = to_operator_symbol(&p, true);
        assert_eq!(sym, gauss);
    }

    #[test]
    fn finite_r_basics() {
        // R of x^d is the zero series
        assert!(finite_r(&MonicPoly::monomial(5)).is_zero());
        // degree 1: s^0 coefficient of R is the root
        let p = ip(&[7]);
        assert_eq!(finite_r(&p).coeff(0), Scalar::from_int(7));
    }

    #[test]
    fn cumulant_first_equals_mean_and_paths_agree() {
        let polys = [ip(&[1, 2, 3]), ip(&[-2, 0, 5, 5]), ip(&[1, 1, 4, -3, 2, 8])];
        for p in &polys {
            assert_eq!(ff_cumulant(p, 1).unwrap(), moment(p, 1));
            let from_r = ff_cumulants_from_r(p);
            for j in 1..=p.degree() {
                assert_eq!(
                    ff_cumulant(p, j).unwrap(),
                    from_r[j - 1],
                    "order {j} mismatch for degree {}",
                    p.degree()
                );
            }
        }
    }

    #[test]
    fn variance_normalization_pinned() {
        // kappa_2 = d/(d-1) (m_2 - m_1^2); d=2, roots {0,2}: 2*(2-1) = 2
        let p = ip(&[0, 2]);
        assert_eq!(ff_cumulant(&p, 2).unwrap(), Scalar::from_int(2));
        // x^2 - 2 has m_1 = 0, m_2 = 2: kappa_2 = 2*2 = 4
        let q =
            MonicPoly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::from_int(-2)])
                .unwrap();
        assert_eq!(ff_cumulant(&q, 2).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn log_derivative_two_routes_agree() {
        let mut c = vec![Scalar::one()];
        for k in 1..=10i64 {
            c.push(Scalar::ratio(if k % 2 == 0 { k } else { -k }, k + 2));
        }
        let f = TruncatedSeries::from_coeffs(c);
        let a = log_derivative(&f).unwrap();
        let b = log_derivative_partition(&f).unwrap();
        assert_eq!(a, b);
        // exp series -> constant 1
        let mut e = vec![Scalar::one()];
        let mut fact = Scalar::one();
        for k in 1..=8 {
            fact = fact.mul(&Scalar::from_int(k));
            e.push(fact.recip());
        }
        let ld = log_derivative(&TruncatedSeries::from_coeffs(e)).unwrap();
        for k in 0..=7 {
            assert_eq!(
                ld.coeff(k),
                if k == 0 { Scalar::one() } else { Scalar::zero() }
            );
        }
    }

    #[test]
    fn truncation_locality() {
        // altering coefficient s^{m+1} of the input leaves outputs 0..m alone
        let mut c: Vec<Scalar> = vec![Scalar::one()];
        for k in 1..=9i64 {
            c.push(Scalar::ratio(k, 7));
        }
        let f = TruncatedSeries::from_coeffs(c.clone());
        c[9] = Scalar::from_int(100);
        let g = TruncatedSeries::from_coeffs(c);
        let a = log_derivative(&f).unwrap();
        let b = log_derivative(&g).unwrap();
        for k in 0..=7 {
            assert_eq!(a.coeff(k), b.coeff(k), "k={k}");
        }
    }

    #[test]
    fn rect_cumulants_match_r_transform_coefficients() {
        let p = ip(&[1, 3, 4, 9]);
        for n in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::from_int(2)] {
            let r = rect_finite_r(&p, &n).unwrap();
            for k in 1..=p.degree() {
                assert_eq!(
                    rect_cumulant_scaled(&p, k, &n).unwrap(),
                    r.coeff(k),
                    "k={k}, n={n}"
                );
            }
        }
        // K_2 of x^d vanishes
        assert!(rect_cumulant_k(&MonicPoly::monomial(4), 1, &Scalar::one())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn cumulant_invariance_under_mn_flow() {
        let p = ip(&[1, 2, 2, 5, 7]);
        let d = p.degree();
        for n in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::from_int(3)] {
            for j in 0..d {
                let pj = p.apply_mn_power_normalized(&n, j).unwrap();
                for k in 1..=(d - j) {
                    let lhs = rect_cumulant_k(&pj, k, &n).unwrap();
                    let rhs = rect_cumulant_k(&p, k, &n).unwrap();
                    assert_eq!(lhs, rhs, "unscaled invariance n={n} j={j} k={k}");
                    let lhs_s = rect_cumulant_scaled(&pj, k, &n).unwrap();
                    let rhs_s = rect_cumulant_scaled(&p, k, &n).unwrap();
                    let factor = scaled_flow_factor(d, j, k, &n);
                    assert_eq!(lhs_s, rhs_s.mul(&factor), "scaled invariance");
                }
            }
        }
        // at n = 0 the factor collapses to ((d-j)/d)^{2k-1}
        for j in 1..d {
            for k in 1..=(d - j) {
                let simple = Scalar::ratio((d - j) as i64, d as i64).pow_u32((2 * k - 1) as u32);
                assert_eq!(scaled_flow_factor(d, j, k, &Scalar::zero()), simple);
            }
        }
    }

    #[test]
    fn derivative_flow_identity_exact() {
        let p = ip(&[1, -4, 2, 2, 9, -7]);
        for j in 0..p.degree() {
            let chk = derivative_flow_r_identity_check(&p, j).unwrap();
            assert!(chk.exact, "j={j}: discrepancy {}", chk.max_discrepancy);
        }
    }

    #[test]
    fn mn_flow_identity_exact() {
        let p = ip(&[1, 2, 5, 5]);
        for n in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::from_int(3)] {
            for j in 0..p.degree() {
                let chk = mn_flow_r_identity_check(&p, &n, j).unwrap();
                assert!(chk.exact, "n={n} j={j}: {}", chk.max_discrepancy);
            }
        }
    }
}
