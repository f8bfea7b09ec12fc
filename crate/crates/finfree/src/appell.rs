//! Appell / Jensen and Laguerre–Appell / Laguerre–Jensen polynomial families
//! built from Laguerre–Pólya data, their normalized variants, class
//! membership tests, and the limiting Lévy-type data attached to them.
//!
//! Sign convention: [`LaguerrePolyaData`] stores the canonical form
//! `f(z) = exp(-c z - sigma^2 z^2 / 2) prod_j (1 - z/x_j) e^{z/x_j}`.
//! The variant with `e^{+cz}` is reachable by negating `c`.

use crate::cumulants::{apply_diff_symbol, apply_mn_symbol};
use crate::poly::{MonicPoly, Poly};
use crate::roots::{find_roots, RootSolveConfig};
use crate::scalar::{factorial, falling_scalar, Scalar};
use crate::series::TruncatedSeries;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Data types
// ---------------------------------------------------------------------------

/// Data of a Laguerre–Pólya function: drift, Gaussian variance, and a finite
/// truncation of the zero multiset (zeros must be nonzero reals).
#[derive(Clone, Debug)]
pub struct LaguerrePolyaData {
    pub c: Scalar,
    pub sigma2: Scalar,
    pub roots: Vec<Scalar>,
}

impl LaguerrePolyaData {
    pub fn new(c: Scalar, sigma2: Scalar, roots: Vec<Scalar>) -> Result<Self> {
        if sigma2.is_negative() {
            return Err(Error::invalid("sigma^2 must be nonnegative"));
        }
        if roots.iter().any(|r| r.is_zero()) {
            return Err(Error::invalid("zeros of the product part must be nonzero"));
        }
        Ok(LaguerrePolyaData { c, sigma2, roots })
    }

    /// Sum of `x_j^{-2}` over the stored truncation; users size the
    /// truncation error of an infinite product against this.
    pub fn inverse_square_mass(&self) -> Scalar {
        self.roots
            .iter()
            .fold(Scalar::zero(), |acc, x| acc.add(&x.mul(x).recip()))
    }
}

/// Data for the positive-rooted class: `g(z) = e^{-sigma^2 z}
/// prod_j (1 - z/alpha_j^2)`, stored through the positive values
/// `alpha_j^2`.
#[derive(Clone, Debug)]
pub struct LpiData {
    pub sigma2: Scalar,
    pub roots_sq: Vec<Scalar>,
}

impl LpiData {
    pub fn new(sigma2: Scalar, roots_sq: Vec<Scalar>) -> Result<Self> {
        if sigma2.is_negative() {
            return Err(Error::invalid("sigma^2 must be nonnegative"));
        }
        if roots_sq.iter().any(|r| r.is_zero() || r.is_negative()) {
            return Err(Error::invalid("squared zeros must be positive"));
        }
        Ok(LpiData { sigma2, roots_sq })
    }
}

/// Weighted real atoms of a Radon measure (locations exact scalars; masses
/// positive).
#[derive(Clone, Debug, PartialEq)]
pub struct RadonAtoms {
    pub atoms: Vec<(Scalar, Scalar)>,
}

impl RadonAtoms {
    pub fn total_mass(&self) -> Scalar {
        self.atoms
            .iter()
            .fold(Scalar::zero(), |acc, (_, w)| acc.add(w))
    }

    /// Merge atoms at equal locations and drop zero masses.
    pub fn canonicalized(&self) -> RadonAtoms {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| a.0.cmp_value(&b.0));
        let mut out: Vec<(Scalar, Scalar)> = Vec::new();
        for (x, w) in atoms {
            if let Some(last) = out.last_mut() {
                if last.0 == x {
                    last.1 = last.1.add(&w);
                    continue;
                }
            }
            out.push((x, w));
        }
        out.retain(|(_, w)| !w.is_zero());
        RadonAtoms { atoms: out }
    }
}

// ---------------------------------------------------------------------------
// Series from data
// ---------------------------------------------------------------------------

/// `log f` as an explicit truncated series:
/// `-c z - sigma^2 z^2/2 - sum_{m >= 2} S_m z^m / m` with power sums
/// `S_m = sum_j x_j^{-m}` (the compensating exponentials cancel `m = 1`).
pub fn lp_log_series(data: &LaguerrePolyaData, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Scalar::zero(); order + 1];
    if order >= 1 {
        coeffs[1] = data.c.neg();
    }
    if order >= 2 {
        coeffs[2] = data.sigma2.div(&Scalar::from_int(2)).neg();
    }
    let inv: Vec<Scalar> = data.roots.iter().map(|x| x.recip()).collect();
    let mut pows: Vec<Scalar> = inv.clone();
    for m in 2..=order {
        let mut sm = Scalar::zero();
        for (p, i) in pows.iter_mut().zip(&inv) {
            *p = p.mul(i);
            sm = sm.add(p);
        }
        coeffs[m] = coeffs[m].sub(&sm.div(&Scalar::from_int(m as i64)));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Power series of `f` itself (coefficients `gamma_k / k!`).
pub fn lp_series(data: &LaguerrePolyaData, order: usize) -> TruncatedSeries {
    lp_log_series(data, order).exp().expect("zero constant term")
}

/// `log g` for the positive-rooted class: `-sigma^2 z - sum_m T_m z^m / m`
/// with `T_m = sum_j alpha_j^{-2m}` (no compensating exponentials here).
pub fn lpi_log_series(data: &LpiData, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Scalar::zero(); order + 1];
    if order >= 1 {
        coeffs[1] = data.sigma2.neg();
    }
    let inv: Vec<Scalar> = data.roots_sq.iter().map(|x| x.recip()).collect();
    let mut pows: Vec<Scalar> = vec![Scalar::one(); inv.len()];
    for m in 1..=order {
        let mut tm = Scalar::zero();
        for (p, i) in pows.iter_mut().zip(&inv) {
            *p = p.mul(i);
            tm = tm.add(p);
        }
        coeffs[m] = coeffs[m].sub(&tm.div(&Scalar::from_int(m as i64)));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Power series of `g` (coefficients `eta_k / k!`).
pub fn lpi_series(data: &LpiData, order: usize) -> TruncatedSeries {
    lpi_log_series(data, order).exp().expect("zero constant term")
}

// ---------------------------------------------------------------------------
// Appell / Jensen families
// ---------------------------------------------------------------------------

/// Appell polynomial `A_d = f(D) x^d = sum_k gamma_k C(d,k) x^{d-k}`,
/// monic of degree `d`. Requires `gamma_0 = 1`.
pub fn appell_poly(f: &TruncatedSeries, d: usize) -> Result<MonicPoly> {
    if !f.coeff(0).is_one() {
        return Err(Error::invalid("series must have constant term 1"));
    }
    if f.order() < d {
        return Err(Error::invalid(format!(
            "series order {} too small for degree {d}",
            f.order()
        )));
    }
    apply_diff_symbol(&f.truncate(d), d, false)
}

/// Jensen polynomial `J_d(z) = sum_k gamma_k C(d,k) z^k`: the reversal of
/// the Appell polynomial.
pub fn jensen_poly(f: &TruncatedSeries, d: usize) -> Result<Poly> {
    Ok(appell_poly(f, d)?.reverse())
}

/// Probabilists' Hermite polynomial, monic.
pub fn hermite(l: usize) -> MonicPoly {
    let mut coeffs = vec![Scalar::zero(); l + 1];
    for k in 0..=(l / 2) {
        // l! (-1)^k / (k! (l-2k)! 2^k)
        let num = factorial(l as u32);
        let den = factorial(k as u32)
            * factorial((l - 2 * k) as u32)
            * num_bigint::BigInt::from(2).pow(k as u32);
        let mut c = Scalar::from_bigint(num).div(&Scalar::from_bigint(den));
        if k % 2 == 1 {
            c = c.neg();
        }
        coeffs[2 * k] = c;
    }
    MonicPoly::from_coeffs(coeffs).unwrap()
}

/// Laguerre polynomial of index `n > -1`, both in its textbook
/// normalization `sum_k (-1)^k (d+n)_{d-k} / (k! (d-k)!) x^k` and
/// monic-normalized.
pub fn laguerre(d: usize, n: &Scalar) -> Result<(Poly, MonicPoly)> {
    if !n.gt_int(-1) {
        return Err(Error::invalid("Laguerre index must satisfy n > -1"));
    }
    let nd = n.add(&Scalar::from_int(d as i64));
    // descending powers: coefficient of x^{d-m} has k = d-m
    let mut coeffs = Vec::with_capacity(d + 1);
    for m in 0..=d {
        let k = d - m;
        let fall = falling_scalar(&nd, (d - k) as u32);
        let den = Scalar::from_bigint(factorial(k as u32))
            .mul(&Scalar::from_bigint(factorial((d - k) as u32)));
        let mut c = fall.div(&den);
        if k % 2 == 1 {
            c = c.neg();
        }
        coeffs.push(c);
    }
    let raw = Poly::new(coeffs);
    let monic = raw.monicize()?;
    Ok((raw, monic))
}

/// Normalized Appell polynomial `f(D/d)^d x^d`, computed as
/// `exp(d log f)` applied as a normalized operator symbol.
pub fn normalized_appell(data: &LaguerrePolyaData, d: usize) -> Result<MonicPoly> {
    if d == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let sym = lp_log_series(data, d)
        .scale(&Scalar::from_int(d as i64))
        .exp()
        .expect("zero constant term");
    apply_diff_symbol(&sym, d, true)
}

/// Normalized Appell polynomial from an arbitrary series with
/// `gamma_0 = 1` (general route through `exp(d log f)`).
pub fn normalized_appell_from_series(f: &TruncatedSeries, d: usize) -> Result<MonicPoly> {
    if !f.coeff(0).is_one() {
        return Err(Error::invalid("series must have constant term 1"));
    }
    let sym = f
        .truncate(d)
        .log()?
        .scale(&Scalar::from_int(d as i64))
        .exp()
        .expect("zero constant term");
    apply_diff_symbol(&sym, d, true)
}

// ---------------------------------------------------------------------------
// Laguerre–Appell families
// ---------------------------------------------------------------------------

/// Laguerre–Appell polynomial
/// `L_d(z) = sum_k eta_k (n+d)_k C(d,k) z^{d-k} = g(M_n) z^d`, by the
/// closed coefficient formula. Requires `eta_0 = 1`.
pub fn laguerre_appell(g: &TruncatedSeries, d: usize, n: &Scalar) -> Result<MonicPoly> {
    if !g.coeff(0).is_one() {
        return Err(Error::invalid("series must have constant term 1"));
    }
    if !n.gt_int(-1) {
        return Err(Error::invalid("operator index must satisfy n > -1"));
    }
    let nd = n.add(&Scalar::from_int(d as i64));
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        // coefficient of z^{d-k} is eta_k (n+d)_k C(d,k) with eta_k = k! g_k,
        // and k! C(d,k) = (d)_k
        let c = g
            .coeff(k)
            .mul(&falling_scalar(&nd, k as u32))
            .mul(&falling_scalar(&Scalar::from_int(d as i64), k as u32));
        coeffs.push(c);
    }
    MonicPoly::from_coeffs(coeffs)
}

/// Same polynomial through iterated operator application
/// `sum_k (eta_k / k!) M_n^k x^d`. Independent oracle for
/// [`laguerre_appell`].
pub fn laguerre_appell_via_operator(
    g: &TruncatedSeries,
    d: usize,
    n: &Scalar,
) -> Result<MonicPoly> {
    if !g.coeff(0).is_one() {
        return Err(Error::invalid("series must have constant term 1"));
    }
    let mut power: Poly = MonicPoly::monomial(d).into_poly();
    let mut total = Poly::zero();
    for k in 0..=d {
        let w = g.coeff(k);
        if !w.is_zero() {
            total = total.add(&power.scale(&w));
        }
        if k < d {
            power = power.apply_mn(n)?;
        }
    }
    total.monicize()
}

/// Laguerre–Jensen polynomial `K_d(z) = sum_k eta_k (n+d)_k C(d,k) z^k`.
pub fn laguerre_jensen(g: &TruncatedSeries, d: usize, n: &Scalar) -> Result<Poly> {
    Ok(laguerre_appell(g, d, n)?.reverse())
}

/// Normalized Laguerre–Appell polynomial `g(M_n/(d(n+d)))^d z^d`.
pub fn normalized_laguerre_appell(
    g: &TruncatedSeries,
    d: usize,
    n: &Scalar,
) -> Result<MonicPoly> {
    if !g.coeff(0).is_one() {
        return Err(Error::invalid("series must have constant term 1"));
    }
    let sym = g
        .truncate(d)
        .log()?
        .scale(&Scalar::from_int(d as i64))
        .exp()
        .expect("zero constant term");
    apply_mn_symbol(&sym, d, n, true)
}

// ---------------------------------------------------------------------------
// Class membership
// ---------------------------------------------------------------------------

/// Outcome of the positive-rooted class membership test.
#[derive(Clone, Debug)]
pub struct LpiMembership {
    /// Degrees checked successfully.
    pub checked_through: usize,
    /// First degree whose Laguerre–Jensen polynomial failed, with the reason.
    pub failure: Option<(usize, LpiFailure)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpiFailure {
    ComplexRoots { count: usize },
    NonPositiveRoot { value: f64 },
}

impl LpiMembership {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Membership test: `g` belongs to the positive-rooted class iff the
/// Laguerre–Jensen polynomials have only positive roots at every degree.
/// Checks degrees `1..=dmax`; solver nonconvergence surfaces as an error,
/// distinct from a complex-root finding.
pub fn lpi_membership(g: &TruncatedSeries, dmax: usize, n: &Scalar) -> Result<LpiMembership> {
    if !g.coeff(0).is_one() {
        return Err(Error::invalid("series must have constant term 1"));
    }
    let cfg = RootSolveConfig::default();
    for d in 1..=dmax {
        let kd = laguerre_jensen(&g.truncate(d.min(g.order())), d, n)?;
        // degree can drop when the top eta_k vanish
        if kd.degree() == 0 {
            continue;
        }
        let monic = kd.monicize()?;
        match find_roots(&monic, &cfg) {
            Ok(report) => {
                if let Some(min) = report.roots.first() {
                    if min.to_f64() <= 0.0 {
                        return Ok(LpiMembership {
                            checked_through: d - 1,
                            failure: Some((
                                d,
                                LpiFailure::NonPositiveRoot { value: min.to_f64() },
                            )),
                        });
                    }
                }
            }
            Err(Error::ComplexRoots { count, .. }) => {
                return Ok(LpiMembership {
                    checked_through: d - 1,
                    failure: Some((d, LpiFailure::ComplexRoots { count })),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(LpiMembership {
        checked_through: dmax,
        failure: None,
    })
}

// ---------------------------------------------------------------------------
// Lévy-type limiting data
// ---------------------------------------------------------------------------

/// Limit data of the normalized Appell family: drift `gamma`, Gaussian part,
/// the reciprocal-zero measure `nu` (unit masses at `1/x_j`) and the
/// finite-variance measure `G_f = sigma^2 delta_0 + sum x_j^{-2}
/// delta_{1/x_j}`.
#[derive(Clone, Debug)]
pub struct LevyData {
    pub gamma: Scalar,
    pub sigma2: Scalar,
    pub nu: RadonAtoms,
    pub g_f: RadonAtoms,
}

/// With the canonical `e^{-cz}` storage the transform value at zero is `c`,
/// so `gamma = c - sum_j 1/(x_j^3 + x_j)`. Partial sums over the stored
/// truncation are reported as-is (near-cancelling pairs are the caller's
/// concern).
pub fn levy_data(data: &LaguerrePolyaData) -> LevyData {
    let mut gamma = data.c.clone();
    let mut nu = Vec::new();
    let mut g_f = Vec::new();
    if !data.sigma2.is_zero() {
        g_f.push((Scalar::zero(), data.sigma2.clone()));
    }
    for x in &data.roots {
        let x3x = x.pow_u32(3).add(x);
        gamma = gamma.sub(&x3x.recip());
        nu.push((x.recip(), Scalar::one()));
        g_f.push((x.recip(), x.mul(x).recip()));
    }
    LevyData {
        gamma,
        sigma2: data.sigma2.clone(),
        nu: RadonAtoms { atoms: nu }.canonicalized(),
        g_f: RadonAtoms { atoms: g_f }.canonicalized(),
    }
}

/// Rectangular limit data: the point-process measure
/// `G_g = sigma^2 delta_0 + sum alpha_j^{-2} delta_{1/alpha_j^2}` and the
/// transform measure `G = sigma^2 delta_0 + sum (1/(alpha_j^2+1)) *
/// (delta_{1/alpha_j} + delta_{-1/alpha_j})/2`.
#[derive(Clone, Debug)]
pub struct RectLevyData {
    pub g_g: RadonAtoms,
    pub g: RadonAtoms,
}

pub fn rect_levy_data(data: &LpiData, prec: u32) -> Result<RectLevyData> {
    let mut g_g = Vec::new();
    let mut g = Vec::new();
    if !data.sigma2.is_zero() {
        g_g.push((Scalar::zero(), data.sigma2.clone()));
        g.push((Scalar::zero(), data.sigma2.clone()));
    }
    let half = Scalar::ratio(1, 2);
    for a2 in &data.roots_sq {
        g_g.push((a2.recip(), a2.recip()));
        let alpha = a2.sqrt(prec)?;
        let w = a2.add(&Scalar::one()).recip().mul(&half);
        g.push((alpha.recip(), w.clone()));
        g.push((alpha.recip().neg(), w));
    }
    Ok(RectLevyData {
        g_g: RadonAtoms { atoms: g_g }.canonicalized(),
        g: RadonAtoms { atoms: g }.canonicalized(),
    })
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LpJson {
    c: String,
    sigma2: String,
    roots: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct LpiJson {
    sigma2: String,
    roots_sq: Vec<String>,
}

impl LaguerrePolyaData {
    pub fn to_json(&self) -> String {
        let dto = LpJson {
            c: self.c.to_exact_string(),
            sigma2: self.sigma2.to_exact_string(),
            roots: self.roots.iter().map(|r| r.to_exact_string()).collect(),
        };
        serde_json::to_string_pretty(&dto).expect("serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dto: LpJson = serde_json::from_str(s)?;
        let parse = |t: &str| Scalar::parse_in_field(t, crate::scalar::FieldTag::Rational);
        LaguerrePolyaData::new(
            parse(&dto.c)?,
            parse(&dto.sigma2)?,
            dto.roots.iter().map(|r| parse(r)).collect::<Result<_>>()?,
        )
    }
}

impl LpiData {
    pub fn to_json(&self) -> String {
        let dto = LpiJson {
            sigma2: self.sigma2.to_exact_string(),
            roots_sq: self.roots_sq.iter().map(|r| r.to_exact_string()).collect(),
        };
        serde_json::to_string_pretty(&dto).expect("serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dto: LpiJson = serde_json::from_str(s)?;
        let parse = |t: &str| Scalar::parse_in_field(t, crate::scalar::FieldTag::Rational);
        LpiData::new(
            parse(&dto.sigma2)?,
            dto.roots_sq
                .iter()
                .map(|r| parse(r))
                .collect::<Result<_>>()?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::{finite_r, rect_finite_r};

    fn gaussian_data() -> LaguerrePolyaData {
        LaguerrePolyaData::new(Scalar::zero(), Scalar::one(), vec![]).unwrap()
    }

    #[test]
    fn gaussian_series() {
        let f = lp_series(&gaussian_data(), 4);
        assert_eq!(f.coeff(0), Scalar::one());
        assert_eq!(f.coeff(1), Scalar::zero());
        assert_eq!(f.coeff(2), Scalar::ratio(-1, 2));
        assert_eq!(f.coeff(3), Scalar::zero());
        assert_eq!(f.coeff(4), Scalar::ratio(1, 8));
    }

    #[test]
    fn single_root_series_matches_product_oracle() {
        // (c=0, sigma^2=0, roots {1}) is (1-z) e^z; multiply series directly
        let data =
            LaguerrePolyaData::new(Scalar::zero(), Scalar::zero(), vec![Scalar::one()]).unwrap();
        let f = lp_series(&data, 6);
        let mut expc = vec![Scalar::one()];
        let mut fact = Scalar::one();
        for k in 1..=6 {
            fact = fact.mul(&Scalar::from_int(k));
            expc.push(fact.recip());
        }
        let ez = TruncatedSeries::from_coeffs(expc);
        let mut lin = vec![Scalar::one(), Scalar::from_int(-1)];
        lin.resize(7, Scalar::zero());
        let one_minus = TruncatedSeries::from_coeffs(lin);
        assert_eq!(f, one_minus.mul(&ez));
        assert_eq!(f.coeff(2), Scalar::ratio(-1, 2));
        assert_eq!(f.coeff(3), Scalar::ratio(-1, 3));
    }

    #[test]
    fn drift_cancels_compensator() {
        // (c=1, sigma^2=0, roots {1}): e^{-z} (1-z) e^{z} = 1 - z
        let data =
            LaguerrePolyaData::new(Scalar::one(), Scalar::zero(), vec![Scalar::one()]).unwrap();
        let f = lp_series(&data, 5);
        assert_eq!(f.coeff(0), Scalar::one());
        assert_eq!(f.coeff(1), Scalar::from_int(-1));
        for k in 2..=5 {
            assert!(f.coeff(k).is_zero(), "k={k}");
        }
    }

    #[test]
    fn appell_of_gaussian_is_hermite() {
        let f = lp_series(&gaussian_data(), 6);
        assert_eq!(appell_poly(&f, 2).unwrap(), hermite(2));
        assert_eq!(appell_poly(&f, 6).unwrap(), hermite(6));
        assert_eq!(hermite(2).coeff(2), Scalar::from_int(-1));
        assert_eq!(hermite(3).coeff(1), Scalar::zero());
        assert_eq!(hermite(3).coeff(2), Scalar::from_int(-3));
        assert_eq!(hermite(4).evaluate(&Scalar::zero()), Scalar::from_int(3));
    }

    #[test]
    fn appell_of_linear_factor() {
        // f = 1 - z: A_l = x^l - l x^{l-1}
        let mut lin = vec![Scalar::one(), Scalar::from_int(-1)];
        lin.resize(5, Scalar::zero());
        let f = TruncatedSeries::from_coeffs(lin);
        for l in 1..=4usize {
            let a = appell_poly(&f, l).unwrap();
            assert_eq!(a.coeff(1), Scalar::from_int(-(l as i64)));
            for k in 2..=l {
                assert!(a.coeff(k).is_zero());
            }
        }
    }

    #[test]
    fn cosine_jensen_closed_form() {
        // J_3 for the cosine series is 1 - 3 z^2
        let f = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::zero(),
            Scalar::ratio(-1, 2),
            Scalar::zero(),
        ]);
        let j = jensen_poly(&f, 3).unwrap();
        assert_eq!(j.degree(), 2);
        assert_eq!(j.coeff(0), Scalar::from_int(-3));
        assert_eq!(j.coeff(1), Scalar::zero());
        assert_eq!(j.coeff(2), Scalar::one());
    }

    #[test]
    fn appell_recurrence() {
        // D A_d = d A_{d-1} for every constructed family
        let data = LaguerrePolyaData::new(
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 2),
            vec![Scalar::from_int(2), Scalar::from_int(-3)],
        )
        .unwrap();
        let f = lp_series(&data, 50);
        for d in (2..=12usize).chain([30, 50]) {
            let ad = appell_poly(&f, d).unwrap();
            let am1 = appell_poly(&f, d - 1).unwrap();
            assert_eq!(
                ad.differentiate(),
                am1.as_poly().scale(&Scalar::from_int(d as i64)),
                "d={d}"
            );
        }
    }

    #[test]
    fn reverse_of_appell_is_jensen() {
        let data =
            LaguerrePolyaData::new(Scalar::zero(), Scalar::one(), vec![Scalar::from_int(2)])
                .unwrap();
        let f = lp_series(&data, 8);
        for d in [3usize, 8] {
            assert_eq!(
                appell_poly(&f, d).unwrap().reverse(),
                jensen_poly(&f, d).unwrap()
            );
        }
    }

    #[test]
    fn laguerre_closed_form() {
        // L_2^{(0)}(x) = x^2/2 - 2x + 1
        let (raw, monic) = laguerre(2, &Scalar::zero()).unwrap();
        assert_eq!(raw.coeff(0), Scalar::ratio(1, 2));
        assert_eq!(raw.coeff(1), Scalar::from_int(-2));
        assert_eq!(raw.coeff(2), Scalar::one());
        assert_eq!(monic.coeff(1), Scalar::from_int(-4));
        assert_eq!(monic.coeff(2), Scalar::from_int(2));
        assert!(laguerre(2, &Scalar::from_int(-1)).is_err());
    }

    #[test]
    fn normalized_appell_gaussian_matches_scaled_hermite() {
        // f Gaussian: the normalized family equals Hermite with roots
        // divided by sqrt(d); only even powers appear, so the comparison is
        // exact in rationals.
        for d in [3usize, 4, 7] {
            let a = normalized_appell(&gaussian_data(), d).unwrap();
            let h = hermite(d);
            for k in 0..=d {
                let expected = if k % 2 == 0 {
                    h.coeff(k)
                        .div(&Scalar::from_int(d as i64).pow_u32((k / 2) as u32))
                } else {
                    Scalar::zero()
                };
                assert_eq!(a.coeff(k), expected, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn normalized_appell_r_transforms() {
        // Gaussian: R = s exactly
        let a = normalized_appell(&gaussian_data(), 4).unwrap();
        let r = finite_r(&a);
        for k in 0..=4 {
            assert_eq!(
                r.coeff(k),
                if k == 1 { Scalar::one() } else { Scalar::zero() }
            );
        }
        // f = 1 - z (c=1, root 1): R = 1/(1-s) = 1 + s + s^2 + ...
        let data =
            LaguerrePolyaData::new(Scalar::one(), Scalar::zero(), vec![Scalar::one()]).unwrap();
        let a = normalized_appell(&data, 3).unwrap();
        let r = finite_r(&a);
        for k in 0..=2 {
            assert_eq!(r.coeff(k), Scalar::one(), "k={k}");
        }
        // degree 1: z + gamma_1, and gamma_1 = -1 for f = 1 - z
        let a1 = normalized_appell(&data, 1).unwrap();
        assert_eq!(a1.coeff(1), Scalar::from_int(-1));
    }

    #[test]
    fn normalized_appell_equals_power_of_dilated() {
        use crate::convolve::boxplus_power;
        let data = LaguerrePolyaData::new(
            Scalar::ratio(-1, 2),
            Scalar::ratio(1, 3),
            vec![Scalar::from_int(1), Scalar::from_int(-2)],
        )
        .unwrap();
        for d in 2..=7usize {
            let direct = normalized_appell(&data, d).unwrap();
            let a = appell_poly(&lp_series(&data, d), d).unwrap();
            let dilated = a.dilate(&Scalar::ratio(1, d as i64)).unwrap();
            let powered = boxplus_power(&dilated, d as u64).unwrap();
            assert_eq!(direct, powered, "d={d}");
        }
    }

    #[test]
    fn laguerre_appell_routes_agree() {
        let g = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::from_int(-1),
            Scalar::zero(),
        ]);
        // g = 1 - z, d=2, n=0: eta_1 (n+d)_1 C(2,1) = -4 -> z^2 - 4z
        let l = laguerre_appell(&g, 2, &Scalar::zero()).unwrap();
        assert_eq!(l.coeff(1), Scalar::from_int(-4));
        assert!(l.coeff(2).is_zero());
        assert_eq!(
            l,
            laguerre_appell_via_operator(&g, 2, &Scalar::zero()).unwrap()
        );
        // trivial g = 1
        let one = TruncatedSeries::one(4);
        assert_eq!(
            laguerre_appell(&one, 4, &Scalar::one()).unwrap(),
            MonicPoly::monomial(4)
        );
        // structured data, both routes, multiple n
        let data =
            LpiData::new(Scalar::one(), vec![Scalar::from_int(1), Scalar::from_int(4)]).unwrap();
        let g = lpi_series(&data, 8);
        for n in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::from_int(3)] {
            for d in [3usize, 6, 8] {
                assert_eq!(
                    laguerre_appell(&g, d, &n).unwrap(),
                    laguerre_appell_via_operator(&g, d, &n).unwrap(),
                    "d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn laguerre_appell_of_exponential_is_laguerre() {
        // g = e^{-z}: L_{d,g} is the monic Laguerre polynomial, and the
        // normalized family has rectangular R-transform exactly s.
        let mut c = vec![Scalar::one()];
        let mut fact = Scalar::one();
        for k in 1..=6i64 {
            fact = fact.mul(&Scalar::from_int(k));
            c.push(if k % 2 == 1 {
                fact.recip().neg()
            } else {
                fact.recip()
            });
        }
        let g = TruncatedSeries::from_coeffs(c);
        for n in [Scalar::zero(), Scalar::from_int(2)] {
            let l = laguerre_appell(&g, 5, &n).unwrap();
            let (_, monic) = laguerre(5, &n).unwrap();
            assert_eq!(l, monic, "n={n}");
            let lhat = normalized_laguerre_appell(&g, 5, &n).unwrap();
            let r = rect_finite_r(&lhat, &n).unwrap();
            for k in 0..=5 {
                assert_eq!(
                    r.coeff(k),
                    if k == 1 { Scalar::one() } else { Scalar::zero() },
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn normalized_laguerre_appell_r_is_log_derivative() {
        // rect R of the normalized family is -s g'(s)/g(s), exactly
        let data =
            LpiData::new(Scalar::one(), vec![Scalar::from_int(1), Scalar::from_int(4)]).unwrap();
        for d in [4usize, 9] {
            let g = lpi_series(&data, d);
            for n in [Scalar::zero(), Scalar::one()] {
                let lhat = normalized_laguerre_appell(&g, d, &n).unwrap();
                let r = rect_finite_r(&lhat, &n).unwrap();
                let expected = crate::cumulants::log_derivative(&g)
                    .unwrap()
                    .shift_up(1)
                    .neg();
                for k in 0..=(d - 1) {
                    assert_eq!(r.coeff(k), expected.coeff(k), "d={d} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn mn_maps_laguerre_appell_down() {
        // M_n L_d = d(n+d) L_{d-1} for the same data
        let data = LpiData::new(Scalar::ratio(1, 2), vec![Scalar::from_int(2)]).unwrap();
        let g = lpi_series(&data, 30);
        let n = Scalar::ratio(1, 2);
        for d in [2usize, 11, 30] {
            let ld = laguerre_appell(&g, d, &n).unwrap();
            let lm1 = laguerre_appell(&g, d - 1, &n).unwrap();
            let lhs = ld.apply_mn(&n).unwrap();
            let scale = Scalar::from_int(d as i64).mul(&n.add(&Scalar::from_int(d as i64)));
            assert_eq!(lhs, lm1.as_poly().scale(&scale), "d={d}");
        }
    }

    #[test]
    fn levy_data_examples() {
        // no roots, sigma^2 = 1: G_f = delta_0 with mass 1
        let d = levy_data(&gaussian_data());
        assert_eq!(d.g_f.atoms, vec![(Scalar::zero(), Scalar::one())]);
        assert!(d.gamma.is_zero());
        // roots {1, -2}, sigma^2 = 1, c = 0
        let data = LaguerrePolyaData::new(
            Scalar::zero(),
            Scalar::one(),
            vec![Scalar::one(), Scalar::from_int(-2)],
        )
        .unwrap();
        let d = levy_data(&data);
        assert_eq!(d.gamma, Scalar::ratio(-2, 5));
        assert_eq!(
            d.g_f.atoms,
            vec![
                (Scalar::ratio(-1, 2), Scalar::ratio(1, 4)),
                (Scalar::zero(), Scalar::one()),
                (Scalar::one(), Scalar::one()),
            ]
        );
        // total t^2-mass equals sigma^2 + sum x_j^{-2}
        assert_eq!(
            d.g_f.total_mass(),
            Scalar::one().add(&data.inverse_square_mass())
        );
    }

    #[test]
    fn rect_levy_data_example() {
        let data = LpiData::new(Scalar::zero(), vec![Scalar::one()]).unwrap();
        let d = rect_levy_data(&data, 64).unwrap();
        assert_eq!(
            d.g.atoms,
            vec![
                (Scalar::real_from_f64(-1.0, 64), Scalar::ratio(1, 4)),
                (Scalar::real_from_f64(1.0, 64), Scalar::ratio(1, 4)),
            ]
        );
        assert_eq!(d.g_g.atoms, vec![(Scalar::one(), Scalar::one())]);
    }

    #[test]
    fn data_json_round_trip() {
        let data = LaguerrePolyaData::new(
            Scalar::ratio(1, 2),
            Scalar::one(),
            vec![Scalar::from_int(-3), Scalar::ratio(7, 2)],
        )
        .unwrap();
        let s = data.to_json();
        let back = LaguerrePolyaData::from_json(&s).unwrap();
        assert_eq!(back.c, data.c);
        assert_eq!(back.roots, data.roots);
        let lpi = LpiData::new(Scalar::one(), vec![Scalar::from_int(4)]).unwrap();
        let back = LpiData::from_json(&lpi.to_json()).unwrap();
        assert_eq!(back.roots_sq, lpi.roots_sq);
    }
}
