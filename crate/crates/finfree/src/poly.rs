//! Monic real-coefficient polynomials and the differential / dilation
//! operators that generate the finite free convolutions.
//!
//! Coefficients are stored plainly: `p(x) = sum_k c_k x^{d-k}` with
//! `c_0 = 1` for monic polynomials. The alternating-sign coefficients
//! `a_k = (-1)^k c_k` that convolution formulas are written in are exposed
//! through an accessor, never stored.

use crate::bigfloat::{BigComplex, BigFloat};
use crate::scalar::{falling_scalar, FieldTag, Scalar};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// General polynomial, descending powers, not necessarily monic.
///
/// The zero polynomial is represented by an empty coefficient list.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let mut coeffs = coeffs;
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Poly { coeffs: Vec::new() },
            Some(0) => Poly { coeffs },
            Some(k) => {
                coeffs.drain(..k);
                Poly { coeffs }
            }
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `x^{degree - k}`.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Scalar {
        self.coeff(0)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[n - self.coeffs.len() + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let j = n - other.coeffs.len() + i;
            out[j] = out[j].add(c);
        }
        Poly::new(out)
    }

    /// Coefficient-wise derivative. Degree-0 (or zero) input yields the zero
    /// polynomial.
    pub fn differentiate(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let d = self.degree();
        let out = self
            .coeffs
            .iter()
            .take(d)
            .enumerate()
            .map(|(k, c)| c.mul(&Scalar::from_int((d - k) as i64)))
            .collect();
        Poly::new(out)
    }

    /// `M_n = x D^2 + (n+1) D`, defined for real `n > -1`.
    ///
    /// On monomials: `M_n x^m = m (n+m) x^{m-1}`.
    pub fn apply_mn(&self, n: &Scalar) -> Result<Poly> {
        if !n.gt_int(-1) {
            return Err(Error::invalid("operator index must satisfy n > -1"));
        }
        if self.coeffs.len() <= 1 {
            return Ok(Poly::zero());
        }
        let d = self.degree();
        let out = self
            .coeffs
            .iter()
            .take(d)
            .enumerate()
            .map(|(k, c)| {
                let m = Scalar::from_int((d - k) as i64);
                c.mul(&m).mul(&n.add(&m))
            })
            .collect();
        Ok(Poly::new(out))
    }

    /// Horner evaluation in the coefficient field.
    pub fn evaluate(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in &self.coeffs {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    /// Horner evaluation at a complex point, at `prec` bits.
    pub fn evaluate_complex(&self, z: &BigComplex, prec: u32) -> BigComplex {
        let mut acc = BigComplex::zero(prec);
        for c in &self.coeffs {
            acc = acc.mul(z);
            acc.re = acc.re.add(&c.to_real(prec));
        }
        acc
    }

    /// Reversal `z^d p(1/z)`: the coefficient list reversed (then trimmed).
    pub fn reverse(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(coeffs)
    }

    /// Divide by the leading coefficient.
    pub fn monicize(&self) -> Result<MonicPoly> {
        if self.is_zero() {
            return Err(Error::invalid("cannot normalize the zero polynomial"));
        }
        let lead = self.leading();
        let coeffs = self.coeffs.iter().map(|c| c.div(&lead)).collect();
        MonicPoly::from_coeffs(coeffs)
    }
}

/// Monic polynomial: `c_0 = 1`, all coefficients in one scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPoly {
    inner: Poly,
    field: FieldTag,
}

impl MonicPoly {
    /// Build from descending coefficients; `coeffs[0]` must be 1. A mixed
    /// rational/real list is promoted to the smallest real precision present.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("monic polynomial needs at least degree 0"));
        }
        let mut min_prec: Option<u32> = None;
        for c in &coeffs {
            if let FieldTag::BigReal(p) = c.field() {
                min_prec = Some(min_prec.map_or(p, |q| q.min(p)));
            }
        }
        let (coeffs, field) = match min_prec {
            None => (coeffs, FieldTag::Rational),
            Some(p) => (
                coeffs
                    .into_iter()
                    .map(|c| Scalar::Real(c.to_real(p)))
                    .collect(),
                FieldTag::BigReal(p),
            ),
        };
        if !coeffs[0].is_one() {
            return Err(Error::invalid("leading coefficient must be 1"));
        }
        Ok(MonicPoly {
            inner: Poly { coeffs },
            field,
        })
    }

    /// The constant polynomial 1 (degree 0), fixed point of the normalized
    /// operators.
    pub fn one() -> Self {
        MonicPoly::from_coeffs(vec![Scalar::one()]).unwrap()
    }

    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); d + 1];
        coeffs[0] = Scalar::one();
        MonicPoly::from_coeffs(coeffs).unwrap()
    }

    /// Exact expansion of `prod (x - r_i)`.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        let mut coeffs = vec![Scalar::one()];
        for r in roots {
            let mut next = vec![Scalar::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] = next[i].add(c);
                next[i + 1] = next[i + 1].sub(&c.mul(r));
            }
            coeffs = next;
        }
        MonicPoly::from_coeffs(coeffs).unwrap()
    }

    pub fn from_integer_roots(roots: &[i64]) -> Self {
        let rs: Vec<Scalar> = roots.iter().map(|&r| Scalar::from_int(r)).collect();
        Self::from_roots(&rs)
    }

    pub fn degree(&self) -> usize {
        self.inner.degree()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn as_poly(&self) -> &Poly {
        &self.inner
    }

    pub fn into_poly(self) -> Poly {
        self.inner
    }

    /// Plain coefficient `c_k` of `x^{d-k}`.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.inner.coeff(k)
    }

    /// Alternating-sign accessor `a_k = (-1)^k c_k`, total for `0 <= k <= d`.
    pub fn a(&self, k: usize) -> Scalar {
        let c = self.inner.coeff(k);
        if k % 2 == 0 {
            c
        } else {
            c.neg()
        }
    }

    pub fn differentiate(&self) -> Poly {
        self.inner.differentiate()
    }

    /// `(l!/d!) D^{d-l} p`: monic of degree `l`.
    pub fn normalized_derivative(&self, l: usize) -> Result<MonicPoly> {
        let d = self.degree();
        if l > d {
            return Err(Error::invalid(format!(
                "normalized derivative level {l} exceeds degree {d}"
            )));
        }
        let mut q = self.inner.clone();
        for _ in 0..(d - l) {
            q = q.differentiate();
        }
        // scale by l!/d!, i.e. divide by the accumulated leading factor d!/l!
        q.monicize()
    }

    pub fn apply_mn(&self, n: &Scalar) -> Result<Poly> {
        self.inner.apply_mn(n)
    }

    /// `M_n^j p / ((d)_j (n+d)_j)`: monic of degree `d - j`.
    pub fn apply_mn_power_normalized(&self, n: &Scalar, j: usize) -> Result<MonicPoly> {
        let d = self.degree();
        if j > d {
            return Err(Error::invalid(format!(
                "operator power {j} exceeds degree {d}"
            )));
        }
        let mut q = self.inner.clone();
        for _ in 0..j {
            q = q.apply_mn(n)?;
        }
        if !n.gt_int(-1) {
            return Err(Error::invalid("operator index must satisfy n > -1"));
        }
        q.monicize()
    }

    /// Dilation: roots multiplied by `alpha`, i.e. `c_k -> alpha^k c_k`.
    /// Negative `alpha` is accepted and flips the roots.
    pub fn dilate(&self, alpha: &Scalar) -> Result<MonicPoly> {
        if alpha.is_zero() {
            return Err(Error::invalid("dilation by zero"));
        }
        let mut coeffs = Vec::with_capacity(self.degree() + 1);
        let mut pow = Scalar::one();
        for k in 0..=self.degree() {
            coeffs.push(self.coeff(k).mul(&pow));
            if k < self.degree() {
                pow = pow.mul(alpha);
            }
        }
        MonicPoly::from_coeffs(coeffs)
    }

    pub fn reverse(&self) -> Poly {
        self.inner.reverse()
    }

    /// `p(x^2)`: degree doubles, roots become the +/- square roots.
    pub fn square_lift(&self) -> MonicPoly {
        let d = self.degree();
        let mut coeffs = vec![Scalar::zero(); 2 * d + 1];
        for k in 0..=d {
            coeffs[2 * k] = self.coeff(k);
        }
        MonicPoly::from_coeffs(coeffs).unwrap()
    }

    pub fn evaluate(&self, z: &Scalar) -> Scalar {
        self.inner.evaluate(z)
    }

    pub fn evaluate_complex(&self, z: &BigComplex, prec: u32) -> BigComplex {
        self.inner.evaluate_complex(z, prec)
    }

    /// Convert all coefficients to BigReal at `prec` bits.
    pub fn to_real(&self, prec: u32) -> MonicPoly {
        let coeffs = self
            .inner
            .coeffs
            .iter()
            .map(|c| Scalar::Real(c.to_real(prec)))
            .collect();
        MonicPoly::from_coeffs(coeffs).unwrap()
    }

    pub fn coeff_reals(&self, prec: u32) -> Vec<BigFloat> {
        self.inner.coeffs.iter().map(|c| c.to_real(prec)).collect()
    }
}

/// Shortcut for `a_k^{(j)} = a_k (d-k)_j (n+d-k)_j / ((d)_j (n+d)_j)`,
/// the closed coefficient form of the normalized `M_n` power. Used as an
/// independent oracle against the iterated operator path.
pub fn mn_power_coefficient_form(p: &MonicPoly, n: &Scalar, j: usize) -> Result<MonicPoly> {
    let d = p.degree();
    if j > d {
        return Err(Error::invalid("operator power exceeds degree"));
    }
    if !n.gt_int(-1) {
        return Err(Error::invalid("operator index must satisfy n > -1"));
    }
    let dj = falling_scalar(&Scalar::from_int(d as i64), j as u32);
    let ndj = falling_scalar(&n.add(&Scalar::from_int(d as i64)), j as u32);
    let denom = dj.mul(&ndj);
    let mut coeffs = Vec::with_capacity(d - j + 1);
    for k in 0..=(d - j) {
        let num = falling_scalar(&Scalar::from_int((d - k) as i64), j as u32).mul(&falling_scalar(
            &n.add(&Scalar::from_int((d - k) as i64)),
            j as u32,
        ));
        let ak = p.a(k).mul(&num).div(&denom);
        // back to plain storage c_k = (-1)^k a_k
        coeffs.push(if k % 2 == 0 { ak } else { ak.neg() });
    }
    MonicPoly::from_coeffs(coeffs)
}

// ---------------------------------------------------------------------------
// JSON form: {degree, field, precision_bits?, coeffs:[exact strings]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolyJson {
    degree: usize,
    field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision_bits: Option<u32>,
    coeffs: Vec<String>,
}

impl MonicPoly {
    pub fn to_json(&self) -> String {
        let (field, precision_bits) = match self.field {
            FieldTag::Rational => ("rational".to_string(), None),
            FieldTag::BigReal(p) => ("bigfloat".to_string(), Some(p)),
        };
        let dto = PolyJson {
            degree: self.degree(),
            field,
            precision_bits,
            coeffs: self
                .inner
                .coeffs
                .iter()
                .map(|c| c.to_exact_string())
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("poly serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dto: PolyJson = serde_json::from_str(s)?;
        let field = match dto.field.as_str() {
            "rational" => FieldTag::Rational,
            "bigfloat" => FieldTag::BigReal(
                dto.precision_bits
                    .ok_or_else(|| Error::invalid("bigfloat polynomial needs precision_bits"))?,
            ),
            other => return Err(Error::invalid(format!("unknown field tag: {other}"))),
        };
        if dto.coeffs.len() != dto.degree + 1 {
            return Err(Error::invalid("coefficient count must be degree + 1"));
        }
        let coeffs = dto
            .coeffs
            .iter()
            .map(|s| Scalar::parse_in_field(s, field))
            .collect::<Result<Vec<_>>>()?;
        MonicPoly::from_coeffs(coeffs)
    }
}
