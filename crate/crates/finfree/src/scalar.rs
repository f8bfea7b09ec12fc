//! The two scalar fields every polynomial and series is built over:
//! exact big rationals and precision-tracked big floats.

use crate::bigfloat::BigFloat;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Field tag of a scalar, polynomial or series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Rational,
    BigReal(u32),
}

/// Tagged scalar: exact rational or arbitrary-precision binary float.
///
/// Rational arithmetic never rounds. Mixed rational/real arithmetic promotes
/// the rational side to the float's precision; real/real arithmetic rounds to
/// the smaller precision.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Real(BigFloat),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Rat(BigRational::from(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar::Rat(BigRational::from(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real_from_f64(v: f64, prec: u32) -> Self {
        Scalar::Real(BigFloat::from_f64(v, prec))
    }

    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rat(_) => FieldTag::Rational,
            Scalar::Real(x) => FieldTag::BigReal(x.precision()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Real(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Real(x) => x == &BigFloat::from_i64(1, x.precision()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Real(x) => x.is_negative(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }

    pub fn to_real(&self, prec: u32) -> BigFloat {
        match self {
            Scalar::Rat(r) => BigFloat::from_rational(r, prec),
            Scalar::Real(x) => x.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rat(r) => {
                // rationals may exceed f64 range; route through BigFloat
                BigFloat::from_rational(r, 64).to_f64()
            }
            Scalar::Real(x) => x.to_f64(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Real(x) => Scalar::Real(x.neg()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn div(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a / b, |a, b| a.div(b))
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut n = n;
        if let Scalar::Real(x) = self {
            acc = Scalar::Real(BigFloat::from_i64(1, x.precision()));
        }
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Real(x) => Scalar::Real(x.recip()),
        }
    }

    /// Square root: exact rationals leave the field, so the result is always
    /// a BigReal at `prec` bits.
    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        let x = self.to_real(prec);
        x.sqrt()
            .map(Scalar::Real)
            .ok_or_else(|| Error::invalid("square root of negative scalar"))
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            _ => {
                let prec = match (self.field(), o.field()) {
                    (FieldTag::BigReal(p), FieldTag::BigReal(q)) => p.min(q),
                    (FieldTag::BigReal(p), _) | (_, FieldTag::BigReal(p)) => p,
                    _ => unreachable!(),
                };
                self.to_real(prec).cmp_value(&o.to_real(prec))
            }
        }
    }

    /// Exact string form: `n/d` for rationals, hex float for reals.
    pub fn to_exact_string(&self) -> String {
        match self {
            Scalar::Rat(r) => r.to_string(),
            Scalar::Real(x) => x.to_hex_string(),
        }
    }

    /// Parse within a field context. Rational accepts `n` or `n/d`; BigReal
    /// accepts the hex form, `n/d`, or a plain decimal.
    pub fn parse_in_field(s: &str, field: FieldTag) -> Result<Self> {
        match field {
            FieldTag::Rational => {
                let r: BigRational = s
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad rational literal: {s}")))?;
                Ok(Scalar::Rat(r))
            }
            FieldTag::BigReal(prec) => {
                if s.contains("0x") {
                    BigFloat::from_hex_string(s, prec)
                        .map(Scalar::Real)
                        .ok_or_else(|| Error::invalid(format!("bad hex float literal: {s}")))
                } else if let Ok(r) = s.parse::<BigRational>() {
                    Ok(Scalar::Real(BigFloat::from_rational(&r, prec)))
                } else {
                    let v: f64 = s
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad float literal: {s}")))?;
                    Ok(Scalar::Real(BigFloat::from_f64(v, prec)))
                }
            }
        }
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    frat: impl Fn(&BigRational, &BigRational) -> BigRational,
    freal: impl Fn(&BigFloat, &BigFloat) -> BigFloat,
) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(frat(x, y)),
        (Scalar::Real(x), Scalar::Real(y)) => Scalar::Real(freal(x, y)),
        (Scalar::Rat(x), Scalar::Real(y)) => {
            Scalar::Real(freal(&BigFloat::from_rational(x, y.precision()), y))
        }
        (Scalar::Real(x), Scalar::Rat(y)) => {
            Scalar::Real(freal(x, &BigFloat::from_rational(y, x.precision())))
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Falling factorial `(x)_k = x (x-1) ... (x-k+1)` for integer `x`.
pub fn falling_int(x: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= BigInt::from(x - i);
    }
    acc
}

/// Falling factorial for an arbitrary scalar base.
pub fn falling_scalar(x: &Scalar, k: u32) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k as i64 {
        acc = acc.mul(&x.sub(&Scalar::from_int(i)));
    }
    acc
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    falling_int(n as i64, n)
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Convenience: rational scalar from big integers.
pub fn rat(n: BigInt, d: BigInt) -> Scalar {
    Scalar::Rat(BigRational::new(n, d))
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<BigFloat> for Scalar {
    fn from(x: BigFloat) -> Self {
        Scalar::Real(x)
    }
}

impl Scalar {
    /// Lower bound check `self > bound` used for parameter validation
    /// (e.g. the operator index `n > -1`).
    pub fn gt_int(&self, bound: i64) -> bool {
        self.cmp_value(&Scalar::from_int(bound)) == Ordering::Greater
    }

    pub fn to_f64_checked(&self) -> Option<f64> {
        match self {
            Scalar::Rat(r) => r.to_f64(),
            Scalar::Real(x) => Some(x.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ops_are_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        assert_eq!(a.add(&b), Scalar::ratio(1, 2));
        assert_eq!(a.sub(&b), Scalar::ratio(1, 6));
        assert_eq!(a.mul(&b), Scalar::ratio(1, 18));
        assert_eq!(a.div(&b), Scalar::from_int(2));
    }

    #[test]
    fn mixed_ops_promote_to_real() {
        let a = Scalar::ratio(1, 2);
        let b = Scalar::real_from_f64(2.0, 128);
        let c = a.mul(&b);
        assert_eq!(c.field(), FieldTag::BigReal(128));
        assert_eq!(c.to_f64(), 1.0);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_int(5, 3), BigInt::from(60));
        assert_eq!(falling_int(5, 0), BigInt::from(1));
        let half = Scalar::ratio(1, 2);
        // (1/2)_2 = (1/2)(-1/2) = -1/4
        assert_eq!(falling_scalar(&half, 2), Scalar::ratio(-1, 4));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn exact_string_round_trip() {
        let a = Scalar::ratio(-7, 12);
        let s = a.to_exact_string();
        assert_eq!(s, "-7/12");
        assert_eq!(Scalar::parse_in_field(&s, FieldTag::Rational).unwrap(), a);
    }

    #[test]
    fn parameter_guard() {
        assert!(Scalar::ratio(-1, 2).gt_int(-1));
        assert!(!Scalar::from_int(-1).gt_int(-1));
        assert!(!Scalar::from_int(-2).gt_int(-1));
    }
}
