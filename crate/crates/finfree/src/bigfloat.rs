//! Arbitrary-precision binary floating point on `BigInt` mantissas.
//!
//! A [`BigFloat`] is `mant * 2^exp` where the mantissa carries exactly
//! `prec` significant bits (round-to-nearest-even). Binary operations round
//! to the smaller precision of the two operands, so precision is a property
//! that only ever narrows as values flow through a computation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Default working precision for BigReal computations.
pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone, Debug)]
pub struct BigFloat {
    /// Signed mantissa; magnitude has exactly `prec` bits unless zero.
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec: prec.max(2),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Normalize `mant * 2^exp` to `prec` significant bits with
    /// round-to-nearest-even.
    pub fn normalized(mant: BigInt, exp: i64, prec: u32) -> Self {
        let prec = prec.max(2);
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let (sign, mut mag) = into_parts(mant);
        let bits = mag.bits();
        let mut exp = exp;
        if bits <= prec as u64 {
            let shift = prec as u64 - bits;
            mag <<= shift;
            exp -= shift as i64;
        } else {
            let r = bits - prec as u64;
            let q = &mag >> r;
            let rem = &mag - (&q << r);
            let half = BigUint::one() << (r - 1);
            let mut q = q;
            let round_up = match rem.cmp(&half) {
                Ordering::Greater => true,
                Ordering::Equal => q.is_odd(),
                Ordering::Less => false,
            };
            if round_up {
                q += 1u32;
                if q.bits() > prec as u64 {
                    q >>= 1;
                    exp += 1;
                }
            }
            mag = q;
            exp += r as i64;
        }
        BigFloat {
            mant: from_parts(sign, mag),
            exp,
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::normalized(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::normalized(v.clone(), 0, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 {
            return Self::zero(prec);
        }
        assert!(x.is_finite(), "cannot build BigFloat from {x}");
        let bits = x.to_bits();
        let sign = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(mant);
        Self::normalized(if sign { -m } else { m }, exp, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let (sign, num) = into_parts(r.numer().clone());
        let den = r.denom().magnitude().clone();
        let s = prec as u64 + 4 + den.bits().saturating_sub(num.bits());
        let scaled = num << s;
        let (q, rem) = scaled.div_rem(&den);
        let q2 = (q << 1u32) | BigUint::from(u32::from(!rem.is_zero()));
        Self::normalized(from_parts(sign, q2), -(s as i64) - 1, prec)
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        if self.exp >= 0 {
            BigRational::from(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.magnitude().bits();
        let (top, scale) = if bits > 53 {
            let r = bits - 53;
            let t = (self.mant.magnitude() >> r).to_u64().unwrap();
            (t, self.exp + r as i64)
        } else {
            (self.mant.magnitude().to_u64().unwrap(), self.exp)
        };
        let mut v = top as f64;
        let mut scale = scale;
        // apply the 2^scale factor in safe chunks
        while scale > 512 {
            v *= 2f64.powi(512);
            scale -= 512;
            if v.is_infinite() {
                break;
            }
        }
        while scale < -512 {
            v *= 2f64.powi(-512);
            scale += 512;
            if v == 0.0 {
                break;
            }
        }
        v *= 2f64.powi(scale as i32);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// log2 of the absolute value; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.magnitude().bits();
        let take = bits.min(53);
        let top = (self.mant.magnitude() >> (bits - take)).to_u64().unwrap() as f64;
        top.log2() + (bits - take) as f64 + self.exp as f64
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Re-round to a different precision.
    pub fn round_to(&self, prec: u32) -> Self {
        Self::normalized(self.mant.clone(), self.exp, prec)
    }

    /// Exact scaling by a power of two.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return Self::normalized(other.mant.clone(), other.exp, prec);
        }
        if other.is_zero() {
            return Self::normalized(self.mant.clone(), self.exp, prec);
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let lo_top = lo.exp + lo.mant.magnitude().bits() as i64;
        // When the small operand sits entirely below the guard window it only
        // contributes a sticky bit.
        if hi.exp > lo_top + 1 {
            let nudge = BigInt::from(if lo.is_negative() { -1i32 } else { 1i32 });
            return Self::normalized((&hi.mant << 3u32) + nudge, hi.exp - 3, prec);
        }
        let d = (hi.exp - lo.exp) as u64;
        Self::normalized((&hi.mant << d) + &lo.mant, lo.exp, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        Self::normalized(&self.mant * &other.mant, self.exp + other.exp, prec)
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero(prec);
        }
        let (sa, na) = into_parts(self.mant.clone());
        let (sb, nb) = into_parts(other.mant.clone());
        let s = prec as u64 + 4 + nb.bits().saturating_sub(na.bits());
        let (q, rem) = (na << s).div_rem(&nb);
        let q2 = (q << 1u32) | BigUint::from(u32::from(!rem.is_zero()));
        let sign = if sa == sb { Sign::Plus } else { Sign::Minus };
        Self::normalized(
            from_parts(sign, q2),
            self.exp - other.exp - s as i64 - 1,
            prec,
        )
    }

    pub fn recip(&self) -> Self {
        Self::from_i64(1, self.prec).div(self)
    }

    /// Square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let prec = self.prec;
        let mag = self.mant.magnitude().clone();
        let target = 2 * (prec as u64 + 3);
        let mut k = target.saturating_sub(mag.bits());
        if (self.exp - k as i64).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = mag << k;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let q2 = (s << 1u32) | BigUint::from(u32::from(!exact));
        Some(Self::normalized(
            from_parts(Sign::Plus, q2),
            (self.exp - k as i64) / 2 - 1,
            prec,
        ))
    }

    pub fn powi(&self, mut n: i64) -> Self {
        if n == 0 {
            return Self::from_i64(1, self.prec);
        }
        let invert = n < 0;
        if invert {
            n = -n;
        }
        let mut base = self.clone();
        let mut acc = Self::from_i64(1, self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        if invert {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = sign_i(&self.mant);
        let sb = sign_i(&other.mant);
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let top_a = self.exp + self.mant.magnitude().bits() as i64;
        let top_b = other.exp + other.mant.magnitude().bits() as i64;
        let mag_order = if top_a != top_b {
            top_a.cmp(&top_b)
        } else {
            let d = self.exp - other.exp;
            if d >= 0 {
                (self.mant.magnitude() << d as u64).cmp(other.mant.magnitude())
            } else {
                self.mant
                    .magnitude()
                    .cmp(&(other.mant.magnitude() << (-d) as u64))
            }
        };
        if sa > 0 {
            mag_order
        } else {
            mag_order.reverse()
        }
    }

    /// Exact hex form `[-]0x<mant>p<exp>`; bit-exact round trip.
    pub fn to_hex_string(&self) -> String {
        if self.is_zero() {
            return "0x0p0".to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        format!(
            "{sign}0x{}p{}",
            self.mant.magnitude().to_str_radix(16),
            self.exp
        )
    }

    pub fn from_hex_string(s: &str, prec: u32) -> Option<Self> {
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let rest = rest.strip_prefix("0x")?;
        let (mant_s, exp_s) = rest.split_once('p')?;
        let mag = BigUint::parse_bytes(mant_s.as_bytes(), 16)?;
        let exp: i64 = exp_s.parse().ok()?;
        let m = from_parts(if neg { Sign::Minus } else { Sign::Plus }, mag);
        Some(Self::normalized(m, exp, prec))
    }
}

fn sign_i(m: &BigInt) -> i32 {
    match m.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn into_parts(m: BigInt) -> (Sign, BigUint) {
    let (s, mag) = m.into_parts();
    (s, mag)
}

fn from_parts(s: Sign, mag: BigUint) -> BigInt {
    if mag.is_zero() {
        return BigInt::zero();
    }
    BigInt::from_biguint(if s == Sign::Minus { Sign::Minus } else { Sign::Plus }, mag)
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}
impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}
impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl std::fmt::Display for BigFloat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let approx = self.to_f64();
        if approx.is_finite() && approx != 0.0 {
            write!(f, "{approx:.12e}")
        } else {
            // out of f64 range: report magnitude through log10
            let l10 = self.log2_abs() * std::f64::consts::LN_2 / std::f64::consts::LN_10;
            let frac = l10.fract().abs();
            let lead = 10f64.powf(frac);
            write!(
                f,
                "{}{:.6}e{}",
                if self.is_negative() { "-" } else { "" },
                lead,
                l10.floor()
            )
        }
    }
}

/// Complex number over [`BigFloat`].
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: BigFloat::zero(prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.precision();
        BigComplex {
            re,
            im: BigFloat::zero(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        BigComplex::new(re, im)
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = o.norm_sqr();
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&den);
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&den);
        BigComplex::new(re, im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.norm_sqr().log2_abs() / 2.0
        }
    }
}
