//! Formal power series kept modulo `s^{m+1}`.
//!
//! Arithmetic (including `exp` and `log`) is closed on the truncation; all
//! recurrences are the standard coefficient ones and are exact over
//! rationals.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Truncated power series: coefficients of `s^0 .. s^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least order 0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Scalar::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Scalar::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(Scalar::zero());
        }
        TruncatedSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.order().min(o.order());
        TruncatedSeries {
            coeffs: (0..=m).map(|k| self.coeff(k).add(&o.coeff(k))).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.order().min(o.order());
        let mut out = vec![Scalar::zero(); m + 1];
        for i in 0..=m {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=(m - i) {
                let b = o.coeff(j);
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(&b));
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Division; the denominator must have an invertible constant term.
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.coeff(0).is_zero() {
            return Err(Error::invalid(
                "series division needs a unit constant term",
            ));
        }
        let m = self.order().min(o.order());
        let b0 = o.coeff(0);
        let mut out = vec![Scalar::zero(); m + 1];
        for k in 0..=m {
            let mut acc = self.coeff(k);
            for i in 1..=k {
                let b = o.coeff(i);
                if b.is_zero() {
                    continue;
                }
                acc = acc.sub(&b.mul(&out[k - i]));
            }
            out[k] = acc.div(&b0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Coefficient-wise derivative; the result is known one order lower.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return TruncatedSeries::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|k| self.coeff(k).mul(&Scalar::from_int(k as i64)))
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::invalid("series exp needs zero constant term"));
        }
        let m = self.order();
        let mut g = vec![Scalar::zero(); m + 1];
        g[0] = Scalar::one();
        for k in 1..=m {
            let mut acc = Scalar::zero();
            for i in 1..=k {
                let f = self.coeff(i);
                if f.is_zero() {
                    continue;
                }
                acc = acc.add(&f.mul(&Scalar::from_int(i as i64)).mul(&g[k - i]));
            }
            g[k] = acc.div(&Scalar::from_int(k as i64));
        }
        Ok(TruncatedSeries { coeffs: g })
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(0).is_one() {
            return Err(Error::invalid("series log needs constant term 1"));
        }
        let m = self.order();
        let mut h = vec![Scalar::zero(); m + 1];
        for k in 1..=m {
            let mut acc = self.coeff(k).mul(&Scalar::from_int(k as i64));
            for i in 1..k {
                acc = acc.sub(&h[i].mul(&Scalar::from_int(i as i64)).mul(&self.coeff(k - i)));
            }
            h[k] = acc.div(&Scalar::from_int(k as i64));
        }
        Ok(TruncatedSeries { coeffs: h })
    }

    /// Substitute `s -> alpha s`: coefficient `k` picks up `alpha^k`.
    pub fn compose_scale(&self, alpha: &Scalar) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut pow = Scalar::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c.mul(&pow));
            if k < self.coeffs.len() - 1 {
                pow = pow.mul(alpha);
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiply by `s^k` (keeping the truncation order).
    pub fn shift_up(&self, k: usize) -> Self {
        let m = self.order();
        let mut out = vec![Scalar::zero(); m + 1];
        if k <= m {
            for i in 0..=(m - k) {
                out[i + k] = self.coeff(i);
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Integer power via exp of log when the constant term is 1, otherwise
    /// square-and-multiply.
    pub fn pow(&self, n: u64) -> Self {
        if n == 0 {
            return TruncatedSeries::one(self.order());
        }
        if self.coeff(0).is_one() {
            let lg = self.log().expect("constant term checked");
            return lg
                .scale(&Scalar::from_int(n as i64))
                .exp()
                .expect("zero constant term");
        }
        let mut acc = TruncatedSeries::one(self.order());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Exact Horner evaluation of the truncation at a scalar point.
    pub fn evaluate(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64())
            .fold(0.0, f64::max)
    }
}

/// Largest absolute coefficient difference, as f64 (0 when identical).
pub fn max_coeff_gap(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    let m = a.order().min(b.order());
    (0..=m)
        .map(|k| a.coeff(k).sub(&b.coeff(k)).abs().to_f64())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_series(order: usize) -> TruncatedSeries {
        let mut c = vec![Scalar::one()];
        let mut fact = Scalar::one();
        for k in 1..=order {
            fact = fact.mul(&Scalar::from_int(k as i64));
            c.push(fact.recip());
        }
        TruncatedSeries::from_coeffs(c)
    }

    #[test]
    fn exp_log_inverse() {
        let f = TruncatedSeries::from_coeffs(
            (0..=8)
                .map(|k| if k == 0 { Scalar::zero() } else { Scalar::ratio(1, k as i64 + 1) })
                .collect(),
        );
        let g = f.exp().unwrap();
        assert_eq!(g.log().unwrap(), f);
    }

    #[test]
    fn exp_series_matches_factorials() {
        let s = TruncatedSeries::from_coeffs(vec![
            Scalar::zero(),
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ]);
        assert_eq!(s.exp().unwrap(), exp_series(4));
    }

    #[test]
    fn division_is_multiplication_inverse() {
        let a = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::ratio(1, 2),
            Scalar::from_int(-3),
            Scalar::ratio(7, 5),
        ]);
        let b = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::from_int(2),
            Scalar::ratio(-1, 3),
            Scalar::from_int(1),
        ]);
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        let bad = TruncatedSeries::zero(3);
        assert!(a.div(&bad).is_err());
    }

    #[test]
    fn geometric_series_log_derivative() {
        // f = 1 - s: f'/f = -1/(1-s) = -(1 + s + s^2 + ...)
        let f = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::from_int(-1),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ]);
        let ld = f.derivative().truncate(5).div(&f.truncate(5)).unwrap();
        for k in 0..=4 {
            assert_eq!(ld.coeff(k), Scalar::from_int(-1), "k={k}");
        }
    }

    #[test]
    fn compose_scale_and_shift() {
        let f = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::one(),
            Scalar::one(),
        ]);
        let g = f.compose_scale(&Scalar::from_int(2));
        assert_eq!(g.coeff(2), Scalar::from_int(4));
        let h = f.shift_up(1);
        assert_eq!(h.coeff(0), Scalar::zero());
        assert_eq!(h.coeff(1), Scalar::one());
        assert_eq!(h.coeff(2), Scalar::one());
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = TruncatedSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::ratio(-1, 2),
            Scalar::ratio(1, 3),
            Scalar::from_int(2),
        ]);
        let direct = f.mul(&f).mul(&f);
        assert_eq!(f.pow(3), direct);
    }
}
