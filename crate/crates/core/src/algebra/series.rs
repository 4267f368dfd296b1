use std::fmt;

use num_traits::{One, Zero};

use super::{format_rational, int, Rational};
use crate::error::Error;

/// Truncated Laurent series `sum_{k=start}^{order} c_k t^k`.
///
/// Every coefficient with exponent `<= order` is exact; higher ones are
/// unknown. Arithmetic propagates the truncation so that a result never
/// claims coefficients its inputs do not determine.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries {
    start: i32,
    order: i32,
    coeffs: Vec<Rational>,
}

impl LaurentSeries {
    /// `coeffs[k]` multiplies `t^(start + k)`; the series is known through
    /// `t^order`. Coefficients past `order` are dropped.
    pub fn new(start: i32, coeffs: Vec<Rational>, order: i32) -> Self {
        let len = (order - start + 1).max(0) as usize;
        let mut coeffs = coeffs;
        coeffs.resize(len, Rational::zero());
        LaurentSeries {
            start,
            order,
            coeffs,
        }
    }

    pub fn zero(order: i32) -> Self {
        Self::new(order + 1, Vec::new(), order)
    }

    pub fn constant(c: Rational, order: i32) -> Self {
        Self::new(0, vec![c], order)
    }

    /// `c t^exp`
    pub fn monomial(c: Rational, exp: i32, order: i32) -> Self {
        Self::new(exp, vec![c], order)
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// Lowest stored exponent; the pole order is `-start` when negative.
    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn pole_order(&self) -> i32 {
        self.valuation().map_or(0, |v| (-v).max(0))
    }

    /// Coefficient of `t^exp`; `None` past the truncation order.
    pub fn coeff(&self, exp: i32) -> Option<Rational> {
        if exp > self.order {
            return None;
        }
        if exp < self.start {
            return Some(Rational::zero());
        }
        Some(self.coeffs[(exp - self.start) as usize].clone())
    }

    fn c(&self, exp: i32) -> Rational {
        self.coeff(exp).expect("coefficient past truncation order")
    }

    /// Exponent of the first nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i32> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|k| self.start + k as i32)
    }

    /// Known exact-zero up to the truncation order.
    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn val_or_past(&self) -> i32 {
        self.valuation().unwrap_or(self.order + 1)
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        Self::new(self.start, self.coeffs.clone(), order)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let start = self.start.min(rhs.start);
        let order = self.order.min(rhs.order);
        let coeffs = (start..=order).map(|e| self.c(e) + rhs.c(e)).collect();
        Self::new(start, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            self.start,
            self.coeffs.iter().map(|a| a * c).collect(),
            self.order,
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let va = self.val_or_past();
        let vb = rhs.val_or_past();
        let order = (self.order + vb).min(rhs.order + va);
        let start = va + vb;
        if start > order {
            return Self::zero(order);
        }
        let mut coeffs = vec![Rational::zero(); (order - start + 1) as usize];
        for i in va..=self.order {
            let a = self.c(i);
            if a.is_zero() {
                continue;
            }
            for j in vb..=rhs.order {
                let e = i + j;
                if e > order {
                    break;
                }
                let b = rhs.c(j);
                if !b.is_zero() {
                    coeffs[(e - start) as usize] += &a * b;
                }
            }
        }
        Self::new(start, coeffs, order)
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::constant(int(1), self.order.max(0));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the leading coefficient must be known and
    /// nonzero.
    pub fn inverse(&self) -> Result<Self, Error> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Arithmetic("inverse of a series with no known nonzero term".into()))?;
        let rel = self.order - v;
        let lead_inv = self.c(v).recip();
        let mut out = vec![Rational::zero(); (rel + 1) as usize];
        out[0] = lead_inv.clone();
        for k in 1..=rel as usize {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += self.c(v + j as i32) * &out[k - j];
            }
            out[k] = -s * &lead_inv;
        }
        Ok(Self::new(-v, out, -v + rel))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = (self.start..=self.order)
            .map(|e| self.c(e) * int(e as i64))
            .collect();
        Self::new(self.start - 1, coeffs, self.order - 1)
    }

    /// `t^k * self`
    pub fn shift(&self, k: i32) -> Self {
        Self::new(self.start + k, self.coeffs.clone(), self.order + k)
    }

    /// The known coefficients as `(exponent, value)` pairs.
    pub fn known_terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.start + k as i32, c))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .known_terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| format!("{}*t^{e}", format_rational(c)))
            .collect();
        write!(f, "{} + O(t^{})", terms.join(" + "), self.order + 1)
    }
}

impl LaurentSeries {
    pub fn is_one(&self) -> bool {
        self.valuation() == Some(0)
            && self.c(0).is_one()
            && self.known_terms().filter(|(_, c)| !c.is_zero()).count() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn geometric_inverse() {
        // 1 / (1 - t) = 1 + t + t^2 + ...
        let s = LaurentSeries::new(0, vec![int(1), int(-1)], 6);
        let inv = s.inverse().unwrap();
        for e in 0..=6 {
            assert_eq!(inv.coeff(e).unwrap(), int(1));
        }
        assert!(s.mul(&inv).is_one());
    }

    #[test]
    fn pole_times_zero_tracks_precision() {
        // (1/t + 2) * (3t + O(t^4))
        let a = LaurentSeries::new(-1, vec![int(1), int(2)], 5);
        let b = LaurentSeries::new(1, vec![int(3)], 3);
        let p = a.mul(&b);
        assert_eq!(p.order(), 2);
        assert_eq!(p.coeff(0), Some(int(3)));
        assert_eq!(p.coeff(1), Some(int(6)));
        assert_eq!(p.coeff(2), Some(int(0)));
        assert_eq!(p.coeff(3), None);
    }

    #[test]
    fn derivative_of_laurent() {
        let a = LaurentSeries::new(-1, vec![int(-1), rat(1, 2), int(3)], 1);
        let d = a.derivative();
        assert_eq!(d.coeff(-2), Some(int(1)));
        assert_eq!(d.coeff(-1), Some(int(0)));
        assert_eq!(d.coeff(0), Some(int(3)));
        assert_eq!(d.order(), 0);
    }

    #[test]
    fn inverse_of_pole() {
        let a = LaurentSeries::new(-2, vec![int(2), int(0), int(1)], 3);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.valuation(), Some(2));
        assert!(a.mul(&inv).is_one());
    }
}
