use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, parse_rational, rat, Rational, Ring};
use crate::error::Error;

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and `degree()` returns `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C = Rational> {
    coeffs: Vec<C>,
}

pub type QPoly = Poly<Rational>;

impl<C: Ring> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = vec![C::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x - c`
    pub fn linear_root(c: C) -> Self {
        Self::new(vec![-c, C::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C::from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, at: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// The substitution `x -> -x`.
    pub fn neg_x(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Splits into `(even, odd)` parts with `self = even + odd`.
    pub fn parity_split(&self) -> (Self, Self) {
        let pick = |want: usize| {
            Self::new(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i % 2 == want { c.clone() } else { C::zero() })
                    .collect(),
            )
        };
        (pick(0), pick(1))
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| c.is_zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * C::from_int(i as i64))
                .collect(),
        )
    }

    /// Substitutes `x -> q(x)`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact division by the monic linear factor `x - c`.
    ///
    /// Returns the quotient together with the remainder `self(c)`.
    pub fn div_linear(&self, c: &C) -> (Self, C) {
        let Some(d) = self.degree() else {
            return (Self::zero(), C::zero());
        };
        if d == 0 {
            return (Self::zero(), self.coeffs[0].clone());
        }
        let mut q = vec![C::zero(); d];
        let mut carry = C::zero();
        for i in (0..=d).rev() {
            let val = self.coeffs[i].clone() + carry.clone() * c.clone();
            if i == 0 {
                return (Self::new(q), val);
            }
            q[i - 1] = val.clone();
            carry = val;
        }
        unreachable!()
    }

    /// Division by a monic divisor, valid over any ring.
    pub fn divrem_monic(&self, d: &Self) -> Result<(Self, Self), Error> {
        if !d.is_monic() {
            return Err(Error::Arithmetic("divisor is not monic".into()));
        }
        let dd = d.degree().unwrap_or(0);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let lead = rem[i].clone();
            if lead.is_zero() {
                continue;
            }
            quot[i - dd] = lead.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = rem[k].clone() - lead.clone() * dc.clone();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }
}

impl QPoly {
    /// Euclidean division over the rationals; `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly), Error> {
        let lead = divisor
            .leading()
            .ok_or_else(|| Error::Arithmetic("division by the zero polynomial".into()))?;
        let inv = lead.recip();
        let monic = divisor.scale(&inv);
        let (q, r) = self.divrem_monic(&monic)?;
        Ok((q.scale(&inv), r))
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly, Error> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Arithmetic(format!(
                "inexact division of {self} by {divisor}"
            )));
        }
        Ok(q)
    }

    /// Parses the comma separated ascending coefficient format, e.g.
    /// `-4,0,9,0,-6,0,1`.
    pub fn parse(text: &str) -> Result<QPoly, Error> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(QPoly::zero());
        }
        let coeffs = text
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPoly::new(coeffs))
    }

    /// Inverse of [`QPoly::parse`]. The zero polynomial is written `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(super::to_f64).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({})", format_rational(&mag))?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<C: Ring> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<C: Ring> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Ring> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Ring> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<C: Ring> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Ring> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Ring> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Ring> Zero for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Ring> One for Poly<C> {
    fn one() -> Self {
        Poly::one()
    }
}

impl<C: Ring> Ring for Poly<C> {
    fn from_rational(q: &Rational) -> Self {
        Poly::constant(C::from_rational(q))
    }
}

/// Splits `u*w + v^2 = p^2 + r` with `p` monic of degree `n` and
/// `deg r < n`, solving for the coefficients of `p` from the top down.
pub fn pr_split<C: Ring>(
    u: &Poly<C>,
    v: &Poly<C>,
    w: &Poly<C>,
    n: usize,
) -> Result<(Poly<C>, Poly<C>), Error> {
    let h = &(u * w) + &(v * v);
    if h.degree() != Some(2 * n) || !h.is_monic() {
        return Err(Error::Domain(format!(
            "u*w + v^2 must be monic of degree {}",
            2 * n
        )));
    }
    let half = C::from_rational(&rat(1, 2));
    let mut p = vec![C::zero(); n + 1];
    p[n] = C::one();
    for j in 1..=n {
        let mut acc = h.coeff(2 * n - j);
        for i in 1..j {
            acc = acc - p[n - i].clone() * p[n - j + i].clone();
        }
        p[n - j] = acc * half.clone();
    }
    let p = Poly::new(p);
    let r = &h - &(&p * &p);
    debug_assert!(r.degree().is_none_or(|d| d < n));
    Ok((p, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&q(&[1, 1]) * &q(&[-1, 1]), q(&[-1, 0, 1]));
    }

    #[test]
    fn parity_split_of_cubic() {
        let (even, odd) = q(&[0, 0, 2, 1]).parity_split();
        assert_eq!(even, q(&[0, 0, 2]));
        assert_eq!(odd, q(&[0, 0, 0, 1]));
        assert!(even.is_even() && odd.is_odd());
        assert_eq!(even.neg_x(), even);
    }

    #[test]
    fn long_division_example() {
        // x^6 - 6x^4 + 9x^2 - 4 = (x^3 - 3x)^2 - 4
        let (quot, rem) = q(&[-4, 0, 9, 0, -6, 0, 1]).divrem(&q(&[0, -3, 0, 1])).unwrap();
        assert_eq!(quot, q(&[0, -3, 0, 1]));
        assert_eq!(rem, q(&[-4]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(q(&[1, 1]).divrem(&QPoly::zero()).is_err());
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(QPoly::zero().degree(), None);
        assert_eq!(q(&[0, 0, 0]).degree(), None);
        assert_eq!(q(&[3]).degree(), Some(0));
    }

    #[test]
    fn text_format() {
        let p = QPoly::parse("-4,0,9,0,-6,0,1").unwrap();
        assert_eq!(p, q(&[-4, 0, 9, 0, -6, 0, 1]));
        assert_eq!(p.to_text(), "-4,0,9,0,-6,0,1");
        assert_eq!(QPoly::parse("1/2,-3").unwrap().coeff(0), rat(1, 2));
        assert_eq!(QPoly::zero().to_text(), "0");
        assert!(QPoly::parse("1,,2").is_err());
        assert_eq!(p.to_string(), "x^6 - 6x^4 + 9x^2 - 4");
    }

    #[test]
    fn pr_split_examples() {
        let u = q(&[-1, 0, 1]);
        let w = q(&[4, 0, -5, 0, 1]);
        let (p, r) = pr_split(&u, &QPoly::zero(), &w, 3).unwrap();
        assert_eq!(p, q(&[0, -3, 0, 1]));
        assert_eq!(r, q(&[-4]));

        let (p, r) = pr_split(&q(&[1]), &QPoly::zero(), &q(&[0, 0, 1]), 1).unwrap();
        assert_eq!(p, q(&[0, 1]));
        assert!(r.is_zero());

        assert!(pr_split(&q(&[2]), &QPoly::zero(), &q(&[0, 0, 1]), 1).is_err());
    }

    #[test]
    fn linear_division() {
        let p = q(&[-4, 0, 9, 0, -6, 0, 1]);
        let (quot, rem) = p.div_linear(&int(2));
        assert_eq!(rem, p.eval(&int(2)));
        assert_eq!(&(&quot * &q(&[-2, 1])) + &QPoly::constant(rem), p);
    }
}
