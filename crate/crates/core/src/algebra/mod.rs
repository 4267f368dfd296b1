//! Exact arithmetic substrate: rationals, dense univariate and bivariate
//! polynomials, sparse multivariate (Laurent) polynomials, small dense
//! matrices, truncated Laurent series and tridiagonal minors.

mod bipoly;
mod matrix;
mod mpoly;
mod poly;
mod series;
mod tridiag;

pub use bipoly::{divided_difference, parity_project, BiPoly, Parity};
pub use matrix::{berkowitz_charpoly, Mat};
pub use mpoly::MPoly;
pub use poly::{pr_split, Poly, QPoly};
pub use series::LaurentSeries;
pub use tridiag::{dense_det, minor_matrix, tridiag_minor_det, TridiagSpec};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;

/// Arbitrary precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Commutative ring with unit, the coefficient domain of [`Poly`],
/// [`BiPoly`] and [`Mat`].
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;

    fn from_int(i: i64) -> Self {
        Self::from_rational(&int(i))
    }
}

impl Ring for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

/// Floating coefficients, used by the numerical flows. Equality is exact
/// bitwise comparison, so only the rational instance is used for identities.
impl Ring for f64 {
    fn from_rational(q: &Rational) -> Self {
        to_f64(q)
    }
}

/// Shorthand for an integral rational.
pub fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

/// Shorthand for `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q`, `-p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Canonical text form: `p/q` in lowest terms, or a bare integer.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact power of a rational with a signed exponent.
pub fn pow(q: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

pub mod serde_rational {
    //! Serialize rationals as their canonical strings.
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{format_rational, parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let strings: Vec<String> = v.iter().map(format_rational).collect();
            strings.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let strings = Vec::<String>::deserialize(d)?;
            strings
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
