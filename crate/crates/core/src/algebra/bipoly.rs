use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{Poly, Rational, Ring};
use crate::error::Error;

/// Dense bivariate polynomial in `(x, x')`; `coeff(i, j)` multiplies
/// `x^i x'^j`.
#[derive(Clone)]
pub struct BiPoly<C = Rational> {
    rows: Vec<Vec<C>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: usize) -> Parity {
        if degree.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl<C: Ring> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        BiPoly { rows }
    }

    /// `p(x)` viewed as a bivariate polynomial.
    pub fn from_x(p: &Poly<C>) -> Self {
        BiPoly {
            rows: p.coeffs().iter().map(|c| vec![c.clone()]).collect(),
        }
    }

    /// `p(x')` viewed as a bivariate polynomial.
    pub fn from_xp(p: &Poly<C>) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        BiPoly {
            rows: vec![p.coeffs().to_vec()],
        }
    }

    /// `p(x + x')`
    pub fn from_sum(p: &Poly<C>) -> Self {
        let mut out = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            // (x + x')^k = sum binom(k, i) x^i x'^(k - i)
            let mut binom = 1i64;
            for i in 0..=k {
                out.add_at(i, k - i, c.clone() * C::from_int(binom));
                binom = binom * (k - i) as i64 / (i + 1) as i64;
            }
        }
        out
    }

    /// `p(x) q(x')`
    pub fn outer(p: &Poly<C>, q: &Poly<C>) -> Self {
        let mut out = Self::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                out.add_at(i, j, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: C) {
        if c.is_zero() {
            return;
        }
        if self.rows.len() <= i {
            self.rows.resize(i + 1, Vec::new());
        }
        let row = &mut self.rows[i];
        if row.len() <= j {
            row.resize(j + 1, C::zero());
        }
        row[j] = row[j].clone() + c;
    }

    /// Bounds `(1 + max deg_x, 1 + max deg_x')` of the stored block.
    pub fn extent(&self) -> (usize, usize) {
        (
            self.rows.len(),
            self.rows.iter().map(Vec::len).max().unwrap_or(0),
        )
    }

    /// Nonzero coefficients as `(i, j, c)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &C)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().next().is_none()
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        BiPoly {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// Exchanges the roles of `x` and `x'`.
    pub fn swap(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.nonzero() {
            out.add_at(j, i, c.clone());
        }
        out
    }

    /// `F(-x, x')`, `F(x, -x')` or `F(-x, -x')` according to the flags.
    pub fn reflect(&self, neg_x: bool, neg_xp: bool) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.nonzero() {
            let flip = (neg_x && i % 2 == 1) ^ (neg_xp && j % 2 == 1);
            out.add_at(i, j, if flip { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Multiplication by `x^a x'^b`.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.nonzero() {
            out.add_at(i + a, j + b, c.clone());
        }
        out
    }

    /// `(x - x') * self`
    pub fn mul_x_minus_xp(&self) -> Self {
        &self.shift(1, 0) - &self.shift(0, 1)
    }

    /// Exact division by `x^2 - x'^2`.
    pub fn div_x2_minus_xp2(&self) -> Result<Self, Error> {
        // Long division in x with coefficients in C[x']: the divisor is
        // x^2 - c with c = x'^2.
        let (nx, _) = self.extent();
        let mut rows: Vec<Poly<C>> = (0..nx).map(|i| self.row_poly(i)).collect();
        let c = Poly::monomial(C::one(), 2);
        let mut quot: Vec<Poly<C>> = vec![Poly::zero(); nx.saturating_sub(2)];
        for i in (2..nx).rev() {
            let q = rows[i].clone();
            rows[i - 2] = &rows[i - 2] + &(&q * &c);
            quot[i - 2] = q;
        }
        if rows.iter().take(2).any(|r| !r.is_zero()) {
            return Err(Error::Arithmetic(
                "bivariate polynomial is not divisible by x^2 - x'^2".into(),
            ));
        }
        Ok(Self::from_row_polys(&quot))
    }

    /// Exact division by `x - x'`.
    pub fn div_x_minus_xp(&self) -> Result<Self, Error> {
        let (nx, _) = self.extent();
        let mut rows: Vec<Poly<C>> = (0..nx).map(|i| self.row_poly(i)).collect();
        let xp = Poly::x();
        let mut quot: Vec<Poly<C>> = vec![Poly::zero(); nx.saturating_sub(1)];
        for i in (1..nx).rev() {
            let q = rows[i].clone();
            rows[i - 1] = &rows[i - 1] + &(&q * &xp);
            quot[i - 1] = q;
        }
        if rows.first().is_some_and(|r| !r.is_zero()) {
            return Err(Error::Arithmetic(
                "bivariate polynomial is not divisible by x - x'".into(),
            ));
        }
        Ok(Self::from_row_polys(&quot))
    }

    /// The coefficient of `x^i` as a polynomial in `x'`.
    pub fn row_poly(&self, i: usize) -> Poly<C> {
        Poly::new(self.rows.get(i).cloned().unwrap_or_default())
    }

    fn from_row_polys(rows: &[Poly<C>]) -> Self {
        BiPoly {
            rows: rows.iter().map(|p| p.coeffs().to_vec()).collect(),
        }
    }

    /// Evaluates at `x' = at`, leaving a polynomial in `x`.
    pub fn eval_xp(&self, at: &C) -> Poly<C> {
        Poly::new((0..self.rows.len()).map(|i| self.row_poly(i).eval(at)).collect())
    }
}

impl<C: Ring> PartialEq for BiPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl<C: Ring> fmt::Debug for BiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .nonzero()
            .map(|(i, j, c)| format!("({c:?})x^{i}x'^{j}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<C: Ring> Add for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, rhs: &BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (i, j, c) in rhs.nonzero() {
            out.add_at(i, j, c.clone());
        }
        out
    }
}

impl<C: Ring> Sub for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn sub(self, rhs: &BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (i, j, c) in rhs.nonzero() {
            out.add_at(i, j, -c.clone());
        }
        out
    }
}

impl<C: Ring> Mul for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, rhs: &BiPoly<C>) -> BiPoly<C> {
        let mut out = BiPoly::zero();
        for (i, j, a) in self.nonzero() {
            for (k, l, b) in rhs.nonzero() {
                out.add_at(i + k, j + l, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Ring> Neg for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn neg(self) -> BiPoly<C> {
        self.map(|c| -c.clone())
    }
}

/// `(p(x) phi(x') - p(x') phi(x)) / (x - x')`, which is always a polynomial.
///
/// Computed monomial by monomial: for `i > j`,
/// `(x^i x'^j - x^j x'^i) / (x - x') = x^j x'^j * sum_{s<i-j} x^s x'^(i-j-1-s)`.
pub fn divided_difference<C: Ring>(p: &Poly<C>, phi: &Poly<C>) -> BiPoly<C> {
    let mut out = BiPoly::zero();
    for (i, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in phi.coeffs().iter().enumerate() {
            if b.is_zero() || i == j {
                continue;
            }
            let c = a.clone() * b.clone();
            let (hi, lo, sign) = if i > j { (i, j, c) } else { (j, i, -c) };
            let k = hi - lo;
            for s in 0..k {
                out.add_at(lo + s, lo + k - 1 - s, sign.clone());
            }
        }
    }
    out
}

/// Keeps the monomials `x^i x'^j` with `i` of parity `px` and `j` of parity
/// `pxp`; equal to `(F(x,x') +- F(-x,x') +- F(x,-x') +- F(-x,-x'))/4`.
pub fn parity_project<C: Ring>(f: &BiPoly<C>, px: Parity, pxp: Parity) -> BiPoly<C> {
    let mut out = BiPoly::zero();
    for (i, j, c) in f.nonzero() {
        if Parity::of(i) == px && Parity::of(j) == pxp {
            out.add_at(i, j, c.clone());
        }
    }
    out
}

impl<C: Ring> Zero for BiPoly<C> {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
}

impl<C: Ring> Add for BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, rhs: BiPoly<C>) -> BiPoly<C> {
        &self + &rhs
    }
}

impl<C: Ring> Sub for BiPoly<C> {
    type Output = BiPoly<C>;
    fn sub(self, rhs: BiPoly<C>) -> BiPoly<C> {
        &self - &rhs
    }
}

impl<C: Ring> Mul for BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, rhs: BiPoly<C>) -> BiPoly<C> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, QPoly};

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn divided_difference_examples() {
        // p = x + u0, phi = 1
        let dd = divided_difference(&q(&[7, 1]), &q(&[1]));
        assert_eq!(dd, BiPoly::from_rows(vec![vec![int(1)]]));
        let p = q(&[3, -1, 2]);
        assert!(divided_difference(&p, &p).is_zero());
        // x^2 -> x + x'
        let dd = divided_difference(&q(&[0, 0, 1]), &q(&[1]));
        assert_eq!(dd, BiPoly::from_rows(vec![vec![int(0), int(1)], vec![int(1)]]));
    }

    #[test]
    fn parity_projection_examples() {
        let x = BiPoly::from_x(&q(&[0, 1]));
        assert!(parity_project(&x, Parity::Even, Parity::Even).is_zero());
        // x x' + x^2
        let f = &BiPoly::outer(&q(&[0, 1]), &q(&[0, 1])) + &BiPoly::from_x(&q(&[0, 0, 1]));
        assert_eq!(
            parity_project(&f, Parity::Even, Parity::Even),
            BiPoly::from_x(&q(&[0, 0, 1]))
        );
    }

    #[test]
    fn projection_agrees_with_reflection_formula() {
        let f = &BiPoly::outer(&q(&[1, 2, 3, 4]), &q(&[5, -1, 0, 2]))
            + &BiPoly::from_sum(&q(&[0, 1, 1, 1]));
        // even in x, odd in x': (F(x,x') + F(-x,x') - F(x,-x') - F(-x,-x')) / 4
        let combo = &(&(&f + &f.reflect(true, false)) - &f.reflect(false, true))
            - &f.reflect(true, true);
        let quarter = combo.scale(&crate::algebra::rat(1, 4));
        assert_eq!(quarter, parity_project(&f, Parity::Even, Parity::Odd));
    }

    #[test]
    fn sum_substitution() {
        // (x + x')^2 = x^2 + 2 x x' + x'^2
        let s = BiPoly::from_sum(&q(&[0, 0, 1]));
        assert_eq!(s.coeff(1, 1), int(2));
        assert_eq!(s.coeff(2, 0), int(1));
        assert_eq!(s.coeff(0, 2), int(1));
    }

    #[test]
    fn exact_divisions() {
        let f = BiPoly::from_x(&q(&[0, 0, 0, 0, 1])) - BiPoly::from_xp(&q(&[0, 0, 0, 0, 1]));
        let g = f.div_x2_minus_xp2().unwrap();
        assert_eq!(g, BiPoly::from_x(&q(&[0, 0, 1])) + BiPoly::from_xp(&q(&[0, 0, 1])));
        let h = f.div_x_minus_xp().unwrap();
        assert_eq!(h.mul_x_minus_xp(), f);
        assert!(BiPoly::from_x(&q(&[0, 1])).div_x2_minus_xp2().is_err());
    }
}
