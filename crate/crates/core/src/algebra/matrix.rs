use std::fmt;

use num_traits::{One, Zero};

use super::{Poly, Rational, Ring};
use crate::error::Error;

/// Small dense row-major matrix over a ring.
#[derive(Clone, PartialEq)]
pub struct Mat<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Ring> Mat<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        self.data[i * self.cols + j] = c;
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Mat<D> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// `self * rhs - rhs * self`
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> C {
        (0..self.rows.min(self.cols)).fold(C::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Determinant computed from the characteristic polynomial, so no
    /// division is needed.
    pub fn det(&self) -> C {
        let cp = berkowitz_charpoly(self);
        let c0 = cp.coeff(0);
        if self.rows.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// The submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

/// `det(x Id - m)` by the division-free Berkowitz algorithm.
pub fn berkowitz_charpoly<C: Ring>(m: &Mat<C>) -> Poly<C> {
    assert_eq!(m.rows, m.cols, "characteristic polynomial of a non-square matrix");
    let n = m.rows;
    // Coefficients of the running characteristic polynomial, highest degree
    // first.
    let mut v: Vec<C> = vec![C::one()];
    for r in 0..n {
        let mut t = vec![C::one(), -m.get(r, r).clone()];
        let mut col: Vec<C> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for _ in 0..r {
            let s = (0..r).fold(C::zero(), |acc, j| acc + m.get(r, j).clone() * col[j].clone());
            t.push(-s);
            col = (0..r)
                .map(|i| {
                    (0..r).fold(C::zero(), |acc, j| acc + m.get(i, j).clone() * col[j].clone())
                })
                .collect();
        }
        let mut next = vec![C::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if j <= i {
                    *slot = slot.clone() + t[i - j].clone() * vj.clone();
                }
            }
        }
        v = next;
    }
    v.reverse();
    Poly::new(v)
}

impl<C: Ring> fmt::Debug for Mat<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat<Rational> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).recip();
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let f = m.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `self * x = rhs`, fixing the variables listed in `fixed` to the
    /// given values. Every other variable must be determined; the system must
    /// be consistent.
    pub fn solve_with_fixed(
        &self,
        rhs: &[Rational],
        fixed: &[(usize, Rational)],
    ) -> Result<Vec<Rational>, Error> {
        assert_eq!(rhs.len(), self.rows);
        let free_cols: Vec<usize> = (0..self.cols)
            .filter(|c| !fixed.iter().any(|(f, _)| f == c))
            .collect();
        // Move the fixed columns to the right-hand side.
        let mut b: Vec<Rational> = rhs.to_vec();
        for (col, val) in fixed {
            for (i, bi) in b.iter_mut().enumerate() {
                *bi -= self.get(i, *col) * val;
            }
        }
        let mut aug = Mat::zeros(self.rows, free_cols.len() + 1);
        for i in 0..self.rows {
            for (k, &c) in free_cols.iter().enumerate() {
                aug.set(i, k, self.get(i, c).clone());
            }
            aug.set(i, free_cols.len(), b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&free_cols.len()) {
            return Err(Error::Inconsistent("linear system has no solution".into()));
        }
        if pivots.len() < free_cols.len() {
            return Err(Error::Inconsistent(
                "linear system is underdetermined".into(),
            ));
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (col, val) in fixed {
            x[*col] = val.clone();
        }
        for (row, &p) in pivots.iter().enumerate() {
            x[free_cols[p]] = r.get(row, free_cols.len()).clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Arithmetic("singular matrix".into()));
        }
        Ok(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| super::to_f64(self.get(i, j))).collect())
            .collect()
    }
}
