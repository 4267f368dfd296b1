//! Polynomial Poisson structures on affine coordinate spaces.
//!
//! A structure is stored as its matrix `P_ij = {c_i, c_j}` of polynomials in
//! the coordinates `c_0, ..., c_{N-1}` (variable `i` of [`MPoly`] is
//! coordinate `i`). Brackets of arbitrary polynomial functions, Hamiltonian
//! vector fields and the Jacobi identity are then exact polynomial
//! computations.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{format_rational, int, Mat, MPoly, Rational};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonStructure {
    names: Vec<String>,
    matrix: Vec<Vec<MPoly>>,
}

/// A nonzero cyclic sum `{{c_i,c_j},c_k} + cyclic`.
#[derive(Clone, Debug)]
pub struct JacobiDefect {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: MPoly,
}

/// A bracket matrix evaluated at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketTable {
    pub names: Vec<String>,
    #[serde(serialize_with = "ser_table")]
    pub entries: Vec<Vec<Rational>>,
}

fn ser_table<S: serde::Serializer>(t: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for row in t {
        let strings: Vec<String> = row.iter().map(format_rational).collect();
        seq.serialize_element(&strings)?;
    }
    seq.end()
}

impl BracketTable {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (&self.entries[i][j] + &self.entries[j][i]).is_zero()))
    }

    pub fn rank(&self) -> usize {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| self.entries[i][j].clone()).rank()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, a: &str, b: &str) -> Option<&Rational> {
        Some(&self.entries[self.index_of(a)?][self.index_of(b)?])
    }
}

impl PoissonStructure {
    pub fn new(names: Vec<String>, matrix: Vec<Vec<MPoly>>) -> Result<Self, Error> {
        let n = names.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("bracket matrix must be square".into()));
        }
        Ok(PoissonStructure { names, matrix })
    }

    /// Builds an antisymmetric structure from its upper triangle.
    pub fn from_upper(names: Vec<String>, upper: impl Fn(usize, usize) -> MPoly) -> Self {
        let n = names.len();
        let mut matrix = vec![vec![MPoly::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let p = upper(i, j);
                matrix[j][i] = -&p;
                matrix[i][j] = p;
            }
        }
        PoissonStructure { names, matrix }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn entry(&self, i: usize, j: usize) -> &MPoly {
        &self.matrix[i][j]
    }

    pub fn get(&self, a: &str, b: &str) -> Option<&MPoly> {
        Some(&self.matrix[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (&self.matrix[i][j] + &self.matrix[j][i]).is_zero()))
    }

    /// `{f, g} = sum_ij (df/dc_i) P_ij (dg/dc_j)`
    pub fn bracket(&self, f: &MPoly, g: &MPoly) -> MPoly {
        let n = self.dim();
        let df: Vec<MPoly> = (0..n).map(|i| f.derivative(i)).collect();
        let dg: Vec<MPoly> = (0..n).map(|j| g.derivative(j)).collect();
        let mut acc = MPoly::zero();
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if dg[j].is_zero() || self.matrix[i][j].is_zero() {
                    continue;
                }
                acc = acc + &(&df[i] * &self.matrix[i][j]) * &dg[j];
            }
        }
        acc
    }

    /// Components `{c_i, h}` of the Hamiltonian vector field of `h`.
    pub fn hamiltonian_field(&self, h: &MPoly) -> Vec<MPoly> {
        let n = self.dim();
        let dh: Vec<MPoly> = (0..n).map(|j| h.derivative(j)).collect();
        (0..n)
            .map(|i| {
                (0..n).fold(MPoly::zero(), |acc, j| {
                    if dh[j].is_zero() || self.matrix[i][j].is_zero() {
                        acc
                    } else {
                        acc + &self.matrix[i][j] * &dh[j]
                    }
                })
            })
            .collect()
    }

    /// Every nonzero cyclic sum over coordinate triples `i < j < k`.
    pub fn jacobi_defects(&self) -> Vec<JacobiDefect> {
        let n = self.dim();
        let grads: Vec<Vec<Vec<MPoly>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| self.matrix[i][j].derivative(l)).collect())
                    .collect()
            })
            .collect();
        // {{c_i, c_j}, c_k} = sum_l d_l P_ij * P_lk
        let nested = |i: usize, j: usize, k: usize| -> MPoly {
            (0..n).fold(MPoly::zero(), |acc, l| {
                let d = &grads[i][j][l];
                if d.is_zero() || self.matrix[l][k].is_zero() {
                    acc
                } else {
                    acc + d * &self.matrix[l][k]
                }
            })
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let value = nested(i, j, k) + nested(j, k, i) + nested(k, i, j);
                    if !value.is_zero() {
                        out.push(JacobiDefect { i, j, k, value });
                    }
                }
            }
        }
        out
    }

    pub fn satisfies_jacobi(&self) -> bool {
        self.jacobi_defects().is_empty()
    }

    pub fn at(&self, point: &[Rational]) -> BracketTable {
        BracketTable {
            names: self.names.clone(),
            entries: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|p| p.eval(point)).collect())
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        if self.names != rhs.names {
            return Err(Error::Domain("brackets live on different spaces".into()));
        }
        Ok(PoissonStructure {
            names: self.names.clone(),
            matrix: self
                .matrix
                .iter()
                .zip(&rhs.matrix)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PoissonStructure {
            names: self.names.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|p| p.scale(c)).collect())
                .collect(),
        }
    }

    /// Checks that the diagonal involution `c_i -> signs[i] c_i` is a Poisson
    /// map: `P_ij(j(c)) = signs[i] signs[j] P_ij(c)`.
    pub fn is_preserved_by(&self, signs: &[i8]) -> bool {
        let factors: Vec<Rational> = signs.iter().map(|&s| int(s as i64)).collect();
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = self.matrix[i][j].rescale_vars(&factors);
                let rhs = self.matrix[i][j].scale(&int((signs[i] * signs[j]) as i64));
                lhs == rhs
            })
        })
    }

    /// Poisson structure induced on the fixed locus of a diagonal Poisson
    /// involution.
    ///
    /// The invariant coordinates are their own invariant extensions, so the
    /// induced bracket of two of them is the ambient bracket restricted to
    /// the locus where every anti-invariant coordinate vanishes.
    pub fn reduce_by_involution(&self, signs: &[i8]) -> Result<Self, Error> {
        let n = self.dim();
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain("involution signs must be +1 or -1 per coordinate".into()));
        }
        if !self.is_preserved_by(signs) {
            return Err(Error::invariant(
                "poisson-involution",
                "the involution is not a Poisson map for this bracket; reduction refused",
            ));
        }
        let kept: Vec<usize> = (0..n).filter(|&i| signs[i] == 1).collect();
        let zeros: BTreeMap<usize, Rational> =
            (0..n).filter(|&i| signs[i] == -1).map(|i| (i, int(0))).collect();
        let mut map = vec![0; n];
        for (new, &old) in kept.iter().enumerate() {
            map[old] = new;
        }
        let restrict = |p: &MPoly| p.partial_eval(&zeros).remap_vars(&map);
        let names = kept.iter().map(|&i| self.names[i].clone()).collect();
        let matrix = kept
            .iter()
            .map(|&i| kept.iter().map(|&j| restrict(&self.matrix[i][j])).collect())
            .collect();
        Ok(PoissonStructure { names, matrix })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn canonical_structure() {
        // {q, p} = 1
        let s = PoissonStructure::from_upper(names(2), |_, _| MPoly::constant(int(1)));
        assert!(s.satisfies_jacobi());
        let h = &MPoly::var(0).pow(2) + &MPoly::var(1).pow(2);
        let field = s.hamiltonian_field(&h);
        assert_eq!(field[0], MPoly::var(1).scale(&int(2)));
        assert_eq!(field[1], MPoly::var(0).scale(&int(-2)));
        assert_eq!(s.at(&[int(0), int(0)]).rank(), 2);
    }

    #[test]
    fn lie_poisson_so3_is_jacobi() {
        // {x, y} = z, {y, z} = x, {z, x} = y
        let s = PoissonStructure::from_upper(names(3), |i, j| match (i, j) {
            (0, 1) => MPoly::var(2),
            (1, 2) => MPoly::var(0),
            (0, 2) => -MPoly::var(1),
            _ => unreachable!(),
        });
        assert!(s.satisfies_jacobi());
        let casimir = (0..3).fold(MPoly::zero(), |acc, i| acc + MPoly::var(i).pow(2));
        for i in 0..3 {
            assert!(s.bracket(&MPoly::var(i), &casimir).is_zero());
        }
    }

    #[test]
    fn broken_structure_is_detected() {
        // {y, z} = z, {z, x} = x, {x, y} = 0 violates Jacobi
        let s = PoissonStructure::from_upper(names(3), |i, j| match (i, j) {
            (1, 2) => MPoly::var(2),
            (0, 2) => -MPoly::var(0),
            _ => MPoly::zero(),
        });
        assert!(!s.satisfies_jacobi());
    }

    #[test]
    fn reduction_refuses_non_poisson_involution() {
        let s = PoissonStructure::from_upper(names(2), |_, _| MPoly::constant(int(1)));
        // (q, p) -> (q, -p) reverses the bracket
        assert!(s.reduce_by_involution(&[1, -1]).is_err());
        let r = s.reduce_by_involution(&[-1, -1]).unwrap();
        assert_eq!(r.dim(), 0);
    }
}
