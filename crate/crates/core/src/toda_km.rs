//! Periodic `sl(n)` Toda lattice and its Kac-van Moerbeke (Volterra)
//! subsystem.
//!
//! Indices are cyclic: `a_{n+1} = a_1`. Internally everything is 0-based.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    format_rational, int, parse_rational, rat, tridiag_minor_det, Mat, MPoly, Poly, QPoly,
    Rational, Ring, TridiagSpec,
};
use crate::error::Error;
use crate::poisson::PoissonStructure;

/// A Toda phase point `(a, b)` with `prod a_i = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TodaPoint {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    n: usize,
    a: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<Vec<String>>,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>, Error> {
    v.iter().map(|s| parse_rational(s)).collect()
}

impl TodaPoint {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self, Error> {
        let n = a.len();
        if n < 2 || b.len() != n {
            return Err(Error::Domain(format!(
                "a and b must both have length n >= 2 (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        let prod = a.iter().fold(int(1), |acc, x| acc * x);
        if !prod.is_one() {
            return Err(Error::invariant(
                "product-of-a",
                format!("prod a_i = {} (must be 1)", format_rational(&prod)),
            ));
        }
        Ok(TodaPoint { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// `a` followed by `b`, the coordinate order of [`toda_structure`].
    pub fn coords(&self) -> Vec<Rational> {
        self.a.iter().chain(&self.b).cloned().collect()
    }

    pub fn is_km(&self) -> bool {
        self.b.iter().all(Zero::is_zero)
    }

    /// The generator of the cyclic `Z/n` action:
    /// `(a_1, ..., a_n) -> (a_2, ..., a_n, a_1)` and likewise for `b`.
    pub fn shift(&self) -> Self {
        let rot = |v: &[Rational]| {
            let mut v = v.to_vec();
            v.rotate_left(1);
            v
        };
        TodaPoint {
            a: rot(&self.a),
            b: rot(&self.b),
        }
    }

    pub fn shifted(&self, k: usize) -> Self {
        (0..k % self.n()).fold(self.clone(), |p, _| p.shift())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PointJson {
            n: self.n(),
            a: self.a.iter().map(format_rational).collect(),
            b: Some(self.b.iter().map(format_rational).collect()),
        })
        .expect("plain data")
    }

    /// Parses `{"n": 5, "a": [...], "b": [...]}`; a missing `b` means a KM
    /// point.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        let j: PointJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let a = parse_all(&j.a)?;
        let b = match j.b {
            Some(b) => parse_all(&b)?,
            None => vec![int(0); a.len()],
        };
        if a.len() != j.n {
            return Err(Error::Domain(format!("n = {} but {} values of a", j.n, a.len())));
        }
        TodaPoint::new(a, b)
    }
}

/// A KM point: a Toda point with `b = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct KMPoint {
    a: Vec<Rational>,
}

impl KMPoint {
    pub fn new(a: Vec<Rational>) -> Result<Self, Error> {
        let n = a.len();
        TodaPoint::new(a.clone(), vec![int(0); n])?;
        Ok(KMPoint { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn to_toda(&self) -> TodaPoint {
        TodaPoint {
            a: self.a.clone(),
            b: vec![int(0); self.a.len()],
        }
    }

    pub fn shift(&self) -> Self {
        let mut a = self.a.clone();
        a.rotate_left(1);
        KMPoint { a }
    }

    pub fn from_toda(p: &TodaPoint) -> Result<Self, Error> {
        if !p.is_km() {
            return Err(Error::Domain("KM points have b = 0".into()));
        }
        Ok(KMPoint { a: p.a.clone() })
    }
}

/// An `n x n` matrix Laurent polynomial in `h`, stored as the map from
/// exponent to coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HLaurentMatrix<C: Ring> {
    n: usize,
    terms: BTreeMap<i32, Mat<C>>,
}

impl<C: Ring> HLaurentMatrix<C> {
    pub fn zero(n: usize) -> Self {
        HLaurentMatrix {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        m.terms.insert(0, Mat::identity(n));
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Coefficient of `h^e` (zero matrix when absent).
    pub fn coeff(&self, e: i32) -> Mat<C> {
        self.terms.get(&e).cloned().unwrap_or_else(|| Mat::zeros(self.n, self.n))
    }

    pub fn exponents(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    fn add_entry(&mut self, e: i32, i: usize, j: usize, c: C) {
        let n = self.n;
        let m = self.terms.entry(e).or_insert_with(|| Mat::zeros(n, n));
        let v = m.get(i, j).clone() + c;
        m.set(i, j, v);
    }

    fn cleaned(mut self) -> Self {
        self.terms.retain(|_, m| !m.is_zero());
        self
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let p = a.mul(b);
                let slot = out.terms.entry(ea + eb).or_insert_with(|| Mat::zeros(self.n, self.n));
                *slot = slot.add(&p);
            }
        }
        out.cleaned()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, b) in &rhs.terms {
            let slot = out.terms.entry(*e).or_insert_with(|| Mat::zeros(self.n, self.n));
            *slot = slot.sub(b);
        }
        out.cleaned()
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    /// `tr` per power of `h`.
    pub fn trace(&self) -> BTreeMap<i32, C> {
        self.terms
            .iter()
            .map(|(e, m)| (*e, m.trace()))
            .filter(|(_, t)| !t.is_zero())
            .collect()
    }

    /// `sum_{e>0} A_e h^e + (strictly upper part of A_0)`
    pub fn plus_part(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (e, m) in &self.terms {
            if *e > 0 {
                out.terms.insert(*e, m.clone());
            } else if *e == 0 {
                let su = Mat::from_fn(self.n, self.n, |i, j| {
                    if j > i {
                        m.get(i, j).clone()
                    } else {
                        C::zero()
                    }
                });
                out.terms.insert(0, su);
            }
        }
        out.cleaned()
    }
}

/// The Lax operator: `b` on the diagonal, `a_i` above, `1` below,
/// `h^{-1}` in the corner `(1, n)` and `h a_n` in the corner `(n, 1)`.
pub fn lax_matrix_generic<C: Ring>(a: &[C], b: &[C]) -> HLaurentMatrix<C> {
    let n = b.len();
    let mut l = HLaurentMatrix::zero(n);
    for i in 0..n {
        l.add_entry(0, i, i, b[i].clone());
        if i + 1 < n {
            l.add_entry(0, i, i + 1, a[i].clone());
            l.add_entry(0, i + 1, i, C::one());
        }
    }
    l.add_entry(-1, 0, n - 1, C::one());
    l.add_entry(1, n - 1, 0, a[n - 1].clone());
    l.cleaned()
}

pub fn lax_matrix(p: &TodaPoint) -> HLaurentMatrix<Rational> {
    lax_matrix_generic(&p.a, &p.b)
}

/// `I_i = tr(L^{i+1})/(i+1)` and `I_{n-1} = tr(L^n)/n - h - 1/h`, with every
/// power of `h` other than `h^0` checked to cancel.
pub fn toda_integrals(p: &TodaPoint) -> Result<Vec<Rational>, Error> {
    let n = p.n();
    let l = lax_matrix(p);
    let mut out = Vec::with_capacity(n);
    let mut power = HLaurentMatrix::identity(n);
    for i in 0..n {
        power = power.mul(&l);
        let k = int((i + 1) as i64);
        let mut tr = power.trace();
        if i == n - 1 {
            for e in [1, -1] {
                let c = tr.remove(&e).unwrap_or_else(Rational::zero) / &k - int(1);
                if !c.is_zero() {
                    tr.insert(e, c * &k);
                }
            }
        }
        if let Some(e) = tr.keys().find(|&&e| e != 0) {
            return Err(Error::invariant(
                "h-independence",
                format!("I_{i} has a nonzero h^{e} coefficient"),
            ));
        }
        out.push(tr.get(&0).cloned().unwrap_or_else(Rational::zero) / k);
    }
    Ok(out)
}

/// Symbolic `I_0, ..., I_{n-1}` in the variables `a_1..a_n, b_1..b_n`
/// (indices `0..2n`), taken as the `h^0` parts of the traces. On the
/// hypersurface `prod a_i = 1` these agree with [`toda_integrals`].
pub fn symbolic_integrals(n: usize) -> Vec<MPoly> {
    let a: Vec<MPoly> = (0..n).map(MPoly::var).collect();
    let b: Vec<MPoly> = (n..2 * n).map(MPoly::var).collect();
    let l = lax_matrix_generic(&a, &b);
    let mut power = HLaurentMatrix::identity(n);
    (0..n)
        .map(|i| {
            power = power.mul(&l);
            let tr = power.trace();
            tr.get(&0)
                .cloned()
                .unwrap_or_else(MPoly::zero)
                .scale(&rat(1, (i + 1) as i64))
        })
        .collect()
}

/// `K(x)` with `det(x Id - L(h)) = -h - 1/h + K(x)/2`, computed as
/// `2 (Delta - a_n Delta_{1,n})` from tridiagonal minors and checked
/// against the full determinant in `(x, h)`.
pub fn char_poly(p: &TodaPoint) -> Result<QPoly, Error> {
    let n = p.n();
    let spec = TridiagSpec::toda(&p.a, &p.b);
    let delta = tridiag_minor_det(&spec, &[]);
    let delta_1n = tridiag_minor_det(&spec, &[0, n - 1]);
    let half_k = &delta - &delta_1n.scale(&p.a[n - 1]);
    // det(x Id - L(h)) with x = variable 0 and h = variable 1
    let x = MPoly::var(0);
    let l = lax_matrix(p);
    let mut m = Mat::from_fn(n, n, |i, j| {
        if i == j {
            x.clone()
        } else {
            MPoly::zero()
        }
    });
    for e in l.exponents() {
        let c = l.coeff(e);
        for i in 0..n {
            for j in 0..n {
                let entry = c.get(i, j);
                if !entry.is_zero() {
                    let v = m.get(i, j).clone() - MPoly::monomial(entry.clone(), 1, e);
                    m.set(i, j, v);
                }
            }
        }
    }
    let det = m.det();
    let mut expected = MPoly::monomial(int(-1), 1, 1) + MPoly::monomial(int(-1), 1, -1);
    for (k, c) in half_k.coeffs().iter().enumerate() {
        expected = expected + MPoly::monomial(c.clone(), 0, k as i32);
    }
    if det != expected {
        return Err(Error::invariant(
            "characteristic-polynomial",
            "det(x Id - L(h)) is not -h - 1/h + K(x)/2",
        ));
    }
    Ok(half_k.scale(&int(2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketKind {
    Linear,
    Quadratic,
    /// The reduced bracket on `K_n` (coordinates `a` only).
    Km,
}

fn kronecker(i: usize, j: usize) -> i64 {
    (i == j) as i64
}

/// `{., .}^1`, `{., .}^x` on `T_n` (coordinates `a_1..a_n, b_1..b_n`) or the
/// KM bracket on `K_n` (coordinates `a_1..a_n`).
pub fn toda_structure(kind: BracketKind, n: usize) -> PoissonStructure {
    let a = |i: usize| MPoly::var(i);
    let b = |i: usize| MPoly::var(n + i);
    let next = |i: usize| (i + 1) % n;
    // c_{ij} = delta_{i,j+1} - delta_{i+1,j}
    let cyc = |i: usize, j: usize| int(kronecker(i, next(j)) - kronecker(next(i), j));
    // d_{ij} = delta_{ij} - delta_{i+1,j}
    let diag = |i: usize, j: usize| int(kronecker(i, j) - kronecker(next(i), j));
    match kind {
        BracketKind::Km => {
            let names = (1..=n).map(|i| format!("a{i}")).collect();
            PoissonStructure::from_upper(names, |i, j| (&a(i) * &a(j)).scale(&cyc(i, j)))
        }
        BracketKind::Linear | BracketKind::Quadratic => {
            let names = (1..=n).map(|i| format!("a{i}")).chain((1..=n).map(|i| format!("b{i}"))).collect();
            PoissonStructure::from_upper(names, |p, q| match (p < n, q < n, kind) {
                (true, true, BracketKind::Linear) => MPoly::zero(),
                (true, false, BracketKind::Linear) => a(p).scale(&diag(p, q - n)),
                (false, false, BracketKind::Linear) => MPoly::zero(),
                (true, true, _) => (&a(p) * &a(q)).scale(&cyc(p, q)),
                (true, false, _) => (&a(p) * &b(q - n)).scale(&diag(p, q - n)),
                (false, false, _) => quadratic_bb(n, p - n, q - n),
                (false, true, _) => unreachable!("upper triangle only"),
            })
        }
    }
}

/// `{b_i, b_j}^x`: `{b_{i+1}, b_i} = a_i`, antisymmetrized.
fn quadratic_bb(n: usize, i: usize, j: usize) -> MPoly {
    let next = |k: usize| (k + 1) % n;
    let mut out = MPoly::zero();
    if i == next(j) {
        out = out + MPoly::var(j);
    }
    if next(i) == j {
        out = out - MPoly::var(i);
    }
    out
}

/// The pencil `phi_1 {., .}^x + phi_0 {., .}^1` for `phi = phi_1 x + phi_0`.
pub fn toda_pencil(n: usize, phi: &QPoly) -> Result<PoissonStructure, Error> {
    if phi.degree().is_some_and(|d| d > 1) {
        return Err(Error::Domain("the Toda pencil needs deg phi <= 1".into()));
    }
    toda_structure(BracketKind::Quadratic, n)
        .scale(&phi.coeff(1))
        .add(&toda_structure(BracketKind::Linear, n).scale(&phi.coeff(0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    AA,
    AB,
    BB,
}

/// A single bracket value `{a_i, a_j}`, `{a_i, b_j}` or `{b_i, b_j}`
/// (1-based cyclic indices) at a point.
pub fn toda_bracket(
    kind: BracketKind,
    i: usize,
    j: usize,
    which: Pair,
    p: &TodaPoint,
) -> Result<Rational, Error> {
    let n = p.n();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Domain(format!("indices must lie in 1..={n}")));
    }
    let (i, j) = (i - 1, j - 1);
    if kind == BracketKind::Km {
        if which != Pair::AA {
            return Err(Error::Domain("the KM bracket only involves a".into()));
        }
        return Ok(toda_structure(kind, n).entry(i, j).eval(p.a()));
    }
    let (r, c) = match which {
        Pair::AA => (i, j),
        Pair::AB => (i, n + j),
        Pair::BB => (n + i, n + j),
    };
    Ok(toda_structure(kind, n).entry(r, c).eval(&p.coords()))
}

/// Tangent `(da/dt, db/dt)` read off `[L, (L^i)_+]`, together with a flag
/// telling whether the commutator has the shape of a tangent vector.
pub fn toda_flow_generic<C: Ring>(a: &[C], b: &[C], i: usize) -> (Vec<C>, Vec<C>, bool) {
    let n = b.len();
    let l = lax_matrix_generic(a, b);
    let rhs = l.commutator(&l.pow(i).plus_part());
    let m0 = rhs.coeff(0);
    let m1 = rhs.coeff(1);
    let mut da: Vec<C> = (0..n - 1).map(|k| m0.get(k, k + 1).clone()).collect();
    da.push(m1.get(n - 1, 0).clone());
    let db: Vec<C> = (0..n).map(|k| m0.get(k, k).clone()).collect();
    // everything else must vanish
    let mut shaped = true;
    for e in rhs.exponents() {
        let m = rhs.coeff(e);
        for r in 0..n {
            for c in 0..n {
                let allowed = (e == 0 && (r == c || (c == r + 1)))
                    || (e == 1 && r == n - 1 && c == 0);
                if !allowed && !m.get(r, c).is_zero() {
                    shaped = false;
                }
            }
        }
    }
    (da, db, shaped)
}

/// `X_i L = [L, (L^i)_+]` at a rational point.
///
/// This is `{., I_i}^1` and also `{., I_{i-1}}^x`. The fields with `i` even
/// (quadratic Hamiltonians `I_1, I_3, ...`) are tangent to `K_n`; `i = 2`
/// restricts to the KM equation.
pub fn toda_flow(p: &TodaPoint, i: usize) -> Result<(Vec<Rational>, Vec<Rational>), Error> {
    if i == 0 || i >= p.n() {
        return Err(Error::Domain(format!("hierarchy index must lie in 1..{}", p.n())));
    }
    let (da, db, shaped) = toda_flow_generic(&p.a, &p.b, i);
    if !shaped {
        return Err(Error::invariant("lax-shape", "[L, (L^i)_+] is not tangent to T_n"));
    }
    Ok((da, db))
}

/// `da_i/dt = a_i (a_{i-1} - a_{i+1})`
pub fn km_field<C: Ring>(a: &[C]) -> Vec<C> {
    let n = a.len();
    (0..n)
        .map(|i| a[i].clone() * (a[(i + n - 1) % n].clone() - a[(i + 1) % n].clone()))
        .collect()
}

/// `(a_1 a_3 ... a_{n-1}, a_2 a_4 ... a_n)` for even `n`.
pub fn km_even_split(p: &KMPoint) -> Result<(Rational, Rational), Error> {
    let n = p.n();
    if !n.is_multiple_of(2) {
        return Err(Error::Domain("the alternating products need n even".into()));
    }
    let odd = p.a.iter().step_by(2).fold(int(1), |acc, x| acc * x);
    let even = p.a.iter().skip(1).step_by(2).fold(int(1), |acc, x| acc * x);
    Ok((odd, even))
}

/// The alternating products as polynomials in `a_1..a_n`.
pub fn symbolic_even_split(n: usize) -> (MPoly, MPoly) {
    let prod = |start: usize| {
        (start..n)
            .step_by(2)
            .fold(MPoly::constant(int(1)), |acc, i| &acc * &MPoly::var(i))
    };
    (prod(0), prod(1))
}

/// Derivative of a polynomial in `a_1..a_n` along the KM field.
pub fn km_derivative(f: &MPoly, n: usize) -> MPoly {
    let a: Vec<MPoly> = (0..n).map(MPoly::var).collect();
    let field = km_field(&a);
    (0..n).fold(MPoly::zero(), |acc, i| acc + &f.derivative(i) * &field[i])
}

/// A random Toda point: `a_1..a_{n-1}` nonzero random, `a_n` fixed by the
/// product constraint, `b` random.
pub fn random_toda<R: rand::Rng>(rng: &mut R, n: usize, bound: i64) -> TodaPoint {
    let a = random_a(rng, n, bound);
    let b = crate::random::rationals(rng, n, bound);
    TodaPoint::new(a, b).expect("constraint holds by construction")
}

pub fn random_km<R: rand::Rng>(rng: &mut R, n: usize, bound: i64) -> KMPoint {
    KMPoint::new(random_a(rng, n, bound)).expect("constraint holds by construction")
}

fn random_a<R: rand::Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    let mut a: Vec<Rational> = (0..n - 1)
        .map(|_| crate::random::nonzero_rational(rng, bound))
        .collect();
    let prod = a.iter().fold(int(1), |acc, x| acc * x);
    a.push(prod.recip());
    a
}

/// `K` as a polynomial in `x` over the symbolic ring, used to test
/// conservation along series solutions.
pub fn half_k_generic<C: Ring>(a: &[C], b: &[C]) -> Poly<C> {
    let n = b.len();
    let spec = TridiagSpec::new(
        b.iter().map(|bi| Poly::linear_root(bi.clone())).collect(),
        a.iter().take(n - 1).map(|ai| -ai.clone()).collect(),
        vec![-C::one(); n - 1],
    );
    let delta = tridiag_minor_det(&spec, &[]);
    let delta_1n = tridiag_minor_det(&spec, &[0, n - 1]);
    &delta - &delta_1n.scale(&a[n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn lax_shape_n3() {
        let p = TodaPoint::new(q(&[1, 1, 1]), q(&[0, 0, 0])).unwrap();
        let l = lax_matrix(&p);
        assert_eq!(l.exponents().collect::<Vec<_>>(), vec![-1, 0, 1]);
        let l0 = l.coeff(0);
        assert_eq!(l0.get(0, 1), &int(1));
        assert_eq!(l0.get(1, 0), &int(1));
        assert_eq!(l.coeff(-1).get(0, 2), &int(1));
        assert_eq!(l.coeff(1).get(2, 0), &int(1));
        assert!(TodaPoint::new(q(&[1, 2, 1]), q(&[0, 0, 0])).is_err());
    }

    #[test]
    fn integrals_are_h_free() {
        let mut rng = seeded(1);
        for n in 2..=8 {
            let p = random_toda(&mut rng, n, 20);
            let ints = toda_integrals(&p).unwrap();
            let sum_b = p.b().iter().fold(int(0), |acc, x| acc + x);
            assert_eq!(ints[0], sum_b);
            let sym = symbolic_integrals(n);
            for (i, s) in sym.iter().enumerate() {
                assert_eq!(s.eval(&p.coords()), ints[i]);
            }
        }
    }

    #[test]
    fn km_integrals_vanish_for_even_index() {
        let mut rng = seeded(2);
        let p = random_km(&mut rng, 6, 20).to_toda();
        let ints = toda_integrals(&p).unwrap();
        for j in (0..6).step_by(2) {
            assert!(ints[j].is_zero());
        }
    }

    #[test]
    fn char_poly_examples() {
        let p = TodaPoint::new(q(&[1, 1, 1]), q(&[0, 0, 0])).unwrap();
        assert_eq!(char_poly(&p).unwrap(), QPoly::from_ints(&[0, -6, 0, 2]));
        let mut rng = seeded(3);
        for n in 2..=6 {
            let p = random_toda(&mut rng, n, 30);
            let k = char_poly(&p).unwrap();
            let sum_b = p.b().iter().fold(int(0), |acc, x| acc + x);
            assert_eq!(k.coeff(n - 1), -sum_b * int(2));
        }
    }

    #[test]
    fn five_body_km_spectral_curve() {
        // K(x)/2 = x^5 - K x^3 + L x
        let p = KMPoint::new(vec![int(2), rat(1, 2), int(1), int(1), int(1)]).unwrap();
        let k = char_poly(&p.to_toda()).unwrap().scale(&rat(1, 2));
        assert_eq!(k, QPoly::new(vec![int(0), int(6), int(0), rat(-11, 2), int(0), int(1)]));
    }

    #[test]
    fn linear_bracket_values() {
        let p = TodaPoint::new(vec![int(2), rat(1, 2), int(1)], q(&[1, 2, 3])).unwrap();
        assert_eq!(toda_bracket(BracketKind::Linear, 1, 1, Pair::AB, &p).unwrap(), int(2));
        assert_eq!(toda_bracket(BracketKind::Linear, 1, 2, Pair::AB, &p).unwrap(), int(-2));
        assert_eq!(toda_bracket(BracketKind::Linear, 1, 2, Pair::AA, &p).unwrap(), int(0));
        assert_eq!(toda_bracket(BracketKind::Km, 1, 2, Pair::AA, &p).unwrap(), int(-1));
        assert_eq!(toda_bracket(BracketKind::Km, 2, 1, Pair::AA, &p).unwrap(), int(1));
    }

    #[test]
    fn jacobi_and_pencil() {
        for n in 2..=4 {
            for kind in [BracketKind::Linear, BracketKind::Quadratic, BracketKind::Km] {
                let s = toda_structure(kind, n);
                assert!(s.is_antisymmetric());
                assert!(s.satisfies_jacobi(), "{kind:?} n = {n}");
            }
            let pencil = toda_pencil(n, &QPoly::new(vec![int(3), rat(-1, 2)])).unwrap();
            assert!(pencil.satisfies_jacobi());
        }
    }

    #[test]
    fn casimirs_and_involution() {
        for n in 2..=5 {
            let ints = symbolic_integrals(n);
            let lin = toda_structure(BracketKind::Linear, n);
            let quad = toda_structure(BracketKind::Quadratic, n);
            for c in 0..2 * n {
                assert!(lin.bracket(&ints[0], &MPoly::var(c)).is_zero());
            }
            for i in 0..n {
                for j in 0..n {
                    assert!(lin.bracket(&ints[i], &ints[j]).is_zero());
                    assert!(quad.bracket(&ints[i], &ints[j]).is_zero(), "n = {n}");
                }
            }
        }
        // det L(h) is h-free and a Casimir of the quadratic bracket.
        for n in 2..=4 {
            let a: Vec<MPoly> = (0..n).map(MPoly::var).collect();
            let b: Vec<MPoly> = (n..2 * n).map(MPoly::var).collect();
            let l = lax_matrix_generic(&a, &b);
            let m = Mat::from_fn(n, n, |i, j| {
                l.exponents()
                    .fold(MPoly::zero(), |acc, e| acc + &l.coeff(e).get(i, j).clone() * &MPoly::monomial(int(1), 2 * n, e))
            });
            let det = m.det();
            let h_free = det.coeff_in(2 * n, 0);
            let quad = toda_structure(BracketKind::Quadratic, n);
            for c in 0..2 * n {
                assert!(quad.bracket(&h_free, &MPoly::var(c)).is_zero(), "n = {n}");
            }
        }
    }

    #[test]
    fn flows_are_linear_hamiltonian_fields() {
        let mut rng = seeded(4);
        for n in 2..=4 {
            let p = random_toda(&mut rng, n, 10);
            let lin = toda_structure(BracketKind::Linear, n);
            let ints = symbolic_integrals(n);
            for i in 1..n {
                let (da, db) = toda_flow(&p, i).unwrap();
                let field: Vec<Rational> =
                    lin.hamiltonian_field(&ints[i]).iter().map(|c| c.eval(&p.coords())).collect();
                let lax: Vec<Rational> = da.iter().chain(&db).cloned().collect();
                assert_eq!(lax, field, "n = {n}, i = {i}");
                let log = da.iter().zip(p.a()).fold(int(0), |acc, (d, a)| acc + d / a);
                assert!(log.is_zero());
            }
        }
    }

    #[test]
    fn quadratic_fields_shift_the_hierarchy() {
        let mut rng = seeded(8);
        for n in 2..=5 {
            let p = random_toda(&mut rng, n, 10);
            let quad = toda_structure(BracketKind::Quadratic, n);
            let ints = symbolic_integrals(n);
            for i in 1..n {
                let f: Vec<Rational> =
                    quad.hamiltonian_field(&ints[i - 1]).iter().map(|c| c.eval(&p.coords())).collect();
                let (da, db) = toda_flow(&p, i).unwrap();
                assert_eq!(f, da.into_iter().chain(db).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn km_restriction() {
        let mut rng = seeded(5);
        let p = random_km(&mut rng, 5, 10);
        let (da, db) = toda_flow(&p.to_toda(), 2).unwrap();
        assert_eq!(da, km_field(p.a()));
        assert!(db.iter().all(Zero::is_zero));
        let (_, db4) = toda_flow(&p.to_toda(), 4).unwrap();
        assert!(db4.iter().all(Zero::is_zero));
        for i in [1, 3] {
            let (da, db) = toda_flow(&p.to_toda(), i).unwrap();
            assert!(da.iter().all(Zero::is_zero));
            assert!(db.iter().any(|x| !x.is_zero()));
        }
        let ones = KMPoint::new(q(&[1, 1, 1, 1, 1])).unwrap();
        assert!(km_field(ones.a()).iter().all(Zero::is_zero));
    }

    #[test]
    fn flow_conserves_k_and_commutes_with_shift() {
        let mut rng = seeded(6);
        let p = random_toda(&mut rng, 4, 10);
        let (da, db) = toda_flow(&p, 1).unwrap();
        // dK/dt through the symbolic half_k
        let a: Vec<MPoly> = (0..4).map(MPoly::var).collect();
        let b: Vec<MPoly> = (4..8).map(MPoly::var).collect();
        let k = half_k_generic(&a, &b);
        let vel: Vec<Rational> = da.iter().chain(&db).cloned().collect();
        for c in k.coeffs() {
            let d = (0..8).fold(int(0), |acc, v| acc + c.derivative(v).eval(&p.coords()) * &vel[v]);
            assert!(d.is_zero());
        }
        let (sa, sb) = toda_flow(&p.shift(), 1).unwrap();
        let mut ra = da.clone();
        ra.rotate_left(1);
        let mut rb = db.clone();
        rb.rotate_left(1);
        assert_eq!((sa, sb), (ra, rb));
        assert_eq!(toda_integrals(&p.shift()).unwrap(), toda_integrals(&p).unwrap());
    }

    #[test]
    fn even_split() {
        let p = KMPoint::new(vec![int(2), rat(1, 2), int(1), int(1)]).unwrap();
        assert_eq!(km_even_split(&p).unwrap(), (int(2), rat(1, 2)));
        assert!(km_even_split(&KMPoint::new(q(&[1, 1, 1])).unwrap()).is_err());
        for n in [4, 6] {
            let (odd, even) = symbolic_even_split(n);
            assert!(km_derivative(&odd, n).is_zero());
            assert!(km_derivative(&even, n).is_zero());
        }
    }

    #[test]
    fn json_round_trip() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"n":5,"a":["2","1/2","1","1","1"],"b":["0","0","0","0","0"]}"#).unwrap();
        let p = TodaPoint::from_json(&v).unwrap();
        assert_eq!(TodaPoint::from_json(&p.to_json()).unwrap(), p);
        let bad: serde_json::Value = serde_json::from_str(r#"{"n":2,"a":["2","1"]}"#).unwrap();
        assert!(matches!(TodaPoint::from_json(&bad), Err(Error::Invariant { .. })));
    }
}
