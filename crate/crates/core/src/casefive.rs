//! The five-body KM lattice in detail: spectral data, the embedding of the
//! Jacobian in `P^8`, and the five Painleve curves with their `5_3`
//! incidence configuration.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{format_rational, int, rat, LaurentSeries, MPoly, QPoly, Rational};
use crate::error::Error;
use crate::painleve::{eval_on_series, laurent_balance, Balance, LaurentSolution};
use crate::toda_km::{char_poly, KMPoint};

/// A point of `P^8`. Equality is proportionality: all 2x2 minors vanish.
#[derive(Clone, Debug)]
pub struct ProjectivePoint9 {
    coords: Vec<Rational>,
}

impl ProjectivePoint9 {
    pub fn new(coords: Vec<Rational>) -> Result<Self, Error> {
        if coords.len() != 9 {
            return Err(Error::Domain(format!("need 9 coordinates, got {}", coords.len())));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::Domain("all homogeneous coordinates vanish".into()));
        }
        Ok(ProjectivePoint9 { coords })
    }

    pub fn from_ints(c: [i64; 9]) -> Self {
        ProjectivePoint9::new(c.iter().map(|&x| int(x)).collect()).expect("nonzero")
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Scaled so that the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Vec<Rational> {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero").clone();
        self.coords.iter().map(|c| c / &lead).collect()
    }
}

impl PartialEq for ProjectivePoint9 {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.coords, &other.coords);
        (0..9).all(|i| (i + 1..9).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
    }
}

impl fmt::Display for ProjectivePoint9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normalized().iter().map(format_rational).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for ProjectivePoint9 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.normalized().iter().map(format_rational).collect();
        v.serialize(s)
    }
}

fn require_five(n: usize) -> Result<(), Error> {
    if n != 5 {
        return Err(Error::Domain(format!("this example is for n = 5, got n = {n}")));
    }
    Ok(())
}

/// `K = sum a_i`, `L = a_1 a_3 + a_2 a_4 + a_3 a_5 + a_4 a_1 + a_5 a_2`.
pub fn spectral_data_5(p: &KMPoint) -> Result<(Rational, Rational), Error> {
    require_five(p.n())?;
    let a = p.a();
    let k = a.iter().cloned().sum();
    let l = (0..5).map(|i| &a[i] * &a[(i + 2) % 5]).sum();
    Ok((k, l))
}

/// `(K, L)` read off the characteristic polynomial instead.
pub fn spectral_data_from_char_poly(p: &KMPoint) -> Result<(Rational, Rational), Error> {
    require_five(p.n())?;
    let half = char_poly(&p.to_toda())?.scale(&rat(1, 2));
    Ok((-half.coeff(3), half.coeff(1)))
}

/// `(x^5 - k x^3 + l x)^2 - 4`, the even polynomial of the spectral curve.
pub fn spectral_polynomial(k: &Rational, l: &Rational) -> QPoly {
    let p = QPoly::new(vec![int(0), l.clone(), int(0), -k.clone(), int(0), int(1)]);
    &(&p * &p) - &QPoly::constant(int(4))
}

/// `(Gamma_sigma, Gamma_tau)` as right-hand sides `v^2 = ...` in `u = x^2`,
/// for `y^2 = f(x) = g(x^2)`. Odd `n` gives `g(u)` and `u g(u)`; even `n`
/// interchanges them.
pub fn quotient_curves(f: &QPoly, n_odd: bool) -> Result<(QPoly, QPoly), Error> {
    if f.is_zero() || !f.is_even() {
        return Err(Error::Domain("f must be a nonzero even polynomial".into()));
    }
    let g = QPoly::new(f.coeffs().iter().step_by(2).cloned().collect());
    let ug = g.shift(1);
    Ok(if n_odd { (g, ug) } else { (ug, g) })
}

/// Genus of `v^2 = f(u)` for squarefree `f` of degree `>= 3`.
pub fn hyperelliptic_genus(f: &QPoly) -> usize {
    f.degree().map_or(0, |d| d.saturating_sub(1) / 2)
}

/// The nine functions `z_0..z_8` as polynomials in `a_1..a_5`.
pub fn z_functions() -> Vec<MPoly> {
    let a = |i: usize| MPoly::var(i - 1);
    let a12 = &a(1) * &a(2);
    let a124 = &a12 * &a(4);
    vec![
        MPoly::constant(int(1)),
        a12.clone(),
        a124.clone(),
        &a12 * &(&a(1) + &a(5)),
        &a124 * &(&(&a(3) + &a(4)) + &a(5)),
        &a124 * &(&a(1) - &a(2)),
        &a124 * &(&(&(&a(3) + &a(4)) * &a(1)) - &(&(&a(4) + &a(5)) * &a(2))),
        &(&(&a12 * &a12) * &a(4)) * &a(5),
        &(&(&a12 * &a(2)) * &a(4)) * &(&(&a(4) + &a(5)).pow(2) + &(&a(3) * &a(4))),
    ]
}

pub fn z_embedding(p: &KMPoint) -> Result<ProjectivePoint9, Error> {
    require_five(p.n())?;
    ProjectivePoint9::new(z_functions().iter().map(|z| z.eval(p.a())).collect())
}

/// The five points completing the Painleve curves, `p_1..p_5`.
pub fn divisor_points_5(k: &Rational) -> Vec<ProjectivePoint9> {
    let mut p3 = ProjectivePoint9::from_ints([1, 0, 0, 0, 0, 0, 1, 0, 0]);
    p3.coords[8] = -k.clone();
    vec![
        ProjectivePoint9::from_ints([0, 0, 0, 1, 0, 0, 0, 0, 0]),
        ProjectivePoint9::from_ints([0, 0, 0, 0, 0, 0, 0, 0, 1]),
        p3,
        ProjectivePoint9::from_ints([1, 0, 0, 0, 0, 0, -1, 0, 0]),
        ProjectivePoint9::from_ints([0, 0, 0, 0, 0, 0, 0, 1, -1]),
    ]
}

/// `(k - delta) delta + beta + 1/(beta delta) - l`
pub fn constraint_defect(k: &Rational, l: &Rational, beta: &Rational, delta: &Rational) -> Rational {
    (k - delta) * delta + beta + (beta * delta).recip() - l
}

/// Scalars the curve parametrizations can be evaluated over.
pub trait Coord:
    Clone
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn int(x: i64) -> Self;
}

impl Coord for Rational {
    fn int(x: i64) -> Self {
        int(x)
    }
}

/// Coordinates of `Gamma_i` (1-based) at `(beta, delta)`, generic in the
/// coefficient type so that the charts can substitute series.
pub fn gamma_coords<C: Coord>(i: usize, k: &C, beta: &C, delta: &C) -> Vec<C> {
    let (b, d) = (beta.clone(), delta.clone());
    let c = |x: i64| C::int(x);
    let bd = b.clone() * d.clone();
    let bd2 = bd.clone() * d.clone();
    let kd = k.clone() - d.clone();
    match i {
        1 => vec![
            c(0),
            c(0),
            c(0),
            c(1),
            c(0),
            c(2) * d.clone(),
            c(2) * d.clone() * d.clone(),
            bd.clone(),
            -(d.clone() * d.clone() * d.clone()),
        ],
        2 => vec![
            bd2.clone(),
            -(b.clone() * bd2.clone()),
            c(0),
            -(b.clone() * bd2.clone() * d.clone()),
            bd.clone(),
            bd.clone(),
            bd2.clone(),
            c(0),
            c(1) - bd2.clone() * d.clone(),
        ],
        3 => vec![
            c(1),
            c(0),
            bd.clone(),
            c(0),
            bd.clone() * kd.clone(),
            bd2.clone(),
            -(bd.clone() * (b.clone() + d.clone() * d.clone() - k.clone() * d.clone())),
            c(0),
            b.clone() * bd.clone() * kd.clone(),
        ],
        4 => vec![
            b.clone() * bd.clone(),
            c(0),
            bd.clone(),
            -bd.clone(),
            bd.clone() * kd.clone(),
            -bd2.clone(),
            c(1) - bd2.clone() * kd.clone(),
            -d.clone(),
            -(bd2.clone() * (b.clone() - kd.clone() * kd.clone())),
        ],
        5 => vec![
            bd2.clone(),
            -d.clone(),
            c(0),
            -(d.clone() * kd.clone()),
            bd.clone(),
            -bd.clone(),
            -bd2.clone(),
            c(-1),
            c(1),
        ],
        _ => panic!("curves are numbered 1..=5"),
    }
}

/// `Gamma_i(beta, delta)`; the pair must satisfy the constraint for `(k, l)`.
pub fn gamma_point(
    i: usize,
    k: &Rational,
    l: &Rational,
    beta: &Rational,
    delta: &Rational,
) -> Result<ProjectivePoint9, Error> {
    if !(1..=5).contains(&i) {
        return Err(Error::Domain("curves are numbered 1..=5".into()));
    }
    if beta.is_zero() || delta.is_zero() || !constraint_defect(k, l, beta, delta).is_zero() {
        return Err(Error::Domain("(beta, delta) does not lie on the curve for (k, l)".into()));
    }
    ProjectivePoint9::new(gamma_coords(i, k, beta, delta))
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    use num_bigint::Sign;
    if q.numer().sign() == Sign::Minus {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// A rational point `(beta, delta)` of the fiber `(k, l)`, found by trying
/// `delta = p/q` with `|p|, q <= height` and solving the quadratic
/// `delta beta^2 + ((k - delta) delta^2 - l delta) beta + 1 = 0`.
pub fn find_fiber_point(k: &Rational, l: &Rational, height: i64) -> Option<(Rational, Rational)> {
    for q in 1..=height {
        for p in (1..=height).flat_map(|p| [p, -p]) {
            let delta = rat(p, q);
            if delta.denom() != &q.into() {
                continue;
            }
            let b = (k - &delta) * &delta * &delta - l * &delta;
            let disc = &b * &b - int(4) * &delta;
            let Some(root) = rational_sqrt(&disc) else { continue };
            for beta in [(-&b + &root) / (int(2) * &delta), (-&b - &root) / (int(2) * &delta)] {
                if !beta.is_zero() && constraint_defect(k, l, &beta, &delta).is_zero() {
                    return Some((beta, delta));
                }
            }
        }
    }
    None
}

/// The remaining parameters of the principal balance on the fiber `(k, l)`
/// through `(beta, delta)`: `alpha = (k - delta)/2`, `gamma = -1/(beta delta)`.
pub fn principal_parameters(k: &Rational, beta: &Rational, delta: &Rational) -> (Rational, Rational) {
    ((k - delta) * rat(1, 2), -(beta * delta).recip())
}

/// The principal balance with poles at `a_{s+1}, a_{s+2}` (indices mod 5),
/// built by rotating the one with poles at `a_1, a_2`.
pub fn principal_balance_5(
    shift: usize,
    k: &Rational,
    beta: &Rational,
    delta: &Rational,
    order: usize,
) -> Result<LaurentSolution, Error> {
    let (alpha, gamma) = principal_parameters(k, beta, delta);
    let base = Balance::new(5, &[1, 2])?;
    let free: BTreeMap<String, Rational> = [
        ("a2_1", alpha),
        ("a4_1", delta.clone()),
        ("a3_2", gamma),
        ("a5_2", beta.clone()),
    ]
    .into_iter()
    .map(|(n, v)| (n.to_string(), v))
    .collect();
    let sol = laurent_balance(&base, &free, order)?;
    let s = shift % 5;
    let coeffs = sol
        .coeffs
        .iter()
        .map(|c| (0..5).map(|i| c[(i + 5 - s) % 5].clone()).collect())
        .collect();
    let set: Vec<usize> = [1, 2].iter().map(|&i| (i + s - 1) % 5 + 1).collect();
    Ok(LaurentSolution {
        balance: Balance::new(5, &set)?,
        coeffs,
        free: sol.free,
    })
}

/// Leading homogeneous part of a vector of series: the coefficients at the
/// smallest valuation.
pub fn leading_point(series: &[LaurentSeries]) -> Result<ProjectivePoint9, Error> {
    let v = series
        .iter()
        .filter_map(LaurentSeries::valuation)
        .min()
        .ok_or_else(|| Error::Domain("every coordinate vanishes to the truncation order".into()))?;
    let coords = series
        .iter()
        .map(|s| {
            s.coeff(v)
                .ok_or_else(|| Error::Domain("leading order lies past the truncation order".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProjectivePoint9::new(coords)
}

/// The `t -> 0` limit of `(z_0 : ... : z_8)` along a Laurent solution.
pub fn balance_to_divisor(sol: &LaurentSolution) -> Result<ProjectivePoint9, Error> {
    require_five(sol.balance.n())?;
    let series = sol.series();
    let z: Vec<LaurentSeries> = z_functions().iter().map(|f| eval_on_series(f, &series)).collect();
    leading_point(&z)
}

/// Local parameters `u` at the three points completing the curve
/// `(k - delta) delta + beta + 1/(beta delta) = l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `delta = 1/u`, `beta = u^-2 (1 + O(u))`
    A,
    /// `delta = 1/u`, `beta = u^3 (1 + O(u))`
    B,
    /// `beta = 1/u`, `delta = -u^2 (1 + O(u))`
    C,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::A, Chart::B, Chart::C];
}

/// Relative precision of the chart expansions.
pub const CHART_ORDER: i32 = 6;

fn series_const(c: Rational, order: i32) -> LaurentSeries {
    LaurentSeries::constant(c, order)
}

/// `(beta(u), delta(u))` in the given chart, solved from the constraint by
/// fixed-point iteration to relative order [`CHART_ORDER`].
pub fn chart_series(chart: Chart, k: &Rational, l: &Rational) -> Result<(LaurentSeries, LaurentSeries), Error> {
    let n = CHART_ORDER;
    let u_inv = LaurentSeries::monomial(int(1), -1, n);
    let kk = series_const(k.clone(), n + 4);
    let ll = series_const(l.clone(), n + 4);
    match chart {
        Chart::A => {
            // beta = l - (k - delta) delta - 1/(beta delta)
            let delta = u_inv.clone();
            let mut beta = LaurentSeries::monomial(int(1), -2, n - 2);
            for _ in 0..(n + 4) {
                let rhs = ll
                    .sub(&kk.sub(&delta).mul(&delta))
                    .sub(&beta.mul(&delta).inverse()?);
                beta = rhs.truncate(n - 2);
            }
            Ok((beta, delta))
        }
        Chart::B => {
            // beta = 1 / (delta (l - (k - delta) delta - beta))
            let delta = u_inv.clone();
            let mut beta = LaurentSeries::monomial(int(1), 3, n + 3);
            for _ in 0..(n + 4) {
                let den = delta.mul(&ll.sub(&kk.sub(&delta).mul(&delta)).sub(&beta));
                beta = den.inverse()?.truncate(n + 3);
            }
            Ok((beta, delta))
        }
        Chart::C => {
            // delta = 1 / (beta (l - beta - (k - delta) delta))
            let beta = u_inv.clone();
            let mut delta = LaurentSeries::monomial(int(-1), 2, n + 2);
            for _ in 0..(n + 4) {
                let den = beta.mul(&ll.sub(&beta).sub(&kk.sub(&delta).mul(&delta)));
                delta = den.inverse()?.truncate(n + 2);
            }
            Ok((beta, delta))
        }
    }
}

/// Newtype so that series can be fed to [`gamma_coords`].
#[derive(Clone, Debug)]
struct S(LaurentSeries);

const S_ORDER: i32 = 64;

impl Coord for S {
    fn int(x: i64) -> Self {
        S(series_const(int(x), S_ORDER))
    }
}
impl std::ops::Add for S {
    type Output = S;
    fn add(self, r: S) -> S {
        S(self.0.add(&r.0))
    }
}
impl std::ops::Sub for S {
    type Output = S;
    fn sub(self, r: S) -> S {
        S(self.0.sub(&r.0))
    }
}
impl std::ops::Mul for S {
    type Output = S;
    fn mul(self, r: S) -> S {
        S(self.0.mul(&r.0))
    }
}
impl std::ops::Neg for S {
    type Output = S;
    fn neg(self) -> S {
        S(self.0.neg())
    }
}

/// The `u -> 0` limit of `Gamma_i` in a chart.
pub fn chart_limit(i: usize, chart: Chart, k: &Rational, l: &Rational) -> Result<ProjectivePoint9, Error> {
    let (beta, delta) = chart_series(chart, k, l)?;
    let coords = gamma_coords(i, &S(series_const(k.clone(), S_ORDER)), &S(beta), &S(delta));
    let series: Vec<LaurentSeries> = coords.into_iter().map(|s| s.0).collect();
    leading_point(&series)
}

/// `incidence[i][j]`: whether `Gamma_{i+1}` passes through `p_{j+1}`, with
/// the chart that reaches it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Incidence {
    pub matrix: Vec<Vec<bool>>,
    pub charts: Vec<Vec<Option<Chart>>>,
    /// Chart limits that match none of the five points.
    pub unmatched: Vec<(usize, Chart, ProjectivePoint9)>,
}

pub fn incidence(k: &Rational, l: &Rational) -> Result<Incidence, Error> {
    let points = divisor_points_5(k);
    let mut matrix = vec![vec![false; 5]; 5];
    let mut charts = vec![vec![None; 5]; 5];
    let mut unmatched = Vec::new();
    for i in 0..5 {
        for chart in Chart::ALL {
            let lim = chart_limit(i + 1, chart, k, l)?;
            match points.iter().position(|p| *p == lim) {
                Some(j) => {
                    matrix[i][j] = true;
                    charts[i][j] = Some(chart);
                }
                None => unmatched.push((i + 1, chart, lim)),
            }
        }
    }
    Ok(Incidence {
        matrix,
        charts,
        unmatched,
    })
}

/// `Gamma_i` passes through `p_{i-1}, p_i, p_{i+1}`.
pub fn expected_incidence() -> Vec<Vec<bool>> {
    (0..5)
        .map(|i| (0..5).map(|j| (i + 5 - j) % 5 <= 1 || (j + 5 - i) % 5 == 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;
    use crate::toda_km::random_km;

    fn km(a: &[Rational]) -> KMPoint {
        KMPoint::new(a.to_vec()).unwrap()
    }

    #[test]
    fn spectral_examples() {
        assert_eq!(spectral_data_5(&km(&vec![int(1); 5])).unwrap(), (int(5), int(5)));
        let p = km(&[int(2), rat(1, 2), int(1), int(1), int(1)]);
        assert_eq!(spectral_data_5(&p).unwrap(), (rat(11, 2), int(6)));
        let mut rng = seeded(3);
        for _ in 0..50 {
            let p = random_km(&mut rng, 5, 5);
            assert_eq!(spectral_data_5(&p).unwrap(), spectral_data_from_char_poly(&p).unwrap());
        }
        assert!(spectral_data_5(&km(&vec![int(1); 4])).is_err());
    }

    #[test]
    fn quotient_curve_examples() {
        let (k, l) = (int(3), int(-2));
        let f = spectral_polynomial(&k, &l);
        let (_, tau) = quotient_curves(&f, true).unwrap();
        let cubic = QPoly::new(vec![int(0), l.clone(), -k.clone(), int(1)]);
        assert_eq!(tau, &(&cubic * &cubic) - &QPoly::from_ints(&[0, 4]));
        // genus 2 for a degree 10 spectral polynomial
        assert_eq!(hyperelliptic_genus(&tau), 2);
        assert_eq!(tau.degree(), Some(6));
        let (sigma, _) = quotient_curves(&QPoly::from_ints(&[0, 0, 1]), true).unwrap();
        assert_eq!(sigma, QPoly::from_ints(&[0, 1]));
        let (s_even, t_even) = quotient_curves(&f, false).unwrap();
        let (s_odd, t_odd) = quotient_curves(&f, true).unwrap();
        assert_eq!((s_even, t_even), (t_odd, s_odd));
        assert!(quotient_curves(&QPoly::from_ints(&[0, 1]), true).is_err());
    }

    #[test]
    fn embedding_examples() {
        let z = z_embedding(&km(&vec![int(1); 5])).unwrap();
        assert_eq!(z.coords(), ProjectivePoint9::from_ints([1, 1, 1, 2, 3, 0, 0, 1, 5]).coords());
        let mut rng = seeded(8);
        let zs = z_functions();
        for _ in 0..20 {
            let mut p = random_km(&mut rng, 5, 4).a().to_vec();
            // force a_1 = a_2 while keeping the product 1
            p[1] = p[0].clone();
            let prod: Rational = p[..4].iter().cloned().product();
            p[4] = prod.recip();
            assert!(zs[5].eval(&p).is_zero());
            let a = random_km(&mut rng, 5, 4);
            let a = a.a();
            let lhs = &zs[1].eval(a) * &zs[2].eval(a) * &a[2] * &a[4] * &a[3];
            assert_eq!(lhs, &a[0] * &a[1] * &a[3]);
        }
    }

    #[test]
    fn projective_equality() {
        let p = ProjectivePoint9::from_ints([0, 0, 2, 0, 0, 0, 0, 0, -4]);
        let q = ProjectivePoint9::from_ints([0, 0, -1, 0, 0, 0, 0, 0, 2]);
        assert_eq!(p, q);
        assert_ne!(p, ProjectivePoint9::from_ints([0, 0, 1, 0, 0, 0, 0, 0, 2]));
        let pts = divisor_points_5(&int(3));
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(pts[i] == pts[j], i == j);
            }
        }
    }

    #[test]
    fn gamma_one_example() {
        let (k, b, d) = (int(2), int(1), int(1));
        let l = (&k - &d) * &d + &b + (&b * &d).recip();
        let p = gamma_point(1, &k, &l, &b, &d).unwrap();
        assert_eq!(p, ProjectivePoint9::from_ints([0, 0, 0, 1, 0, 2, 2, 1, -1]));
        assert!(gamma_point(1, &k, &(&l + int(1)), &b, &d).is_err());
    }

    fn fiber(k: Rational, b: Rational, d: Rational) -> (Rational, Rational, Rational, Rational) {
        let l = (&k - &d) * &d + &b + (&b * &d).recip();
        (k, l, b, d)
    }

    #[test]
    fn balance_limits_lie_on_the_curves() {
        for (k, l, b, d) in [
            fiber(int(3), int(2), rat(1, 3)),
            fiber(int(-1), rat(1, 2), int(2)),
            fiber(rat(5, 2), int(-3), rat(-2, 7)),
        ] {
            let curves: Vec<ProjectivePoint9> = (1..=5).map(|i| gamma_point(i, &k, &l, &b, &d).unwrap()).collect();
            for s in 0..5 {
                let sol = principal_balance_5(s, &k, &b, &d, 8).unwrap();
                let lim = balance_to_divisor(&sol).unwrap();
                for (i, c) in curves.iter().enumerate() {
                    assert_eq!(*c == lim, i == s, "shift {s}, curve {}", i + 1);
                }
            }
        }
    }

    #[test]
    fn integrals_along_the_balance() {
        let (k, l, b, d) = fiber(int(3), int(2), rat(1, 3));
        let sol = principal_balance_5(0, &k, &b, &d, 8).unwrap();
        let series = sol.series();
        let a: Vec<MPoly> = (0..5).map(MPoly::var).collect();
        let kk = a.iter().fold(MPoly::zero(), |acc, x| &acc + x);
        let ll = (0..5).fold(MPoly::zero(), |acc, i| &acc + &(&a[i] * &a[(i + 2) % 5]));
        let prod = a.iter().fold(MPoly::constant(int(1)), |acc, x| &acc * x);
        for (f, want) in [(kk, k), (ll, l), (prod, int(1))] {
            let v = eval_on_series(&f, &series);
            assert!(crate::painleve::is_constant_series(&v));
            assert_eq!(v.coeff(0).unwrap(), want);
        }
    }

    #[test]
    fn fiber_point_search() {
        let (k, l, _, _) = fiber(int(3), int(2), rat(1, 3));
        let (b, d) = find_fiber_point(&k, &l, 10).unwrap();
        assert!(constraint_defect(&k, &l, &b, &d).is_zero());
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }

    #[test]
    fn five_three_configuration() {
        for (k, l) in [(int(3), int(2)), (rat(-1, 2), int(7)), (int(1), rat(2, 3))] {
            let inc = incidence(&k, &l).unwrap();
            assert!(inc.unmatched.is_empty());
            assert_eq!(inc.matrix, expected_incidence());
            for j in 0..5 {
                assert_eq!((0..5).filter(|&i| inc.matrix[i][j]).count(), 3);
            }
        }
    }

    #[test]
    fn chart_series_satisfy_the_constraint() {
        let (k, l) = (int(3), int(2));
        for chart in Chart::ALL {
            let (b, d) = chart_series(chart, &k, &l).unwrap();
            let kk = series_const(k.clone(), 40);
            let ll = series_const(l.clone(), 40);
            let lhs = kk.sub(&d).mul(&d).add(&b).add(&b.mul(&d).inverse().unwrap()).sub(&ll);
            assert!(lhs.is_zero(), "{chart:?}: {lhs:?}");
            assert!(lhs.order() >= 0);
        }
    }
}
