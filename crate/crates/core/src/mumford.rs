//! Odd and even Mumford systems: phase spaces, the `phi`-family of Poisson
//! brackets, the momentum map `H = u w + v^2` and the Lax flows `X_y`.
//!
//! The Prym flavors live inside an even Mumford space and share its
//! coordinate machinery; their reduced brackets are built in [`crate::prym`].

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{divided_difference, int, BiPoly, MPoly, Parity, Poly, QPoly, Rational, Ring};
use crate::error::Error;
use crate::poisson::{BracketTable, PoissonStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `M_g`: `u` monic of degree `g`, `w` monic of degree `g + 1`.
    OddMumford(usize),
    /// `M'_g`: `w` monic of degree `g + 2`.
    EvenMumford(usize),
    /// `P_n` inside `M'_{2n}`: `u, w` even, `v` odd.
    OddPrym(usize),
    /// `P'_n` inside `M'_{2n+1}`: `u, w` odd, `v` even.
    EvenPrym(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    U,
    V,
    W,
}

/// A phase-space coordinate: the coefficient of `x^index` in one of
/// `u, v, w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub comp: Component,
    pub index: usize,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.comp {
            Component::U => 'u',
            Component::V => 'v',
            Component::W => 'w',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl Flavor {
    /// `(deg u, bound on deg v + 1, deg w)`.
    pub fn degrees(&self) -> (usize, usize, usize) {
        match *self {
            Flavor::OddMumford(g) => (g, g, g + 1),
            Flavor::EvenMumford(g) => (g, g, g + 2),
            Flavor::OddPrym(n) => (2 * n, 2 * n, 2 * n + 2),
            Flavor::EvenPrym(n) => (2 * n + 1, 2 * n + 1, 2 * n + 3),
        }
    }

    /// The Mumford space the flavor is embedded in.
    pub fn ambient(&self) -> Flavor {
        match *self {
            Flavor::OddPrym(n) => Flavor::EvenMumford(2 * n),
            Flavor::EvenPrym(n) => Flavor::EvenMumford(2 * n + 1),
            f => f,
        }
    }

    /// Genus of the ambient Mumford space.
    pub fn genus(&self) -> usize {
        self.degrees().0
    }

    pub fn is_prym(&self) -> bool {
        matches!(self, Flavor::OddPrym(_) | Flavor::EvenPrym(_))
    }

    /// Required parities of `u, v, w` for the Prym flavors.
    pub fn parities(&self) -> Option<[Parity; 3]> {
        match self {
            Flavor::OddPrym(_) => Some([Parity::Even, Parity::Odd, Parity::Even]),
            Flavor::EvenPrym(_) => Some([Parity::Odd, Parity::Even, Parity::Odd]),
            _ => None,
        }
    }

    fn allows(&self, comp: Component, index: usize) -> bool {
        match self.parities() {
            None => true,
            Some(p) => Parity::of(index) == p[comp as usize],
        }
    }

    /// The free coordinates, ordered `u_i`, then `v_i`, then `w_i`, each by
    /// ascending `i`.
    pub fn coordinates(&self) -> Vec<Slot> {
        let (du, dv, dw) = self.degrees();
        let mut out = Vec::new();
        for (comp, bound) in [(Component::U, du), (Component::V, dv), (Component::W, dw)] {
            for index in 0..bound {
                if self.allows(comp, index) {
                    out.push(Slot { comp, index });
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.coordinates().len()
    }

    pub fn names(&self) -> Vec<String> {
        self.coordinates().iter().map(Slot::to_string).collect()
    }

    /// Largest admissible degree of `phi`.
    pub fn max_phi_degree(&self) -> usize {
        self.ambient().genus()
    }

    /// `alpha(z)` of the bracket formulas: `1` on odd spaces,
    /// `z + w_{g+1} - u_{g-1}` on even ones.
    pub fn alpha<C: Ring>(&self, u: &Poly<C>, w: &Poly<C>) -> Poly<C> {
        match self.ambient() {
            Flavor::OddMumford(_) => Poly::one(),
            _ => {
                let g = self.genus();
                let shift = if g == 0 {
                    w.coeff(g + 1)
                } else {
                    w.coeff(g + 1) - u.coeff(g - 1)
                };
                Poly::new(vec![shift, C::one()])
            }
        }
    }

    /// Assembles `(u, v, w)` from coordinate values in the order of
    /// [`Flavor::coordinates`], filling in the monic leading terms.
    pub fn assemble<C: Ring>(&self, coords: &[C]) -> (Poly<C>, Poly<C>, Poly<C>) {
        let (du, dv, dw) = self.degrees();
        let mut u = vec![C::zero(); du + 1];
        let mut v = vec![C::zero(); dv];
        let mut w = vec![C::zero(); dw + 1];
        u[du] = C::one();
        w[dw] = C::one();
        for (slot, c) in self.coordinates().iter().zip(coords) {
            let target = match slot.comp {
                Component::U => &mut u,
                Component::V => &mut v,
                Component::W => &mut w,
            };
            target[slot.index] = c.clone();
        }
        (Poly::new(u), Poly::new(v), Poly::new(w))
    }

    /// The triple with coordinate `k` replaced by the variable `k`.
    pub fn symbolic(&self) -> (Poly<MPoly>, Poly<MPoly>, Poly<MPoly>) {
        let vars: Vec<MPoly> = (0..self.dim()).map(MPoly::var).collect();
        self.assemble(&vars)
    }

    /// Reads the coordinates off a triple (or a tangent triple).
    pub fn read<C: Ring>(&self, u: &Poly<C>, v: &Poly<C>, w: &Poly<C>) -> Vec<C> {
        self.coordinates()
            .iter()
            .map(|s| match s.comp {
                Component::U => u.coeff(s.index),
                Component::V => v.coeff(s.index),
                Component::W => w.coeff(s.index),
            })
            .collect()
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::OddMumford(g) => write!(f, "odd-mumford-{g}"),
            Flavor::EvenMumford(g) => write!(f, "even-mumford-{g}"),
            Flavor::OddPrym(n) => write!(f, "odd-prym-{n}"),
            Flavor::EvenPrym(n) => write!(f, "even-prym-{n}"),
        }
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("unknown flavor `{s}` (expected e.g. odd-mumford-2, even-prym-1)"));
        let (kind, k) = s.trim().rsplit_once('-').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        match kind {
            "odd-mumford" => Ok(Flavor::OddMumford(k)),
            "even-mumford" => Ok(Flavor::EvenMumford(k)),
            "odd-prym" => Ok(Flavor::OddPrym(k)),
            "even-prym" => Ok(Flavor::EvenPrym(k)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Flavor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Flavor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of a Mumford or Prym phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct MumfordTriple {
    pub flavor: Flavor,
    pub u: QPoly,
    pub v: QPoly,
    pub w: QPoly,
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    flavor: Flavor,
    u: String,
    v: String,
    w: String,
}

impl Serialize for MumfordTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TripleJson {
            flavor: self.flavor,
            u: self.u.to_text(),
            v: self.v.to_text(),
            w: self.w.to_text(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MumfordTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TripleJson::deserialize(d)?;
        let parse = |t: &str| QPoly::parse(t).map_err(serde::de::Error::custom);
        MumfordTriple::new(j.flavor, parse(&j.u)?, parse(&j.v)?, parse(&j.w)?)
            .map_err(serde::de::Error::custom)
    }
}

impl MumfordTriple {
    pub fn new(flavor: Flavor, u: QPoly, v: QPoly, w: QPoly) -> Result<Self, Error> {
        let t = MumfordTriple { flavor, u, v, w };
        t.check()?;
        Ok(t)
    }

    pub fn from_coords(flavor: Flavor, coords: &[Rational]) -> Result<Self, Error> {
        if coords.len() != flavor.dim() {
            return Err(Error::Domain(format!(
                "{flavor} has {} coordinates, got {}",
                flavor.dim(),
                coords.len()
            )));
        }
        let (u, v, w) = flavor.assemble(coords);
        Ok(MumfordTriple { flavor, u, v, w })
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.flavor.read(&self.u, &self.v, &self.w)
    }

    /// Degree profile and, for Prym flavors, coefficient parities.
    pub fn check(&self) -> Result<(), Error> {
        let (du, dv, dw) = self.flavor.degrees();
        if self.u.degree() != Some(du) || !self.u.is_monic() {
            return Err(Error::invariant("degree-profile", format!("u must be monic of degree {du}")));
        }
        if self.v.degree().is_some_and(|d| d >= dv) {
            return Err(Error::invariant("degree-profile", format!("v must have degree < {dv}")));
        }
        if self.w.degree() != Some(dw) || !self.w.is_monic() {
            return Err(Error::invariant("degree-profile", format!("w must be monic of degree {dw}")));
        }
        if let Some(par) = self.flavor.parities() {
            for (name, p, want) in [("u", &self.u, par[0]), ("v", &self.v, par[1]), ("w", &self.w, par[2])] {
                if let Some(i) = forbidden_coefficient(p, want) {
                    return Err(Error::invariant(
                        "prym-parity",
                        format!("{name} must be {want:?} but has a nonzero x^{i} coefficient"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `H = u w + v^2`
    pub fn momentum(&self) -> QPoly {
        momentum_h(&self.u, &self.v, &self.w)
    }
}

/// Index of the first nonzero coefficient of the wrong parity.
pub fn forbidden_coefficient<C: Ring>(p: &Poly<C>, want: Parity) -> Option<usize> {
    p.coeffs()
        .iter()
        .enumerate()
        .find(|(i, c)| Parity::of(*i) != want && !c.is_zero())
        .map(|(i, _)| i)
}

pub fn momentum_h<C: Ring>(u: &Poly<C>, v: &Poly<C>, w: &Poly<C>) -> Poly<C> {
    &(u * w) + &(v * v)
}

/// The four nonzero generating functions `{u(x), v(x')}`, `{u(x), w(x')}`,
/// `{v(x), w(x')}` and `{w(x), w(x')}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunctions<C: Ring> {
    pub uv: BiPoly<C>,
    pub uw: BiPoly<C>,
    pub vw: BiPoly<C>,
    pub ww: BiPoly<C>,
}

impl<C: Ring> GeneratingFunctions<C> {
    /// `{a(x), b(x')}` for any pair of components.
    pub fn get(&self, a: Component, b: Component) -> BiPoly<C> {
        use Component::*;
        match (a, b) {
            (U, U) | (V, V) => BiPoly::zero(),
            (U, V) => self.uv.clone(),
            (U, W) => self.uw.clone(),
            (V, W) => self.vw.clone(),
            (W, W) => self.ww.clone(),
            (V, U) => -&self.uv.swap(),
            (W, U) => -&self.uw.swap(),
            (W, V) => -&self.vw.swap(),
        }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&BiPoly<C>) -> BiPoly<D>) -> GeneratingFunctions<D> {
        GeneratingFunctions {
            uv: f(&self.uv),
            uw: f(&self.uw),
            vw: f(&self.vw),
            ww: f(&self.ww),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        GeneratingFunctions {
            uv: &self.uv + &rhs.uv,
            uw: &self.uw + &rhs.uw,
            vw: &self.vw + &rhs.vw,
            ww: &self.ww + &rhs.ww,
        }
    }
}

/// Bracket generating functions of the `phi`-structure for a triple with
/// coefficients in `C` and the given `alpha(z)`.
pub fn generating_functions<C: Ring>(
    u: &Poly<C>,
    v: &Poly<C>,
    w: &Poly<C>,
    phi: &Poly<C>,
    alpha: &Poly<C>,
) -> GeneratingFunctions<C> {
    let a = BiPoly::from_sum(alpha);
    let v_phi = &BiPoly::outer(v, phi) - &BiPoly::outer(phi, v);
    GeneratingFunctions {
        uv: divided_difference(u, phi),
        uw: divided_difference(v, phi).scale(&C::from_int(-2)),
        vw: &divided_difference(w, phi) - &(&a * &BiPoly::outer(u, phi)),
        ww: (&a * &v_phi).scale(&C::from_int(2)),
    }
}

/// Reads a structure matrix on `slots` off generating functions.
pub fn structure_from_generating(
    names: Vec<String>,
    slots: &[Slot],
    gf: &GeneratingFunctions<MPoly>,
) -> PoissonStructure {
    let n = slots.len();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| gf.get(slots[i].comp, slots[j].comp).coeff(slots[i].index, slots[j].index))
                .collect()
        })
        .collect();
    PoissonStructure::new(names, matrix).expect("square by construction")
}

/// Brackets of the fixed (leading, monic) coefficients with the free ones
/// must vanish for the formulas to define a structure on the phase space.
pub fn fixed_coefficient_defects(flavor: Flavor, gf: &GeneratingFunctions<MPoly>) -> Vec<(Slot, Slot)> {
    let (du, _, dw) = flavor.degrees();
    let fixed = [
        Slot { comp: Component::U, index: du },
        Slot { comp: Component::W, index: dw },
    ];
    let mut out = Vec::new();
    for f in fixed {
        for s in flavor.coordinates() {
            if !gf.get(f.comp, s.comp).coeff(f.index, s.index).is_zero() {
                out.push((f, s));
            }
        }
    }
    out
}

fn check_phi(flavor: Flavor, phi: &QPoly) -> Result<(), Error> {
    if phi.is_zero() {
        return Err(Error::Domain("phi must be nonzero".into()));
    }
    let d = phi.degree().unwrap_or(0);
    if d > flavor.max_phi_degree() {
        return Err(Error::Domain(format!(
            "deg phi = {d} exceeds {} on {flavor}",
            flavor.max_phi_degree()
        )));
    }
    Ok(())
}

/// The `phi`-bracket of a Mumford space as an exact polynomial structure in
/// the coordinates of [`Flavor::coordinates`].
pub fn mumford_structure(flavor: Flavor, phi: &QPoly) -> Result<PoissonStructure, Error> {
    if flavor.is_prym() {
        return Err(Error::Domain(format!(
            "{flavor} carries a reduced bracket; use prym::reduced_structure"
        )));
    }
    check_phi(flavor, phi)?;
    let (u, v, w) = flavor.symbolic();
    let alpha = flavor.alpha(&u, &w);
    let phi_m = phi.map(|c| MPoly::constant(c.clone()));
    let gf = generating_functions(&u, &v, &w, &phi_m, &alpha);
    let defects = fixed_coefficient_defects(flavor, &gf);
    if let Some((a, b)) = defects.first() {
        return Err(Error::invariant(
            "fixed-coefficients",
            format!("{{{a}, {b}}} does not vanish"),
        ));
    }
    Ok(structure_from_generating(flavor.names(), &flavor.coordinates(), &gf))
}

/// The bracket table at a point.
pub fn mumford_bracket_table(phi: &QPoly, point: &MumfordTriple) -> Result<BracketTable, Error> {
    let s = mumford_structure(point.flavor, phi)?;
    Ok(s.at(&point.coords()))
}

/// A tangent vector `(du/dt, dv/dt, dw/dt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangent<C: Ring = Rational> {
    pub u: Poly<C>,
    pub v: Poly<C>,
    pub w: Poly<C>,
}

impl<C: Ring> Tangent<C> {
    pub fn coords(&self, flavor: Flavor) -> Vec<C> {
        flavor.read(&self.u, &self.v, &self.w)
    }
}

/// Numerators of `X_y L(x)` before division by `x - y`.
fn flow_numerators<C: Ring>(
    flavor: Flavor,
    u: &Poly<C>,
    v: &Poly<C>,
    w: &Poly<C>,
    y: &C,
) -> [Poly<C>; 3] {
    let (uy, vy, wy) = (
        Poly::constant(u.eval(y)),
        Poly::constant(v.eval(y)),
        Poly::constant(w.eval(y)),
    );
    // alpha(x + y) as a polynomial in x
    let alpha = flavor.alpha(u, w);
    let a_xy = alpha.compose(&Poly::new(vec![y.clone(), C::one()]));
    let x_minus_y = Poly::linear_root(y.clone());
    let b = &wy + &(&(&x_minus_y * &a_xy) * &uy);
    let two = C::from_int(2);
    [
        (&(u * &vy) - &(v * &uy)).scale(&two),
        &(w * &uy) - &(&b * u),
        (&(v * &b) - &(w * &vy)).scale(&two),
    ]
}

/// `X_y L(x) = [L(x), L(y) + (x - y) B(x, y)] / (x - y)` over any
/// coefficient ring; the division is exact.
pub fn mumford_flow_generic<C: Ring>(
    flavor: Flavor,
    u: &Poly<C>,
    v: &Poly<C>,
    w: &Poly<C>,
    y: &C,
) -> (Tangent<C>, [C; 3]) {
    let [nu, nv, nw] = flow_numerators(flavor, u, v, w, y);
    let (du, ru) = nu.div_linear(y);
    let (dv, rv) = nv.div_linear(y);
    let (dw, rw) = nw.div_linear(y);
    (Tangent { u: du, v: dv, w: dw }, [ru, rv, rw])
}

/// The Lax flow `X_y` at a rational point.
pub fn mumford_flow(point: &MumfordTriple, y: &Rational) -> Result<Tangent, Error> {
    let (t, rems) = mumford_flow_generic(point.flavor.ambient(), &point.u, &point.v, &point.w, y);
    if rems.iter().any(|r| !r.is_zero()) {
        return Err(Error::invariant("lax-division", "numerator not divisible by x - y"));
    }
    Ok(t)
}

/// `dH/dt = u' w + u w' + 2 v v'` along a tangent.
pub fn momentum_derivative<C: Ring>(u: &Poly<C>, v: &Poly<C>, w: &Poly<C>, t: &Tangent<C>) -> Poly<C> {
    let two = C::from_int(2);
    &(&(&t.u * w) + &(u * &t.w)) + &(v * &t.v).scale(&two)
}

/// `H(y)` as a polynomial in the coordinates.
pub fn symbolic_h_at(flavor: Flavor, y: &Rational) -> MPoly {
    let (u, v, w) = flavor.symbolic();
    let y = MPoly::constant(y.clone());
    momentum_h(&u, &v, &w).eval(&y)
}

/// `{c, H(y)} / phi(y)` for every coordinate `c`, at a point.
pub fn hamiltonian_field_at(
    structure: &PoissonStructure,
    flavor: Flavor,
    phi: &QPoly,
    y: &Rational,
    point: &[Rational],
) -> Result<Vec<Rational>, Error> {
    let py = phi.eval(y);
    if py.is_zero() {
        return Err(Error::Domain("y is a root of phi".into()));
    }
    let h = symbolic_h_at(flavor, y);
    Ok(structure
        .hamiltonian_field(&h)
        .iter()
        .map(|c| c.eval(point) / &py)
        .collect())
}

/// `phi(x) = x^k`, handy for the standard members of the family.
pub fn phi_monomial(k: usize) -> QPoly {
    QPoly::monomial(int(1), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{rational, seeded, small_rational};

    fn random_point(flavor: Flavor, seed: u64) -> MumfordTriple {
        let mut rng = seeded(seed);
        let c: Vec<Rational> = (0..flavor.dim()).map(|_| small_rational(&mut rng)).collect();
        MumfordTriple::from_coords(flavor, &c).unwrap()
    }

    #[test]
    fn odd_genus_one_uv_bracket() {
        let s = mumford_structure(Flavor::OddMumford(1), &QPoly::one()).unwrap();
        assert_eq!(s.get("u0", "v0").unwrap(), &MPoly::constant(int(1)));
    }

    #[test]
    fn uu_and_vv_vanish() {
        for flavor in [Flavor::OddMumford(2), Flavor::EvenMumford(2)] {
            let s = mumford_structure(flavor, &phi_monomial(1)).unwrap();
            for a in flavor.coordinates() {
                for b in flavor.coordinates() {
                    if a.comp == b.comp && a.comp != Component::W {
                        assert!(s.get(&a.to_string(), &b.to_string()).unwrap().is_zero());
                    }
                }
            }
            assert!(s.is_antisymmetric());
        }
    }

    #[test]
    fn momentum_example() {
        let t = MumfordTriple::new(
            Flavor::EvenMumford(2),
            QPoly::from_ints(&[-1, 0, 1]),
            QPoly::zero(),
            QPoly::from_ints(&[4, 0, -5, 0, 1]),
        )
        .unwrap();
        assert_eq!(t.momentum(), QPoly::from_ints(&[-4, 0, 9, 0, -6, 0, 1]));
    }

    #[test]
    fn jacobi_and_rank() {
        for g in 1..=2 {
            for flavor in [Flavor::OddMumford(g), Flavor::EvenMumford(g)] {
                for k in 0..=g {
                    let s = mumford_structure(flavor, &phi_monomial(k)).unwrap();
                    assert!(s.satisfies_jacobi(), "{flavor} phi = x^{k}");
                }
                let s = mumford_structure(flavor, &QPoly::one()).unwrap();
                let p = random_point(flavor, 7 + g as u64);
                assert_eq!(s.at(&p.coords()).rank(), 2 * g, "{flavor}");
            }
        }
    }

    #[test]
    fn linear_in_phi() {
        let f = Flavor::EvenMumford(2);
        let a = mumford_structure(f, &QPoly::from_ints(&[1, 2])).unwrap();
        let b = mumford_structure(f, &QPoly::from_ints(&[0, -1, 3])).unwrap();
        let ab = mumford_structure(f, &QPoly::from_ints(&[1, 1, 3])).unwrap();
        assert_eq!(a.add(&b).unwrap(), ab);
    }

    #[test]
    fn h_is_in_involution() {
        for flavor in [Flavor::OddMumford(2), Flavor::EvenMumford(2)] {
            let s = mumford_structure(flavor, &QPoly::from_ints(&[1, 1])).unwrap();
            let (u, v, w) = flavor.symbolic();
            let h = momentum_h(&u, &v, &w);
            for i in 0..h.coeffs().len() {
                for j in 0..h.coeffs().len() {
                    assert!(s.bracket(&h.coeff(i), &h.coeff(j)).is_zero());
                }
            }
        }
    }

    #[test]
    fn flow_conserves_h_and_matches_hamiltonian_form() {
        let mut rng = seeded(3);
        for flavor in [Flavor::OddMumford(1), Flavor::OddMumford(2), Flavor::EvenMumford(1), Flavor::EvenMumford(2)] {
            let p = random_point(flavor, 11);
            let y = rational(&mut rng, 20);
            let t = mumford_flow(&p, &y).unwrap();
            assert!(momentum_derivative(&p.u, &p.v, &p.w, &t).is_zero());
            let (du, _, dw) = flavor.degrees();
            assert!(t.u.coeff(du).is_zero() && t.w.coeff(dw).is_zero());
            for phi in [QPoly::one(), QPoly::from_ints(&[2, 1])] {
                let s = mumford_structure(flavor, &phi).unwrap();
                let field = hamiltonian_field_at(&s, flavor, &phi, &y, &p.coords()).unwrap();
                assert_eq!(field, t.coords(flavor), "{flavor}");
            }
        }
    }

    #[test]
    fn flows_commute() {
        // [X_y, X_y'] evaluated through the symbolic fields.
        let flavor = Flavor::EvenMumford(2);
        let s = mumford_structure(flavor, &QPoly::one()).unwrap();
        let (y1, y2) = (int(2), crate::algebra::rat(-1, 3));
        let f1 = s.hamiltonian_field(&symbolic_h_at(flavor, &y1));
        let f2 = s.hamiltonian_field(&symbolic_h_at(flavor, &y2));
        let n = flavor.dim();
        for i in 0..n {
            let mut c = MPoly::zero();
            for j in 0..n {
                c = c + &f1[j] * &f2[i].derivative(j) - &f2[j] * &f1[i].derivative(j);
            }
            assert!(c.is_zero());
        }
    }

    #[test]
    fn flavor_text_and_json() {
        for f in [Flavor::OddMumford(2), Flavor::EvenPrym(1)] {
            assert_eq!(f.to_string().parse::<Flavor>().unwrap(), f);
        }
        assert!("odd-banana-1".parse::<Flavor>().is_err());
        let t = random_point(Flavor::EvenMumford(1), 5);
        let j = serde_json::to_string(&t).unwrap();
        assert!(j.contains("\"flavor\":\"even-mumford-1\""));
        assert_eq!(serde_json::from_str::<MumfordTriple>(&j).unwrap(), t);
        let bad = r#"{"flavor":"odd-prym-1","u":"0,1,1","v":"0","w":"0,0,0,1"}"#;
        assert!(serde_json::from_str::<MumfordTriple>(bad).is_err());
    }

    #[test]
    fn phi_degree_is_bounded() {
        assert!(mumford_structure(Flavor::OddMumford(1), &phi_monomial(2)).is_err());
        assert!(mumford_structure(Flavor::OddMumford(1), &QPoly::zero()).is_err());
    }
}
