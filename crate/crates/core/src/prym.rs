//! Hyperelliptic Prym systems as fixed loci of the involution `j` (or `-j`)
//! of an even Mumford space, their reduced brackets and the Lax flow `X_y`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{int, parity_project, BiPoly, MPoly, Poly, QPoly, Rational, Ring};
use crate::error::Error;
use crate::mumford::{
    generating_functions, mumford_structure, structure_from_generating, Component, Flavor,
    GeneratingFunctions, MumfordTriple, Tangent,
};
use crate::poisson::PoissonStructure;

/// `+j` or `-j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The involution whose fixed locus is the given Prym flavor.
    pub fn for_flavor(flavor: Flavor) -> Option<Sign> {
        match flavor {
            Flavor::OddPrym(_) => Some(Sign::Plus),
            Flavor::EvenPrym(_) => Some(Sign::Minus),
            _ => None,
        }
    }

    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

fn check_domain(flavor: Flavor, sign: Sign) -> Result<usize, Error> {
    match (flavor, sign) {
        (Flavor::EvenMumford(g), Sign::Plus) if g % 2 == 0 => Ok(g),
        (Flavor::EvenMumford(g), Sign::Minus) if g % 2 == 1 => Ok(g),
        _ => Err(Error::Domain(format!(
            "{sign:?} j acts on even Mumford spaces of {} genus, not on {flavor}",
            if sign == Sign::Plus { "even" } else { "odd" }
        ))),
    }
}

/// `(u, v, w)(x) -> (s u(-x), -s v(-x), s w(-x))` with `s = +1` for `j`
/// and `s = -1` for `-j`.
pub fn involution_j(point: &MumfordTriple, sign: Sign) -> Result<MumfordTriple, Error> {
    check_domain(point.flavor, sign)?;
    let s = int(sign.value());
    MumfordTriple::new(
        point.flavor,
        point.u.neg_x().scale(&s),
        point.v.neg_x().scale(&-s.clone()),
        point.w.neg_x().scale(&s),
    )
}

/// Action of the involution on the ambient coordinates.
pub fn involution_signs(ambient: Flavor, sign: Sign) -> Vec<i8> {
    let s = sign.value() as i8;
    ambient
        .coordinates()
        .iter()
        .map(|slot| {
            let parity = if slot.index % 2 == 0 { 1 } else { -1 };
            let comp = if slot.comp == Component::V { -1 } else { 1 };
            s * parity * comp
        })
        .collect()
}

pub fn is_fixed(point: &MumfordTriple, sign: Sign) -> Result<bool, Error> {
    Ok(involution_j(point, sign)? == *point)
}

/// Views a fixed point of `j` (or `-j`) as a Prym point.
pub fn to_prym(point: &MumfordTriple) -> Result<MumfordTriple, Error> {
    let flavor = match point.flavor {
        Flavor::EvenMumford(g) if g % 2 == 0 => Flavor::OddPrym(g / 2),
        Flavor::EvenMumford(g) => Flavor::EvenPrym(g / 2),
        f => return Err(Error::Domain(format!("{f} is not an even Mumford space"))),
    };
    MumfordTriple::new(flavor, point.u.clone(), point.v.clone(), point.w.clone())
}

/// The Prym point as a point of its ambient even Mumford space.
pub fn to_ambient(point: &MumfordTriple) -> MumfordTriple {
    MumfordTriple {
        flavor: point.flavor.ambient(),
        u: point.u.clone(),
        v: point.v.clone(),
        w: point.w.clone(),
    }
}

fn check_phi_parity(flavor: Flavor, phi: &QPoly) -> Result<(), Error> {
    let ok = match flavor {
        Flavor::OddPrym(_) => phi.is_even(),
        Flavor::EvenPrym(_) => phi.is_odd(),
        _ => return Err(Error::Domain(format!("{flavor} is not a Prym flavor"))),
    };
    if !ok || phi.is_zero() {
        return Err(Error::Domain(format!(
            "{flavor} needs a nonzero {} phi",
            if matches!(flavor, Flavor::OddPrym(_)) { "even" } else { "odd" }
        )));
    }
    Ok(())
}

/// Reduced bracket on a Prym space by Dirac reduction through the
/// involution: each ambient generating function is projected onto the
/// parities of the invariant coordinates, then restricted to the fixed
/// locus. The involution is checked to be Poisson first.
pub fn dirac_reduce(flavor: Flavor, phi: &QPoly) -> Result<PoissonStructure, Error> {
    let sign = Sign::for_flavor(flavor)
        .ok_or_else(|| Error::Domain(format!("{flavor} is not a Prym flavor")))?;
    let ambient = flavor.ambient();
    let full = mumford_structure(ambient, phi)?;
    if !full.is_preserved_by(&involution_signs(ambient, sign)) {
        return Err(Error::invariant(
            "poisson-involution",
            format!("{sign:?} j is not Poisson for phi = {phi}; reduction refused"),
        ));
    }
    let (u, v, w) = ambient.symbolic();
    let alpha = ambient.alpha(&u, &w);
    let phi_m = phi.map(|c| MPoly::constant(c.clone()));
    let gf = generating_functions(&u, &v, &w, &phi_m, &alpha);
    let par = flavor.parities().expect("prym flavor");
    let projected = GeneratingFunctions {
        uv: parity_project(&gf.uv, par[0], par[1]),
        uw: parity_project(&gf.uw, par[0], par[2]),
        vw: parity_project(&gf.vw, par[1], par[2]),
        ww: parity_project(&gf.ww, par[2], par[2]),
    };
    // restrict: anti-invariant ambient coordinates vanish, invariant ones
    // are renumbered as Prym coordinates
    let amb = ambient.coordinates();
    let kept = flavor.coordinates();
    let zeros: BTreeMap<usize, Rational> = amb
        .iter()
        .enumerate()
        .filter(|(_, s)| !kept.contains(s))
        .map(|(i, _)| (i, int(0)))
        .collect();
    let map: Vec<usize> = amb
        .iter()
        .map(|s| kept.iter().position(|k| k == s).unwrap_or(0))
        .collect();
    let restricted = projected.map(|f| f.map(|c| c.partial_eval(&zeros).remap_vars(&map)));
    Ok(structure_from_generating(flavor.names(), &kept, &restricted))
}

/// The closed-form reduced generating functions, written directly on the
/// Prym coordinates.
pub fn closed_form_generating(flavor: Flavor, phi: &QPoly) -> Result<GeneratingFunctions<MPoly>, Error> {
    check_phi_parity(flavor, phi)?;
    let (u, v, w) = flavor.symbolic();
    let phi = phi.map(|c| MPoly::constant(c.clone()));
    let anti = |p: &Poly<MPoly>| &BiPoly::outer(p, &phi) - &BiPoly::outer(&phi, p);
    let div = |b: BiPoly<MPoly>| b.div_x2_minus_xp2().expect("antisymmetric numerator");
    let x = Poly::<MPoly>::x();
    let xv = &x * &v;
    Ok(GeneratingFunctions {
        // x' (u(x) phi(x') - u(x') phi(x)) / (x^2 - x'^2)
        uv: div(anti(&u).shift(0, 1)),
        // -2 (x v(x) phi(x') - x' v(x') phi(x)) / (x^2 - x'^2)
        uw: div(anti(&xv)).scale(&MPoly::constant(int(-2))),
        // x (w(x) phi(x') - w(x') phi(x)) / (x^2 - x'^2) - x u(x) phi(x')
        vw: &div(anti(&w).shift(1, 0)) - &BiPoly::outer(&(&x * &u), &phi),
        // 2 (x v(x) phi(x') - x' v(x') phi(x))
        ww: anti(&xv).scale(&MPoly::constant(int(2))),
    })
}

pub fn closed_form_structure(flavor: Flavor, phi: &QPoly) -> Result<PoissonStructure, Error> {
    let gf = closed_form_generating(flavor, phi)?;
    Ok(structure_from_generating(flavor.names(), &flavor.coordinates(), &gf))
}

/// The reduced bracket of a Prym space.
pub fn reduced_structure(flavor: Flavor, phi: &QPoly) -> Result<PoissonStructure, Error> {
    check_phi_parity(flavor, phi)?;
    dirac_reduce(flavor, phi)
}

/// `X_y L(x) = [L(x), M(x, y)] / (x^2 - y^2)` with
/// `M = [[y v(y), x w(y) + x (x^2 - y^2) u(y)], [x u(y), -y v(y)]]`, over
/// any coefficient ring. Also returns whether every division was exact.
pub fn prym_flow_generic<C: Ring>(u: &Poly<C>, v: &Poly<C>, w: &Poly<C>, y: &C) -> (Tangent<C>, bool) {
    let (uy, vy, wy) = (u.eval(y), v.eval(y), w.eval(y));
    let x = Poly::<C>::x();
    let d = Poly::new(vec![-(y.clone() * y.clone()), C::zero(), C::one()]);
    let m11 = Poly::constant(y.clone() * vy);
    let m12 = &x.scale(&wy) + &(&x * &d).scale(&uy);
    let m21 = x.scale(&uy);
    let two = C::from_int(2);
    // [L, M] for L = [[v, w], [u, -v]], M = [[m11, m12], [m21, -m11]]
    let nu = (&(u * &m11) - &(v * &m21)).scale(&two);
    let nv = &(w * &m21) - &(&m12 * u);
    let nw = (&(v * &m12) - &(w * &m11)).scale(&two);
    let mut exact = true;
    let mut div = |p: Poly<C>| {
        let (q, r) = p.divrem_monic(&d).expect("monic divisor");
        exact &= r.is_zero();
        q
    };
    let t = Tangent {
        u: div(nu),
        v: div(nv),
        w: div(nw),
    };
    (t, exact)
}

pub fn prym_flow(point: &MumfordTriple, y: &Rational) -> Result<Tangent, Error> {
    if !point.flavor.is_prym() {
        return Err(Error::Domain(format!("{} is not a Prym flavor", point.flavor)));
    }
    let (t, exact) = prym_flow_generic(&point.u, &point.v, &point.w, y);
    if !exact {
        return Err(Error::invariant("lax-division", "numerator not divisible by x^2 - y^2"));
    }
    Ok(t)
}

/// Coefficients of the tangent that would leave the Prym space.
pub fn tangent_parity_defects(flavor: Flavor, t: &Tangent) -> Vec<String> {
    let Some(par) = flavor.parities() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (name, p, want) in [("u", &t.u, par[0]), ("v", &t.v, par[1]), ("w", &t.w, par[2])] {
        for (i, c) in p.coeffs().iter().enumerate() {
            if crate::algebra::Parity::of(i) != want && !c.is_zero() {
                out.push(format!("{name}{i}"));
            }
        }
    }
    out
}

/// `f(0) = u(0) w(0) + v(0)^2`; on even Prym spaces `u(0) = w(0) = 0` so it
/// reduces to `v_0^2`.
pub fn reducibility_signal(point: &MumfordTriple) -> Rational {
    let h = point.momentum();
    h.coeff(0)
}

/// Whether every coordinate is zero in the Prym-forbidden slots.
pub fn has_prym_parity(flavor: Flavor, u: &QPoly, v: &QPoly, w: &QPoly) -> bool {
    let Some(par) = flavor.parities() else {
        return true;
    };
    crate::mumford::forbidden_coefficient(u, par[0]).is_none()
        && crate::mumford::forbidden_coefficient(v, par[1]).is_none()
        && crate::mumford::forbidden_coefficient(w, par[2]).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mumford::{hamiltonian_field_at, momentum_derivative, phi_monomial};
    use crate::random::{seeded, small_rational};

    fn random_coords(n: usize, seed: u64) -> Vec<Rational> {
        let mut rng = seeded(seed);
        (0..n).map(|_| small_rational(&mut rng)).collect()
    }

    fn random_prym(flavor: Flavor, seed: u64) -> MumfordTriple {
        MumfordTriple::from_coords(flavor, &random_coords(flavor.dim(), seed)).unwrap()
    }

    #[test]
    fn km_image_is_fixed() {
        let t = MumfordTriple::new(
            Flavor::EvenMumford(2),
            QPoly::from_ints(&[-1, 0, 1]),
            QPoly::zero(),
            QPoly::from_ints(&[4, 0, -5, 0, 1]),
        )
        .unwrap();
        assert!(is_fixed(&t, Sign::Plus).unwrap());
        assert_eq!(to_prym(&t).unwrap().flavor, Flavor::OddPrym(1));
    }

    #[test]
    fn involutive_and_fixed_point_characterization() {
        for (g, sign) in [(2, Sign::Plus), (3, Sign::Minus), (4, Sign::Plus)] {
            let f = Flavor::EvenMumford(g);
            let p = MumfordTriple::from_coords(f, &random_coords(f.dim(), g as u64)).unwrap();
            let jp = involution_j(&p, sign).unwrap();
            assert_eq!(involution_j(&jp, sign).unwrap(), p);
            assert!(!is_fixed(&p, sign).unwrap());
            assert!(to_prym(&p).is_err());
            let prym = if sign == Sign::Plus { Flavor::OddPrym(g / 2) } else { Flavor::EvenPrym(g / 2) };
            let q = to_ambient(&random_prym(prym, 9));
            assert!(is_fixed(&q, sign).unwrap());
            assert!(to_prym(&q).is_ok());
        }
        let odd = MumfordTriple::from_coords(Flavor::EvenMumford(1), &random_coords(5, 1)).unwrap();
        assert!(involution_j(&odd, Sign::Plus).is_err());
    }

    #[test]
    fn involution_is_poisson_for_matching_phi() {
        let f = Flavor::EvenMumford(2);
        let signs = involution_signs(f, Sign::Plus);
        assert!(mumford_structure(f, &QPoly::one()).unwrap().is_preserved_by(&signs));
        assert!(mumford_structure(f, &phi_monomial(2)).unwrap().is_preserved_by(&signs));
        assert!(!mumford_structure(f, &phi_monomial(1)).unwrap().is_preserved_by(&signs));
        assert!(dirac_reduce(Flavor::OddPrym(1), &phi_monomial(1)).is_err());
        let f = Flavor::EvenMumford(3);
        let signs = involution_signs(f, Sign::Minus);
        assert!(mumford_structure(f, &phi_monomial(1)).unwrap().is_preserved_by(&signs));
        assert!(!mumford_structure(f, &QPoly::one()).unwrap().is_preserved_by(&signs));
    }

    #[test]
    fn dirac_reduction_matches_closed_form() {
        for n in 1..=2 {
            for (flavor, phis) in [
                (Flavor::OddPrym(n), vec![QPoly::one(), phi_monomial(2)]),
                (Flavor::EvenPrym(n), vec![phi_monomial(1), phi_monomial(3)]),
            ] {
                for phi in phis {
                    let generic = dirac_reduce(flavor, &phi).unwrap();
                    let closed = closed_form_structure(flavor, &phi).unwrap();
                    assert_eq!(generic, closed, "{flavor} phi = {phi}");
                    let amb = mumford_structure(flavor.ambient(), &phi).unwrap();
                    let sign = Sign::for_flavor(flavor).unwrap();
                    let by_matrix = amb.reduce_by_involution(&involution_signs(flavor.ambient(), sign)).unwrap();
                    assert_eq!(by_matrix.names(), generic.names());
                    for i in 0..generic.dim() {
                        for j in 0..generic.dim() {
                            assert_eq!(by_matrix.entry(i, j), generic.entry(i, j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_jacobi_n1() {
        assert!(reduced_structure(Flavor::OddPrym(1), &QPoly::one()).unwrap().satisfies_jacobi());
        assert!(reduced_structure(Flavor::EvenPrym(1), &phi_monomial(1)).unwrap().satisfies_jacobi());
    }

    #[test]
    fn prym_flow_properties() {
        for flavor in [Flavor::OddPrym(1), Flavor::OddPrym(2), Flavor::EvenPrym(1), Flavor::EvenPrym(2)] {
            let p = random_prym(flavor, 4);
            let y = crate::algebra::rat(3, 7);
            let t = prym_flow(&p, &y).unwrap();
            assert!(tangent_parity_defects(flavor, &t).is_empty(), "{flavor}");
            assert!(momentum_derivative(&p.u, &p.v, &p.w, &t).is_zero());
            assert!(p.momentum().is_even());
        }
    }

    #[test]
    fn prym_flow_is_reduced_hamiltonian_field() {
        let y = crate::algebra::rat(-2, 5);
        // phi = 1 on P_n, phi = x on P'_n (the lowest admissible members)
        for (flavor, phi) in [
            (Flavor::OddPrym(1), QPoly::one()),
            (Flavor::OddPrym(2), QPoly::one()),
            (Flavor::EvenPrym(1), phi_monomial(1)),
        ] {
            let s = reduced_structure(flavor, &phi).unwrap();
            let p = random_prym(flavor, 21);
            let t = prym_flow(&p, &y).unwrap();
            let field = hamiltonian_field_at(&s, flavor, &phi, &y, &p.coords()).unwrap();
            assert_eq!(t.coords(flavor), field, "{flavor}");
        }
    }

    #[test]
    fn even_prym_reducibility_signal() {
        let p = random_prym(Flavor::EvenPrym(1), 2);
        let v0 = p.v.coeff(0);
        assert_eq!(reducibility_signal(&p), &v0 * &v0);
    }
}
