//! The map from the periodic Toda lattice to the even Mumford system, its
//! inverse on the image, and the quadratic brackets that make it Poisson.
//!
//! Minors are taken of `x Id - L(h)` with the two `h` corners dropped, as in
//! [`TridiagSpec::toda`]. With that convention the middle term of `w` has a
//! minus sign; the identity `u w + v^2 = p^2 - 4` fails with a plus sign.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    pr_split, tridiag_minor_det, BiPoly, MPoly, Poly, QPoly, Rational, Ring, TridiagSpec,
};
use crate::error::Error;
use crate::mumford::{
    fixed_coefficient_defects, generating_functions, structure_from_generating, Flavor,
    GeneratingFunctions, MumfordTriple,
};
use crate::poisson::{BracketTable, PoissonStructure};
use crate::prym;
use crate::toda_km::TodaPoint;

/// `Phi_m(p)` together with the source index and the polynomial `p = K/2`
/// of the source point.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiImage {
    pub triple: MumfordTriple,
    /// 1-based index in `1..=n`.
    pub m: usize,
    pub p: QPoly,
}

#[derive(Serialize, Deserialize)]
struct ImageJson {
    m: usize,
    u: String,
    v: String,
    w: String,
    p: String,
}

impl PhiImage {
    pub fn n(&self) -> usize {
        self.triple.flavor.genus() + 1
    }

    /// `u w + v^2 - (p^2 - 4)`, identically zero on genuine images.
    pub fn fiber_defect(&self) -> QPoly {
        let four = QPoly::constant(Rational::from_int(4));
        &(&self.triple.momentum() - &(&self.p * &self.p)) + &four
    }

    /// The image of a KM point read in the Prym coordinates.
    pub fn prym_triple(&self) -> Result<MumfordTriple, Error> {
        prym::to_prym(&self.triple)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ImageJson {
            m: self.m,
            u: self.triple.u.to_text(),
            v: self.triple.v.to_text(),
            w: self.triple.w.to_text(),
            p: self.p.to_text(),
        })
        .expect("plain data")
    }

    /// Accepts `{"m", "u", "v", "w"}`; `p` is recomputed and, if present,
    /// compared.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        #[derive(Deserialize)]
        struct Loose {
            m: Option<usize>,
            u: String,
            v: String,
            w: String,
            p: Option<String>,
        }
        let j: Loose = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let u = QPoly::parse(&j.u)?;
        let g = u
            .degree()
            .ok_or_else(|| Error::Domain("u must be nonzero".into()))?;
        let triple = MumfordTriple::new(Flavor::EvenMumford(g), u, QPoly::parse(&j.v)?, QPoly::parse(&j.w)?)?;
        let (p, r) = pr_split(&triple.u, &triple.v, &triple.w, g + 1)?;
        if r != QPoly::constant(Rational::from_int(-4)) {
            return Err(Error::NotInImage("u w + v^2 is not of the form p^2 - 4".into()));
        }
        if let Some(given) = j.p {
            if QPoly::parse(&given)? != p {
                return Err(Error::invariant("fiber-identity", "p does not match u w + v^2 + 4"));
            }
        }
        let m = j.m.unwrap_or(g + 1);
        Ok(PhiImage { triple, m, p })
    }
}

/// `(u, v, w, p)` of `Phi_n` over any coefficient ring.
pub fn phi_generic<C: Ring>(a: &[C], b: &[C]) -> (Poly<C>, Poly<C>, Poly<C>, Poly<C>) {
    let n = b.len();
    let spec = TridiagSpec::toda(a, b);
    let minor = |rows: &[usize]| tridiag_minor_det(&spec, rows);
    let (an1, an) = (&a[n - 2], &a[n - 1]);
    let u = minor(&[n - 1]);
    let left = minor(&[n - 2, n - 1]).scale(an1);
    let right = minor(&[0, n - 1]).scale(an);
    let three = minor(&[0, n - 2, n - 1]);
    let shift = Poly::linear_root(b[n - 1].clone());
    let v = &left - &right;
    let w = &(&(&(&shift * &shift) * &u) - &(&shift * &(&left + &right)).scale(&C::from_int(2)))
        + &three.scale(&(an.clone() * an1.clone() * C::from_int(4)));
    let p = &minor(&[]) - &right;
    (u, v, w, p)
}

/// `Phi_m` for `m` in `1..=n`, `n >= 3`. Minors for general `m` are taken in
/// the cyclic order starting after `m`, so `phi(p.shift(), m) == phi(p, m+1)`.
pub fn phi(point: &TodaPoint, m: usize) -> Result<PhiImage, Error> {
    let n = point.n();
    if n < 3 {
        return Err(Error::Domain("the Toda map needs n >= 3".into()));
    }
    if m == 0 || m > n {
        return Err(Error::Domain(format!("m must lie in 1..={n}")));
    }
    let q = point.shifted(m % n);
    let (u, v, w, p) = phi_generic(q.a(), q.b());
    let triple = MumfordTriple::new(Flavor::EvenMumford(n - 1), u, v, w)?;
    let img = PhiImage { triple, m, p };
    if !img.fiber_defect().is_zero() {
        return Err(Error::invariant("fiber-identity", "u w + v^2 != p^2 - 4"));
    }
    Ok(img)
}

fn not_in_image(msg: impl Into<String>) -> Error {
    Error::NotInImage(msg.into())
}

/// Splits `c * D` with `D` monic of degree `d` into `(c, D)`.
fn split_monic(f: &QPoly, d: usize, what: &str) -> Result<(Rational, QPoly), Error> {
    if f.degree() != Some(d) {
        return Err(not_in_image(format!("{what} must have degree {d}")));
    }
    let c = f.coeff(d);
    Ok((c.clone(), f.scale(&c.recip())))
}

/// Reconstructs the Toda point with `Phi_n(point) = (u, v, w)`.
pub fn phi_inverse(triple: &MumfordTriple, n: usize) -> Result<TodaPoint, Error> {
    if n < 3 || triple.flavor != Flavor::EvenMumford(n - 1) {
        return Err(Error::Domain(format!(
            "expected an even-mumford-{} triple and n >= 3",
            n.saturating_sub(1)
        )));
    }
    let (u, v, w) = (&triple.u, &triple.v, &triple.w);
    // the branch of the square root with leading coefficient +1
    let (p, r) = pr_split(u, v, w, n)?;
    if r != QPoly::constant(Rational::from_int(-4)) {
        return Err(not_in_image("u w + v^2 + 4 is not a square"));
    }
    let mut a = vec![Rational::from_int(0); n];
    let mut b = vec![Rational::from_int(0); n];
    b[n - 1] = u.coeff(n - 2) - p.coeff(n - 1);
    // a_{n-1} D_{n-1,n} +- a_n D_{1,n}
    let sum = &(&Poly::linear_root(b[n - 1].clone()) * u) - &p;
    let half = Rational::from_rational(&crate::algebra::rat(1, 2));
    let left = (&sum + v).scale(&half);
    let right = (&sum - v).scale(&half);
    let (an1, mut lower) = split_monic(&left, n - 2, "a_{n-1} D_{n-1,n}")?;
    let (an, _) = split_monic(&right, n - 2, "a_n D_{1,n}")?;
    a[n - 2] = an1;
    a[n - 1] = an;
    // leading principal minors D_k = det of rows 1..k:
    // D_k = (x - b_k) D_{k-1} - a_{k-1} D_{k-2}
    let mut upper = u.clone();
    for k in (2..n).rev() {
        let (quot, rem) = upper.divrem_monic(&lower)?;
        if quot.degree() != Some(1) {
            return Err(not_in_image("minor degrees are inconsistent"));
        }
        b[k - 1] = -quot.coeff(0);
        let (c, next) = split_monic(&-rem, k - 2, "a_k D_k")?;
        a[k - 2] = c;
        upper = lower;
        lower = next;
    }
    if upper.degree() != Some(1) || !upper.is_monic() || !lower.is_one_poly() {
        return Err(not_in_image("the innermost minor is not x - b_1"));
    }
    b[0] = -upper.coeff(0);
    let point = TodaPoint::new(a, b).map_err(|e| not_in_image(e.to_string()))?;
    let back = phi(&point, n)?;
    if &back.triple != triple {
        return Err(not_in_image("reconstruction does not reproduce the triple"));
    }
    Ok(point)
}

/// Inverse of `Phi_m`.
pub fn phi_inverse_at(triple: &MumfordTriple, n: usize, m: usize) -> Result<TodaPoint, Error> {
    if m == 0 || m > n {
        return Err(Error::Domain(format!("m must lie in 1..={n}")));
    }
    let base = phi_inverse(triple, n)?;
    Ok(base.shifted(n - m % n))
}

trait IsOne {
    fn is_one_poly(&self) -> bool;
}

impl IsOne for QPoly {
    fn is_one_poly(&self) -> bool {
        *self == QPoly::one()
    }
}

/// Generating functions of `{., .}q^phi` on `M'_g` over the symbolic ring.
pub fn quad_generating(g: usize, phi: &QPoly) -> Result<GeneratingFunctions<MPoly>, Error> {
    if phi.is_zero() || phi.degree().is_some_and(|d| d > 1) {
        return Err(Error::Domain("the quadratic family needs a nonzero phi of degree <= 1".into()));
    }
    let flavor = Flavor::EvenMumford(g);
    let (u, v, w) = flavor.symbolic();
    let alpha = flavor.alpha(&u, &w);
    let (p, _) = pr_split(&u, &v, &w, g + 1)?;
    let phi_m = phi.map(|c| MPoly::constant(c.clone()));
    let base = generating_functions(&u, &v, &w, &(&p * &phi_m), &alpha);
    // alpha^phi(z) = phi(alpha(2z)/2)
    let half = MPoly::constant(crate::algebra::rat(1, 2));
    let inner = Poly::new(vec![alpha.coeff(0) * half, alpha.coeff(1)]);
    let alpha_phi = phi_m.compose(&inner);
    let a = BiPoly::from_sum(&alpha_phi);
    let two = MPoly::from_int(2);
    let outer = |f: &Poly<MPoly>, g: &Poly<MPoly>| BiPoly::outer(f, g);
    let corr = GeneratingFunctions {
        uv: &a * &outer(&u, &u),
        uw: (&a * &outer(&u, &v)).scale(&-two.clone()),
        vw: &a * &outer(&u, &w),
        ww: (&a * &(&outer(&w, &v) - &outer(&v, &w))).scale(&two),
    };
    Ok(base.add(&corr))
}

/// `{., .}q^phi` as an exact structure in the coordinates of `M'_g`.
///
/// With the sign conventions of [`crate::toda_km::toda_structure`],
/// `Phi_m` pulls this structure back to minus the Toda pencil member with
/// the same `phi`; see [`poisson_defect`].
pub fn quad_mumford_structure(g: usize, phi: &QPoly) -> Result<PoissonStructure, Error> {
    let flavor = Flavor::EvenMumford(g);
    let gf = quad_generating(g, phi)?;
    if let Some((a, b)) = fixed_coefficient_defects(flavor, &gf).first() {
        return Err(Error::invariant("fixed-coefficients", format!("{{{a}, {b}}} does not vanish")));
    }
    Ok(structure_from_generating(flavor.names(), &flavor.coordinates(), &gf))
}

/// The bracket table of `{., .}q^phi` at a point of `M'_g`.
pub fn quad_mumford_bracket(phi: &QPoly, point: &MumfordTriple) -> Result<BracketTable, Error> {
    let Flavor::EvenMumford(g) = point.flavor else {
        return Err(Error::Domain("the quadratic family lives on even Mumford spaces".into()));
    };
    Ok(quad_mumford_structure(g, phi)?.at(&point.coords()))
}

/// The coefficients of `p` and `r` in `u w + v^2 = p^2 + r` as functions on
/// `M'_g`, lowest degree first.
pub fn symbolic_pr(g: usize) -> (Vec<MPoly>, Vec<MPoly>) {
    let (u, v, w) = Flavor::EvenMumford(g).symbolic();
    let (p, r) = pr_split(&u, &v, &w, g + 1).expect("monic by construction");
    let n = g + 1;
    ((0..n).map(|i| p.coeff(i)).collect(), (0..n).map(|i| r.coeff(i)).collect())
}

/// The components of `Phi_n` as polynomials in `a_1..a_n, b_1..b_n`
/// (variables `0..2n`), in the coordinate order of `M'_{n-1}`.
pub fn symbolic_phi(n: usize) -> Vec<MPoly> {
    let a: Vec<MPoly> = (0..n).map(MPoly::var).collect();
    let b: Vec<MPoly> = (n..2 * n).map(MPoly::var).collect();
    let (u, v, w, _) = phi_generic(&a, &b);
    Flavor::EvenMumford(n - 1).read(&u, &v, &w)
}

/// Largest discrepancy of `{F o Phi_n, G o Phi_n}_T = -{F, G}q o Phi_n` over
/// coordinate pairs at a point, as a list of offending pairs.
pub fn poisson_defect(point: &TodaPoint, phi_poly: &QPoly) -> Result<Vec<(String, String)>, Error> {
    let n = point.n();
    let comps = symbolic_phi(n);
    let toda = crate::toda_km::toda_pencil(n, phi_poly)?;
    let quad = quad_mumford_structure(n - 1, phi_poly)?;
    let img = phi(point, n)?.triple.coords();
    let x = point.coords();
    let names = Flavor::EvenMumford(n - 1).names();
    let mut bad = Vec::new();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let lhs = toda.bracket(&comps[i], &comps[j]).eval(&x);
            if lhs != -quad.entry(i, j).eval(&img) {
                bad.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::mumford::Component;
    use crate::random::seeded;
    use crate::toda_km::{char_poly, random_km, random_toda, toda_pencil, KMPoint};
    use num_traits::{One, Zero};

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn n3_km_example() {
        let p = KMPoint::new(vec![int(1); 3]).unwrap().to_toda();
        let img = phi(&p, 3).unwrap();
        assert_eq!(img.triple.u, q(&[-1, 0, 1]));
        assert!(img.triple.v.is_zero());
        assert_eq!(img.triple.w, q(&[4, 0, -5, 0, 1]));
        assert_eq!(img.p, q(&[0, -3, 0, 1]));
        let back = phi_inverse(&img.triple, 3).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn fiber_identity_symbolic() {
        for n in 3..=5 {
            let a: Vec<MPoly> = (0..n).map(MPoly::var).collect();
            let b: Vec<MPoly> = (n..2 * n).map(MPoly::var).collect();
            let (u, v, w, p) = phi_generic(&a, &b);
            let defect = &(&(&u * &w) + &(&v * &v)) - &(&p * &p);
            // the defect is -4 prod a_i
            let prod = a.iter().fold(MPoly::one(), |acc, x| &acc * x);
            assert_eq!(defect, Poly::constant(prod.scale(&int(-4))), "n = {n}");
        }
    }

    #[test]
    fn plus_sign_breaks_identity() {
        let a = vec![int(2), crate::algebra::rat(1, 2), int(1)];
        let b = vec![int(1), int(0), int(-1)];
        let spec = TridiagSpec::toda(&a, &b);
        let m = |r: &[usize]| tridiag_minor_det(&spec, r);
        let u = m(&[2]);
        let (l, r) = (m(&[1, 2]).scale(&a[1]), m(&[0, 2]).scale(&a[2]));
        let s = Poly::linear_root(b[2].clone());
        let w = &(&(&(&s * &s) * &u) + &(&s * &(&l + &r)).scale(&int(2))) + &m(&[0, 1, 2]).scale(&(&a[1] * &a[2] * int(4)));
        let v = &l - &r;
        let p = &m(&[]) - &r;
        let lhs = &(&u * &w) + &(&v * &v);
        assert_ne!(lhs, &(&p * &p) - &q(&[4]));
    }

    #[test]
    fn random_round_trips_and_equivariance() {
        let mut rng = seeded(41);
        for n in 3..=6 {
            for _ in 0..6 {
                let pt = random_toda(&mut rng, n, 4);
                let k = char_poly(&pt).unwrap();
                for m in 1..=n {
                    let img = phi(&pt, m).unwrap();
                    assert!(img.fiber_defect().is_zero());
                    // q -> (q/2)^2 - 4
                    let half = k.scale(&crate::algebra::rat(1, 2));
                    assert_eq!(img.triple.momentum(), &(&half * &half) - &q(&[4]));
                    assert_eq!(phi_inverse_at(&img.triple, n, m).unwrap(), pt);
                    let next = phi(&pt, m % n + 1).unwrap();
                    assert_eq!(phi(&pt.shift(), m).unwrap().triple, next.triple);
                }
            }
        }
    }

    #[test]
    fn b_n_read_off() {
        let t = MumfordTriple::new(Flavor::EvenMumford(2), q(&[-1, 0, 1]), q(&[0]), q(&[4, 0, -5, 0, 1])).unwrap();
        let p = phi_inverse(&t, 3).unwrap();
        assert!(p.is_km());
        assert_eq!(p.a(), &[int(1), int(1), int(1)]);
    }

    #[test]
    fn not_in_image_rejected() {
        let t = MumfordTriple::new(Flavor::EvenMumford(2), q(&[-1, 0, 1]), q(&[1]), q(&[4, 0, -5, 0, 1])).unwrap();
        assert!(matches!(phi_inverse(&t, 3), Err(Error::NotInImage(_))));
    }

    #[test]
    fn km_images_have_prym_parity_symbolically() {
        for n in 3..=5 {
            let a: Vec<MPoly> = (0..n).map(MPoly::var).collect();
            let b = vec![MPoly::zero(); n];
            let (u, v, w, _) = phi_generic(&a, &b);
            let flavor = if n % 2 == 1 { Flavor::OddPrym((n - 1) / 2) } else { Flavor::EvenPrym(n / 2 - 1) };
            let par = flavor.parities().unwrap();
            for (poly, want) in [(&u, par[0]), (&v, par[1]), (&w, par[2])] {
                assert_eq!(crate::mumford::forbidden_coefficient(poly, want), None, "n = {n}");
            }
        }
        let mut rng = seeded(5);
        let img = phi(&random_km(&mut rng, 5, 3).to_toda(), 5).unwrap();
        assert_eq!(img.prym_triple().unwrap().flavor, Flavor::OddPrym(2));
    }

    #[test]
    fn quad_bracket_on_p_and_casimirs() {
        for phi_poly in [q(&[1]), q(&[0, 1]), q(&[2, -3])] {
            let g = 2;
            let s = quad_mumford_structure(g, &phi_poly).unwrap();
            assert!(s.is_antisymmetric());
            let (ps, rs) = symbolic_pr(g);
            for r in &rs {
                for i in 0..s.dim() {
                    assert!(s.bracket(r, &MPoly::var(i)).is_zero());
                }
            }
            // {u(x), p(y)} = phi(y)(u(x)v(y) - u(y)v(x))/(x - y), coefficientwise
            let flavor = Flavor::EvenMumford(g);
            let (u, v, _) = flavor.symbolic();
            let phi_m = phi_poly.map(|c| MPoly::constant(c.clone()));
            let expect = &(&BiPoly::outer(&u, &(&v * &phi_m)) - &BiPoly::outer(&v, &(&u * &phi_m))).div_x_minus_xp().unwrap();
            for (slot, ux) in flavor.coordinates().iter().zip(0..) {
                if slot.comp != Component::U {
                    continue;
                }
                for (j, pj) in ps.iter().enumerate() {
                    assert_eq!(s.bracket(&MPoly::var(ux), pj), expect.coeff(slot.index, j));
                }
            }
        }
    }

    #[test]
    fn quad_bracket_jacobi() {
        for g in 1..=2 {
            for phi_poly in [q(&[1]), q(&[0, 1])] {
                assert!(quad_mumford_structure(g, &phi_poly).unwrap().satisfies_jacobi(), "g = {g}");
            }
        }
    }

    // With the Toda signs fixed by the Lax hierarchy the map reverses the
    // bracket: it is Poisson onto the opposite of the quadratic family.
    #[test]
    fn phi_is_poisson_n3() {
        let n = 3;
        let comps = symbolic_phi(n);
        let mut rng = seeded(17);
        for phi_poly in [q(&[1]), q(&[0, 1]), q(&[1, 2])] {
            let toda = toda_pencil(n, &phi_poly).unwrap();
            let quad = quad_mumford_structure(n - 1, &phi_poly).unwrap();
            for _ in 0..3 {
                let pt = random_toda(&mut rng, n, 3);
                let img = phi(&pt, n).unwrap().triple.coords();
                let x = pt.coords();
                for i in 0..comps.len() {
                    for j in i + 1..comps.len() {
                        let lhs = toda.bracket(&comps[i], &comps[j]).eval(&x);
                        let rhs = quad.entry(i, j).eval(&img);
                        assert_eq!(lhs, -rhs, "phi = {phi_poly}, pair ({i}, {j})");
                    }
                }
            }
        }
    }
}
