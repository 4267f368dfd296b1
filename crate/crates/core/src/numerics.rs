//! Fixed-step RK4 integration of the lattice, Mumford and Prym flows, with
//! the first integrals tracked along the way.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{to_f64, Poly, Rational};
use crate::error::Error;
use crate::mumford::{momentum_h, mumford_flow_generic, Flavor, MumfordTriple};
use crate::prym::prym_flow_generic;
use crate::toda_km::{half_k_generic, km_field, toda_flow_generic, KMPoint, TodaPoint};

/// Components larger than this end the run.
pub const OVERFLOW_GUARD: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemTag {
    Km,
    Toda,
    Mumford,
    Prym,
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SystemTag::Km => "km",
            SystemTag::Toda => "toda",
            SystemTag::Mumford => "mumford",
            SystemTag::Prym => "prym",
        };
        f.write_str(s)
    }
}

impl FromStr for SystemTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "km" => Ok(SystemTag::Km),
            "toda" => Ok(SystemTag::Toda),
            "mumford" => Ok(SystemTag::Mumford),
            "prym" => Ok(SystemTag::Prym),
            _ => Err(Error::Parse(format!("unknown system `{s}` (km, toda, mumford, prym)"))),
        }
    }
}

/// A vector field together with the integrals to monitor.
#[derive(Clone, Debug, PartialEq)]
pub enum Flow {
    /// `a_i' = a_i (a_{i-1} - a_{i+1})` on `n` sites.
    Km { n: usize },
    /// `[L, (L^i)_+]` on `T_n`.
    Toda { n: usize, i: usize },
    /// The Lax field `X_y` of a Mumford system.
    Mumford { flavor: Flavor, y: f64 },
    /// The Lax field `X_y` of a Prym system.
    Prym { flavor: Flavor, y: f64 },
}

impl Flow {
    pub fn tag(&self) -> SystemTag {
        match self {
            Flow::Km { .. } => SystemTag::Km,
            Flow::Toda { .. } => SystemTag::Toda,
            Flow::Mumford { .. } => SystemTag::Mumford,
            Flow::Prym { .. } => SystemTag::Prym,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Flow::Km { n } => *n,
            Flow::Toda { n, .. } => 2 * n,
            Flow::Mumford { flavor, .. } | Flow::Prym { flavor, .. } => flavor.dim(),
        }
    }

    pub fn state_names(&self) -> Vec<String> {
        match self {
            Flow::Km { n } => (1..=*n).map(|i| format!("a{i}")).collect(),
            Flow::Toda { n, .. } => (1..=*n)
                .map(|i| format!("a{i}"))
                .chain((1..=*n).map(|i| format!("b{i}")))
                .collect(),
            Flow::Mumford { flavor, .. } | Flow::Prym { flavor, .. } => flavor.names(),
        }
    }

    pub fn rhs(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Flow::Km { .. } => km_field(x),
            Flow::Toda { n, i } => {
                let (da, db, _) = toda_flow_generic(&x[..*n], &x[*n..], *i);
                da.into_iter().chain(db).collect()
            }
            Flow::Mumford { flavor, y } => {
                let (u, v, w) = flavor.assemble(x);
                mumford_flow_generic(*flavor, &u, &v, &w, y).0.coords(*flavor)
            }
            Flow::Prym { flavor, y } => {
                let (u, v, w) = flavor.assemble(x);
                prym_flow_generic(&u, &v, &w, y).0.coords(*flavor)
            }
        }
    }

    pub fn integral_names(&self) -> Vec<String> {
        match self {
            Flow::Km { n } | Flow::Toda { n, .. } => {
                let mut out: Vec<String> = (0..*n).map(|j| format!("K_x{j}")).collect();
                out.push("prod_a".into());
                if matches!(self, Flow::Km { .. }) && n % 2 == 0 {
                    out.push("pi_odd".into());
                    out.push("pi_even".into());
                }
                out
            }
            Flow::Mumford { flavor, .. } | Flow::Prym { flavor, .. } => {
                let d = h_degree(*flavor);
                (0..d).map(|j| format!("H_x{j}")).collect()
            }
        }
    }

    /// Coefficients of `K/2` below the leading one and `prod a_i` for the
    /// lattices (plus the two alternating products for even KM); the
    /// non-leading coefficients of `H` for Mumford and Prym.
    pub fn integrals(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Flow::Km { n } | Flow::Toda { n, .. } => {
                let (a, b) = match self {
                    Flow::Km { .. } => (x.to_vec(), vec![0.0; *n]),
                    _ => (x[..*n].to_vec(), x[*n..].to_vec()),
                };
                let k = half_k_generic(&a, &b);
                let mut out: Vec<f64> = (0..*n).map(|j| k.coeff(j)).collect();
                out.push(a.iter().product());
                if matches!(self, Flow::Km { .. }) && n % 2 == 0 {
                    out.push(a.iter().step_by(2).product());
                    out.push(a.iter().skip(1).step_by(2).product());
                }
                out
            }
            Flow::Mumford { flavor, .. } | Flow::Prym { flavor, .. } => {
                let (u, v, w) = flavor.assemble(x);
                let h: Poly<f64> = momentum_h(&u, &v, &w);
                (0..h_degree(*flavor)).map(|j| h.coeff(j)).collect()
            }
        }
    }
}

fn h_degree(flavor: Flavor) -> usize {
    let (du, _, dw) = flavor.degrees();
    du + dw
}

pub fn km_state(p: &KMPoint) -> Vec<f64> {
    p.a().iter().map(to_f64).collect()
}

pub fn toda_state(p: &TodaPoint) -> Vec<f64> {
    p.coords().iter().map(to_f64).collect()
}

pub fn mumford_state(p: &MumfordTriple) -> Vec<f64> {
    p.coords().iter().map(to_f64).collect()
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step(flow: &Flow, x: &[f64], h: f64) -> Vec<f64> {
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    let k1 = flow.rhs(x);
    let k2 = flow.rhs(&axpy(x, h / 2.0, &k1));
    let k3 = flow.rhs(&axpy(x, h / 2.0, &k2));
    let k4 = flow.rhs(&axpy(x, h, &k3));
    (0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub system: SystemTag,
    pub state_names: Vec<String>,
    pub integral_names: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub conserved: Vec<Vec<f64>>,
    /// Largest `|I(t) - I(0)|` per integral.
    pub drift: Vec<f64>,
    /// Set when the run stopped early.
    pub truncated: Option<String>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("at least the initial state")
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn drift_of(&self, name: &str) -> Option<f64> {
        self.integral_names.iter().position(|n| n == name).map(|i| self.drift[i])
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), Error> {
        let io = |e: csv::Error| Error::Parse(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<&str> = std::iter::once("t")
            .chain(self.state_names.iter().map(String::as_str))
            .chain(self.integral_names.iter().map(String::as_str))
            .collect();
        w.write_record(&header).map_err(io)?;
        for ((t, x), c) in self.times.iter().zip(&self.states).zip(&self.conserved) {
            let row: Vec<String> = std::iter::once(t)
                .chain(x)
                .chain(c)
                .map(|v| format!("{v:e}"))
                .collect();
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn drift_summary(&self) -> serde_json::Value {
        serde_json::json!({
            "system": self.system,
            "steps": self.times.len() - 1,
            "t_end": self.times.last(),
            "drift": self.integral_names.iter().zip(&self.drift)
                .map(|(n, d)| (n.clone(), serde_json::json!(d)))
                .collect::<serde_json::Map<_, _>>(),
            "max_drift": self.max_drift(),
            "truncated": self.truncated,
        })
    }
}

/// Integrates from `x0` over `[0, t_end]` with a fixed step, recording
/// every `record_every`-th state (the final state is always kept).
pub fn integrate(
    flow: &Flow,
    x0: Vec<f64>,
    t_end: f64,
    step: f64,
    record_every: usize,
) -> Result<Trajectory, Error> {
    if step.is_nan() || t_end.is_nan() || step <= 0.0 || t_end <= 0.0 {
        return Err(Error::Domain("step and t_end must be positive".into()));
    }
    if x0.len() != flow.dim() {
        return Err(Error::Domain(format!(
            "{} needs {} coordinates, got {}",
            flow.tag(),
            flow.dim(),
            x0.len()
        )));
    }
    let steps = (t_end / step).round().max(1.0) as usize;
    let h = t_end / steps as f64;
    let every = record_every.max(1);
    let base = flow.integrals(&x0);
    let mut drift = vec![0.0; base.len()];
    let mut traj = Trajectory {
        system: flow.tag(),
        state_names: flow.state_names(),
        integral_names: flow.integral_names(),
        times: vec![0.0],
        states: vec![x0.clone()],
        conserved: vec![base.clone()],
        drift: Vec::new(),
        truncated: None,
    };
    let mut x = x0;
    let mut last = (0, base);
    for s in 1..=steps {
        let next = rk4_step(flow, &x, h);
        if next.iter().any(|v| !v.is_finite() || v.abs() > OVERFLOW_GUARD) {
            traj.truncated = Some(format!(
                "state left the overflow guard at t = {:.6}, likely near a pole of a Laurent solution",
                s as f64 * h
            ));
            // keep the last state inside the guard
            let (k, vals) = last;
            if *traj.times.last().expect("initial time") < k as f64 * h {
                traj.times.push(k as f64 * h);
                traj.states.push(x);
                traj.conserved.push(vals);
            }
            break;
        }
        x = next;
        let vals = flow.integrals(&x);
        for (d, (v, b)) in drift.iter_mut().zip(vals.iter().zip(&traj.conserved[0])) {
            *d = f64::max(*d, (v - b).abs());
        }
        if s % every == 0 || s == steps {
            traj.times.push(s as f64 * h);
            traj.states.push(x.clone());
            traj.conserved.push(vals.clone());
        }
        last = (s, vals);
    }
    traj.drift = drift;
    Ok(traj)
}

/// Endpoint only, no bookkeeping.
pub fn endpoint(flow: &Flow, x0: &[f64], t_end: f64, steps: usize) -> Vec<f64> {
    let h = t_end / steps as f64;
    (0..steps).fold(x0.to_vec(), |x, _| rk4_step(flow, &x, h))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// `|y_h - y_{h/2}| / |y_{h/2} - y_{h/4}|` at the endpoint; about 16 for a
/// fourth-order method in its asymptotic range.
pub fn convergence_ratio(flow: &Flow, x0: &[f64], t_end: f64, steps: usize) -> f64 {
    let y1 = endpoint(flow, x0, t_end, steps);
    let y2 = endpoint(flow, x0, t_end, 2 * steps);
    let y4 = endpoint(flow, x0, t_end, 4 * steps);
    dist(&y1, &y2) / dist(&y2, &y4)
}

/// The reference KM run: `n = 5`, `a = (2, 1/2, 1, 1, 1)`.
pub fn km_reference_point() -> KMPoint {
    use crate::algebra::{int, rat};
    KMPoint::new(vec![int(2), rat(1, 2), int(1), int(1), int(1)]).expect("product is 1")
}

/// Largest difference between flowing `X_y` then `X_{y'}` and the reverse
/// order, each for time `t`.
pub fn commutator_defect(flavor: Flavor, x0: &[f64], y: f64, y2: f64, t: f64, steps: usize) -> f64 {
    let make = |y: f64| {
        if flavor.is_prym() {
            Flow::Prym { flavor, y }
        } else {
            Flow::Mumford { flavor, y }
        }
    };
    let (f, g) = (make(y), make(y2));
    let fg = endpoint(&g, &endpoint(&f, x0, t, steps), t, steps);
    let gf = endpoint(&f, &endpoint(&g, x0, t, steps), t, steps);
    dist(&fg, &gf)
}

/// Exact rationals to floats.
pub fn to_floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}
