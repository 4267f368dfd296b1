use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use kmprym::acceptance;
use kmprym::algebra::{format_rational, parse_rational, QPoly, Rational};
use kmprym::casefive::{
    balance_to_divisor, divisor_points_5, find_fiber_point, gamma_point, hyperelliptic_genus, incidence,
    principal_balance_5, quotient_curves, spectral_polynomial,
};
use kmprym::morphism::{phi, phi_inverse_at, quad_mumford_structure, PhiImage};
use kmprym::mumford::{mumford_structure, Flavor, MumfordTriple};
use kmprym::numerics::{integrate, mumford_state, toda_state, Flow, SystemTag};
use kmprym::painleve::{indicial_solutions, kowalevski, laurent_balance, sigma_enum, Balance};
use kmprym::poisson::PoissonStructure;
use kmprym::prym::reduced_structure;
use kmprym::random::seeded;
use kmprym::toda_km::{random_km, random_toda, toda_pencil, toda_structure, BracketKind, TodaPoint};
use kmprym::Error;

const EXIT_INVARIANT: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "kmprym", version, about = "Mumford, Prym, Toda and KM systems in exact arithmetic")]
struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subsets of Z/n whose maximal cyclic runs all have even length.
    Sigma { n: usize },
    /// Solutions of the indicial equation (Sigma_n minus the full even circle).
    Indicial { n: usize },
    /// Kowalevski matrix spectrum of the balance indexed by A.
    Kowalevski {
        n: usize,
        #[arg(long = "A", value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
    },
    /// Laurent solution of the KM lattice through a given order.
    Balance {
        n: usize,
        #[arg(long = "A", value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
        /// JSON object mapping free slots (`a{i}_{k}`) to rationals.
        #[arg(long, default_value = "{}")]
        params: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Image of a Toda point under Phi_m.
    Phi {
        /// Inline JSON or a file path.
        #[arg(long)]
        point: String,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Reconstruct the Toda point from a triple.
    PhiInverse {
        /// Inline JSON `{"u","v","w"}` (optionally `m`, `p`) or a file path.
        #[arg(long)]
        triple: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Symbolic bracket table of a phase space.
    Bracket {
        /// odd-mumford-G, even-mumford-G, odd-prym-N, even-prym-N, toda-N,
        /// km-N or quad-mumford-G.
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "1")]
        phi: String,
        /// Evaluate at these coordinates (comma-separated rationals).
        #[arg(long)]
        at: Option<String>,
    },
    /// RK4 integration with conservation monitoring.
    Flow {
        #[arg(long)]
        system: SystemTag,
        /// Inline JSON or a file path. Mumford and Prym points carry their flavor.
        #[arg(long)]
        point: String,
        /// Hierarchy index for toda.
        #[arg(long, default_value_t = 2)]
        i: usize,
        /// Lax parameter for mumford and prym.
        #[arg(long, default_value = "0")]
        y: String,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Also write the trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The n = 5 report on the fiber (k, l).
    Example5 {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        /// A point (beta, delta) of the fiber for the balance limits;
        /// searched for when omitted.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
    },
    /// A seeded random point.
    Sample {
        #[arg(long)]
        system: SystemTag,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        bound: i64,
    },
    /// Run acceptance criteria: `all`, a number, or a name.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Whether the run succeeded; failed checks exit with 2 after the artifact
/// is written.
struct Artifact {
    body: Value,
    ok: bool,
}

fn ok(body: Value) -> Result<Artifact, Error> {
    Ok(Artifact { body, ok: true })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            diagnose("usage", &e.to_string(), None);
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let out = cli.out.clone();
    match dispatch(cli) {
        Ok(art) => {
            let text = serde_json::to_string_pretty(&art.body).expect("json") + "\n";
            if let Err(e) = emit(out.as_ref(), &text) {
                diagnose("io", &e.to_string(), None);
                return ExitCode::from(EXIT_INPUT);
            }
            if art.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INVARIANT)
            }
        }
        Err(e) => {
            let invariant = match &e {
                Error::Invariant { name, .. } => Some(name.as_str()),
                _ => None,
            };
            diagnose(kind(&e), &e.to_string(), invariant);
            ExitCode::from(if e.is_input_error() { EXIT_INPUT } else { EXIT_INVARIANT })
        }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Arithmetic(_) => "arithmetic",
        Error::Domain(_) => "domain",
        Error::Invariant { .. } => "invariant",
        Error::Inconsistent(_) => "inconsistent",
        Error::NotInImage(_) => "not-in-image",
        Error::Resonance { .. } => "resonance",
    }
}

fn diagnose(kind: &str, message: &str, invariant: Option<&str>) {
    let v = json!({ "error": kind, "invariant": invariant, "message": message.trim() });
    eprintln!("{}", serde_json::to_string(&v).expect("json"));
}

fn emit(out: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn read_json(arg: &str) -> Result<Value, Error> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn rationals(text: &str) -> Result<Vec<Rational>, Error> {
    text.split(',').map(parse_rational).collect()
}

fn dispatch(cli: Cli) -> Result<Artifact, Error> {
    match cli.command {
        Command::Sigma { n } => {
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            ok(json!(sigma_enum(n)))
        }
        Command::Indicial { n } => {
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            ok(Value::Array(indicial_solutions(n).iter().map(balance_json).collect()))
        }
        Command::Kowalevski { n, set } => ok(kowalevski(n, &set)?.to_json()),
        Command::Balance { n, set, params, order } => {
            let raw: BTreeMap<String, Value> =
                serde_json::from_str(&params).map_err(|e| Error::Parse(format!("--params: {e}")))?;
            let mut free = BTreeMap::new();
            for (k, v) in raw {
                let text = match v {
                    Value::String(s) => s,
                    Value::Number(x) => x.to_string(),
                    _ => return Err(Error::Parse(format!("--params: `{k}` must be a rational"))),
                };
                free.insert(k, parse_rational(&text)?);
            }
            let b = Balance::new(n, &set)?;
            ok(laurent_balance(&b, &free, order)?.to_json())
        }
        Command::Phi { point, m } => {
            let p = TodaPoint::from_json(&read_json(&point)?)?;
            ok(phi(&p, m.unwrap_or(p.n()))?.to_json())
        }
        Command::PhiInverse { triple, n, m } => {
            let img = PhiImage::from_json(&read_json(&triple)?)?;
            if img.n() != n {
                return Err(Error::Domain(format!("deg u = {} does not match n = {n}", img.n() - 1)));
            }
            let m = m.unwrap_or(img.m);
            ok(phi_inverse_at(&img.triple, n, m)?.to_json())
        }
        Command::Bracket { space, phi, at } => bracket(&space, &QPoly::parse(&phi)?, at.as_deref()),
        Command::Flow { system, point, i, y, t, step, every, csv } => {
            flow(system, &read_json(&point)?, i, &y, t, step, every, csv)
        }
        Command::Example5 { k, l, beta, delta } => example5(&k, &l, beta.as_deref(), delta.as_deref()),
        Command::Sample { system, n, bound } => {
            let mut rng = seeded(cli.seed);
            match system {
                SystemTag::Km => ok(random_km(&mut rng, n, bound).to_toda().to_json()),
                SystemTag::Toda => ok(random_toda(&mut rng, n, bound).to_json()),
                _ => Err(Error::Domain("sample supports km and toda".into())),
            }
        }
        Command::Verify { suite } => {
            let ids: Vec<usize> = if suite == "all" {
                (1..=acceptance::CRITERIA.len()).collect()
            } else {
                vec![acceptance::lookup(&suite).ok_or_else(|| Error::Domain(format!("unknown suite `{suite}`")))?]
            };
            let outcomes: Vec<_> = ids.into_iter().filter_map(acceptance::run).collect();
            let passed = outcomes.iter().all(|o| o.passed);
            Ok(Artifact {
                body: json!({ "passed": passed, "criteria": outcomes }),
                ok: passed,
            })
        }
    }
}

fn balance_json(b: &Balance) -> Value {
    json!({
        "A": b.set(),
        "alpha": b.alpha().iter().map(format_rational).collect::<Vec<_>>(),
        "r": b.r(),
        "order": b.order(),
        "principal": b.is_principal(),
    })
}

fn parse_space(space: &str) -> Result<(&str, usize), Error> {
    let bad = || Error::Parse(format!("unknown space `{space}`"));
    let (kind, k) = space.rsplit_once('-').ok_or_else(bad)?;
    Ok((kind, k.parse().map_err(|_| bad())?))
}

fn structure(space: &str, phi: &QPoly) -> Result<PoissonStructure, Error> {
    let (kind, k) = parse_space(space)?;
    match kind {
        "toda" => toda_pencil(k, phi),
        "km" => Ok(toda_structure(BracketKind::Km, k)),
        "quad-mumford" => quad_mumford_structure(k, phi),
        _ => {
            let flavor: Flavor = space.parse()?;
            if flavor.is_prym() {
                reduced_structure(flavor, phi)
            } else {
                mumford_structure(flavor, phi)
            }
        }
    }
}

fn bracket(space: &str, phi: &QPoly, at: Option<&str>) -> Result<Artifact, Error> {
    let s = structure(space, phi)?;
    let entries: Vec<Vec<String>> = (0..s.dim())
        .map(|i| (0..s.dim()).map(|j| s.entry(i, j).render(s.names())).collect())
        .collect();
    let jacobi = s.satisfies_jacobi();
    let mut v = json!({
        "space": space,
        "phi": phi.to_text(),
        "names": s.names(),
        "entries": entries,
        "jacobi": jacobi,
    });
    if let Some(at) = at {
        let point = rationals(at)?;
        if point.len() != s.dim() {
            return Err(Error::Domain(format!("{space} has {} coordinates, got {}", s.dim(), point.len())));
        }
        let t = s.at(&point);
        v["at"] = json!({ "rank": t.rank(), "table": t });
    }
    Ok(Artifact { body: v, ok: jacobi })
}

#[allow(clippy::too_many_arguments)]
fn flow(
    system: SystemTag,
    point: &Value,
    i: usize,
    y: &str,
    t: f64,
    step: f64,
    every: usize,
    csv: Option<PathBuf>,
) -> Result<Artifact, Error> {
    let y = kmprym::algebra::to_f64(&parse_rational(y)?);
    let (flow, x0) = match system {
        SystemTag::Km | SystemTag::Toda => {
            let p = TodaPoint::from_json(point)?;
            if system == SystemTag::Km {
                if !p.is_km() {
                    return Err(Error::invariant("km-point", "b must vanish for the KM lattice"));
                }
                (Flow::Km { n: p.n() }, toda_state(&p)[..p.n()].to_vec())
            } else {
                (Flow::Toda { n: p.n(), i }, toda_state(&p))
            }
        }
        SystemTag::Mumford | SystemTag::Prym => {
            let p: MumfordTriple = serde_json::from_value(point.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if p.flavor.is_prym() != (system == SystemTag::Prym) {
                return Err(Error::Domain(format!("flavor {} does not match system {system}", p.flavor)));
            }
            let f = if system == SystemTag::Prym {
                Flow::Prym { flavor: p.flavor, y }
            } else {
                Flow::Mumford { flavor: p.flavor, y }
            };
            (f, mumford_state(&p))
        }
    };
    let traj = integrate(&flow, x0, t, step, every)?;
    if let Some(path) = csv {
        let file = fs::File::create(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        traj.write_csv(file)?;
    }
    ok(traj.drift_summary())
}

fn example5(k: &str, l: &str, beta: Option<&str>, delta: Option<&str>) -> Result<Artifact, Error> {
    let (k, l) = (parse_rational(k)?, parse_rational(l)?);
    let f = spectral_polynomial(&k, &l);
    let (g1, g2) = quotient_curves(&f, true)?;
    let points: Vec<String> = divisor_points_5(&k).iter().map(|p| p.to_string()).collect();
    let inc = incidence(&k, &l)?;
    let mut all_ok = inc.unmatched.is_empty();
    let fiber_point = match (beta, delta) {
        (Some(b), Some(d)) => Some((parse_rational(b)?, parse_rational(d)?)),
        (None, None) => find_fiber_point(&k, &l, 12),
        _ => return Err(Error::Domain("give both --beta and --delta or neither".into())),
    };
    let limits = match &fiber_point {
        None => json!({ "skipped": "no rational (beta, delta) of small height on this fiber" }),
        Some((b, d)) => {
            let curves = (1..=5).map(|i| gamma_point(i, &k, &l, b, d)).collect::<Result<Vec<_>, _>>()?;
            let mut verdicts = Vec::new();
            for s in 0..5 {
                let lim = balance_to_divisor(&principal_balance_5(s, &k, b, d, 8)?)?;
                let hits: Vec<usize> = (0..5).filter(|&i| curves[i] == lim).map(|i| i + 1).collect();
                let good = hits == [s + 1];
                all_ok &= good;
                verdicts.push(json!({ "shift": s, "limit": lim.to_string(), "on_curves": hits, "ok": good }));
            }
            json!({ "beta": format_rational(b), "delta": format_rational(d), "verdicts": verdicts })
        }
    };
    let v = json!({
        "K": format_rational(&k),
        "L": format_rational(&l),
        "spectral_curve": f.to_text(),
        "genus": hyperelliptic_genus(&f),
        "quotient_curves": { "gamma": g1.to_text(), "gamma_tau": g2.to_text() },
        "points": points,
        "incidence": inc.matrix,
        "charts": inc.charts,
        "unmatched": inc.unmatched.iter().map(|(i, c, p)| json!({ "curve": i, "chart": c, "limit": p.to_string() })).collect::<Vec<_>>(),
        "balance_limits": limits,
    });
    Ok(Artifact { body: v, ok: all_ok })
}
