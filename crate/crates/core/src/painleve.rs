//! Painleve analysis of the KM field `a_i' = a_i (a_{i-1} - a_{i+1})`.
//!
//! Laurent solutions have at most simple poles. Their leading coefficients
//! correspond to subsets `A` of `Z/n` whose maximal cyclic runs all have
//! even length; on a run of length `2l` the pattern is
//! `(-l, 1, 1-l, 2, ..., -1, l)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{format_rational, int, to_f64, LaurentSeries, MPoly, Mat, Rational};
use crate::error::Error;

/// A solution of the indicial equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Balance {
    n: usize,
    set: Vec<usize>,
    alpha: Vec<Rational>,
    r: Vec<i64>,
}

impl Balance {
    /// Builds the balance of `A` (1-based, any order).
    pub fn new(n: usize, set: &[usize]) -> Result<Self, Error> {
        let mut mask = vec![false; n];
        for &p in set {
            if p == 0 || p > n {
                return Err(Error::Domain(format!("indices must lie in 1..={n}")));
            }
            mask[p - 1] = true;
        }
        if n.is_multiple_of(2) && mask.iter().all(|&m| m) {
            return Err(Error::Domain(
                "the full circle satisfies the run condition but the indicial equation has no solution".into(),
            ));
        }
        let runs = cyclic_runs(&mask);
        let mut alpha = vec![Rational::zero(); n];
        for &(start, len) in &runs {
            if len % 2 == 1 {
                return Err(Error::Domain(format!(
                    "the run starting at {} has odd length {len}",
                    start + 1
                )));
            }
            let l = (len / 2) as i64;
            for j in 0..len {
                let i = (j / 2) as i64;
                alpha[(start + j) % n] = if j % 2 == 0 { int(i - l) } else { int(i + 1) };
            }
        }
        let r = (0..n)
            .map(|i| {
                let d = &alpha[(i + 1) % n] - &alpha[(i + n - 1) % n];
                d.to_integer().to_i64().expect("small")
            })
            .collect();
        let set = (0..n).filter(|&i| mask[i]).map(|i| i + 1).collect();
        let b = Balance { n, set, alpha, r };
        if !b.indicial_defects().is_empty() {
            return Err(Error::invariant("indicial", "alpha does not solve the indicial equation"));
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `A`, 1-based and sorted.
    pub fn set(&self) -> &[usize] {
        &self.set
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    /// Pole orders, negative for zeros.
    pub fn r(&self) -> &[i64] {
        &self.r
    }

    /// `#A / 2`
    pub fn order(&self) -> usize {
        self.set.len() / 2
    }

    /// Pole order of the whole solution: 1 if anything blows up, else 0.
    pub fn pole_order(&self) -> i64 {
        (!self.set.is_empty()) as i64
    }

    /// Indices `i` (1-based) where `-r alpha_i != alpha_i (alpha_{i-1} - alpha_{i+1})`.
    pub fn indicial_defects(&self) -> Vec<usize> {
        let n = self.n;
        let r = int(self.pole_order());
        (0..n)
            .filter(|&i| {
                let a = &self.alpha;
                -(&r * &a[i]) != &a[i] * (&a[(i + n - 1) % n] - &a[(i + 1) % n])
            })
            .map(|i| i + 1)
            .collect()
    }

    pub fn is_principal(&self) -> bool {
        self.order() == 1
    }
}

/// Maximal cyclic runs of `true` as `(start, length)`, 0-based. The full
/// circle is one run starting at 0.
fn cyclic_runs(mask: &[bool]) -> Vec<(usize, usize)> {
    let n = mask.len();
    if mask.iter().all(|&m| m) {
        return vec![(0, n)];
    }
    let mut out = Vec::new();
    for s in 0..n {
        if mask[s] && !mask[(s + n - 1) % n] {
            let len = (0..n).take_while(|&j| mask[(s + j) % n]).count();
            out.push((s, len));
        }
    }
    out
}

/// True iff every maximal cyclic run of `mask` has even length.
pub fn in_sigma(mask: &[bool]) -> bool {
    cyclic_runs(mask).iter().all(|&(_, len)| len % 2 == 0)
}

fn token_words(len: usize, out: &mut Vec<Vec<bool>>, prefix: &mut Vec<bool>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    prefix.push(false);
    token_words(len, out, prefix);
    prefix.pop();
    if prefix.len() + 2 <= len {
        prefix.extend([true, true]);
        token_words(len, out, prefix);
        prefix.truncate(prefix.len() - 2);
    }
}

/// `Sigma_n` as sorted lists of 1-based indices, ordered by size and then
/// lexicographically.
///
/// Built from the first gap `z`: ones on `[0, z)` and on a suffix of length
/// `s` with `z + s` even, a gap closing the suffix, and a word in the tokens
/// `0`, `11` in between.
pub fn sigma_enum(n: usize) -> Vec<Vec<usize>> {
    let mut masks: Vec<Vec<bool>> = Vec::new();
    if n.is_multiple_of(2) {
        masks.push(vec![true; n]);
    }
    for z in 0..n {
        for s in 0..n - z {
            if (z + s) % 2 == 1 {
                continue;
            }
            let closing = n - s - 1;
            if s > 0 && closing < z {
                continue;
            }
            // positions strictly between the first gap and the closing gap,
            // which may be the same position
            let (lo, hi) = if s > 0 { (z + 1, closing.max(z + 1)) } else { (z + 1, n) };
            let mut words = Vec::new();
            token_words(hi - lo, &mut words, &mut Vec::new());
            for w in words {
                let mut m = vec![false; n];
                m[..z].fill(true);
                m[n - s..].fill(true);
                m[lo..hi].copy_from_slice(&w);
                masks.push(m);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = masks
        .into_iter()
        .map(|m| (0..n).filter(|&i| m[i]).map(|i| i + 1).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out.dedup();
    out
}

/// One balance per element of `Sigma_n`, except the full circle for even
/// `n`, which has no solution.
pub fn indicial_solutions(n: usize) -> Vec<Balance> {
    sigma_enum(n)
        .into_iter()
        .filter(|a| a.len() < n)
        .map(|a| Balance::new(n, &a).expect("members of Sigma_n are admissible"))
        .collect()
}

/// `M_ij = dF_i/da_j (alpha) + delta_ij`.
pub fn kowalevski_matrix(b: &Balance) -> Mat<Rational> {
    let n = b.n;
    let a = &b.alpha;
    Mat::from_fn(n, n, |i, j| {
        let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
        let mut m = Rational::zero();
        if i == j {
            m += &a[prev] - &a[next] + Rational::one();
        }
        if j == prev {
            m += &a[i];
        }
        if j == next {
            m -= &a[i];
        }
        m
    })
}

/// The tridiagonal run block of size `2l`: row `i` carries `alpha_i` below
/// the diagonal and `-alpha_i` above it.
pub fn c_block(l: usize) -> Mat<Rational> {
    let li = l as i64;
    let alpha = |i: usize| {
        let k = (i / 2) as i64;
        if i.is_multiple_of(2) {
            k - li
        } else {
            k + 1
        }
    };
    Mat::from_fn(2 * l, 2 * l, |i, j| {
        if j + 1 == i {
            int(alpha(i))
        } else if j == i + 1 {
            int(-alpha(i))
        } else {
            int(0)
        }
    })
}

/// Eigenvalues `1, -2, 3, ...` of the half block, read off the diagonal of
/// its triangular form in the basis `f_j = (1^{j-1}, ..., l^{j-1})`.
fn half_block_spectrum(c: &Mat<Rational>) -> Result<Vec<i64>, Error> {
    let size = c.rows();
    let l = size / 2;
    // e_1, e_3, ..., e_{2l-1}, e_{2l}, e_{2l-2}, ..., e_2
    let order: Vec<usize> = (0..l).map(|k| 2 * k).chain((0..l).map(|k| 2 * (l - k) - 1)).collect();
    let p = c.select(&order, &order);
    let top: Vec<usize> = (0..l).collect();
    let bottom: Vec<usize> = (l..size).collect();
    let a = p.select(&top, &bottom);
    if !p.select(&top, &top).is_zero() || !p.select(&bottom, &bottom).is_zero() || p.select(&bottom, &top) != a {
        return Err(Error::invariant("c-block", "block is not of the form [[0, A], [A, 0]]"));
    }
    let f = Mat::from_fn(l, l, |k, j| int((k as i64 + 1).pow(j as u32)));
    let t = f.inverse()?.mul(&a.transpose()).mul(&f);
    let mut diag = Vec::with_capacity(l);
    for i in 0..l {
        for j in 0..i {
            if !t.get(i, j).is_zero() {
                return Err(Error::invariant("c-block", "not triangular in the f basis"));
            }
        }
        let d = t.get(i, i);
        if !d.is_integer() {
            return Err(Error::invariant("c-block", "non-integral diagonal"));
        }
        diag.push(d.to_integer().to_i64().expect("small"));
    }
    Ok(diag)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    C,
    D,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub kind: BlockKind,
    /// 1-based indices, in cyclic order.
    pub indices: Vec<usize>,
    pub spectrum: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KowalevskiReport {
    pub balance: Balance,
    pub matrix: Mat<Rational>,
    pub blocks: Vec<Block>,
    /// Sorted multiset.
    pub spectrum: Vec<i64>,
    pub nonneg_count: usize,
    /// Largest normalized residual of the floating generalized-eigenspace
    /// check.
    pub float_residual: f64,
}

impl KowalevskiReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "A": self.balance.set,
            "alpha": self.balance.alpha.iter().map(format_rational).collect::<Vec<_>>(),
            "r": self.balance.r,
            "spectrum": self.spectrum,
            "nonneg_count": self.nonneg_count,
            "blocks": self.blocks,
            "float_residual": self.float_residual,
        })
    }
}

/// Spectrum of the Kowalevski matrix from its block structure, with a
/// floating cross-check.
pub fn kowalevski(n: usize, set: &[usize]) -> Result<KowalevskiReport, Error> {
    let balance = Balance::new(n, set)?;
    let m = kowalevski_matrix(&balance);
    let mask: Vec<bool> = (0..n).map(|i| !balance.alpha[i].is_zero()).collect();
    let mut blocks = Vec::new();
    for &(start, len) in &cyclic_runs(&mask) {
        if len == 0 {
            continue;
        }
        let idx: Vec<usize> = (0..len).map(|j| (start + j) % n).collect();
        let c = m.select(&idx, &idx);
        if c != c_block(len / 2) {
            return Err(Error::invariant("c-block", "run block differs from the model block"));
        }
        // rows of the run only reach the run and the zero indices
        let half = half_block_spectrum(&c)?;
        let mut spec: Vec<i64> = half.iter().flat_map(|&d| [d, -d]).collect();
        spec.sort();
        blocks.push(Block {
            kind: BlockKind::C,
            indices: idx.iter().map(|i| i + 1).collect(),
            spectrum: spec,
        });
    }
    let zero_mask: Vec<bool> = mask.iter().map(|&m| !m).collect();
    for &(start, len) in &cyclic_runs(&zero_mask) {
        let idx: Vec<usize> = (0..len).map(|j| (start + j) % n).collect();
        let mut spec = Vec::new();
        for &i in &idx {
            for j in 0..n {
                if j != i && !m.get(i, j).is_zero() {
                    return Err(Error::invariant("d-block", "zero-alpha row is not diagonal"));
                }
            }
            spec.push(m.get(i, i).to_integer().to_i64().expect("small"));
        }
        blocks.push(Block {
            kind: BlockKind::D,
            indices: idx.iter().map(|i| i + 1).collect(),
            spectrum: spec,
        });
    }
    let mut spectrum: Vec<i64> = blocks.iter().flat_map(|b| b.spectrum.iter().copied()).collect();
    spectrum.sort();
    let nonneg_count = spectrum.iter().filter(|&&e| e >= 0).count();
    let float_residual = float_spectrum_residual(&m, &spectrum);
    Ok(KowalevskiReport {
        balance,
        matrix: m,
        blocks,
        spectrum,
        nonneg_count,
        float_residual,
    })
}

/// For each claimed eigenvalue `e` of multiplicity `k`, the `k` smallest
/// singular values of `(M - e)^k`, relative to its largest one. Robust to
/// defective eigenvalues, unlike a plain eigensolve.
pub fn float_spectrum_residual(m: &Mat<Rational>, spectrum: &[i64]) -> f64 {
    let n = m.rows();
    let dm = DMatrix::from_fn(n, n, |i, j| to_f64(m.get(i, j)));
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for &e in spectrum {
        *mult.entry(e).or_default() += 1;
    }
    let mut worst: f64 = 0.0;
    for (&e, &k) in &mult {
        let shifted = &dm - DMatrix::identity(n, n) * e as f64;
        let mut pw = DMatrix::identity(n, n);
        for _ in 0..k {
            pw = &pw * &shifted;
        }
        let mut sv: Vec<f64> = pw.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let scale = sv.last().copied().unwrap_or(1.0).max(1.0);
        for s in &sv[..k] {
            worst = worst.max(s / scale);
        }
    }
    let trace: f64 = (0..n).map(|i| dm[(i, i)]).sum();
    let sum: f64 = spectrum.iter().map(|&e| e as f64).sum();
    worst.max((trace - sum).abs())
}

/// Name of the free coefficient `a_i^{(k)}` (coefficient of `t^{k-1}`).
pub fn param_name(i: usize, k: usize) -> String {
    format!("a{i}_{k}")
}

/// Coefficients `c[k][i]` of a formal solution `a_i = sum_k c[k][i] t^{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSolution {
    pub balance: Balance,
    pub coeffs: Vec<Vec<Rational>>,
    /// Free coefficients in the order they were met.
    pub free: Vec<String>,
}

impl LaurentSolution {
    /// Number of computed orders past the leading one.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn series(&self) -> Vec<LaurentSeries> {
        let top = self.order() as i32 - 1;
        (0..self.balance.n)
            .map(|i| LaurentSeries::new(-1, self.coeffs.iter().map(|c| c[i].clone()).collect(), top))
            .collect()
    }

    /// Coefficient of `t^e` in `a_i` (1-based `i`).
    pub fn coeff(&self, i: usize, e: i32) -> Rational {
        self.coeffs[(e + 1) as usize][i - 1].clone()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let series: Vec<Vec<String>> = (0..self.balance.n)
            .map(|i| self.coeffs.iter().map(|c| format_rational(&c[i])).collect())
            .collect();
        serde_json::json!({
            "A": self.balance.set,
            "start": -1,
            "order": self.order(),
            "free": self.free,
            "coefficients": series,
        })
    }
}

/// Names of the free coefficients of a balance up to order `order`.
pub fn free_parameter_slots(balance: &Balance, order: usize) -> Result<Vec<String>, Error> {
    let m = kowalevski_matrix(balance);
    let mut out = Vec::new();
    for k in 1..=order {
        let (_, pivots) = shifted(&m, k).rref();
        for j in 0..balance.n {
            if !pivots.contains(&j) {
                out.push(param_name(j + 1, k));
            }
        }
    }
    Ok(out)
}

fn shifted(m: &Mat<Rational>, k: usize) -> Mat<Rational> {
    m.sub(&Mat::identity(m.rows()).scale(&int(k as i64)))
}

/// Solves `(M - k) c^k = -Q_k` order by order, where `Q_k` collects the
/// quadratic terms of lower orders. Free coefficients at resonances are the
/// non-pivot columns of the reduced system and are read from `free`.
pub fn laurent_balance(
    balance: &Balance,
    free: &BTreeMap<String, Rational>,
    order: usize,
) -> Result<LaurentSolution, Error> {
    let n = balance.n;
    let m = kowalevski_matrix(balance);
    let mut c: Vec<Vec<Rational>> = vec![balance.alpha.clone()];
    let mut used = Vec::new();
    for k in 1..=order {
        let q: Vec<Rational> = (0..n)
            .map(|i| {
                let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
                let mut s = Rational::zero();
                for p in 1..k {
                    s += &c[p][i] * (&c[k - p][prev] - &c[k - p][next]);
                }
                -s
            })
            .collect();
        let mk = shifted(&m, k);
        let (_, pivots) = mk.rref();
        let fixed: Vec<(usize, Rational)> = (0..n)
            .filter(|j| !pivots.contains(j))
            .map(|j| {
                let name = param_name(j + 1, k);
                let v = free.get(&name).cloned().ok_or_else(|| {
                    Error::Domain(format!("resonance at k = {k} needs the free coefficient {name}"))
                })?;
                used.push(name);
                Ok((j, v))
            })
            .collect::<Result<_, Error>>()?;
        let ck = mk.solve_with_fixed(&q, &fixed).map_err(|e| Error::Resonance {
            k,
            detail: e.to_string(),
        })?;
        c.push(ck);
    }
    if let Some(extra) = free.keys().find(|name| !used.contains(name)) {
        return Err(Error::Domain(format!("{extra} is not a free coefficient of this balance")));
    }
    Ok(LaurentSolution {
        balance: balance.clone(),
        coeffs: c,
        free: used,
    })
}

/// `a_i' - a_i (a_{i-1} - a_{i+1})` on truncated series.
pub fn km_residual(series: &[LaurentSeries]) -> Vec<LaurentSeries> {
    let n = series.len();
    (0..n)
        .map(|i| {
            let rhs = series[i].mul(&series[(i + n - 1) % n].sub(&series[(i + 1) % n]));
            series[i].derivative().sub(&rhs)
        })
        .collect()
}

/// Evaluates a polynomial in `a_1..a_n` on series.
pub fn eval_on_series(f: &MPoly, series: &[LaurentSeries]) -> LaurentSeries {
    let top = series.iter().map(|s| s.order()).max().unwrap_or(0);
    let mut acc: Option<LaurentSeries> = None;
    for (exps, c) in f.terms() {
        let mut term = LaurentSeries::constant(c.clone(), top);
        for (v, &e) in exps.iter().enumerate() {
            if e < 0 {
                let inv = series[v].inverse().expect("nonzero series");
                term = term.mul(&inv.pow(e.unsigned_abs()));
            } else if e > 0 {
                term = term.mul(&series[v].pow(e as u32));
            }
        }
        acc = Some(match acc {
            Some(a) => a.add(&term),
            None => term,
        });
    }
    acc.unwrap_or_else(|| LaurentSeries::zero(top))
}

/// True when every known coefficient of a nonzero power of `t` vanishes.
pub fn is_constant_series(s: &LaurentSeries) -> bool {
    s.known_terms().all(|(e, c)| e == 0 || c.is_zero())
}

/// `|rational|` as an `f64`, for reporting.
pub fn magnitude(q: &Rational) -> f64 {
    to_f64(&q.abs())
}
