use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, int, pow, Rational, Ring};

/// Sparse multivariate Laurent polynomial over the rationals.
///
/// Variables are addressed by index. A monomial is stored as its exponent
/// vector with trailing zeros stripped, so equal monomials have equal keys.
/// Negative exponents are allowed; they are used for the spectral parameter
/// `h` of the Toda Lax operator.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<i32>, Rational>,
}

fn trimmed(mut e: Vec<i32>) -> Vec<i32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exponents(a: &[i32], b: &[i32]) -> Vec<i32> {
    let n = a.len().max(b.len());
    trimmed(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

impl MPoly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { terms }
    }

    pub fn var(index: usize) -> Self {
        Self::monomial(int(1), index, 1)
    }

    /// `c * x_index^exp`
    pub fn monomial(c: Rational, index: usize, exp: i32) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = exp;
        Self::from_term(trimmed(e), c)
    }

    fn from_term(e: Vec<i32>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trimmed(e), c);
        }
        MPoly { terms }
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(int(0)),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// One past the largest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MPoly::default();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(MPoly::constant(int(1)), |acc, _| &acc * self)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            let k = e.get(var).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(trimmed(e2), c * int(k as i64));
        }
        out
    }

    /// Evaluates every variable. Variables beyond `values.len()` must not
    /// occur.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = int(0);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    let v = values.get(i).unwrap_or_else(|| {
                        panic!("variable {i} has no value ({} supplied)", values.len())
                    });
                    t *= pow(v, k);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = super::to_f64(c);
                for (i, &k) in e.iter().enumerate() {
                    if k != 0 {
                        t *= values[i].powi(k);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes the given variables by rationals, leaving the rest
    /// symbolic.
    pub fn partial_eval(&self, values: &BTreeMap<usize, Rational>) -> Self {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut e2 = e.clone();
            for (&i, v) in values {
                if let Some(k) = e2.get_mut(i) {
                    if *k != 0 {
                        t *= pow(v, *k);
                        *k = 0;
                    }
                }
            }
            out.add_term(trimmed(e2), t);
        }
        out
    }

    /// Substitutes `x_var -> replacement` (nonnegative exponents only).
    pub fn subs(&self, var: usize, replacement: &MPoly) -> Self {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            let k = e.get(var).copied().unwrap_or(0);
            assert!(k >= 0, "cannot substitute into a negative power");
            let mut e2 = e.clone();
            if let Some(slot) = e2.get_mut(var) {
                *slot = 0;
            }
            let rest = MPoly::from_term(trimmed(e2), c.clone());
            out = &out + &(&rest * &replacement.pow(k as u32));
        }
        out
    }

    /// Multiplies each variable `i` by `factors[i]` (a diagonal change
    /// of coordinates); variables past the slice are left alone.
    pub fn rescale_vars(&self, factors: &[Rational]) -> Self {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    if let Some(f) = factors.get(i) {
                        t *= pow(f, k);
                    }
                }
            }
            out.add_term(e.clone(), t);
        }
        out
    }

    /// Renames variable `i` to `map[i]`. Variables past the map must not
    /// occur.
    pub fn remap_vars(&self, map: &[usize]) -> Self {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            let width = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, _)| map[i] + 1)
                .max()
                .unwrap_or(0);
            let mut e2 = vec![0; width];
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    e2[map[i]] += k;
                }
            }
            out.add_term(trimmed(e2), c.clone());
        }
        out
    }

    pub fn max_degree_in(&self, var: usize) -> Option<i32> {
        self.terms
            .keys()
            .map(|e| e.get(var).copied().unwrap_or(0))
            .max()
    }

    pub fn min_degree_in(&self, var: usize) -> Option<i32> {
        self.terms
            .keys()
            .map(|e| e.get(var).copied().unwrap_or(0))
            .min()
    }

    /// The coefficient of `x_var^exp`, as a polynomial in the other variables.
    pub fn coeff_in(&self, var: usize, exp: i32) -> Self {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            if e.get(var).copied().unwrap_or(0) == exp {
                let mut e2 = e.clone();
                if let Some(slot) = e2.get_mut(var) {
                    *slot = 0;
                }
                out.add_term(trimmed(e2), c.clone());
            }
        }
        out
    }

    /// True when no variable with index `>= first` occurs.
    pub fn only_vars_below(&self, first: usize) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().skip(first).all(|&k| k == 0))
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e.get(var).is_some_and(|&k| k != 0))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MPoly {
    /// Renders with the given variable names, e.g. `x3 - x0` as `w1 - u0`.
    /// Variables past the end of `names` fall back to `x{i}`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    let v = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        v
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let neg = c.is_negative();
            let mag = format_rational(&c.abs());
            let body = match (mono.is_empty(), mag.as_str()) {
                (true, _) => mag,
                (false, "1") => mono.join("*"),
                (false, _) => format!("{mag}*{}", mono.join("*")),
            };
            match (n, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exponents(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(mut self, rhs: MPoly) -> MPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        MPoly::constant(int(1))
    }
}

impl Ring for MPoly {
    fn from_rational(q: &Rational) -> Self {
        MPoly::constant(q.clone())
    }
}
