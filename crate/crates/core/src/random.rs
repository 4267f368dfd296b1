//! Seeded sampling of exact rational points.
//!
//! All random points in tests, the CLI and the acceptance suite are drawn
//! through these helpers so a seed fully determines a run.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Rational;

/// Numerator and denominator bound used for random points.
pub const DEFAULT_BOUND: i64 = 100;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `p/q` with `|p| <= bound`, `1 <= q <= bound`.
pub fn rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let r = rational(rng, bound);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

/// Small rationals for symbolic-heavy checks where coefficient growth
/// matters more than range.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rational(rng, 9)
}

pub fn rationals<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, bound)).collect()
}
