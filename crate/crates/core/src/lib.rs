//! Exact-arithmetic and numerical laboratory for the odd/even Mumford
//! systems, hyperelliptic Prym systems, the periodic Toda lattice and the
//! periodic Kac-van Moerbeke (Volterra) lattice.
//!
//! The symbolic layers ([`mumford`], [`prym`], [`toda_km`], [`morphism`])
//! materialize Poisson structures as exact polynomial tables so that the
//! Jacobi identity, Casimirs and Poisson-map properties are checked as
//! polynomial identities. [`painleve`] and [`casefive`] reproduce the
//! Laurent-series analysis of the KM lattice, and [`numerics`] integrates
//! all flows in floating point while monitoring their first integrals.

#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod algebra;
pub mod casefive;
pub mod error;
pub mod morphism;
pub mod mumford;
pub mod numerics;
pub mod painleve;
pub mod poisson;
pub mod prym;
pub mod random;
pub mod toda_km;

pub use error::{Error, Result};
