//! Numerical toolkit for exploring universality of the Riemann zeta function
//! in short intervals.
//!
//! The crate is organised around one experiment pipeline: fit a target
//! analytic function on a disc inside the critical strip by a twisted finite
//! Euler product ([`fit`]), search a short window `[T, T + H]` for shifts
//! `tau` whose prime phases align with the fitted angles ([`tausearch`]),
//! and measure how often `zeta(s + i tau)` actually approximates the target
//! ([`density`]). Supporting machinery: prime tables ([`primes`]),
//! Euler–Maclaurin evaluation of `zeta` and a branch-tracked `log zeta`
//! ([`zeta`]), truncated Euler products with split-precision phase reduction
//! ([`euler`], [`phase`]), and empirical verification of the auxiliary
//! mean-square / zero-density inequalities ([`bounds`]).

pub mod bounds;
pub mod dd;
pub mod density;
pub mod error;
pub mod euler;
pub mod expr;
pub mod fit;
pub mod lattice;
pub mod phase;
pub mod primes;
pub mod tausearch;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
