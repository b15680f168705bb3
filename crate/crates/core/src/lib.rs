//! Computing with sum-free, inverse-closed subsets of finite fields.
//!
//! The crate provides:
//!
//! - exact arithmetic contexts for F_p and GF(2^n), including multiplicative
//!   inverses and the trace map ([`field`]);
//! - subset predicates (sum-free, inverse-closed), the inverse-intersection
//!   ratio, and the two explicit constructions that realize density 1/4 in
//!   characteristic 2 and 1/9 in prime order ([`subsets`]);
//! - Fourier spectra of indicator functions with a suite of identity and
//!   inequality diagnostics, plus Kloosterman sums in both characteristics
//!   with their square-root bounds ([`spectrum`]);
//! - exhaustive and heuristic searches for the largest sum-free and
//!   sum-free inverse-closed densities ([`search`]);
//! - rigorous interval arithmetic and a branch-and-bound verifier that
//!   re-proves every numeric inequality in the density bound's case
//!   analysis ([`interval`]).

pub mod error;
pub mod field;
pub mod interval;
pub mod search;
pub mod spectrum;
pub mod subsets;

pub use error::{Error, Result};

// Re-exported so downstream crates name the same rational type.
pub use num_rational;
