//! Reliable agnostic learning from one-sided polynomial approximations.
//!
//! The crate provides explicit constructions of one-sided approximating
//! polynomials for halfspaces, their disjunctions and conjunctions, and DNF
//! and CNF formulas; exhaustive and LP-based certification; the LP-based
//! positive, negative and fully reliable learners; and a reproducible
//! experiment harness with brute-force optimal baselines.

pub mod certify;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod harness;
pub mod learn;
pub mod lp;
pub mod poly;

pub use error::{Error, Result};
