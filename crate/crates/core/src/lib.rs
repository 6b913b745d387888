//! Exact rational toolkit for strengthening linear inequalities against
//! lattice-closed point sets: polyhedral primitives (LP, projection, vertex
//! enumeration), set-aware floor and ceiling operators, cut generation and
//! closure rounds, multiplier dominance, and unimodular normal forms.
//!
//! Everything is exact. Coordinates are arbitrary-precision rationals, all
//! certificates are re-verified before they are returned, and every public
//! operation is deterministic: same input, same output, bit for bit.

pub mod dominance;
pub mod error;
pub mod mat;
pub mod mip;
pub mod rat;
pub mod ratpoly;
pub mod scg;
pub mod sets;
pub mod transforms;

pub use error::{Error, Result};
