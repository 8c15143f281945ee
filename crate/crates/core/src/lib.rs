//! Finite universal algebra engine: term-condition commutators, central
//! extensions, second cohomology of central data, the five-term exact
//! sequence, and Schur multipliers in varieties with a difference term.

pub mod abgroup;
pub mod algebra;
pub mod cohomology;
pub mod commutator;
pub mod congruence;
pub mod error;
pub mod extension;
pub mod report;
pub mod repro;
pub mod schur;
pub mod termlang;

pub use error::{Error, Result};
