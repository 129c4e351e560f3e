//! Rank-refined enumeration of 102-avoiding inversion sequences.
//!
//! The crate provides inversion sequences and pattern containment, UVD,
//! 2-Schröder and Dyck paths, labeled F-paths, the bijections between them,
//! closed-form counting formulas, truncated power series identities and a
//! conformance harness that checks formulas and maps against brute force.

pub mod bijection;
pub mod error;
pub mod exec;
pub mod formula;
pub mod fpath;
pub mod harness;
pub mod paths;
pub mod sequence;
pub mod series;

pub use error::{Error, Result};
pub use exec::Exec;
pub use sequence::{InversionSequence, Pattern};
