//! Exact and rigorous computation with multivariate linear Mahler systems.

// matrix code indexes several arrays with one counter
#![allow(clippy::needless_range_loop)]

pub mod automata;
pub mod error;
pub mod exact;
pub mod factor;
pub mod lattice;
pub mod orbit;
pub mod probe;
pub mod purity;
pub mod relations;
pub mod system;
pub mod transform;

pub use error::{Error, Result};
