//! Orbit geometry, critical sets of height functions and tautness
//! certificates for reducible representations of compact simple Lie groups.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod linalg;
pub mod morse;
pub mod orbit;
pub mod reduction;
pub mod repbuilder;
pub mod sampling;

pub use error::{Error, Result};
