//! Lie algebra bases realized as skew-symmetric matrices.

pub mod classical;
pub mod library;
pub mod rep;
pub mod spin;
pub mod triality;

pub use library::build_rep;
pub use classical::{adjoint, classical_basis, Family};
pub use rep::{direct_sum, exp_map, LinearRepresentation, RepDocument, Summand};
pub use spin::{spin10_halfspin, spin9_rep, HalfSpin};
pub use triality::{g2_basis, spin_subalgebra, triality_lift, TrialityTriple};
