//! Tautness certificates for registered representations.

pub mod catalog;
pub mod certificates;
pub mod registry;
pub mod report;

pub use catalog::{betti_total, poincare_data, Atom, PoincarePoly, SpaceDescriptor};
pub use certificates::{certify, run_case, word_element, RunOptions, TautnessCertificate, Tolerances, DEFAULT_SEED};
pub use registry::{CaseSpec, CertificateKind, Registry, Verdict};
pub use report::{run_all, RunSummary};
