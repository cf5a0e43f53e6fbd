pub mod clifford;
pub mod hypercomplex;

pub use clifford::{clifford_product, even_iso, CliffordElement, Signature};
pub use hypercomplex::{cd_mul, mul_operator, HypercomplexElement, Level, MultOperator, Side};
