//! Hit-subspace elimination and cohit bases.

pub mod bitrows;
pub mod cohit;
pub mod columns;
pub mod level;
pub mod weight;
pub mod plus;

pub use weight::WeightSpace;
pub use cohit::{echelonize, for_each_subset, CohitBasis, EchelonBasis, Part, Solver, DEFAULT_MAX_COLUMNS};
