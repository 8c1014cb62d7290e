pub mod arith;
pub mod error;
pub mod f2poly;
pub mod glinv;
pub mod hitsolver;
pub mod kameko;
pub mod reductions;
pub mod steenrod;

pub use error::{HitError, Result};
