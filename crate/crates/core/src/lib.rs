//! Exact computation with differential Perm-algebras, left-symmetric
//! dialgebras and the speciality criterion for SLS-algebras.

pub mod algebra;
pub mod certificate;
pub mod cli;
pub mod cur;
pub mod diffperm;
pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod identity;
pub mod lincomb;
pub mod linalg;
pub mod replicate;
pub mod scalar;
pub mod speciality;
pub mod term;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use scalar::Scalar;
