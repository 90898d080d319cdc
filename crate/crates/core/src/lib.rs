//! Tensor calculus of real hypersurfaces in the complex projective and
//! complex hyperbolic planes: the structure Jacobi operator, its
//! pseudo-parallelism defect, admissible values of `L`, and a checker for
//! derivation scripts built on formal jets.

pub mod classify;
pub mod curvature;
pub mod derive;
pub mod error;
pub mod exact;
pub mod frame;
pub mod sweep;

pub use error::Error;
