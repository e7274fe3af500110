//! Exact scalars and sparse linear algebra over Q and F_p.

mod scalar;
mod sparse;

pub use scalar::{Field, Scalar, PRIME_LIMIT};
pub use sparse::{kernel_basis, rank, solve_in_image, Echelon, ImageSolver, SparseMatrix, SparseVec};
