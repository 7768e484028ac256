//! Dense complex linear algebra, Hermitian eigensolver, tensor products and
//! reproducible Gaussian streams.

pub mod constants;
pub mod eig;
pub mod mat2;
pub mod matrix;
pub mod rng;

pub use eig::{hermitian_eig, EigenDecomposition};
pub use mat2::Mat2;
pub use matrix::{kron, ComplexMatrix};
pub use rng::RngStream;
