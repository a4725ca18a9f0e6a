//! Exact linear algebra over a [`Field`](crate::field::Field).

mod mat;
mod poly;
mod subspace;

pub use mat::{Mat, Rref};
pub use poly::Poly;
pub use subspace::{Quotient, Subspace};
