//! Density laboratory for finite point sets on the torus `𝕋^d = ℝ^d/ℤ^d`.
//!
//! Given a finite set `Y`, the crate searches for a dilation (a scalar, a
//! polynomial integer matrix `A(n)`, or an element of a finitely generated
//! matrix semigroup) whose image is ε-dense, and certifies the answer.
//! Alongside the search engines it carries the exact ingredients used to
//! reason about such dilations: exponential-sum certificates, Smith normal
//! form with the gcd-bound factorization, Cayley-ball affine spans, complete
//! and Weyl sums, and Fourier coefficients of random walks.

pub mod cayley;
pub mod error;
pub mod experiments;
pub mod expsum;
pub mod intlinalg;
pub mod io;
pub mod matrix;
mod par;
pub mod polymat;
pub mod sampling;
pub mod search;
pub mod torus;
pub mod walk;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use torus::{is_eps_dense, DensityStatus, DensityVerdict, Mode, TorusPoint, TorusPointSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
