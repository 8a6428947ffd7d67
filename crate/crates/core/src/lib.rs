//! Exact computation with skew-symmetric cluster algebras (trivial
//! coefficients): Laurent arithmetic, quiver and seed mutation, exchange
//! graphs, the unpunctured disk and annulus models with flips, skein
//! resolution and bracelets, and checks of unistructurality on finite
//! instances.

pub mod cli;
pub mod laurent;
pub mod linalg;
pub mod quiver;
pub mod seeds;
pub mod surface;
pub mod verify;

pub use laurent::{LaurentError, LaurentPolynomial, Monomial};
pub use quiver::{Quiver, QuiverError};
