//! Multivariate polynomials of least deviation from zero.
//!
//! The crate builds the extremal families `R_3`, `R_5` and `T_d` with exact
//! arithmetic, checks their extremal-signature certificates, estimates sup
//! norms over the simplex, ball and sphere, and computes best uniform
//! approximations independently through a discrete minimax LP.

pub mod bestapprox;
pub mod constructions;
pub mod error;
pub mod poly;
pub mod scalar;
pub mod signatures;
pub mod supnorm;
pub mod symfun;

pub use error::{Error, Result};
pub use poly::{Face, FPoly, Monomial, Poly, QPoly};
pub use scalar::{Coeff, Field, Rational};
