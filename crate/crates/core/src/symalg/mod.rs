//! Exact-structure algebra in the commuting pair `(ξ, ξ̄)`.
//!
//! Coefficients are `f64` complex numbers; identities are decided by
//! coefficient comparison with a relative tolerance, confirmed pointwise.

pub mod identity;
mod linalg;
mod poly;
mod rational;
pub(crate) mod wide;

pub use identity::{IdentityCheck, IDENTITY_TOL, RESIDUAL_TOL};
pub use linalg::{RationalMatrix, RationalVector};
pub use poly::{ConjPoly, Monomial};
pub use rational::{ConjRational, DIVISION_TOL, POLE_TOL};
