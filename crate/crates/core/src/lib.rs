//! Harmonic maps of the Riemann sphere into `CP^{N−1}` and Grassmannians,
//! their orthogonal projectors, and the surfaces those projectors trace in
//! `R^{N²−1}`.
//!
//! The algebra layer ([`symalg`]) carries every field as a rational function
//! of `ξ` and `ξ̄`. On top of it:
//!
//! - [`harmonic`] builds holomorphic inputs and the `P₊` tower;
//! - [`projector`] forms rank-1 projectors and their sums and checks their identities;
//! - [`surface`] maps projectors to coordinates and integrates the surface 1-form;
//! - [`geometry`] computes the induced metric and Gaussian curvature.

pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod projector;
pub mod surface;
pub mod symalg;

pub use error::{Error, Result};
pub use harmonic::{tower, veronese, HoloVector, MixedSolution, Tower};
pub use projector::{Composition, ProjectorField};
pub use surface::{canonical_chart, SurfaceChart, SurfacePoint};
pub use symalg::{ConjPoly, ConjRational, IdentityCheck, RationalMatrix, RationalVector};

pub use num_complex::Complex64;
