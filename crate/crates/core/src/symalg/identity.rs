//! Identity testing for rational functions: cross-multiplied coefficients
//! plus confirmation at random sample points. Both must agree.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{RationalMatrix, RationalVector};
use super::rational::ConjRational;
use super::wide::eval_ratio;

/// Coefficient tolerance for an identity between rational functions.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Scalarized residual threshold for matrix identities.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Pointwise agreement tolerance at sample points.
pub const SAMPLE_TOL: f64 = 1e-9;
pub const SAMPLE_COUNT: usize = 20;
const SAMPLE_SEED: u64 = 0x5eed_c0de;

/// Outcome of one identity check; the JSON shape used in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity_name: String,
    pub holds: bool,
    pub residual: f64,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        IdentityCheck {
            identity_name: name.into(),
            holds: residual.is_finite() && residual < tol,
            residual,
        }
    }

    pub fn with_holds(name: impl Into<String>, holds: bool, residual: f64) -> Self {
        IdentityCheck {
            identity_name: name.into(),
            holds,
            residual,
        }
    }
}

/// Deterministic points in the disk `|ξ| ≤ radius`.
pub fn sample_points(count: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, t)
        })
        .collect()
}

pub fn identity_points() -> Vec<Complex64> {
    sample_points(SAMPLE_COUNT, 2.0, SAMPLE_SEED)
}

fn gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

/// Largest relative pointwise gap over the identity sample points, poles
/// skipped. Values come from [`eval_ratio`], so they test the stored
/// coefficients rather than `f64` cancellation at high degree.
fn pointwise_gap<T, F>(eval: F) -> f64
where
    F: Fn(Complex64) -> Option<T>,
    T: IntoIterator<Item = (Complex64, Complex64)>,
{
    identity_points()
        .into_iter()
        .filter_map(eval)
        .flat_map(|pairs| pairs.into_iter().map(|(x, y)| gap(x, y)))
        .fold(0.0, f64::max)
}

/// Combines the coefficient residual with the sample-point confirmation: a
/// pointwise gap above [`SAMPLE_TOL`] overrides a small coefficient residual.
pub(crate) fn combine(coeff: f64, pointwise: f64) -> f64 {
    if pointwise > SAMPLE_TOL {
        coeff.max(pointwise)
    } else {
        coeff
    }
}

fn pairs(
    a: Option<Vec<Complex64>>,
    b: Option<Vec<Complex64>>,
) -> Option<Vec<(Complex64, Complex64)>> {
    Some(a?.into_iter().zip(b?).collect())
}

/// Residual of the identity `a ≡ b`.
pub fn scalar_residual(a: &ConjRational, b: &ConjRational) -> f64 {
    let pw = pointwise_gap(|z| {
        pairs(
            eval_ratio([a.num()], a.den(), z),
            eval_ratio([b.num()], b.den(), z),
        )
    });
    combine(a.rel_distance(b), pw)
}

pub fn scalars_identical(a: &ConjRational, b: &ConjRational) -> bool {
    scalar_residual(a, b) < IDENTITY_TOL
}

pub fn vector_residual(a: &RationalVector, b: &RationalVector) -> f64 {
    let pw = pointwise_gap(|z| {
        pairs(
            eval_ratio(a.nums(), a.den(), z),
            eval_ratio(b.nums(), b.den(), z),
        )
    });
    combine(a.rel_distance(b), pw)
}

pub fn matrix_residual(a: &RationalMatrix, b: &RationalMatrix) -> f64 {
    let pw = pointwise_gap(|z| {
        pairs(
            eval_ratio(a.nums(), a.den(), z),
            eval_ratio(b.nums(), b.den(), z),
        )
    });
    combine(a.rel_distance(b), pw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::ConjPoly;

    #[test]
    fn points_are_deterministic_and_bounded() {
        let a = sample_points(50, 3.0, 7);
        assert_eq!(a, sample_points(50, 3.0, 7));
        assert!(a.iter().all(|z| z.norm() <= 3.0));
    }

    #[test]
    fn detects_mismatch() {
        let a = ConjRational::from_poly(ConjPoly::xi());
        let b = ConjRational::from_poly(ConjPoly::xi_bar());
        assert!(!scalars_identical(&a, &b));
        assert!(scalars_identical(&a, &a));
    }
}
