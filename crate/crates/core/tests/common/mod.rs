//! Reference matrices and inputs shared by the integration tests.
#![allow(dead_code)]

use sigmasurf::symalg::identity::matrix_residual;
use sigmasurf::{Complex64, ConjPoly, ConjRational, HoloVector, ProjectorField, RationalMatrix};

fn re(c: f64) -> ConjPoly {
    ConjPoly::real(c)
}

fn x() -> ConjPoly {
    ConjPoly::mod_sq()
}

fn z() -> ConjPoly {
    ConjPoly::xi()
}

fn zb() -> ConjPoly {
    ConjPoly::xi_bar()
}

fn one_minus_x() -> ConjPoly {
    &re(1.0) - &x()
}

/// Numerator of the `CP²` projector `P₁` as usually printed, up to normalization.
/// `printed_13` is the sign in front of the `(1,3)` entry `4 ξ̄²`.
pub fn cp2_p1(printed_13: f64) -> Vec<ConjPoly> {
    let s2 = 2f64.sqrt();
    let w = one_minus_x();
    vec![
        x().scale_real(4.0),
        (&zb() * &w).scale_real(-2.0 * s2),
        zb().pow(2).scale_real(4.0 * printed_13),
        (&z() * &w).scale_real(-2.0 * s2),
        w.pow(2).scale_real(2.0),
        (&zb() * &w).scale_real(2.0 * s2),
        z().pow(2).scale_real(-4.0),
        (&z() * &w).scale_real(2.0 * s2),
        x().scale_real(4.0),
    ]
}

/// Numerator of the `CP³` sum `P₁ + P₂`, up to normalization.
pub fn cp3_p1_p2() -> Vec<ConjPoly> {
    let s3 = 3f64.sqrt();
    let opx = ConjPoly::one_plus_mod_sq();
    let omx2 = &re(1.0) - &x().pow(2);
    let diag_outer = (&x() * &opx).scale_real(3.0);
    let diag_inner = &re(1.0) + &x().pow(3);
    let a = (&zb() * &omx2).scale_real(s3);
    let b = (&zb().pow(2) * &opx).scale_real(s3);
    let ac = a.conj();
    let bc = b.conj();
    let zero = ConjPoly::zero();
    vec![
        diag_outer.clone(),
        -&a,
        -&b,
        zero.clone(),
        -&ac,
        diag_inner.clone(),
        zero.clone(),
        -&b,
        -&bc,
        zero.clone(),
        diag_inner,
        a,
        zero,
        -&bc,
        ac,
        diag_outer,
    ]
}

/// A matrix known only up to a scalar factor, scaled to trace `rank`.
pub fn normalized(nums: Vec<ConjPoly>, rank: usize) -> RationalMatrix {
    let n = (nums.len() as f64).sqrt() as usize;
    let trace = (0..n).fold(ConjPoly::zero(), |acc, i| &acc + &nums[i * n + i]);
    RationalMatrix::new(n, nums, trace.scale_real(1.0 / rank as f64)).unwrap()
}

/// Residual of `P ≡ M / (tr M / r)`.
pub fn golden_residual(p: &ProjectorField, printed: Vec<ConjPoly>, rank: usize) -> f64 {
    matrix_residual(&p.mat, &normalized(printed, rank))
}

pub fn const_entry(c: f64) -> ConjRational {
    ConjRational::real(c)
}

/// `(1, ξ, ξ³)`, whose first projector has nonconstant curvature.
pub fn cubic_input() -> HoloVector {
    HoloVector::new(vec![ConjPoly::one(), ConjPoly::xi(), ConjPoly::xi().pow(3)]).unwrap()
}

/// A seeded holomorphic input with generic coefficients and degree `n − 1`.
pub fn generic_input(n: usize, seed: u64) -> HoloVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n)
        .map(|_| {
            let coeffs: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            ConjPoly::holomorphic(&coeffs)
        })
        .collect();
    HoloVector::new(entries).unwrap()
}
