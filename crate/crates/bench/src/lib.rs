//! Shared inputs for the benchmarks.

use sigmasurf::{veronese, Complex64, ConjPoly, HoloVector};

/// `f = (1, ξ, …)` perturbed by fixed complex coefficients so no symmetry helps.
pub fn generic_input(n: usize) -> HoloVector {
    let entries = (0..n)
        .map(|i| {
            let coeffs: Vec<Complex64> = (0..n)
                .map(|j| {
                    let t = (7 * i + 3 * j + 1) as f64;
                    Complex64::new((t * 0.37).sin(), (t * 0.71).cos())
                })
                .collect();
            ConjPoly::holomorphic(&coeffs)
        })
        .collect();
    HoloVector::new(entries).expect("fixed input is valid")
}

pub fn veronese_input(n: usize) -> HoloVector {
    veronese(n).expect("n >= 2")
}
