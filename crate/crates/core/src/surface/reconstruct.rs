//! Rebuilding rank-1 and rank-(N−1) projectors from their first row.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack allowed in `Σ_j |P_1j|² = P_11`.
const ROW_TOL: f64 = 1e-9;

/// `P_ij = conj(P_1i) P_1j / P_11` from the first row of a rank-1 projector.
pub fn rank1_reconstruct(row: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = row.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let p11 = row[0];
    if p11.re <= ROW_TOL {
        return Err(Error::ZeroLeadingEntry);
    }
    if p11.im.abs() > ROW_TOL {
        return Err(Error::InconsistentRow(format!("P11 = {p11} is not real")));
    }
    let norm: f64 = row.iter().map(|z| z.norm_sqr()).sum();
    if (norm - p11.re).abs() > ROW_TOL * p11.re.max(1.0) {
        return Err(Error::InconsistentRow(format!(
            "sum of |P1j|^2 is {norm}, expected P11 = {}",
            p11.re
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        row[i].conj() * row[j] / p11.re
    }))
}

/// `Q_ij = δ_ij + conj(Q_1i) Q_1j / (Q_11 − 1)` from the first row of a rank
/// `N−1` projector, via the complementary rank-1 projector `I − Q`.
pub fn rank_nminus1_reconstruct(row: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = row.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if (row[0].re - 1.0).abs() <= ROW_TOL {
        return Err(Error::LeadingEntryOne);
    }
    let complement: Vec<Complex64> = row
        .iter()
        .enumerate()
        .map(|(j, &q)| {
            if j == 0 {
                Complex64::new(1.0, 0.0) - q
            } else {
                -q
            }
        })
        .collect();
    let p = rank1_reconstruct(&complement)?;
    Ok(DMatrix::identity(n, n) - p)
}

/// Residuals of the coordinate relations that express every coordinate of a
/// rank-1 surface through `P_11` and `(X_1j)±`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowRelations {
    /// `X_1 = 2P_11 − 1 + (1/4P_11) Σ_{j=2}^{N−1} ((X_1j)₊² + (X_1j)₋²)`.
    pub x1_to_n_minus_1: f64,
    /// The same with the sum running to `N`.
    pub x1_to_n: f64,
    /// Worst `X_i`, `2 ≤ i ≤ N−1`.
    pub xi: f64,
    /// Worst `(X_kl)±`, `2 ≤ k < l`.
    pub xkl: f64,
}

/// Checks the first-row coordinate relations on a numeric rank-1 projector,
/// comparing against coordinates taken directly from the full matrix.
pub fn first_row_coordinate_relations(m: &DMatrix<Complex64>) -> Result<RowRelations> {
    let n = m.nrows();
    let chart = super::canonical_chart(n, 1)?;
    let diag: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
    let x = chart.diagonal_coordinates(&diag);
    let p11 = diag[0];
    if p11 <= ROW_TOL {
        return Err(Error::ZeroLeadingEntry);
    }
    // 1-based columns: plus(j), minus(j), s(j) = plus² + minus² for the first row.
    let plus = |j: usize| 2.0 * m[(0, j - 1)].re;
    let minus = |j: usize| -2.0 * m[(0, j - 1)].im;
    let s = |j: usize| plus(j).powi(2) + minus(j).powi(2);

    let tail = |from: usize, to: usize| (from..=to).map(s).sum::<f64>();
    let x1_a = 2.0 * p11 - 1.0 + tail(2, n - 1) / (4.0 * p11);
    let x1_b = 2.0 * p11 - 1.0 + tail(2, n) / (4.0 * p11);

    let mut xi = 0.0f64;
    for i in 2..n {
        let fi = i as f64;
        let w = (2.0 / (fi * (fi + 1.0))).sqrt();
        let v = w * ((fi + 1.0) * s(i) + tail(i + 1, n - 1) - 4.0 * p11) / (4.0 * p11);
        xi = xi.max((v - x[i - 1]).abs());
    }

    let mut xkl = 0.0f64;
    for k in 2..=n {
        for l in (k + 1)..=n {
            let p = (plus(k) * plus(l) + minus(k) * minus(l)) / (2.0 * p11);
            let q = (plus(k) * minus(l) - minus(k) * plus(l)) / (2.0 * p11);
            let z = m[(k - 1, l - 1)];
            xkl = xkl.max((p - 2.0 * z.re).abs()).max((q + 2.0 * z.im).abs());
        }
    }

    Ok(RowRelations {
        x1_to_n_minus_1: (x1_a - x[0]).abs(),
        x1_to_n: (x1_b - x[0]).abs(),
        xi,
        xkl,
    })
}
