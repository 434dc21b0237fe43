//! Coordinates of projector surfaces in `R^{N²−1}`.
//!
//! Off-diagonal coordinates are `(X_ij)₊ = 2 Re P_ij` and `(X_ij)₋ = −2 Im P_ij`
//! for `i < j`; the `N−1` diagonal coordinates come from the triangular
//! canonical chart, which places every rank-`r` projector on the sphere
//! `|X|² = 2r(N−r)/N`.

mod contour;
mod reconstruct;
mod reduced;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::projector::ProjectorField;
use crate::symalg::ConjRational;

pub use contour::{
    closedness_residual, gauss_legendre, line_integral, line_integral_surface, one_form_current,
    path_independence, Contour, LineIntegral, PathIndependence, DEFAULT_PANELS, PATH_TOL,
};
pub use reconstruct::{
    first_row_coordinate_relations, rank1_reconstruct, rank_nminus1_reconstruct, RowRelations,
};
pub use reduced::{reduced_linear_relations, ReducedRelation, RelationVariant};

/// Trace of an orthogonal projector must be within this of an integer.
pub const TRACE_TOL: f64 = 1e-9;

/// The canonical affine map from `P_11..P_{N−1,N−1}` to `X_1..X_{N−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceChart {
    pub n: usize,
    pub r: usize,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: f64,
}

/// `A_ii = √(2(i+1)/i)`, `A_ij = √(2/(i(i+1)))` for `j > i`, `b_i = −r√(2/(i(i+1)))`,
/// `C = 2r(N−r)/N`, with 1-based `i`.
pub fn canonical_chart(n: usize, r: usize) -> Result<SurfaceChart> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if r == 0 || r >= n {
        return Err(Error::RankOutOfRange { r, n });
    }
    let m = n - 1;
    let a = DMatrix::from_fn(m, m, |i, j| {
        let i1 = (i + 1) as f64;
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => (2.0 * (i1 + 1.0) / i1).sqrt(),
            std::cmp::Ordering::Less => (2.0 / (i1 * (i1 + 1.0))).sqrt(),
            std::cmp::Ordering::Greater => 0.0,
        }
    });
    let b = DVector::from_fn(m, |i, _| {
        let i1 = (i + 1) as f64;
        -(r as f64) * (2.0 / (i1 * (i1 + 1.0))).sqrt()
    });
    let c = 2.0 * r as f64 * (n - r) as f64 / n as f64;
    Ok(SurfaceChart { n, r, a, b, c })
}

impl SurfaceChart {
    /// Largest entry of `AᵀA − G` with `G` = 4 on the diagonal, 2 elsewhere.
    pub fn gram_residual(&self) -> f64 {
        let ata = self.a.transpose() * &self.a;
        let g = DMatrix::from_fn(
            self.n - 1,
            self.n - 1,
            |i, j| if i == j { 4.0 } else { 2.0 },
        );
        (ata - g).amax()
    }

    /// Largest entry of `Aᵀb + 2r·1`.
    pub fn shift_residual(&self) -> f64 {
        let lhs = self.a.transpose() * &self.b;
        lhs.map(|x| x + 2.0 * self.r as f64).amax()
    }

    /// `|bᵀb − 2r(r−1) − C|`.
    pub fn constant_residual(&self) -> f64 {
        let r = self.r as f64;
        (self.b.norm_squared() - 2.0 * r * (r - 1.0) - self.c).abs()
    }

    /// `X = A·(P_11..P_{N−1,N−1}) + b`.
    pub fn diagonal_coordinates(&self, diag: &[f64]) -> DVector<f64> {
        let p = DVector::from_iterator(self.n - 1, diag.iter().take(self.n - 1).copied());
        &self.a * p + &self.b
    }

    /// Inverse of [`Self::diagonal_coordinates`], completed by `P_NN = r − Σ P_ii`.
    pub fn unembed_diagonal(&self, x: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_column_slice(x) - &self.b;
        let p = self
            .a
            .solve_upper_triangular(&rhs)
            .expect("canonical chart has a nonzero diagonal");
        let mut out: Vec<f64> = p.iter().copied().collect();
        out.push(self.r as f64 - p.sum());
        out
    }

    /// `X_1..X_{N−1}` as rational functions of `ξ`.
    pub fn diagonal_fields(&self, p: &ProjectorField) -> Vec<ConjRational> {
        let m = self.n - 1;
        let diag: Vec<ConjRational> = (0..m).map(|j| p.mat.entry(j, j)).collect();
        (0..m)
            .map(|i| {
                let mut x = ConjRational::real(self.b[i]);
                for (j, d) in diag.iter().enumerate().skip(i) {
                    x = x.add(&d.scale_real(self.a[(i, j)]));
                }
                x
            })
            .collect()
    }
}

/// One sampled point of a projector surface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub xi_re: f64,
    pub xi_im: f64,
    pub x_diag: Vec<f64>,
    /// `(X_ij)₊, (X_ij)₋` interleaved, `i < j` in lexicographic order.
    pub x_offdiag: Vec<f64>,
}

impl SurfacePoint {
    pub fn xi(&self) -> Complex64 {
        Complex64::new(self.xi_re, self.xi_im)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x_diag
            .iter()
            .chain(&self.x_offdiag)
            .map(|x| x * x)
            .sum()
    }

    /// `|Σ X_i² + Σ((X_ij)₊² + (X_ij)₋²) − C|`.
    pub fn quadratic_residual(&self, chart: &SurfaceChart) -> f64 {
        (self.norm_sq() - chart.c).abs()
    }

    /// `(X_ij)₊²+(X_ij)₋²` summed.
    pub fn offdiag_norm_sq(&self) -> f64 {
        self.x_offdiag.iter().map(|x| x * x).sum()
    }
}

/// `(X_ij)₊ = P_ij + conj(P_ij)`, `(X_ij)₋ = i(P_ij − conj(P_ij))`.
pub fn offdiag_coordinates(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in (i + 1)..n {
            let p = m[(i, j)];
            out.push(2.0 * p.re);
            out.push(-2.0 * p.im);
        }
    }
    out
}

/// Coordinates of a numeric Hermitian matrix under `chart`.
pub fn embed_matrix(
    m: &DMatrix<Complex64>,
    chart: &SurfaceChart,
    xi: Complex64,
) -> Result<SurfacePoint> {
    let trace = m.diagonal().iter().map(|z| z.re).sum::<f64>();
    if (trace - chart.r as f64).abs() > TRACE_TOL {
        return Err(Error::RankMismatch {
            expected: chart.r,
            found: trace,
        });
    }
    let diag: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
    Ok(SurfacePoint {
        xi_re: xi.re,
        xi_im: xi.im,
        x_diag: chart.diagonal_coordinates(&diag).iter().copied().collect(),
        x_offdiag: offdiag_coordinates(m),
    })
}

/// Coordinates of `P(ξ)`.
pub fn embed(p: &ProjectorField, chart: &SurfaceChart, xi: Complex64) -> Result<SurfacePoint> {
    if p.is_orthogonal_sum() && p.rank() != chart.r {
        return Err(Error::RankMismatch {
            expected: chart.r,
            found: p.rank() as f64,
        });
    }
    embed_matrix(&p.eval(xi)?, chart, xi)
}

/// The surface `ξ ↦ P(ξ)` itself, as a matrix in the Hermitian matrices.
pub fn direct_surface(p: &ProjectorField) -> impl Fn(Complex64) -> Result<DMatrix<Complex64>> + '_ {
    move |z| p.eval(z)
}

/// Points of the `res × res` grid on `[−radius, radius]²`, row-major in
/// `Im ξ` then `Re ξ`.
pub fn square_grid(radius: f64, res: usize) -> Vec<Complex64> {
    let step = if res > 1 {
        2.0 * radius / (res - 1) as f64
    } else {
        0.0
    };
    let mut out = Vec::with_capacity(res * res);
    for iy in 0..res {
        for ix in 0..res {
            out.push(Complex64::new(
                -radius + step * ix as f64,
                -radius + step * iy as f64,
            ));
        }
    }
    out
}
