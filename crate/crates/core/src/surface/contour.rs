//! Surfaces as line integrals `X = i ∫ (𝕂† dξ + 𝕂 dξ̄)` with `𝕂 = [∂̄P, P]`.
//!
//! With this current the 1-form is `−i dP` for `P_0` and front sums, and
//! `−i d(P_k + 2Σ_{j<k} P_j)` for a single `P_k`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projector::{euler_lagrange_residual, ProjectorField};
use crate::symalg::identity::matrix_residual;
use crate::symalg::{RationalMatrix, RESIDUAL_TOL};

/// Panels per polyline segment.
pub const DEFAULT_PANELS: usize = 8;
/// Entrywise agreement required of two contours with the same endpoints.
pub const PATH_TOL: f64 = 1e-8;

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// A polyline in the `ξ` plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    vertices: Vec<Complex64>,
}

impl Contour {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::EmptyContour);
        }
        Ok(Contour { vertices })
    }

    pub fn straight(from: Complex64, to: Complex64) -> Self {
        Contour {
            vertices: vec![from, to],
        }
    }

    /// Up by `|to − from|`, across, and back down: a box-shaped detour.
    pub fn detour(from: Complex64, to: Complex64) -> Self {
        let h = Complex64::new(0.0, (to - from).norm().max(0.5));
        Contour {
            vertices: vec![from, from + h, to + h, to],
        }
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn start(&self) -> Complex64 {
        self.vertices[0]
    }

    pub fn end(&self) -> Complex64 {
        self.vertices[self.vertices.len() - 1]
    }
}

/// `𝕂 = [∂̄P, P]`.
pub fn one_form_current(p: &ProjectorField) -> RationalMatrix {
    p.mat.dbar().commutator(&p.mat)
}

/// Residual of `∂𝕂 ≡ ∂̄𝕂†`, the closedness of the 1-form.
pub fn closedness_residual(k: &RationalMatrix) -> f64 {
    matrix_residual(&k.d(), &k.adjoint().dbar())
}

/// `i ∫_γ (𝕂† dξ + 𝕂 dξ̄)` by composite 16-point Gauss–Legendre.
pub fn line_integral(
    k: &RationalMatrix,
    contour: &Contour,
    panels: usize,
) -> Result<DMatrix<Complex64>> {
    let (nodes, weights) = gauss_legendre(16);
    let n = k.n();
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    let i = Complex64::new(0.0, 1.0);
    for seg in contour.vertices.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        for q in 0..panels {
            let lo = a + h * q as f64;
            for (&x, &w) in nodes.iter().zip(&weights) {
                let z = lo + h * (0.5 * (x + 1.0));
                let kz = k
                    .eval(z)
                    .map_err(|_| Error::PoleOnContour { re: z.re, im: z.im })?;
                let dz = h * 0.5;
                acc += (kz.adjoint() * dz + kz * dz.conj()) * (i * w);
            }
        }
    }
    Ok(acc)
}

/// A line-integral surface value and whether the integrand was certified.
#[derive(Clone, Debug)]
pub struct LineIntegral {
    pub x: DMatrix<Complex64>,
    pub euler_lagrange_residual: f64,
    /// `P` fails `[∂∂̄P, P] = 0`; the value may depend on the path.
    pub non_harmonic: bool,
}

/// `X(endpoint)` along `contour` (a straight segment from 0 by default).
pub fn line_integral_surface(
    p: &ProjectorField,
    endpoint: Complex64,
    contour: Option<&Contour>,
) -> Result<LineIntegral> {
    let straight = Contour::straight(Complex64::new(0.0, 0.0), endpoint);
    let contour = contour.unwrap_or(&straight);
    let el = euler_lagrange_residual(p);
    Ok(LineIntegral {
        x: line_integral(&one_form_current(p), contour, DEFAULT_PANELS)?,
        euler_lagrange_residual: el,
        non_harmonic: el >= RESIDUAL_TOL,
    })
}

/// Two contours with shared endpoints and the largest entrywise gap.
#[derive(Clone, Debug)]
pub struct PathIndependence {
    pub straight: DMatrix<Complex64>,
    pub detour: DMatrix<Complex64>,
    pub max_gap: f64,
    pub independent: bool,
}

/// Integrates along [`Contour::straight`] and [`Contour::detour`] and compares.
pub fn path_independence(
    p: &ProjectorField,
    from: Complex64,
    to: Complex64,
) -> Result<PathIndependence> {
    let k = one_form_current(p);
    let a = line_integral(&k, &Contour::straight(from, to), DEFAULT_PANELS)?;
    let b = line_integral(&k, &Contour::detour(from, to), DEFAULT_PANELS)?;
    let max_gap = (&a - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(PathIndependence {
        straight: a,
        detour: b,
        max_gap,
        independent: max_gap < PATH_TOL,
    })
}
