//! Induced metric and Gaussian curvature of projector surfaces.
//!
//! For a surface `ξ ↦ P(ξ)` the metric has components `g₊₊ = tr(∂P ∂P)`,
//! `g₊₋ = tr(∂P ∂̄P)` and `g₋₋ = conj(g₊₊)`. When `g₊₊ ≡ 0` the curvature is
//! `K = −(4/g₊₋) ∂∂̄ ln g₊₋`, computed inside the rational class as
//! `−4(g ∂∂̄g − ∂g ∂̄g)/g³`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonic::Tower;
use crate::projector::{Composition, ProjectorField};
use crate::surface::square_grid;
use crate::symalg::identity::scalar_residual;
use crate::symalg::wide::{log_laplacian_ratio, trace_derivative_product, WidePoly};
use crate::symalg::{ConjPoly, ConjRational, IdentityCheck, RESIDUAL_TOL};

/// Relative spread below which sampled curvature counts as constant.
pub const CONSTANT_TOL: f64 = 1e-10;
pub const STANDARD_RADIUS: f64 = 3.0;
pub const STANDARD_RES: usize = 41;

#[derive(Clone, Debug)]
pub struct MetricField {
    pub g_pp: ConjRational,
    pub g_pm: ConjRational,
    pub g_mm: ConjRational,
}

pub fn induced_metric(p: &ProjectorField) -> MetricField {
    let part = |op| {
        let (num, den) = trace_derivative_product(p.n, p.mat.nums(), p.mat.den(), op);
        ConjRational::new(num, den).expect("nonzero denominator")
    };
    let g_pp = part(WidePoly::d);
    let g_pm = part(WidePoly::dbar);
    let g_mm = g_pp.conj();
    MetricField { g_pp, g_pm, g_mm }
}

/// `tr(∂P ∂̄P)`.
pub fn energy_density(p: &ProjectorField) -> ConjRational {
    induced_metric(p).g_pm
}

/// `g₊₊ ≡ 0`, with the size of `g₊₊` relative to `g₊₋` as the residual.
pub fn conformality_check(p: &ProjectorField) -> IdentityCheck {
    let m = induced_metric(p);
    let pp = (m.g_pp.num() * m.g_pm.den()).max_abs();
    let pm = (m.g_pm.num() * m.g_pp.den()).max_abs();
    let residual = if pp == 0.0 {
        0.0
    } else if pm == 0.0 {
        f64::MAX
    } else {
        pp / pm
    };
    IdentityCheck::new("conformal", residual, RESIDUAL_TOL)
}

/// `K = −4(g ∂∂̄g − ∂g ∂̄g)/g³` as a rational function.
pub fn gaussian_curvature_exact(g: &ConjRational) -> Result<ConjRational> {
    if g.is_zero() {
        return Err(Error::DegenerateMetric);
    }
    let (num, den) = log_laplacian_ratio(g.num(), g.den());
    ConjRational::new(num, den)
}

/// `K` at `z` from central differences of `ln g` with step `h`:
/// `∂∂̄ = Δ/4`, so `K = −Δ ln g / g`.
pub fn gaussian_curvature_fd(g: &ConjRational, z: Complex64, h: f64) -> Result<f64> {
    let lg = |w: Complex64| -> Result<f64> { Ok(g.eval(w)?.re.ln()) };
    let c = lg(z)?;
    let lap = (lg(z + h)?
        + lg(z - h)?
        + lg(z + Complex64::new(0.0, h))?
        + lg(z - Complex64::new(0.0, h))?
        - 4.0 * c)
        / (h * h);
    Ok(-lap / g.eval(z)?.re)
}

/// `K` sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureSamples {
    pub values: Vec<f64>,
    pub skipped: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `(max − min)/|mean|`.
    pub spread: f64,
}

impl CurvatureSamples {
    pub fn is_constant(&self, tol: f64) -> bool {
        self.spread < tol
    }
}

/// Evaluates the exact curvature at each point, skipping poles.
pub fn sample_curvature(k: &ConjRational, points: &[Complex64]) -> CurvatureSamples {
    let values: Vec<f64> = points
        .iter()
        .filter_map(|&z| k.eval(z).ok().map(|v| v.re))
        .collect();
    let skipped = points.len() - values.len();
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = if values.is_empty() {
        0.0
    } else {
        (max - min) / mean.abs().max(f64::MIN_POSITIVE)
    };
    CurvatureSamples {
        values,
        skipped,
        mean,
        min,
        max,
        spread,
    }
}

/// `K = 8/A` for `g₊₋ = A/(1+|ξ|²)²`.
pub fn curvature_from_constant(a: f64) -> f64 {
    8.0 / a
}

/// Curvature summary of one projector surface; the JSON shape of curvature reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub composition: Composition,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    pub constant: bool,
    pub spread: f64,
}

/// Exact curvature of `p` sampled on the standard 41×41 grid over `[−3, 3]²`.
pub fn curvature_report(p: &ProjectorField, veronese: bool) -> Result<CurvatureReport> {
    curvature_report_on(p, veronese, &square_grid(STANDARD_RADIUS, STANDARD_RES))
}

pub fn curvature_report_on(
    p: &ProjectorField,
    veronese: bool,
    grid: &[Complex64],
) -> Result<CurvatureReport> {
    let g = energy_density(p);
    let k = gaussian_curvature_exact(&g)?;
    let s = sample_curvature(&k, grid);
    let a = if veronese {
        veronese_metric_constant(p.n, &p.composition).ok()
    } else {
        None
    };
    Ok(CurvatureReport {
        n: p.n,
        composition: p.composition.clone(),
        a,
        k: s.mean,
        constant: s.is_constant(CONSTANT_TOL),
        spread: s.spread,
    })
}

/// `A(N, P) = Σ_{i<k} (i+1)(N−i−1)(α_i − α_{i+1})² + (k+1)(N−k−1)α_k²` for
/// `P = Σ_{i=0}^{k} α_i P_i`, the constant in `g₊₋ = A/(1+|ξ|²)²` on the
/// Veronese tower. A single `P_k` is the case `α_k = 1` and all other weights zero.
pub fn veronese_metric_constant(n: usize, composition: &Composition) -> Result<f64> {
    if composition.indices.is_empty() {
        return Err(Error::ZeroComposition);
    }
    Ok(metric_constant_from_weights(
        n,
        &composition.dense_weights(),
    ))
}

fn metric_constant_from_weights(n: usize, alpha: &[f64]) -> f64 {
    let k = alpha.len() - 1;
    let nf = n as f64;
    let mut a = 0.0;
    for i in 0..k {
        let i1 = (i + 1) as f64;
        a += i1 * (nf - i1) * (alpha[i] - alpha[i + 1]).powi(2);
    }
    let k1 = (k + 1) as f64;
    a + k1 * (nf - k1) * alpha[k].powi(2)
}

/// `A = k(N−k) + (k+1)(N−k−1)` for a single `P_k`.
pub fn single_member_constant(n: usize, k: usize) -> f64 {
    (k * (n - k) + (k + 1) * (n - k - 1)) as f64
}

/// `g₊₋` for `Σ_{i=0}^{k} α_i P_i` from the tower norm ratios alone:
/// `α_0² q_1 + Σ_{i≥1} α_i²(q_{i+1} + q_i) − 2Σ α_i α_{i+1} q_{i+1}`,
/// `q_i = |V_i|²/|V_{i−1}|²`.
pub fn weighted_metric_closed_form(tower: &Tower, alpha: &[f64]) -> ConjRational {
    let q = |i: usize| tower.norm_ratio(i);
    let mut g = q(1).scale_real(alpha[0] * alpha[0]);
    for (i, &a) in alpha.iter().enumerate().skip(1) {
        g = g.add(&q(i + 1).add(&q(i)).scale_real(a * a));
    }
    for i in 0..alpha.len() - 1 {
        g = g.sub(&q(i + 1).scale_real(2.0 * alpha[i] * alpha[i + 1]));
    }
    g
}

/// `A/(1+|ξ|²)²`.
pub fn veronese_metric(a: f64) -> ConjRational {
    ConjRational::new(ConjPoly::real(a), ConjPoly::one_plus_mod_sq().pow(2))
        .expect("nonzero denominator")
}

/// Residual of `g₊₋ ≡ A/(1+|ξ|²)²`.
pub fn metric_constant_residual(p: &ProjectorField, a: f64) -> f64 {
    scalar_residual(&energy_density(p), &veronese_metric(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{tower, veronese};
    use crate::projector::{member_projector, sum_projector};
    use crate::symalg::identity::scalars_identical;
    use crate::symalg::RationalMatrix;

    fn ver(n: usize) -> Tower {
        tower(&veronese(n).unwrap()).unwrap()
    }

    #[test]
    fn metric_of_first_projectors() {
        let t = ver(3);
        let p0 = member_projector(&t, 0).unwrap();
        let m = induced_metric(&p0);
        assert!(m.g_pp.is_zero() || conformality_check(&p0).holds);
        assert!(scalars_identical(&m.g_pm, &veronese_metric(2.0)));
        let p1 = member_projector(&t, 1).unwrap();
        assert!(metric_constant_residual(&p1, 4.0) < 1e-12);
    }

    #[test]
    fn constant_projector_has_zero_metric() {
        let p = ProjectorField::from_matrix(RationalMatrix::identity(3), Composition::single(0));
        let m = induced_metric(&p);
        assert!(m.g_pm.is_zero() && m.g_pp.is_zero());
        assert_eq!(
            gaussian_curvature_exact(&m.g_pm),
            Err(Error::DegenerateMetric)
        );
    }

    #[test]
    fn round_metric_has_constant_curvature() {
        let k = gaussian_curvature_exact(&veronese_metric(6.0)).unwrap();
        assert!(scalars_identical(&k, &ConjRational::real(8.0 / 6.0)));
    }

    #[test]
    fn closed_form_constants() {
        assert_eq!(
            veronese_metric_constant(3, &Composition::single(1)).unwrap(),
            4.0
        );
        let c = Composition::new(vec![0, 1, 2], vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(veronese_metric_constant(4, &c).unwrap(), 6.0);
        assert_eq!(
            veronese_metric_constant(2, &Composition::single(0)).unwrap(),
            1.0
        );
        assert_eq!(single_member_constant(3, 1), 4.0);
        let gap = Composition::unweighted(vec![1, 3]).unwrap();
        let a = veronese_metric_constant(5, &gap).unwrap();
        assert_eq!(a, 20.0);
        let p = sum_projector(&ver(5), &[1, 3], None).unwrap();
        assert!(metric_constant_residual(&p, a) < 1e-12);
    }

    #[test]
    fn pair_sum_matches_weighted_form() {
        let t = ver(4);
        let p = sum_projector(&t, &[1, 2], None).unwrap();
        assert!(metric_constant_residual(&p, 6.0) < 1e-12);
        let g = weighted_metric_closed_form(&t, &[0.0, 1.0, 1.0]);
        assert!(scalars_identical(&g, &energy_density(&p)));
    }

    #[test]
    fn finite_difference_agrees() {
        let f =
            crate::HoloVector::new(vec![ConjPoly::one(), ConjPoly::xi(), ConjPoly::xi().pow(3)])
                .unwrap();
        let t = tower(&f).unwrap();
        let g = energy_density(&member_projector(&t, 0).unwrap());
        let k = gaussian_curvature_exact(&g).unwrap();
        let z = Complex64::new(0.4, -0.7);
        let exact = k.eval(z).unwrap().re;
        let fd = gaussian_curvature_fd(&g, z, 1e-4).unwrap();
        assert!((exact - fd).abs() < 1e-6 * exact.abs());
    }
}
