//! Linear relations among the diagonal coordinates of the middle Veronese
//! projector for odd `N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::projector::ProjectorField;
use crate::symalg::identity::identity_points;
use crate::symalg::{ConjPoly, RESIDUAL_TOL};

use super::canonical_chart;

/// Where the coefficients of a relation come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationVariant {
    /// An explicit relation `X_t = Σ c_i X_i` as commonly quoted.
    Printed,
    /// A member of the quoted family `Σ a_i X_i = 0`.
    Family,
    /// A quoted relation with a coefficient repaired.
    Corrected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedRelation {
    pub name: String,
    pub variant: RelationVariant,
    /// Coefficients `c_1..c_{N−1}` of `Σ c_i X_i ≡ 0`.
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub holds: bool,
}

fn relation(
    name: &str,
    variant: RelationVariant,
    coefficients: Vec<f64>,
) -> (String, RelationVariant, Vec<f64>) {
    (name.to_string(), variant, coefficients)
}

fn catalogue(n: usize) -> Vec<(String, RelationVariant, Vec<f64>)> {
    use RelationVariant::*;
    let s = f64::sqrt;
    let mut x1 = vec![0.0; n - 1];
    x1[0] = 1.0;
    let mut out = vec![relation("X1 = 0", Printed, x1)];
    match n {
        5 => {
            out.push(relation(
                "X2 = X3/(2sqrt2) + sqrt15 X4/(2sqrt2)",
                Printed,
                vec![0.0, 1.0, -1.0 / (2.0 * s(2.0)), -s(15.0) / (2.0 * s(2.0))],
            ));
            out.push(relation(
                "a2 X2 + a3 X3 + a4 X4 = 0, a4 = 1",
                Family,
                vec![0.0, -2.0 * s(2.0 / 15.0), 1.0 / s(15.0), 1.0],
            ));
        }
        7 => {
            out.push(relation(
                "X2 = 2 X4/sqrt15 + 3 X5/(2sqrt5) + sqrt7 X6/2",
                Printed,
                vec![
                    0.0,
                    1.0,
                    0.0,
                    -2.0 / s(15.0),
                    -3.0 / (2.0 * s(5.0)),
                    -s(7.0) / 2.0,
                ],
            ));
            out.push(relation(
                "X3 = X4/sqrt15 + 2sqrt2 X5/sqrt5",
                Printed,
                vec![0.0, 0.0, 1.0, -1.0 / s(15.0), -2.0 * s(2.0) / s(5.0), 0.0],
            ));
            out.push(relation(
                "a2..a6 family, a5 = 1, a6 = 0",
                Family,
                vec![0.0, 0.0, -0.5 * s(2.5), 1.0 / (2.0 * s(6.0)), 1.0, 0.0],
            ));
            out.push(relation(
                "a2..a6 family, a5 = 0, a6 = 1",
                Family,
                vec![
                    0.0,
                    -2.0 / s(7.0),
                    3.0 / (2.0 * s(14.0)),
                    0.5 * s(5.0 / 42.0),
                    0.0,
                    1.0,
                ],
            ));
            out.push(relation(
                "X2 = 2 X4/sqrt30 + 3 X5/(2sqrt5) + sqrt7 X6/2",
                Corrected,
                vec![
                    0.0,
                    1.0,
                    0.0,
                    -2.0 / s(30.0),
                    -3.0 / (2.0 * s(5.0)),
                    -s(7.0) / 2.0,
                ],
            ));
        }
        _ => {}
    }
    out
}

/// Residual of `Σ c_i X_i ≡ 0`: the combination's numerator relative to its
/// largest single term, confirmed at the identity sample points.
fn combination_residual(p: &ProjectorField, coeffs: &[f64]) -> Result<f64> {
    let n = p.n;
    let chart = canonical_chart(n, 1)?;
    // Σ c_i X_i = Σ_j w_j P_jj + const, w = Aᵀc.
    let c = nalgebra::DVector::from_column_slice(coeffs);
    let w = chart.a.transpose() * &c;
    let constant = c.dot(&chart.b);
    let den = p.mat.den();
    let mut terms: Vec<ConjPoly> = (0..n - 1)
        .map(|j| p.mat.num(j, j).scale_real(w[j]))
        .collect();
    terms.push(den.scale_real(constant));
    let scale = terms.iter().map(ConjPoly::max_abs).fold(0.0, f64::max);
    let total = terms.iter().fold(ConjPoly::zero(), |acc, t| &acc + t);
    let coeff = if scale == 0.0 {
        0.0
    } else {
        total.max_abs() / scale
    };

    let mut pointwise = 0.0f64;
    for z in identity_points() {
        let Ok(m) = p.eval(z) else { continue };
        let diag: Vec<f64> = m.diagonal().iter().map(|v| v.re).collect();
        let x = chart.diagonal_coordinates(&diag);
        let sum: f64 = x.iter().zip(coeffs).map(|(a, b)| a * b).sum();
        let size: f64 = x.iter().zip(coeffs).map(|(a, b)| (a * b).abs()).sum();
        pointwise = pointwise.max(sum.abs() / (1.0 + size));
    }
    Ok(coeff.max(pointwise))
}

/// Checks the known linear relations among `X_1..X_{N−1}` for the middle
/// projector `P_{(N−1)/2}` of the Veronese tower (`N` odd). For `N = 3` only
/// `X_1 ≡ 0` applies; `N = 5` and `N = 7` add the explicit relations.
pub fn reduced_linear_relations(n: usize, p: &ProjectorField) -> Result<Vec<ReducedRelation>> {
    let middle = n.saturating_sub(1) / 2;
    if n.is_multiple_of(2)
        || p.n != n
        || p.composition.indices != [middle]
        || p.composition.weights != [1.0]
    {
        return Err(Error::NotReducedCase);
    }
    catalogue(n)
        .into_iter()
        .map(|(name, variant, coefficients)| {
            let residual = combination_residual(p, &coefficients)?;
            Ok(ReducedRelation {
                name,
                variant,
                coefficients,
                residual,
                holds: residual < RESIDUAL_TOL,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{tower, veronese};
    use crate::projector::member_projector;

    #[test]
    fn rejects_even_and_off_middle() {
        let t = tower(&veronese(4).unwrap()).unwrap();
        let p = member_projector(&t, 1).unwrap();
        assert_eq!(reduced_linear_relations(4, &p), Err(Error::NotReducedCase));
        let t = tower(&veronese(5).unwrap()).unwrap();
        let p = member_projector(&t, 1).unwrap();
        assert_eq!(reduced_linear_relations(5, &p), Err(Error::NotReducedCase));
    }

    #[test]
    fn three_dimensional_case() {
        let t = tower(&veronese(3).unwrap()).unwrap();
        let p = member_projector(&t, 1).unwrap();
        let rel = reduced_linear_relations(3, &p).unwrap();
        assert_eq!(rel.len(), 1);
        assert!(rel[0].holds);
    }

    #[test]
    fn five_dimensional_case() {
        let t = tower(&veronese(5).unwrap()).unwrap();
        let p = member_projector(&t, 2).unwrap();
        let rel = reduced_linear_relations(5, &p).unwrap();
        assert!(rel.iter().all(|r| r.holds), "{rel:?}");
    }
}
