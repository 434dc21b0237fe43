//! Orthogonal projectors built from tower members, their weighted sums, and
//! the algebraic identities they satisfy.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonic::{span_projector, HoloVector, Tower};
use crate::symalg::identity::{
    combine, identity_points, matrix_residual, sample_points, scalar_residual,
};
use crate::symalg::wide::{eval_ratio, reduce_fraction, sum_fractions, WidePoly};
use crate::symalg::{
    ConjPoly, ConjRational, IdentityCheck, RationalMatrix, RationalVector, IDENTITY_TOL,
    RESIDUAL_TOL,
};

/// Index set and weights of `P = Σ α_i P_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Composition {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Composition {
    pub fn new(indices: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if indices.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: indices.len(),
                right: weights.len(),
            });
        }
        for (i, a) in indices.iter().enumerate() {
            if indices[..i].contains(a) {
                return Err(Error::DuplicateIndex(*a));
            }
        }
        Ok(Composition { indices, weights })
    }

    pub fn unweighted(indices: Vec<usize>) -> Result<Self> {
        let weights = vec![1.0; indices.len()];
        Composition::new(indices, weights)
    }

    pub fn single(k: usize) -> Self {
        Composition {
            indices: vec![k],
            weights: vec![1.0],
        }
    }

    /// `P_0 + … + P_k`.
    pub fn front(k: usize) -> Self {
        Composition {
            indices: (0..=k).collect(),
            weights: vec![1.0; k + 1],
        }
    }

    /// All weights are 0 or 1, so the sum is an orthogonal projector.
    pub fn is_orthogonal_sum(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
    }

    /// Number of members with weight 1.
    pub fn rank(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1.0).count()
    }

    /// Members with weight 1 are exactly `0..r` and the rest have weight 0.
    pub fn is_front(&self) -> bool {
        let r = self.rank();
        self.is_orthogonal_sum()
            && r > 0
            && self
                .indices
                .iter()
                .zip(&self.weights)
                .all(|(&i, &w)| (w == 1.0) == (i < r))
    }

    /// `α_0, …, α_m` with `m` the largest index, zeros filled in.
    pub fn dense_weights(&self) -> Vec<f64> {
        let m = self.indices.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![0.0; m];
        for (&i, &w) in self.indices.iter().zip(&self.weights) {
            out[i] = w;
        }
        out
    }
}

impl std::fmt::Display for Composition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .indices
            .iter()
            .zip(&self.weights)
            .map(|(i, w)| {
                if *w == 1.0 {
                    format!("P{i}")
                } else {
                    format!("{w}*P{i}")
                }
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// Hermitian `N×N` matrix field `Σ α_i P_i`.
#[derive(Clone, Debug)]
pub struct ProjectorField {
    pub n: usize,
    pub mat: RationalMatrix,
    pub composition: Composition,
}

impl ProjectorField {
    /// `v ⊗ v† / |v|²`.
    pub fn rank1(v: &RationalVector) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let u = v.nums();
        let nn = u
            .iter()
            .fold(ConjPoly::zero(), |acc, p| &acc + &(&p.conj() * p));
        Ok(ProjectorField {
            n: u.len(),
            mat: RationalMatrix::outer(u, u, nn)?,
            composition: Composition::single(0),
        })
    }

    /// A hand-built field, e.g. for negative controls.
    pub fn from_matrix(mat: RationalMatrix, composition: Composition) -> Self {
        ProjectorField {
            n: mat.n(),
            mat,
            composition,
        }
    }

    pub fn rank(&self) -> usize {
        self.composition.rank()
    }

    pub fn is_orthogonal_sum(&self) -> bool {
        self.composition.is_orthogonal_sum()
    }

    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        self.mat.eval(z)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        matrix_residual(&self.mat, &self.mat.adjoint())
    }

    pub fn idempotency_residual(&self) -> f64 {
        matrix_residual(&self.mat.mul(&self.mat), &self.mat)
    }

    pub fn trace_residual(&self) -> f64 {
        scalar_residual(&self.mat.trace(), &ConjRational::real(self.rank() as f64))
    }
}

/// `P_k` of the tower.
pub fn member_projector(tower: &Tower, k: usize) -> Result<ProjectorField> {
    if k >= tower.n() {
        return Err(Error::IndexOutOfRange {
            index: k,
            n: tower.n(),
        });
    }
    let mut p = ProjectorField::rank1(&tower.member(k).vec)?;
    p.composition = Composition::single(k);
    Ok(p)
}

/// `Σ α_i P_i` over the given tower members; unit weights when `weights` is `None`.
pub fn sum_projector(
    tower: &Tower,
    indices: &[usize],
    weights: Option<&[f64]>,
) -> Result<ProjectorField> {
    let composition = match weights {
        Some(w) => Composition::new(indices.to_vec(), w.to_vec())?,
        None => Composition::unweighted(indices.to_vec())?,
    };
    sum_with(tower, composition)
}

/// Builds `Σ w_j P_j` as `Σ_k (w_{k−1} − w_k) F_k`, where `F_k = Σ_{j<k} P_j`
/// is the projector onto the first `k` osculating directions and `F_N = 1`.
pub fn sum_with(tower: &Tower, composition: Composition) -> Result<ProjectorField> {
    let n = tower.n();
    if let Some(&index) = composition.indices.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index, n });
    }
    if let ([i], [w]) = (&composition.indices[..], &composition.weights[..]) {
        let p = member_projector(tower, *i)?;
        return Ok(ProjectorField {
            n,
            mat: p.mat.scale_real(*w),
            composition,
        });
    }
    let mut w = composition.dense_weights();
    w.resize(n + 1, 0.0);
    let mut terms = Vec::new();
    for k in 1..=n {
        let c = w[k - 1] - w[k];
        if c == 0.0 {
            continue;
        }
        let (mut nums, mut den) = if k == n {
            let mut id = vec![WidePoly::zero(); n * n];
            for i in 0..n {
                id[i * n + i] = WidePoly::one();
            }
            (id, WidePoly::one())
        } else {
            span_projector(tower.input(), k)
        };
        reduce_fraction(&mut nums, &mut den);
        terms.push((c, nums, den));
    }
    if terms.is_empty() {
        return Ok(ProjectorField {
            n,
            mat: RationalMatrix::zeros(n),
            composition,
        });
    }
    let (mut nums, mut den) = sum_fractions(terms);
    reduce_fraction(&mut nums, &mut den);
    let mat = RationalMatrix::new(
        n,
        nums.iter().map(WidePoly::to_poly).collect(),
        den.to_poly(),
    )?;
    Ok(ProjectorField {
        n,
        mat,
        composition,
    })
}

/// `[∂∂̄P, P]`.
pub fn euler_lagrange_commutator(p: &ProjectorField) -> RationalMatrix {
    p.mat.d().dbar().commutator(&p.mat)
}

fn poly_matmul(a: &[ConjPoly], b: &[ConjPoly], n: usize) -> Vec<ConjPoly> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ConjPoly::zero();
            for k in 0..n {
                let (x, y) = (&a[i * n + k], &b[k * n + j]);
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            out.push(acc);
        }
    }
    out
}

fn value_matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i * n + j] += a[i * n + k] * b[k * n + j];
            }
        }
    }
    out
}

/// Residual of `[∂∂̄P, P] ≡ 0`.
///
/// With `P = M/d` the commutator is `E/d³` for the polynomial matrix
/// `E = d [M_ξξ̄, M] − d_ξ [M_ξ̄, M] − d_ξ̄ [M_ξ, M]`, so no quotient rule is
/// needed. `E` is measured against the largest of its six products, by
/// coefficient and at the sample points.
pub fn euler_lagrange_residual(p: &ProjectorField) -> f64 {
    let n = p.n;
    let m = p.mat.nums();
    let d = p.mat.den();
    let mz: Vec<ConjPoly> = m.iter().map(ConjPoly::d).collect();
    let mb: Vec<ConjPoly> = m.iter().map(ConjPoly::dbar).collect();
    let mzb: Vec<ConjPoly> = mz.iter().map(ConjPoly::dbar).collect();
    let parts = [(d.clone(), &mzb), (-&d.d(), &mb), (-&d.dbar(), &mz)];

    let mut e = vec![ConjPoly::zero(); n * n];
    let mut scale = 0.0f64;
    for (s, a) in &parts {
        for (sign, prod) in [(1.0, poly_matmul(a, m, n)), (-1.0, poly_matmul(m, a, n))] {
            for (slot, q) in e.iter_mut().zip(&prod) {
                let t = (s * q).scale_real(sign);
                scale = scale.max(t.max_abs());
                *slot = &*slot + &t;
            }
        }
    }
    let coeff = if scale == 0.0 {
        0.0
    } else {
        e.iter().map(ConjPoly::max_abs).fold(0.0, f64::max) / scale
    };

    let one = ConjPoly::one();
    let mut pointwise = 0.0f64;
    for z in identity_points() {
        let at = |ps: &[ConjPoly]| eval_ratio(ps, &one, z).expect("polynomial");
        let mv = at(m);
        let mut total = vec![Complex64::new(0.0, 0.0); n * n];
        let mut size = 0.0f64;
        for (s, a) in &parts {
            let sv = at(std::slice::from_ref(s))[0];
            let av = at(a);
            for (sign, prod) in [
                (1.0, value_matmul(&av, &mv, n)),
                (-1.0, value_matmul(&mv, &av, n)),
            ] {
                for (slot, v) in total.iter_mut().zip(&prod) {
                    let t = sv * v * sign;
                    size = size.max(t.norm());
                    *slot += t;
                }
            }
        }
        if size > 0.0 {
            let gap = total.iter().map(|v| v.norm()).fold(0.0, f64::max) / size;
            pointwise = pointwise.max(gap);
        }
    }
    combine(coeff, pointwise)
}

/// Residual of `[∂P, P] ≡ ∂P`.
pub fn selfduality_residual(p: &ProjectorField) -> f64 {
    let dp = p.mat.d();
    matrix_residual(&dp.commutator(&p.mat), &dp)
}

/// Residual of `[∂P_k, P_k] ≡ ∂(P_k + 2 Σ_{j<k} P_j)`.
pub fn ladder_residual(tower: &Tower, k: usize) -> Result<f64> {
    let pk = member_projector(tower, k)?;
    let lhs = pk.mat.d().commutator(&pk.mat);
    let mut weights = vec![2.0; k];
    weights.push(1.0);
    let rhs = sum_projector(tower, &(0..=k).collect::<Vec<_>>(), Some(&weights))?;
    Ok(matrix_residual(&lhs, &rhs.mat.d()))
}

/// Residual of `Σ_i P_i ≡ I`.
pub fn completeness_residual(tower: &Tower) -> Result<f64> {
    let all = sum_projector(tower, &(0..tower.n()).collect::<Vec<_>>(), None)?;
    Ok(matrix_residual(
        &all.mat,
        &RationalMatrix::identity(tower.n()),
    ))
}

/// Residual of `tr(∂P_k ∂̄P_k) ≡ |V_{k+1}|²/|V_k|² + |V_k|²/|V_{k−1}|²`
/// (the second term absent for `k = 0`, the first for `k = N−1`).
pub fn trace_derivative_residual(tower: &Tower, k: usize) -> Result<f64> {
    let pk = member_projector(tower, k)?;
    let lhs = pk.mat.d().trace_product(&pk.mat.dbar());
    let mut rhs = tower.norm_ratio(k + 1);
    if k > 0 {
        rhs = rhs.add(&tower.norm_ratio(k));
    }
    Ok(scalar_residual(&lhs, &rhs))
}

/// Residual of `∂P_k ≡ V_{k+1}⊗V_k†/|V_k|² − V_k⊗V_{k−1}†/|V_{k−1}|²`.
pub fn derivative_formula_residual(tower: &Tower, k: usize) -> Result<f64> {
    let n = tower.n();
    let pk = member_projector(tower, k)?;
    let term = |a: usize, b: usize| -> Result<RationalMatrix> {
        let va = &tower.member(a).vec;
        let vb = &tower.member(b).vec;
        let m = RationalMatrix::outer(va.nums(), vb.nums(), va.den() * &vb.den().conj())?;
        let inv = ConjRational::one().div(&tower.member(b).norm_sq)?;
        Ok(m.scale_by(&inv))
    };
    let mut rhs = RationalMatrix::zeros(n);
    if k + 1 < n {
        rhs = rhs.add(&term(k + 1, k)?);
    }
    if k > 0 {
        rhs = rhs.sub(&term(k, k - 1)?);
    }
    Ok(matrix_residual(&pk.mat.d(), &rhs))
}

/// The current `K = [∂̄f⊗f† − f⊗(∂f)†]/|f|² + [(∂f)†·f − f†·∂̄f] f⊗f†/|f|⁴`
/// of a homogeneous vector, built from its numerator (`K` is invariant under
/// rescaling by a real function only, so the numerator is used as given).
pub fn conservation_current(v: &RationalVector) -> Result<RationalMatrix> {
    let (q, nn) = current_numerator(v)?;
    RationalMatrix::new(v.len(), q, &nn * &nn)
}

/// `Q` and `ν = |u|²` with `K = Q/ν²`.
fn current_numerator(v: &RationalVector) -> Result<(Vec<ConjPoly>, ConjPoly)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let u = v.nums();
    let n = u.len();
    let du: Vec<ConjPoly> = u.iter().map(ConjPoly::d).collect();
    let dbu: Vec<ConjPoly> = u.iter().map(ConjPoly::dbar).collect();
    let nn = u
        .iter()
        .fold(ConjPoly::zero(), |acc, p| &acc + &(&p.conj() * p));
    let s = u
        .iter()
        .zip(&du)
        .zip(&dbu)
        .fold(ConjPoly::zero(), |acc, ((ui, di), dbi)| {
            &(&acc + &(&di.conj() * ui)) - &(&ui.conj() * dbi)
        });
    let mut nums = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a = &(&dbu[i] * &u[j].conj()) - &(&u[i] * &du[j].conj());
            nums.push(&(&nn * &a) + &(&s * &(&u[i] * &u[j].conj())));
        }
    }
    Ok((nums, nn))
}

/// Residual of `∂K − ∂̄K† ≡ 0` for the current of `v`.
///
/// With `K = Q/ν²` this is the polynomial identity
/// `ν (∂Q − ∂̄Q†) − 2 (∂ν Q − ∂̄ν Q†) ≡ 0`, measured against the largest of
/// its four products by coefficient and at the sample points.
pub fn conservation_residual(v: &RationalVector) -> Result<f64> {
    let (q, nn) = current_numerator(v)?;
    let n = v.len();
    let qa: Vec<ConjPoly> = (0..n * n)
        .map(|idx| q[(idx % n) * n + idx / n].conj())
        .collect();
    let dq: Vec<ConjPoly> = q.iter().map(ConjPoly::d).collect();
    let dbqa: Vec<ConjPoly> = qa.iter().map(ConjPoly::dbar).collect();
    let parts: [(ConjPoly, &[ConjPoly]); 4] = [
        (nn.clone(), &dq),
        (-&nn, &dbqa),
        (nn.d().scale_real(-2.0), &q),
        (nn.dbar().scale_real(2.0), &qa),
    ];
    let mut total = vec![ConjPoly::zero(); n * n];
    let mut scale = 0.0f64;
    for (s, a) in &parts {
        for (slot, p) in total.iter_mut().zip(a.iter()) {
            let t = s * p;
            scale = scale.max(t.max_abs());
            *slot = &*slot + &t;
        }
    }
    let coeff = if scale == 0.0 {
        0.0
    } else {
        total.iter().map(ConjPoly::max_abs).fold(0.0, f64::max) / scale
    };
    let one = ConjPoly::one();
    let mut pointwise = 0.0f64;
    for z in identity_points() {
        let at = |ps: &[ConjPoly]| eval_ratio(ps, &one, z).expect("polynomial");
        let mut sum = vec![Complex64::new(0.0, 0.0); n * n];
        let mut size = 0.0f64;
        for (s, a) in &parts {
            let sv = at(std::slice::from_ref(s))[0];
            for (slot, v) in sum.iter_mut().zip(at(a)) {
                let t = sv * v;
                size = size.max(t.norm());
                *slot += t;
            }
        }
        if size > 0.0 {
            pointwise = pointwise.max(sum.iter().map(|v| v.norm()).fold(0.0, f64::max) / size);
        }
    }
    Ok(combine(coeff, pointwise))
}

/// Conservation law for a holomorphic input `f` itself.
pub fn conservation_check_homogeneous(f: &HoloVector) -> Result<f64> {
    conservation_residual(&f.to_vector())
}

/// Residual of `∂[∂̄P,P] + ∂̄[∂P,P] ≡ 0`.
pub fn commutator_current_residual(p: &ProjectorField) -> f64 {
    let a = p.mat.dbar().commutator(&p.mat).d();
    let b = p.mat.d().commutator(&p.mat).dbar();
    matrix_residual(&a, &b.scale_real(-1.0))
}

/// Largest violation at `z` of the entrywise form of `P² = P`:
/// `Σ_{j≠i}|P_ij|² + P_ii(P_ii − 1) = 0` and
/// `Σ_{m≠i,j} P_im conj(P_jm) + P_ij(P_ii + P_jj − 1) = 0`.
pub fn constraint_residual_at(p: &ProjectorField, z: Complex64) -> Result<f64> {
    let m = p.eval(z)?;
    let n = p.n;
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut diag = m[(i, i)] * (m[(i, i)] - 1.0);
        for j in (0..n).filter(|&j| j != i) {
            diag += m[(i, j)].norm_sqr();
        }
        worst = worst.max(diag.norm());
        for j in (0..n).filter(|&j| j != i) {
            let mut off = m[(i, j)] * (m[(i, i)] + m[(j, j)] - 1.0);
            for k in (0..n).filter(|&k| k != i && k != j) {
                off += m[(i, k)] * m[(j, k)].conj();
            }
            worst = worst.max(off.norm());
        }
    }
    Ok(worst)
}

/// Which of the antidiagonal symmetry classes hold for a projector, and how
/// many real parameters remain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
    /// Real parameters left after applying the relations that hold, minus one for the trace.
    pub orbit_count: usize,
    /// `(n′−1)(2n′+1)` with `n′ = ⌈N/2⌉`.
    pub formula_count: usize,
    /// Dimension of the affine span of the sampled surface.
    pub affine_span_dim: usize,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn entry_gap(
    p: &RationalMatrix,
    a: (usize, usize),
    b: (usize, usize),
    sign: f64,
    scale: f64,
) -> f64 {
    let d = p.num(a.0, a.1) - &p.num(b.0, b.1).scale_real(sign);
    d.max_abs() / scale
}

/// Checks `P_jj = P_{N−1−j,N−1−j}`, `P_{a,b} = (−1)^{b−a} P_{N−1−b,N−1−a}` (which
/// forces the antidiagonal to vanish for even N), and counts independent
/// real coordinates.
pub fn reduced_structure_report(p: &ProjectorField) -> StructureReport {
    let n = p.n;
    let m = &p.mat;
    let scale = m
        .nums()
        .iter()
        .map(ConjPoly::max_abs)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let diag_gap = (0..n)
        .map(|j| entry_gap(m, (j, j), (n - 1 - j, n - 1 - j), 1.0, scale))
        .fold(0.0, f64::max);

    let mut line_gap = 0.0f64;
    let mut anti_gap = 0.0f64;
    for a in 0..n {
        for b in (a + 1)..n {
            let partner = (n - 1 - b, n - 1 - a);
            let sign = if (b - a) % 2 == 0 { 1.0 } else { -1.0 };
            let g = entry_gap(m, (a, b), partner, sign, scale);
            if partner == (a, b) {
                anti_gap = anti_gap.max(g);
            } else {
                line_gap = line_gap.max(g);
            }
        }
    }

    let mut checks = vec![
        IdentityCheck::new("diagonal_pairing", diag_gap, IDENTITY_TOL),
        IdentityCheck::new("parallel_line_signs", line_gap, IDENTITY_TOL),
    ];
    if n.is_multiple_of(2) {
        checks.push(IdentityCheck::new(
            "antidiagonal_vanishing",
            anti_gap,
            IDENTITY_TOL,
        ));
    }
    let diag_ok = checks[0].holds;
    let lines_ok = checks[1].holds && (n % 2 == 1 || checks[2].holds);

    let vanishes = |i: usize, j: usize| m.num(i, j).max_abs() <= IDENTITY_TOL * scale;
    let diag_count = if diag_ok { n.div_ceil(2) } else { n };
    let mut off_count = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            if vanishes(a, b) {
                continue;
            }
            let partner = (n - 1 - b, n - 1 - a);
            if lines_ok && partner < (a, b) {
                continue;
            }
            off_count += 2;
        }
    }
    let np = n.div_ceil(2);
    StructureReport {
        n,
        checks,
        orbit_count: diag_count + off_count - 1,
        formula_count: (np - 1) * (2 * np + 1),
        affine_span_dim: affine_span_dim(p),
    }
}

/// Raw real coordinates: `Re, Im` of the upper triangle, then `P_11..P_{N−1,N−1}`.
fn raw_coordinates(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out.extend((0..n - 1).map(|i| m[(i, i)].re));
    out
}

/// Affine dimension of the sampled surface in `R^{N²−1}`.
pub fn affine_span_dim(p: &ProjectorField) -> usize {
    let dim = p.n * p.n - 1;
    let count = (2 * dim).max(40);
    let rows: Vec<Vec<f64>> = sample_points(count, 2.0, 0xa11f)
        .into_iter()
        .filter_map(|z| p.eval(z).ok())
        .map(|m| raw_coordinates(&m))
        .collect();
    if rows.len() < 2 {
        return 0;
    }
    let mean: Vec<f64> = (0..dim)
        .map(|c| rows.iter().map(|r| r[c]).sum::<f64>() / rows.len() as f64)
        .collect();
    let centered = DMatrix::from_fn(rows.len(), dim, |i, c| rows[i][c] - mean[c]);
    let sv = centered.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-9 * top).count()
}

/// The identity checks that apply to a projector field built from a tower:
/// Hermiticity always, idempotency and trace for 0/1 weights, Euler–Lagrange
/// and the current conservation always, selfduality for front sums.
pub fn check_suite(p: &ProjectorField) -> Vec<IdentityCheck> {
    let mut out = vec![IdentityCheck::new(
        "hermitian",
        p.hermiticity_residual(),
        RESIDUAL_TOL,
    )];
    if p.is_orthogonal_sum() {
        out.push(IdentityCheck::new(
            "idempotent",
            p.idempotency_residual(),
            RESIDUAL_TOL,
        ));
        out.push(IdentityCheck::new(
            "trace_equals_rank",
            p.trace_residual(),
            RESIDUAL_TOL,
        ));
    }
    out.push(IdentityCheck::new(
        "euler_lagrange",
        euler_lagrange_residual(p),
        RESIDUAL_TOL,
    ));
    out.push(IdentityCheck::new(
        "commutator_current_conservation",
        commutator_current_residual(p),
        RESIDUAL_TOL,
    ));
    if p.composition.is_front() {
        out.push(IdentityCheck::new(
            "selfduality",
            selfduality_residual(p),
            RESIDUAL_TOL,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{tower, veronese};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ver(n: usize) -> Tower {
        tower(&veronese(n).unwrap()).unwrap()
    }

    #[test]
    fn composition_validation() {
        assert_eq!(
            Composition::unweighted(vec![1, 1]),
            Err(Error::DuplicateIndex(1))
        );
        assert!(Composition::front(2).is_front());
        assert!(!Composition::single(1).is_front());
        let w = Composition::new(vec![0, 2], vec![0.5, 1.0]).unwrap();
        assert!(!w.is_orthogonal_sum());
        assert_eq!(w.dense_weights(), vec![0.5, 0.0, 1.0]);
    }

    #[test]
    fn constant_rank_one() {
        let v =
            RationalVector::from_polys(vec![ConjPoly::one(), ConjPoly::zero(), ConjPoly::zero()]);
        let p = ProjectorField::rank1(&v).unwrap();
        let m = p.eval(c(0.4)).unwrap();
        assert_eq!(m[(0, 0)], c(1.0));
        assert!(m.iter().skip(1).all(|x| x.norm() == 0.0));
    }

    #[test]
    fn raised_veronese_projector_at_origin() {
        let t = ver(3);
        let p = member_projector(&t, 1).unwrap();
        let m = p.eval(c(0.0)).unwrap();
        let expect =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0), c(1.0), c(0.0)]));
        assert!((m - expect).norm() < 1e-14);
    }

    #[test]
    fn tower_projectors_are_projectors() {
        let t = ver(4);
        for k in 0..4 {
            let p = member_projector(&t, k).unwrap();
            assert!(p.hermiticity_residual() < 1e-12);
            assert!(p.idempotency_residual() < 1e-12);
            assert!(p.trace_residual() < 1e-12);
        }
        assert!(completeness_residual(&t).unwrap() < 1e-12);
    }

    #[test]
    fn index_errors() {
        let t = ver(3);
        assert!(matches!(
            sum_projector(&t, &[0, 3], None),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
        assert!(matches!(
            sum_projector(&t, &[0, 0], None),
            Err(Error::DuplicateIndex(0))
        ));
    }

    #[test]
    fn selfduality_and_ladder() {
        let t = ver(3);
        let p1 = member_projector(&t, 1).unwrap();
        assert!(selfduality_residual(&p1) > 1e-3);
        assert!(ladder_residual(&t, 1).unwrap() < 1e-12);
        let front = sum_projector(&t, &[0, 1], None).unwrap();
        assert!(selfduality_residual(&front) < 1e-12);
    }

    #[test]
    fn non_harmonic_vector_breaks_euler_lagrange() {
        let v = RationalVector::from_polys(vec![
            ConjPoly::one(),
            &ConjPoly::xi() + &ConjPoly::xi_bar(),
        ]);
        let p = ProjectorField::rank1(&v).unwrap();
        assert!(euler_lagrange_residual(&p) > 1e-3);
    }

    #[test]
    fn conservation_controls() {
        assert!(conservation_check_homogeneous(&veronese(2).unwrap()).unwrap() < 1e-12);
        let bad = RationalVector::from_polys(vec![ConjPoly::one(), ConjPoly::mod_sq()]);
        assert!(conservation_residual(&bad).unwrap() > 1e-3);
    }

    #[test]
    fn entrywise_constraints_hold_pointwise() {
        let t = ver(4);
        let p = sum_projector(&t, &[1, 2], None).unwrap();
        for z in sample_points(10, 2.0, 3) {
            assert!(constraint_residual_at(&p, z).unwrap() < 1e-12);
        }
    }
}
