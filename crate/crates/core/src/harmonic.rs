//! Holomorphic inputs, the `P₊` raising operator and the tower of mixed
//! solutions it generates, plus the Veronese closed forms.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symalg::identity::{scalar_residual, vector_residual};
use crate::symalg::wide::{reduce_fraction, WidePoly, WIDE_CHOP_TOL};
use crate::symalg::{ConjPoly, ConjRational, IdentityCheck, RationalVector, IDENTITY_TOL};

/// Below this relative size a raised vector counts as identically zero.
pub const VANISHING_TOL: f64 = 1e-9;

/// A holomorphic polynomial map `f: C → C^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloVector {
    entries: Vec<ConjPoly>,
}

impl HoloVector {
    pub fn new(entries: Vec<ConjPoly>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::DimensionTooSmall { n: entries.len() });
        }
        if let Some(index) = entries.iter().position(|p| !p.is_holomorphic()) {
            return Err(Error::NotHolomorphic { index });
        }
        if entries.iter().all(ConjPoly::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(HoloVector { entries })
    }

    /// One ascending coefficient list `c_0, c_1, …` per component.
    pub fn from_coefficients(components: &[Vec<Complex64>]) -> Result<Self> {
        HoloVector::new(
            components
                .iter()
                .map(|c| ConjPoly::holomorphic(c))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[ConjPoly] {
        &self.entries
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(ConjPoly::is_constant)
    }

    pub fn to_vector(&self) -> RationalVector {
        RationalVector::from_polys(self.entries.clone())
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `f_r = sqrt(C(n−1, r)) ξ^r`, `r = 0..n−1`.
pub fn veronese(n: usize) -> Result<HoloVector> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let entries = (0..n)
        .map(|r| {
            let c = binomial(n as u64 - 1, r as u64).sqrt();
            ConjPoly::monomial(r as u32, 0, Complex64::new(c, 0.0))
        })
        .collect();
    HoloVector::new(entries)
}

/// `P₊ v = ∂v − (v†·∂v / |v|²) v`.
///
/// Uses `P₊(λ u) = λ P₊(u)` for scalar `λ`, so only the numerator of `v` is
/// raised.
pub fn p_plus(v: &RationalVector) -> Result<RationalVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (w, _, _) = raise_numerator(v.nums());
    let nn = norm_sq_poly(v.nums());
    RationalVector::new(w, &nn * v.den())
}

fn norm_sq_poly(u: &[ConjPoly]) -> ConjPoly {
    u.iter()
        .fold(ConjPoly::zero(), |acc, p| &acc + &(&p.conj() * p))
}

/// `|u|² ∂u − (u†·∂u) u` together with the magnitudes of the two terms.
fn raise_numerator(u: &[ConjPoly]) -> (Vec<ConjPoly>, f64, f64) {
    let nn = norm_sq_poly(u);
    let du: Vec<ConjPoly> = u.iter().map(ConjPoly::d).collect();
    let ip = u
        .iter()
        .zip(&du)
        .fold(ConjPoly::zero(), |acc, (a, b)| &acc + &(&a.conj() * b));
    let mut scale = 0.0f64;
    let mut size = 0.0f64;
    let w = u
        .iter()
        .zip(&du)
        .map(|(ui, dui)| {
            let a = &nn * dui;
            let b = &ip * ui;
            scale = scale.max(a.max_abs()).max(b.max_abs());
            let w = &a - &b;
            size = size.max(w.max_abs());
            w
        })
        .collect();
    (w, size, scale)
}

/// `V_k = P₊ᵏ f` with its squared norm.
#[derive(Clone, Debug)]
pub struct MixedSolution {
    pub k: usize,
    pub vec: RationalVector,
    pub norm_sq: ConjRational,
}

/// The full family `f, P₊f, …, P₊^{N−1} f`.
///
/// Level `k` is `N_k / D_k` with `D_k` the Gram determinant of the jets
/// `f, …, ∂^{k−1}f`. The recurrence `N_{k+1} = w(N_k) / D_k²`, where
/// `w(u) = |u|²∂u − (u†∂u)u`, and `D_{k+1} = |N_k|² / D_k` divide exactly
/// but amplify rounding badly when `D_k` is a high power of `1+|ξ|²`, so it
/// runs in double-double arithmetic and each level is rounded once.
#[derive(Clone, Debug)]
pub struct Tower {
    f: HoloVector,
    members: Vec<MixedSolution>,
    gram: Vec<ConjPoly>,
    truncation_residual: f64,
}

fn wide_norm_sq(u: &[WidePoly]) -> WidePoly {
    u.iter()
        .fold(WidePoly::zero(), |acc, p| acc.add(&p.conj().mul(p)))
}

/// `w(u)` with its size relative to `max|u|²·max|u|`, the scale of its terms.
fn wide_raise(u: &[WidePoly], nn: &WidePoly) -> (Vec<WidePoly>, f64) {
    let du: Vec<WidePoly> = u.iter().map(WidePoly::d).collect();
    let ip = u
        .iter()
        .zip(&du)
        .fold(WidePoly::zero(), |acc, (a, b)| acc.add(&a.conj().mul(b)));
    let w: Vec<WidePoly> = u
        .iter()
        .zip(&du)
        .map(|(ui, dui)| nn.mul(dui).sub(&ip.mul(ui)))
        .collect();
    let scale = nn.max_abs() * u.iter().map(WidePoly::max_abs).fold(0.0, f64::max);
    let size = w.iter().map(WidePoly::max_abs).fold(0.0, f64::max);
    (w, if scale == 0.0 { 0.0 } else { size / scale })
}

/// Rounds `nums / den` to a reduced [`RationalVector`].
fn round_vector(nums: &[WidePoly], den: &WidePoly) -> Result<RationalVector> {
    let mut nums = nums.to_vec();
    let mut den = den.clone();
    reduce_fraction(&mut nums, &mut den);
    RationalVector::new(nums.iter().map(WidePoly::to_poly).collect(), den.to_poly())
}

fn round_scalar(num: &WidePoly, den: &WidePoly) -> Result<ConjRational> {
    let mut nums = [num.clone()];
    let mut den = den.clone();
    reduce_fraction(&mut nums, &mut den);
    ConjRational::new(nums[0].to_poly(), den.to_poly())
}

type Wedge = BTreeMap<u32, WidePoly>;

fn sign(p: WidePoly, odd: bool) -> WidePoly {
    if odd {
        p.neg()
    } else {
        p
    }
}

/// Indices in `set` above `i`: `e_set ∧ e_i = (−1)^{above} e_{set ∪ i}`.
fn above(set: u32, i: usize) -> u32 {
    (set >> (i + 1)).count_ones()
}

/// `ω_0 = 1, ω_1 = f, …, ω_k = f ∧ ∂f ∧ … ∧ ∂^{k−1} f` with Plücker
/// coordinates keyed by index bitmask, and the size of each `ω_{j+1}`
/// relative to `max|ω_j|·max|∂^j f|`.
fn wedges(f: &HoloVector, k: usize) -> (Vec<Wedge>, Vec<f64>) {
    let mut g: Vec<WidePoly> = f.entries().iter().map(WidePoly::from).collect();
    let mut out = vec![Wedge::from([(0, WidePoly::one())])];
    let mut sizes = Vec::with_capacity(k);
    for _ in 0..k {
        let omega = out.last().expect("starts nonempty");
        let mut next = Wedge::new();
        for (&set, w) in omega {
            for (i, gi) in g.iter().enumerate() {
                if set & (1 << i) != 0 || gi.is_zero() {
                    continue;
                }
                let slot = next.entry(set | (1 << i)).or_default();
                *slot = slot.add(&sign(w.mul(gi), above(set, i) % 2 == 1));
            }
        }
        let size = next.values().map(WidePoly::max_abs).fold(0.0, f64::max);
        let scale = omega.values().map(WidePoly::max_abs).fold(0.0, f64::max)
            * g.iter().map(WidePoly::max_abs).fold(0.0, f64::max);
        sizes.push(if scale == 0.0 { 0.0 } else { size / scale });
        next = next
            .into_iter()
            .map(|(s, p)| (s, p.chop(WIDE_CHOP_TOL)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        out.push(next);
        g = g.iter().map(WidePoly::d).collect();
    }
    (out, sizes)
}

fn wedge_norm_sq(omega: &Wedge) -> WidePoly {
    omega
        .values()
        .fold(WidePoly::zero(), |acc, w| acc.add(&w.conj().mul(w)))
        .chop(WIDE_CHOP_TOL)
}

/// `(ι_{e_i} ω)` for every face `ω ↦ ω ∧ e_i`, grouped by the face.
fn faces(omega: &Wedge, n: usize) -> BTreeMap<u32, Vec<(usize, WidePoly)>> {
    let mut out: BTreeMap<u32, Vec<(usize, WidePoly)>> = BTreeMap::new();
    for (&set, w) in omega {
        for i in (0..n).filter(|i| set & (1 << i) != 0) {
            let face = set & !(1 << i);
            out.entry(face)
                .or_default()
                .push((i, sign(w.clone(), above(face, i) % 2 == 1)));
        }
    }
    out
}

/// Numerators (row-major) and denominator of the projector onto
/// `span{f, ∂f, …, ∂^{k−1} f}`, as `Σ_T (ι_T ω_k)(ι_T ω_k)† / |ω_k|²` over
/// `(k−1)`-subsets `T`. The denominator is the Gram determinant `D_k`, so no
/// member denominators get multiplied.
pub(crate) fn span_projector(f: &HoloVector, k: usize) -> (Vec<WidePoly>, WidePoly) {
    let n = f.n();
    let (omegas, _) = wedges(f, k);
    let omega = &omegas[k];
    let mut nums = vec![WidePoly::zero(); n * n];
    for a in faces(omega, n).values() {
        for (i, ai) in a {
            for (j, aj) in a.iter().filter(|(j, _)| j >= i) {
                let slot = &mut nums[i * n + j];
                *slot = slot.add(&ai.mul(&aj.conj()));
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            nums[i * n + j] = nums[i * n + j].chop(WIDE_CHOP_TOL);
            nums[j * n + i] = nums[i * n + j].conj();
        }
    }
    (nums, wedge_norm_sq(omega))
}

/// Build the tower of `f`; fails with [`Error::TowerDegenerate`] if some
/// `P₊ᵏ f` with `k < N` vanishes.
///
/// `P₊ᵏ f = (1 − F_k) ∂ᵏ f` with `F_k` the projector onto the first `k`
/// derivatives, so `P₊ᵏ f = N_k / D_k` with `D_k = |ω_k|²` and
/// `(N_k)_i = ⟨ω_k ∧ e_i, ω_{k+1}⟩`. Everything is a product of
/// polynomials in double-double; nothing is divided until the final rounding.
pub fn tower(f: &HoloVector) -> Result<Tower> {
    let n = f.n();
    let (omegas, sizes) = wedges(f, n);
    if let Some(level) = (1..n).find(|&k| sizes[k] <= VANISHING_TOL) {
        return Err(Error::TowerDegenerate { level });
    }
    let dens: Vec<WidePoly> = omegas.iter().map(wedge_norm_sq).collect();
    let mut members = Vec::with_capacity(n);
    let mut last = Vec::new();
    for k in 0..n {
        let mut u = vec![WidePoly::zero(); n];
        for (face, entries) in faces(&omegas[k + 1], n) {
            let Some(w) = omegas[k].get(&face) else {
                continue;
            };
            let wc = w.conj();
            for (i, p) in entries {
                u[i] = u[i].add(&wc.mul(&p));
            }
        }
        let u: Vec<WidePoly> = u.iter().map(|p| p.chop(WIDE_CHOP_TOL)).collect();
        members.push(MixedSolution {
            k,
            vec: round_vector(&u, &dens[k])?,
            norm_sq: round_scalar(&dens[k + 1], &dens[k])?,
        });
        last = u;
    }
    let (_, truncation_residual) = wide_raise(&last, &wide_norm_sq(&last).chop(WIDE_CHOP_TOL));
    Ok(Tower {
        f: f.clone(),
        members,
        gram: dens.iter().map(WidePoly::to_poly).collect(),
        truncation_residual,
    })
}

impl Tower {
    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn input(&self) -> &HoloVector {
        &self.f
    }

    pub fn members(&self) -> &[MixedSolution] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &MixedSolution {
        &self.members[k]
    }

    /// Gram determinants `D_0 = 1, D_1 = |f|², …, D_N`.
    pub fn gram_determinants(&self) -> &[ConjPoly] {
        &self.gram
    }

    /// Relative size of `P₊ V_{N−1}`; zero for an exact tower.
    pub fn truncation_residual(&self) -> f64 {
        self.truncation_residual
    }

    /// `|V_k|² / |V_{k−1}|²` for `k ≥ 1`, and `0` for `k = N`.
    pub fn norm_ratio(&self, k: usize) -> ConjRational {
        if k >= self.n() {
            return ConjRational::zero();
        }
        let prev = &self.members[k - 1].norm_sq;
        self.members[k]
            .norm_sq
            .div(prev)
            .expect("tower norms are nonzero")
    }

    /// Residual of `V_{k+1} ≡ P₊ V_k`, `k + 1 < N`.
    pub fn recurrence_residual(&self, k: usize) -> Result<f64> {
        let raised = p_plus(&self.members[k].vec)?;
        Ok(vector_residual(&raised, &self.members[k + 1].vec))
    }

    /// Largest pairwise orthogonality residual over `i < j`.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                worst = worst.max(inner_cancellation(
                    self.members[i].vec.nums(),
                    self.members[j].vec.nums(),
                ));
            }
        }
        worst
    }
}

/// `|Σ conj(a_i) b_i|` relative to the largest single product: zero exactly
/// when the vectors are orthogonal as rational functions.
pub(crate) fn inner_cancellation(a: &[ConjPoly], b: &[ConjPoly]) -> f64 {
    let mut sum = ConjPoly::zero();
    let mut scale = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let t = &x.conj() * y;
        scale = scale.max(t.max_abs());
        sum = &sum + &t;
    }
    if scale == 0.0 {
        0.0
    } else {
        sum.max_abs() / scale
    }
}

/// `(N−1)! k! / (N−k−1)! · (1+|ξ|²)^{N−1−2k}`.
pub fn veronese_norm_sq(n: usize, k: usize) -> Result<ConjRational> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let c = factorial(n as u64 - 1) * factorial(k as u64) / factorial((n - k - 1) as u64);
    Ok(power_of_one_plus(
        c,
        n as i64 - 1 - 2 * k as i64,
        ConjPoly::one(),
    ))
}

/// `(N−1)! k! / (N−k−1)! · (N−2k−1) ξ̄ (1+|ξ|²)^{N−2k−2}`.
pub fn veronese_inner_partial(n: usize, k: usize) -> Result<ConjRational> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let c = factorial(n as u64 - 1) * factorial(k as u64) / factorial((n - k - 1) as u64)
        * (n as f64 - 2.0 * k as f64 - 1.0);
    Ok(power_of_one_plus(
        c,
        n as i64 - 2 - 2 * k as i64,
        ConjPoly::xi_bar(),
    ))
}

/// `i(N−i) / (1+|ξ|²)²`, the ratio of consecutive Veronese norms.
pub fn veronese_norm_ratio(n: usize, i: usize) -> ConjRational {
    power_of_one_plus((i * (n - i)) as f64, -2, ConjPoly::one())
}

/// `c · extra · (1+|ξ|²)^e` for any integer `e`.
fn power_of_one_plus(c: f64, e: i64, extra: ConjPoly) -> ConjRational {
    let base = ConjPoly::one_plus_mod_sq();
    if e >= 0 {
        ConjRational::new(&base.pow(e as u32).scale_real(c) * &extra, ConjPoly::one())
    } else {
        ConjRational::new(extra.scale_real(c), base.pow((-e) as u32))
    }
    .expect("nonzero denominator")
}

/// Signed antidiagonal permutation matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiDiagonalMatrix {
    signs: Vec<f64>,
}

impl AntiDiagonalMatrix {
    /// Entry `(j, N−j+1)` is `(−1)^{N+j}` (1-based).
    pub fn relating(n: usize) -> Self {
        AntiDiagonalMatrix {
            signs: (1..=n)
                .map(|j| if (n + j).is_multiple_of(2) { 1.0 } else { -1.0 })
                .collect(),
        }
    }

    /// Entry `(j, N−j+1)` is `(−1)^{1+j}` (1-based), the self-relation for odd N.
    pub fn self_relating(n: usize) -> Self {
        AntiDiagonalMatrix {
            signs: (1..=n)
                .map(|j| if (1 + j) % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n();
        nalgebra::DMatrix::from_fn(
            n,
            n,
            |i, j| if i + j + 1 == n { self.signs[i] } else { 0.0 },
        )
    }

    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        let n = self.n();
        let perm: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
        v.signed_permute(&perm, &self.signs)
    }
}

/// Residual of `P₊^{N−1−k} f = sign·(−1)^k γ_k 𝒜 conj(P₊ᵏ f)` on `tower`.
/// `sign = −1` gives the negative control.
pub fn symmetry_relation_residual(tower: &Tower, k: usize, sign: f64) -> Result<f64> {
    let n = tower.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let partner = n - 1 - k;
    let a = if partner == k {
        AntiDiagonalMatrix::self_relating(n)
    } else {
        AntiDiagonalMatrix::relating(n)
    };
    let gamma = power_of_one_plus(
        factorial(partner as u64) / factorial(k as u64),
        2 * k as i64 + 1 - n as i64,
        ConjPoly::one(),
    );
    let parity = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = a
        .apply(&tower.member(k).vec.conj())
        .scale_by(&gamma)
        .scale(Complex64::new(sign * parity, 0.0));
    Ok(vector_residual(&tower.member(partner).vec, &rhs))
}

/// Antidiagonal relation between `P₊^{N−1−k} f` and `P₊ᵏ f` for the Veronese tower.
pub fn symmetry_relation_check(n: usize, k: usize) -> Result<IdentityCheck> {
    let t = tower(&veronese(n)?)?;
    let residual = symmetry_relation_residual(&t, k, 1.0)?;
    Ok(IdentityCheck::new(
        format!("antidiagonal_relation(N={n},k={k})"),
        residual,
        IDENTITY_TOL,
    ))
}

/// The explicit component formula for `w_r^k`, the r-th entry of `P₊ᵏ f` for
/// the Veronese input, as written in closed form with the coefficient
/// `α^k_r = 1/((r+1)(r−N)) Σ_l |ξ|^{2l} C(k,l) Π_{i=0}^{l}(r+i−N) Π_{j=l}^{k}(r−k+j+1)`.
pub fn veronese_component_closed_form(n: usize, k: usize, r: usize) -> ConjRational {
    let (nf, kf, rf) = (n as f64, k as f64, r as f64);
    let mut alpha = ConjPoly::zero();
    for l in 0..=k {
        let p1: f64 = (0..=l).map(|i| rf + i as f64 - nf).product();
        let p2: f64 = (l..=k).map(|j| rf - kf + j as f64 + 1.0).product();
        let c = binomial(k as u64, l as u64) * p1 * p2 / ((rf + 1.0) * (rf - nf));
        alpha.add_term(
            crate::symalg::Monomial::new(l as u32, l as u32),
            Complex64::new(c, 0.0),
        );
    }
    let weight = binomial(n as u64 - 1, r as u64).sqrt();
    let mut den = ConjPoly::one_plus_mod_sq().pow(k as u32);
    let mut num = alpha.scale_real(weight);
    if r >= k {
        num = num.shift(crate::symalg::Monomial::new((r - k) as u32, 0));
    } else {
        den = den.shift(crate::symalg::Monomial::new((k - r) as u32, 0));
    }
    ConjRational::new(num, den).expect("nonzero denominator")
}

/// Agreement of the closed component formula with the recurrence, per entry.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ClosedFormEntry {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub residual: f64,
    pub matches: bool,
}

/// Compare every `w_r^k`, `k = 1..N−2`, against the Veronese tower.
pub fn closed_form_agreement(tower: &Tower) -> Vec<ClosedFormEntry> {
    let n = tower.n();
    let mut out = Vec::new();
    for k in 1..n.saturating_sub(1) {
        let v = &tower.member(k).vec;
        for r in 0..n {
            let residual = scalar_residual(&v.entry(r), &veronese_component_closed_form(n, k, r));
            out.push(ClosedFormEntry {
                n,
                k,
                r,
                residual,
                matches: residual < IDENTITY_TOL,
            });
        }
    }
    out
}
