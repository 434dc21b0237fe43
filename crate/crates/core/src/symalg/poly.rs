//! Sparse polynomials in the commuting pair `(ξ, ξ̄)` with complex coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A monomial `ξ^z ξ̄^zbar`.
///
/// Ordered graded-lexicographically with `ξ` before `ξ̄`: higher total degree
/// wins, ties are broken by the larger power of `ξ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub z: u32,
    pub zbar: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { z: 0, zbar: 0 };

    pub fn new(z: u32, zbar: u32) -> Self {
        Monomial { z, zbar }
    }

    pub fn degree(self) -> u32 {
        self.z + self.zbar
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.z <= other.z && self.zbar <= other.zbar
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.z + other.z, self.zbar + other.zbar)
    }

    fn over(self, other: Monomial) -> Monomial {
        Monomial::new(self.z - other.z, self.zbar - other.zbar)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.z.cmp(&other.z))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial `Σ c_{a,b} ξ^a ξ̄^b`. Exact zeros are never stored.
/// Size of a polynomial by total degree over the annulus `1/R ≤ |ξ| ≤ R`.
///
/// At radius `ρ` a degree-`d` term weighs `|c| ρ^d`. The envelope at `d` is
/// the smallest bound on `max_t |c_t| ρ^{d_t − d}` over the annulus, so a
/// term far below it is negligible at every radius there, not only near
/// `|ξ| = 1` where the largest coefficient dominates.
#[derive(Clone, Debug, Default)]
pub(crate) struct Envelope {
    levels: Vec<f64>,
}

impl Envelope {
    /// Radius `R` bounding the annulus.
    pub const RADIUS: f64 = 4.0;

    pub fn new(points: impl IntoIterator<Item = (u32, f64)>) -> Self {
        Self::with_radius(points, Self::RADIUS)
    }

    pub fn with_radius(points: impl IntoIterator<Item = (u32, f64)>, radius: f64) -> Self {
        let mut best: BTreeMap<u32, f64> = BTreeMap::new();
        for (d, mag) in points.into_iter().filter(|(_, m)| *m > 0.0) {
            let slot = best.entry(d).or_insert(mag);
            *slot = slot.max(mag);
        }
        let Some(&top) = best.keys().next_back() else {
            return Envelope::default();
        };
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(best.len());
        for (d, mag) in best {
            let p = (d as f64, mag.ln());
            while let [.., a, b] = hull[..] {
                if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let span = radius.ln();
        let mut slopes = vec![-span, span];
        slopes.extend(
            hull.windows(2)
                .map(|w| (w[0].1 - w[1].1) / (w[1].0 - w[0].0))
                .filter(|s| s.abs() < span),
        );
        let levels = (0..=top)
            .map(|d| {
                let x = d as f64;
                slopes
                    .iter()
                    .map(|&s| {
                        hull.iter()
                            .map(|&(dv, lv)| lv + (dv - x) * s)
                            .fold(f64::NEG_INFINITY, f64::max)
                    })
                    .fold(f64::INFINITY, f64::min)
                    .exp()
            })
            .collect();
        Envelope { levels }
    }

    /// Envelope magnitude at total degree `d`.
    pub fn at(&self, d: u32) -> f64 {
        match self.levels.get(d as usize) {
            Some(v) => *v,
            None => self.levels.last().copied().unwrap_or(0.0),
        }
    }
}

#[derive(Clone, PartialEq, Default)]
pub struct ConjPoly {
    terms: BTreeMap<Monomial, Complex64>,
}

impl ConjPoly {
    pub fn zero() -> Self {
        ConjPoly::default()
    }

    pub fn one() -> Self {
        ConjPoly::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        ConjPoly::monomial(0, 0, c)
    }

    pub fn real(c: f64) -> Self {
        ConjPoly::constant(Complex64::new(c, 0.0))
    }

    pub fn monomial(z: u32, zbar: u32, c: Complex64) -> Self {
        let mut p = ConjPoly::zero();
        p.add_term(Monomial::new(z, zbar), c);
        p
    }

    /// The coordinate `ξ`.
    pub fn xi() -> Self {
        ConjPoly::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// The coordinate `ξ̄`.
    pub fn xi_bar() -> Self {
        ConjPoly::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    /// `|ξ|² = ξ ξ̄`.
    pub fn mod_sq() -> Self {
        ConjPoly::monomial(1, 1, Complex64::new(1.0, 0.0))
    }

    /// `1 + |ξ|²`, the factor dominating Veronese denominators.
    pub fn one_plus_mod_sq() -> Self {
        let mut p = ConjPoly::one();
        p.add_term(Monomial::new(1, 1), Complex64::new(1.0, 0.0));
        p
    }

    /// Holomorphic polynomial from ascending coefficients `c_0 + c_1 ξ + …`.
    pub fn holomorphic(coeffs: &[Complex64]) -> Self {
        let mut p = ConjPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::new(i as u32, 0), *c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Complex64)>>(terms: I) -> Self {
        let mut p = ConjPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, z: u32, zbar: u32) -> Complex64 {
        self.terms
            .get(&Monomial::new(z, zbar))
            .copied()
            .unwrap_or_default()
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(Monomial, Complex64)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// `(max power of ξ, max power of ξ̄)`.
    pub fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), m| (a.max(m.z), b.max(m.zbar)))
    }

    /// Largest monomial dividing every term, `ξ^0 ξ̄^0` for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(*first, |acc, m| {
                Monomial::new(acc.z.min(m.z), acc.zbar.min(m.zbar))
            }),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.zbar == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn scale(&self, s: Complex64) -> ConjPoly {
        if s == Complex64::new(0.0, 0.0) {
            return ConjPoly::zero();
        }
        ConjPoly::from_terms(self.terms().map(|(m, c)| (m, c * s)))
    }

    pub fn scale_real(&self, s: f64) -> ConjPoly {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Multiply by the monomial `ξ^z ξ̄^zbar`.
    pub fn shift(&self, by: Monomial) -> ConjPoly {
        ConjPoly {
            terms: self.terms.iter().map(|(m, c)| (m.times(by), *c)).collect(),
        }
    }

    /// Divide by a monomial that divides every term.
    pub fn unshift(&self, by: Monomial) -> ConjPoly {
        debug_assert!(self.terms.keys().all(|m| by.divides(*m)));
        ConjPoly {
            terms: self.terms.iter().map(|(m, c)| (m.over(by), *c)).collect(),
        }
    }

    /// Swap `ξ ↔ ξ̄` and conjugate every coefficient.
    pub fn conj(&self) -> ConjPoly {
        ConjPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.zbar, m.z), c.conj()))
                .collect(),
        }
    }

    /// Wirtinger `∂`: differentiate in `ξ` holding `ξ̄` fixed.
    pub fn d(&self) -> ConjPoly {
        ConjPoly::from_terms(
            self.terms()
                .filter(|(m, _)| m.z > 0)
                .map(|(m, c)| (Monomial::new(m.z - 1, m.zbar), c * m.z as f64)),
        )
    }

    /// Wirtinger `∂̄`: differentiate in `ξ̄` holding `ξ` fixed.
    pub fn dbar(&self) -> ConjPoly {
        ConjPoly::from_terms(
            self.terms()
                .filter(|(m, _)| m.zbar > 0)
                .map(|(m, c)| (Monomial::new(m.z, m.zbar - 1), c * m.zbar as f64)),
        )
    }

    pub fn pow(&self, k: u32) -> ConjPoly {
        let mut acc = ConjPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at `ξ = z` (with `ξ̄ = conj(z)`).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        let (da, db) = self.bidegree();
        let zp = powers(z, da);
        let zbp = powers(zb, db);
        self.terms
            .iter()
            .map(|(m, c)| c * zp[m.z as usize] * zbp[m.zbar as usize])
            .sum()
    }

    /// Largest total degree of a term.
    pub(crate) fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// `self(z)/ρ^top` and its magnitude scale, `ρ = max(|z|, 1)`. Ratios taken
    /// with a shared `top` stay finite far beyond the degrees `f64` powers allow.
    pub(crate) fn eval_damped(&self, z: Complex64, top: u32) -> (Complex64, f64) {
        let rho = z.norm().max(1.0);
        let u = z / rho;
        let (da, db) = self.bidegree();
        let up = powers(u, da);
        let ubp = powers(u.conj(), db);
        let (un, top) = (u.norm(), top as i32);
        let mut value = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let damp = rho.powi(m.degree() as i32 - top);
            value += c * up[m.z as usize] * ubp[m.zbar as usize] * damp;
            scale += c.norm() * un.powi(m.degree() as i32) * damp;
        }
        (value, scale)
    }

    /// `Σ |c| |z|^deg`, the magnitude scale against which cancellation at `z` is judged.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.terms
            .iter()
            .map(|(m, c)| c.norm() * r.powi(m.degree() as i32))
            .sum()
    }

    /// Drop coefficients below `rel` times the degree envelope.
    pub fn chop(&self, rel: f64) -> ConjPoly {
        self.chop_against(rel, &self.envelope())
    }

    pub(crate) fn envelope(&self) -> Envelope {
        Envelope::new(self.terms.iter().map(|(m, c)| (m.degree(), c.norm())))
    }

    /// Drops terms below `rel` times `env` at their degree.
    pub(crate) fn chop_against(&self, rel: f64, env: &Envelope) -> ConjPoly {
        ConjPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| c.norm() > rel * env.at(m.degree()))
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Multivariate division by a single divisor under the graded-lex order.
    ///
    /// Returns `(q, r)` with `self = q·d + r` and no term of `r` divisible by
    /// the leading monomial of `d`.
    pub fn div_rem(&self, d: &ConjPoly) -> (ConjPoly, ConjPoly) {
        let (q, r, _) = self.div_rem_scaled(d);
        (q, r)
    }

    /// [`Self::div_rem`] plus the remainder relative to the envelope of every
    /// magnitude met during the reduction, which bounds its rounding.
    pub fn div_rem_scaled(&self, d: &ConjPoly) -> (ConjPoly, ConjPoly, f64) {
        let (lm, lc) = d.leading().expect("division by the zero polynomial");
        let mut work = self.terms.clone();
        let mut quot = BTreeMap::new();
        let mut rem = BTreeMap::new();
        let mut seen: Vec<(u32, f64)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.degree(), c.norm()))
            .collect();
        while let Some((&m, &c)) = work.iter().next_back() {
            work.remove(&m);
            if lm.divides(m) {
                let qm = m.over(lm);
                let qc = c / lc;
                *quot.entry(qm).or_insert(Complex64::new(0.0, 0.0)) += qc;
                for (dm, dc) in d.terms.iter() {
                    if *dm == lm {
                        continue;
                    }
                    let key = dm.times(qm);
                    let sub = qc * dc;
                    seen.push((key.degree(), sub.norm()));
                    let slot = work.entry(key).or_insert(Complex64::new(0.0, 0.0));
                    *slot -= sub;
                    if *slot == Complex64::new(0.0, 0.0) {
                        work.remove(&key);
                    }
                }
            } else {
                rem.insert(m, c);
            }
        }
        let env = Envelope::new(seen);
        let relative = rem
            .iter()
            .map(|(m, c): (&Monomial, &Complex64)| c.norm() / env.at(m.degree()))
            .fold(0.0, f64::max);
        (
            ConjPoly::from_terms(quot),
            ConjPoly::from_terms(rem),
            relative,
        )
    }

    /// Relative remainder of the division by `d`, with the quotient.
    pub fn div_check(&self, d: &ConjPoly) -> (ConjPoly, f64) {
        if self.is_zero() {
            return (ConjPoly::zero(), 0.0);
        }
        let (q, _, relative) = self.div_rem_scaled(d);
        (q, relative)
    }

    /// Quotient when `d` divides `self` up to relative remainder `tol`.
    pub fn exact_div(&self, d: &ConjPoly, tol: f64) -> Option<ConjPoly> {
        if self.is_zero() {
            return Some(ConjPoly::zero());
        }
        if d.len() == 1 {
            let (m, c) = d.leading()?;
            if self.terms.keys().all(|t| m.divides(*t)) {
                return Some(self.unshift(m).scale(c.inv()));
            }
            return None;
        }
        let (q, remainder) = self.div_check(d);
        if remainder <= tol {
            Some(q.chop(1e-15))
        } else {
            None
        }
    }

    /// Maximum coefficient difference relative to the larger of the two polynomials.
    pub fn rel_distance(&self, other: &ConjPoly) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        (self - other).max_abs() / scale
    }

    /// Dense product: bidegrees here stay small enough for a flat accumulator.
    fn mul_dense(&self, other: &ConjPoly) -> ConjPoly {
        if self.is_zero() || other.is_zero() {
            return ConjPoly::zero();
        }
        let (a1, b1) = self.bidegree();
        let (a2, b2) = other.bidegree();
        let width = (b1 + b2 + 1) as usize;
        let mut acc = vec![Complex64::new(0.0, 0.0); (a1 + a2 + 1) as usize * width];
        let rhs: Vec<(usize, Complex64)> = other
            .terms
            .iter()
            .map(|(m, c)| (m.z as usize * width + m.zbar as usize, *c))
            .collect();
        for (m, c) in self.terms.iter() {
            let base = m.z as usize * width + m.zbar as usize;
            for (off, d) in rhs.iter() {
                acc[base + off] += c * d;
            }
        }
        let mut terms = BTreeMap::new();
        for (idx, c) in acc.into_iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                terms.insert(Monomial::new((idx / width) as u32, (idx % width) as u32), c);
            }
        }
        ConjPoly { terms }
    }
}

fn powers(z: Complex64, n: u32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}

impl fmt::Debug for ConjPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ConjPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match m.z {
                0 => {}
                1 => write!(f, "·ξ")?,
                k => write!(f, "·ξ^{k}")?,
            }
            match m.zbar {
                0 => {}
                1 => write!(f, "·ξ̄")?,
                k => write!(f, "·ξ̄^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn add(self, rhs: &ConjPoly) -> ConjPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a> Sub<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn sub(self, rhs: &ConjPoly) -> ConjPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn mul(self, rhs: &ConjPoly) -> ConjPoly {
        self.mul_dense(rhs)
    }
}

impl Neg for &ConjPoly {
    type Output = ConjPoly;
    fn neg(self) -> ConjPoly {
        self.scale_real(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ConjPoly> for ConjPoly {
            type Output = ConjPoly;
            fn $m(self, rhs: ConjPoly) -> ConjPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ConjPoly> for ConjPoly {
            type Output = ConjPoly;
            fn $m(self, rhs: &ConjPoly) -> ConjPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
