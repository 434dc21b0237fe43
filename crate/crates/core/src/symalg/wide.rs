//! Double-double polynomials for constructions whose intermediate
//! coefficients cancel heavily, such as exact division by high powers of
//! `1 + |ξ|²`. Results are rounded back to [`ConjPoly`].

use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use super::poly::{ConjPoly, Envelope, Monomial};

pub(crate) type WideComplex = Complex<TwoFloat>;

fn widen(c: Complex64) -> WideComplex {
    Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
}

fn narrow(c: WideComplex) -> Complex64 {
    Complex64::new(f64::from(c.re), f64::from(c.im))
}

fn magnitude(c: &WideComplex) -> f64 {
    f64::from(c.re).hypot(f64::from(c.im))
}

fn zero() -> WideComplex {
    Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0))
}

/// `1/c` by one Newton step from the `f64` reciprocal; the crate's own
/// division keeps only `f64` accuracy.
pub(crate) fn recip(c: WideComplex) -> WideComplex {
    let m = c.re * c.re + c.im * c.im;
    let y = TwoFloat::from(1.0 / m.hi());
    let y = y + y * (TwoFloat::from(1.0) - m * y);
    Complex::new(c.re * y, -(c.im * y))
}

fn is_zero(c: &WideComplex) -> bool {
    c.re.hi() == 0.0 && c.im.hi() == 0.0
}

#[derive(Clone, Debug, Default)]
pub(crate) struct WidePoly {
    terms: BTreeMap<Monomial, WideComplex>,
}

impl WidePoly {
    pub fn zero() -> Self {
        WidePoly::default()
    }

    pub fn one() -> Self {
        WidePoly::from(&ConjPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(magnitude).fold(0.0, f64::max)
    }

    /// Drops terms below `rel` times the degree envelope.
    pub fn chop(&self, rel: f64) -> WidePoly {
        let env = Envelope::new(self.terms.iter().map(|(m, c)| (m.degree(), magnitude(c))));
        WidePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| magnitude(c) > rel * env.at(m.degree()))
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    pub fn to_poly(&self) -> ConjPoly {
        ConjPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, narrow(*c))))
    }

    fn from_map(mut terms: BTreeMap<Monomial, WideComplex>) -> Self {
        terms.retain(|_, c| !is_zero(c));
        WidePoly { terms }
    }

    pub fn add(&self, other: &WidePoly) -> WidePoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let slot = terms.entry(*m).or_insert_with(zero);
            *slot += *c;
        }
        Self::from_map(terms)
    }

    pub fn sub(&self, other: &WidePoly) -> WidePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WidePoly {
        WidePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -*c)).collect(),
        }
    }

    pub fn mul(&self, other: &WidePoly) -> WidePoly {
        if self.is_zero() || other.is_zero() {
            return WidePoly::zero();
        }
        let (a1, b1) = self.bidegree();
        let (a2, b2) = other.bidegree();
        let width = (b1 + b2 + 1) as usize;
        let mut acc = vec![zero(); (a1 + a2 + 1) as usize * width];
        let rhs: Vec<(usize, WideComplex)> = other
            .terms
            .iter()
            .map(|(m, c)| (m.z as usize * width + m.zbar as usize, *c))
            .collect();
        for (m, c) in &self.terms {
            let base = m.z as usize * width + m.zbar as usize;
            for (off, d) in &rhs {
                acc[base + off] += *c * *d;
            }
        }
        Self::from_map(
            acc.into_iter()
                .enumerate()
                .map(|(idx, c)| (Monomial::new((idx / width) as u32, (idx % width) as u32), c))
                .collect(),
        )
    }

    fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), m| (a.max(m.z), b.max(m.zbar)))
    }

    pub fn conj(&self) -> WidePoly {
        WidePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.zbar, m.z), c.conj()))
                .collect(),
        }
    }

    /// `∂/∂ξ`.
    pub fn d(&self) -> WidePoly {
        Self::from_map(
            self.terms
                .iter()
                .filter(|(m, _)| m.z > 0)
                .map(|(m, c)| {
                    let k = TwoFloat::from(m.z as f64);
                    (
                        Monomial::new(m.z - 1, m.zbar),
                        Complex::new(c.re * k, c.im * k),
                    )
                })
                .collect(),
        )
    }

    /// `∂/∂ξ̄`.
    pub fn dbar(&self) -> WidePoly {
        Self::from_map(
            self.terms
                .iter()
                .filter(|(m, _)| m.zbar > 0)
                .map(|(m, c)| {
                    let k = TwoFloat::from(m.zbar as f64);
                    (
                        Monomial::new(m.z, m.zbar - 1),
                        Complex::new(c.re * k, c.im * k),
                    )
                })
                .collect(),
        )
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::ONE;
        };
        it.fold(*first, |acc, m| {
            Monomial::new(acc.z.min(m.z), acc.zbar.min(m.zbar))
        })
    }

    pub fn unshift(&self, by: Monomial) -> WidePoly {
        WidePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.z - by.z, m.zbar - by.zbar), *c))
                .collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> WidePoly {
        let s = TwoFloat::from(s);
        Self::from_map(
            self.terms
                .iter()
                .map(|(m, c)| (*m, Complex::new(c.re * s, c.im * s)))
                .collect(),
        )
    }

    pub fn scale(&self, s: WideComplex) -> WidePoly {
        Self::from_map(self.terms.iter().map(|(m, c)| (*m, *c * s)).collect())
    }

    pub fn leading(&self) -> Option<(Monomial, WideComplex)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// Quotient by `d` and the remainder relative to the envelope of the
    /// magnitudes met during the reduction.
    pub fn div_check(&self, d: &WidePoly) -> (WidePoly, f64) {
        if self.is_zero() {
            return (WidePoly::zero(), 0.0);
        }
        let (lm, lc) = d.leading().expect("division by the zero polynomial");
        let inv = recip(lc);
        let mut work = self.terms.clone();
        let mut quot = BTreeMap::new();
        let mut rem = Vec::new();
        let mut seen: Vec<(u32, f64)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.degree(), magnitude(c)))
            .collect();
        while let Some((&m, &c)) = work.iter().next_back() {
            work.remove(&m);
            if !lm.divides(m) {
                rem.push((m.degree(), magnitude(&c)));
                continue;
            }
            let qm = Monomial::new(m.z - lm.z, m.zbar - lm.zbar);
            let qc = c * inv;
            quot.insert(qm, qc);
            for (dm, dc) in d.terms.iter().filter(|(dm, _)| **dm != lm) {
                let key = Monomial::new(dm.z + qm.z, dm.zbar + qm.zbar);
                let sub = qc * *dc;
                seen.push((key.degree(), magnitude(&sub)));
                let slot = work.entry(key).or_insert_with(zero);
                *slot -= sub;
                if is_zero(slot) {
                    work.remove(&key);
                }
            }
        }
        let env = Envelope::new(seen);
        let relative = rem.iter().map(|&(d, r)| r / env.at(d)).fold(0.0, f64::max);
        (Self::from_map(quot), relative)
    }
}

impl From<&ConjPoly> for WidePoly {
    fn from(p: &ConjPoly) -> Self {
        WidePoly {
            terms: p.terms().map(|(m, c)| (m, widen(c))).collect(),
        }
    }
}

/// `nums(z) / den(z)` with every sum in double-double, so the only error is
/// the final rounding; `None` at a pole of `den`.
pub(crate) fn eval_ratio<'a>(
    nums: impl IntoIterator<Item = &'a ConjPoly>,
    den: &ConjPoly,
    z: Complex64,
) -> Option<Vec<Complex64>> {
    let d = eval_wide(den, z);
    if magnitude(&d) <= super::POLE_TOL * den.eval_scale(z) {
        return None;
    }
    let inv = recip(d);
    Some(
        nums.into_iter()
            .map(|p| narrow(eval_wide(p, z) * inv))
            .collect(),
    )
}

fn eval_wide(p: &ConjPoly, z: Complex64) -> WideComplex {
    let powers = |w: WideComplex, k: u32| {
        let mut out = vec![widen(Complex64::new(1.0, 0.0))];
        for _ in 0..k {
            let last = *out.last().expect("nonempty");
            out.push(last * w);
        }
        out
    };
    let (a, b) = p.bidegree();
    let zp = powers(widen(z), a);
    let zbp = powers(widen(z.conj()), b);
    p.terms().fold(zero(), |acc, (m, c)| {
        acc + widen(c) * zp[m.z as usize] * zbp[m.zbar as usize]
    })
}

/// Quotient-rule derivative of `nums / den` by `op`, in double-double and
/// rounded once: numerators `op(p)·den − p·op(den)` over `den²`.
pub(crate) fn derive_fraction(
    nums: &[ConjPoly],
    den: &ConjPoly,
    op: fn(&WidePoly) -> WidePoly,
) -> (Vec<ConjPoly>, ConjPoly) {
    let d = WidePoly::from(den);
    let dd = op(&d);
    let out = nums
        .iter()
        .map(|p| {
            let w = WidePoly::from(p);
            op(&w).mul(&d).sub(&w.mul(&dd)).to_poly()
        })
        .collect();
    (out, d.mul(&d).to_poly())
}

/// `tr(∂P · op(P))` for `P = nums/den` with row-major `n×n` numerators,
/// formed in double-double over `den⁴`, reduced and rounded once.
pub(crate) fn trace_derivative_product(
    n: usize,
    nums: &[ConjPoly],
    den: &ConjPoly,
    op: fn(&WidePoly) -> WidePoly,
) -> (ConjPoly, ConjPoly) {
    let d = WidePoly::from(den);
    let (dz, dop) = (d.d(), op(&d));
    let m: Vec<WidePoly> = nums.iter().map(WidePoly::from).collect();
    let a: Vec<WidePoly> = m.iter().map(|x| x.d().mul(&d).sub(&x.mul(&dz))).collect();
    let b: Vec<WidePoly> = m.iter().map(|x| op(x).mul(&d).sub(&x.mul(&dop))).collect();
    let mut num = WidePoly::zero();
    for i in 0..n {
        for k in 0..n {
            let (x, y) = (&a[i * n + k], &b[k * n + i]);
            if !x.is_zero() && !y.is_zero() {
                num = num.add(&x.mul(y));
            }
        }
    }
    let d2 = d.mul(&d);
    let mut den = d2.mul(&d2);
    let mut nums = [num.chop(WIDE_CHOP_TOL)];
    reduce_fraction(&mut nums, &mut den);
    (nums[0].to_poly(), den.to_poly())
}

/// `−4 ∂∂̄ ln g / g` for `g = num/den`, as the single fraction
/// `−4[den²(num·num_ξξ̄ − num_ξ num_ξ̄) − num²(den·den_ξξ̄ − den_ξ den_ξ̄)] / (num³ den)`.
pub(crate) fn log_laplacian_ratio(num: &ConjPoly, den: &ConjPoly) -> (ConjPoly, ConjPoly) {
    let levi = |p: &WidePoly| {
        let (pz, pb) = (p.d(), p.dbar());
        p.mul(&pz.dbar()).sub(&pz.mul(&pb))
    };
    let (n, m) = (WidePoly::from(num), WidePoly::from(den));
    let (n2, m2) = (n.mul(&n), m.mul(&m));
    let top = m2.mul(&levi(&n)).sub(&n2.mul(&levi(&m))).scale_real(-4.0);
    let mut bottom = n2.mul(&n).mul(&m);
    let mut nums = [top.chop(WIDE_CHOP_TOL)];
    reduce_fraction(&mut nums, &mut bottom);
    (nums[0].to_poly(), bottom.to_poly())
}

/// Relative remainder below which a factor of `1 + |ξ|²` is stripped. The
/// dropped remainder is the size of the error introduced, and inputs carry
/// `f64` rounding, so this sits above `f64` precision.
pub(crate) const WIDE_DIVISION_TOL: f64 = 1e-13;
/// Coefficients below this fraction of the largest one are rounding debris.
pub(crate) const WIDE_CHOP_TOL: f64 = 1e-26;

/// Strips the common monomial and every common power of `1 + |ξ|²` from the
/// fraction `nums / den`, then makes `den` monic.
pub(crate) fn reduce_fraction(nums: &mut [WidePoly], den: &mut WidePoly) {
    let mut content = den.monomial_content();
    for p in nums.iter().filter(|p| !p.is_zero()) {
        let m = p.monomial_content();
        content = Monomial::new(content.z.min(m.z), content.zbar.min(m.zbar));
    }
    if content.degree() > 0 {
        *den = den.unshift(content);
        for p in nums.iter_mut() {
            *p = p.unshift(content);
        }
    }
    let factor = WidePoly::from(&ConjPoly::one_plus_mod_sq());
    'strip: while den.terms.len() > 1 {
        let (dq, r) = den.div_check(&factor);
        if r > WIDE_DIVISION_TOL {
            break;
        }
        let mut reduced = Vec::with_capacity(nums.len());
        for p in nums.iter() {
            let (q, r) = p.div_check(&factor);
            if r > WIDE_DIVISION_TOL {
                break 'strip;
            }
            reduced.push(q);
        }
        *den = dq;
        nums.clone_from_slice(&reduced);
    }
    if let Some((_, lc)) = den.leading() {
        let inv = recip(lc);
        *den = den.scale(inv);
        for p in nums.iter_mut() {
            *p = p.scale(inv);
        }
    }
}

/// `Σ c_i nums_i / den_i` over fractions already passed through
/// [`reduce_fraction`], reusing a denominator whenever one divides another.
pub(crate) fn sum_fractions(
    terms: Vec<(f64, Vec<WidePoly>, WidePoly)>,
) -> (Vec<WidePoly>, WidePoly) {
    let mut iter = terms.into_iter();
    let Some((c, first, mut den)) = iter.next() else {
        return (Vec::new(), WidePoly::one());
    };
    let mut nums: Vec<WidePoly> = first.iter().map(|p| p.scale_real(c)).collect();
    for (c, next, d) in iter {
        let (q, r) = den.div_check(&d);
        if r <= WIDE_DIVISION_TOL {
            let q = q.chop(WIDE_CHOP_TOL);
            for (a, b) in nums.iter_mut().zip(&next) {
                *a = a.add(&b.mul(&q).scale_real(c));
            }
            continue;
        }
        let (q, r) = d.div_check(&den);
        let (mine, theirs, joint) = if r <= WIDE_DIVISION_TOL {
            (q.chop(WIDE_CHOP_TOL), WidePoly::one(), d)
        } else {
            (d.clone(), den.clone(), den.mul(&d))
        };
        for (a, b) in nums.iter_mut().zip(&next) {
            *a = a.mul(&mine).add(&b.mul(&theirs).scale_real(c));
        }
        den = joint;
    }
    (nums, den)
}
