//! Rational functions over [`ConjPoly`].

use std::fmt;

use num_complex::Complex64;

use super::poly::{ConjPoly, Envelope};
use super::wide::{derive_fraction, WidePoly};
use crate::error::{Error, Result};

/// Relative remainder below which a polynomial division counts as exact.
pub const DIVISION_TOL: f64 = 1e-13;
/// Coefficients below this fraction of the degree envelope are rounding debris.
pub const CHOP_TOL: f64 = 1e-15;
/// `|den(z)|` below this fraction of its term magnitude at `z` is a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Removes factors shared by every numerator and the denominator: the
/// largest common monomial and every common power of `1 + |ξ|²`. Leaves the
/// denominator monic.
pub(crate) fn normalize_fraction(nums: &mut [ConjPoly], den: &mut ConjPoly) {
    if nums.iter().all(ConjPoly::is_zero) {
        nums.iter_mut().for_each(|p| *p = ConjPoly::zero());
        *den = ConjPoly::one();
        return;
    }
    let joint = Envelope::new(nums.iter().flat_map(|p| {
        p.terms()
            .map(|(m, c)| (m.degree(), c.norm()))
            .collect::<Vec<_>>()
    }));
    for p in nums.iter_mut() {
        *p = p.chop_against(CHOP_TOL, &joint);
    }
    *den = den.chop(CHOP_TOL);

    let mut content = den.monomial_content();
    for p in nums.iter().filter(|p| !p.is_zero()) {
        let m = p.monomial_content();
        content.z = content.z.min(m.z);
        content.zbar = content.zbar.min(m.zbar);
    }
    if content.degree() > 0 {
        *den = den.unshift(content);
        for p in nums.iter_mut() {
            *p = p.unshift(content);
        }
    }

    let factor = ConjPoly::one_plus_mod_sq();
    'strip: while den.len() > 1 {
        let Some(dq) = den.exact_div(&factor, DIVISION_TOL) else {
            break;
        };
        let mut reduced = Vec::with_capacity(nums.len());
        for p in nums.iter() {
            match p.exact_div(&factor, DIVISION_TOL) {
                Some(q) => reduced.push(q),
                None => break 'strip,
            }
        }
        *den = dq;
        nums.clone_from_slice(&reduced);
    }

    if let Some((_, lc)) = den.leading() {
        let inv = lc.inv();
        *den = den.scale(inv);
        for p in nums.iter_mut() {
            *p = p.scale(inv);
        }
    }
}

/// `nums(z)/den(z)`, damped so that high degrees do not overflow; errors at a pole.
pub(crate) fn eval_fraction(
    nums: &[ConjPoly],
    den: &ConjPoly,
    z: Complex64,
) -> Result<Vec<Complex64>> {
    let top = nums
        .iter()
        .chain(std::iter::once(den))
        .map(ConjPoly::total_degree)
        .max()
        .unwrap_or(0);
    let (d, scale) = den.eval_damped(z, top);
    if d.norm() <= POLE_TOL * scale {
        return Err(Error::PoleAtPoint { re: z.re, im: z.im });
    }
    Ok(nums.iter().map(|p| p.eval_damped(z, top).0 / d).collect())
}

/// Least common multiple by divisibility checks: returns `(l, ma, mb)` with
/// `l = a·ma = b·mb`. Falls back to the plain product.
pub(crate) fn common_denominator(a: &ConjPoly, b: &ConjPoly) -> (ConjPoly, ConjPoly, ConjPoly) {
    if a.rel_distance(b) <= 1e-13 {
        return (a.clone(), ConjPoly::one(), ConjPoly::one());
    }
    if a.len() <= b.len() {
        if let Some(q) = b.exact_div(a, DIVISION_TOL) {
            return (b.clone(), q, ConjPoly::one());
        }
    } else if let Some(q) = a.exact_div(b, DIVISION_TOL) {
        return (a.clone(), ConjPoly::one(), q);
    }
    (a * b, b.clone(), a.clone())
}

/// `num / den` with `den ≠ 0`, stored with a monic denominator.
#[derive(Clone, PartialEq)]
pub struct ConjRational {
    num: ConjPoly,
    den: ConjPoly,
}

impl ConjRational {
    pub fn new(num: ConjPoly, den: ConjPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut nums = [num];
        let mut den = den;
        normalize_fraction(&mut nums, &mut den);
        let [num] = nums;
        Ok(ConjRational { num, den })
    }

    pub fn from_poly(p: ConjPoly) -> Self {
        ConjRational {
            num: p,
            den: ConjPoly::one(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_poly(ConjPoly::constant(c))
    }

    pub fn real(c: f64) -> Self {
        Self::from_poly(ConjPoly::real(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(ConjPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(ConjPoly::one())
    }

    pub fn num(&self) -> &ConjPoly {
        &self.num
    }

    pub fn den(&self) -> &ConjPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &ConjRational) -> ConjRational {
        let (den, ma, mb) = common_denominator(&self.den, &other.den);
        let num = &(&self.num * &ma) + &(&other.num * &mb);
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &ConjRational) -> ConjRational {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ConjRational {
        ConjRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &ConjRational) -> ConjRational {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn div(&self, other: &ConjRational) -> Result<ConjRational> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn scale(&self, s: Complex64) -> ConjRational {
        ConjRational {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn scale_real(&self, s: f64) -> ConjRational {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Wirtinger `∂` by the quotient rule.
    pub fn d(&self) -> ConjRational {
        let (nums, den) = derive_fraction(std::slice::from_ref(&self.num), &self.den, WidePoly::d);
        let [num] = <[ConjPoly; 1]>::try_from(nums).expect("one numerator");
        Self::new(num, den).expect("nonzero denominator")
    }

    /// Wirtinger `∂̄` by the quotient rule.
    pub fn dbar(&self) -> ConjRational {
        let (nums, den) =
            derive_fraction(std::slice::from_ref(&self.num), &self.den, WidePoly::dbar);
        let [num] = <[ConjPoly; 1]>::try_from(nums).expect("one numerator");
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn conj(&self) -> ConjRational {
        Self::new(self.num.conj(), self.den.conj()).expect("nonzero denominator")
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(eval_fraction(std::slice::from_ref(&self.num), &self.den, z)?[0])
    }

    /// Relative coefficient residual of `self − other` after cross-multiplying.
    pub fn rel_distance(&self, other: &ConjRational) -> f64 {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        lhs.rel_distance(&rhs)
    }
}

impl fmt::Debug for ConjRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

impl From<ConjPoly> for ConjRational {
    fn from(p: ConjPoly) -> Self {
        ConjRational::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn denominator_is_monic() {
        let r = ConjRational::new(
            ConjPoly::xi(),
            ConjPoly::one_plus_mod_sq().scale(c(0.0, 2.0)),
        )
        .unwrap();
        assert_eq!(r.den().leading().unwrap().1, c(1.0, 0.0));
        assert!((r.eval(c(1.0, 0.0)).unwrap() - c(0.0, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn strips_common_factors() {
        let f = ConjPoly::one_plus_mod_sq();
        let num = &(&f * &f) * &ConjPoly::xi();
        let den = &f.pow(3) * &ConjPoly::mod_sq();
        let r = ConjRational::new(num, den).unwrap();
        assert_eq!(r.num(), &ConjPoly::one());
        assert_eq!(r.den(), &(&f * &ConjPoly::xi_bar()));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            ConjRational::new(ConjPoly::one(), ConjPoly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn pole_detected() {
        let r = ConjRational::new(ConjPoly::one(), ConjPoly::xi()).unwrap();
        assert!(matches!(
            r.eval(c(0.0, 0.0)),
            Err(Error::PoleAtPoint { .. })
        ));
    }

    #[test]
    fn quotient_rule_mixed_partials_commute() {
        let num = &ConjPoly::xi() + &ConjPoly::monomial(1, 2, c(0.3, 1.0));
        let r = ConjRational::new(num, ConjPoly::one_plus_mod_sq().pow(2)).unwrap();
        assert!(r.d().dbar().rel_distance(&r.dbar().d()) < 1e-13);
    }

    #[test]
    fn add_uses_divisible_denominator() {
        let f = ConjPoly::one_plus_mod_sq();
        let a = ConjRational::new(ConjPoly::xi(), f.clone()).unwrap();
        let b = ConjRational::new(ConjPoly::xi_bar(), f.pow(2)).unwrap();
        let s = a.add(&b);
        assert_eq!(s.den().bidegree(), (2, 2));
    }
}
