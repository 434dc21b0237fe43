//! Vectors and square matrices of rational functions sharing one denominator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::poly::ConjPoly;
use super::rational::{common_denominator, eval_fraction, normalize_fraction, ConjRational};
use super::wide::{derive_fraction, WidePoly};
use crate::error::{Error, Result};

/// `nums / den`, a C^N-valued rational map.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalVector {
    nums: Vec<ConjPoly>,
    den: ConjPoly,
}

impl RationalVector {
    pub fn new(nums: Vec<ConjPoly>, den: ConjPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut nums = nums;
        let mut den = den;
        normalize_fraction(&mut nums, &mut den);
        Ok(RationalVector { nums, den })
    }

    pub fn from_polys(nums: Vec<ConjPoly>) -> Self {
        RationalVector {
            nums,
            den: ConjPoly::one(),
        }
    }

    /// Bring independent rational entries onto one denominator.
    pub fn from_entries(entries: &[ConjRational]) -> Self {
        let mut den = ConjPoly::one();
        for e in entries {
            den = common_denominator(&den, e.den()).0;
        }
        let nums = entries
            .iter()
            .map(|e| {
                let q = den
                    .exact_div(e.den(), 1e-9)
                    .expect("common denominator is a multiple");
                e.num() * &q
            })
            .collect();
        RationalVector::new(nums, den).expect("nonzero denominator")
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn nums(&self) -> &[ConjPoly] {
        &self.nums
    }

    pub fn den(&self) -> &ConjPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(ConjPoly::is_zero)
    }

    pub fn entry(&self, i: usize) -> ConjRational {
        ConjRational::new(self.nums[i].clone(), self.den.clone()).expect("nonzero denominator")
    }

    /// Entrywise conjugate (not transpose: vectors carry no orientation here).
    pub fn conj(&self) -> RationalVector {
        RationalVector::new(
            self.nums.iter().map(ConjPoly::conj).collect(),
            self.den.conj(),
        )
        .expect("nonzero denominator")
    }

    pub fn d(&self) -> RationalVector {
        let (nums, den) = derive_fraction(&self.nums, &self.den, WidePoly::d);
        RationalVector::new(nums, den).expect("nonzero denominator")
    }

    pub fn dbar(&self) -> RationalVector {
        let (nums, den) = derive_fraction(&self.nums, &self.den, WidePoly::dbar);
        RationalVector::new(nums, den).expect("nonzero denominator")
    }

    /// Hermitian product `self† · other`.
    pub fn inner(&self, other: &RationalVector) -> ConjRational {
        let num = self
            .nums
            .iter()
            .zip(&other.nums)
            .fold(ConjPoly::zero(), |acc, (a, b)| &acc + &(&a.conj() * b));
        ConjRational::new(num, &self.den.conj() * &other.den).expect("nonzero denominator")
    }

    /// `|v|² = v† · v`.
    pub fn norm_sq(&self) -> ConjRational {
        self.inner(self)
    }

    /// Multiply every entry by a scalar rational function.
    pub fn scale_by(&self, s: &ConjRational) -> RationalVector {
        RationalVector::new(
            self.nums.iter().map(|p| p * s.num()).collect(),
            &self.den * s.den(),
        )
        .expect("nonzero denominator")
    }

    pub fn scale(&self, s: Complex64) -> RationalVector {
        RationalVector {
            nums: self.nums.iter().map(|p| p.scale(s)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        let (den, ma, mb) = common_denominator(&self.den, &other.den);
        let nums = self
            .nums
            .iter()
            .zip(&other.nums)
            .map(|(a, b)| &(a * &ma) - &(b * &mb))
            .collect();
        RationalVector::new(nums, den).expect("nonzero denominator")
    }

    /// Permute-and-sign by an antidiagonal-like signed permutation: entry i of the
    /// result is `sign[i] · self[perm[i]]`.
    pub fn signed_permute(&self, perm: &[usize], sign: &[f64]) -> RationalVector {
        RationalVector {
            nums: perm
                .iter()
                .zip(sign)
                .map(|(&j, &s)| self.nums[j].scale_real(s))
                .collect(),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<DVector<Complex64>> {
        let vals = eval_fraction(&self.nums, &self.den, z)?;
        Ok(DVector::from_vec(vals))
    }

    /// Relative residual against `other`, entries cross-multiplied.
    pub fn rel_distance(&self, other: &RationalVector) -> f64 {
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for (a, b) in self.nums.iter().zip(&other.nums) {
            let lhs = a * &other.den;
            let rhs = b * &self.den;
            scale = scale.max(lhs.max_abs()).max(rhs.max_abs());
            diff = diff.max((&lhs - &rhs).max_abs());
        }
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

/// Square `n×n` matrix `nums / den`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    n: usize,
    nums: Vec<ConjPoly>,
    den: ConjPoly,
}

impl RationalMatrix {
    pub fn new(n: usize, nums: Vec<ConjPoly>, den: ConjPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        assert_eq!(nums.len(), n * n, "matrix shape");
        let mut nums = nums;
        let mut den = den;
        normalize_fraction(&mut nums, &mut den);
        Ok(RationalMatrix { n, nums, den })
    }

    /// Keeps the given denominator as is.
    pub(crate) fn raw(n: usize, nums: Vec<ConjPoly>, den: ConjPoly) -> Self {
        RationalMatrix { n, nums, den }
    }

    pub fn zeros(n: usize) -> Self {
        RationalMatrix::raw(n, vec![ConjPoly::zero(); n * n], ConjPoly::one())
    }

    pub fn identity(n: usize) -> Self {
        let mut nums = vec![ConjPoly::zero(); n * n];
        for i in 0..n {
            nums[i * n + i] = ConjPoly::one();
        }
        RationalMatrix::raw(n, nums, ConjPoly::one())
    }

    /// Matrix with given rational entries (row-major).
    pub fn from_entries(n: usize, entries: &[ConjRational]) -> Self {
        let v = RationalVector::from_entries(entries);
        RationalMatrix::new(n, v.nums, v.den).expect("nonzero denominator")
    }

    /// `u ⊗ w† / den` for polynomial vectors.
    pub fn outer(u: &[ConjPoly], w: &[ConjPoly], den: ConjPoly) -> Result<Self> {
        let n = u.len();
        let wc: Vec<ConjPoly> = w.iter().map(ConjPoly::conj).collect();
        let mut nums = Vec::with_capacity(n * n);
        for a in u {
            for b in &wc {
                nums.push(a * b);
            }
        }
        RationalMatrix::new(n, nums, den)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn den(&self) -> &ConjPoly {
        &self.den
    }

    pub fn num(&self, i: usize, j: usize) -> &ConjPoly {
        &self.nums[i * self.n + j]
    }

    pub fn nums(&self) -> &[ConjPoly] {
        &self.nums
    }

    pub fn entry(&self, i: usize, j: usize) -> ConjRational {
        ConjRational::new(self.num(i, j).clone(), self.den.clone()).expect("nonzero denominator")
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(ConjPoly::is_zero)
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        let (den, ma, mb) = common_denominator(&self.den, &other.den);
        let nums = self
            .nums
            .iter()
            .zip(&other.nums)
            .map(|(a, b)| &(a * &ma) + &(b * &mb))
            .collect();
        RationalMatrix::new(self.n, nums, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RationalMatrix) -> RationalMatrix {
        self.add(&other.scale_real(-1.0))
    }

    pub fn scale(&self, s: Complex64) -> RationalMatrix {
        RationalMatrix::raw(
            self.n,
            self.nums.iter().map(|p| p.scale(s)).collect(),
            self.den.clone(),
        )
    }

    pub fn scale_real(&self, s: f64) -> RationalMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Multiply every entry by a scalar rational function.
    pub fn scale_by(&self, s: &ConjRational) -> RationalMatrix {
        RationalMatrix::new(
            self.n,
            self.nums.iter().map(|p| p * s.num()).collect(),
            &self.den * s.den(),
        )
        .expect("nonzero denominator")
    }

    /// Numerator of the product over the product of denominators, unnormalized.
    pub(crate) fn mul_raw(&self, other: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        let mut nums = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ConjPoly::zero();
                for k in 0..n {
                    let a = self.num(i, k);
                    let b = other.num(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                nums.push(acc);
            }
        }
        RationalMatrix::raw(n, nums, &self.den * &other.den)
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let raw = self.mul_raw(other);
        RationalMatrix::new(raw.n, raw.nums, raw.den).expect("nonzero denominator")
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &RationalMatrix) -> RationalMatrix {
        let ab = self.mul_raw(other);
        let ba = other.mul_raw(self);
        let nums = ab.nums.iter().zip(&ba.nums).map(|(a, b)| a - b).collect();
        RationalMatrix::new(self.n, nums, ab.den).expect("nonzero denominator")
    }

    pub fn d(&self) -> RationalMatrix {
        let (nums, den) = derive_fraction(&self.nums, &self.den, WidePoly::d);
        RationalMatrix::new(self.n, nums, den).expect("nonzero denominator")
    }

    pub fn dbar(&self) -> RationalMatrix {
        let (nums, den) = derive_fraction(&self.nums, &self.den, WidePoly::dbar);
        RationalMatrix::new(self.n, nums, den).expect("nonzero denominator")
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> RationalMatrix {
        let n = self.n;
        let mut nums = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                nums.push(self.num(j, i).conj());
            }
        }
        RationalMatrix::new(n, nums, self.den.conj()).expect("nonzero denominator")
    }

    pub fn trace(&self) -> ConjRational {
        let num = (0..self.n).fold(ConjPoly::zero(), |acc, i| &acc + self.num(i, i));
        ConjRational::new(num, self.den.clone()).expect("nonzero denominator")
    }

    /// `tr(self · other)` without forming the full product.
    pub fn trace_product(&self, other: &RationalMatrix) -> ConjRational {
        let mut num = ConjPoly::zero();
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.num(i, k);
                let b = other.num(k, i);
                if !a.is_zero() && !b.is_zero() {
                    num = &num + &(a * b);
                }
            }
        }
        ConjRational::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let vals = eval_fraction(&self.nums, &self.den, z)?;
        Ok(DMatrix::from_row_slice(self.n, self.n, &vals))
    }

    /// Largest entrywise coefficient residual against `other`, relative to the
    /// largest cross-multiplied coefficient of either side.
    pub fn rel_distance(&self, other: &RationalMatrix) -> f64 {
        let same_den = self.den.rel_distance(&other.den) == 0.0;
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for (a, b) in self.nums.iter().zip(&other.nums) {
            let (lhs, rhs) = if same_den {
                (a.clone(), b.clone())
            } else {
                (a * &other.den, b * &self.den)
            };
            scale = scale.max(lhs.max_abs()).max(rhs.max_abs());
            diff = diff.max((&lhs - &rhs).max_abs());
        }
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_times_identity() {
        let i = RationalMatrix::identity(3);
        assert_eq!(i.mul(&i), i);
        assert!(i.commutator(&i).is_zero());
    }

    #[test]
    fn outer_trace_is_norm() {
        let u = vec![ConjPoly::one(), ConjPoly::xi()];
        let m = RationalMatrix::outer(&u, &u, ConjPoly::one_plus_mod_sq()).unwrap();
        assert!(m.trace().rel_distance(&ConjRational::one()) < 1e-15);
    }

    #[test]
    fn inner_product_conjugates_left() {
        let v = RationalVector::from_polys(vec![ConjPoly::xi(), ConjPoly::one()]);
        let n = v.norm_sq();
        let expect = ConjRational::from_poly(ConjPoly::one_plus_mod_sq());
        assert!(n.rel_distance(&expect) < 1e-15);
    }
}
