//! Dense multivectors over a real or complex scalar field.

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use super::signature::{
    clifford_conjugation_sign, grade_involution_sign, reversion_sign, Blade, Signature,
};
use crate::error::ClifError;
use crate::scalar::Scalar;

/// A general element of Cl(p,q): 2^n coefficients indexed by blade mask.
///
/// Values are immutable after construction; every operation returns a new
/// multivector, so instances can be shared freely across threads.
#[derive(Clone, PartialEq, Debug)]
pub struct Multivector<T: Scalar> {
    sig: Signature,
    coeffs: Vec<T>,
}

impl<T: Scalar> Multivector<T> {
    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            coeffs: vec![T::zero(); sig.basis_count()],
        }
    }

    pub fn scalar(sig: Signature, value: T) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[0] = value;
        mv
    }

    pub fn basis_blade(sig: Signature, blade: Blade) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[blade.mask()] = T::one();
        mv
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<T>) -> Result<Self, ClifError> {
        if coeffs.len() != sig.basis_count() {
            return Err(ClifError::CoefficientLength {
                got: coeffs.len(),
                expected: sig.basis_count(),
            });
        }
        Ok(Multivector { sig, coeffs })
    }

    /// Build from (mask, coefficient) terms; repeated masks accumulate.
    pub fn from_terms(sig: Signature, terms: &[(usize, T)]) -> Result<Self, ClifError> {
        let mut mv = Self::zero(sig);
        for &(mask, c) in terms {
            if mask >= sig.basis_count() {
                return Err(ClifError::InvalidBladeIndex {
                    index: mask,
                    n: sig.n(),
                });
            }
            mv.coeffs[mask] += c;
        }
        Ok(mv)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == T::zero())
    }

    /// Geometric product with a signature check.
    pub fn geometric_product(&self, other: &Self) -> Result<Self, ClifError> {
        if self.sig != other.sig {
            return Err(ClifError::SignatureMismatch(
                self.sig.p(),
                self.sig.q(),
                other.sig.p(),
                other.sig.q(),
            ));
        }
        let mut coeffs = vec![T::zero(); self.sig.basis_count()];
        gp_into(self.sig, &self.coeffs, &other.coeffs, &mut coeffs);
        Ok(Multivector {
            sig: self.sig,
            coeffs,
        })
    }

    /// Reversion: per-grade sign (-1)^(g(g-1)/2).
    pub fn reversion(&self) -> Self {
        self.grade_signs(reversion_sign)
    }

    /// Grade involution: per-grade sign (-1)^g.
    pub fn grade_involution(&self) -> Self {
        self.grade_signs(grade_involution_sign)
    }

    /// Clifford conjugation: per-grade sign (-1)^(g(g+1)/2); equals
    /// reversion composed with grade involution.
    pub fn clifford_conjugation(&self) -> Self {
        self.grade_signs(clifford_conjugation_sign)
    }

    /// Hermitian conjugate: conjugated coefficients with each blade replaced
    /// by its inverse, e_J^dagger = (reversion sign) * (metric of J) * e_J.
    pub fn hermitian_conjugate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (mask, &c) in self.coeffs.iter().enumerate() {
            let sigma = reversion_sign(mask.count_ones() as usize) * self.sig.metric_sign(mask);
            let c = c.conj();
            coeffs.push(if sigma < 0 { -c } else { c });
        }
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    /// Negation of every grade except the scalar: 2<A>_0 - A.
    pub fn grade_negation(&self) -> Self {
        let mut coeffs: Vec<T> = self.coeffs.iter().map(|&c| -c).collect();
        coeffs[0] = self.coeffs[0];
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    pub fn grade_projection(&self, grade: usize) -> Result<Self, ClifError> {
        if grade > self.sig.n() {
            return Err(ClifError::GradeOutOfRange {
                grade,
                n: self.sig.n(),
            });
        }
        let mut mv = Self::zero(self.sig);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if mask.count_ones() as usize == grade {
                mv.coeffs[mask] = c;
            }
        }
        Ok(mv)
    }

    /// Scalar part <A>_0.
    pub fn scalar_part(&self) -> T {
        self.coeffs[0]
    }

    /// Everything but grade 0: <A>_{-0} = (A - grade_negation(A)) / 2.
    pub fn nonscalar_part(&self) -> Self {
        let mut mv = self.clone();
        mv.coeffs[0] = T::zero();
        mv
    }

    /// k-th power by binary exponentiation; A^0 = 1.
    pub fn power(&self, k: u32) -> Self {
        let mut result = Self::scalar(self.sig, T::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Max-norm of the coefficient vector.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// 1-norm of the coefficient vector.
    pub fn norm_one(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn scale(&self, factor: T) -> Self {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    fn grade_signs(&self, sign_of_grade: fn(usize) -> i8) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| {
                if sign_of_grade(mask.count_ones() as usize) < 0 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    fn assert_same_sig(&self, other: &Self) {
        assert_eq!(
            self.sig, other.sig,
            "multivector operands live in different algebras"
        );
    }
}

impl Multivector<f64> {
    /// Embed into the complex-scalar algebra.
    pub fn to_complex(&self) -> Multivector<Complex64> {
        Multivector {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        }
    }
}

impl Multivector<Complex64> {
    /// Real parts plus the largest absolute imaginary part left behind.
    pub fn real_parts(&self) -> (Multivector<f64>, f64) {
        let mut residual = 0.0f64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                residual = residual.max(c.im.abs());
                c.re
            })
            .collect();
        (
            Multivector {
                sig: self.sig,
                coeffs,
            },
            residual,
        )
    }
}

/// Accumulate the geometric product of coefficient slices into `out`.
pub(crate) fn gp_into<T: Scalar>(sig: Signature, a: &[T], b: &[T], out: &mut [T]) {
    let size = sig.basis_count();
    if let Some(table) = sig.sign_table() {
        for i in 0..size {
            let ai = a[i];
            if ai == T::zero() {
                continue;
            }
            let row = &table[i * size..(i + 1) * size];
            for j in 0..size {
                let bj = b[j];
                if bj == T::zero() {
                    continue;
                }
                let t = ai * bj;
                if row[j] < 0 {
                    out[i ^ j] -= t;
                } else {
                    out[i ^ j] += t;
                }
            }
        }
    } else {
        for i in 0..size {
            let ai = a[i];
            if ai == T::zero() {
                continue;
            }
            for j in 0..size {
                let bj = b[j];
                if bj == T::zero() {
                    continue;
                }
                let (sign, r) = sig.blade_product(Blade::from_mask(i), Blade::from_mask(j));
                let t = ai * bj;
                if sign < 0 {
                    out[r.mask()] -= t;
                } else {
                    out[r.mask()] += t;
                }
            }
        }
    }
}

impl<T: Scalar> Index<Blade> for Multivector<T> {
    type Output = T;
    fn index(&self, blade: Blade) -> &T {
        &self.coeffs[blade.mask()]
    }
}

impl<T: Scalar> Add for &Multivector<T> {
    type Output = Multivector<T>;
    fn add(self, rhs: Self) -> Multivector<T> {
        self.assert_same_sig(rhs);
        Multivector {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&x, &y)| x + y)
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Multivector<T> {
    type Output = Multivector<T>;
    fn sub(self, rhs: Self) -> Multivector<T> {
        self.assert_same_sig(rhs);
        Multivector {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&x, &y)| x - y)
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for &Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

/// Geometric product; panics on signature mismatch (use
/// [`Multivector::geometric_product`] for the checked form).
impl<T: Scalar> Mul for &Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: Self) -> Multivector<T> {
        self.assert_same_sig(rhs);
        let mut coeffs = vec![T::zero(); self.sig.basis_count()];
        gp_into(self.sig, &self.coeffs, &rhs.coeffs, &mut coeffs);
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }
}
