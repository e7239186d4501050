//! Brute-force verifiers kept independent of the spectral machinery: a
//! scaling-and-squaring Taylor exponential and the 2^n-dimensional
//! left-regular matrix representation. Test and diagnostic use only.

use nalgebra::DMatrix;

use crate::algebra::{Blade, Multivector, Signature};
use crate::error::ClifError;
use crate::specfun::{first_dependence, MinimalPoly};

/// Largest n for which the 2^n x 2^n regular representation is built.
pub const MAX_REP_DIM: usize = 8;

/// exp(A) by scaling and squaring a plain Taylor series. Valid for any
/// input, including defective ones; slow by design.
pub fn taylor_exp(a: &Multivector<f64>, tol: f64) -> Multivector<f64> {
    let sig = a.signature();
    let s = a.norm_one().max(1.0).log2().ceil() as i32 + 3;
    let scaled = a.scale(0.5f64.powi(s));
    let mut sum = Multivector::scalar(sig, 1.0);
    let mut term = Multivector::scalar(sig, 1.0);
    for k in 1..=300u32 {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_inf() < tol * 1e-2 {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Left-regular representation: column k holds the coefficients of A e_k.
#[derive(Clone, Debug)]
pub struct RegularRep {
    sig: Signature,
    matrix: DMatrix<f64>,
}

pub fn regular_representation(a: &Multivector<f64>) -> Result<RegularRep, ClifError> {
    let sig = a.signature();
    if sig.n() > MAX_REP_DIM {
        return Err(ClifError::RepresentationTooLarge {
            n: sig.n(),
            max: MAX_REP_DIM,
        });
    }
    let size = sig.basis_count();
    let mut matrix = DMatrix::<f64>::zeros(size, size);
    for k in 0..size {
        let e_k = Multivector::<f64>::basis_blade(sig, Blade::from_mask(k));
        let col = a * &e_k;
        for (m, &c) in col.coeffs().iter().enumerate() {
            matrix[(m, k)] = c;
        }
    }
    Ok(RegularRep { sig, matrix })
}

impl RegularRep {
    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Minimal polynomial of the matrix by the same null-space scan used for
    /// multivectors, run on flattened matrix powers. The regular
    /// representation is faithful, so this equals the multivector's minimal
    /// polynomial.
    pub fn minimal_polynomial(&self) -> MinimalPoly {
        let size = self.matrix.nrows();
        let d = self.sig.char_degree();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        let mut power = DMatrix::<f64>::identity(size, size);
        vectors.push(power.iter().copied().collect());
        for _ in 0..d {
            power = &power * &self.matrix;
            vectors.push(power.iter().copied().collect());
        }
        let (coeffs, warning) = first_dependence(&vectors);
        MinimalPoly::from_monic_coeffs(coeffs, warning)
    }

    /// exp(L_A) applied to the unit-scalar coordinate vector, read back as a
    /// multivector; agrees with [`taylor_exp`] by the homomorphism property.
    pub fn exp_unit_action(&self, tol: f64) -> Multivector<f64> {
        let exp_mat = matrix_exp(&self.matrix, tol);
        let coeffs = exp_mat.column(0).iter().copied().collect();
        Multivector::from_coeffs(self.sig, coeffs).expect("column length matches")
    }
}

/// Scaling-and-squaring Taylor exponential on a dense matrix.
fn matrix_exp(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let size = m.nrows();
    let norm = m.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    let s = norm.log2().ceil() as i32 + 3;
    let scaled = m * 0.5f64.powi(s);
    let mut sum = DMatrix::<f64>::identity(size, size);
    let mut term = DMatrix::<f64>::identity(size, size);
    for k in 1..=300u32 {
        term = (&term * &scaled) / k as f64;
        sum += &term;
        if term.iter().map(|x| x.abs()).fold(0.0, f64::max) < tol * 1e-2 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}
