//! Minimal polynomial of a multivector by coefficient-vector null-space
//! detection, and the diagonalizability decision built on it.

use nalgebra::DMatrix;

use crate::algebra::Multivector;
use crate::charpoly::{faddeev_leverrier, CharPoly};
use crate::error::ClifError;
use crate::polyroots::{roots_of_monic, RootSet};

const RANK_TOL: f64 = 1e-9;

/// Monic real polynomial of lowest degree with mu(A) = 0.
#[derive(Clone, Debug)]
pub struct MinimalPoly {
    coeffs: Vec<f64>,
    rank_warning: Option<String>,
}

impl MinimalPoly {
    pub(crate) fn from_monic_coeffs(coeffs: Vec<f64>, rank_warning: Option<String>) -> Self {
        MinimalPoly {
            coeffs,
            rank_warning,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients; the leading one is exactly 1.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Set when the rank decision was numerically ambiguous.
    pub fn rank_warning(&self) -> Option<&str> {
        self.rank_warning.as_deref()
    }

    pub fn eval(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// mu(A), which must vanish up to rounding.
    pub fn eval_on_mv(&self, a: &Multivector<f64>) -> Multivector<f64> {
        let sig = a.signature();
        let mut acc = Multivector::zero(sig);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &Multivector::scalar(sig, c);
        }
        acc
    }

    pub fn roots(&self) -> Result<RootSet, ClifError> {
        roots_of_monic(&self.coeffs)
    }

    /// Max remainder coefficient of chi divided by mu, relative to the
    /// magnitude of chi; near zero iff mu divides chi.
    pub fn division_residual(&self, chi: &CharPoly) -> f64 {
        let dividend = chi.monic_ascending();
        let remainder = poly_rem(&dividend, &self.coeffs);
        let scale = dividend.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
        remainder.iter().fold(0.0f64, |m, c| m.max(c.abs())) / scale
    }
}

/// Remainder of dividend / divisor, both ascending, divisor monic.
fn poly_rem(dividend: &[f64], divisor: &[f64]) -> Vec<f64> {
    let m = divisor.len() - 1;
    let mut rem = dividend.to_vec();
    while rem.len() > m {
        let k = rem.len() - 1;
        let factor = rem[k];
        for j in 0..m {
            rem[k - m + j] -= factor * divisor[j];
        }
        rem.pop();
    }
    rem
}

/// Minimal polynomial: stack the coefficient vectors of 1, A, A^2, ... and
/// return the monic polynomial built from the first nontrivial null-space
/// vector, detected by singular values with a relative tolerance.
pub fn minimal_polynomial(a: &Multivector<f64>) -> MinimalPoly {
    let sig = a.signature();
    let d = sig.char_degree();
    let mut power = Multivector::scalar(sig, 1.0);
    let mut vectors: Vec<Vec<f64>> = vec![power.coeffs().to_vec()];
    for _ in 0..d {
        power = &power * a;
        vectors.push(power.coeffs().to_vec());
    }
    let (coeffs, rank_warning) = first_dependence(&vectors);
    MinimalPoly {
        coeffs,
        rank_warning,
    }
}

/// Find the shortest prefix v_0..v_m of the vector list that is linearly
/// dependent and return the monic combination coefficients. The final prefix
/// is taken as dependent unconditionally (for multivector powers this is
/// guaranteed by the Cayley-Hamilton relation).
pub(crate) fn first_dependence(vectors: &[Vec<f64>]) -> (Vec<f64>, Option<String>) {
    let dim = vectors[0].len();
    let max_m = vectors.len() - 1;
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300))
        .collect();

    let mut warning = None;
    for m in 1..=max_m {
        // pad with zero rows when wider than tall: the compact SVD of a wide
        // matrix omits the right-singular vectors spanning the null space
        let rows = dim.max(m + 1);
        let mut mat = DMatrix::<f64>::zeros(rows, m + 1);
        for (j, v) in vectors[..=m].iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                mat[(i, j)] = x / norms[j];
            }
        }
        let svd = mat.svd(false, true);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sigma_max = sv[0].max(1e-300);
        let sigma_min = *sv.last().unwrap();
        let dependent = sigma_min < RANK_TOL * sigma_max;
        if !dependent && m < max_m {
            continue;
        }
        if !dependent {
            warning = Some(format!(
                "no clear null space up to degree {m}; smallest singular value ratio {:.3e}",
                sigma_min / sigma_max
            ));
        } else if sv.len() >= 2 && sv[sv.len() - 2] < 10.0 * RANK_TOL * sigma_max {
            warning = Some(format!(
                "rank decision ambiguous: two singular values {:.3e} and {:.3e} inside the tolerance band",
                sv[sv.len() - 2],
                sigma_min
            ));
        }
        // right-singular vector of the smallest singular value spans the null space
        let v_t = svd.v_t.expect("requested V^T");
        let row = v_t.nrows() - 1;
        let mut coeffs: Vec<f64> = (0..=m).map(|j| v_t[(row, j)] / norms[j]).collect();
        let lead = coeffs[m];
        for c in coeffs.iter_mut() {
            *c /= lead;
        }
        return (coeffs, warning);
    }
    unreachable!("loop always returns at m = max_m");
}

/// Diagnostics backing the diagonalizability decision.
#[derive(Clone, Debug)]
pub struct DiagonalizabilityReport {
    pub diagonalizable: bool,
    pub minimal_poly: MinimalPoly,
    pub mu_roots: RootSet,
    /// Residual of the division chi / mu; mu always divides chi.
    pub divisibility_residual: f64,
}

/// A multivector is diagonalizable iff its minimal polynomial is square-free,
/// decided by clustering the roots of mu.
pub fn is_diagonalizable(a: &Multivector<f64>) -> Result<DiagonalizabilityReport, ClifError> {
    let mu = minimal_polynomial(a);
    let mu_roots = mu.roots()?;
    let chi = faddeev_leverrier(a);
    let divisibility_residual = mu.division_residual(&chi);
    Ok(DiagonalizabilityReport {
        diagonalizable: mu_roots.all_distinct(),
        minimal_poly: mu,
        mu_roots,
        divisibility_residual,
    })
}
