//! Functions of a multivector from the roots of its characteristic
//! polynomial: the exponential in coordinate and basis-free form, arbitrary
//! scalar functions, and the repeated-root fallbacks (Lagrange projectors for
//! diagonalizable inputs, epsilon-regularization for defective ones).

mod functions;
mod minpoly;

pub use functions::{bessel_j0, ScalarFunction};
pub(crate) use minpoly::first_dependence;
pub use minpoly::{is_diagonalizable, minimal_polynomial, DiagonalizabilityReport, MinimalPoly};

use num_complex::Complex64;

use crate::algebra::{Blade, Multivector};
use crate::charpoly::{faddeev_leverrier, CharPoly};
use crate::error::ClifError;
use crate::polyroots::{cluster_roots, find_roots, RootSet};

/// Default bound factor on the imaginary residue left after realification.
pub const DEFAULT_IMAG_TOL: f64 = 1e-8;

/// Relative threshold on |chi'(root)| below which a spectrum is treated as
/// degenerate even when the clustered roots look distinct.
const SINGULAR_DERIV_TOL: f64 = 1e-8;

/// Per-root weight of the basis-free formula: beta = 1/chi'(lambda).
#[derive(Clone, Copy, Debug)]
pub struct SpectralWeight {
    pub lambda: Complex64,
    pub beta: Complex64,
}

/// beta(lambda) = 1 / sum_{j=0}^{d-1} (j+1) C(d-j-1) lambda^j, which equals
/// 1/chi'(lambda).
pub fn beta_weight(chi: &CharPoly, lambda: Complex64) -> Complex64 {
    let d = chi.degree();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (0..d).rev() {
        acc = acc * lambda + (j + 1) as f64 * chi.c(d - 1 - j);
    }
    acc.finv()
}

pub fn spectral_weights(chi: &CharPoly, roots: &RootSet) -> Vec<SpectralWeight> {
    roots
        .roots()
        .iter()
        .map(|&lambda| SpectralWeight {
            lambda,
            beta: beta_weight(chi, lambda),
        })
        .collect()
}

/// Which form of the distinct-root spectral sum to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Basis-free form; repeated-root inputs fall back automatically.
    #[default]
    Auto,
    /// Coordinate (per-blade) form of the spectral sum.
    Coordinate,
    /// Basis-free form, pinned.
    BasisFree,
}

/// How the evaluation was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPath {
    /// Distinct characteristic roots: direct spectral sum.
    Distinct,
    /// Repeated characteristic roots, square-free minimal polynomial:
    /// Lagrange projectors over the distinct eigenvalues.
    Projector,
    /// Defective input: epsilon-perturbation and extrapolation to zero.
    Regularized,
}

impl std::fmt::Display for EvalPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvalPath::Distinct => "distinct",
            EvalPath::Projector => "projector",
            EvalPath::Regularized => "regularized",
        })
    }
}

/// Blade used for the defective-case perturbation A + eps e_k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PerturbationPolicy {
    /// First blade in grade-lex order whose commutator with A is nonzero.
    #[default]
    FirstNonCommuting,
    /// A caller-chosen blade mask.
    FixedBlade(usize),
}

/// Settings for the defective-case limit eps -> 0.
#[derive(Clone, Debug)]
pub struct RegularizationConfig {
    /// Strictly decreasing positive perturbation sizes.
    pub eps_sequence: Vec<f64>,
    /// Extrapolation uses the last (order + 1) entries of the sequence.
    pub extrapolation_order: usize,
    pub policy: PerturbationPolicy,
}

impl Default for RegularizationConfig {
    fn default() -> Self {
        RegularizationConfig {
            eps_sequence: vec![1e-3, 5e-4, 2.5e-4],
            extrapolation_order: 2,
            policy: PerturbationPolicy::FirstNonCommuting,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub method: Method,
    /// Realification residual bound factor (times 1 + ||Re||_inf).
    pub imag_tol: f64,
    /// Root clustering tolerance; None uses 1e-6 (1 + max |root|).
    pub cluster_tol: Option<f64>,
    /// Permit genuinely complex results instead of a realification error.
    pub complex_ok: bool,
    pub regularization: RegularizationConfig,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            method: Method::Auto,
            imag_tol: DEFAULT_IMAG_TOL,
            cluster_tol: None,
            complex_ok: false,
            regularization: RegularizationConfig::default(),
        }
    }
}

/// Result of a function evaluation together with its diagnostics.
#[derive(Clone, Debug)]
pub struct Evaluation {
    /// Realified result.
    pub value: Multivector<f64>,
    /// Result before discarding imaginary parts.
    pub complex_value: Multivector<Complex64>,
    /// Largest imaginary coefficient discarded by realification.
    pub imag_residual: f64,
    pub path: EvalPath,
    pub charpoly: CharPoly,
    pub roots: RootSet,
    /// Computed only when the characteristic roots are not distinct.
    pub minimal_poly: Option<MinimalPoly>,
    pub diagonalizable: Option<bool>,
}

struct SpectralCore {
    complex_value: Multivector<Complex64>,
    path: EvalPath,
    chi: CharPoly,
    roots: RootSet,
    mu: Option<MinimalPoly>,
    diagonalizable: Option<bool>,
}

/// Evaluate f(A) with full diagnostics.
pub fn evaluate(
    a: &Multivector<f64>,
    f: &ScalarFunction,
    opts: &EvalOptions,
) -> Result<Evaluation, ClifError> {
    let core = eval_core(a, f, opts, true)?;
    let (value, imag_residual) = core.complex_value.real_parts();
    let bound = opts.imag_tol * (1.0 + value.norm_inf());
    if !opts.complex_ok && imag_residual > bound {
        return Err(ClifError::Realification {
            residual: imag_residual,
            bound,
        });
    }
    Ok(Evaluation {
        value,
        complex_value: core.complex_value,
        imag_residual,
        path: core.path,
        charpoly: core.chi,
        roots: core.roots,
        minimal_poly: core.mu,
        diagonalizable: core.diagonalizable,
    })
}

/// f(A), realified, with automatic routing through the repeated-root paths.
pub fn apply_function(
    a: &Multivector<f64>,
    f: &ScalarFunction,
) -> Result<Multivector<f64>, ClifError> {
    Ok(evaluate(a, f, &EvalOptions::default())?.value)
}

/// exp(A) through the coordinate-form spectral sum. Inputs with repeated
/// characteristic roots route through the same fallbacks as
/// [`apply_function`].
pub fn exp_coordinate(a: &Multivector<f64>) -> Result<Multivector<f64>, ClifError> {
    let opts = EvalOptions {
        method: Method::Coordinate,
        ..EvalOptions::default()
    };
    Ok(evaluate(a, &ScalarFunction::exp(), &opts)?.value)
}

/// exp(A) through the basis-free spectral sum, with the same fallbacks.
pub fn exp_basis_free(a: &Multivector<f64>) -> Result<Multivector<f64>, ClifError> {
    let opts = EvalOptions {
        method: Method::BasisFree,
        ..EvalOptions::default()
    };
    Ok(evaluate(a, &ScalarFunction::exp(), &opts)?.value)
}

/// f(A) for a defective (or any) input with explicit regularization settings;
/// diagonalizable inputs simply take their ordinary path.
pub fn regularized_apply(
    a: &Multivector<f64>,
    f: &ScalarFunction,
    cfg: &RegularizationConfig,
) -> Result<Multivector<f64>, ClifError> {
    let opts = EvalOptions {
        regularization: cfg.clone(),
        ..EvalOptions::default()
    };
    Ok(evaluate(a, f, &opts)?.value)
}

/// Discard imaginary parts; errors when the residual exceeds
/// tau_imag (1 + ||Re||_inf).
pub fn realify(
    z: &Multivector<Complex64>,
    tau_imag: f64,
) -> Result<(Multivector<f64>, f64), ClifError> {
    let (value, residual) = z.real_parts();
    let bound = tau_imag * (1.0 + value.norm_inf());
    if residual > bound {
        return Err(ClifError::Realification { residual, bound });
    }
    Ok((value, residual))
}

/// Both spectral-decomposition sums for a distinct-root input:
/// sum_i beta_i B(lambda_i) (which is 0) and
/// sum_i lambda_i (1/d + beta_i B(lambda_i)) (which is A).
pub fn spectral_identity_check(
    a: &Multivector<f64>,
) -> Result<(Multivector<Complex64>, Multivector<Complex64>), ClifError> {
    let chi = faddeev_leverrier(a);
    let roots = find_roots(&chi)?;
    let sig = a.signature();
    let d = chi.degree();
    if a.nonscalar_part().is_zero() {
        // B(lambda_i) vanishes identically; only the 1/d weights survive
        let sum: Complex64 = roots.roots().iter().sum();
        return Ok((
            Multivector::zero(sig),
            Multivector::scalar(sig, sum / d as f64),
        ));
    }
    if !distinct_spectrum(&chi, &roots) {
        return Err(ClifError::DefectiveOrDegenerate);
    }
    let powers_ns = nonscalar_powers(a, d);
    let inv_d = Complex64::new(1.0 / d as f64, 0.0);
    let mut sum_b = Multivector::<Complex64>::zero(sig);
    let mut sum_lam = Multivector::<Complex64>::zero(sig);
    for &lambda in roots.roots() {
        let beta = beta_weight(&chi, lambda);
        let mut b = Multivector::<Complex64>::zero(sig);
        for (m, nm) in powers_ns.iter().enumerate() {
            b = &b + &nm.to_complex().scale(h_poly(&chi, m, lambda));
        }
        let beta_b = b.scale(beta);
        sum_b = &sum_b + &beta_b;
        let term = &Multivector::scalar(sig, inv_d) + &beta_b;
        sum_lam = &sum_lam + &term.scale(lambda);
    }
    Ok((sum_b, sum_lam))
}

/// Tr(e_J^dagger A^k) = d <e_J^dagger A^k>_0 for k = 1..k_max and every
/// blade J; returned as rows indexed by k-1, columns by blade mask.
///
/// Since e_J^dagger = e_J^{-1}, the trace picks out d times the J-th
/// coefficient of A^k.
pub fn blade_power_traces(a: &Multivector<f64>, k_max: usize) -> Vec<Vec<f64>> {
    let d = a.signature().char_degree() as f64;
    let mut out = Vec::with_capacity(k_max);
    let mut ak = a.clone();
    for k in 1..=k_max {
        if k > 1 {
            ak = &ak * a;
        }
        out.push(ak.coeffs().iter().map(|&c| d * c).collect());
    }
    out
}

fn distinct_spectrum(chi: &CharPoly, roots: &RootSet) -> bool {
    if !roots.all_distinct() {
        return false;
    }
    let d = chi.degree();
    roots.roots().iter().all(|&z| {
        chi.eval_deriv(z).norm() >= SINGULAR_DERIV_TOL * (1.0 + z.norm()).powi(d as i32 - 1)
    })
}

fn nonscalar_powers(a: &Multivector<f64>, d: usize) -> Vec<Multivector<f64>> {
    // <A^(m+1)>_{-0} for m = 0..d-2
    let mut out = Vec::with_capacity(d - 1);
    let mut ak = a.clone();
    for m in 0..d - 1 {
        if m > 0 {
            ak = &ak * a;
        }
        out.push(ak.nonscalar_part());
    }
    out
}

/// h_m(lambda) = sum_{k=0}^{d-m-2} lambda^k C(d-k-m-2).
fn h_poly(chi: &CharPoly, m: usize, lambda: Complex64) -> Complex64 {
    let top = chi.degree() - m - 2;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=top {
        acc = acc * lambda + chi.c(j);
    }
    acc
}

fn eval_core(
    a: &Multivector<f64>,
    f: &ScalarFunction,
    opts: &EvalOptions,
    allow_regularization: bool,
) -> Result<SpectralCore, ClifError> {
    let chi = faddeev_leverrier(a);
    let mut roots = find_roots(&chi)?;
    if let Some(tol) = opts.cluster_tol {
        roots = cluster_roots(&roots, tol);
    }
    let domain_tol = roots.cluster_tol();

    if distinct_spectrum(&chi, &roots) {
        let values: Vec<Complex64> = roots.roots().to_vec();
        f.check_domain(&values, domain_tol)?;
        let weights: Vec<Complex64> = values.iter().map(|&z| f.eval(z)).collect();
        let complex_value = match opts.method {
            Method::Coordinate => spectral_sum_coordinate(a, &chi, &values, &weights),
            Method::Auto | Method::BasisFree => spectral_sum_basis_free(a, &chi, &values, &weights),
        };
        return Ok(SpectralCore {
            complex_value,
            path: EvalPath::Distinct,
            chi,
            roots,
            mu: None,
            diagonalizable: Some(true),
        });
    }

    // repeated characteristic roots: decide on the minimal polynomial
    let mu = minimal_polynomial(a);
    let mut mu_roots = mu.roots()?;
    if let Some(tol) = opts.cluster_tol {
        mu_roots = cluster_roots(&mu_roots, tol);
    }
    let eigenvalues: Vec<Complex64> = mu_roots.clusters().iter().map(|c| c.value).collect();
    f.check_domain(&eigenvalues, mu_roots.cluster_tol().max(domain_tol))?;

    if mu_roots.all_distinct() {
        let weights: Vec<Complex64> = eigenvalues.iter().map(|&z| f.eval(z)).collect();
        let complex_value = lagrange_projector_sum(a, &eigenvalues, &weights);
        return Ok(SpectralCore {
            complex_value,
            path: EvalPath::Projector,
            chi,
            roots,
            mu: Some(mu),
            diagonalizable: Some(true),
        });
    }

    if !allow_regularization {
        return Err(ClifError::DefectiveOrDegenerate);
    }
    let complex_value = regularized_core(a, f, opts)?;
    Ok(SpectralCore {
        complex_value,
        path: EvalPath::Regularized,
        chi,
        roots,
        mu: Some(mu),
        diagonalizable: Some(false),
    })
}

/// Coordinate-form spectral sum over distinct roots:
/// (1/d) sum_i w_i (1 + sum_J e_J b_J(lambda_i)).
fn spectral_sum_coordinate(
    a: &Multivector<f64>,
    chi: &CharPoly,
    roots: &[Complex64],
    weights: &[Complex64],
) -> Multivector<Complex64> {
    let sig = a.signature();
    let d = chi.degree();
    let size = sig.basis_count();
    let traces = blade_power_traces(a, d - 1);

    // numerator polynomial of b_J: g[mask][m] = sum_k C(k) Tr(e_J^dagger A^(d-k-m-1))
    let mut g = vec![vec![0.0f64; d - 1]; size];
    for (mask, gm) in g.iter_mut().enumerate().skip(1) {
        for (m, slot) in gm.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..=d - m - 2 {
                acc += chi.c(k) * traces[d - k - m - 2][mask];
            }
            *slot = acc;
        }
    }

    let mut coeffs = vec![Complex64::new(0.0, 0.0); size];
    let inv_d = 1.0 / d as f64;
    for (&lambda, &w) in roots.iter().zip(weights) {
        let w = w * inv_d;
        coeffs[0] += w;
        let beta = beta_weight(chi, lambda);
        for (mask, gm) in g.iter().enumerate().skip(1) {
            let mut num = Complex64::new(0.0, 0.0);
            for &gmk in gm.iter().rev() {
                num = num * lambda + gmk;
            }
            coeffs[mask] += w * beta * num;
        }
    }
    Multivector::from_coeffs(sig, coeffs).expect("size matches signature")
}

/// Basis-free spectral sum over distinct roots:
/// sum_i w_i (1/d + beta_i sum_m h_m(lambda_i) <A^(m+1)>_{-0}).
fn spectral_sum_basis_free(
    a: &Multivector<f64>,
    chi: &CharPoly,
    roots: &[Complex64],
    weights: &[Complex64],
) -> Multivector<Complex64> {
    let sig = a.signature();
    let d = chi.degree();
    let powers_ns = nonscalar_powers(a, d);

    let mut scalar_acc = Complex64::new(0.0, 0.0);
    let mut m_coeffs = vec![Complex64::new(0.0, 0.0); d - 1];
    for (&lambda, &w) in roots.iter().zip(weights) {
        scalar_acc += w;
        let beta = beta_weight(chi, lambda);
        for (m, slot) in m_coeffs.iter_mut().enumerate() {
            *slot += w * beta * h_poly(chi, m, lambda);
        }
    }

    let mut out = Multivector::<Complex64>::scalar(sig, scalar_acc / d as f64);
    for (nm, &c) in powers_ns.iter().zip(&m_coeffs) {
        out = &out + &nm.to_complex().scale(c);
    }
    out
}

/// f(A) = sum_i f(lambda_i) prod_{j != i} (A - lambda_j)/(lambda_i - lambda_j)
/// over the distinct eigenvalues (the roots of a square-free mu).
fn lagrange_projector_sum(
    a: &Multivector<f64>,
    eigenvalues: &[Complex64],
    weights: &[Complex64],
) -> Multivector<Complex64> {
    let sig = a.signature();
    let ac = a.to_complex();
    let mut acc = Multivector::<Complex64>::zero(sig);
    for (i, &vi) in eigenvalues.iter().enumerate() {
        let mut projector = Multivector::<Complex64>::scalar(sig, Complex64::new(1.0, 0.0));
        let mut denom = Complex64::new(1.0, 0.0);
        for (j, &vj) in eigenvalues.iter().enumerate() {
            if i == j {
                continue;
            }
            projector = &projector * &(&ac - &Multivector::scalar(sig, vj));
            denom *= vi - vj;
        }
        acc = &acc + &projector.scale(weights[i] / denom);
    }
    acc
}

fn regularized_core(
    a: &Multivector<f64>,
    f: &ScalarFunction,
    opts: &EvalOptions,
) -> Result<Multivector<Complex64>, ClifError> {
    let cfg = &opts.regularization;
    let eps_all = &cfg.eps_sequence;
    if eps_all.is_empty()
        || eps_all.windows(2).any(|w| w[1] >= w[0])
        || eps_all.iter().any(|&e| e <= 0.0)
    {
        return Err(ClifError::Regularization(
            "eps sequence must be strictly decreasing and positive".into(),
        ));
    }
    let points = cfg.extrapolation_order + 1;
    let eps_used: Vec<f64> = eps_all
        .iter()
        .copied()
        .skip(eps_all.len().saturating_sub(points))
        .collect();
    if eps_used.len() < 2 {
        return Err(ClifError::Regularization(
            "need at least two eps values for extrapolation".into(),
        ));
    }

    let sig = a.signature();
    let scale = a.norm_inf().max(1.0);
    let candidates: Vec<usize> = match cfg.policy {
        PerturbationPolicy::FixedBlade(mask) => vec![mask],
        PerturbationPolicy::FirstNonCommuting => sig
            .presentation_order()
            .into_iter()
            .skip(1)
            .filter(|&mask| {
                let e_k = Multivector::<f64>::basis_blade(sig, Blade::from_mask(mask));
                (&(a * &e_k) - &(&e_k * a)).norm_inf() > 1e-8 * scale
            })
            .collect(),
    };
    if candidates.is_empty() {
        return Err(ClifError::PerturbationFailure);
    }

    'blades: for &mask in &candidates {
        let e_k = Multivector::<f64>::basis_blade(sig, Blade::from_mask(mask));
        let mut samples: Vec<Multivector<Complex64>> = Vec::with_capacity(eps_used.len());
        for &eps in &eps_used {
            let perturbed = a + &e_k.scale(eps);
            match eval_core(&perturbed, f, opts, false) {
                Ok(core) => samples.push(core.complex_value),
                // this blade does not split the roots; try the next one
                Err(ClifError::DefectiveOrDegenerate) => continue 'blades,
                Err(err) => return Err(err),
            }
        }
        let (value, previous) = neville_to_zero(&eps_used, &samples);
        let disagreement = (&value - &previous).norm_inf();
        let bound = 1e-4 * (1.0 + value.norm_inf());
        if disagreement > bound {
            return Err(ClifError::Regularization(format!(
                "extrapolation levels disagree by {disagreement:.3e} (bound {bound:.3e})"
            )));
        }
        return Ok(value);
    }
    Err(ClifError::PerturbationFailure)
}

/// Polynomial extrapolation of the samples to eps = 0 (Neville tableau).
/// Returns the full-order value and the one-lower-order value from the
/// smallest points, for a convergence check.
fn neville_to_zero(
    xs: &[f64],
    ys: &[Multivector<Complex64>],
) -> (Multivector<Complex64>, Multivector<Complex64>) {
    let n = xs.len();
    let mut tableau = ys.to_vec();
    let mut previous = tableau[n - 1].clone();
    for level in 1..n {
        // tableau[i] becomes the degree-`level` extrapolant through points i..=i+level
        for i in 0..n - level {
            let xi = xs[i];
            let xj = xs[i + level];
            let num = &tableau[i].scale(Complex64::new(xj / (xj - xi), 0.0))
                - &tableau[i + 1].scale(Complex64::new(xi / (xj - xi), 0.0));
            tableau[i] = num;
        }
        if level == n - 1 {
            // best value not using the largest eps
            previous = tableau[1].clone();
        }
    }
    if n == 1 {
        previous = tableau[0].clone();
    }
    (tableau[0].clone(), previous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;
    use crate::charpoly::trace;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn assert_close(a: &Multivector<f64>, b: &Multivector<f64>, tol: f64) {
        let scale = b.norm_inf().max(1.0);
        assert!(
            (a - b).norm_inf() < tol * scale,
            "multivectors differ by {:.3e} (scale {scale:.3e})",
            (a - b).norm_inf()
        );
    }

    #[test]
    fn exp_of_zero_and_scalar() {
        let s = sig(2, 1);
        let zero = Multivector::<f64>::zero(s);
        let one = Multivector::scalar(s, 1.0);
        assert_close(&exp_coordinate(&zero).unwrap(), &one, 1e-12);
        assert_close(&exp_basis_free(&zero).unwrap(), &one, 1e-12);
        let a = Multivector::scalar(s, 0.7);
        let want = Multivector::scalar(s, 0.7f64.exp());
        assert_close(&exp_basis_free(&a).unwrap(), &want, 1e-12);
    }

    #[test]
    fn rotor_exponential() {
        // exp(theta e12) = cos(theta) + sin(theta) e12 when e12^2 = -1
        let s = sig(0, 2);
        let theta = 0.7;
        let a = Multivector::from_terms(s, &[(3, theta)]).unwrap();
        let want = Multivector::from_terms(s, &[(0, theta.cos()), (3, theta.sin())]).unwrap();
        assert_close(&exp_coordinate(&a).unwrap(), &want, 1e-12);
        assert_close(&exp_basis_free(&a).unwrap(), &want, 1e-12);
    }

    #[test]
    fn boost_exponential() {
        // exp(phi e1) = cosh(phi) + sinh(phi) e1 when e1^2 = +1
        let s = sig(1, 0);
        let phi = 1.3;
        let a = Multivector::from_terms(s, &[(1, phi)]).unwrap();
        let want = Multivector::from_terms(s, &[(0, phi.cosh()), (1, phi.sinh())]).unwrap();
        assert_close(&exp_coordinate(&a).unwrap(), &want, 1e-12);
        assert_close(&exp_basis_free(&a).unwrap(), &want, 1e-12);
    }

    #[test]
    fn near_defective_inputs_stay_accurate() {
        // perturbations of a defective multivector probe the dispatch
        // boundary: clearly split spectra take the distinct path, splits
        // below the clustering tolerance regularize. Splits of roughly
        // 1e-5..1e-4 of the eigenvalue scale sit between the two regimes
        // and lose accuracy to root-location error; that window is inherent
        // to the per-root formulas and stays out of this assertion.
        use crate::oracle::taylor_exp;
        let s = sig(3, 0);
        let base = Multivector::from_terms(
            s,
            &[
                (0, -1.0),
                (1, 2.0),
                (2, 1.0),
                (4, 2.0),
                (3, -2.0),
                (5, -2.0),
                (6, 1.0),
                (7, -1.0),
            ],
        )
        .unwrap();
        let e1 = Multivector::<f64>::basis_blade(s, Blade::from_mask(1));
        // root splitting is ~2 sqrt(eps |4+2i|): comfortably distinct
        for eps in [1e-3, 1e-5, 1e-7] {
            let a = &base + &e1.scale(eps);
            let ev = evaluate(&a, &ScalarFunction::exp(), &EvalOptions::default()).unwrap();
            assert_eq!(ev.path, EvalPath::Distinct);
            let want = taylor_exp(&a, 1e-13);
            let err = (&ev.value - &want).norm_inf() / want.norm_inf().max(1.0);
            assert!(err < 1e-6, "eps = {eps:.0e}: relative error {err:.3e}");
        }
        // splitting ~1.3e-6 falls below the clustering tolerance: the input
        // is treated as defective and regularized
        let a = &base + &e1.scale(1e-13);
        let ev = evaluate(&a, &ScalarFunction::exp(), &EvalOptions::default()).unwrap();
        assert_eq!(ev.path, EvalPath::Regularized);
        let want = taylor_exp(&a, 1e-13);
        let err = (&ev.value - &want).norm_inf() / want.norm_inf().max(1.0);
        assert!(err < 1e-6, "regularized: relative error {err:.3e}");
    }

    #[test]
    fn exp_matches_oracle_in_higher_dimensions() {
        use crate::oracle::taylor_exp;
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(41);
        for (p, q) in [(4, 3), (5, 2), (4, 4)] {
            let s = sig(p, q);
            let coeffs = (0..s.basis_count())
                .map(|_| rng.gen_range(-0.25..0.25))
                .collect();
            let a = Multivector::from_coeffs(s, coeffs).unwrap();
            let free = exp_basis_free(&a).unwrap();
            let coord = exp_coordinate(&a).unwrap();
            let oracle = taylor_exp(&a, 1e-12);
            let scale = oracle.norm_inf().max(1.0);
            assert!(
                (&free - &oracle).norm_inf() < 1e-8 * scale,
                "basis-free in Cl({p},{q})"
            );
            assert!(
                (&coord - &oracle).norm_inf() < 1e-8 * scale,
                "coordinate in Cl({p},{q})"
            );
        }
    }

    #[test]
    fn sqrt_equals_half_power() {
        let s = sig(0, 2);
        let a = Multivector::from_terms(s, &[(0, 2.0), (1, 0.4), (3, -0.3)]).unwrap();
        let root = apply_function(&a, &ScalarFunction::sqrt()).unwrap();
        let half = apply_function(&a, &ScalarFunction::pow_fraction(0.5)).unwrap();
        assert_close(&root, &half, 1e-12);
        let inv_sq = apply_function(&a, &ScalarFunction::pow_fraction(-2.0)).unwrap();
        let direct = crate::charpoly::mv_inverse(&(&a * &a)).unwrap();
        assert_close(&inv_sq, &direct, 1e-10);
    }

    #[test]
    fn defining_property_by_central_difference() {
        // d/dt exp(A t) at t = 1 equals A exp(A)
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(31);
        let h = 1e-6;
        for (p, q) in [(1, 0), (0, 2), (2, 1), (1, 3), (3, 2)] {
            let s = sig(p, q);
            for _ in 0..5 {
                let coeffs = (0..s.basis_count())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let a = Multivector::from_coeffs(s, coeffs).unwrap();
                let plus = exp_basis_free(&a.scale(1.0 + h)).unwrap();
                let minus = exp_basis_free(&a.scale(1.0 - h)).unwrap();
                let derivative = (&plus - &minus).scale(1.0 / (2.0 * h));
                let want = &a * &exp_basis_free(&a).unwrap();
                let scale = want.norm_inf().max(1.0);
                assert!(
                    (&derivative - &want).norm_inf() < 1e-5 * scale,
                    "Cl({p},{q}): {:.3e}",
                    (&derivative - &want).norm_inf()
                );
            }
        }
    }

    #[test]
    fn coordinate_and_basis_free_forms_agree_for_any_function() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(37);
        let s = sig(2, 1);
        for f in [
            ScalarFunction::sinh(),
            ScalarFunction::cos(),
            ScalarFunction::bessel_j0(),
        ] {
            let coeffs = (0..s.basis_count())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let a = Multivector::from_coeffs(s, coeffs).unwrap();
            let coord = evaluate(
                &a,
                &f,
                &EvalOptions {
                    method: Method::Coordinate,
                    ..EvalOptions::default()
                },
            )
            .unwrap();
            let free = evaluate(
                &a,
                &f,
                &EvalOptions {
                    method: Method::BasisFree,
                    ..EvalOptions::default()
                },
            )
            .unwrap();
            assert_close(&coord.value, &free.value, 1e-11);
        }
    }

    #[test]
    fn regularization_delegates_for_diagonalizable_input() {
        let s = sig(0, 2);
        let theta = 0.9;
        let a = Multivector::from_terms(s, &[(3, theta)]).unwrap();
        let got = regularized_apply(&a, &ScalarFunction::exp(), &RegularizationConfig::default())
            .unwrap();
        let want = Multivector::from_terms(s, &[(0, theta.cos()), (3, theta.sin())]).unwrap();
        assert_close(&got, &want, 1e-12);
    }

    #[test]
    fn nilpotent_exponential_via_regularization() {
        // N = e1 + e2 in Cl(1,1): N^2 = 0, so exp(N) = 1 + N exactly
        let s = sig(1, 1);
        let n = Multivector::from_terms(s, &[(1, 1.0), (2, 1.0)]).unwrap();
        let nn = &n * &n;
        assert!(nn.norm_inf() < 1e-15);
        let got = regularized_apply(&n, &ScalarFunction::exp(), &RegularizationConfig::default())
            .unwrap();
        let want = Multivector::from_terms(s, &[(0, 1.0), (1, 1.0), (2, 1.0)]).unwrap();
        assert_close(&got, &want, 1e-7);
    }

    #[test]
    fn identity_and_constant_functions() {
        let s = sig(2, 0);
        let a = Multivector::from_terms(s, &[(0, 0.3), (1, 0.8), (3, -0.4)]).unwrap();
        let id = apply_function(&a, &ScalarFunction::identity()).unwrap();
        assert_close(&id, &a, 1e-10);
        let one = apply_function(&a, &ScalarFunction::constant(1.0)).unwrap();
        assert_close(&one, &Multivector::scalar(s, 1.0), 1e-10);
    }

    #[test]
    fn spectral_identities_on_quaternion() {
        let s = sig(0, 2);
        let a = Multivector::from_terms(s, &[(0, 0.4), (1, 1.1), (2, -0.6), (3, 0.9)]).unwrap();
        let (sum_b, sum_lam) = spectral_identity_check(&a).unwrap();
        assert!(sum_b.norm_inf() < 1e-12);
        let (lam_real, resid) = sum_lam.real_parts();
        assert!(resid < 1e-12);
        assert_close(&lam_real, &a, 1e-12);
        // scalar input: (0, s)
        let s0 = Multivector::scalar(sig(1, 1), 2.5);
        let (b, l) = spectral_identity_check(&s0).unwrap();
        assert!(b.norm_inf() < 1e-12);
        assert!((l.real_parts().0.scalar_part() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn blade_power_traces_match_hermitian_products() {
        let s = sig(1, 2);
        let a = Multivector::from_terms(s, &[(0, 0.5), (1, 1.0), (3, -0.7), (6, 0.3), (7, 0.2)])
            .unwrap();
        let table = blade_power_traces(&a, 3);
        for k in 1..=3usize {
            let ak = a.power(k as u32);
            for mask in 0..s.basis_count() {
                let ej = Multivector::<f64>::basis_blade(s, Blade::from_mask(mask));
                let literal = trace(&(&ej.hermitian_conjugate() * &ak));
                assert!(
                    (table[k - 1][mask] - literal).abs() < 1e-10 * literal.abs().max(1.0),
                    "k={k} mask={mask}"
                );
            }
        }
    }

    #[test]
    fn beta_equals_inverse_derivative() {
        let chi = CharPoly::from_c_coeffs(vec![-1.0, 32.0, -758.0, 10432.0, -72693.0]);
        for z in [
            Complex64::new(1.0, 2.0),
            Complex64::new(-3.0, 0.5),
            Complex64::new(0.0, -1.0),
        ] {
            let lhs = beta_weight(&chi, z);
            let rhs = chi.eval_deriv(z).finv();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
    }

    #[test]
    fn realify_conjugate_pair_identity() {
        // exp(a+ib)(c+id)/(g+ih) + conjugate
        //   = 2 e^a ((cg+dh) cos b + (ch-dg) sin b) / (g^2+h^2)
        let (a, b, c, d, g, h) = (0.3, 1.2, -0.7, 0.4, 1.5, -0.8);
        let z1 = Complex64::new(a, b).exp() * Complex64::new(c, d) / Complex64::new(g, h);
        let z = z1 + z1.conj();
        let s = sig(1, 0);
        let mv = Multivector::from_coeffs(s, vec![z, Complex64::new(0.0, 0.0)]).unwrap();
        let (real, residual) = realify(&mv, 1e-12).unwrap();
        let want = 2.0 * a.exp() * ((c * g + d * h) * b.cos() + (c * h - d * g) * b.sin())
            / (g * g + h * h);
        assert!((real.scalar_part() - want).abs() < 1e-14);
        assert!(residual < 1e-15);

        // already-real input passes through unchanged
        let real_in = Multivector::from_terms(s, &[(0, 2.0), (1, -1.0)]).unwrap();
        let (back, residual) = realify(&real_in.to_complex(), 1e-12).unwrap();
        assert_eq!(back, real_in);
        assert_eq!(residual, 0.0);

        // a single unpaired complex term fails
        let bad = Multivector::from_coeffs(s, vec![z1, Complex64::new(0.0, 0.0)]).unwrap();
        assert!(matches!(
            realify(&bad, 1e-10),
            Err(ClifError::Realification { .. })
        ));
    }

    #[test]
    fn intermediate_trace_table_value() {
        // Tr(e123^dagger A^3) = -7984 for the Cl(0,3) sample
        let s = sig(0, 3);
        let a = Multivector::from_terms(
            s,
            &[
                (0, 8.0),
                (2, -6.0),
                (4, -9.0),
                (3, 5.0),
                (5, -5.0),
                (6, 6.0),
                (7, -4.0),
            ],
        )
        .unwrap();
        let table = blade_power_traces(&a, 3);
        assert_eq!(table[2][7], -7984.0);
    }

    #[test]
    fn log_exp_roundtrip() {
        // eigenvalues in the right half plane: shift spectrum by a scalar
        let s = sig(2, 0);
        let a = Multivector::from_terms(s, &[(0, 2.0), (1, 0.4), (2, -0.2), (3, 0.5)]).unwrap();
        let log_a = apply_function(&a, &ScalarFunction::log()).unwrap();
        let back = apply_function(&log_a, &ScalarFunction::exp()).unwrap();
        assert_close(&back, &a, 1e-10);
    }

    #[test]
    fn sqrt_squares_back() {
        let s = sig(0, 2);
        let a = Multivector::from_terms(s, &[(0, 3.0), (1, 0.5), (3, -0.4)]).unwrap();
        let root = apply_function(&a, &ScalarFunction::sqrt()).unwrap();
        assert_close(&(&root * &root), &a, 1e-10);
    }

    #[test]
    fn defective_log_at_zero_errors() {
        // nilpotent input: eigenvalue 0 repeated, log guard fires
        let s = sig(1, 1);
        let n = Multivector::from_terms(s, &[(1, 1.0), (2, 1.0)]).unwrap();
        assert!(matches!(
            apply_function(&n, &ScalarFunction::log()),
            Err(ClifError::Domain { .. })
        ));
    }

    #[test]
    fn complex_ok_permits_nonreal_output() {
        // log of a multivector with a negative real eigenvalue
        let s = sig(1, 0);
        let a = Multivector::from_terms(s, &[(0, -2.0), (1, 0.5)]).unwrap();
        // eigenvalues -2 +- 0.5: both negative real
        assert!(matches!(
            apply_function(&a, &ScalarFunction::log()),
            Err(ClifError::Realification { .. })
        ));
        let opts = EvalOptions {
            complex_ok: true,
            ..EvalOptions::default()
        };
        let ev = evaluate(&a, &ScalarFunction::log(), &opts).unwrap();
        assert!(ev.imag_residual > 1.0); // pi-sized imaginary parts survive
                                         // exp of the complex log returns the input
        let sum: Multivector<Complex64> = ev.complex_value;
        // exponentiate eigenvalue-wise through a Taylor check: exp(log -2) = -2
        assert!((sum.coeffs()[0].im.abs() - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn neville_extrapolates_polynomials_exactly() {
        let s = sig(1, 0);
        let xs = [1e-3, 5e-4, 2.5e-4];
        // y(eps) = 2 - 3 eps + 5 eps^2 on the scalar slot
        let ys: Vec<Multivector<Complex64>> = xs
            .iter()
            .map(|&e| Multivector::scalar(s, Complex64::new(2.0 - 3.0 * e + 5.0 * e * e, 0.0)))
            .collect();
        let (value, previous) = neville_to_zero(&xs, &ys);
        assert!((value.scalar_part().re - 2.0).abs() < 1e-12);
        // the order-1 extrapolant misses by the eps^2 term only
        assert!((previous.scalar_part().re - 2.0).abs() < 1e-6);
    }
}
