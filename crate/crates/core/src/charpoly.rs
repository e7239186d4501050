//! Characteristic polynomial of a multivector, computed by four mutually
//! cross-checking methods, plus determinant, trace, inverse and the resolvent
//! trace identity.
//!
//! Conventions: chi_A(lambda) = -Det(lambda - A) = sum_k C(d-k) lambda^k with
//! C(0) = -1, C(1) = d<A>_0 = Tr(A) and C(d) = -Det(A).

use num_complex::Complex64;

use crate::algebra::{Blade, Multivector, Signature};
use crate::dd::Dd;
use crate::error::ClifError;

/// Coefficients C(0)..C(d) of the characteristic polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    c: Vec<f64>,
}

impl CharPoly {
    pub fn from_c_coeffs(c: Vec<f64>) -> Self {
        assert!(c.len() >= 2, "characteristic polynomial has degree >= 1");
        CharPoly { c }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    /// C(k), the coefficient at lambda^(d-k).
    pub fn c(&self, k: usize) -> f64 {
        self.c[k]
    }

    /// All coefficients C(0)..C(d).
    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// chi(z) by Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in &self.c {
            acc = acc * z + ck;
        }
        acc
    }

    /// chi'(z).
    pub fn eval_deriv(&self, z: Complex64) -> Complex64 {
        let d = self.degree();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..d {
            acc = acc * z + (d - k) as f64 * self.c[k];
        }
        acc
    }

    /// Monic form -chi, ascending: a[j] is the coefficient of lambda^j, a[d] = 1.
    pub fn monic_ascending(&self) -> Vec<f64> {
        let d = self.degree();
        (0..=d).map(|j| self.c[d - j] / self.c[0]).collect()
    }
}

/// Power sums S(k) = (-1)^(k-1) d (k-1)! <A^k>_0, k = 1..d.
#[derive(Clone, Debug)]
pub struct PowerSums {
    s: Vec<f64>,
}

impl PowerSums {
    /// S(k) for 1 <= k <= d.
    pub fn s(&self, k: usize) -> f64 {
        self.s[k - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }
}

/// Faddeev-LeVerrier recursion: A(1) = A, C(k) = (d/k)<A(k)>_0,
/// A(k+1) = A (A(k) - C(k)).
pub fn faddeev_leverrier(a: &Multivector<f64>) -> CharPoly {
    faddeev_leverrier_full(a).0
}

/// Faddeev-LeVerrier plus the penultimate iterate A(d-1) - C(d-1), from which
/// the inverse is read off: A (A(d-1) - C(d-1)) = C(d).
pub fn faddeev_leverrier_full(a: &Multivector<f64>) -> (CharPoly, Multivector<f64>) {
    let sig = a.signature();
    let d = sig.char_degree();
    if let Some((c, penult)) = fl_integer(a, d) {
        let penult = Multivector::from_coeffs(sig, penult.iter().map(|&v| v as f64).collect())
            .expect("length preserved");
        return (
            CharPoly::from_c_coeffs(c.iter().map(|&v| v as f64).collect()),
            penult,
        );
    }

    let mut c = vec![0.0f64; d + 1];
    c[0] = -1.0;
    let mut ak = a.clone();
    let mut penult = Multivector::zero(sig);
    for k in 1..=d {
        c[k] = d as f64 / k as f64 * ak.scalar_part();
        if k < d {
            let shifted = &ak - &Multivector::scalar(sig, c[k]);
            if k == d - 1 {
                penult = shifted.clone();
            }
            ak = a * &shifted;
        }
    }
    (CharPoly::from_c_coeffs(c), penult)
}

/// Alternative recursion starting from C'(0) = 1, B(0) = 1:
/// C'(k) = -Tr(A B(k-1))/k, B(k) = A B(k-1) + C'(k). The sign flip
/// C(k) = -C'(k) is applied so the output matches [`faddeev_leverrier`].
pub fn helmstetter_recursion(a: &Multivector<f64>) -> CharPoly {
    let sig = a.signature();
    let d = sig.char_degree();
    if let Some(c) = helmstetter_integer(a, d) {
        return CharPoly::from_c_coeffs(c.iter().map(|&v| v as f64).collect());
    }

    let mut c = vec![0.0f64; d + 1];
    c[0] = -1.0;
    let mut bk = Multivector::scalar(sig, 1.0);
    for k in 1..=d {
        let abk = a * &bk;
        let c_prime = -(d as f64) * abk.scalar_part() / k as f64;
        c[k] = -c_prime;
        bk = &abk + &Multivector::scalar(sig, c_prime);
    }
    CharPoly::from_c_coeffs(c)
}

/// Complete Bell polynomial B_k(x_1..x_k) for k = x.len(); B_0 = 1.
pub fn complete_bell(x: &[f64]) -> f64 {
    let k = x.len();
    let mut bell = vec![0.0f64; k + 1];
    bell[0] = 1.0;
    for m in 1..=k {
        // B_m = sum_{j=0}^{m-1} binom(m-1, j) B_{m-1-j} x_{j+1}
        let mut binom = 1.0f64;
        let mut acc = 0.0f64;
        for j in 0..m {
            acc += binom * bell[m - 1 - j] * x[j];
            binom *= (m - 1 - j) as f64 / (j + 1) as f64;
        }
        bell[m] = acc;
    }
    bell[k]
}

/// Power sums feeding the Bell-polynomial method.
pub fn power_sums(a: &Multivector<f64>) -> PowerSums {
    let d = a.signature().char_degree();
    let mut s = Vec::with_capacity(d);
    let mut ak = a.clone();
    let mut factorial = 1.0f64; // (k-1)!
    for k in 1..=d {
        if k > 1 {
            ak = &ak * a;
            factorial *= (k - 1) as f64;
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        s.push(sign * d as f64 * factorial * ak.scalar_part());
    }
    PowerSums { s }
}

/// Characteristic coefficients from complete Bell polynomials:
/// C(k) = (-1)^(k+1)/k! B_k(S(1)..S(k)).
pub fn bell_method(a: &Multivector<f64>) -> CharPoly {
    let d = a.signature().char_degree();
    let sums = power_sums(a);
    let mut c = vec![0.0f64; d + 1];
    c[0] = -1.0;
    let mut factorial = 1.0f64;
    for k in 1..=d {
        factorial *= k as f64;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        c[k] = sign / factorial * complete_bell(&sums.as_slice()[..k]);
    }
    CharPoly::from_c_coeffs(c)
}

/// Determinant from the closed grade-negation expressions valid for n <= 6.
///
/// The nonscalar residue of the expression must vanish; a residue above
/// 1e-8 * max(1, ||A||_inf^d) reports an internal-consistency error.
pub fn det_closed_form(a: &Multivector<f64>) -> Result<f64, ClifError> {
    let sig = a.signature();
    let det_mv = match sig.n() {
        1 | 2 => a * &a.grade_negation(),
        3 | 4 => det_form_quartic(a),
        5 | 6 => det_form_quartic(&(a * &a.reversion())),
        n => return Err(ClifError::DeterminantUnsupported(n)),
    };
    let residue = det_mv.nonscalar_part().norm_inf();
    let bound = 1e-8 * a.norm_inf().max(1.0).powi(sig.char_degree() as i32);
    if residue > bound {
        return Err(ClifError::DeterminantResidue { residue, bound });
    }
    Ok(det_mv.scalar_part())
}

/// (1/3) (AA overline(AA) + 2 A overline(Abar overline(Abar Abar))), the
/// n = 3,4 determinant form.
fn det_form_quartic(a: &Multivector<f64>) -> Multivector<f64> {
    let aa = a * a;
    let t1 = &aa * &aa.grade_negation();
    let abar = a.grade_negation();
    let inner = (&abar * &abar).grade_negation();
    let t2 = a * &(&abar * &inner).grade_negation();
    (&t1 + &t2.scale(2.0)).scale(1.0 / 3.0)
}

/// Characteristic polynomial by sampling Det(lambda_s - A) at Chebyshev
/// nodes scaled to [-r, r], r = 1 + ||A||_1, and fitting the degree-d
/// polynomial; chi = -Det(lambda - A).
///
/// The node determinants and the Newton divided-difference fit run in
/// double-double arithmetic: in plain f64 the coefficient noise grows as
/// eps r^d and swamps the small low-order coefficients.
pub fn charpoly_by_interpolation(a: &Multivector<f64>) -> Result<CharPoly, ClifError> {
    let sig = a.signature();
    let d = sig.char_degree();
    let m = d + 1;
    let radius = 1.0 + a.norm_one();
    let nodes: Vec<f64> = (0..m)
        .map(|s| radius * (std::f64::consts::PI * (2 * s + 1) as f64 / (2 * m) as f64).cos())
        .collect();

    let mut values = Vec::with_capacity(m);
    for &node in &nodes {
        values.push(det_value_dd(a, node)?);
    }

    // Newton divided differences over the nodes; the node spacings are
    // formed in double-double too, the f64 difference alone rounds
    let mut table = values;
    let mut newton = vec![table[0]];
    for level in 1..m {
        for i in 0..m - level {
            let spacing = Dd::from_f64(nodes[i + level]).sub(Dd::from_f64(nodes[i]));
            table[i] = table[i + 1].sub(table[i]).div(spacing);
        }
        newton.push(table[0]);
    }

    // expand the Newton form into ascending monomial coefficients
    let mut poly = vec![Dd::ZERO; m];
    poly[0] = newton[m - 1];
    let mut degree = 0usize;
    for i in (0..m - 1).rev() {
        // poly := poly (lambda - node_i) + newton[i]
        degree += 1;
        for k in (1..=degree).rev() {
            poly[k] = poly[k - 1].add(poly[k].scale(-nodes[i]));
        }
        poly[0] = poly[0].scale(-nodes[i]).add(newton[i]);
    }

    // poly holds Det(lambda - A); C(k) = -poly[d - k]
    let c = (0..=d).map(|k| -poly[d - k].to_f64()).collect();
    Ok(CharPoly::from_c_coeffs(c))
}

/// Det(node - A) by the Table-1 form, evaluated in double-double arithmetic
/// including the shift itself: the node determinants of the interpolation
/// route would otherwise sit at an eps * scale^d noise floor that masks the
/// small coefficients.
fn det_value_dd(a: &Multivector<f64>, node: f64) -> Result<Dd, ClifError> {
    let sig = a.signature();
    let mut v: Vec<Dd> = a.coeffs().iter().map(|&c| Dd::from_f64(c).neg()).collect();
    v[0] = Dd::from_f64(node).add(v[0]);
    let det_mv = match sig.n() {
        1 | 2 => dd_gp(sig, &v, &dd_grade_negation(&v)),
        3 | 4 => dd_det_quartic(sig, &v),
        5 | 6 => {
            let h = dd_gp(sig, &v, &dd_reversion(&v));
            dd_det_quartic(sig, &h)
        }
        n => return Err(ClifError::DeterminantUnsupported(n)),
    };
    let residue = det_mv.iter().skip(1).fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = (node.abs() + a.norm_inf()).max(1.0);
    let bound = 1e-8 * scale.powi(sig.char_degree() as i32);
    if residue > bound {
        return Err(ClifError::DeterminantResidue { residue, bound });
    }
    Ok(det_mv[0])
}

fn dd_det_quartic(sig: Signature, v: &[Dd]) -> Vec<Dd> {
    let aa = dd_gp(sig, v, v);
    let t1 = dd_gp(sig, &aa, &dd_grade_negation(&aa));
    let abar = dd_grade_negation(v);
    let inner = dd_grade_negation(&dd_gp(sig, &abar, &abar));
    let t2 = dd_gp(sig, v, &dd_grade_negation(&dd_gp(sig, &abar, &inner)));
    t1.iter()
        .zip(&t2)
        .map(|(x, y)| x.add(y.scale(2.0)).div_f64(3.0))
        .collect()
}

fn dd_gp(sig: Signature, a: &[Dd], b: &[Dd]) -> Vec<Dd> {
    let size = sig.basis_count();
    let mut out = vec![Dd::ZERO; size];
    let table = sig.sign_table();
    for i in 0..size {
        if a[i] == Dd::ZERO {
            continue;
        }
        for j in 0..size {
            if b[j] == Dd::ZERO {
                continue;
            }
            let sign = match &table {
                Some(t) => t[i * size + j],
                None => {
                    sig.blade_product(Blade::from_mask(i), Blade::from_mask(j))
                        .0
                }
            };
            let term = a[i].mul(b[j]);
            let slot = &mut out[i ^ j];
            *slot = if sign < 0 {
                slot.sub(term)
            } else {
                slot.add(term)
            };
        }
    }
    out
}

fn dd_grade_negation(v: &[Dd]) -> Vec<Dd> {
    let mut out: Vec<Dd> = v.iter().map(|x| x.neg()).collect();
    out[0] = v[0];
    out
}

fn dd_reversion(v: &[Dd]) -> Vec<Dd> {
    v.iter()
        .enumerate()
        .map(|(mask, x)| {
            if crate::algebra::reversion_sign(mask.count_ones() as usize) < 0 {
                x.neg()
            } else {
                *x
            }
        })
        .collect()
}

/// Tr(A) = d <A>_0 = C(1).
pub fn trace(a: &Multivector<f64>) -> f64 {
    a.signature().char_degree() as f64 * a.scalar_part()
}

/// Det(A) = -C(d), via the Faddeev-LeVerrier recursion.
pub fn determinant(a: &Multivector<f64>) -> f64 {
    let chi = faddeev_leverrier(a);
    -chi.c(chi.degree())
}

/// Default singularity tolerance: 1e-10 scaled by the d-th power of the
/// input magnitude, since Det(tA) = t^d Det(A).
pub fn default_det_tolerance(a: &Multivector<f64>) -> f64 {
    1e-10
        * a.norm_inf()
            .max(1.0)
            .powi(a.signature().char_degree() as i32)
}

/// Inverse from the Faddeev-LeVerrier tail: A (A(d-1) - C(d-1)) = C(d), so
/// A^{-1} = (A(d-1) - C(d-1)) / C(d).
pub fn mv_inverse(a: &Multivector<f64>) -> Result<Multivector<f64>, ClifError> {
    mv_inverse_with_tol(a, None)
}

pub fn mv_inverse_with_tol(
    a: &Multivector<f64>,
    tau_det: Option<f64>,
) -> Result<Multivector<f64>, ClifError> {
    let (chi, penult) = faddeev_leverrier_full(a);
    let cd = chi.c(chi.degree());
    let tol = tau_det.unwrap_or_else(|| default_det_tolerance(a));
    if cd.abs() <= tol {
        return Err(ClifError::SingularMultivector { det: cd.abs(), tol });
    }
    Ok(penult.scale(1.0 / cd))
}

/// Both sides of the resolvent trace identity
/// Tr((lambda - A)^{-1}) = chi'(lambda)/chi(lambda), for comparison in tests.
pub fn resolvent_trace_check(a: &Multivector<f64>, lambda: f64) -> Result<(f64, f64), ClifError> {
    let sig = a.signature();
    let chi = faddeev_leverrier(a);
    let z = Complex64::new(lambda, 0.0);
    let chi_val = chi.eval(z).re;
    let scale = (1.0 + lambda.abs()).powi(chi.degree() as i32) * a.norm_inf().max(1.0);
    if chi_val.abs() <= 1e-10 * scale {
        return Err(ClifError::NearSingularResolvent {
            lambda,
            chi_abs: chi_val.abs(),
        });
    }
    let shifted = &Multivector::scalar(sig, lambda) - a;
    let lhs = trace(&mv_inverse(&shifted)?);
    let rhs = chi.eval_deriv(z).re / chi_val;
    Ok((lhs, rhs))
}

fn integer_coeffs(a: &Multivector<f64>) -> Option<Vec<i128>> {
    const EXACT: f64 = 9.0e15; // below 2^53, i128 conversion is exact
    a.coeffs()
        .iter()
        .map(|&c| {
            if c.fract() == 0.0 && c.abs() < EXACT {
                Some(c as i128)
            } else {
                None
            }
        })
        .collect()
}

/// Geometric product over i128 with overflow detection.
fn gp_i128(sig: Signature, a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let size = sig.basis_count();
    let mut out = vec![0i128; size];
    let table = sig.sign_table();
    for i in 0..size {
        if a[i] == 0 {
            continue;
        }
        for j in 0..size {
            if b[j] == 0 {
                continue;
            }
            let sign = match &table {
                Some(t) => t[i * size + j],
                None => {
                    sig.blade_product(Blade::from_mask(i), Blade::from_mask(j))
                        .0
                }
            };
            let term = a[i].checked_mul(b[j])?;
            let slot = &mut out[i ^ j];
            *slot = if sign < 0 {
                slot.checked_sub(term)?
            } else {
                slot.checked_add(term)?
            };
        }
    }
    Some(out)
}

/// Exact integer Faddeev-LeVerrier. The division by k is exact whenever the
/// input has integer coefficients (the characteristic coefficients are then
/// integers); any violation or i128 overflow falls back to floating point.
fn fl_integer(a: &Multivector<f64>, d: usize) -> Option<(Vec<i128>, Vec<i128>)> {
    let sig = a.signature();
    let a_int = integer_coeffs(a)?;
    let mut c = vec![0i128; d + 1];
    c[0] = -1;
    let mut ak = a_int.clone();
    let mut penult = vec![0i128; sig.basis_count()];
    for k in 1..=d {
        let t = (d as i128).checked_mul(ak[0])?;
        if t % k as i128 != 0 {
            return None;
        }
        c[k] = t / k as i128;
        if k < d {
            let mut shifted = ak;
            shifted[0] = shifted[0].checked_sub(c[k])?;
            if k == d - 1 {
                penult = shifted.clone();
            }
            ak = gp_i128(sig, &a_int, &shifted)?;
        }
    }
    Some((c, penult))
}

fn helmstetter_integer(a: &Multivector<f64>, d: usize) -> Option<Vec<i128>> {
    let sig = a.signature();
    let a_int = integer_coeffs(a)?;
    let mut c = vec![0i128; d + 1];
    c[0] = -1;
    let mut bk = vec![0i128; sig.basis_count()];
    bk[0] = 1;
    for k in 1..=d {
        let abk = gp_i128(sig, &a_int, &bk)?;
        let t = (d as i128).checked_mul(abk[0])?;
        if t % k as i128 != 0 {
            return None;
        }
        let c_prime = -(t / k as i128);
        c[k] = -c_prime;
        bk = abk;
        bk[0] = bk[0].checked_add(c_prime)?;
    }
    Some(c)
}
