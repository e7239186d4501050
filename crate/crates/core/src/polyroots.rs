//! All-roots solver for the characteristic polynomial: Aberth-Ehrlich
//! simultaneous iteration with Newton polishing, conjugate pairing and
//! single-linkage multiplicity clustering.

use num_complex::Complex64;

use crate::charpoly::CharPoly;
use crate::error::ClifError;

const MAX_ITERATIONS: usize = 400;
const STEP_TOL: f64 = 1e-14;
const DEFAULT_RESID_TOL: f64 = 1e-10;

/// Roots of a characteristic polynomial with conjugate pairing and
/// multiplicity clusters.
#[derive(Clone, Debug)]
pub struct RootSet {
    roots: Vec<Complex64>,
    clusters: Vec<RootCluster>,
    pairing: Vec<usize>,
    cluster_tol: f64,
}

/// A group of roots treated as one value with a multiplicity.
#[derive(Clone, Copy, Debug)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl RootSet {
    /// All roots, with repetition, sorted by (re, im).
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn clusters(&self) -> &[RootCluster] {
        &self.clusters
    }

    /// Involution mapping each root index to its conjugate partner
    /// (itself for real roots).
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn max_root_norm(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn all_distinct(&self) -> bool {
        self.clusters.iter().all(|c| c.multiplicity == 1)
    }
}

/// Default clustering tolerance: double-root perturbations split roots by
/// O(sqrt(eps)) of the coefficient noise, so this sits well above the
/// residual tolerance.
pub fn default_cluster_tol(roots: &[Complex64]) -> f64 {
    let max = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    1e-6 * (1.0 + max)
}

/// Find all d roots of chi and cluster them with the default tolerance.
pub fn find_roots(chi: &CharPoly) -> Result<RootSet, ClifError> {
    let monic = chi.monic_ascending();
    let mut roots = aberth_roots(&monic)?;
    let tol = default_cluster_tol(&roots);
    snap_and_pair(&mut roots, tol);
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let pairing = conjugate_pairing(&roots, tol);
    let clusters = cluster(&roots, tol);
    Ok(RootSet {
        roots,
        clusters,
        pairing,
        cluster_tol: tol,
    })
}

/// Roots of an arbitrary monic real polynomial given by ascending
/// coefficients (used for minimal polynomials).
pub fn roots_of_monic(ascending: &[f64]) -> Result<RootSet, ClifError> {
    let mut roots = aberth_roots(ascending)?;
    let tol = default_cluster_tol(&roots);
    snap_and_pair(&mut roots, tol);
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let pairing = conjugate_pairing(&roots, tol);
    let clusters = cluster(&roots, tol);
    Ok(RootSet {
        roots,
        clusters,
        pairing,
        cluster_tol: tol,
    })
}

/// Re-cluster an existing root set with a caller-chosen tolerance.
pub fn cluster_roots(rs: &RootSet, tau_cluster: f64) -> RootSet {
    let clusters = cluster(&rs.roots, tau_cluster);
    RootSet {
        roots: rs.roots.clone(),
        clusters,
        pairing: rs.pairing.clone(),
        cluster_tol: tau_cluster,
    }
}

fn eval_poly(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn eval_poly_deriv(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + k as f64 * c;
    }
    acc
}

/// Residual reference scale at a candidate root: the coefficient magnitude
/// times (1 + |z|)^degree.
fn poly_scale(coeffs: &[f64], z: Complex64) -> f64 {
    let degree = coeffs.len() - 1;
    let magnitude = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    magnitude * (1.0 + z.norm()).powi(degree as i32)
}

/// Aberth-Ehrlich iteration on a monic real polynomial (ascending
/// coefficients, leading coefficient 1 after normalization).
fn aberth_roots(ascending: &[f64]) -> Result<Vec<Complex64>, ClifError> {
    let degree = ascending.len() - 1;
    assert!(degree >= 1, "need degree >= 1");
    let lead = ascending[degree];
    let coeffs: Vec<f64> = ascending.iter().map(|c| c / lead).collect();

    // deterministic initialization on a circle at the Cauchy bound
    let radius = 1.0 + coeffs[..degree].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..degree)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut iterations = 0;
    for it in 0..MAX_ITERATIONS {
        iterations = it + 1;
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let zi = z[i];
            let p = eval_poly(&coeffs, zi);
            if p.norm() == 0.0 {
                continue;
            }
            let pd = eval_poly_deriv(&coeffs, zi);
            let newton = if pd.norm() == 0.0 {
                // flat spot: nudge instead of dividing by zero
                Complex64::new(1e-8 * (1.0 + zi.norm()), 0.0)
            } else {
                p / pd
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    repulsion += (zi - zj).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-12 {
                newton
            } else {
                newton / denom
            };
            z[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < STEP_TOL {
            break;
        }
    }

    // a few Newton polishing steps per root
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let p = eval_poly(&coeffs, *zi);
            let pd = eval_poly_deriv(&coeffs, *zi);
            if pd.norm() == 0.0 {
                break;
            }
            let step = p / pd;
            if !step.is_finite() || step.norm() > 0.1 * (1.0 + zi.norm()) {
                break;
            }
            *zi -= step;
        }
    }

    // accept only if every residual sits at the evaluation noise floor
    let mut worst = 0.0f64;
    for &zi in &z {
        let scale = poly_scale(&coeffs, zi);
        let resid = eval_poly(&coeffs, zi).norm();
        if scale > 0.0 {
            worst = worst.max(resid / scale);
        }
    }
    if worst > DEFAULT_RESID_TOL {
        return Err(ClifError::RootFailure {
            iterations,
            residual: worst,
            best: z,
        });
    }
    Ok(z)
}

/// Snap near-real roots to the axis and make conjugate partners exact.
fn snap_and_pair(roots: &mut [Complex64], tol: f64) {
    for z in roots.iter_mut() {
        if z.im.abs() < tol {
            z.im = 0.0;
        }
    }
    let upper: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im > 0.0).collect();
    let mut lower: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im < 0.0).collect();
    let mut unmatched = Vec::new();
    for &i in &upper {
        if lower.is_empty() {
            unmatched.push(i);
            continue;
        }
        let target = roots[i].conj();
        let (slot, &j) = lower
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                (roots[a] - target)
                    .norm()
                    .partial_cmp(&(roots[b] - target).norm())
                    .unwrap()
            })
            .unwrap();
        lower.remove(slot);
        let mean = (roots[i] + roots[j].conj()) * 0.5;
        roots[i] = mean;
        roots[j] = mean.conj();
    }
    // leftovers without a partner collapse to the real axis
    for &i in lower.iter().chain(unmatched.iter()) {
        roots[i].im = 0.0;
    }
}

fn conjugate_pairing(roots: &[Complex64], tol: f64) -> Vec<usize> {
    let mut pairing: Vec<usize> = (0..roots.len()).collect();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if roots[i].im == 0.0 {
            used[i] = true; // self-paired
            continue;
        }
        if used[i] {
            continue;
        }
        let target = roots[i].conj();
        let mut best: Option<(usize, f64)> = None;
        for (j, &zj) in roots.iter().enumerate() {
            if j == i || used[j] {
                continue;
            }
            let dist = (zj - target).norm();
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        if let Some((j, dist)) = best {
            if dist <= tol.max(1e-9 * (1.0 + roots[i].norm())) {
                pairing[i] = j;
                pairing[j] = i;
                used[i] = true;
                used[j] = true;
            }
        }
    }
    pairing
}

/// Single-linkage clustering within `tol`; cluster value is the member mean
/// and the cluster set is closed under conjugation.
fn cluster(roots: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push((Complex64::new(0.0, 0.0), 0));
        }
        let g = &mut groups[group_of[r]];
        g.0 += roots[i];
        g.1 += 1;
    }
    let mut clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|(sum, count)| RootCluster {
            value: sum / count as f64,
            multiplicity: count,
        })
        .collect();

    // enforce conjugate symmetry of the cluster values
    let m = clusters.len();
    let mut done = vec![false; m];
    for i in 0..m {
        if done[i] {
            continue;
        }
        let vi = clusters[i].value;
        if vi.im.abs() <= tol {
            clusters[i].value.im = 0.0;
            done[i] = true;
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (j, c) in clusters.iter().enumerate() {
            if j == i || done[j] {
                continue;
            }
            let dist = (c.value - vi.conj()).norm();
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        if let Some((j, dist)) = best {
            if dist <= tol {
                let mean = (vi + clusters[j].value.conj()) * 0.5;
                clusters[i].value = mean;
                clusters[j].value = mean.conj();
                done[i] = true;
                done[j] = true;
            }
        }
    }
    clusters.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });
    clusters
}
