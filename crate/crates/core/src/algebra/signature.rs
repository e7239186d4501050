//! Algebra signature, basis blades and the blade-level product.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::ClifError;

/// Largest supported vector-space dimension n = p + q.
pub const MAX_DIM: usize = 12;

/// Sign/mask tables are precomputed for n up to this limit (4^n entries).
static SIGN_TABLE_LIMIT: AtomicUsize = AtomicUsize::new(8);

/// Adjust the dimension up to which blade-product signs are memoized.
pub fn set_sign_table_limit(n_max: usize) {
    SIGN_TABLE_LIMIT.store(n_max.min(MAX_DIM), Ordering::Relaxed);
}

/// Metric signature of Cl(p,q): p generators square to +1, q to -1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    p: u8,
    q: u8,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self, ClifError> {
        let n = p + q;
        if !(1..=MAX_DIM).contains(&n) {
            return Err(ClifError::UnsupportedDimension { n, max: MAX_DIM });
        }
        Ok(Self {
            p: p as u8,
            q: q as u8,
        })
    }

    pub fn p(&self) -> usize {
        self.p as usize
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    /// Vector-space dimension n = p + q.
    pub fn n(&self) -> usize {
        (self.p + self.q) as usize
    }

    /// Number of basis blades, 2^n.
    pub fn basis_count(&self) -> usize {
        1 << self.n()
    }

    /// Degree of the characteristic polynomial, d = 2^ceil(n/2).
    pub fn char_degree(&self) -> usize {
        1 << self.n().div_ceil(2)
    }

    /// Square of generator e_i (1-based index).
    pub fn generator_square(&self, i: usize) -> f64 {
        if i <= self.p as usize {
            1.0
        } else {
            -1.0
        }
    }

    /// Product of e_k^2 over the generators contained in `mask`.
    pub fn metric_sign(&self, mask: usize) -> i8 {
        if (mask >> self.p).count_ones() & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Geometric product of two basis blades: sign and resulting blade.
    ///
    /// The sign combines the reordering parity of interleaving the two index
    /// sequences with the metric factors of the annihilated common generators;
    /// the resulting mask is the symmetric difference.
    pub fn blade_product(&self, a: Blade, b: Blade) -> (i8, Blade) {
        let mut sign = reorder_sign(a.mask, b.mask);
        sign *= self.metric_sign(a.mask & b.mask);
        (sign, Blade::from_mask(a.mask ^ b.mask))
    }

    /// Memoized 2^n x 2^n sign table (row-major, [a][b]), or None above the limit.
    pub(crate) fn sign_table(&self) -> Option<Arc<Vec<i8>>> {
        if self.n() > SIGN_TABLE_LIMIT.load(Ordering::Relaxed) {
            return None;
        }
        static TABLES: OnceLock<RwLock<HashMap<Signature, Arc<Vec<i8>>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(t) = tables.read().unwrap().get(self) {
            return Some(Arc::clone(t));
        }
        let size = self.basis_count();
        let mut table = vec![0i8; size * size];
        for a in 0..size {
            for b in 0..size {
                let (s, _) = self.blade_product(Blade::from_mask(a), Blade::from_mask(b));
                table[a * size + b] = s;
            }
        }
        let table = Arc::new(table);
        tables
            .write()
            .unwrap()
            .entry(*self)
            .or_insert_with(|| Arc::clone(&table));
        Some(table)
    }

    /// All blade masks in presentation (grade-then-lexicographic) order,
    /// e.g. for n = 3: 1, e1, e2, e3, e12, e13, e23, e123.
    pub fn presentation_order(&self) -> Vec<usize> {
        let mut masks: Vec<usize> = (0..self.basis_count()).collect();
        masks.sort_by(|&a, &b| {
            let (ga, gb) = (a.count_ones(), b.count_ones());
            ga.cmp(&gb).then_with(|| {
                Blade::from_mask(a)
                    .indices()
                    .cmp(&Blade::from_mask(b).indices())
            })
        });
        masks
    }
}

/// Parity sign from merging the sorted index sequences of two blades.
fn reorder_sign(a: usize, b: usize) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1
    } else {
        -1
    }
}

/// A basis blade, stored as a generator bitset (bit i-1 set means e_i is a factor).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Blade {
    mask: usize,
}

impl Blade {
    pub const SCALAR: Blade = Blade { mask: 0 };

    pub fn from_mask(mask: usize) -> Self {
        Blade { mask }
    }

    /// Blade from 1-based generator indices in the given order.
    ///
    /// Returns the canonical blade together with the sign of the permutation
    /// that sorts the indices, so `e21` parses as `-e12`.
    pub fn from_indices(sig: Signature, indices: &[usize]) -> Result<(i8, Blade), ClifError> {
        let n = sig.n();
        let mut mask = 0usize;
        let mut sign = 1i8;
        for (i, &idx) in indices.iter().enumerate() {
            if idx == 0 || idx > n {
                return Err(ClifError::InvalidBladeIndex { index: idx, n });
            }
            let bit = 1usize << (idx - 1);
            if mask & bit != 0 {
                return Err(ClifError::DuplicateBladeIndex(idx));
            }
            // parity: count previously placed indices greater than this one
            let greater = indices[..i].iter().filter(|&&j| j > idx).count();
            if greater & 1 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Ok((sign, Blade { mask }))
    }

    pub fn mask(&self) -> usize {
        self.mask
    }

    pub fn grade(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        (0..usize::BITS as usize)
            .filter(|i| self.mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect()
    }

    pub fn pseudoscalar(sig: Signature) -> Self {
        Blade {
            mask: sig.basis_count() - 1,
        }
    }
}

/// Per-grade sign of the reversion, (-1)^(g(g-1)/2).
pub fn reversion_sign(grade: usize) -> i8 {
    if (grade * grade.wrapping_sub(1) / 2) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Per-grade sign of the grade involution, (-1)^g.
pub fn grade_involution_sign(grade: usize) -> i8 {
    if grade & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Per-grade sign of the Clifford conjugation, (-1)^(g(g+1)/2).
pub fn clifford_conjugation_sign(grade: usize) -> i8 {
    if (grade * (grade + 1) / 2) & 1 == 0 {
        1
    } else {
        -1
    }
}
