//! Shared fixtures and helpers for the integration suites.

use clifun_core::algebra::{Multivector, Signature};
use rand::rngs::StdRng;
use rand::Rng;

pub fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).unwrap()
}

/// All signatures with 1 <= p + q <= n_max.
pub fn all_signatures(n_max: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for p in 0..=n {
            out.push(sig(p, n - p));
        }
    }
    out
}

/// Generic Cl(0,3) multivector with four distinct characteristic roots:
/// 8 - 6e2 - 9e3 + 5e12 - 5e13 + 6e23 - 4e123.
pub fn mv_cl03() -> Multivector<f64> {
    Multivector::from_terms(
        sig(0, 3),
        &[
            (0, 8.0),
            (0b010, -6.0),
            (0b100, -9.0),
            (0b011, 5.0),
            (0b101, -5.0),
            (0b110, 6.0),
            (0b111, -4.0),
        ],
    )
    .unwrap()
}

/// Generic Cl(4,2) multivector with eight distinct roots:
/// 2 + 3e4 + 3e26 + e1345 - 2e12456 + 3e123456.
pub fn mv_cl42() -> Multivector<f64> {
    Multivector::from_terms(
        sig(4, 2),
        &[
            (0, 2.0),
            (0b001000, 3.0),
            (0b100010, 3.0),
            (0b011101, 1.0),
            (0b111011, -2.0),
            (0b111111, 3.0),
        ],
    )
    .unwrap()
}

/// Diagonalizable Cl(4,0) multivector with repeated characteristic roots
/// and determinant zero: -4 - e1 - e2 - e3 - e4 - 2 sqrt(3) e1234.
pub fn mv_cl40() -> Multivector<f64> {
    let s3 = 3.0f64.sqrt();
    Multivector::from_terms(
        sig(4, 0),
        &[
            (0, -4.0),
            (1, -1.0),
            (2, -1.0),
            (4, -1.0),
            (8, -1.0),
            (15, -2.0 * s3),
        ],
    )
    .unwrap()
}

/// Defective Cl(3,0) multivector (minimal polynomial (2 + 2l + l^2)^2):
/// -1 + 2e1 + e2 + 2e3 - 2e12 - 2e13 + e23 - e123.
pub fn mv_cl30_defective() -> Multivector<f64> {
    Multivector::from_terms(
        sig(3, 0),
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
    .unwrap()
}

/// Defective Cl(4,2) multivector whose minimal polynomial has the factor
/// (l - 1)^2; 43 terms.
pub fn mv_cl42_defective() -> Multivector<f64> {
    let terms: &[(usize, f64)] = &[
        (0, -1.0),
        (0b000100, -1.0), // -e3
        (0b100000, 1.0),  // +e6
        (0b000011, -1.0), // -e12
        (0b000101, -1.0), // -e13
        (0b010001, 1.0),  // +e15
        (0b001010, -1.0), // -e24
        (0b010010, -1.0), // -e25
        (0b100010, 1.0),  // +e26
        (0b001100, -1.0), // -e34
        (0b010100, -1.0), // -e35
        (0b100100, 1.0),  // +e36
        (0b011000, -1.0), // -e45
        (0b110000, 1.0),  // +e56
        (0b000111, 1.0),  // +e123
        (0b001011, 1.0),  // +e124
        (0b100011, 1.0),  // +e126
        (0b001101, 1.0),  // +e134
        (0b010101, 1.0),  // +e135
        (0b100101, 1.0),  // +e136
        (0b101001, 1.0),  // +e146
        (0b001110, 1.0),  // +e234
        (0b010110, -1.0), // -e235
        (0b100110, -1.0), // -e236
        (0b011010, -1.0), // -e245
        (0b101010, -1.0), // -e246
        (0b110010, -1.0), // -e256
        (0b111000, 1.0),  // +e456
        (0b100111, -1.0), // -e1236
        (0b011011, 1.0),  // +e1245
        (0b101011, -1.0), // -e1246
        (0b110011, 1.0),  // +e1256
        (0b011101, -1.0), // -e1345
        (0b101101, -1.0), // -e1346
        (0b110101, -1.0), // -e1356
        (0b111001, 1.0),  // +e1456
        (0b101110, -1.0), // -e2346
        (0b110110, -1.0), // -e2356
        (0b111010, 1.0),  // +e2456
        (0b111100, 1.0),  // +e3456
        (0b011111, 1.0),  // +e12345
        (0b101111, -1.0), // -e12346
        (0b110111, 1.0),  // +e12356
    ];
    Multivector::from_terms(sig(4, 2), terms).unwrap()
}

pub fn random_mv(s: Signature, rng: &mut StdRng) -> Multivector<f64> {
    let coeffs = (0..s.basis_count())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    Multivector::from_coeffs(s, coeffs).unwrap()
}

pub fn random_int_mv(s: Signature, rng: &mut StdRng) -> Multivector<f64> {
    let coeffs = (0..s.basis_count())
        .map(|_| rng.gen_range(-3i32..=3) as f64)
        .collect();
    Multivector::from_coeffs(s, coeffs).unwrap()
}

/// Assert per-coefficient closeness relative to max(1, |reference|_inf).
pub fn assert_mv_close(got: &Multivector<f64>, want: &Multivector<f64>, rel: f64, label: &str) {
    let scale = want.norm_inf().max(1.0);
    let diff = (got - want).norm_inf();
    assert!(
        diff < rel * scale,
        "{label}: differ by {diff:.3e} (allowed {:.3e})",
        rel * scale
    );
}
