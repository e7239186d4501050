//! Cl(p,q) basis blades, the geometric product, grade operations and the
//! conjugations used by the characteristic-polynomial machinery.

mod multivector;
mod signature;

pub use multivector::Multivector;
pub use signature::{
    clifford_conjugation_sign, grade_involution_sign, reversion_sign, set_sign_table_limit, Blade,
    Signature, MAX_DIM,
};
