//! Exact arithmetic kernels: prime fields, truncated Laurent series over them,
//! rational functions, rational polynomials and number fields.

mod cyclotomic;
mod factor;
mod fp;
mod fppoly;
mod laurent;
mod numfield;
mod qpoly;
mod ratfunc;
mod ring;

pub use cyclotomic::{
    cyclotomic_field, cyclotomic_polynomial, cyclotomic_trace, euler_phi, real_cyclotomic_field,
    real_cyclotomic_polynomial, trace_root_of_unity_order,
};
pub use factor::{factor_squarefree_over_z, is_irreducible_over_q};
pub use fp::{is_prime, Fp};
pub use fppoly::FpPoly;
pub use laurent::{LaurentSeries, DEFAULT_PREC};
pub use numfield::{FieldHandle, NfElem, NumberField, MAX_DEGREE};
pub(crate) use numfield::first_relation;
pub use qpoly::{IsolatedRoot, QPoly};
pub use ratfunc::{Place, RationalFunction};
pub use ring::{Ring, ZeroStatus};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    ZeroDivision,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("polynomial {0} is not irreducible over Q")]
    Reducible(String),
    #[error("invalid minimal polynomial: {0}")]
    InvalidMinpoly(String),
}

pub type Result<T> = std::result::Result<T, ArithError>;
