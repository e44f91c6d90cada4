use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{cyclotomic, FieldHandle, LaurentSeries, NfElem, RationalFunction, Result};

/// Outcome of a zero test on a possibly truncated element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroStatus {
    Zero,
    NonZero,
    /// All known digits vanish but the element is only known to finite precision.
    Indeterminate,
}

/// Coefficient domain for 2x2 matrices. Elements carry their own context
/// (modulus, defining polynomial), so constants are produced "like" an
/// existing element.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn zero_status(&self) -> ZeroStatus;

    /// Whether a determinant-one matrix with this trace has eigenvalues of
    /// infinite multiplicative order. `None` when precision does not decide.
    fn trace_has_infinite_order(&self) -> Option<bool>;

    /// Whether the element is a square in the coefficient field.
    fn is_square_elem(&self) -> Result<bool>;

    fn is_zero_certified(&self) -> bool {
        self.zero_status() == ZeroStatus::Zero
    }

    fn is_nonzero_certified(&self) -> bool {
        self.zero_status() == ZeroStatus::NonZero
    }

    /// Equality to precision: `Ok(true)` when the difference is zero or
    /// indeterminate at the working precision.
    fn equals_to_precision(&self, o: &Self) -> bool {
        self.minus(o).zero_status() != ZeroStatus::NonZero
    }
}

impl Ring for LaurentSeries {
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.modulus())
    }
    fn one_like(&self) -> Self {
        LaurentSeries::one(self.modulus())
    }
    fn from_int_like(&self, n: i64) -> Self {
        LaurentSeries::from_int(self.modulus(), n)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn zero_status(&self) -> ZeroStatus {
        LaurentSeries::zero_status(self)
    }
    /// Over F_p((t)) the eigenvalues are roots of unity iff the trace is a
    /// constant of F_p.
    fn trace_has_infinite_order(&self) -> Option<bool> {
        self.is_constant().map(|c| !c)
    }
    fn is_square_elem(&self) -> Result<bool> {
        self.is_square()
    }
}

impl Ring for RationalFunction {
    fn zero_like(&self) -> Self {
        self.constant_like(0)
    }
    fn one_like(&self) -> Self {
        self.constant_like(1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.constant_like(n)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn zero_status(&self) -> ZeroStatus {
        if self.is_zero() {
            ZeroStatus::Zero
        } else {
            ZeroStatus::NonZero
        }
    }
    fn trace_has_infinite_order(&self) -> Option<bool> {
        Some(!self.is_constant())
    }
    fn is_square_elem(&self) -> Result<bool> {
        Ok(self.is_square())
    }
}

impl Ring for NfElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.field().from_int(n)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn zero_status(&self) -> ZeroStatus {
        if self.is_zero() {
            ZeroStatus::Zero
        } else {
            ZeroStatus::NonZero
        }
    }
    fn trace_has_infinite_order(&self) -> Option<bool> {
        Some(cyclotomic::trace_root_of_unity_order(self).is_none())
    }
    fn is_square_elem(&self) -> Result<bool> {
        Ok(self.is_square())
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn zero_status(&self) -> ZeroStatus {
        if self.is_zero() {
            ZeroStatus::Zero
        } else {
            ZeroStatus::NonZero
        }
    }
    /// Rational traces of finite-order elements are 0, ±1, ±2.
    fn trace_has_infinite_order(&self) -> Option<bool> {
        let finite = self.is_integer() && self.to_integer().abs().to_i64().is_some_and(|v| v <= 2);
        Some(!finite)
    }
    fn is_square_elem(&self) -> Result<bool> {
        if self.is_negative() {
            return Ok(false);
        }
        let is_sq = |n: &num_bigint::BigInt| {
            let r = n.sqrt();
            &r * &r == *n
        };
        Ok(is_sq(self.numer()) && is_sq(self.denom()))
    }
}
