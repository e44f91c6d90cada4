use std::fmt;

use super::fp::{check_prime, Fp};
use super::fppoly::format_terms;
use super::ring::ZeroStatus;
use super::{ArithError, Result};

/// Default absolute precision for series produced by inexact operations.
pub const DEFAULT_PREC: i64 = 64;

/// Truncated formal Laurent series over F_p in the variable `t`.
///
/// An element is either exact (a finite Laurent polynomial, `prec == None`)
/// or known modulo `t^prec`. Precision is tracked pessimistically: results of
/// arithmetic carry the precision guaranteed by their operands.
///
/// Normal form: `coeffs[0] != 0` whenever `coeffs` is nonempty; exact elements
/// have no trailing zeros; inexact elements store exactly `prec - val`
/// coefficients. An inexact element with no nonzero known coefficient is an
/// *indeterminate zero*; its valuation is only known to be `>= prec`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentSeries {
    p: u32,
    val: i64,
    coeffs: Vec<u32>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl LaurentSeries {
    fn normalize(p: u32, mut val: i64, mut coeffs: Vec<u32>, prec: Option<i64>) -> Self {
        if let Some(n) = prec {
            let keep = (n - val).max(0) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                let val = prec.unwrap_or(0);
                LaurentSeries { p, val, coeffs: Vec::new(), prec }
            }
            Some(k) => {
                coeffs.drain(..k);
                val += k as i64;
                match prec {
                    None => {
                        while coeffs.last() == Some(&0) {
                            coeffs.pop();
                        }
                    }
                    Some(n) => coeffs.resize((n - val) as usize, 0),
                }
                LaurentSeries { p, val, coeffs, prec }
            }
        }
    }

    /// Builds a series from `(exponent, coefficient)` terms; `prec = None` makes it exact.
    pub fn from_terms(p: u32, terms: &[(i64, i64)], prec: Option<i64>) -> Result<Self> {
        check_prime(p as u64)?;
        Ok(Self::from_terms_unchecked(p, terms, prec))
    }

    pub(crate) fn from_terms_unchecked(p: u32, terms: &[(i64, i64)], prec: Option<i64>) -> Self {
        if terms.is_empty() {
            return Self::normalize(p, 0, Vec::new(), prec);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0u64; (hi - lo + 1) as usize];
        for &(e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = (*slot + c.rem_euclid(p as i64) as u64) % p as u64;
        }
        Self::normalize(p, lo, coeffs.into_iter().map(|c| c as u32).collect(), prec)
    }

    pub(crate) fn from_dense(p: u32, val: i64, coeffs: Vec<u32>, prec: Option<i64>) -> Self {
        Self::normalize(p, val, coeffs, prec)
    }

    pub fn zero(p: u32) -> Self {
        LaurentSeries { p, val: 0, coeffs: Vec::new(), prec: None }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        Self::from_terms_unchecked(p, &[(0, n)], None)
    }

    /// `c * t^e`, exact.
    pub fn monomial(p: u32, c: i64, e: i64) -> Self {
        Self::from_terms_unchecked(p, &[(e, c)], None)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Absolute precision; `None` for exact elements.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Restricts the element to precision `n` (no-op when already coarser).
    pub fn with_prec(&self, n: i64) -> Self {
        let prec = min_prec(self.prec, Some(n));
        Self::normalize(self.p, self.val, self.coeffs.clone(), prec)
    }

    pub fn zero_status(&self) -> ZeroStatus {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => ZeroStatus::NonZero,
            (true, None) => ZeroStatus::Zero,
            (true, Some(_)) => ZeroStatus::Indeterminate,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.zero_status() == ZeroStatus::Zero
    }

    /// Valuation; `Ok(None)` is +infinity (exact zero).
    pub fn valuation(&self) -> Result<Option<i64>> {
        match self.zero_status() {
            ZeroStatus::NonZero => Ok(Some(self.val)),
            ZeroStatus::Zero => Ok(None),
            ZeroStatus::Indeterminate => Err(ArithError::PrecisionExhausted(format!(
                "all coefficients below t^{} vanish",
                self.val
            ))),
        }
    }

    /// Certified lower bound for the valuation; `None` is +infinity.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match self.zero_status() {
            ZeroStatus::Zero => None,
            _ => Some(self.val),
        }
    }

    /// Coefficient of `t^e`, or an error when `e` lies beyond the precision.
    pub fn coeff(&self, e: i64) -> Result<Fp> {
        if let Some(n) = self.prec {
            if e >= n {
                return Err(ArithError::PrecisionExhausted(format!("coefficient of t^{e} beyond O(t^{n})")));
            }
        }
        let v = if self.coeffs.is_empty() || e < self.val {
            0
        } else {
            *self.coeffs.get((e - self.val) as usize).unwrap_or(&0)
        };
        Ok(Fp::raw(self.p, v as i64))
    }

    /// Known nonzero terms `(exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> Vec<(i64, u32)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.val + i as i64, c))
            .collect()
    }

    /// Truncation `self mod t^n` as an exact Laurent polynomial.
    pub fn truncate_below(&self, n: i64) -> Result<Self> {
        if let Some(pr) = self.prec {
            if pr < n {
                return Err(ArithError::PrecisionExhausted(format!(
                    "need coefficients below t^{n}, known only below t^{pr}"
                )));
            }
        }
        Ok(Self::normalize(self.p, self.val, self.coeffs.clone(), None).exact_truncate(n))
    }

    fn exact_truncate(self, n: i64) -> Self {
        let mut c = self.coeffs;
        let keep = (n - self.val).max(0) as usize;
        c.truncate(keep);
        Self::normalize(self.p, self.val, c, None)
    }

    /// True if the element is certified to be a constant of F_p (`Some(false)` if
    /// certified nonconstant, `None` if precision does not decide).
    pub fn is_constant(&self) -> Option<bool> {
        if self.terms().iter().any(|&(e, _)| e != 0) {
            return Some(false);
        }
        self.prec.is_none().then_some(true)
    }

    fn check_same(&self, o: &Self) {
        assert_eq!(self.p, o.p, "Laurent series over different residue fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same(o);
        let prec = min_prec(self.prec, o.prec);
        let parts: Vec<&Self> = [self, o].into_iter().filter(|s| !s.coeffs.is_empty()).collect();
        if parts.is_empty() {
            return Self::normalize(self.p, 0, Vec::new(), prec);
        }
        let lo = parts.iter().map(|s| s.val).min().unwrap();
        let mut hi = parts.iter().map(|s| s.val + s.coeffs.len() as i64).max().unwrap();
        if let Some(n) = prec {
            hi = hi.min(n);
        }
        if hi <= lo {
            return Self::normalize(self.p, lo, Vec::new(), prec);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; (hi - lo) as usize];
        for s in parts {
            for (i, &c) in s.coeffs.iter().enumerate() {
                let e = s.val + i as i64;
                if e < hi {
                    let slot = &mut acc[(e - lo) as usize];
                    *slot = (*slot + c as u64) % p;
                }
            }
        }
        Self::normalize(self.p, lo, acc.into_iter().map(|c| c as u32).collect(), prec)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        Self::normalize(p, self.val, self.coeffs.iter().map(|&c| (p - c) % p).collect(), self.prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_same(o);
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero(self.p);
        }
        let (lx, ly) = (self.val, o.val);
        let prec = min_prec(self.prec.map(|n| n + ly), o.prec.map(|n| n + lx));
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::normalize(self.p, lx + ly, Vec::new(), prec);
        }
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(n) = prec {
            len = len.min((n - lx - ly).max(0) as usize);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::normalize(self.p, lx + ly, acc.into_iter().map(|c| c as u32).collect(), prec)
    }

    pub fn scale(&self, a: Fp) -> Self {
        let p = self.p as u64;
        let c = self.coeffs.iter().map(|&c| ((c as u64 * a.value() as u64) % p) as u32).collect();
        Self::normalize(self.p, self.val, c, self.prec)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        LaurentSeries { p: self.p, val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec.map(|n| n + k) }
    }

    /// Inverse with at most `rel_cap` significant coefficients when the input is
    /// exact but not a monomial.
    pub fn inv_rel(&self, rel_cap: i64) -> Result<Self> {
        match self.zero_status() {
            ZeroStatus::Zero => return Err(ArithError::ZeroDivision),
            ZeroStatus::Indeterminate => {
                return Err(ArithError::PrecisionExhausted("inverting an indeterminate zero".into()))
            }
            ZeroStatus::NonZero => {}
        }
        let v = self.val;
        let u0 = Fp::raw(self.p, self.coeffs[0] as i64);
        let u0inv = u0.inv()?;
        let known = self.prec.map(|n| n - v);
        if known.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::normalize(self.p, -v, vec![u0inv.value()], None));
        }
        let rel = match known {
            Some(r) => r,
            None => rel_cap.max(1),
        };
        let rel_us = rel as usize;
        let p = self.p as u64;
        let mut w = vec![0u64; rel_us];
        w[0] = u0inv.value() as u64;
        let neg_inv = (p - w[0]) % p;
        for k in 1..rel_us {
            let mut s = 0u64;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s = (s + self.coeffs[j] as u64 * w[k - j]) % p;
            }
            w[k] = s * neg_inv % p;
        }
        Ok(Self::normalize(self.p, -v, w.into_iter().map(|c| c as u32).collect(), Some(-v + rel)))
    }

    /// Inverse, with [`DEFAULT_PREC`] significant coefficients for exact non-monomials.
    pub fn inv(&self) -> Result<Self> {
        self.inv_rel(DEFAULT_PREC)
    }

    /// `self / o`, computed so that the quotient is known at least to `t^target`
    /// when the operands allow it.
    pub fn div_to(&self, o: &Self, target: i64) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let vo = o.valuation()?.ok_or(ArithError::ZeroDivision)?;
        let need = target - self.val + vo;
        Ok(self.mul(&o.inv_rel(need.max(1))?))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one(self.p);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Agreement up to the smaller of the two precisions.
    pub fn congruent(&self, o: &Self) -> bool {
        self.sub(o).zero_status() != ZeroStatus::NonZero
    }

    /// Square test. Exact for odd p via Hensel lifting of the leading coefficient;
    /// for p = 2 the element must be a series in t^2.
    pub fn is_square(&self) -> Result<bool> {
        match self.zero_status() {
            ZeroStatus::Zero => return Ok(true),
            ZeroStatus::Indeterminate => {
                return Err(ArithError::PrecisionExhausted("square test on indeterminate zero".into()))
            }
            ZeroStatus::NonZero => {}
        }
        if self.val % 2 != 0 {
            return Ok(false);
        }
        if self.p == 2 {
            if self.terms().iter().any(|&(e, _)| e % 2 != 0) {
                return Ok(false);
            }
            return match self.prec {
                None => Ok(true),
                Some(_) => Err(ArithError::PrecisionExhausted(
                    "odd coefficients beyond the precision are unknown".into(),
                )),
            };
        }
        Ok(Fp::raw(self.p, self.coeffs[0] as i64).is_square())
    }

    /// Textual form of the known part, e.g. `t^-1 + 2*t`.
    pub fn to_poly_string(&self) -> String {
        let terms: Vec<(i64, i64)> = self.terms().into_iter().map(|(e, c)| (e, c as i64)).collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            format_terms(&terms, "t")
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.to_poly_string();
        match self.prec {
            None => f.write_str(&body),
            Some(n) if self.coeffs.is_empty() => write!(f, "O(t^{n})"),
            Some(n) => write!(f, "{body} + O(t^{n})"),
        }
    }
}
