use std::fmt;

use super::fp::Fp;
use super::{ArithError, Result};

/// Dense univariate polynomial over F_p, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpPoly {
    p: u32,
    c: Vec<u32>,
}

impl FpPoly {
    pub fn new(p: u32, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| v.rem_euclid(p as i64) as u32).collect();
        Self::from_raw(p, c)
    }

    pub(crate) fn from_raw(p: u32, mut c: Vec<u32>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u32) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(Fp::raw(p, 1))
    }

    pub fn constant(a: Fp) -> Self {
        Self::from_raw(a.modulus(), vec![a.value()])
    }

    /// The monomial `a * x^k`.
    pub fn monomial(a: Fp, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a.value();
        Self::from_raw(a.modulus(), c)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Fp {
        Fp::raw(self.p, *self.c.get(i).unwrap_or(&0) as i64)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn leading(&self) -> Fp {
        Fp::raw(self.p, *self.c.last().unwrap_or(&0) as i64)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.c.iter().position(|&v| v != 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p as u64;
        let c = (0..n)
            .map(|i| ((*self.c.get(i).unwrap_or(&0) as u64 + *o.c.get(i).unwrap_or(&0) as u64) % p) as u32)
            .collect();
        Self::from_raw(self.p, c)
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(self.p, self.c.iter().map(|&v| (self.p - v) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::from_raw(self.p, acc.into_iter().map(|v| v as u32).collect())
    }

    pub fn scale(&self, a: Fp) -> Self {
        let p = self.p as u64;
        Self::from_raw(self.p, self.c.iter().map(|&v| ((v as u64 * a.value() as u64) % p) as u32).collect())
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        let p = self.p as u64;
        let dl = d.c.len();
        let inv = d.leading().inv()?.value() as u64;
        let mut r: Vec<u64> = self.c.iter().map(|&v| v as u64).collect();
        if r.len() < dl {
            return Ok((Self::zero(self.p), self.clone()));
        }
        let mut q = vec![0u64; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = r[k + dl - 1] * inv % p;
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &dv) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p - coef * dv as u64 % p) % p;
            }
        }
        r.truncate(dl - 1);
        Ok((
            Self::from_raw(self.p, q.into_iter().map(|v| v as u32).collect()),
            Self::from_raw(self.p, r.into_iter().map(|v| v as u32).collect()),
        ))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.leading().inv().expect("nonzero leading coefficient"))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: Fp) -> Fp {
        let mut acc = Fp::raw(self.p, 0);
        for &c in self.c.iter().rev() {
            acc = acc * x + Fp::raw(self.p, c as i64);
        }
        acc
    }

    /// Taylor shift: the polynomial `t -> self(c + t)`.
    pub fn shift(&self, c: Fp) -> Self {
        let mut acc = Self::zero(self.p);
        let lin = Self::from_raw(self.p, vec![c.value(), 1 % self.p]);
        for &coef in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&Self::from_raw(self.p, vec![coef]));
        }
        acc
    }

    /// Coefficients reversed with respect to degree `n` (`t^n self(1/t)`).
    pub fn reverse(&self, n: usize) -> Self {
        let mut c = vec![0u32; n + 1];
        for (i, &v) in self.c.iter().enumerate() {
            c[n - i] = v;
        }
        Self::from_raw(self.p, c)
    }

    pub fn derivative(&self) -> Self {
        let p = self.p as u64;
        let c = self.c.iter().enumerate().skip(1).map(|(i, &v)| ((i as u64 % p) * v as u64 % p) as u32).collect();
        Self::from_raw(self.p, c)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = Self::one(self.p).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m).expect("nonzero modulus");
            }
            base = base.mul(&base).rem(m).expect("nonzero modulus");
            e >>= 1;
        }
        acc
    }

    /// A square root when `self` is a square in F_p[x].
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let deg = self.degree()?;
        if deg % 2 == 1 {
            return None;
        }
        if self.p == 2 {
            // Frobenius: squares are exactly the polynomials in x^2.
            if self.c.iter().enumerate().any(|(i, &v)| i % 2 == 1 && v != 0) {
                return None;
            }
            let c = self.c.iter().step_by(2).copied().collect();
            return Some(Self::from_raw(2, c));
        }
        let lead = self.leading();
        if !lead.is_square() {
            return None;
        }
        let root_lead = fp_sqrt(lead)?;
        // Solve top-down for the coefficients of the square root.
        let half = deg / 2;
        let mut r = vec![Fp::raw(self.p, 0); half + 1];
        r[half] = root_lead;
        let two_inv = Fp::raw(self.p, 2).inv().ok()?;
        for k in (0..half).rev() {
            // coefficient of x^{half + k} in r^2
            let mut s = Fp::raw(self.p, 0);
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j > half || j <= k {
                    continue;
                }
                s = s + r[i] * r[j];
            }
            let target = self.coeff(half + k);
            // target = 2 r[half] r[k] + (sum over pairs excluding r[k])
            let rest = s - r[half] * r[k];
            r[k] = (target - rest) * two_inv / r[half];
        }
        let cand = Self::from_raw(self.p, r.iter().map(|v| v.value()).collect());
        (cand.mul(&cand) == *self).then_some(cand)
    }
}

/// Tonelli-Shanks square root in F_p.
pub(crate) fn fp_sqrt(a: Fp) -> Option<Fp> {
    let p = a.modulus() as u64;
    if a.is_zero() || p == 2 {
        return Some(a);
    }
    if !a.is_square() {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = Fp::raw(p as u32, 2);
    while z.is_square() {
        z = z + Fp::raw(p as u32, 1);
    }
    let mut m = s;
    let mut c = z.pow(q);
    let mut t = a.pow(q);
    let mut r = a.pow(q.div_ceil(2));
    while t.value() != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt.value() != 1 {
            tt = tt * tt;
            i += 1;
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    Some(r)
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.c.iter().enumerate().map(|(i, &v)| (i as i64, v as i64)), "y")
    }
}

/// Shared pretty printer: `terms` are (exponent, coefficient) with nonzero coefficients
/// in ascending exponent order; printed highest first.
pub(crate) fn write_poly<I>(f: &mut fmt::Formatter<'_>, terms: I, var: &str) -> fmt::Result
where
    I: Iterator<Item = (i64, i64)>,
{
    let terms: Vec<(i64, i64)> = terms.filter(|&(_, c)| c != 0).collect();
    if terms.is_empty() {
        return write!(f, "0");
    }
    f.write_str(&format_terms(&terms, var))
}

pub(crate) fn format_terms(terms: &[(i64, i64)], var: &str) -> String {
    let mut out = String::new();
    for (k, &(e, c)) in terms.iter().rev().enumerate() {
        let neg = c < 0;
        let a = c.unsigned_abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        if mono.is_empty() {
            out.push_str(&a.to_string());
        } else if a == 1 {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{a}*{mono}"));
        }
    }
    out
}
