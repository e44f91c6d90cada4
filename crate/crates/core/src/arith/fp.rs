use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{ArithError, Result};

/// Largest modulus accepted by [`Fp::new`].
pub const MAX_PRIME: u64 = 1 << 31;

/// Deterministic Miller-Rabin; the witness set is exact below 3.3e24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<u32> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(p as u32)
}

/// Element of the prime field F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    p: u32,
    v: u32,
}

impl Fp {
    pub fn new(p: u32, v: i64) -> Result<Self> {
        check_prime(p as u64)?;
        Ok(Self::raw(p, v))
    }

    /// Skips the primality check; `p` must already be validated.
    pub(crate) fn raw(p: u32, v: i64) -> Self {
        Fp { p, v: v.rem_euclid(p as i64) as u32 }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn value(&self) -> u32 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp { p: self.p, v: 1 % self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Self> {
        if self.v == 0 {
            return Err(ArithError::ZeroDivision);
        }
        Ok(self.pow(self.p as u64 - 2))
    }

    /// Euler's criterion (every element is a square when p = 2).
    pub fn is_square(self) -> bool {
        self.p == 2 || self.v == 0 || self.pow((self.p as u64 - 1) / 2).v == 1
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { p: self.p, v: ((self.v as u64 + o.v as u64) % self.p as u64) as u32 }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { p: self.p, v: ((self.v as u64 + self.p as u64 - o.v as u64) % self.p as u64) as u32 }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { p: self.p, v: ((self.v as u64 * o.v as u64) % self.p as u64) as u32 }
    }
}

impl Div for Fp {
    type Output = Fp;
    /// Panics on division by zero; use [`Fp::inv`] for the checked form.
    fn div(self, o: Fp) -> Fp {
        self * o.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { p: self.p, v: (self.p - self.v) % self.p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(Fp::new(4, 1).is_err());
    }

    #[test]
    fn field_ops() {
        let a = Fp::new(7, 3).unwrap();
        let b = Fp::new(7, -2).unwrap();
        assert_eq!(b.value(), 5);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((-a).value(), 4);
        assert!(Fp::new(7, 2).unwrap().is_square());
        assert!(!Fp::new(7, 3).unwrap().is_square());
    }
}
