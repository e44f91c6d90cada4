use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ArithError, Result};

/// Dense polynomial over Q, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QPoly {
    c: Vec<BigRational>,
}

pub(crate) fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| q(v)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|v| BigRational::from_integer(v.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(a: BigRational) -> Self {
        Self::new(vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut acc = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                acc[i + j] += a * b;
            }
        }
        Self::new(acc)
    }

    pub fn scale(&self, a: &BigRational) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.c.len();
        if dl == 0 {
            return Err(ArithError::ZeroDivision);
        }
        if self.c.len() < dl {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = d.leading().recip();
        let mut r = self.c.clone();
        let mut quo = vec![BigRational::zero(); r.len() - dl + 1];
        for k in (0..quo.len()).rev() {
            let coef = &r[k + dl - 1] * &lead_inv;
            if !coef.is_zero() {
                for (j, dv) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dv;
                }
            }
            quo[k] = coef;
        }
        r.truncate(dl - 1);
        Ok((Self::new(quo), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*o = g, g monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qq, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qq.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qq.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, x)| x * q(i as i64)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Evaluation at a polynomial argument, reduced modulo `m` when given.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(a.clone()));
        }
        acc
    }

    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).expect("nonzero gcd").0.monic()
    }

    /// Integer coefficients when every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.c.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// Clears denominators and content, leading coefficient positive.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = BigInt::one();
        for x in &self.c {
            l = l.lcm(x.denom());
        }
        let mut ints: Vec<BigInt> = self.c.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
        ints
    }

    /// Sturm sequence of a squarefree polynomial.
    fn sturm(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero").neg();
            seq.push(r);
        }
        seq.pop();
        seq
    }

    fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in seq {
            let v = s.eval(x);
            let sg = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if sg != 0 {
                if last != 0 && sg != last {
                    count += 1;
                }
                last = sg;
            }
        }
        count
    }

    /// Bound strictly exceeding the absolute value of every complex root.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let mut m = BigRational::zero();
        for a in &self.c[..self.c.len() - 1] {
            let r = a.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + q(1)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let g = self.squarefree_part();
        if g.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = g.sturm();
        let b = g.root_bound();
        Self::sign_changes(&seq, &-b.clone()) - Self::sign_changes(&seq, &b)
    }

    /// Isolates the distinct real roots in increasing order.
    pub fn real_roots(&self) -> Vec<IsolatedRoot> {
        let g = self.squarefree_part();
        if g.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let seq = g.sturm();
        let b = g.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_changes(&seq, &lo) - Self::sign_changes(&seq, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(IsolatedRoot { poly: g.clone(), lo, hi, exact: None });
                continue;
            }
            let mid = (&lo + &hi) / q(2);
            if g.eval(&mid).is_zero() {
                out.push(IsolatedRoot { poly: g.clone(), lo: mid.clone(), hi: mid.clone(), exact: Some(mid.clone()) });
                // roots strictly on either side; shrink around mid
                let eps = (&hi - &lo) / q(1 << 20);
                let mut e = eps;
                while Self::sign_changes(&seq, &(&mid - &e)) - Self::sign_changes(&seq, &(&mid + &e)) > 1 {
                    e /= q(2);
                }
                stack.push((lo, &mid - &e));
                stack.push((&mid + &e, hi));
            } else {
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
        for r in out.iter_mut() {
            if r.exact.is_none() && r.poly.eval(&r.hi).is_zero() {
                r.exact = Some(r.hi.clone());
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, a)) in self.c.iter().enumerate().rev().filter(|(_, a)| !a.is_zero()).enumerate() {
            let neg = a.is_negative();
            let abs = a.abs();
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
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("x"))
    }
}

/// A real root of a squarefree rational polynomial, isolated in `(lo, hi]`.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    poly: QPoly,
    lo: BigRational,
    hi: BigRational,
    exact: Option<BigRational>,
}

impl IsolatedRoot {
    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let mid = (&self.lo + &self.hi) / q(2);
        let fm = self.poly.eval(&mid);
        if fm.is_zero() {
            self.exact = Some(mid.clone());
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let fh = self.poly.eval(&self.hi);
        if fh.is_zero() || fh.is_positive() != fm.is_positive() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn approx(&self) -> f64 {
        let mut r = self.clone();
        for _ in 0..60 {
            if (&r.hi - &r.lo) < BigRational::new(BigInt::one(), BigInt::from(1u64 << 60)) {
                break;
            }
            r.refine();
        }
        let mid = r.exact.clone().unwrap_or_else(|| (&r.lo + &r.hi) / q(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Sign of `e(root)`, refining until certified. `e` must not vanish at the root
    /// (guaranteed when `e` is a nonzero element of the field cut out by an
    /// irreducible polynomial).
    pub fn sign_of(&mut self, e: &QPoly) -> Result<std::cmp::Ordering> {
        use std::cmp::Ordering;
        if e.is_zero() {
            return Ok(Ordering::Equal);
        }
        for _ in 0..4000 {
            if let Some(x) = &self.exact {
                return Ok(e.eval(x).cmp(&BigRational::zero()));
            }
            let (lo, hi) = interval_eval(e, &self.lo, &self.hi);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            self.refine();
        }
        Err(ArithError::PrecisionExhausted("sign of a field element at a real root not separated from 0".into()))
    }
}

/// Interval Horner evaluation over [lo, hi].
fn interval_eval(e: &QPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in e.coeffs().iter().rev() {
        let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_ext_gcd() {
        let f = QPoly::from_ints(&[-1, 0, 1]);
        let g = QPoly::from_ints(&[1, 1]);
        assert_eq!(f.gcd(&g), g);
        let h = QPoly::from_ints(&[1, 0, 1]);
        let (d, s, t) = f.ext_gcd(&h);
        assert!(d.degree() == Some(0));
        assert_eq!(s.mul(&f).add(&t.mul(&h)), d);
    }

    #[test]
    fn real_root_isolation() {
        let f = QPoly::from_ints(&[-2, 0, 1]);
        let roots = f.real_roots();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].approx() + 2f64.sqrt()).abs() < 1e-12);
        assert!((roots[1].approx() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(QPoly::from_ints(&[1, 0, 1]).count_real_roots(), 0);
        // rational roots, including 0
        let g = QPoly::from_ints(&[0, -1, 0, 1]);
        let r: Vec<f64> = g.real_roots().iter().map(|r| r.approx()).collect();
        assert_eq!(r.len(), 3);
        assert!((r[0] + 1.0).abs() < 1e-12 && r[1].abs() < 1e-12 && (r[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn signs_at_roots() {
        use std::cmp::Ordering;
        let f = QPoly::from_ints(&[-2, 0, 1]);
        let mut roots = f.real_roots();
        let e = QPoly::from_ints(&[1, 1]); // 1 + sqrt2 at both roots
        assert_eq!(roots[0].sign_of(&e).unwrap(), Ordering::Less);
        assert_eq!(roots[1].sign_of(&e).unwrap(), Ordering::Greater);
    }
}
