use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::{factor_squarefree_over_q, is_irreducible_over_q};
use super::qpoly::QPoly;
use super::{ArithError, Result};

/// Largest accepted degree for a number field presentation.
pub const MAX_DEGREE: usize = 24;

/// The number field Q[x]/(f) for a monic irreducible integer polynomial f.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: QPoly,
    var: String,
}

impl NumberField {
    /// Validates `minpoly` (monic, integral, degree 1..=24, irreducible over Q).
    pub fn new(minpoly: QPoly, var: &str) -> Result<Arc<Self>> {
        let deg = minpoly.degree().ok_or_else(|| ArithError::InvalidMinpoly("zero polynomial".into()))?;
        if deg == 0 || deg > MAX_DEGREE {
            return Err(ArithError::InvalidMinpoly(format!("degree {deg} outside 1..={MAX_DEGREE}")));
        }
        if !minpoly.is_monic() || minpoly.integer_coeffs().is_none() {
            return Err(ArithError::InvalidMinpoly(format!("{} is not monic with integer coefficients", minpoly.to_string_var(var))));
        }
        if !is_irreducible_over_q(&minpoly) {
            return Err(ArithError::Reducible(minpoly.to_string_var(var)));
        }
        Ok(Arc::new(NumberField { minpoly, var: var.to_string() }))
    }

    /// For polynomials known to be irreducible (cyclotomic and real cyclotomic).
    pub(crate) fn trusted(minpoly: QPoly, var: &str) -> Arc<Self> {
        debug_assert!(minpoly.is_monic());
        Arc::new(NumberField { minpoly, var: var.to_string() })
    }

    /// Q presented as Q[x]/(x).
    pub fn rationals() -> Arc<Self> {
        Self::trusted(QPoly::x(), "x")
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn var(&self) -> &str {
        &self.var
    }
}

pub trait FieldHandle {
    fn zero(&self) -> NfElem;
    fn one(&self) -> NfElem;
    fn from_int(&self, n: i64) -> NfElem;
    fn from_rational(&self, q: BigRational) -> NfElem;
    fn gen(&self) -> NfElem;
    fn from_poly(&self, f: &QPoly) -> NfElem;
    fn from_coords(&self, c: Vec<BigRational>) -> NfElem;
}

impl FieldHandle for Arc<NumberField> {
    fn zero(&self) -> NfElem {
        NfElem { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }
    fn one(&self) -> NfElem {
        self.from_int(1)
    }
    fn from_int(&self, n: i64) -> NfElem {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_rational(&self, q: BigRational) -> NfElem {
        let mut e = self.zero();
        e.coords[0] = q;
        e
    }
    fn gen(&self) -> NfElem {
        self.from_poly(&QPoly::x())
    }
    fn from_poly(&self, f: &QPoly) -> NfElem {
        let r = f.rem(&self.minpoly).expect("nonzero minpoly");
        let d = self.degree();
        NfElem { field: self.clone(), coords: (0..d).map(|i| r.coeff(i)).collect() }
    }
    fn from_coords(&self, mut c: Vec<BigRational>) -> NfElem {
        c.resize(self.degree(), BigRational::zero());
        NfElem { field: self.clone(), coords: c }
    }
}

/// Element of a number field, in power-basis coordinates.
#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &o.field) || self.field == o.field) && self.coords == o.coords
    }
}

impl Eq for NfElem {}

impl std::hash::Hash for NfElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl NfElem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn to_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }

    fn check_same(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &o.field) || self.field == o.field,
            "number field elements from different fields"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same(o);
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        NfElem { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        NfElem { field: self.field.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_same(o);
        self.field.from_poly(&self.to_poly().mul(&o.to_poly()))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        NfElem { field: self.field.clone(), coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        let (g, s, _) = self.to_poly().ext_gcd(self.field.minpoly());
        debug_assert_eq!(g.degree(), Some(0));
        Ok(self.field.from_poly(&s.scale(&g.coeff(0).recip())))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut b = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Lowest-degree monic rational polynomial annihilating the element, found as
    /// the first linear relation among 1, e, e^2, ...
    pub fn minimal_polynomial(&self) -> QPoly {
        let d = self.field.degree();
        let mut powers = Vec::with_capacity(d + 1);
        let mut cur = self.field.one();
        for _ in 0..=d {
            powers.push(cur.coords.clone());
            cur = cur.mul(self);
        }
        first_relation(&powers).expect("d+1 vectors in a d-dimensional space are dependent")
    }

    /// An element is an algebraic integer iff its minimal polynomial has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.minimal_polynomial().integer_coeffs().is_some()
    }

    /// Square test in the field: the element D is a square iff the étale
    /// algebra K[z]/(z^2 - D) splits, detected by factoring the minimal
    /// polynomial of a primitive element z + s*x over Q.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let d = self.field.degree();
        if d == 1 {
            use num_traits::Signed;
            let q = &self.coords[0];
            if q.is_negative() {
                return false;
            }
            let is_sq = |n: &BigInt| {
                let r = n.sqrt();
                &r * &r == *n
            };
            return is_sq(q.numer()) && is_sq(q.denom());
        }
        let x = self.field.gen();
        for s in 0..32i64 {
            // theta = s*x + z as a pair (a, b) meaning a + b z
            let theta = (x.scale(&BigRational::from_integer(s.into())), self.field.one());
            let mut cur = (self.field.one(), self.field.zero());
            let mut vecs = Vec::with_capacity(2 * d + 1);
            for _ in 0..=2 * d {
                let mut v = cur.0.coords.clone();
                v.extend(cur.1.coords.iter().cloned());
                vecs.push(v);
                cur = (
                    cur.0.mul(&theta.0).add(&cur.1.mul(&theta.1).mul(self)),
                    cur.0.mul(&theta.1).add(&cur.1.mul(&theta.0)),
                );
            }
            let mp = first_relation(&vecs).expect("dependent");
            if mp.degree() == Some(2 * d) {
                return factor_squarefree_over_q(&mp).len() > 1;
            }
        }
        unreachable!("a primitive element z + s*x exists for some small s")
    }

    /// Image under the field embedding sending the generator to `image_of_gen`.
    pub fn map_to(&self, image_of_gen: &NfElem) -> NfElem {
        let target = image_of_gen.field();
        let mut acc = target.zero();
        for c in self.coords.iter().rev() {
            acc = acc.mul(image_of_gen).add(&target.from_rational(c.clone()));
        }
        acc
    }

    pub fn to_string_var(&self, var: &str) -> String {
        self.to_poly().to_string_var(var)
    }
}

/// Monic polynomial from the first linear dependency among `vecs[0..]`.
pub(crate) fn first_relation(vecs: &[Vec<BigRational>]) -> Option<QPoly> {
    // rows: (reduced vector, combination of original vectors, pivot)
    let mut rows: Vec<(Vec<BigRational>, Vec<BigRational>, usize)> = Vec::new();
    let n = vecs.len();
    for (k, v) in vecs.iter().enumerate() {
        let mut vec = v.clone();
        let mut combo = vec![BigRational::zero(); n];
        combo[k] = BigRational::one();
        for (rv, rc, piv) in &rows {
            if vec[*piv].is_zero() {
                continue;
            }
            let f = &vec[*piv] / &rv[*piv];
            for (a, b) in vec.iter_mut().zip(rv) {
                *a -= &f * b;
            }
            for (a, b) in combo.iter_mut().zip(rc) {
                *a -= &f * b;
            }
        }
        match vec.iter().position(|c| !c.is_zero()) {
            Some(piv) => rows.push((vec, combo, piv)),
            None => {
                combo.truncate(k + 1);
                return Some(QPoly::new(combo).monic());
            }
        }
    }
    None
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var(&self.field.var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(c: &[i64]) -> Arc<NumberField> {
        NumberField::new(QPoly::from_ints(c), "x").unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn minimal_polynomials() {
        let k = field(&[-1, -1, 1]);
        assert_eq!(k.gen().minimal_polynomial(), QPoly::from_ints(&[-1, -1, 1]));
        let g = field(&[1, 0, 1]);
        let e = g.gen().add(&g.one());
        assert_eq!(e.minimal_polynomial(), QPoly::from_ints(&[2, -2, 1]));
        let h = g.from_rational(half());
        assert_eq!(h.minimal_polynomial(), QPoly::new(vec![-half(), BigRational::one()]));
    }

    #[test]
    fn integrality() {
        let k = field(&[-5, 0, 1]);
        let golden = k.gen().add(&k.one()).scale(&half());
        assert!(golden.is_algebraic_integer());
        assert!(!k.from_rational(half()).is_algebraic_integer());
        assert!(field(&[1, 0, 1]).gen().is_algebraic_integer());
    }

    #[test]
    fn rejects_bad_presentations() {
        assert!(matches!(NumberField::new(QPoly::from_ints(&[-1, 0, 1]), "x"), Err(ArithError::Reducible(_))));
        assert!(NumberField::new(QPoly::from_ints(&[1, 2]), "x").is_err());
        assert!(NumberField::new(QPoly::from_ints(&[1, 0, 0, 0, 1]), "x").is_ok());
    }

    #[test]
    fn inverse_and_squares() {
        let k = field(&[-2, 0, 1]);
        let a = k.gen().add(&k.from_int(3));
        assert_eq!(a.mul(&a.inv().unwrap()), k.one());
        assert!(k.from_int(2).is_square());
        assert!(!k.from_int(3).is_square());
        assert!(k.from_int(8).is_square());
        let g = field(&[1, 0, 1]);
        assert!(g.from_int(-1).is_square());
        assert!(!g.from_int(2).is_square());
        assert!(g.from_int(2).mul(&g.gen()).is_square()); // 2i = (1+i)^2
    }
}
