use std::fmt;
use std::sync::Arc;

use super::fp::{check_prime, Fp};
use super::fppoly::{format_terms, FpPoly};
use super::laurent::LaurentSeries;
use super::{ArithError, Result};

/// A place of F_p(y): a rational point y = c or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Fp),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(c) => write!(f, "{}", c.value()),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Element of F_p(y) in lowest terms with monic denominator.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    var: Arc<str>,
    num: FpPoly,
    den: FpPoly,
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den && self.var == o.var
    }
}

impl Eq for RationalFunction {}

impl RationalFunction {
    pub fn new(num: FpPoly, den: FpPoly, var: &str) -> Result<Self> {
        if num.modulus() != den.modulus() {
            return Err(ArithError::ModulusMismatch(num.modulus(), den.modulus()));
        }
        check_prime(num.modulus() as u64)?;
        if den.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        Ok(Self::reduced(num, den, Arc::from(var)))
    }

    fn reduced(num: FpPoly, den: FpPoly, var: Arc<str>) -> Self {
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.divrem(&g).unwrap().0, den.divrem(&g).unwrap().0);
        let lead = den.leading();
        let li = lead.inv().expect("nonzero leading coefficient");
        num = num.scale(li);
        den = den.scale(li);
        RationalFunction { var, num, den }
    }

    pub fn from_poly(num: FpPoly, var: &str) -> Result<Self> {
        let p = num.modulus();
        Self::new(num, FpPoly::one(p), var)
    }

    pub fn constant_like(&self, n: i64) -> Self {
        let p = self.modulus();
        RationalFunction { var: self.var.clone(), num: FpPoly::new(p, &[n]), den: FpPoly::one(p) }
    }

    pub fn modulus(&self) -> u32 {
        self.den.modulus()
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn numerator(&self) -> &FpPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    fn check_same(&self, o: &Self) {
        assert_eq!(self.modulus(), o.modulus(), "rational functions over different fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same(o);
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::reduced(num, self.den.mul(&o.den), self.var.clone())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { var: self.var.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_same(o);
        Self::reduced(self.num.mul(&o.num), self.den.mul(&o.den), self.var.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone(), self.var.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// In lowest terms with monic denominator, a square has square numerator and denominator.
    pub fn is_square(&self) -> bool {
        self.num.sqrt().is_some() && self.den.sqrt().is_some()
    }

    /// Order of vanishing at a place (negative for poles); `None` for zero.
    pub fn order_at(&self, place: Place) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        match place {
            Place::Finite(c) => {
                let n = self.num.shift(c).low_degree().unwrap() as i64;
                let d = self.den.shift(c).low_degree().unwrap() as i64;
                Some(n - d)
            }
            Place::Infinity => Some(self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64),
        }
    }

    /// Laurent expansion in a uniformizer t at the place: y = c + t or y = 1/t.
    /// The result is known modulo t^prec.
    pub fn expand_at_place(&self, place: Place, prec: i64) -> Result<LaurentSeries> {
        let p = self.modulus();
        let (num, den, shift) = match place {
            Place::Finite(c) => {
                if c.modulus() != p {
                    return Err(ArithError::ModulusMismatch(c.modulus(), p));
                }
                (self.num.shift(c), self.den.shift(c), 0i64)
            }
            Place::Infinity => {
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap();
                (self.num.reverse(dn), self.den.reverse(dd), dd as i64 - dn as i64)
            }
        };
        let as_series = |f: &FpPoly| LaurentSeries::from_dense(p, 0, f.coeffs().to_vec(), None);
        let n = as_series(&num).shift(shift);
        let d = as_series(&den);
        Ok(n.div_to(&d, prec)?.with_prec(prec))
    }

    pub fn to_string_var(&self, var: &str) -> String {
        let show = |f: &FpPoly| {
            let terms: Vec<(i64, i64)> =
                f.coeffs().iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i as i64, v as i64)).collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                format_terms(&terms, var)
            }
        };
        if self.den.degree() == Some(0) {
            show(&self.num)
        } else {
            format!("({})/({})", show(&self.num), show(&self.den))
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var(&self.var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(p: u32, num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(FpPoly::new(p, num), FpPoly::new(p, den), "y").unwrap()
    }

    #[test]
    fn reduced_form() {
        let a = rf(5, &[-1, 0, 1], &[2, 2]); // (y^2 - 1)/(2y + 2) = (y - 1)/2
        assert_eq!(a, rf(5, &[2, 3], &[1]));
        assert!(rf(5, &[3], &[2]).is_constant());
    }

    #[test]
    fn expansions() {
        // y + 1/y at infinity
        let r = rf(5, &[1, 0, 1], &[0, 1]);
        let e = r.expand_at_place(Place::Infinity, 10).unwrap();
        assert_eq!(e.valuation().unwrap(), Some(-1));
        assert!(e.congruent(&LaurentSeries::from_terms(5, &[(-1, 1), (1, 1)], None).unwrap()));
        // 1/(y - 1) at y = 1
        let r = rf(5, &[1], &[-1, 1]);
        let e = r.expand_at_place(Place::Finite(Fp::new(5, 1).unwrap()), 8).unwrap();
        assert!(e.congruent(&LaurentSeries::monomial(5, 1, -1)));
        // y^2 at y = 0
        let r = rf(5, &[0, 0, 1], &[1]);
        let e = r.expand_at_place(Place::Finite(Fp::new(5, 0).unwrap()), 8).unwrap();
        assert_eq!(e.valuation().unwrap(), Some(2));
        assert_eq!(r.order_at(Place::Infinity), Some(-2));
    }

    #[test]
    fn geometric_series_at_zero() {
        // 1/(1 - y) = 1 + t + t^2 + ...
        let r = rf(3, &[1], &[1, -1]);
        let e = r.expand_at_place(Place::Finite(Fp::new(3, 0).unwrap()), 6).unwrap();
        for k in 0..6 {
            assert_eq!(e.coeff(k).unwrap().value(), 1);
        }
        assert!(e.coeff(6).is_err());
    }

    #[test]
    fn squares() {
        assert!(rf(7, &[1, 2, 1], &[0, 0, 1]).is_square());
        assert!(!rf(7, &[0, 1], &[1]).is_square());
        assert!(!rf(7, &[3], &[1]).is_square());
    }
}
