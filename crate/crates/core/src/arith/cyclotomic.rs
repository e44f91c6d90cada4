use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::numfield::{FieldHandle, NfElem, NumberField};
use super::qpoly::QPoly;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Integer coefficients (low to high) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by the cyclotomic polynomials of the proper divisors.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut f = QPoly::from_bigints(&num);
    for d in divisors(n) {
        if d < n {
            let g = QPoly::from_bigints(&cyclotomic_polynomial(d));
            f = f.divrem(&g).expect("nonzero").0;
        }
    }
    f.integer_coeffs().expect("cyclotomic polynomials are integral")
}

/// Chebyshev-type polynomials with D_j(z + 1/z) = z^j + z^{-j}.
fn dickson(h: usize) -> Vec<QPoly> {
    let mut d = vec![QPoly::from_ints(&[2]), QPoly::x()];
    while d.len() <= h {
        let k = d.len();
        let next = QPoly::x().mul(&d[k - 1]).sub(&d[k - 2]);
        d.push(next);
    }
    d
}

/// Minimal polynomial of 2cos(2π/m) over Q.
pub fn real_cyclotomic_polynomial(m: u64) -> QPoly {
    assert!(m >= 1);
    match m {
        1 => return QPoly::from_ints(&[-2, 1]),
        2 => return QPoly::from_ints(&[2, 1]),
        _ => {}
    }
    let phi = cyclotomic_polynomial(m);
    let h = (phi.len() - 1) / 2;
    let d = dickson(h);
    let mut psi = QPoly::constant(phi[h].clone().into());
    for j in 1..=h {
        psi = psi.add(&d[j].scale(&phi[h + j].clone().into()));
    }
    psi
}

/// The field Q(2cos(2π/m)), generated by a root of the real cyclotomic polynomial.
pub fn real_cyclotomic_field(m: u64) -> Arc<NumberField> {
    NumberField::trusted(real_cyclotomic_polynomial(m), "x")
}

/// The cyclotomic field Q(ζ_n).
pub fn cyclotomic_field(n: u64) -> Arc<NumberField> {
    NumberField::trusted(QPoly::from_bigints(&cyclotomic_polynomial(n)), "x")
}

/// ζ_m^k + ζ_m^{-k} in Q(2cos(2π/m)).
pub fn cyclotomic_trace(m: u64, k: i64) -> NfElem {
    let field = real_cyclotomic_field(m);
    let k = k.rem_euclid(m as i64) as usize;
    let d = dickson(k.max(1));
    field.from_poly(&d[k])
}

/// The least m such that a determinant-one matrix with trace `tr` has
/// eigenvalues of exact order m, or `None` when they are not roots of unity.
pub fn trace_root_of_unity_order(tr: &NfElem) -> Option<u64> {
    let mp = tr.minimal_polynomial();
    let deg = mp.degree().unwrap() as u64;
    // φ(m) ≤ 2 deg, and φ(m) ≥ sqrt(m/2), so m ≤ 8 deg^2 suffices.
    let bound = 8 * deg * deg + 2;
    let real_degree = |m: u64| if m <= 2 { 1 } else { euler_phi(m) / 2 };
    (1..=bound).filter(|&m| real_degree(m) == deg).find(|&m| real_cyclotomic_polynomial(m) == mp)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(7), 6);
        let c12: Vec<i64> = cyclotomic_polynomial(12).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(c12, vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn real_cyclotomics() {
        assert_eq!(real_cyclotomic_polynomial(4), QPoly::from_ints(&[0, 1]));
        assert_eq!(real_cyclotomic_polynomial(6), QPoly::from_ints(&[-1, 1]));
        assert_eq!(real_cyclotomic_polynomial(5), QPoly::from_ints(&[-1, 1, 1]));
        assert_eq!(real_cyclotomic_polynomial(3), QPoly::from_ints(&[1, 1]));
        assert_eq!(real_cyclotomic_polynomial(8), QPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn traces() {
        assert!(cyclotomic_trace(4, 1).is_zero());
        assert_eq!(cyclotomic_trace(6, 1).as_rational(), Some(BigRational::from_integer(1.into())));
        let t5 = cyclotomic_trace(5, 1);
        assert_eq!(t5.minimal_polynomial(), QPoly::from_ints(&[-1, 1, 1]));
        assert!(t5.is_algebraic_integer());
        // 2cos(4π/5) is the other root of x^2 + x - 1
        let t52 = cyclotomic_trace(5, 2);
        assert_eq!(t5.add(&t52).as_rational(), Some(BigRational::from_integer((-1).into())));
        assert_eq!(cyclotomic_trace(7, 3).minimal_polynomial(), real_cyclotomic_polynomial(7));
    }

    #[test]
    fn orders() {
        let q = NumberField::rationals();
        assert_eq!(trace_root_of_unity_order(&q.from_int(1)), Some(6));
        assert_eq!(trace_root_of_unity_order(&q.from_int(2)), Some(1));
        assert_eq!(trace_root_of_unity_order(&q.from_int(-2)), Some(2));
        assert_eq!(trace_root_of_unity_order(&q.from_int(0)), Some(4));
        assert_eq!(trace_root_of_unity_order(&q.from_int(3)), None);
        assert_eq!(trace_root_of_unity_order(&cyclotomic_trace(9, 2)), Some(9));
    }
}
