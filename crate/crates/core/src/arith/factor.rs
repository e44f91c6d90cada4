//! Factorization of monic squarefree integer polynomials (Berlekamp-Zassenhaus:
//! Cantor-Zassenhaus modulo a small prime, linear Hensel lifting, factor
//! recombination). Used to certify irreducibility of field presentations and
//! to split étale algebras when testing for squares in number fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fp::{is_prime, Fp};
use super::fppoly::FpPoly;
use super::qpoly::QPoly;

type ZPoly = Vec<BigInt>;

fn trim(mut f: ZPoly) -> ZPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division of monic integer polynomials; `None` if `d` does not divide `f`.
fn zdiv_exact(f: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dl = d.len();
    if dl == 0 || f.len() < dl {
        return None;
    }
    debug_assert!(d[dl - 1].is_one());
    let mut r = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - dl + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + dl - 1].clone();
        if !c.is_zero() {
            for (j, dv) in d.iter().enumerate() {
                r[k + j] -= &c * dv;
            }
        }
        q[k] = c;
    }
    r[..dl - 1].iter().all(|c| c.is_zero()).then(|| trim(q))
}

fn reduce_mod_p(f: &[BigInt], p: u32) -> FpPoly {
    let pb = BigInt::from(p);
    FpPoly::from_raw(p, f.iter().map(|c| c.mod_floor(&pb).to_u32().unwrap()).collect())
}

fn lift_to_z(f: &FpPoly) -> ZPoly {
    f.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn mod_poly(f: &[BigInt], m: &BigInt) -> ZPoly {
    trim(f.iter().map(|c| c.mod_floor(m)).collect())
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.modulus();
    let x = FpPoly::monomial(Fp::raw(p, 1), 1);
    let mut u = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while u.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(p as u128, &u);
        let g = h.sub(&x).gcd(&u);
        if g.degree().unwrap_or(0) > 0 {
            u = u.divrem(&g).unwrap().0;
            h = h.rem(&u).unwrap();
            out.push((g, d));
        }
        d += 1;
    }
    if u.degree().unwrap_or(0) > 0 {
        let deg = u.degree().unwrap();
        out.push((u.monic(), deg));
    }
    out
}

/// Equal-degree splitting for odd p.
fn edf(u: &FpPoly, d: usize, seed: &mut u64, out: &mut Vec<FpPoly>) {
    let n = u.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(u.monic());
        return;
    }
    let p = u.modulus();
    loop {
        let coeffs: Vec<u32> = (0..n)
            .map(|_| {
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((*seed >> 33) % p as u64) as u32
            })
            .collect();
        let a = FpPoly::from_raw(p, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^{(p^d - 1)/2} = (prod_{i<d} a^{p^i})^{(p-1)/2}
        let mut frob = a.rem(u).unwrap();
        let mut w = frob.clone();
        for _ in 1..d {
            frob = frob.powmod(p as u128, u);
            w = w.mul(&frob).rem(u).unwrap();
        }
        let b = w.powmod(((p - 1) / 2) as u128, u).sub(&FpPoly::one(p));
        let g = b.gcd(u);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = u.divrem(&g).unwrap().0;
            edf(&g, d, seed, out);
            edf(&h, d, seed, out);
            return;
        }
    }
}

fn factor_mod_p(f: &FpPoly) -> Vec<FpPoly> {
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut out = Vec::new();
    for (g, d) in ddf(f) {
        edf(&g, d, &mut seed, &mut out);
    }
    out
}

/// One linear Hensel step driver: lift monic f = g*h (mod p) to mod p^k.
fn hensel_pair(f: &[BigInt], g: &FpPoly, h: &FpPoly, p: u32, k: u32) -> (ZPoly, ZPoly) {
    let pb = BigInt::from(p);
    // s*g + t*h = 1 mod p
    let (s, t) = fp_bezout(g, h);
    let mut gz = lift_to_z(g);
    let mut hz = lift_to_z(h);
    let mut pk = pb.clone();
    for _ in 1..k {
        let prod = zmul(&gz, &hz);
        let n = f.len().max(prod.len());
        let e: ZPoly = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b) / &pk
            })
            .collect();
        let ebar = reduce_mod_p(&trim(e), p);
        let sigma = s.mul(&ebar).rem(h).unwrap();
        let tau = t.mul(&ebar).rem(g).unwrap();
        let add = |base: &mut ZPoly, corr: &FpPoly| {
            for (i, &c) in corr.coeffs().iter().enumerate() {
                if i >= base.len() {
                    base.resize(i + 1, BigInt::zero());
                }
                base[i] += &pk * BigInt::from(c);
            }
        };
        add(&mut gz, &tau);
        add(&mut hz, &sigma);
        pk *= &pb;
    }
    (mod_poly(&gz, &pk), mod_poly(&hz, &pk))
}

fn fp_bezout(g: &FpPoly, h: &FpPoly) -> (FpPoly, FpPoly) {
    let p = g.modulus();
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1).unwrap();
        r0 = std::mem::replace(&mut r1, r);
        let s = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.leading().inv().expect("coprime factors");
    (s0.scale(inv), t0.scale(inv))
}

fn hensel_multi(f: &[BigInt], factors: &[FpPoly], p: u32, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        return vec![mod_poly(f, &pk)];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[FpPoly]| fs.iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let (g, h) = hensel_pair(f, &prod(&factors[..mid]), &prod(&factors[mid..]), p, k);
    let mut out = hensel_multi(&g, &factors[..mid], p, k);
    out.extend(hensel_multi(&h, &factors[mid..], p, k));
    out
}

fn symmetric(f: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    trim(
        f.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn choose_prime(f: &[BigInt]) -> Option<(u32, Vec<FpPoly>)> {
    let mut best: Option<(u32, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = 3u32;
    while tried < 8 && p < 2000 {
        if is_prime(p as u64) {
            let fb = reduce_mod_p(f, p);
            if fb.degree() == Some(f.len() - 1) && fb.gcd(&fb.derivative()).degree() == Some(0) {
                tried += 1;
                let fs = factor_mod_p(&fb);
                if best.as_ref().is_none_or(|b| fs.len() < b.1.len()) {
                    best = Some((p, fs));
                }
                if best.as_ref().unwrap().1.len() == 1 {
                    break;
                }
            }
        }
        p += 2;
    }
    best
}

/// Irreducible factors of a monic squarefree integer polynomial (coefficients
/// low to high). Returns the factors as monic integer polynomials.
pub fn factor_squarefree_over_z(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = trim(f.to_vec());
    assert!(f.last().is_some_and(|c| c.is_one()), "factorization expects a monic polynomial");
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let Some((p, modular)) = choose_prime(&f) else {
        // no good prime below the search bound; cannot happen for squarefree input
        // of moderate degree
        return vec![f];
    };
    if modular.len() == 1 {
        return vec![f];
    }
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * (BigInt::one() << n) * norm1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = hensel_multi(&f, &modular, p, k);
    let mut remaining = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = None;
        for subset in combinations(lifted.len(), s) {
            let prod = subset.iter().fold(vec![BigInt::one()], |acc, &i| mod_poly(&zmul(&acc, &lifted[i]), &pk));
            let cand = symmetric(&prod, &pk);
            if let Some(quot) = zdiv_exact(&remaining, &cand) {
                found = Some((subset, cand, quot));
                break;
            }
        }
        match found {
            Some((subset, cand, quot)) => {
                out.push(cand);
                remaining = quot;
                let mut idx = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&idx);
                    idx += 1;
                    keep
                });
            }
            None => s += 1,
        }
    }
    out.push(remaining);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Converts a nonzero rational polynomial to a monic integer polynomial with the
/// same factorization pattern (`a^{n-1} f(y/a)` after clearing denominators).
pub(crate) fn monic_integer_model(f: &QPoly) -> Vec<BigInt> {
    let prim = f.primitive_integer();
    let n = prim.len() - 1;
    let a = prim[n].clone();
    let mut out = Vec::with_capacity(n + 1);
    let mut pow = BigInt::one();
    // coefficient i gets a^{n-1-i}; build powers from the top
    let mut scaled = vec![BigInt::zero(); n + 1];
    for i in (0..n).rev() {
        scaled[i] = &prim[i] * &pow;
        pow *= &a;
    }
    scaled[n] = BigInt::one();
    out.extend(scaled);
    out
}

/// Exact irreducibility test over Q for a nonconstant rational polynomial.
pub fn is_irreducible_over_q(f: &QPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f.gcd(&f.derivative()).degree() != Some(0) {
        return false;
    }
    let model = monic_integer_model(f);
    factor_squarefree_over_z(&model).len() == 1
}

/// Rational factorization of a squarefree rational polynomial into monic
/// irreducible factors.
pub(crate) fn factor_squarefree_over_q(f: &QPoly) -> Vec<QPoly> {
    let n = f.degree().expect("nonzero polynomial");
    if n <= 1 {
        return vec![f.monic()];
    }
    let prim = f.primitive_integer();
    let a = BigRational::from_integer(prim[n].clone());
    let model = monic_integer_model(f);
    // model(y) = a^{n-1} f(y / a) up to content; factors map back via y = a x
    factor_squarefree_over_z(&model)
        .into_iter()
        .map(|g| {
            let ax = QPoly::new(vec![BigRational::zero(), a.clone()]);
            QPoly::from_bigints(&g).compose(&ax).monic()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn factors_products() {
        // (x^2 + 1)(x^2 - 2)(x + 3)
        let f = zmul(&zmul(&zp(&[1, 0, 1]), &zp(&[-2, 0, 1])), &zp(&[3, 1]));
        let mut fs = factor_squarefree_over_z(&f);
        fs.sort_by_key(|g| g.len());
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], zp(&[3, 1]));
        let prod = fs.iter().fold(zp(&[1]), |a, b| zmul(&a, b));
        assert_eq!(prod, f);
    }

    #[test]
    fn cyclotomic_eight_is_irreducible() {
        // x^4 + 1 splits modulo every prime
        assert!(is_irreducible_over_q(&QPoly::from_ints(&[1, 0, 0, 0, 1])));
        assert!(!is_irreducible_over_q(&QPoly::from_ints(&[4, 0, 0, 0, 1]))); // (x^2+2x+2)(x^2-2x+2)
        assert!(is_irreducible_over_q(&QPoly::from_ints(&[-1, -1, 1])));
        assert!(!is_irreducible_over_q(&QPoly::from_ints(&[1, 2, 1])));
    }

    #[test]
    fn non_monic_rational_input() {
        // 2x^2 - 1/2 = 2 (x - 1/2)(x + 1/2)
        let f = QPoly::new(vec![
            BigRational::new((-1).into(), 2.into()),
            BigRational::zero(),
            BigRational::from_integer(2.into()),
        ]);
        assert!(!is_irreducible_over_q(&f));
        let fs = factor_squarefree_over_q(&f);
        assert_eq!(fs.len(), 2);
    }
}
