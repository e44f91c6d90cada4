//! Dimension counts for rigidity and explicit rank-two hypergeometric tuples.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;

use crate::arith::{cyclotomic_field, FieldHandle, NfElem, NumberField, Ring};
use crate::error::{Error, Result};
use crate::matrix::{Matrix2, RepPresentation};
use crate::sl2kit::{conjugacy_class_kind, zariski_density_check, ConjClassKind};

/// 0 for the central classes, 2 for the others.
pub fn class_dimension<R>(kind: &ConjClassKind<R>) -> u32 {
    match kind {
        ConjClassKind::Identity | ConjClassKind::MinusIdentity => 0,
        _ => 2,
    }
}

/// Σ dim(C_i) - 2 dim SL(2) over a genus-zero base.
pub fn virtual_dimension<R>(kinds: &[ConjClassKind<R>]) -> i64 {
    kinds.iter().map(|k| class_dimension(k) as i64).sum::<i64>() - 6
}

/// A requested local monodromy class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    UnipotentPlus,
    UnipotentMinus,
    /// Unipotent with the sign left to the construction.
    Request,
    /// Semisimple with eigenvalues exp(±2πik/m).
    Eigenvalue { m: u64, k: u64 },
}

impl ClassSpec {
    fn is_unipotent(&self) -> bool {
        !matches!(self, ClassSpec::Eigenvalue { .. })
    }
}

impl FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "u" | "u+" => Ok(ClassSpec::UnipotentPlus),
            "u-" => Ok(ClassSpec::UnipotentMinus),
            "request" => Ok(ClassSpec::Request),
            other => {
                let bad = || Error::Invalid(format!("unknown class '{other}' (expected u, u+, u-, request or e:m/k)"));
                let body = other.strip_prefix("e:").ok_or_else(bad)?;
                let (m, k) = body.split_once('/').ok_or_else(bad)?;
                let m: u64 = m.parse().map_err(|_| bad())?;
                let k: u64 = k.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                let order = m / m.gcd(&(k % m));
                if order <= 2 {
                    return Err(Error::Invalid(format!("e:{m}/{k} has eigenvalue ±1; use a unipotent class")));
                }
                Ok(ClassSpec::Eigenvalue { m, k: k % m })
            }
        }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::UnipotentPlus => f.write_str("u+"),
            ClassSpec::UnipotentMinus => f.write_str("u-"),
            ClassSpec::Request => f.write_str("request"),
            ClassSpec::Eigenvalue { m, k } => write!(f, "e:{m}/{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypergeometricTuple {
    pub field: Arc<NumberField>,
    pub matrices: [Matrix2<NfElem>; 3],
    pub classes: [ConjClassKind<NfElem>; 3],
    /// Sign choices and twists applied while building the tuple.
    pub twists: Vec<String>,
}

impl HypergeometricTuple {
    pub fn representation(&self) -> RepPresentation<NfElem> {
        let gens = ['a', 'b', 'c'].into_iter().zip(self.matrices.iter().cloned()).collect();
        RepPresentation::new(gens).expect("determinant-one generators")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HypergeometricOutcome {
    Tuple(Box<HypergeometricTuple>),
    Obstructed(String),
}

fn sign_of(spec: ClassSpec) -> Option<i64> {
    match spec {
        ClassSpec::UnipotentPlus => Some(1),
        ClassSpec::UnipotentMinus => Some(-1),
        _ => None,
    }
}

fn upper(x: &NfElem, diag: &NfElem) -> Matrix2<NfElem> {
    Matrix2::new(diag.clone(), x.clone(), diag.zero_like(), diag.inv().expect("root of unity"))
}

fn lower(x: &NfElem, diag: &NfElem) -> Matrix2<NfElem> {
    Matrix2::new(diag.clone(), diag.zero_like(), x.clone(), diag.inv().expect("root of unity"))
}

fn rotate<T: Clone>(v: &[T; 3], r: usize) -> [T; 3] {
    [v[r % 3].clone(), v[(r + 1) % 3].clone(), v[(r + 2) % 3].clone()]
}

/// Commuting-subgroup test for an upper/lower triangular pair: the group is
/// reducible exactly when the commutator has trace 2.
fn reducible(m1: &Matrix2<NfElem>, m2: &Matrix2<NfElem>) -> bool {
    let c = m1.mul(m2).mul(&m1.inverse()).mul(&m2.inverse());
    c.trace() == m1.a.from_int_like(2)
}

/// Explicit rank-two rigid tuples M1 M2 M3 = 1 with the requested classes.
pub fn hypergeometric_build(specs: [ClassSpec; 3]) -> Result<HypergeometricOutcome> {
    let unipotent = specs.iter().filter(|s| s.is_unipotent()).count();
    let mut twists = Vec::new();
    // canonical order puts the unipotent classes first (two or three of them)
    // or last (one of them); r is the rotation mapping canonical slots to input slots
    let (field, canonical, r): (Arc<NumberField>, [Matrix2<NfElem>; 3], usize) = match unipotent {
        3 => {
            let mut signs: Vec<Option<i64>> = specs.iter().map(|&s| sign_of(s)).collect();
            let fixed: i64 = signs.iter().flatten().product();
            let free: Vec<usize> = (0..3).filter(|&i| signs[i].is_none()).collect();
            if free.is_empty() {
                if fixed != -1 {
                    return Ok(HypergeometricOutcome::Obstructed(
                        "three unipotent classes need an odd number of eigenvalue -1 classes".into(),
                    ));
                }
            } else {
                for &i in &free {
                    signs[i] = Some(1);
                }
                if fixed != -1 {
                    let last = *free.last().unwrap();
                    signs[last] = Some(-1);
                }
                for &i in &free {
                    twists.push(format!("slot {} request resolved to {}", i + 1, if signs[i] == Some(1) { "u+" } else { "u-" }));
                }
            }
            let (s1, s2) = (signs[0].unwrap(), signs[1].unwrap());
            let k = NumberField::rationals();
            let m1 = Matrix2::new(k.one(), k.one(), k.zero(), k.one()).scale(&k.from_int(s1));
            let m2 = Matrix2::new(k.one(), k.zero(), k.from_int(-4), k.one()).scale(&k.from_int(s2));
            let m3 = m1.mul(&m2).inverse();
            (k, [m1, m2, m3], 0)
        }
        2 => {
            let j = specs.iter().position(|s| !s.is_unipotent()).unwrap();
            let r = (j + 1) % 3;
            let canon = rotate(&specs, r);
            let ClassSpec::Eigenvalue { m, k } = canon[2] else { unreachable!() };
            let mut s = [1i64; 2];
            for i in 0..2 {
                match sign_of(canon[i]) {
                    Some(v) => s[i] = v,
                    None => twists.push(format!("slot {} request resolved to u+", (i + r) % 3 + 1)),
                }
            }
            let tau = crate::arith::cyclotomic_trace(m, k as i64);
            let field = tau.field().clone();
            // the product of the two unipotents has trace s1 s2 (2 + b)
            let b = tau.mul(&field.from_int(s[0] * s[1])).sub(&field.from_int(2));
            let m1 = Matrix2::new(field.one(), field.one(), field.zero(), field.one()).scale(&field.from_int(s[0]));
            let m2 = Matrix2::new(field.one(), field.zero(), b, field.one()).scale(&field.from_int(s[1]));
            let m3 = m1.mul(&m2).inverse();
            (field, [m1, m2, m3], r)
        }
        _ => {
            // semisimple classes first, the unipotent one (if any) last
            let r = match specs.iter().position(|s| s.is_unipotent()) {
                Some(j) => (j + 1) % 3,
                None => 0,
            };
            let canon = rotate(&specs, r);
            let eig: Vec<(u64, u64)> = canon
                .iter()
                .filter_map(|s| match s {
                    ClassSpec::Eigenvalue { m, k } => Some((*m, *k)),
                    _ => None,
                })
                .collect();
            let n = eig.iter().fold(1u64, |acc, &(m, _)| acc.lcm(&m));
            let field = cyclotomic_field(n);
            let zeta = field.gen();
            let root = |(m, k): (u64, u64)| zeta.pow((k * (n / m)) as i64).expect("nonzero");
            let alpha = root(eig[0]);
            let beta = root(eig[1]);
            let ab = alpha.mul(&beta);
            let ab_trace = ab.add(&ab.inv().expect("nonzero"));
            let attempt = |target: NfElem| {
                let x = target.sub(&ab_trace);
                let m1 = upper(&field.one(), &alpha);
                let m2 = lower(&x, &beta);
                let m3 = m1.mul(&m2).inverse();
                (m1, m2, m3)
            };
            let (m1, m2, m3) = if eig.len() == 3 {
                let gamma = root(eig[2]);
                // M3 = (M1 M2)^{-1} has the same trace as M1 M2
                attempt(gamma.add(&gamma.inv().expect("nonzero")))
            } else {
                let choice = match sign_of(canon[2]) {
                    Some(s) => s,
                    None => {
                        let plus = attempt(field.from_int(2));
                        let s = if reducible(&plus.0, &plus.1) { -1 } else { 1 };
                        twists.push(format!("slot {} request resolved to {}", (2 + r) % 3 + 1, if s == 1 { "u+" } else { "u-" }));
                        s
                    }
                };
                attempt(field.from_int(2 * choice))
            };
            if reducible(&m1, &m2) {
                return Ok(HypergeometricOutcome::Obstructed(
                    "the eigenvalue data admit only a reducible representation (alpha*beta = 1 up to the target sign)".into(),
                ));
            }
            (field, [m1, m2, m3], r)
        }
    };
    // undo the rotation: input slot i holds canonical slot (i + 3 - r) % 3
    let matrices = rotate(&canonical, (3 - r) % 3);
    let classes = [
        conjugacy_class_kind(&matrices[0]),
        conjugacy_class_kind(&matrices[1]),
        conjugacy_class_kind(&matrices[2]),
    ];
    Ok(HypergeometricOutcome::Tuple(Box::new(HypergeometricTuple { field, matrices, classes, twists })))
}

/// Product is the identity, classes match, a density witness exists at word
/// length ≤ 4, and the class data are rigid.
pub fn verify_rigid_tuple(ms: &[Matrix2<NfElem>; 3], data: &[ConjClassKind<NfElem>]) -> bool {
    if data.len() != 3 {
        return false;
    }
    if !ms[0].mul(&ms[1]).mul(&ms[2]).is_scalar(1) {
        return false;
    }
    if ms.iter().zip(data).any(|(m, d)| &conjugacy_class_kind(m) != d) {
        return false;
    }
    let Ok(rep) = RepPresentation::new(vec![('a', ms[0].clone()), ('b', ms[1].clone())]) else {
        return false;
    };
    zariski_density_check(&rep, 4).is_dense() && virtual_dimension(data) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrality::integrality_scan;

    fn build(s: &str) -> HypergeometricOutcome {
        let v: Vec<ClassSpec> = s.split(',').map(|x| x.parse().unwrap()).collect();
        hypergeometric_build([v[0], v[1], v[2]]).unwrap()
    }

    fn tuple(s: &str) -> HypergeometricTuple {
        match build(s) {
            HypergeometricOutcome::Tuple(t) => *t,
            HypergeometricOutcome::Obstructed(r) => panic!("{s}: {r}"),
        }
    }

    #[test]
    fn dimensions() {
        let k: ConjClassKind<i32> = ConjClassKind::Identity;
        assert_eq!(class_dimension(&k), 0);
        assert_eq!(class_dimension(&ConjClassKind::<i32>::UnipotentPlus), 2);
        let three = vec![ConjClassKind::Semisimple(1); 3];
        assert_eq!(virtual_dimension(&three), 0);
        assert_eq!(virtual_dimension(&three[..2]), -2);
        assert_eq!(virtual_dimension(&vec![ConjClassKind::<i32>::UnipotentMinus; 4]), 2);
    }

    #[test]
    fn three_unipotent_tuple() {
        let t = tuple("u,u,request");
        let k = &t.field;
        let product = t.matrices[0].mul(&t.matrices[1]);
        let expect = Matrix2::new(k.from_int(-3), k.one(), k.from_int(-4), k.one());
        assert_eq!(product, expect);
        assert_eq!(t.classes[2], ConjClassKind::UnipotentMinus);
        assert!(verify_rigid_tuple(&t.matrices, &t.classes));
        assert!(integrality_scan(&t.representation(), 6).is_integral());
        let mut bad = t.matrices.clone();
        bad[2] = bad[2].neg();
        assert!(!verify_rigid_tuple(&bad, &t.classes));
        assert!(matches!(build("u+,u+,u+"), HypergeometricOutcome::Obstructed(_)));
        assert!(matches!(build("u-,u-,u-"), HypergeometricOutcome::Tuple(_)));
    }

    #[test]
    fn two_unipotent_tuple() {
        let t = tuple("u,u,e:5/1");
        let tau = crate::arith::cyclotomic_trace(5, 1);
        assert_eq!(t.matrices[2].trace(), tau);
        assert_eq!(t.matrices[1].c, tau.sub(&t.field.from_int(2)));
        assert!(verify_rigid_tuple(&t.matrices, &t.classes));
        // the semisimple class may sit in any slot
        let t = tuple("e:5/2,u-,u");
        assert_eq!(t.classes[1], ConjClassKind::UnipotentMinus);
        assert!(verify_rigid_tuple(&t.matrices, &t.classes));
    }

    #[test]
    fn one_unipotent_tuple() {
        let t = tuple("e:5/1,e:3/1,request");
        assert_eq!(t.classes[2], ConjClassKind::UnipotentPlus);
        assert!(verify_rigid_tuple(&t.matrices, &t.classes));
        assert!(integrality_scan(&t.representation(), 4).is_integral());
        // alpha * beta = 1 leaves only a reducible solution with a u+ class
        assert!(matches!(build("e:5/1,e:5/4,u+"), HypergeometricOutcome::Obstructed(_)));
        let twisted = tuple("e:5/1,e:5/4,request");
        assert_eq!(twisted.classes[2], ConjClassKind::UnipotentMinus);
        let t = tuple("u-,e:4/1,e:6/1");
        assert!(verify_rigid_tuple(&t.matrices, &t.classes));
    }

    #[test]
    fn three_semisimple_tuple() {
        let t = tuple("e:6/1,e:6/1,e:5/1");
        assert!(verify_rigid_tuple(&t.matrices, &t.classes));
        // projectively a (3, 2, 5) triangle group, which is finite
        let t = tuple("e:3/1,e:4/1,e:5/1");
        assert!(!verify_rigid_tuple(&t.matrices, &t.classes));
        assert!(matches!(build("e:7/1,e:7/2,e:7/3"), HypergeometricOutcome::Obstructed(_)));
        assert!(integrality_scan(&t.representation(), 3).is_integral());
    }

    #[test]
    fn diagonal_tuple_not_rigid() {
        let k = NumberField::rationals();
        let d = Matrix2::new(k.from_int(2), k.zero(), k.zero(), k.from_rational(num_rational::BigRational::new(1.into(), 2.into())));
        let ms = [d.clone(), d.clone(), d.mul(&d).inverse()];
        let classes = ms.clone().map(|m| conjugacy_class_kind(&m));
        assert!(!verify_rigid_tuple(&ms, &classes));
    }
}
