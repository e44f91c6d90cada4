//! SL(2) diagnostics: conjugacy classes, the trace criterion for Zariski
//! density, translation lengths and boundedness on the tree, and completion
//! of a representation over F_p(y) at a place.

use std::fmt;

use crate::arith::{trace_root_of_unity_order, LaurentSeries, NfElem, Place, RationalFunction, Ring, ZeroStatus};
use crate::bttree::{act, distance, midpoint, LMatrix, Vertex};
use crate::error::{Error, Result};
use crate::matrix::{Matrix2, RepPresentation, Word};

#[derive(Clone, Debug, PartialEq)]
pub enum ConjClassKind<R> {
    Identity,
    MinusIdentity,
    UnipotentPlus,
    UnipotentMinus,
    /// Diagonalizable with eigenvalues a, 1/a (a != ±1); carries the trace a + 1/a.
    Semisimple(R),
}

impl<R: fmt::Display> fmt::Display for ConjClassKind<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjClassKind::Identity => f.write_str("identity"),
            ConjClassKind::MinusIdentity => f.write_str("minus-identity"),
            ConjClassKind::UnipotentPlus => f.write_str("unipotent+"),
            ConjClassKind::UnipotentMinus => f.write_str("unipotent-"),
            ConjClassKind::Semisimple(tr) => write!(f, "semisimple(trace {tr})"),
        }
    }
}

pub fn conjugacy_class_kind<R: Ring>(m: &Matrix2<R>) -> ConjClassKind<R> {
    if m.is_scalar(1) {
        return ConjClassKind::Identity;
    }
    if m.is_scalar(-1) {
        return ConjClassKind::MinusIdentity;
    }
    let tr = m.trace();
    if tr.equals_to_precision(&tr.from_int_like(2)) {
        ConjClassKind::UnipotentPlus
    } else if tr.equals_to_precision(&tr.from_int_like(-2)) {
        ConjClassKind::UnipotentMinus
    } else {
        ConjClassKind::Semisimple(tr)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiUnipotence {
    No,
    /// Eigenvalues are primitive `order`-th roots of unity; `unipotent` marks a
    /// nontrivial Jordan block (trace ±2 but not ±1).
    Yes { order: u64, unipotent: bool },
}

pub fn is_quasi_unipotent(m: &Matrix2<NfElem>) -> QuasiUnipotence {
    match trace_root_of_unity_order(&m.trace()) {
        None => QuasiUnipotence::No,
        Some(order) => {
            let unipotent = order <= 2 && !m.is_scalar(1) && !m.is_scalar(-1);
            QuasiUnipotence::Yes { order, unipotent }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralizerKind {
    Unipotent,
    SplitTorus,
    NonSplitTorus,
}

impl fmt::Display for CentralizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CentralizerKind::Unipotent => "unipotent",
            CentralizerKind::SplitTorus => "split-torus",
            CentralizerKind::NonSplitTorus => "non-split-torus",
        })
    }
}

/// Shape of the centralizer of a nontrivial quasi-unipotent matrix.
pub fn centralizer_kind<R: Ring>(m: &Matrix2<R>) -> Result<CentralizerKind> {
    if m.is_scalar(1) || m.is_scalar(-1) {
        return Err(Error::NotQuasiUnipotent);
    }
    let tr = m.trace();
    match tr.trace_has_infinite_order() {
        Some(false) => {}
        Some(true) => return Err(Error::NotQuasiUnipotent),
        None => {
            return Err(Error::Arith(crate::arith::ArithError::PrecisionExhausted(
                "cannot decide whether the trace is a root-of-unity trace".into(),
            )))
        }
    }
    let two = tr.from_int_like(2);
    if tr.equals_to_precision(&two) || tr.equals_to_precision(&two.negate()) {
        return Ok(CentralizerKind::Unipotent);
    }
    let disc = tr.times(&tr).minus(&tr.from_int_like(4));
    Ok(if disc.is_square_elem()? { CentralizerKind::SplitTorus } else { CentralizerKind::NonSplitTorus })
}

#[derive(Clone, Debug, PartialEq)]
pub enum DensityVerdict<R> {
    /// Certified by Tr((α²β²)²) ≠ Tr(α⁴β⁴) and a word γ with eigenvalues of infinite order.
    Dense { alpha: Word, beta: Word, difference: R, gamma: Word, gamma_trace: R },
    Inconclusive { max_word_len: usize },
}

impl<R> DensityVerdict<R> {
    pub fn is_dense(&self) -> bool {
        matches!(self, DensityVerdict::Dense { .. })
    }
}

fn trace_of_product<R: Ring>(x: &Matrix2<R>, y: &Matrix2<R>) -> R {
    x.a.times(&y.a).plus(&x.b.times(&y.c)).plus(&x.c.times(&y.b)).plus(&x.d.times(&y.d))
}

/// Searches reduced words up to `max_word_len` for a pair with
/// Tr((α²β²)²) ≠ Tr(α⁴β⁴) and a word whose eigenvalues have infinite order.
/// Pairs are ordered by total length, then lexicographically.
pub fn zariski_density_check<R: Ring>(rep: &RepPresentation<R>, max_word_len: usize) -> DensityVerdict<R> {
    let words = rep.reduced_words(max_word_len);
    let inconclusive = DensityVerdict::Inconclusive { max_word_len };
    let Some((gamma, gamma_trace)) = words.iter().find_map(|(w, m)| {
        let tr = m.trace();
        (tr.trace_has_infinite_order() == Some(true)).then(|| (w.clone(), tr))
    }) else {
        return inconclusive;
    };
    let squares: Vec<(Matrix2<R>, Matrix2<R>)> = words
        .iter()
        .map(|(_, m)| {
            let sq = m.mul(m);
            let fourth = sq.mul(&sq);
            (sq, fourth)
        })
        .collect();
    let two = gamma_trace.from_int_like(2);
    for total in 2..=2 * max_word_len {
        for (i, (alpha, _)) in words.iter().enumerate() {
            if alpha.len() >= total {
                break;
            }
            let blen = total - alpha.len();
            if blen > max_word_len {
                continue;
            }
            for (j, (beta, _)) in words.iter().enumerate() {
                if beta.len() != blen {
                    continue;
                }
                let t = trace_of_product(&squares[i].0, &squares[j].0);
                let lhs = t.times(&t).minus(&two);
                let rhs = trace_of_product(&squares[i].1, &squares[j].1);
                let difference = lhs.minus(&rhs);
                if difference.zero_status() == ZeroStatus::NonZero {
                    return DensityVerdict::Dense {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        difference,
                        gamma,
                        gamma_trace,
                    };
                }
            }
        }
    }
    inconclusive
}

/// ℓ(g) = max(0, -2 val(tr g)).
pub fn translation_length(g: &LMatrix) -> Result<u64> {
    let tr = g.trace();
    match tr.valuation_lower_bound() {
        None => Ok(0),
        Some(lb) if lb >= 0 => Ok(0),
        Some(_) => {
            let v = tr.valuation()?.expect("nonzero");
            Ok((-2 * v).max(0) as u64)
        }
    }
}

/// A vertex fixed by an elliptic element, found by one midpoint step from the base.
pub fn fixed_vertex(g: &LMatrix) -> Result<Vertex> {
    let ell = translation_length(g)?;
    if ell > 0 {
        return Err(Error::NotElliptic(ell));
    }
    fixed_vertex_from(g, &Vertex::base(g.a.modulus()))
}

/// Projection of `v` onto the fixed tree of an elliptic `g`.
pub fn fixed_vertex_from(g: &LMatrix, v: &Vertex) -> Result<Vertex> {
    let mut v = v.clone();
    let budget = distance(&v, &act(g, &v)?) + 1;
    for _ in 0..budget {
        let w = act(g, &v)?;
        if w == v {
            return Ok(v);
        }
        v = midpoint(&v, &w).ok_or(Error::NotElliptic(0))?;
    }
    Err(Error::NotElliptic(0))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Boundedness {
    Bounded { fixed: Vertex },
    /// Indices of a product of one or two generators acting hyperbolically.
    Unbounded { witness: Vec<usize>, translation_length: u64 },
}

/// A finitely generated group acting without inversions is bounded iff each
/// generator and each product g_i g_j (i ≤ j) is elliptic. In that case the
/// fixed trees pairwise meet and successive projections reach a common point.
pub fn is_bounded(gens: &[LMatrix]) -> Result<Boundedness> {
    assert!(!gens.is_empty(), "at least one generator");
    for (i, g) in gens.iter().enumerate() {
        let ell = translation_length(g)?;
        if ell > 0 {
            return Ok(Boundedness::Unbounded { witness: vec![i], translation_length: ell });
        }
    }
    for i in 0..gens.len() {
        for j in i..gens.len() {
            let ell = translation_length(&gens[i].mul(&gens[j]))?;
            if ell > 0 {
                return Ok(Boundedness::Unbounded { witness: vec![i, j], translation_length: ell });
            }
        }
    }
    let mut v = Vertex::base(gens[0].a.modulus());
    for g in gens {
        v = fixed_vertex_from(g, &v)?;
    }
    for g in gens {
        if act(g, &v)? != v {
            return Err(Error::Invalid("projection did not reach a common fixed vertex".into()));
        }
    }
    Ok(Boundedness::Bounded { fixed: v })
}

/// Outcome of completing a representation at a place and testing it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessReport {
    pub place: Place,
    pub precision: i64,
    pub boundedness: Boundedness,
    pub witness: Option<Word>,
    pub density: DensityVerdict<LaurentSeries>,
    /// Per puncture word: its trace has no pole at the place.
    pub puncture_checks: Vec<(Word, bool)>,
    pub completed: RepPresentation<LaurentSeries>,
}

impl BoundednessReport {
    pub fn lines(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("place".to_string(), self.place.to_string()),
            ("precision".to_string(), self.precision.to_string()),
        ];
        match &self.boundedness {
            Boundedness::Bounded { fixed } => {
                out.push(("bounded".into(), "yes".into()));
                out.push(("witness".into(), format!("fixed vertex {fixed}")));
            }
            Boundedness::Unbounded { translation_length, .. } => {
                out.push(("bounded".into(), "no".into()));
                let w = self.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
                out.push(("witness".into(), format!("{w} translation_length {translation_length}")));
            }
        }
        out.extend(density_lines(&self.density));
        let checks: Vec<String> = self
            .puncture_checks
            .iter()
            .map(|(w, ok)| format!("{w}:{}", if *ok { "integral-trace" } else { "pole" }))
            .collect();
        out.push(("puncture_checks".into(), if checks.is_empty() { "none".into() } else { checks.join(" ") }));
        out
    }
}

/// Verdict followed by its witness words or the exhausted word length.
pub fn density_lines<R: fmt::Display>(d: &DensityVerdict<R>) -> Vec<(String, String)> {
    match d {
        DensityVerdict::Dense { alpha, beta, difference, gamma, gamma_trace } => vec![
            ("density".into(), "dense".into()),
            ("density_alpha".into(), alpha.to_string()),
            ("density_beta".into(), beta.to_string()),
            ("density_trace_difference".into(), difference.to_string()),
            ("density_infinite_order_word".into(), gamma.to_string()),
            ("density_infinite_order_trace".into(), gamma_trace.to_string()),
        ],
        DensityVerdict::Inconclusive { max_word_len } => vec![
            ("density".into(), "inconclusive".into()),
            ("density_max_word_len".into(), max_word_len.to_string()),
        ],
    }
}

pub fn witness_word(names: &[char], idx: &[usize]) -> Word {
    Word::from_letters(idx.iter().map(|&i| names[i]).collect())
}

/// Boundedness of the generated group, with a hyperbolic witness named by letters.
pub fn rep_boundedness(rep: &RepPresentation<LaurentSeries>) -> Result<(Boundedness, Option<Word>)> {
    let b = is_bounded(&rep.generator_matrices())?;
    let w = match &b {
        Boundedness::Unbounded { witness, .. } => Some(witness_word(&rep.names(), witness)),
        Boundedness::Bounded { .. } => None,
    };
    Ok((b, w))
}

/// Expands every entry at the place, then tests boundedness, density and the
/// integrality of puncture traces over the completion.
pub fn complete_and_test(
    rep: &RepPresentation<RationalFunction>,
    place: Place,
    prec: i64,
    max_word_len: usize,
) -> Result<BoundednessReport> {
    let completed = complete(rep, place, prec)?;
    let (boundedness, witness) = rep_boundedness(&completed)?;
    let density = zariski_density_check(&completed, max_word_len);
    let mut puncture_checks = Vec::new();
    for w in &rep.punctures {
        let tr = completed.trace_of_word(w)?;
        let ok = tr.valuation_lower_bound().is_none_or(|lb| lb >= 0);
        puncture_checks.push((w.clone(), ok));
    }
    Ok(BoundednessReport { place, precision: prec, boundedness, witness, density, puncture_checks, completed })
}

pub fn complete(
    rep: &RepPresentation<RationalFunction>,
    place: Place,
    prec: i64,
) -> Result<RepPresentation<LaurentSeries>> {
    Ok(rep.try_map(|r| r.expand_at_place(place, prec))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FieldHandle, FpPoly, NumberField, QPoly};
    use crate::bttree::diagonal;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qm(a: i64, b: i64, c: i64, d: i64) -> Matrix2<BigRational> {
        Matrix2::sl2(q(a), q(b), q(c), q(d)).unwrap()
    }

    fn ls(p: u32, terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(p, terms, None).unwrap()
    }

    fn lm(p: u32, e: [&[(i64, i64)]; 4]) -> LMatrix {
        Matrix2::sl2(ls(p, e[0]), ls(p, e[1]), ls(p, e[2]), ls(p, e[3])).unwrap()
    }

    #[test]
    fn class_kinds() {
        assert_eq!(conjugacy_class_kind(&qm(1, 1, 0, 1)), ConjClassKind::UnipotentPlus);
        assert_eq!(conjugacy_class_kind(&qm(-1, 0, 0, -1)), ConjClassKind::MinusIdentity);
        assert_eq!(conjugacy_class_kind(&qm(-3, 1, -4, 1)), ConjClassKind::UnipotentMinus);
        assert_eq!(conjugacy_class_kind(&qm(2, 1, 1, 1)), ConjClassKind::Semisimple(q(3)));
    }

    #[test]
    fn quasi_unipotence() {
        let k = NumberField::rationals();
        let m = |a, b, c, d| Matrix2::sl2(k.from_int(a), k.from_int(b), k.from_int(c), k.from_int(d)).unwrap();
        let a = m(0, -1, 1, 1);
        assert_eq!(is_quasi_unipotent(&a), QuasiUnipotence::Yes { order: 6, unipotent: false });
        assert!(a.pow(6).is_scalar(1));
        assert_eq!(is_quasi_unipotent(&m(1, 1, 0, 1)), QuasiUnipotence::Yes { order: 1, unipotent: true });
        assert_eq!(is_quasi_unipotent(&m(2, 1, 1, 1)), QuasiUnipotence::No);
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer_kind(&qm(1, 1, 0, 1)).unwrap(), CentralizerKind::Unipotent);
        assert_eq!(centralizer_kind(&qm(0, -1, 1, 0)).unwrap(), CentralizerKind::NonSplitTorus);
        let gi = NumberField::new(QPoly::from_ints(&[1, 0, 1]), "x").unwrap();
        let i = gi.gen();
        let d = Matrix2::sl2(i.clone(), gi.zero(), gi.zero(), i.neg()).unwrap();
        assert_eq!(centralizer_kind(&d).unwrap(), CentralizerKind::SplitTorus);
        assert_eq!(centralizer_kind(&qm(2, 1, 1, 1)), Err(Error::NotQuasiUnipotent));
    }

    #[test]
    fn density() {
        let rep = RepPresentation::new(vec![('a', qm(1, 1, 0, 1)), ('b', qm(1, 0, 1, 1))]).unwrap();
        let verdict = zariski_density_check(&rep, 4);
        let DensityVerdict::Dense { gamma, gamma_trace, .. } = verdict else { panic!("expected dense") };
        assert_eq!(gamma.to_string(), "ab");
        assert_eq!(gamma_trace, q(3));
        let torus = RepPresentation::new(vec![(
            'a',
            Matrix2::sl2(q(2), q(0), q(0), BigRational::new(1.into(), 2.into())).unwrap(),
        )])
        .unwrap();
        assert!(!zariski_density_check(&torus, 4).is_dense());
        let a = qm(2, 1, 1, 1);
        let pm = RepPresentation::new(vec![('a', a.clone()), ('b', a.neg())]).unwrap();
        assert!(!zariski_density_check(&pm, 3).is_dense());
    }

    #[test]
    fn translation_lengths() {
        let p = 5;
        assert_eq!(translation_length(&diagonal(p, -1)).unwrap(), 2);
        assert_eq!(translation_length(&lm(p, [&[(0, 1)], &[(0, 1)], &[], &[(0, 1)]])).unwrap(), 0);
        assert_eq!(translation_length(&lm(p, [&[], &[(-1, -1)], &[(1, 1)], &[]])).unwrap(), 0);
    }

    #[test]
    fn fixed_vertices() {
        let p = 3;
        let u = lm(p, [&[(0, 1)], &[(0, 1)], &[], &[(0, 1)]]);
        let h = diagonal(p, -2);
        let g = u.conjugate_by(&h);
        let v = fixed_vertex(&g).unwrap();
        assert_eq!(act(&g, &v).unwrap(), v);
        assert_eq!(fixed_vertex(&diagonal(p, -1)), Err(Error::NotElliptic(2)));
    }

    #[test]
    fn boundedness() {
        let p = 5;
        let u = lm(p, [&[(0, 1)], &[(0, 1)], &[], &[(0, 1)]]);
        let l = lm(p, [&[(0, 1)], &[], &[(0, 1)], &[(0, 1)]]);
        assert_eq!(is_bounded(&[u, l]).unwrap(), Boundedness::Bounded { fixed: Vertex::base(p) });
        assert!(matches!(
            is_bounded(&[diagonal(p, -1)]).unwrap(),
            Boundedness::Unbounded { witness, translation_length: 2 } if witness == vec![0]
        ));
        let u = lm(p, [&[(0, 1)], &[(-1, 1)], &[], &[(0, 1)]]);
        let w = lm(p, [&[(0, 1)], &[], &[(-1, 1)], &[(0, 1)]]);
        assert!(matches!(
            is_bounded(&[u, w]).unwrap(),
            Boundedness::Unbounded { witness, translation_length: 4 } if witness == vec![0, 1]
        ));
    }

    #[test]
    fn completion() {
        let p = 5;
        let y = RationalFunction::from_poly(FpPoly::new(p, &[0, 1]), "y").unwrap();
        let yi = y.inv().unwrap();
        let zero = y.constant_like(0);
        let rep = RepPresentation::new(vec![('a', Matrix2::sl2(y, zero.clone(), zero, yi).unwrap())]).unwrap();
        let at_inf = complete_and_test(&rep, Place::Infinity, 32, 3).unwrap();
        assert!(matches!(at_inf.boundedness, Boundedness::Unbounded { translation_length: 2, .. }));
        let tr = at_inf.completed.trace_of_word(&Word::parse("a").unwrap()).unwrap();
        assert_eq!(tr.valuation().unwrap(), Some(-1));
        let c = crate::arith::Fp::new(p, 2).unwrap();
        let at_two = complete_and_test(&rep, Place::Finite(c), 32, 3).unwrap();
        assert!(matches!(at_two.boundedness, Boundedness::Bounded { .. }));
    }
}
