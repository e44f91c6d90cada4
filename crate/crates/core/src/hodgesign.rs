//! Invariant antihermitian forms over CM fields and their signs at the
//! complex embeddings.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{first_relation, FieldHandle, IsolatedRoot, NfElem, NumberField};
use crate::error::{Error, Result};
use crate::matrix::Matrix2;

/// Name used for the square root of delta in expressions and output.
pub const SQRT_SYMBOL: &str = "w";

/// L = F(w) with w^2 = delta, F totally real and delta totally negative.
///
/// Elements of L live in an absolute field Q(theta), theta = w + s x, so that
/// matrices over L get the generic number-field machinery.
#[derive(Debug)]
pub struct CMField {
    real: Arc<NumberField>,
    delta: NfElem,
    field: Arc<NumberField>,
    real_gen: NfElem,
    sqrt_delta: NfElem,
    // theta^k as (a, b) meaning a + b w, for k < 2d
    theta_powers: Vec<(NfElem, NfElem)>,
    // real roots of the defining polynomial of F, decreasing
    roots: Vec<IsolatedRoot>,
}

impl CMField {
    pub fn new(real: Arc<NumberField>, delta: NfElem) -> Result<Arc<Self>> {
        if delta.field() != &real {
            return Err(Error::Invalid("delta does not lie in the real field".into()));
        }
        let d = real.degree();
        let f = real.minpoly();
        if f.count_real_roots() != d {
            return Err(Error::Invalid(format!("{} is not totally real", f.to_string_var(real.var()))));
        }
        if !delta.is_algebraic_integer() {
            return Err(Error::Invalid(format!("delta = {delta} is not an algebraic integer")));
        }
        let mut roots = f.real_roots();
        roots.reverse();
        for r in roots.iter_mut() {
            if r.sign_of(&delta.to_poly())? != Ordering::Less {
                return Err(Error::Invalid(format!("delta = {delta} is not totally negative")));
            }
        }
        let x = real.gen();
        for s in 0..64i64 {
            let theta = (x.scale(&BigRational::from_integer(s.into())), real.one());
            let mut cur = (real.one(), real.zero());
            let mut powers = Vec::with_capacity(2 * d + 1);
            for _ in 0..=2 * d {
                powers.push(cur.clone());
                cur = mul_parts(&cur, &theta, &delta);
            }
            let vecs: Vec<Vec<BigRational>> = powers.iter().map(flatten).collect();
            let mp = first_relation(&vecs).expect("dependent");
            if mp.degree() != Some(2 * d) {
                continue;
            }
            powers.truncate(2 * d);
            let field = NumberField::trusted(mp, "theta");
            let columns: Vec<Vec<BigRational>> = powers.iter().map(flatten).collect();
            let express = |a: &NfElem, b: &NfElem| {
                let c = solve_columns(&columns, &flatten(&(a.clone(), b.clone()))).expect("powers of theta form a basis");
                field.from_coords(c)
            };
            let real_gen = express(&x, &real.zero());
            let sqrt_delta = express(&real.zero(), &real.one());
            return Ok(Arc::new(CMField { real, delta, field, real_gen, sqrt_delta, theta_powers: powers, roots }));
        }
        Err(Error::Invalid("no primitive element found".into()))
    }

    pub fn real_field(&self) -> &Arc<NumberField> {
        &self.real
    }

    pub fn delta(&self) -> &NfElem {
        &self.delta
    }

    /// The absolute field holding elements of L.
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn sqrt_delta(&self) -> &NfElem {
        &self.sqrt_delta
    }

    pub fn real_degree(&self) -> usize {
        self.real.degree()
    }

    pub fn from_real(&self, a: &NfElem) -> NfElem {
        a.map_to(&self.real_gen)
    }

    pub fn from_parts(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.from_real(a).add(&self.from_real(b).mul(&self.sqrt_delta))
    }

    /// Coordinates (a, b) of `e = a + b w` with a, b in F.
    pub fn parts(&self, e: &NfElem) -> (NfElem, NfElem) {
        let mut acc = (self.real.zero(), self.real.zero());
        for (c, (a, b)) in e.coords().iter().zip(&self.theta_powers) {
            acc = (acc.0.add(&a.scale(c)), acc.1.add(&b.scale(c)));
        }
        acc
    }

    /// The element of F equal to `e`, if `e` is fixed by conjugation.
    pub fn to_real(&self, e: &NfElem) -> Option<NfElem> {
        let (a, b) = self.parts(e);
        b.is_zero().then_some(a)
    }

    /// Complex conjugation w -> -w.
    pub fn conj(&self, e: &NfElem) -> NfElem {
        let (a, b) = self.parts(e);
        self.from_parts(&a, &b.neg())
    }

    pub fn conj_matrix(&self, m: &Matrix2<NfElem>) -> Matrix2<NfElem> {
        m.map(|e| self.conj(e))
    }

    pub fn format(&self, e: &NfElem) -> String {
        let (a, b) = self.parts(e);
        let var = self.real.var();
        let imag = match b.as_rational() {
            Some(q) if q == BigRational::one() => SQRT_SYMBOL.to_string(),
            Some(q) if q == -BigRational::one() => format!("-{SQRT_SYMBOL}"),
            Some(q) if q.is_integer() => format!("{q}*{SQRT_SYMBOL}"),
            _ => format!("({})*{SQRT_SYMBOL}", b.to_string_var(var)),
        };
        match (a.is_zero(), b.is_zero()) {
            (_, true) => a.to_string_var(var),
            (true, false) => imag,
            (false, false) => format!("{} + {imag}", a.to_string_var(var)),
        }
    }

    /// Approximate values of the real embeddings of F, in embedding order.
    pub fn real_roots_approx(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.approx()).collect()
    }

    /// Sign of `a` at the `j`-th real embedding of F.
    pub fn real_sign(&self, a: &NfElem, j: usize) -> Result<Ordering> {
        let mut root = self.roots[j].clone();
        Ok(root.sign_of(&a.to_poly())?)
    }
}

fn mul_parts(x: &(NfElem, NfElem), y: &(NfElem, NfElem), delta: &NfElem) -> (NfElem, NfElem) {
    (x.0.mul(&y.0).add(&x.1.mul(&y.1).mul(delta)), x.0.mul(&y.1).add(&x.1.mul(&y.0)))
}

fn flatten(p: &(NfElem, NfElem)) -> Vec<BigRational> {
    p.0.coords().iter().chain(p.1.coords()).cloned().collect()
}

/// Solves sum_k c_k columns[k] = target by Gaussian elimination.
fn solve_columns(columns: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = columns.len();
    let m = target.len();
    let mut rows: Vec<Vec<BigRational>> =
        (0..m).map(|i| columns.iter().map(|c| c[i].clone()).chain([target[i].clone()]).collect()).collect();
    let pivots = rref(&mut rows, n);
    if rows.iter().any(|r| r[..n].iter().all(Zero::is_zero) && !r[n].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        out[p] = rows[i][n].clone();
    }
    Some(out)
}

/// Row reduces the first `ncols` columns in place; returns pivot columns.
fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                let pivot_row = rows[r].clone();
                for (a, b) in rows[k].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn nullspace(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][f].clone();
            }
            v
        })
        .collect()
}

fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut rows = rows.to_vec();
    rref(&mut rows, ncols).len()
}

/// A 2x2 matrix H over L with conj(H)^T = -H, read as the form u^T H conj(v).
#[derive(Clone, Debug)]
pub struct SesquiForm {
    field: Arc<CMField>,
    matrix: Matrix2<NfElem>,
}

impl SesquiForm {
    pub fn new(field: &Arc<CMField>, matrix: Matrix2<NfElem>) -> Result<Self> {
        let f = field;
        let antisym = f.conj(&matrix.a) == matrix.a.neg()
            && f.conj(&matrix.d) == matrix.d.neg()
            && f.conj(&matrix.c) == matrix.b.neg();
        if !antisym {
            return Err(Error::Invalid(format!("form {} is not antihermitian", matrix)));
        }
        Ok(SesquiForm { field: field.clone(), matrix })
    }

    /// [[c w, h], [-conj(h), e w]] for c, e in F and h in L.
    pub fn from_coordinates(field: &Arc<CMField>, c: &NfElem, e: &NfElem, h: &NfElem) -> Self {
        let w = field.sqrt_delta();
        let matrix = Matrix2::new(
            field.from_real(c).mul(w),
            h.clone(),
            field.conj(h).neg(),
            field.from_real(e).mul(w),
        );
        SesquiForm { field: field.clone(), matrix }
    }

    pub fn matrix(&self) -> &Matrix2<NfElem> {
        &self.matrix
    }

    pub fn cm_field(&self) -> &Arc<CMField> {
        &self.field
    }

    /// lambda H for lambda in F.
    pub fn scale(&self, lambda: &NfElem) -> Self {
        assert!(**lambda.field() == **self.field.real_field(), "scale factor must lie in the real subfield");
        let l = self.field.from_real(lambda);
        SesquiForm { field: self.field.clone(), matrix: self.matrix.map(|e| e.mul(&l)) }
    }

    pub fn is_invariant_under(&self, g: &Matrix2<NfElem>) -> bool {
        let gt = Matrix2::new(g.a.clone(), g.c.clone(), g.b.clone(), g.d.clone());
        gt.mul(&self.matrix).mul(&self.field.conj_matrix(g)) == self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries().iter().all(|e| e.is_zero())
    }

    /// det H, an element of F.
    fn det_real(&self) -> NfElem {
        self.field.to_real(&self.matrix.det()).expect("determinant of an antihermitian form is real")
    }

    /// c + e where H = [[c w, .], [., e w]].
    fn diagonal_sum(&self) -> NfElem {
        let (_, c) = self.field.parts(&self.matrix.a);
        let (_, e) = self.field.parts(&self.matrix.d);
        c.add(&e)
    }

    pub fn to_string_pretty(&self) -> String {
        let f = &self.field;
        let m = &self.matrix;
        format!("[[{}, {}], [{}, {}]]", f.format(&m.a), f.format(&m.b), f.format(&m.c), f.format(&m.d))
    }
}

/// Basis over F of the forms H with g^T H conj(g) = H for every generator.
pub fn invariant_form_space(field: &Arc<CMField>, gens: &[Matrix2<NfElem>]) -> Vec<SesquiForm> {
    let d = field.real_degree();
    let real = field.real_field();
    // unknowns: c, e, h0, h1 in F, each with d rational coordinates
    let unit = |k: usize| -> SesquiForm {
        let block = k / d;
        let basis = real.from_coords((0..d).map(|i| if i == k % d { BigRational::one() } else { BigRational::zero() }).collect());
        let zero = real.zero();
        match block {
            0 => SesquiForm::from_coordinates(field, &basis, &zero, &field.field().zero()),
            1 => SesquiForm::from_coordinates(field, &zero, &basis, &field.field().zero()),
            2 => SesquiForm::from_coordinates(field, &zero, &zero, &field.from_real(&basis)),
            _ => SesquiForm::from_coordinates(field, &zero, &zero, &field.from_parts(&zero, &basis)),
        }
    };
    let n = 4 * d;
    let units: Vec<SesquiForm> = (0..n).map(unit).collect();
    let mut columns: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    for g in gens {
        let gt = Matrix2::new(g.a.clone(), g.c.clone(), g.b.clone(), g.d.clone());
        let gbar = field.conj_matrix(g);
        for (k, u) in units.iter().enumerate() {
            let r = gt.mul(&u.matrix).mul(&gbar);
            for (x, y) in r.entries().into_iter().zip(u.matrix.entries()) {
                columns[k].extend(x.sub(y).coords().iter().cloned());
            }
        }
    }
    let rows: Vec<Vec<BigRational>> = if gens.is_empty() {
        Vec::new()
    } else {
        (0..columns[0].len()).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect()
    };
    let kernel = nullspace(rows, n);
    let to_form = |v: &[BigRational]| -> SesquiForm {
        let part = |b: usize| real.from_coords(v[b * d..(b + 1) * d].to_vec());
        let h = field.from_parts(&part(2), &part(3));
        SesquiForm::from_coordinates(field, &part(0), &part(1), &h)
    };
    let form_coords = |f: &SesquiForm| -> Vec<BigRational> {
        let (_, c) = field.parts(&f.matrix.a);
        let (_, e) = field.parts(&f.matrix.d);
        let (h0, h1) = field.parts(&f.matrix.b);
        [c, e, h0, h1].iter().flat_map(|x| x.coords().to_vec()).collect()
    };
    // F-basis: keep a kernel vector when it is outside the F-span of those kept
    let x = real.gen();
    let mut basis: Vec<SesquiForm> = Vec::new();
    let mut span: Vec<Vec<BigRational>> = Vec::new();
    for v in &kernel {
        let mut trial = span.clone();
        trial.push(v.clone());
        if rank(&trial, n) == span.len() {
            continue;
        }
        let form = to_form(v);
        let mut m = real.one();
        for _ in 0..d {
            span.push(form_coords(&form.scale(&m)));
            m = m.mul(&x);
        }
        basis.push(form);
    }
    basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbeddingSign {
    Positive,
    Mixed,
    Negative,
}

impl EmbeddingSign {
    pub fn flipped(self) -> Self {
        match self {
            EmbeddingSign::Positive => EmbeddingSign::Negative,
            EmbeddingSign::Mixed => EmbeddingSign::Mixed,
            EmbeddingSign::Negative => EmbeddingSign::Positive,
        }
    }
}

impl fmt::Display for EmbeddingSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingSign::Positive => "positive",
            EmbeddingSign::Mixed => "mixed",
            EmbeddingSign::Negative => "negative",
        })
    }
}

/// One complex embedding: the `real_index`-th real embedding of F together
/// with w -> +i sqrt|delta| (`upper`) or -i sqrt|delta|.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingEntry {
    pub real_index: usize,
    pub upper: bool,
    pub root: f64,
    pub sign: EmbeddingSign,
}

/// Signs of sqrt(-1) H^sigma at every complex embedding, ordered by real
/// embedding (decreasing root) and then upper before lower.
///
/// det(i H^sigma) = -zeta(det H) and tr(i H^sigma) = -(+-) zeta(c + e) sqrt|zeta(delta)|,
/// so every sign is an exact sign of an element of F at a real root.
pub fn embedding_signs(form: &SesquiForm) -> Result<Vec<EmbeddingEntry>> {
    let field = form.cm_field();
    let det = form.det_real();
    let diag = form.diagonal_sum();
    let approx = field.real_roots_approx();
    let mut out = Vec::new();
    for j in 0..field.real_degree() {
        let idx = 2 * j;
        let det_sign = if det.is_zero() { Ordering::Equal } else { field.real_sign(&det, j)? };
        let upper_sign = match det_sign {
            Ordering::Equal => return Err(Error::NumericallySingular(idx)),
            Ordering::Greater => EmbeddingSign::Mixed,
            Ordering::Less => match field.real_sign(&diag, j)? {
                Ordering::Greater => EmbeddingSign::Negative,
                Ordering::Less => EmbeddingSign::Positive,
                Ordering::Equal => return Err(Error::NumericallySingular(idx)),
            },
        };
        out.push(EmbeddingEntry { real_index: j, upper: true, root: approx[j], sign: upper_sign });
        out.push(EmbeddingEntry { real_index: j, upper: false, root: approx[j], sign: upper_sign.flipped() });
    }
    Ok(out)
}

/// Half the number of mixed embeddings.
pub fn polydisk_dimension(form: &SesquiForm) -> Result<usize> {
    let mixed = embedding_signs(form)?.iter().filter(|e| e.sign == EmbeddingSign::Mixed).count();
    debug_assert!(mixed % 2 == 0);
    Ok(mixed / 2)
}

/// Coefficient values in search order: 1, -1, 2, -2, ..., h, -h, 0.
fn coefficient_order(h: i64) -> Vec<i64> {
    (1..=h).flat_map(|k| [k, -k]).chain([0]).collect()
}

/// Smallest-height integer combination lambda of the power basis of F whose
/// sign at the j-th real embedding is `targets[j]` (`true` for positive).
/// Within a height, coefficient vectors are scanned lexicographically in the
/// order 1, -1, 2, -2, ..., 0.
pub fn sign_fixing_lambda(real: &Arc<NumberField>, targets: &[bool], max_height: i64) -> Result<NfElem> {
    let d = real.degree();
    if targets.len() != d {
        return Err(Error::Invalid(format!("{} sign targets for a field of degree {d}", targets.len())));
    }
    let mut roots = real.minpoly().real_roots();
    if roots.len() != d {
        return Err(Error::Invalid("field is not totally real".into()));
    }
    roots.reverse();
    for h in 1..=max_height {
        let order = coefficient_order(h);
        let mut idx = vec![0usize; d];
        'scan: loop {
            let coeffs: Vec<i64> = idx.iter().map(|&i| order[i]).collect();
            if coeffs.iter().any(|c| c.abs() == h) {
                let lambda = real.from_coords(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect());
                if matches_signs(&lambda, &mut roots, targets)? {
                    return Ok(lambda);
                }
            }
            let mut k = d;
            loop {
                if k == 0 {
                    break 'scan;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < order.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    Err(Error::SearchBudgetExceeded(format!("no sign-fixing element of height at most {max_height}")))
}

fn matches_signs(lambda: &NfElem, roots: &mut [IsolatedRoot], targets: &[bool]) -> Result<bool> {
    if lambda.is_zero() {
        return Ok(false);
    }
    let p = lambda.to_poly();
    for (r, &t) in roots.iter_mut().zip(targets) {
        let s = r.sign_of(&p)?;
        if (s == Ordering::Greater) != t {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn sign_lines(entries: &[EmbeddingEntry]) -> Vec<(String, String)> {
    entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let branch = if e.upper { "+" } else { "-" };
            (format!("embedding_{k}"), format!("{} (root {:.12}, w {branch}i)", e.sign, e.root))
        })
        .collect()
}
