//! 2x2 matrices over a coefficient ring, words in generators, and
//! finitely generated representations.

use std::fmt;

use crate::arith::{Ring, ZeroStatus};
use crate::error::{Error, Result};

/// The matrix [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2<R> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub d: R,
}

impl<R: Ring> Matrix2<R> {
    pub fn new(a: R, b: R, c: R, d: R) -> Self {
        Matrix2 { a, b, c, d }
    }

    /// Builds a matrix and checks that its determinant is one (to precision for
    /// truncated entries).
    pub fn sl2(a: R, b: R, c: R, d: R) -> Result<Self> {
        let m = Matrix2 { a, b, c, d };
        if !m.det().equals_to_precision(&m.a.one_like()) {
            return Err(Error::DeterminantNotOne(m.to_string()));
        }
        Ok(m)
    }

    pub fn identity_like(x: &R) -> Self {
        Matrix2 { a: x.one_like(), b: x.zero_like(), c: x.zero_like(), d: x.one_like() }
    }

    pub fn identity(&self) -> Self {
        Self::identity_like(&self.a)
    }

    pub fn det(&self) -> R {
        self.a.times(&self.d).minus(&self.b.times(&self.c))
    }

    pub fn trace(&self) -> R {
        self.a.plus(&self.d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Matrix2 {
            a: self.a.times(&o.a).plus(&self.b.times(&o.c)),
            b: self.a.times(&o.b).plus(&self.b.times(&o.d)),
            c: self.c.times(&o.a).plus(&self.d.times(&o.c)),
            d: self.c.times(&o.b).plus(&self.d.times(&o.d)),
        }
    }

    /// Inverse of a determinant-one matrix (the adjugate).
    pub fn inverse(&self) -> Self {
        Matrix2 { a: self.d.clone(), b: self.b.negate(), c: self.c.negate(), d: self.a.clone() }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.negate())
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|x| x.times(s))
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn map<S, F: Fn(&R) -> S>(&self, f: F) -> Matrix2<S> {
        Matrix2 { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn try_map<S, E, F: Fn(&R) -> std::result::Result<S, E>>(&self, f: F) -> std::result::Result<Matrix2<S>, E> {
        Ok(Matrix2 { a: f(&self.a)?, b: f(&self.b)?, c: f(&self.c)?, d: f(&self.d)? })
    }

    pub fn entries(&self) -> [&R; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Entrywise equality at the working precision.
    pub fn equals_to_precision(&self, o: &Self) -> bool {
        self.entries().iter().zip(o.entries()).all(|(x, y)| x.equals_to_precision(y))
    }

    /// Whether the matrix is a scalar multiple `s` of the identity, `s` an integer.
    pub fn is_scalar(&self, s: i64) -> bool {
        let s = self.a.from_int_like(s);
        self.b.zero_status() != ZeroStatus::NonZero
            && self.c.zero_status() != ZeroStatus::NonZero
            && self.a.equals_to_precision(&s)
            && self.d.equals_to_precision(&s)
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.mul(self).mul(&h.inverse())
    }
}

impl<R: fmt::Display> fmt::Display for Matrix2<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A word in single-letter generators; an uppercase letter is the inverse of
/// the corresponding lowercase generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        for (i, ch) in s.chars().enumerate() {
            if !ch.is_ascii_alphabetic() {
                return Err(Error::parse(0, i + 1, format!("invalid letter '{ch}' in word")));
            }
        }
        Ok(Word(s.chars().collect()))
    }

    pub fn from_letters(letters: Vec<char>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&c| invert_letter(c)).collect())
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Self {
        Word(self.0.repeat(n))
    }

    /// Free reduction: cancels adjacent pairs x X.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<char> = Vec::with_capacity(self.0.len());
        for &c in &self.0 {
            if out.last() == Some(&invert_letter(c)) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != invert_letter(w[0]))
    }
}

pub fn invert_letter(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Generators with determinant-one matrices, plus puncture and relator words.
#[derive(Clone, Debug, PartialEq)]
pub struct RepPresentation<R> {
    gens: Vec<(char, Matrix2<R>)>,
    pub punctures: Vec<Word>,
    pub relators: Vec<Word>,
}

impl<R: Ring> RepPresentation<R> {
    pub fn new(gens: Vec<(char, Matrix2<R>)>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Invalid("a representation needs at least one generator".into()));
        }
        for (i, (name, m)) in gens.iter().enumerate() {
            if !name.is_ascii_lowercase() {
                return Err(Error::Invalid(format!("generator name '{name}' must be a lowercase letter")));
            }
            if gens[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::Invalid(format!("generator '{name}' declared twice")));
            }
            if !m.det().equals_to_precision(&m.a.one_like()) {
                return Err(Error::DeterminantNotOne(name.to_string()));
            }
        }
        Ok(RepPresentation { gens, punctures: Vec::new(), relators: Vec::new() })
    }

    pub fn with_punctures(mut self, punctures: Vec<Word>) -> Result<Self> {
        for w in &punctures {
            self.check_word(w)?;
        }
        self.punctures = punctures;
        Ok(self)
    }

    pub fn generators(&self) -> &[(char, Matrix2<R>)] {
        &self.gens
    }

    pub fn generator_matrices(&self) -> Vec<Matrix2<R>> {
        self.gens.iter().map(|(_, m)| m.clone()).collect()
    }

    pub fn names(&self) -> Vec<char> {
        self.gens.iter().map(|(n, _)| *n).collect()
    }

    pub fn generator(&self, name: char) -> Result<&Matrix2<R>> {
        self.gens.iter().find(|(n, _)| *n == name).map(|(_, m)| m).ok_or(Error::UnknownGenerator(name))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        for &c in w.letters() {
            self.generator(c.to_ascii_lowercase())?;
        }
        Ok(())
    }

    /// Letters in enumeration order: a, A, b, B, ... following declaration order.
    pub fn alphabet(&self) -> Vec<char> {
        self.gens.iter().flat_map(|(n, _)| [*n, n.to_ascii_uppercase()]).collect()
    }

    fn letter_matrix(&self, c: char) -> Result<Matrix2<R>> {
        let m = self.generator(c.to_ascii_lowercase())?;
        Ok(if c.is_ascii_uppercase() { m.inverse() } else { m.clone() })
    }

    pub fn eval(&self, w: &Word) -> Result<Matrix2<R>> {
        let mut acc = Matrix2::identity_like(&self.gens[0].1.a);
        for &c in w.letters() {
            acc = acc.mul(&self.letter_matrix(c)?);
        }
        Ok(acc)
    }

    /// Trace of the image of a word; the empty word has trace 2.
    pub fn trace_of_word(&self, w: &Word) -> Result<R> {
        Ok(self.eval(w)?.trace())
    }

    /// All freely reduced words of length 1..=max_len with their images, in
    /// length-then-lexicographic order over [`Self::alphabet`].
    pub fn reduced_words(&self, max_len: usize) -> Vec<(Word, Matrix2<R>)> {
        let alphabet = self.alphabet();
        let mats: Vec<Matrix2<R>> = alphabet.iter().map(|&c| self.letter_matrix(c).unwrap()).collect();
        let mut out: Vec<(Word, Matrix2<R>)> = Vec::new();
        let mut layer: Vec<(Word, Matrix2<R>)> = vec![(Word::empty(), Matrix2::identity_like(&self.gens[0].1.a))];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, m) in &layer {
                for (&c, cm) in alphabet.iter().zip(&mats) {
                    if w.0.last() == Some(&invert_letter(c)) {
                        continue;
                    }
                    let mut letters = w.0.clone();
                    letters.push(c);
                    next.push((Word(letters), m.mul(cm)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn map<S: Ring, F: Fn(&R) -> S>(&self, f: F) -> RepPresentation<S> {
        RepPresentation {
            gens: self.gens.iter().map(|(n, m)| (*n, m.map(&f))).collect(),
            punctures: self.punctures.clone(),
            relators: self.relators.clone(),
        }
    }

    pub fn try_map<S: Ring, E, F: Fn(&R) -> std::result::Result<S, E>>(
        &self,
        f: F,
    ) -> std::result::Result<RepPresentation<S>, E> {
        let mut gens = Vec::with_capacity(self.gens.len());
        for (n, m) in &self.gens {
            gens.push((*n, m.try_map(&f)?));
        }
        Ok(RepPresentation { gens, punctures: self.punctures.clone(), relators: self.relators.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> Matrix2<BigRational> {
        Matrix2::sl2(q(a), q(b), q(c), q(d)).unwrap()
    }

    fn unipotent_pair() -> RepPresentation<BigRational> {
        RepPresentation::new(vec![('a', m(1, 1, 0, 1)), ('b', m(1, 0, 1, 1))]).unwrap()
    }

    #[test]
    fn determinant_checked() {
        assert!(Matrix2::sl2(q(2), q(0), q(0), q(2)).is_err());
        assert_eq!(m(2, 1, 1, 1).inverse().mul(&m(2, 1, 1, 1)), m(1, 0, 0, 1));
    }

    #[test]
    fn traces_of_words() {
        let rep = unipotent_pair();
        assert_eq!(rep.trace_of_word(&Word::empty()).unwrap(), q(2));
        assert_eq!(rep.trace_of_word(&Word::parse("a").unwrap()).unwrap(), q(2));
        assert_eq!(rep.trace_of_word(&Word::parse("ab").unwrap()).unwrap(), q(3));
        assert_eq!(rep.trace_of_word(&Word::parse("abab").unwrap()).unwrap(), q(7));
        assert_eq!(rep.trace_of_word(&Word::parse("aabb").unwrap()).unwrap(), q(6));
        assert_eq!(rep.trace_of_word(&Word::parse("c").unwrap()), Err(Error::UnknownGenerator('c')));
    }

    #[test]
    fn word_enumeration() {
        let rep = unipotent_pair();
        let words = rep.reduced_words(3);
        // 4 + 4*3 + 4*9 reduced words
        assert_eq!(words.len(), 52);
        assert_eq!(words[0].0.to_string(), "a");
        assert_eq!(words[4].0.to_string(), "aa");
        assert!(words.iter().all(|(w, _)| w.is_reduced()));
        for (w, mat) in &words {
            assert_eq!(&rep.eval(w).unwrap(), mat);
        }
    }

    #[test]
    fn word_algebra() {
        let w = Word::parse("abA").unwrap();
        assert_eq!(w.inverse().to_string(), "aBA");
        assert!(w.concat(&w.inverse()).reduce().is_empty());
    }
}
