//! Bounded scans for non-integral traces.

use crate::arith::{NfElem, QPoly};
use crate::error::Result;
use crate::matrix::{RepPresentation, Word};

#[derive(Clone, Debug, PartialEq)]
pub enum IntegralityVerdict {
    AllIntegral,
    Violation { word: Word, trace: NfElem, minimal_polynomial: QPoly },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityReport {
    pub max_len: usize,
    pub verdict: IntegralityVerdict,
    pub words_checked: usize,
}

impl IntegralityReport {
    pub fn is_integral(&self) -> bool {
        self.verdict == IntegralityVerdict::AllIntegral
    }

    pub fn lines(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("max_word_len".to_string(), self.max_len.to_string()),
            ("words_checked".to_string(), self.words_checked.to_string()),
        ];
        match &self.verdict {
            IntegralityVerdict::AllIntegral => out.push(("integral".into(), "yes".into())),
            IntegralityVerdict::Violation { word, trace, minimal_polynomial } => {
                out.push(("integral".into(), "no".into()));
                out.push(("violation_word".into(), word.to_string()));
                out.push(("violation_trace".into(), trace.to_string()));
                out.push(("violation_minpoly".into(), minimal_polynomial.to_string()));
            }
        }
        out
    }
}

pub fn trace_of_word(rep: &RepPresentation<NfElem>, word: &Word) -> Result<NfElem> {
    rep.trace_of_word(word)
}

/// Checks every freely reduced word up to `max_len`, in length-lex order, and
/// reports the first trace that is not an algebraic integer.
pub fn integrality_scan(rep: &RepPresentation<NfElem>, max_len: usize) -> IntegralityReport {
    let words = rep.reduced_words(max_len);
    for (k, (word, m)) in words.iter().enumerate() {
        let trace = m.trace();
        let mp = trace.minimal_polynomial();
        if mp.integer_coeffs().is_none() {
            return IntegralityReport {
                max_len,
                verdict: IntegralityVerdict::Violation { word: word.clone(), trace, minimal_polynomial: mp },
                words_checked: k + 1,
            };
        }
    }
    IntegralityReport { max_len, verdict: IntegralityVerdict::AllIntegral, words_checked: words.len() }
}
