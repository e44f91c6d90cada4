//! The line-oriented representation file format.
//!
//! ```text
//! # comment
//! field number minpoly=x^2 - 2
//! gen a [[1, x], [0, 1]]
//! gen b [[1, 0], [x, 1]]
//! puncture ab
//! relator abAB
//! ```
//!
//! Field lines: `field laurent p=<prime> prec=<n>`, `field ratfunc p=<prime> var=<sym>`,
//! `field number minpoly=<poly> [var=<sym>]` and `field cm real=<poly> delta=<expr> [var=<sym>]`,
//! where in cm mode `w` denotes the square root of delta and an optional
//! `form [[e,e],[e,e]]` line declares an antihermitian form. Gain graphs add
//! `edge <u> <v> <word>` lines, read as `a(u) = word . a(v)`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::expr::{parse_expr, ExprDomain};
use crate::arith::{is_prime, FieldHandle, FpPoly, LaurentSeries, NfElem, NumberField, QPoly, RationalFunction, Ring};
use crate::error::{Error, Result};
use crate::hodgesign::{CMField, SesquiForm, SQRT_SYMBOL};
use crate::matrix::{Matrix2, RepPresentation, Word};
use crate::treeharm::{GainEdge, GainGraph};

pub const LAURENT_VAR: &str = "t";

#[derive(Clone, Debug)]
pub enum Representation {
    Laurent { prec: i64, rep: RepPresentation<LaurentSeries> },
    RatFunc { var: String, rep: RepPresentation<RationalFunction> },
    Number { field: Arc<NumberField>, rep: RepPresentation<NfElem> },
    Cm { field: Arc<CMField>, rep: RepPresentation<NfElem> },
}

impl Representation {
    pub fn mode(&self) -> &'static str {
        match self {
            Representation::Laurent { .. } => "laurent",
            Representation::RatFunc { .. } => "ratfunc",
            Representation::Number { .. } => "number",
            Representation::Cm { .. } => "cm",
        }
    }

    fn words(&self) -> (&[Word], &[Word]) {
        match self {
            Representation::Laurent { rep, .. } => (&rep.punctures, &rep.relators),
            Representation::RatFunc { rep, .. } => (&rep.punctures, &rep.relators),
            Representation::Number { rep, .. } => (&rep.punctures, &rep.relators),
            Representation::Cm { rep, .. } => (&rep.punctures, &rep.relators),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub from: String,
    pub to: String,
    pub word: Word,
}

#[derive(Clone, Debug)]
pub struct RepFile {
    pub rep: Representation,
    pub edges: Vec<EdgeDecl>,
    /// A sesquilinear form declared with `form [[e,e],[e,e]]`; cm mode only.
    pub form: Option<Matrix2<NfElem>>,
}

impl PartialEq for RepFile {
    fn eq(&self, o: &Self) -> bool {
        self.edges == o.edges && self.form == o.form && self.serialize() == o.serialize()
    }
}

impl RepFile {
    pub fn new(rep: Representation) -> Self {
        RepFile { rep, edges: Vec::new(), form: None }
    }

    /// The gain graph declared by `edge` lines; laurent mode only.
    pub fn gain_graph(&self) -> Result<Option<GainGraph>> {
        if self.edges.is_empty() {
            return Ok(None);
        }
        let Representation::Laurent { rep, .. } = &self.rep else {
            return Err(Error::ModeMismatch("gain graphs need a laurent field".into()));
        };
        let mut names: Vec<String> = Vec::new();
        for e in &self.edges {
            for n in [&e.from, &e.to] {
                if !names.contains(n) {
                    names.push(n.clone());
                }
            }
        }
        let idx = |n: &str| names.iter().position(|m| m == n).expect("collected");
        let mut edges = Vec::new();
        for e in &self.edges {
            edges.push(GainEdge { from: idx(&e.from), to: idx(&e.to), gain: rep.eval(&e.word)?, label: e.word.to_string() });
        }
        Ok(Some(GainGraph::new(names, edges)?))
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        match &self.rep {
            Representation::Laurent { prec, rep } => {
                let _ = writeln!(s, "field laurent p={} prec={prec}", modulus_of(rep));
                write_gens(&mut s, rep, |e| e.to_string());
            }
            Representation::RatFunc { var, rep } => {
                let p = rep.generators().first().map(|(_, m)| m.a.modulus()).unwrap_or(2);
                let _ = writeln!(s, "field ratfunc p={p} var={var}");
                write_gens(&mut s, rep, |e| e.to_string());
            }
            Representation::Number { field, rep } => {
                let _ = writeln!(s, "field number minpoly={} var={}", field.minpoly().to_string_var(field.var()), field.var());
                write_gens(&mut s, rep, |e| e.to_string());
            }
            Representation::Cm { field, rep } => {
                let real = field.real_field();
                let _ = writeln!(
                    s,
                    "field cm real={} delta={} var={}",
                    real.minpoly().to_string_var(real.var()),
                    field.delta(),
                    real.var()
                );
                write_gens(&mut s, rep, |e| field.format(e));
                if let Some(m) = &self.form {
                    let f = |e| field.format(e);
                    let _ = writeln!(s, "form [[{}, {}], [{}, {}]]", f(&m.a), f(&m.b), f(&m.c), f(&m.d));
                }
            }
        }
        let (punctures, relators) = self.rep.words();
        for w in punctures {
            let _ = writeln!(s, "puncture {w}");
        }
        for w in relators {
            let _ = writeln!(s, "relator {w}");
        }
        for e in &self.edges {
            let _ = writeln!(s, "edge {} {} {}", e.from, e.to, e.word);
        }
        s
    }
}

fn modulus_of(rep: &RepPresentation<LaurentSeries>) -> u32 {
    rep.generators().first().map(|(_, m)| m.a.modulus()).unwrap_or(2)
}

fn write_gens<R: Ring>(s: &mut String, rep: &RepPresentation<R>, show: impl Fn(&R) -> String) {
    for (name, m) in rep.generators() {
        let _ = writeln!(s, "gen {name} [[{}, {}], [{}, {}]]", show(&m.a), show(&m.b), show(&m.c), show(&m.d));
    }
}

/// Lines strictly between `repfile: begin` and `repfile: end`, with the
/// number of lines skipped before them; the whole text when there is no block.
pub fn extract_block(text: &str) -> (usize, String) {
    let lines: Vec<&str> = text.lines().collect();
    let Some(start) = lines.iter().position(|l| l.trim() == "repfile: begin") else {
        return (0, text.to_string());
    };
    let end = lines[start + 1..].iter().position(|l| l.trim() == "repfile: end").map_or(lines.len(), |k| start + 1 + k);
    (start + 1, lines[start + 1..end].join("\n"))
}

pub fn parse(text: &str) -> Result<RepFile> {
    let (skip, body) = extract_block(text);
    let mut field: Option<FieldState> = None;
    let mut gens: Vec<GenDecl> = Vec::new();
    let mut punctures = Vec::new();
    let mut relators = Vec::new();
    let mut edges = Vec::new();
    let mut form: Option<(usize, [(String, usize); 4])> = None;
    for (k, raw) in body.lines().enumerate() {
        let line = k + 1 + skip;
        let content = raw.split('#').next().unwrap_or("");
        let Some((kw, kw_col)) = first_token(content) else { continue };
        let rest_col = kw_col + kw.len();
        let rest = &content[rest_col - 1..];
        match kw {
            "field" => {
                if field.is_some() {
                    return Err(Error::parse(line, kw_col, "second field declaration"));
                }
                field = Some(parse_field(rest, line, rest_col)?);
            }
            "gen" => {
                let f = field.as_ref().ok_or_else(|| Error::parse(line, kw_col, "gen before field declaration"))?;
                gens.push(parse_gen(f, rest, line, rest_col)?);
            }
            "form" => {
                if !matches!(field, Some(FieldState::Cm { .. })) {
                    return Err(Error::parse(line, kw_col, "form declarations need a cm field"));
                }
                if form.is_some() {
                    return Err(Error::parse(line, kw_col, "second form declaration"));
                }
                form = Some((line, split_matrix(rest, line, rest_col)?));
            }
            "puncture" | "relator" => {
                let (w, col) = single_word(rest, line, rest_col)?;
                let word = Word::parse(w).map_err(|e| reposition(e, line, col))?;
                if kw == "puncture" { punctures.push(word) } else { relators.push(word) }
            }
            "edge" => {
                let toks = tokens(rest, rest_col);
                if toks.len() != 3 {
                    return Err(Error::parse(line, rest_col, "expected 'edge <u> <v> <word>'"));
                }
                let word = Word::parse(toks[2].0).map_err(|e| reposition(e, line, toks[2].1))?;
                edges.push(EdgeDecl { from: toks[0].0.to_string(), to: toks[1].0.to_string(), word });
            }
            other => return Err(Error::parse(line, kw_col, format!("unknown declaration '{other}'"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(1, 1, "missing field declaration"))?;
    let rep = field.build(gens, punctures, relators)?;
    let form = match (&rep, form) {
        (Representation::Cm { field, .. }, Some((line, entries))) => {
            let dom = CmDomain { field: field.clone() };
            let mut vals = Vec::with_capacity(4);
            for (text, col) in &entries {
                vals.push(parse_expr(&dom, text).map_err(|e| Error::parse(line, col + e.offset, e.msg))?);
            }
            let [a, b, c, d]: [NfElem; 4] = vals.try_into().expect("four entries");
            let m = Matrix2::new(a, b, c, d);
            SesquiForm::new(field, m.clone()).map_err(|e| Error::parse(line, 1, e.to_string()))?;
            Some(m)
        }
        _ => None,
    };
    let file = RepFile { rep, edges, form };
    file.gain_graph()?;
    Ok(file)
}

fn reposition(e: Error, line: usize, col: usize) -> Error {
    match e {
        Error::Parse { col: c, msg, .. } => Error::parse(line, col + c.saturating_sub(1), msg),
        other => other,
    }
}

fn first_token(s: &str) -> Option<(&str, usize)> {
    tokens(s, 1).into_iter().next()
}

/// Whitespace-separated tokens with 1-based columns offset by `base - 1`.
fn tokens(s: &str, base: usize) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(st)) => {
                out.push((&s[st..i], base + st));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((&s[st..], base + st));
    }
    out
}

fn single_word(rest: &str, line: usize, col: usize) -> Result<(&str, usize)> {
    let toks = tokens(rest, col);
    match toks.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::parse(line, col, "expected a single word")),
    }
}

/// `key=value` pairs; a value runs until the next token containing '='.
fn key_values(rest: &str, line: usize, col: usize) -> Result<Vec<(String, String, usize)>> {
    let mut out: Vec<(String, String, usize)> = Vec::new();
    for (tok, c) in tokens(rest, col) {
        if let Some((k, v)) = tok.split_once('=') {
            if k.is_empty() {
                return Err(Error::parse(line, c, "missing key before '='"));
            }
            out.push((k.to_string(), v.to_string(), c + k.len() + 1));
        } else if let Some(last) = out.last_mut() {
            last.1.push(' ');
            last.1.push_str(tok);
        } else {
            return Err(Error::parse(line, c, format!("expected key=value, found '{tok}'")));
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum FieldState {
    Laurent { p: u32, prec: i64 },
    RatFunc { p: u32, var: String },
    Number { field: Arc<NumberField> },
    Cm { field: Arc<CMField> },
}

fn parse_field(rest: &str, line: usize, col: usize) -> Result<FieldState> {
    let toks = tokens(rest, col);
    let Some(&(mode, mode_col)) = toks.first() else {
        return Err(Error::parse(line, col, "expected a field mode"));
    };
    let after = mode_col + mode.len();
    let kv = key_values(&rest[after - col..], line, after)?;
    let allowed: &[&str] = match mode {
        "laurent" => &["p", "prec"],
        "ratfunc" => &["p", "var"],
        "number" => &["minpoly", "var"],
        "cm" => &["real", "delta", "var"],
        other => return Err(Error::parse(line, mode_col, format!("unknown field mode '{other}'"))),
    };
    for (k, _, c) in &kv {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::parse(line, c - k.len() - 1, format!("unknown key '{k}' for {mode} fields")));
        }
    }
    let get = |key: &str| kv.iter().find(|(k, _, _)| k == key).map(|(_, v, c)| (v.trim().to_string(), *c));
    let need = |key: &str| get(key).ok_or_else(|| Error::parse(line, mode_col, format!("{mode} field needs {key}=")));
    let prime = |(v, c): (String, usize)| -> Result<u32> {
        let p: u32 = v.parse().map_err(|_| Error::parse(line, c, format!("'{v}' is not an integer")))?;
        if !is_prime(p as u64) || p > 65_521 {
            return Err(Error::parse(line, c, format!("p={p} is not a supported prime")));
        }
        Ok(p)
    };
    let symbol = |(v, c): (String, usize)| -> Result<String> {
        if v.len() == 1 && v.chars().all(|ch| ch.is_ascii_lowercase()) && v != SQRT_SYMBOL {
            Ok(v)
        } else {
            Err(Error::parse(line, c, format!("variable '{v}' must be a single lowercase letter other than {SQRT_SYMBOL}")))
        }
    };
    match mode {
        "laurent" => {
            let p = prime(need("p")?)?;
            let (v, c) = need("prec")?;
            let prec: i64 = v.parse().map_err(|_| Error::parse(line, c, format!("'{v}' is not an integer")))?;
            if prec <= 0 {
                return Err(Error::parse(line, c, "prec must be positive"));
            }
            Ok(FieldState::Laurent { p, prec })
        }
        "ratfunc" => {
            let p = prime(need("p")?)?;
            let var = symbol(need("var")?)?;
            if var == LAURENT_VAR {
                return Err(Error::parse(line, mode_col, format!("'{LAURENT_VAR}' is reserved for laurent mode")));
            }
            Ok(FieldState::RatFunc { p, var })
        }
        "number" => {
            let var = get("var").map(symbol).transpose()?.unwrap_or_else(|| "x".into());
            let (text, c) = need("minpoly")?;
            let poly = parse_expr(&QPolyDomain { var: &var }, &text).map_err(|e| Error::parse(line, c + e.offset, e.msg))?;
            let field = NumberField::new(poly, &var).map_err(|e| Error::parse(line, c, e.to_string()))?;
            Ok(FieldState::Number { field })
        }
        _ => {
            let var = get("var").map(symbol).transpose()?.unwrap_or_else(|| "x".into());
            let (text, c) = need("real")?;
            let poly = parse_expr(&QPolyDomain { var: &var }, &text).map_err(|e| Error::parse(line, c + e.offset, e.msg))?;
            let real = NumberField::new(poly, &var).map_err(|e| Error::parse(line, c, e.to_string()))?;
            let (text, c) = need("delta")?;
            let dom = NumberDomain { field: real.clone(), var: var.clone() };
            let delta = parse_expr(&dom, &text).map_err(|e| Error::parse(line, c + e.offset, e.msg))?;
            let field = CMField::new(real, delta).map_err(|e| Error::parse(line, c, e.to_string()))?;
            Ok(FieldState::Cm { field })
        }
    }
}

struct GenDecl {
    name: char,
    line: usize,
    entries: [(String, usize); 4],
}

fn parse_gen(_field: &FieldState, rest: &str, line: usize, col: usize) -> Result<GenDecl> {
    let toks = tokens(rest, col);
    let Some(&(name, name_col)) = toks.first() else {
        return Err(Error::parse(line, col, "expected a generator name"));
    };
    let mut chars = name.chars();
    let ch = chars.next().expect("nonempty token");
    if chars.next().is_some() || !ch.is_ascii_lowercase() {
        return Err(Error::parse(line, name_col, format!("generator name '{name}' must be a single lowercase letter")));
    }
    let mstart = name_col + name.len();
    let entries = split_matrix(&rest[mstart - col..], line, mstart)?;
    Ok(GenDecl { name: ch, line, entries })
}

/// Splits `[[e, e], [e, e]]` into its four entry texts with their columns.
fn split_matrix(s: &str, line: usize, col: usize) -> Result<[(String, usize); 4]> {
    let b = s.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let expect = |i: &mut usize, c: u8| -> Result<()> {
        skip_ws(i);
        if *i < b.len() && b[*i] == c {
            *i += 1;
            Ok(())
        } else {
            Err(Error::parse(line, col + *i, format!("expected '{}'", c as char)))
        }
    };
    let entry = |i: &mut usize, end: u8| -> Result<(String, usize)> {
        let start = *i;
        let mut depth = 0i32;
        while *i < b.len() {
            match b[*i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                c if depth == 0 && c == end => break,
                b',' | b']' | b'[' if depth == 0 => break,
                _ => {}
            }
            *i += 1;
        }
        if *i >= b.len() || b[*i] != end {
            return Err(Error::parse(line, col + *i, format!("expected '{}'", end as char)));
        }
        let text = &s[start..*i];
        if text.trim().is_empty() {
            return Err(Error::parse(line, col + start, "empty matrix entry"));
        }
        *i += 1;
        Ok((text.to_string(), col + start))
    };
    expect(&mut i, b'[')?;
    expect(&mut i, b'[')?;
    let e0 = entry(&mut i, b',')?;
    let e1 = entry(&mut i, b']')?;
    expect(&mut i, b',')?;
    expect(&mut i, b'[')?;
    let e2 = entry(&mut i, b',')?;
    let e3 = entry(&mut i, b']')?;
    expect(&mut i, b']')?;
    skip_ws(&mut i);
    if i != b.len() {
        return Err(Error::parse(line, col + i, "trailing text after matrix"));
    }
    Ok([e0, e1, e2, e3])
}

impl FieldState {
    fn build(self, gens: Vec<GenDecl>, punctures: Vec<Word>, relators: Vec<Word>) -> Result<Representation> {
        Ok(match self {
            FieldState::Laurent { p, prec } => {
                let rep = assemble(&LaurentDomain { p }, gens, punctures, relators)?;
                Representation::Laurent { prec, rep }
            }
            FieldState::RatFunc { p, var } => {
                let rep = assemble(&RatFuncDomain { p, var: var.clone() }, gens, punctures, relators)?;
                Representation::RatFunc { var, rep }
            }
            FieldState::Number { field } => {
                let dom = NumberDomain { field: field.clone(), var: field.var().to_string() };
                Representation::Number { rep: assemble(&dom, gens, punctures, relators)?, field }
            }
            FieldState::Cm { field } => {
                let rep = assemble(&CmDomain { field: field.clone() }, gens, punctures, relators)?;
                Representation::Cm { field, rep }
            }
        })
    }
}

fn assemble<D: ExprDomain>(dom: &D, gens: Vec<GenDecl>, punctures: Vec<Word>, relators: Vec<Word>) -> Result<RepPresentation<D::Elem>>
where
    D::Elem: Ring,
{
    let mut out = Vec::new();
    for g in gens {
        let mut vals = Vec::with_capacity(4);
        for (text, col) in &g.entries {
            let lead = text.len() - text.trim_start().len();
            vals.push(parse_expr(dom, text).map_err(|e| Error::parse(g.line, col + e.offset.max(lead), e.msg))?);
        }
        let [a, b, c, d]: [D::Elem; 4] = vals.try_into().expect("four entries");
        let m = Matrix2::new(a, b, c, d);
        if !m.det().equals_to_precision(&m.a.one_like()) {
            return Err(Error::DeterminantNotOne(format!("generator {} on line {}: det = {}", g.name, g.line, m.det())));
        }
        out.push((g.name, m));
    }
    if out.is_empty() {
        return Err(Error::parse(1, 1, "no generators declared"));
    }
    let mut rep = RepPresentation::new(out)?.with_punctures(punctures)?;
    for w in &relators {
        rep.check_word(w)?;
        let m = rep.eval(w)?;
        if !m.equals_to_precision(&m.identity()) {
            return Err(Error::Invalid(format!("relator {w} evaluates to {m}, not the identity")));
        }
    }
    rep.relators = relators;
    Ok(rep)
}

struct QPolyDomain<'a> {
    var: &'a str,
}

impl ExprDomain for QPolyDomain<'_> {
    type Elem = QPoly;
    fn int(&self, n: &BigInt) -> std::result::Result<QPoly, String> {
        Ok(QPoly::from_bigints(std::slice::from_ref(n)))
    }
    fn var(&self, name: &str) -> Option<QPoly> {
        (name == self.var).then(QPoly::x)
    }
    fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.add(b)
    }
    fn sub(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.sub(b)
    }
    fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.mul(b)
    }
    fn neg(&self, a: &QPoly) -> QPoly {
        a.neg()
    }
    fn div(&self, a: &QPoly, b: &QPoly) -> std::result::Result<QPoly, String> {
        match b.degree() {
            Some(0) => Ok(a.scale(&b.coeff(0).recip())),
            _ => Err("polynomials may only be divided by nonzero constants".into()),
        }
    }
    fn pow(&self, a: &QPoly, e: i64) -> std::result::Result<QPoly, String> {
        if e < 0 {
            return Err("negative exponent in a polynomial".into());
        }
        Ok((0..e).fold(QPoly::one(), |acc, _| acc.mul(a)))
    }
}

struct LaurentDomain {
    p: u32,
}

impl ExprDomain for LaurentDomain {
    type Elem = LaurentSeries;
    fn int(&self, n: &BigInt) -> std::result::Result<LaurentSeries, String> {
        let r = n % BigInt::from(self.p);
        Ok(LaurentSeries::from_int(self.p, i64::try_from(&r).expect("reduced")))
    }
    fn var(&self, name: &str) -> Option<LaurentSeries> {
        (name == LAURENT_VAR).then(|| LaurentSeries::monomial(self.p, 1, 1))
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b)
    }
    fn sub(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.sub(b)
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.mul(b)
    }
    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        a.neg()
    }
    fn div(&self, _: &LaurentSeries, _: &LaurentSeries) -> std::result::Result<LaurentSeries, String> {
        Err("'/' is not allowed in laurent mode; use negative exponents".into())
    }
    fn pow(&self, a: &LaurentSeries, e: i64) -> std::result::Result<LaurentSeries, String> {
        a.pow(e).map_err(|e| e.to_string())
    }
    fn big_o(&self, k: i64) -> Option<LaurentSeries> {
        Some(LaurentSeries::zero(self.p).with_prec(k))
    }
}

struct RatFuncDomain {
    p: u32,
    var: String,
}

impl ExprDomain for RatFuncDomain {
    type Elem = RationalFunction;
    fn int(&self, n: &BigInt) -> std::result::Result<RationalFunction, String> {
        let r = n % BigInt::from(self.p);
        let c = i64::try_from(&r).expect("reduced");
        RationalFunction::from_poly(FpPoly::new(self.p, &[c]), &self.var).map_err(|e| e.to_string())
    }
    fn var(&self, name: &str) -> Option<RationalFunction> {
        (name == self.var).then(|| RationalFunction::from_poly(FpPoly::new(self.p, &[0, 1]), &self.var).expect("prime"))
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }
    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }
    fn div(&self, a: &RationalFunction, b: &RationalFunction) -> std::result::Result<RationalFunction, String> {
        a.div(b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: &RationalFunction, e: i64) -> std::result::Result<RationalFunction, String> {
        let base = if e < 0 { a.inv().map_err(|e| e.to_string())? } else { a.clone() };
        Ok((0..e.unsigned_abs()).fold(a.constant_like(1), |acc, _| acc.mul(&base)))
    }
}

struct NumberDomain {
    field: Arc<NumberField>,
    var: String,
}

impl ExprDomain for NumberDomain {
    type Elem = NfElem;
    fn int(&self, n: &BigInt) -> std::result::Result<NfElem, String> {
        Ok(self.field.from_rational(BigRational::from_integer(n.clone())))
    }
    fn var(&self, name: &str) -> Option<NfElem> {
        (name == self.var).then(|| self.field.gen())
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.add(b)
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.sub(b)
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.mul(b)
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        a.neg()
    }
    fn div(&self, a: &NfElem, b: &NfElem) -> std::result::Result<NfElem, String> {
        a.div(b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: &NfElem, e: i64) -> std::result::Result<NfElem, String> {
        a.pow(e).map_err(|e| e.to_string())
    }
}

struct CmDomain {
    field: Arc<CMField>,
}

impl ExprDomain for CmDomain {
    type Elem = NfElem;
    fn int(&self, n: &BigInt) -> std::result::Result<NfElem, String> {
        Ok(self.field.field().from_rational(BigRational::from_integer(n.clone())))
    }
    fn var(&self, name: &str) -> Option<NfElem> {
        let real = self.field.real_field();
        if name == real.var() {
            Some(self.field.from_real(&real.gen()))
        } else if name == SQRT_SYMBOL {
            Some(self.field.sqrt_delta().clone())
        } else {
            None
        }
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.add(b)
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.sub(b)
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.mul(b)
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        a.neg()
    }
    fn div(&self, a: &NfElem, b: &NfElem) -> std::result::Result<NfElem, String> {
        a.div(b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: &NfElem, e: i64) -> std::result::Result<NfElem, String> {
        a.pow(e).map_err(|e| e.to_string())
    }
}
