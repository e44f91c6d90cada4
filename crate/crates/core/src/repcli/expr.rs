//! Entry expressions: sums and products of integers and named variables with
//! integer powers, and division where the domain allows it.

use num_bigint::BigInt;

/// Failure at a byte offset within the parsed text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub msg: String,
}

pub type ExprResult<T> = std::result::Result<T, ExprError>;

pub trait ExprDomain {
    type Elem: Clone;

    fn int(&self, n: &BigInt) -> Result<Self::Elem, String>;
    fn var(&self, name: &str) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, String>;
    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem, String>;

    /// `O(var^k)`, for domains of truncated series.
    fn big_o(&self, _k: i64) -> Option<Self::Elem> {
        None
    }
}

pub fn parse_expr<D: ExprDomain>(dom: &D, text: &str) -> ExprResult<D::Elem> {
    let mut p = Parser { dom, s: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.s.len() {
        return Err(p.err("empty expression"));
    }
    let v = p.sum()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err(format!("unexpected '{}'", p.s[p.pos] as char)));
    }
    Ok(v)
}

struct Parser<'a, D> {
    dom: &'a D,
    s: &'a [u8],
    pos: usize,
}

impl<D: ExprDomain> Parser<'_, D> {
    fn err(&self, msg: impl Into<String>) -> ExprError {
        ExprError { offset: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> ExprResult<D::Elem> {
        let mut acc = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == b'+' { self.dom.add(&acc, &rhs) } else { self.dom.sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> ExprResult<D::Elem> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                self.dom.mul(&acc, &rhs)
            } else {
                self.dom.div(&acc, &rhs).map_err(|msg| ExprError { offset: at, msg })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> ExprResult<D::Elem> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.dom.neg(&v));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let e = self.exponent()?;
            return self.dom.pow(&base, e).map_err(|msg| ExprError { offset: at, msg });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> ExprResult<i64> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        let e: i64 = text.parse().map_err(|_| ExprError { offset: start, msg: "exponent too large".into() })?;
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> ExprResult<D::Elem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
                let n: BigInt = text.parse().expect("digits");
                self.dom.int(&n).map_err(|msg| ExprError { offset: start, msg })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                if name == "O" && self.peek() == Some(b'(') {
                    return self.big_o(start);
                }
                self.dom
                    .var(name)
                    .ok_or_else(|| ExprError { offset: start, msg: format!("unknown variable '{name}'") })
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    // O(v^k) or O(v) or O(1)
    fn big_o(&mut self, start: usize) -> ExprResult<D::Elem> {
        self.pos += 1;
        self.skip_ws();
        let k = if self.peek() == Some(b'1') {
            self.pos += 1;
            0
        } else {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
                self.pos += 1;
            }
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.exponent()?
            } else {
                1
            }
        };
        if self.peek() != Some(b')') {
            return Err(self.err("expected ')'"));
        }
        self.pos += 1;
        self.dom
            .big_o(k)
            .ok_or_else(|| ExprError { offset: start, msg: "O(...) terms are only allowed in laurent mode".into() })
    }
}
