//! Text form of elements: sums of products of rationals, q^k and generator powers.

use super::element::Element;
use super::EngineError;
use crate::exactnum::{BigRational, QLaurent};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a [String],
}

fn err(msg: String) -> EngineError {
    EngineError::Parse(msg)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64, EngineError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| err(format!("expected integer at byte {start}")))
    }

    fn exponent(&mut self) -> Result<i64, EngineError> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        if self.eat(b'(') {
            let e = self.int()?;
            if !self.eat(b')') {
                return Err(err("unclosed exponent".into()));
            }
            Ok(e)
        } else {
            self.int()
        }
    }

    fn expr(&mut self) -> Result<Element, EngineError> {
        let mut acc = Element::zero();
        let mut sign = 1;
        if self.eat(b'-') {
            sign = -1;
        } else {
            self.eat(b'+');
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element, EngineError> {
        let mut acc = Element::one(self.names.len());
        loop {
            let f = self.factor()?;
            acc = ordered_product(&acc, &f)?;
            if !self.eat(b'*') {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Element, EngineError> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(format!("unclosed parenthesis at byte {}", self.pos)));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                let den = if self.eat(b'/') { self.int()? } else { 1 };
                if den == 0 {
                    return Err(err("zero denominator".into()));
                }
                Ok(Element::scalar(n, QLaurent::monomial(BigRational::new(num.into(), den.into()), 0)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let e = self.exponent()?;
                if word == "q" {
                    return Ok(Element::scalar(n, QLaurent::q_pow(e)));
                }
                let g = self.names.iter().position(|x| x == word).ok_or_else(|| err(format!("unknown generator '{word}'")))?;
                let mut m = vec![0; n];
                m[g] = i32::try_from(e).map_err(|_| err("exponent out of range".into()))?;
                Ok(Element::monomial(m, QLaurent::one()))
            }
            other => Err(err(format!("unexpected {:?} at byte {}", other.map(char::from), self.pos))),
        }
    }
}

/// Product of factors that must already appear in generator order.
fn ordered_product(u: &Element, v: &Element) -> Result<Element, EngineError> {
    let mut out = Element::zero();
    for (a, x) in u.terms() {
        for (b, y) in v.terms() {
            let last = a.iter().rposition(|&e| e != 0);
            let first = b.iter().position(|&e| e != 0);
            if let (Some(l), Some(f)) = (last, first) {
                if l > f {
                    return Err(err("product is not in generator order".into()));
                }
            }
            out.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), &(x * y));
        }
    }
    Ok(out)
}

/// Parses a normal-ordered element such as `(1-q^2)*x2*x3 + 1/2`.
pub fn parse_element(text: &str, names: &[String]) -> Result<Element, EngineError> {
    if names.iter().any(|n| n == "q") {
        return Err(err("generator name 'q' is reserved".into()));
    }
    let mut p = Parser { s: text.as_bytes(), pos: 0, names };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at byte {}", p.pos)));
    }
    Ok(e)
}
