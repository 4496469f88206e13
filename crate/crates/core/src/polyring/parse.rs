//! Text grammar for polynomials:
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coeff? ('*'? factor)*
//! factor := var ('^' uint)?
//! coeff  := uint
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line. Over an extension field the identifier `t` is the field generator.

use std::sync::Arc;

use super::{Monomial, PolyError, PolyRing, Polynomial};
use crate::field::FieldElement;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

pub fn parse_polynomial(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    p.poly()
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        let field = self.ring.field().clone();
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return Err(self.err("empty polynomial")),
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if negate { field.neg(c) } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(c) => return Err(self.err(format!("unexpected character `{}`", c as char))),
            }
            self.pos += 1;
        }
        Ok(Polynomial::from_terms(self.ring, terms))
    }

    fn term(&mut self) -> Result<(Monomial, FieldElement), PolyError> {
        let field = self.ring.field().clone();
        let mut coeff = FieldElement::ONE;
        let mut mono = Monomial::one(self.ring.nvars());
        let mut seen = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = self.coefficient();
            seen = true;
        }
        loop {
            let start = self.pos;
            let starred = if self.peek() == Some(b'*') {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let at = self.pos;
                    let name = self.identifier();
                    let exp = self.exponent()?;
                    if name == "t" && field.degree() > 1 {
                        let t = field.generator().expect("extension field");
                        coeff = field.mul(coeff, field.pow(t, exp as u64));
                    } else {
                        let i = self
                            .ring
                            .var_index(&name)
                            .ok_or(PolyError::UnknownVariable { name, pos: at })?;
                        let e = &mut mono.exponents_mut()[i];
                        *e = e.checked_add(exp).ok_or(PolyError::ExponentOverflow { pos: at })?;
                    }
                    seen = true;
                }
                _ if starred => return Err(self.err("expected a variable after `*`")),
                _ => {
                    self.pos = start;
                    break;
                }
            }
        }
        if !seen {
            return Err(self.err("expected a term"));
        }
        Ok((mono, coeff))
    }

    fn coefficient(&mut self) -> FieldElement {
        let field = self.ring.field();
        let p = field.characteristic() as u64;
        let mut v = 0u64;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = (v * 10 + (c - b'0') as u64) % p;
            self.pos += 1;
        }
        field.from_int(v as i64)
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an exponent after `^`"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse::<u32>()
            .map_err(|_| PolyError::ExponentOverflow { pos: start })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn ring(p: u32, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(Arc::new(Field::prime(p).unwrap()), vars).unwrap()
    }

    #[test]
    fn reduces_coefficients_mod_p() {
        let r = ring(3, &["x", "y", "u", "v"]);
        let f = parse_polynomial("u^2 - 2*x^2", &r).unwrap();
        let g = parse_polynomial("u^2 + x^2", &r).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.to_string(), "x^2 + u^2");
    }

    #[test]
    fn collects_terms() {
        let r = ring(3, &["x", "y"]);
        assert_eq!(parse_polynomial("x*y + y*x", &r).unwrap().to_string(), "2*x*y");
        assert_eq!(parse_polynomial("x y + 2xy", &r).unwrap_err(), PolyError::UnknownVariable { name: "xy".into(), pos: 7 });
        assert_eq!(parse_polynomial("3x^2 - 3", &r).unwrap().to_string(), "0");
        assert_eq!(parse_polynomial("-x # comment\n + y", &r).unwrap().to_string(), "2*x + y");
    }

    #[test]
    fn errors() {
        let r = ring(3, &["x", "y"]);
        assert_eq!(parse_polynomial("x + w", &r).unwrap_err(), PolyError::UnknownVariable { name: "w".into(), pos: 4 });
        assert!(matches!(parse_polynomial("x^99999999999", &r), Err(PolyError::ExponentOverflow { .. })));
        assert!(matches!(parse_polynomial("x^4000000000*x^4000000000", &r), Err(PolyError::ExponentOverflow { .. })));
        assert!(matches!(parse_polynomial("x +", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x ^", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x * 2", &r), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_polynomial("(x)", &r), Err(PolyError::Syntax { pos: 0, .. })));
    }
}
