//! Text grammar for polynomials:
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := coeff? ('*'? factor)*
//! factor := var ('^' uint)?
//! coeff  := uint
//! ```
//!
//! Whitespace is insignificant. Variables are matched longest-first against the
//! ring's names, so `xy` reads as `x*y` in a ring with variables `x, y`.

use super::monomial::Monomial;
use super::poly::Polynomial;
use super::ring::Ring;
use crate::error::{Error, Result};

pub fn parse_polynomial(text: &str, ring: &Ring) -> Result<Polynomial> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, ring };
    parser.expr()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return self.syntax("empty expression"),
            _ => false,
        };
        loop {
            let term = self.term()?;
            acc = if negative { acc.sub(&term) } else { acc.add(&term) };
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(c) => return self.syntax(format!("unexpected character `{}`", c as char)),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let k = self.ring.field();
        let mut coeff = 1u32;
        let mut exps = vec![0u32; self.ring.nvars()];
        let mut empty = true;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = self.uint_mod_p()?;
            empty = false;
        }
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) if is_ident_start(c) => {}
                        _ => return self.syntax("expected a variable after `*`"),
                    }
                }
                Some(c) if is_ident_start(c) => {}
                _ => break,
            }
            let (index, exp) = self.factor()?;
            exps[index] = exps[index]
                .checked_add(exp)
                .ok_or(Error::Syntax { offset: self.pos, message: "exponent overflow".into() })?;
            empty = false;
        }
        if empty {
            return self.syntax("expected a term");
        }
        let c = k.reduce_u64(coeff as u64);
        Ok(Polynomial::monomial(self.ring, Monomial::from_exponents(&exps), c as i64))
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        let start = self.pos;
        let rest = &self.src[start..];
        let best = self
            .ring
            .var_names()
            .iter()
            .enumerate()
            .filter(|(_, name)| rest.starts_with(name.as_bytes()))
            .max_by_key(|(_, name)| name.len());
        let Some((index, name)) = best else {
            let len = rest.iter().take_while(|c| c.is_ascii_alphanumeric() || **c == b'_').count();
            let name = String::from_utf8_lossy(&rest[..len]).into_owned();
            return Err(Error::UnknownVariable { name, offset: start });
        };
        self.pos += name.len();
        if self.peek() != Some(b'^') {
            return Ok((index, 1));
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => Err(Error::NegativeExponent { offset: self.pos }),
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                if self.peek() == Some(b'-') {
                    Err(Error::NegativeExponent { offset: open })
                } else {
                    self.pos = open;
                    self.syntax("parentheses are not supported")
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let e = self.uint()?;
                let e = u32::try_from(e).map_err(|_| Error::Syntax { offset: start, message: "exponent too large".into() })?;
                Ok((index, e))
            }
            _ => self.syntax("expected an exponent after `^`"),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as u64))
                .ok_or(Error::Syntax { offset: start, message: "integer too large".into() })?;
            self.pos += 1;
        }
        Ok(v)
    }

    fn uint_mod_p(&mut self) -> Result<u32> {
        let p = self.ring.p() as u64;
        let mut v = 0u64;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = (v * 10 + (c - b'0') as u64) % p;
            self.pos += 1;
        }
        Ok(v as u32)
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}
