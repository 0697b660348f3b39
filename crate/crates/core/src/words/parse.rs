use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Byte cursor shared by the word, element and spec-string parsers.
pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos, msg)
    }

    pub fn ident(&mut self) -> Result<&'a str> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                self.bump();
            }
            _ => return Err(self.error("expected a generator name")),
        }
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.bump();
        }
        Ok(&self.text[start..self.pos])
    }

    pub fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(&self.text[start..self.pos])
    }

    pub fn signed_int(&mut self) -> Result<i64> {
        let start = self.pos;
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let digits = self.digits()?;
        let v: i64 = digits
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// Unsigned rational: `p`, `p/q` or a finite decimal `p.q`.
    pub fn rational(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let int_part = self.digits()?;
        let mut value = BigRational::from_integer(int_part.parse::<BigInt>().unwrap());
        if self.eat('/') {
            let den: BigInt = self.digits()?.parse().unwrap();
            if den.is_zero() {
                return Err(Error::parse(start, "zero denominator"));
            }
            value /= BigRational::from_integer(den);
        } else if self.peek() == Some('.')
            && self.text[self.pos + 1..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_digit())
        {
            self.bump();
            let frac = self.digits()?;
            let num: BigInt = format!("{int_part}{frac}").parse().unwrap();
            let den = num_traits::pow(BigInt::from(10), frac.len());
            value = BigRational::new(num, den);
        }
        Ok(value)
    }
}

/// Parses a signed rational such as `-3/4`, `2` or `0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let mut c = Cursor::new(text.trim());
    let neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    let v = c.rational()?;
    if !c.at_end() {
        return Err(c.error("trailing characters after rational"));
    }
    Ok(if neg { -v } else { v })
}
