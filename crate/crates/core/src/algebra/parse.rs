//! Polynomial text parser.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expression  := ['+'|'-'] term (('+'|'-') term)*
//! term        := factor ('*' factor)*
//! factor      := coefficient | varname ['^' int] | '(' expression ')' ['^' int]
//! coefficient := integer ['/' positive-integer]
//! ```
//!
//! Plain inputs such as `2*x1^2*x2 - 1/3*x3^3` use only the coefficient and
//! variable forms; parentheses allow product forms like `w*(2*x + y)*(x - y)`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::polynomial::Polynomial;
use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { position: usize, name: String },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { position, .. } | ParseError::UnknownVariable { position, .. } => {
                Some(*position)
            }
            ParseError::DuplicateVariable(_) => None,
        }
    }
}

/// Parses `text` over the declared variable order.
pub fn parse_polynomial<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Polynomial, ParseError> {
    let names: Vec<&str> = vars.iter().map(|s| s.as_ref()).collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(ParseError::DuplicateVariable(n.to_string()));
        }
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        names: &names,
    };
    let poly = p.expression()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expression(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(ParseError::Syntax {
                            position: at,
                            message: "zero denominator".into(),
                        });
                    }
                    Ok(Polynomial::constant(self.nvars(), Rational::new(num, den)))
                } else {
                    Ok(Polynomial::constant(self.nvars(), Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let idx = self.names.iter().position(|n| *n == name).ok_or_else(|| {
                    ParseError::UnknownVariable {
                        position: start,
                        name: name.to_string(),
                    }
                })?;
                let base = Polynomial::var(self.nvars(), idx);
                self.power(base)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                self.power(inner)
            }
            Some(_) => Err(self.error("expected a coefficient, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn power(&mut self, base: Polynomial) -> Result<Polynomial, ParseError> {
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?;
        let e: u32 = u32::try_from(&e)
            .ok()
            .filter(|&e| e >= 1)
            .ok_or(ParseError::Syntax {
                position: at,
                message: "exponent must be a positive integer".into(),
            })?;
        if e == 1 {
            return Ok(base);
        }
        Ok(base.pow(e))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse::<BigInt>().expect("ascii digits"))
    }
}
