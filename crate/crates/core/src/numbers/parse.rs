use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::{NumberError, Scalar};

/// Parse scalar syntax such as `3/4`, `-2`, `0.25`, `1 - sqrt(2)/2`,
/// `1/3 + 2/5*sqrt(7)` or `(sqrt(2) - 1)/2`.
///
/// Columns in errors are 1-based character offsets into `src`.
pub fn parse_scalar(src: &str) -> Result<Scalar, NumberError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(value)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> NumberError {
        NumberError::Parse { message: message.to_string(), column: self.pos + 1 }
    }

    fn lift(&self, column: usize, r: Result<Scalar, NumberError>) -> Result<Scalar, NumberError> {
        r.map_err(|e| match e {
            NumberError::Parse { .. } => e,
            other => NumberError::Parse { message: other.to_string(), column },
        })
    }

    fn expr(&mut self) -> Result<Scalar, NumberError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            let col = self.pos + 1;
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.lift(col, acc.checked_add(&rhs))?;
                }
                Some('-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.lift(col, acc.checked_sub(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, NumberError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            let col = self.pos + 1;
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.lift(col, acc.checked_mul(&rhs))?;
                }
                Some('/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.lift(col, acc.checked_div(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, NumberError> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Scalar, NumberError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name != "sqrt" {
                    self.pos = start;
                    return Err(self.error(&format!("unknown function '{name}'")));
                }
                self.skip_ws();
                self.expect('(')?;
                let arg_col = self.pos + 1;
                let arg = self.expr()?;
                self.expect(')')?;
                let q = match arg.as_rational() {
                    Some(q) => q.clone(),
                    None => {
                        return Err(NumberError::Parse {
                            message: NumberError::IrrationalRadicand.to_string(),
                            column: arg_col,
                        })
                    }
                };
                self.lift(arg_col, Scalar::sqrt_rational(&q))
            }
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), NumberError> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{want}'")))
        }
    }

    fn number(&mut self) -> Result<Scalar, NumberError> {
        let start = self.pos;
        let mut int_digits = String::new();
        let mut frac_digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            int_digits.push(c);
            self.pos += 1;
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                frac_digits.push(c);
                self.pos += 1;
            }
        }
        if int_digits.is_empty() && frac_digits.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let digits = format!("{int_digits}{frac_digits}");
        let numer: BigInt = digits.parse().expect("digit string");
        let denom: BigInt = Pow::pow(BigInt::from(10u32), frac_digits.len() as u32);
        if denom.is_one() {
            return Ok(Scalar::from_rational(BigRational::from_integer(numer)));
        }
        Ok(Scalar::from_rational(BigRational::new(numer, denom)))
    }
}
