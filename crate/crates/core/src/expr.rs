//! Text forms of elements: `[[a,b],[c,d]]` and `(ax+b)/(cx+d)`.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! element := matrix | lft
//! matrix  := "[" "[" sint "," sint "]" "," "[" sint "," sint "]" "]"
//! lft     := side ( "/" side )?
//! side    := sign? "(" linear ")" | linear
//! linear  := sign? term ( sign term )*
//! term    := int "*"? "x" | int | "x"
//! sint    := sign? int
//! sign    := "+" | "-"
//! ```
//!
//! A side that is not parenthesized must be a single term whenever a `/`
//! is involved, so `x+1/x` is rejected rather than guessed at.

use std::fmt;

use thiserror::Error;

use crate::matrix::{ArithmeticError, ProjectiveMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    Matrix,
    #[default]
    Lft,
}

/// Parsed element together with the text it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementExpr {
    pub source: String,
    pub element: ProjectiveMatrix,
}

impl ElementExpr {
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        Ok(ElementExpr {
            source: source.to_string(),
            element: parse_element(source)?,
        })
    }
}

pub fn parse_element(text: &str) -> Result<ProjectiveMatrix, ExprError> {
    let [a, b, c, d] = Parser::new(text).element()?;
    Ok(ProjectiveMatrix::from_i128(a, b, c, d)?)
}

/// `p·x + q`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Linear {
    x: i128,
    constant: i128,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(&format!("'{}'", byte as char))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.error("end of input"),
        }
    }

    fn element(&mut self) -> Result<[i128; 4], ParseError> {
        match self.peek() {
            Some(b'[') => self.matrix(),
            None => self.error("an element"),
            _ => self.lft(),
        }
    }

    fn matrix(&mut self) -> Result<[i128; 4], ParseError> {
        self.expect(b'[')?;
        self.expect(b'[')?;
        let a = self.signed_int()?;
        self.expect(b',')?;
        let b = self.signed_int()?;
        self.expect(b']')?;
        self.expect(b',')?;
        self.expect(b'[')?;
        let c = self.signed_int()?;
        self.expect(b',')?;
        let d = self.signed_int()?;
        self.expect(b']')?;
        self.expect(b']')?;
        self.expect_end()?;
        Ok([a, b, c, d])
    }

    /// Consumes an optional sign; returns -1 or 1.
    fn sign(&mut self) -> i128 {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        }
    }

    fn signed_int(&mut self) -> Result<i128, ParseError> {
        let s = self.sign();
        match self.unsigned_int()? {
            Some(n) => Ok(s * n as i128),
            None => self.error("an integer"),
        }
    }

    fn unsigned_int(&mut self) -> Result<Option<u64>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .ok_or(ParseError {
                    position: start,
                    expected: "a 64-bit integer".into(),
                })?;
            self.pos += 1;
        }
        Ok((self.pos > start).then_some(value))
    }

    /// A term scaled by `sign`.
    fn term(&mut self, sign: i128) -> Result<Linear, ParseError> {
        match self.unsigned_int()? {
            Some(n) => {
                let starred = self.peek() == Some(b'*');
                if starred {
                    self.pos += 1;
                }
                if self.peek() == Some(b'x') {
                    self.pos += 1;
                    Ok(Linear {
                        x: sign * n as i128,
                        constant: 0,
                    })
                } else if starred {
                    self.error("'x'")
                } else {
                    Ok(Linear {
                        x: 0,
                        constant: sign * n as i128,
                    })
                }
            }
            None if self.peek() == Some(b'x') => {
                self.pos += 1;
                Ok(Linear {
                    x: sign,
                    constant: 0,
                })
            }
            None => self.error("an integer or 'x'"),
        }
    }

    /// `sign? term (sign term)*`, stopping after one term if `single`.
    fn linear(&mut self, single: bool) -> Result<(Linear, usize), ParseError> {
        let s = self.sign();
        let mut acc = self.term(s)?;
        let mut terms = 1;
        if single {
            return Ok((acc, terms));
        }
        while let Some(b'+' | b'-') = self.peek() {
            let start = self.pos;
            let s = self.sign();
            let t = self.term(s)?;
            // Each term is below 2^64 in magnitude, so sums only
            // overflow after ~2^63 terms.
            acc = Linear {
                x: acc.x.checked_add(t.x).ok_or(ParseError {
                    position: start,
                    expected: "a smaller coefficient".into(),
                })?,
                constant: acc.constant.checked_add(t.constant).ok_or(ParseError {
                    position: start,
                    expected: "a smaller coefficient".into(),
                })?,
            };
            terms += 1;
        }
        Ok((acc, terms))
    }

    /// Returns the side and whether it was a bare multi-term sum.
    fn side(&mut self, single: bool) -> Result<(Linear, bool), ParseError> {
        let save = self.pos;
        let s = self.sign();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let (inner, _) = self.linear(false)?;
            self.expect(b')')?;
            return Ok((
                Linear {
                    x: s * inner.x,
                    constant: s * inner.constant,
                },
                false,
            ));
        }
        self.pos = save;
        let (lin, terms) = self.linear(single)?;
        Ok((lin, terms > 1))
    }

    fn lft(&mut self) -> Result<[i128; 4], ParseError> {
        let (num, bare_sum) = self.side(false)?;
        let den = if self.peek() == Some(b'/') {
            if bare_sum {
                return self.error("end of input (parenthesize a numerator with several terms)");
            }
            self.pos += 1;
            let (den, _) = self.side(true)?;
            den
        } else {
            Linear { x: 0, constant: 1 }
        };
        self.expect_end()?;
        Ok([num.x, num.constant, den.x, den.constant])
    }
}

pub fn render_element(m: &ProjectiveMatrix, style: Style) -> String {
    match style {
        Style::Matrix => m.to_string(),
        Style::Lft => render_lft(m),
    }
}

/// One spelling per element: the denominator's leading coefficient is made
/// positive, a denominator of 1 is dropped, and two-term sides are
/// parenthesized when a `/` is present.
fn render_lft(m: &ProjectiveMatrix) -> String {
    let [a, b, c, d] = m.entries().map(|e| e as i128);
    let lead = if c != 0 { c } else { d };
    let s = if lead < 0 { -1 } else { 1 };
    let num = (s * a, s * b);
    let den = (s * c, s * d);
    if den == (0, 1) {
        return linear_text(num.0, num.1);
    }
    format!("{}/{}", side_text(num.0, num.1), side_text(den.0, den.1))
}

fn side_text(x: i128, constant: i128) -> String {
    let t = linear_text(x, constant);
    if x != 0 && constant != 0 {
        format!("({t})")
    } else {
        t
    }
}

fn linear_text(x: i128, constant: i128) -> String {
    let mut out = String::new();
    match x {
        0 => {}
        1 => out.push('x'),
        -1 => out.push_str("-x"),
        k => out.push_str(&format!("{k}x")),
    }
    if x == 0 {
        out.push_str(&constant.to_string());
    } else if constant > 0 {
        out.push_str(&format!("+{constant}"));
    } else if constant < 0 {
        out.push_str(&format!("-{}", constant.unsigned_abs()));
    }
    out
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Matrix => "matrix",
            Style::Lft => "lft",
        })
    }
}
