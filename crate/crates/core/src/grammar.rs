//! Plain-text syntax for polynomial test functions.
//!
//! ```text
//! poly     := [sign] term { sign term }
//! term     := coeff [ '*' ] factors | coeff | factors
//! coeff    := rational [ 'i' ] | 'i' | '(' [sign] part [ sign part ] ')'
//! part     := rational [ 'i' ] | 'i'
//! rational := digits [ '/' digits ]
//! factors  := factor { [ '*' ] factor }
//! factor   := ( 'z' | 'zb' ) axis '^' digits      axis: '' (n = 1) or '1' | '2' (n = 2)
//! ```
//!
//! Whitespace between tokens is ignored. `zb` stands for ζ̄. A complex
//! coefficient with both parts nonzero is parenthesized, e.g.
//! `(1/2-3/4 i) * z1^2 zb2^1`, because an unparenthesized `+` separates terms.
//! Repeated factors multiply; like terms merge.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::RationalComplex;
use crate::poly::{Dim, MultiIndex, PolyObservable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DimensionMismatch { variable: String, dim: usize },
    NegativeExponent,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::DimensionMismatch { variable, dim } => {
                write!(f, "variable `{variable}` is not valid in dimension {dim}")
            }
            ParseErrorKind::NegativeExponent => write!(f, "negative exponent"),
        }
    }
}

/// Parses `text` into a canonical polynomial in `dim` variables.
pub fn parse_poly(text: &str, dim: Dim) -> Result<PolyObservable, ParseError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    }
    .poly()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: Dim,
}

impl Parser<'_> {
    fn err<T>(&self, offset: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { offset, kind })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        self.err(self.pos, ParseErrorKind::Syntax(msg.into()))
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn poly(mut self) -> Result<PolyObservable, ParseError> {
        let mut out = PolyObservable::zero(self.dim);
        let mut negative = self.sign().unwrap_or(false);
        loop {
            let (coeff, holo, anti) = self.term()?;
            let coeff = if negative { -coeff } else { coeff };
            out.add_term(coeff, holo, anti);
            if self.peek().is_none() {
                return Ok(out);
            }
            negative = match self.sign() {
                Some(neg) => neg,
                None => return self.syntax("expected `+` or `-` between terms"),
            };
        }
    }

    fn term(&mut self) -> Result<(RationalComplex, MultiIndex, MultiIndex), ParseError> {
        let coeff = self.coeff()?;
        let had_coeff = coeff.is_some();
        let mut holo = MultiIndex::zero(self.dim);
        let mut anti = MultiIndex::zero(self.dim);
        let mut factors = 0usize;
        loop {
            let star = self.eat(b'*');
            if star && !had_coeff && factors == 0 {
                return self.syntax("`*` without a coefficient");
            }
            if self.peek() == Some(b'z') {
                let (is_anti, idx) = self.factor()?;
                if is_anti {
                    anti = anti.add(&idx);
                } else {
                    holo = holo.add(&idx);
                }
                factors += 1;
            } else if star {
                return self.syntax("expected a factor after `*`");
            } else {
                break;
            }
        }
        if !had_coeff && factors == 0 {
            return self.syntax("expected a term");
        }
        Ok((coeff.unwrap_or_else(RationalComplex::one), holo, anti))
    }

    fn coeff(&mut self) -> Result<Option<RationalComplex>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut re: Option<BigRational> = None;
                let mut im: Option<BigRational> = None;
                let mut first = true;
                loop {
                    let start = self.pos;
                    let neg = match self.sign() {
                        Some(neg) => neg,
                        None if first => false,
                        None => break,
                    };
                    first = false;
                    let (value, imaginary) = match self.part()? {
                        Some(p) => p,
                        None => return self.syntax("expected a number inside `(...)`"),
                    };
                    let value = if neg { -value } else { value };
                    let slot = if imaginary { &mut im } else { &mut re };
                    if slot.is_some() {
                        return self.err(
                            start,
                            ParseErrorKind::Syntax("repeated part in complex coefficient".into()),
                        );
                    }
                    *slot = Some(value);
                }
                if !self.eat(b')') {
                    return self.syntax("expected `)`");
                }
                Ok(Some(RationalComplex::new(
                    re.unwrap_or_else(BigRational::zero),
                    im.unwrap_or_else(BigRational::zero),
                )))
            }
            _ => Ok(self.part()?.map(|(v, imaginary)| {
                if imaginary {
                    RationalComplex::new(BigRational::zero(), v)
                } else {
                    RationalComplex::real(v)
                }
            })),
        }
    }

    /// `rational ['i'] | 'i'`; returns the value and whether it was imaginary.
    fn part(&mut self) -> Result<Option<(BigRational, bool)>, ParseError> {
        match self.peek() {
            Some(b'i') => {
                self.pos += 1;
                Ok(Some((BigRational::one(), true)))
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.digits()?;
                let value = if self.eat(b'/') {
                    let at = {
                        self.skip_ws();
                        self.pos
                    };
                    if !matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
                        return self.syntax("expected denominator after `/`");
                    }
                    let den = self.digits()?;
                    if den.is_zero() {
                        return self.err(at, ParseErrorKind::Syntax("zero denominator".into()));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                let imaginary = self.eat(b'i');
                Ok(Some((value, imaginary)))
            }
            _ => Ok(None),
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn factor(&mut self) -> Result<(bool, MultiIndex), ParseError> {
        self.skip_ws();
        let start = self.pos;
        debug_assert_eq!(self.src[self.pos], b'z');
        self.pos += 1;
        let is_anti = self.src.get(self.pos) == Some(&b'b');
        if is_anti {
            self.pos += 1;
        }
        let axis = match self.src.get(self.pos) {
            Some(b) if b.is_ascii_digit() => {
                self.pos += 1;
                Some(usize::from(b - b'0'))
            }
            _ => None,
        };
        if matches!(self.src.get(self.pos), Some(b) if b.is_ascii_alphanumeric()) {
            return self.syntax("unknown variable name");
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .to_string();
        let axis = match (self.dim, axis) {
            (Dim::One, None) => 1,
            (Dim::Two, Some(a @ (1 | 2))) => a,
            _ => {
                return self.err(
                    start,
                    ParseErrorKind::DimensionMismatch {
                        variable: name,
                        dim: self.dim.n(),
                    },
                )
            }
        };
        if !self.eat(b'^') {
            return self.syntax("expected `^` after variable");
        }
        if self.peek() == Some(b'-') {
            return self.err(self.pos, ParseErrorKind::NegativeExponent);
        }
        let at = self.pos;
        let exp = self.digits()?;
        let exp: u32 = match u32::try_from(exp) {
            Ok(e) => e,
            Err(_) => return self.err(at, ParseErrorKind::Syntax("exponent too large".into())),
        };
        let mut deg = [0u32; 2];
        deg[axis - 1] = exp;
        let idx = MultiIndex::new(&deg[..self.dim.n()]).expect("valid dimension");
        Ok((is_anti, idx))
    }
}

/// Formats a polynomial in the same grammar [`parse_poly`] accepts.
/// The empty polynomial formats as `0`.
pub fn format_poly(f: &PolyObservable) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, term) in f.terms().enumerate() {
        let factors = format_factors(f.dim(), &term.holo, &term.anti);
        let (negative, coeff) = split_sign(&term.coeff);
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        match (coeff.is_one(), factors.is_empty()) {
            (true, false) => out.push_str(&factors),
            (_, true) => out.push_str(&format_coeff(&coeff)),
            (false, false) => {
                let _ = write!(out, "{} * {}", format_coeff(&coeff), factors);
            }
        }
    }
    out
}

/// Pulls an overall sign out of real or purely imaginary coefficients.
fn split_sign(c: &RationalComplex) -> (bool, RationalComplex) {
    let negative = if c.re().is_zero() {
        c.im().is_negative()
    } else {
        c.im().is_zero() && c.re().is_negative()
    };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_imaginary(r: &BigRational) -> String {
    if r.is_one() {
        "i".to_string()
    } else {
        format!("{} i", format_rational(r))
    }
}

fn format_coeff(c: &RationalComplex) -> String {
    match (c.re().is_zero(), c.im().is_zero()) {
        (_, true) => format_rational(c.re()),
        (true, false) => format_imaginary(c.im()),
        (false, false) => {
            let sign = if c.im().is_negative() { '-' } else { '+' };
            format!(
                "({}{}{})",
                format_rational(c.re()),
                sign,
                format_imaginary(&c.im().abs())
            )
        }
    }
}

fn format_factors(dim: Dim, holo: &MultiIndex, anti: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (base, idx) in [("z", holo), ("zb", anti)] {
        for (j, &d) in idx.degrees().iter().enumerate() {
            if d == 0 {
                continue;
            }
            match dim {
                Dim::One => parts.push(format!("{base}^{d}")),
                Dim::Two => parts.push(format!("{base}{}^{d}", j + 1)),
            }
        }
    }
    parts.join(" ")
}

impl fmt::Display for PolyObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}
