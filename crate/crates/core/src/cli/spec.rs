//! Parser for function specs.
//!
//! ```text
//! spec    := "identity" | "koebe" | "halfplane"
//!          | "poly-p:" list | "poly-f:" list | "omega:" list
//! list    := complex ("," complex)*
//! complex := real [("+" | "-") unsigned "i"]
//! real    := ["-"] unsigned
//! unsigned:= digit+ ["." digit+]
//! ```

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::series::{NamedFamily, Normalization, PowerSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset of the first offending byte.
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: expected one of {}", self.offset, self.expected.join(", "))
    }
}

const KEYWORDS: [&str; 6] = ["identity", "koebe", "halfplane", "poly-p", "poly-f", "omega"];

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            expected,
        })
    }

    fn digits(&mut self) -> Result<(), ParseError> {
        if !self.peek().is_some_and(|b| b.is_ascii_digit()) {
            return self.fail(vec!["digit"]);
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        Ok(())
    }

    fn unsigned(&mut self) -> Result<(), ParseError> {
        self.digits()?;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            self.digits()?;
        }
        Ok(())
    }

    fn number(&mut self, signed: bool) -> Result<f64, ParseError> {
        let start = self.pos;
        if signed && self.peek() == Some(b'-') {
            self.pos += 1;
        } else if !self.peek().is_some_and(|b| b.is_ascii_digit()) {
            return self.fail(if signed { vec!["digit", "'-'"] } else { vec!["digit"] });
        }
        self.unsigned()?;
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("validated decimal"))
    }

    fn complex(&mut self) -> Result<Complex64, ParseError> {
        let re = self.number(true)?;
        let sign = match self.peek() {
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            _ => return Ok(Complex64::new(re, 0.0)),
        };
        self.pos += 1;
        let im = self.number(false)?;
        if self.peek() != Some(b'i') {
            return self.fail(vec!["'i'"]);
        }
        self.pos += 1;
        Ok(Complex64::new(re, sign * im))
    }

    fn list(&mut self) -> Result<Vec<Complex64>, ParseError> {
        let mut out = vec![self.complex()?];
        loop {
            match self.peek() {
                None => return Ok(out),
                Some(b',') => {
                    self.pos += 1;
                    out.push(self.complex()?);
                }
                Some(_) => return self.fail(vec!["','", "'+'", "'-'", "end of input"]),
            }
        }
    }
}

/// Parses a function spec. Named infinite families expand to `order`.
pub fn parse_function(text: &str, order: usize) -> Result<PowerSeries, ParseError> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    while cur.peek().is_some_and(|b| b.is_ascii_lowercase() || b == b'-') {
        cur.pos += 1;
    }
    let word = &text[..cur.pos];
    let Some(keyword) = KEYWORDS.into_iter().find(|k| *k == word) else {
        // Point at the first byte where no keyword can continue.
        let matched = KEYWORDS
            .iter()
            .map(|k| k.bytes().zip(text.bytes()).take_while(|(a, b)| a == b).count())
            .max()
            .unwrap_or(0);
        return Err(ParseError {
            offset: matched,
            expected: KEYWORDS.to_vec(),
        });
    };
    let tail = |cur: &mut Cursor| -> Result<Vec<Complex64>, ParseError> {
        if cur.peek() != Some(b':') {
            return cur.fail(vec!["':'"]);
        }
        cur.pos += 1;
        cur.list()
    };
    let series = match keyword {
        "identity" | "koebe" | "halfplane" => {
            if cur.peek().is_some() {
                return cur.fail(vec!["end of input"]);
            }
            let family = match keyword {
                "identity" => NamedFamily::Identity,
                "koebe" => NamedFamily::Koebe,
                _ => NamedFamily::HalfPlaneP,
            };
            PowerSeries::family(&family, order)
        }
        "poly-p" => PowerSeries::class_p(&tail(&mut cur)?),
        "poly-f" => PowerSeries::class_a(&tail(&mut cur)?),
        _ => PowerSeries::schwarz(&tail(&mut cur)?),
    };
    Ok(series)
}

/// Normalization a spec prefix demands; omega specs are RAW with `c_0 = 0`.
pub fn expected_normalization(text: &str) -> Option<Normalization> {
    match text.split(':').next()? {
        "identity" | "koebe" | "poly-f" => Some(Normalization::ClassA),
        "halfplane" | "poly-p" => Some(Normalization::ClassP),
        "omega" => Some(Normalization::Raw),
        _ => None,
    }
}
