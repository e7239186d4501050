//! Multivector expression parser.
//!
//! Grammar:
//!   expr  := sign? term (('+'|'-') term)*
//!   term  := number ('*'? blade)? | blade
//!   blade := 'e' digit+            (one index per digit, for n <= 9)
//!          | 'e[' int (',' int)* ']'
//! Numbers are plain decimals (dot separator, no exponent — 'e' always
//! starts a blade). Unordered indices normalize with the permutation sign,
//! so e21 parses as -e12; duplicate or out-of-range indices are rejected.

use std::fmt;

use clifun_core::algebra::{Blade, Multivector, Signature};

/// One parsed term: a coefficient and the blade indices it multiplies.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub indices: Vec<usize>,
    /// Byte offset of the term in the source, for diagnostics.
    pub pos: usize,
}

/// Parsed expression: source plus term list.
#[derive(Clone, Debug)]
pub struct MvExpression {
    pub source: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.pos)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    /// Message plus a caret line pointing into the source.
    pub fn annotated(&self, source: &str) -> String {
        let caret = " ".repeat(self.pos);
        format!("error: {self}\n  {source}\n  {caret}^")
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(
            self.peek(),
            Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')
        ) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac_start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.error("expected digits after decimal point"));
            }
        }
        if self.pos == start {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| ParseError {
            pos: start,
            message: format!("invalid number `{text}`"),
        })
    }

    fn integer(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an index"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<usize>()
            .map_err(|_| ParseError {
                pos: start,
                message: "index out of range".into(),
            })
    }

    /// Blade after the leading 'e' has been consumed.
    fn blade_indices(&mut self) -> Result<Vec<usize>, ParseError> {
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let mut indices = Vec::new();
            loop {
                self.skip_ws();
                indices.push(self.integer()?);
                self.skip_ws();
                match self.bump() {
                    Some(b',') => continue,
                    Some(b']') => break,
                    _ => {
                        return Err(ParseError {
                            pos: self.pos.saturating_sub(1),
                            message: "expected `,` or `]` in blade index list".into(),
                        })
                    }
                }
            }
            Ok(indices)
        } else {
            let start = self.pos;
            let mut indices = Vec::new();
            while let Some(c @ b'0'..=b'9') = self.peek() {
                indices.push((c - b'0') as usize);
                self.pos += 1;
            }
            if indices.is_empty() {
                return Err(ParseError {
                    pos: start,
                    message: "expected blade indices after `e`".into(),
                });
            }
            Ok(indices)
        }
    }
}

/// Parse the term list without resolving blades against a signature.
pub fn parse_expression(source: &str) -> Result<MvExpression, ParseError> {
    let mut scanner = Scanner::new(source);
    let mut terms = Vec::new();
    scanner.skip_ws();
    if scanner.peek().is_none() {
        return Err(scanner.error("empty expression"));
    }
    let mut sign = 1.0f64;
    // optional leading sign
    match scanner.peek() {
        Some(b'+') => {
            scanner.pos += 1;
        }
        Some(b'-') => {
            sign = -1.0;
            scanner.pos += 1;
        }
        _ => {}
    }
    loop {
        scanner.skip_ws();
        let pos = scanner.pos;
        let (coefficient, has_number) = match scanner.peek() {
            Some(b'0'..=b'9') | Some(b'.') => (scanner.number()?, true),
            _ => (1.0, false),
        };
        if has_number {
            scanner.skip_ws();
            if scanner.peek() == Some(b'*') {
                scanner.pos += 1;
                scanner.skip_ws();
            }
        }
        let indices = if scanner.peek() == Some(b'e') {
            scanner.pos += 1;
            scanner.blade_indices()?
        } else if has_number {
            Vec::new()
        } else {
            return Err(scanner.error("expected a number or a blade"));
        };
        terms.push(Term {
            coefficient: sign * coefficient,
            indices,
            pos,
        });
        scanner.skip_ws();
        match scanner.bump() {
            None => break,
            Some(b'+') => sign = 1.0,
            Some(b'-') => sign = -1.0,
            Some(c) => {
                return Err(ParseError {
                    pos: scanner.pos - 1,
                    message: format!("unexpected character `{}`", c as char),
                })
            }
        }
    }
    Ok(MvExpression {
        source: source.to_string(),
        terms,
    })
}

/// Parse an expression and resolve it into a multivector of the given algebra.
pub fn parse_mv(source: &str, sig: Signature) -> Result<Multivector<f64>, ParseError> {
    let expr = parse_expression(source)?;
    let mut terms: Vec<(usize, f64)> = Vec::with_capacity(expr.terms.len());
    for term in &expr.terms {
        let (blade_sign, blade) =
            Blade::from_indices(sig, &term.indices).map_err(|e| ParseError {
                pos: term.pos,
                message: e.to_string(),
            })?;
        terms.push((blade.mask(), blade_sign as f64 * term.coefficient));
    }
    Ok(Multivector::from_terms(sig, &terms).expect("masks validated"))
}
