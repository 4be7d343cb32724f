//! Recursive-descent parser for the polynomial expression grammar.
//!
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' natural)?
//! atom   := rational | 'i' | 'sqrt2' | variable | '(' expr ')'
//!
//! Rationals are unsigned literals `n` or `n/m`; signs come from the
//! expression level (including one optional leading minus, which lets
//! canonical output round-trip). All errors carry 1-based line and column.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qfield::{FieldElem, Rational};

use super::{MPoly, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokKind {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Nat(BigInt),
    Ident(String),
    Eof,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Plus => "`+`".into(),
            TokKind::Minus => "`-`".into(),
            TokKind::Star => "`*`".into(),
            TokKind::Caret => "`^`".into(),
            TokKind::Slash => "`/`".into(),
            TokKind::LParen => "`(`".into(),
            TokKind::RParen => "`)`".into(),
            TokKind::Nat(n) => format!("number `{n}`"),
            TokKind::Ident(s) => format!("`{s}`"),
            TokKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match ch {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => {
                chars.next();
                bump(ch, &mut line, &mut col);
                let kind = match ch {
                    '+' => TokKind::Plus,
                    '-' => TokKind::Minus,
                    '*' => TokKind::Star,
                    '^' => TokKind::Caret,
                    '/' => TokKind::Slash,
                    '(' => TokKind::LParen,
                    _ => TokKind::RParen,
                };
                toks.push(Tok { kind, line: tline, col: tcol });
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        chars.next();
                        bump(c, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let n = digits.parse::<BigInt>().expect("digit string parses");
                toks.push(Tok { kind: TokKind::Nat(n), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                        bump(c, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                toks.push(Tok { kind: TokKind::Ident(name), line: tline, col: tcol });
            }
            c => {
                return Err(Error::parse(tline, tcol, format!("unexpected character `{c}`")));
            }
        }
    }
    toks.push(Tok { kind: TokKind::Eof, line, col });
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a VarSet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if &self.peek().kind == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let t = self.peek();
        Error::parse(t.line, t.col, msg.into())
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MPoly> {
        let negate = self.eat(&TokKind::Minus);
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(&TokKind::Plus) {
                let t = self.term()?;
                acc += &t;
            } else if self.eat(&TokKind::Minus) {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.factor()?;
        while self.eat(&TokKind::Star) {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if !self.eat(&TokKind::Caret) {
            return Ok(base);
        }
        match self.peek().kind.clone() {
            TokKind::Nat(n) => {
                let tok = self.advance();
                let e = u32::try_from(&n)
                    .ok()
                    .filter(|&e| e <= u16::MAX as u32)
                    .ok_or_else(|| Error::parse(tok.line, tok.col, format!("exponent {n} is too large")))?;
                Ok(base.pow(e))
            }
            TokKind::Minus => Err(self.err_here("negative exponents are not allowed")),
            other => Err(self.err_here(format!(
                "expected a natural number exponent after `^`, found {}",
                other.describe()
            ))),
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.peek().kind.clone() {
            TokKind::Nat(n) => {
                self.advance();
                if self.eat(&TokKind::Slash) {
                    match self.peek().kind.clone() {
                        TokKind::Nat(d) => {
                            let tok = self.advance();
                            if d == BigInt::from(0) {
                                return Err(Error::parse(
                                    tok.line,
                                    tok.col,
                                    "zero denominator in rational literal",
                                ));
                            }
                            Ok(MPoly::constant(
                                self.nvars(),
                                FieldElem::from_rational(Rational::new(n, d)),
                            ))
                        }
                        other => Err(self.err_here(format!(
                            "expected a denominator after `/`, found {}",
                            other.describe()
                        ))),
                    }
                } else {
                    Ok(MPoly::constant(
                        self.nvars(),
                        FieldElem::from_rational(Rational::from_integer(n)),
                    ))
                }
            }
            TokKind::Ident(name) => {
                self.advance();
                match name.as_str() {
                    "i" => Ok(MPoly::constant(self.nvars(), FieldElem::i())),
                    "sqrt2" => Ok(MPoly::constant(self.nvars(), FieldElem::sqrt2())),
                    _ => match self.vars.index_of(&name) {
                        Some(k) => Ok(MPoly::var(self.nvars(), k)),
                        None => {
                            let t = &self.toks[self.pos - 1];
                            Err(Error::parse(
                                t.line,
                                t.col,
                                format!("unknown variable `{name}` (expected one of: {})", self.vars),
                            ))
                        }
                    },
                }
            }
            TokKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                if !self.eat(&TokKind::RParen) {
                    return Err(self.err_here(format!(
                        "expected `)`, found {}",
                        self.peek().kind.describe()
                    )));
                }
                Ok(inner)
            }
            other => Err(self.err_here(format!("expected a term, found {}", other.describe()))),
        }
    }
}

/// Parse an expression over the given variables into a polynomial.
pub fn parse_poly(input: &str, vars: &VarSet) -> Result<MPoly> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, vars };
    let poly = p.expr()?;
    if p.peek().kind != TokKind::Eof {
        return Err(p.err_here(format!(
            "expected end of input, found {}",
            p.peek().kind.describe()
        )));
    }
    Ok(poly)
}

/// Parse a scalar: an expression with no variables in scope.
pub fn parse_scalar(input: &str) -> Result<FieldElem> {
    let vars = VarSet::new::<&str>(&[]).expect("empty variable set is valid");
    let p = parse_poly(input, &vars)?;
    Ok(p.coeff(&super::Monomial::one()))
}

impl std::str::FromStr for FieldElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<FieldElem> {
        parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{rat, ratio};

    fn vars4() -> VarSet {
        VarSet::x(4)
    }

    #[test]
    fn parses_spec_examples() {
        let vars = vars4();
        let p = parse_poly("x0^2*x1 - 3/2*x3", &vars).unwrap();
        assert_eq!(p.format(&vars), "x0^2*x1 - 3/2*x3");

        let q = parse_poly("(1+i)*x0*x1 + sqrt2*x2^3", &vars).unwrap();
        assert_eq!(q.format(&vars), "sqrt2*x2^3 + (1 + i)*x0*x1");

        let w = VarSet::w();
        let lv = parse_poly("w1*(w1 + (-i - sqrt2))", &w).unwrap();
        let expected = MPoly::from_terms(
            3,
            &[
                (&[2, 0, 0], FieldElem::one()),
                (&[1, 0, 0], FieldElem::new(rat(0), rat(-1), rat(-1), rat(0))),
            ],
        );
        assert_eq!(lv, expected);
    }

    #[test]
    fn scalar_parsing_round_trips() {
        for text in ["0", "1", "-4/3 - 4/3*i*sqrt2", "i + i*sqrt2", "1/4 - 19/4*i - sqrt2 - 1/4*i*sqrt2"] {
            let v: FieldElem = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        let v: FieldElem = "2/4".parse().unwrap();
        assert_eq!(v, FieldElem::from_rational(ratio(1, 2)));
    }

    #[test]
    fn rejects_negative_exponent_with_position() {
        let err = parse_poly("x0^-1", &vars4()).unwrap_err();
        assert_eq!(
            err,
            Error::Parse { line: 1, col: 4, msg: "negative exponents are not allowed".into() }
        );
    }

    #[test]
    fn rejects_unknown_variable_with_position() {
        let err = parse_poly("x0 + x5", &vars4()).unwrap_err();
        match err {
            Error::Parse { line: 1, col: 6, msg } => assert!(msg.contains("unknown variable `x5`")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_poly("", &vars4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0 +", &vars4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(x0", &vars4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0 x1", &vars4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/0", &vars4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0 $ x1", &vars4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0^x1", &vars4()), Err(Error::Parse { .. })));
    }

    #[test]
    fn multiline_positions_are_tracked() {
        let err = parse_poly("x0 +\n x5", &vars4()).unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!((line, col), (2, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unary_minus_binds_first_term_only() {
        let vars = vars4();
        let p = parse_poly("-x0^2 + x1", &vars).unwrap();
        let q = parse_poly("x1 - x0^2", &vars).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.format(&vars), "-x0^2 + x1");
    }
}
