use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ast::{signature, Expr};
use crate::number::{GaussianRational, QExponent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownFunction(String),
    Arity { name: String, expected: String, found: usize },
    Argument { name: String, index: usize, wanted: &'static str },
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::UnknownFunction(n) => write!(f, "unknown function `{n}`"),
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "`{name}` takes {expected} arguments, got {found}")
            }
            ParseErrorKind::Argument { name, index, wanted } => {
                write!(f, "argument {} of `{name}` must be {wanted}", index + 1)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Rational(p, r) => write!(f, "`{p}/{r}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, line0: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Spanned> = Vec::new();
    let (mut i, mut line, mut col) = (0, line0, 1);
    let digits = |from: usize| chars[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = col;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        let (tok, len) = if let Some(t) = single {
            (t, 1)
        } else if c.is_ascii_digit() {
            let n = digits(i);
            let p: BigInt = chars[i..i + n].iter().collect::<String>().parse().expect("digits");
            // `p/r` with no spaces is one literal, except right after `/` or `^`
            let glued = !matches!(out.last().map(|s| &s.tok), Some(Tok::Slash | Tok::Caret));
            if glued && chars.get(i + n) == Some(&'/') && chars.get(i + n + 1).is_some_and(|d| d.is_ascii_digit()) {
                let m = digits(i + n + 1);
                let r: BigInt = chars[i + n + 1..i + n + 1 + m].iter().collect::<String>().parse().expect("digits");
                if r == BigInt::from(0) {
                    return Err(ParseError {
                        kind: ParseErrorKind::Syntax { expected: vec!["nonzero denominator".into()], found: "`0`".into() },
                        line,
                        col: start + n + 1,
                    });
                }
                (Tok::Rational(p, r), n + 1 + m)
            } else {
                (Tok::Int(p), n)
            }
        } else if c.is_alphabetic() || c == '_' {
            let n = chars[i..].iter().take_while(|c| c.is_alphanumeric() || **c == '_').count();
            (Tok::Ident(chars[i..i + n].iter().collect()), n)
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax { expected: vec!["an expression".into()], found: format!("`{c}`") },
                line,
                col,
            });
        };
        out.push(Spanned { tok, line, col: start });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    bindings: &'a HashMap<String, Expr>,
}

fn syntax(s: &Spanned, expected: &[&str]) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax { expected: expected.iter().map(|e| e.to_string()).collect(), found: s.tok.to_string() },
        line: s.line,
        col: s.col,
    }
}

const PRIMARY: &[&str] = &["a number", "`q`", "`i`", "a function call", "`(`"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.here(), &[what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                // juxtaposition
                Tok::Int(_) | Tok::Rational(..) | Tok::Ident(_) | Tok::LParen => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(match self.unary()? {
                Expr::Lit(c) => Expr::Lit(-c),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let bare_q = matches!(self.peek(), Tok::Ident(s) if s == "q");
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.pos;
        let e = self.exponent()?;
        if bare_q {
            return Ok(Expr::QPow(e));
        }
        match e.to_i64() {
            Some(n) if e.is_integer() => Ok(Expr::Pow(Box::new(base), n)),
            _ => Err(syntax(&self.toks[at], &["an integer exponent"])),
        }
    }

    /// `n`, `-n`, or a parenthesised signed integer or rational.
    fn exponent(&mut self) -> Result<QExponent, ParseError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let at = self.pos;
        let mut r = match self.bump() {
            Tok::Int(n) => BigRational::from_integer(n),
            Tok::Rational(p, d) if paren => BigRational::new(p, d),
            _ => {
                self.pos = at;
                return Err(syntax(self.here(), if paren { &["an integer", "a rational"] } else { &["an integer", "`(`"] }));
            }
        };
        if neg {
            r = -r;
        }
        if paren {
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(QExponent::from_rational(r))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Lit(GaussianRational::real(BigRational::from_integer(n)))),
            Tok::Rational(p, r) => Ok(Expr::Lit(GaussianRational::real(BigRational::new(p, r)))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    return self.call(name, start);
                }
                if let Some(e) = self.bindings.get(&name) {
                    return Ok(e.clone());
                }
                match name.as_str() {
                    "q" => Ok(Expr::QPow(QExponent::from_int(1))),
                    "i" => Ok(Expr::Lit(GaussianRational::i())),
                    _ => Err(ParseError {
                        kind: ParseErrorKind::UnknownFunction(name),
                        line: self.toks[start].line,
                        col: self.toks[start].col,
                    }),
                }
            }
            _ => {
                self.pos = start;
                Err(syntax(self.here(), PRIMARY))
            }
        }
    }

    fn call(&mut self, name: String, start: usize) -> Result<Expr, ParseError> {
        let at = |p: &Parser<'_>, i: usize, kind: ParseErrorKind| ParseError { kind, line: p.toks[i].line, col: p.toks[i].col };
        let sig = signature(&name).ok_or_else(|| at(self, start, ParseErrorKind::UnknownFunction(name.clone())))?;
        self.bump();
        let mut args = Vec::new();
        let mut starts = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                starts.push(self.pos);
                args.push(self.expr()?);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RParen => break,
                    _ => return Err(syntax(self.here(), &["`,`", "`)`"])),
                }
            }
        }
        self.bump();
        if !sig.accepts(args.len()) {
            let kind = ParseErrorKind::Arity { name, expected: sig.describe_arity(), found: args.len() };
            return Err(at(self, start, kind));
        }
        for (i, a) in args.iter().enumerate() {
            let slot = sig.slot(i);
            if !a.fits(slot) {
                let wanted = match slot {
                    super::ast::Slot::Int => "an integer",
                    super::ast::Slot::Rat => "a rational number",
                    super::ast::Slot::Coef => "a constant",
                    super::ast::Slot::Mono => "a nonzero monomial c*q^e",
                    super::ast::Slot::Series => "an expression",
                };
                return Err(at(self, starts[i], ParseErrorKind::Argument { name, index: i, wanted }));
            }
        }
        Ok(Expr::Call(name, args))
    }
}

/// Parses one expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, &HashMap::new(), 1)
}

/// Parses with `let`-bound names in scope; `line` numbers the first line of `text`.
pub fn parse_with(text: &str, bindings: &HashMap<String, Expr>, line: usize) -> Result<Expr, ParseError> {
    let toks = lex(text, line)?;
    let mut p = Parser { toks, pos: 0, bindings };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.here(), &["an operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("J(1,2)*JB(3,8)/Jm(2)").unwrap();
        assert!(matches!(&e, Expr::Div(a, b) if matches!(**a, Expr::Mul(..)) && matches!(**b, Expr::Call(..))));
        assert_eq!(parse("-q^2").unwrap(), Expr::Neg(Box::new(Expr::QPow(2.into()))));
        assert_eq!(parse("2q").unwrap(), parse("2*q").unwrap());
        assert_eq!(parse("(1-q)(1+q)").unwrap(), parse("(1-q)*(1+q)").unwrap());
        assert_eq!(parse("q^(1/2)").unwrap(), Expr::QPow(QExponent::new(1, 2)));
        assert_eq!(parse("q^-3").unwrap(), Expr::QPow((-3).into()));
        // `2/3` after `^` is not a literal
        assert_eq!(parse("q^2/3").unwrap(), Expr::Div(Box::new(Expr::QPow(2.into())), Box::new(Expr::Lit(3.into()))));
    }

    #[test]
    fn monomial_arguments() {
        let e = parse("m(-q^26, q^48, -1)").unwrap();
        let Expr::Call(name, args) = e else { panic!() };
        assert_eq!(name, "m");
        let ms: Vec<_> = args.iter().map(|a| a.as_monomial().unwrap()).collect();
        assert_eq!(ms[0], crate::QMonomial::int(-1, 26, 1));
        assert_eq!(ms[1], crate::QMonomial::int(1, 48, 1));
        assert_eq!(ms[2], crate::QMonomial::int(-1, 0, 1));
    }

    #[test]
    fn errors() {
        let e = parse("q^(1/2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
        assert_eq!((e.line, e.col), (1, 7));
        assert!(matches!(parse("foo(q)").unwrap_err().kind, ParseErrorKind::UnknownFunction(_)));
        assert!(matches!(parse("m(q, q)").unwrap_err().kind, ParseErrorKind::Arity { found: 2, .. }));
        assert!(matches!(parse("m(1-q, q, q)").unwrap_err().kind, ParseErrorKind::Argument { index: 0, .. }));
        assert!(matches!(parse("J(1,2)^(1/2)").unwrap_err().kind, ParseErrorKind::Syntax { .. }));
        assert_eq!(parse("1 +\n  )").unwrap_err().line, 2);
    }
}
