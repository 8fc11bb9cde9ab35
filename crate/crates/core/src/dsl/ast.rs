use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::number::{GaussianRational, QExponent};
use crate::series::QMonomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(GaussianRational),
    QPow(QExponent),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(String, Vec<Expr>),
}

/// What a call accepts in each argument position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// integer constant
    Int,
    /// real rational constant
    Rat,
    /// complex constant
    Coef,
    /// nonzero `c q^e`
    Mono,
    /// any expression
    Series,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Arity {
    Fixed,
    /// two or more arguments, all of kind `slots[0]`
    Variadic,
    /// `slots.len()` arguments, or only the first `n`
    Either(usize),
}

#[derive(Debug)]
pub(crate) struct Signature {
    pub name: &'static str,
    pub slots: &'static [Slot],
    pub arity: Arity,
}

use Slot::*;

const MOCK: &[Slot] = &[Mono];

pub(crate) const SIGNATURES: &[Signature] = &[
    Signature { name: "poch_inf", slots: &[Mono, Mono], arity: Arity::Fixed },
    Signature { name: "poch_fin", slots: &[Mono, Mono, Int], arity: Arity::Fixed },
    Signature { name: "j", slots: &[Mono], arity: Arity::Variadic },
    Signature { name: "J", slots: &[Rat, Rat], arity: Arity::Fixed },
    Signature { name: "JB", slots: &[Rat, Rat], arity: Arity::Fixed },
    Signature { name: "Jm", slots: &[Rat], arity: Arity::Fixed },
    Signature { name: "m", slots: &[Mono, Mono, Mono], arity: Arity::Fixed },
    Signature { name: "f", slots: &[Int, Int, Int, Mono, Mono, Mono], arity: Arity::Fixed },
    Signature { name: "g", slots: &[Mono, Mono], arity: Arity::Fixed },
    Signature { name: "g_abc", slots: &[Int, Int, Int, Mono, Mono, Mono, Mono, Mono], arity: Arity::Fixed },
    Signature { name: "h_abc", slots: &[Int, Int, Int, Mono, Mono, Mono, Mono, Mono], arity: Arity::Fixed },
    Signature { name: "theta_np", slots: &[Int, Int, Mono, Mono, Mono], arity: Arity::Fixed },
    Signature { name: "theta_abc", slots: &[Int, Int, Int, Mono, Mono, Mono], arity: Arity::Fixed },
    Signature { name: "psi", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "nu", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "phi", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "psibar0", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "psibar1", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "phibar0", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "phibar1", slots: MOCK, arity: Arity::Fixed },
    Signature { name: "subq", slots: &[Series, Rat], arity: Arity::Fixed },
    Signature { name: "negq", slots: &[Series], arity: Arity::Fixed },
    Signature { name: "nj", slots: &[Rat, Rat, Rat, Rat, Coef, Coef, Int, Int], arity: Arity::Either(6) },
    Signature { name: "pfrac", slots: &[Mono, Mono], arity: Arity::Fixed },
    Signature { name: "msplit", slots: &[Int, Mono, Mono, Mono, Mono], arity: Arity::Fixed },
];

pub(crate) fn signature(name: &str) -> Option<&'static Signature> {
    SIGNATURES.iter().find(|s| s.name == name)
}

impl Signature {
    pub fn accepts(&self, n: usize) -> bool {
        match self.arity {
            Arity::Fixed => n == self.slots.len(),
            Arity::Variadic => n >= 2,
            Arity::Either(k) => n == k || n == self.slots.len(),
        }
    }

    pub fn slot(&self, i: usize) -> Slot {
        match self.arity {
            Arity::Variadic => self.slots[0],
            _ => self.slots[i],
        }
    }

    pub fn describe_arity(&self) -> String {
        match self.arity {
            Arity::Fixed => self.slots.len().to_string(),
            Arity::Variadic => "at least 2".into(),
            Arity::Either(k) => format!("{k} or {}", self.slots.len()),
        }
    }
}

impl Expr {
    /// Folds a product of constants and powers of `q` to `(c, e)`.
    pub fn fold_monomial(&self) -> Option<(GaussianRational, QExponent)> {
        Some(match self {
            Expr::Lit(c) => (c.clone(), QExponent::zero()),
            Expr::QPow(e) => (GaussianRational::from_int(1), e.clone()),
            Expr::Neg(a) => {
                let (c, e) = a.fold_monomial()?;
                (-c, e)
            }
            Expr::Mul(a, b) => {
                let ((ca, ea), (cb, eb)) = (a.fold_monomial()?, b.fold_monomial()?);
                (&ca * &cb, &ea + &eb)
            }
            Expr::Div(a, b) => {
                let ((ca, ea), (cb, eb)) = (a.fold_monomial()?, b.fold_monomial()?);
                let inv = cb.inv()?;
                (&ca * &inv, &ea - &eb)
            }
            Expr::Pow(a, n) => {
                let (c, e) = a.fold_monomial()?;
                if c.is_zero() && *n < 0 {
                    return None;
                }
                (c.pow(*n), e.mul_int(*n))
            }
            _ => return None,
        })
    }

    pub fn as_monomial(&self) -> Option<QMonomial> {
        let (c, e) = self.fold_monomial()?;
        QMonomial::new(c, e).ok()
    }

    pub fn as_coefficient(&self) -> Option<GaussianRational> {
        self.fold_monomial().filter(|(_, e)| e.is_zero()).map(|(c, _)| c)
    }

    pub fn as_rational(&self) -> Option<QExponent> {
        self.as_coefficient().filter(|c| c.is_real()).map(|c| QExponent::from_rational(c.re().clone()))
    }

    pub fn as_int(&self) -> Option<i64> {
        self.as_rational().and_then(|r| r.to_i64())
    }

    pub(crate) fn fits(&self, slot: Slot) -> bool {
        match slot {
            Int => self.as_int().is_some(),
            Rat => self.as_rational().is_some(),
            Coef => self.as_coefficient().is_some(),
            Mono => self.as_monomial().is_some(),
            Series => true,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) | Expr::QPow(_) => 4,
            Expr::Lit(c) => literal_precedence(c),
            Expr::Call(..) => 5,
        }
    }
}

/// How tightly the printed form of a literal binds.
fn literal_precedence(c: &GaussianRational) -> u8 {
    let one = |r: &num_rational::BigRational| r.abs().is_one();
    match (c.re().is_zero(), c.im().is_zero()) {
        // `3`, `-3`, `1/2`, `-1/2`
        (_, true) if !c.re().is_integer() => 2,
        (_, true) if is_negative_literal(c) => 3,
        (_, true) => 5,
        // `i`, `-i`, `2*i`
        (true, false) if !one(c.im()) => 2,
        (true, false) if is_negative_literal(c) => 3,
        (true, false) => 5,
        // `(1+2*i)`
        (false, false) => 5,
    }
}

fn is_negative_literal(c: &GaussianRational) -> bool {
    if c.is_real() {
        c.re() < &Zero::zero()
    } else {
        c.re().is_zero() && c.im() < &Zero::zero()
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn fmt_exponent(f: &mut fmt::Formatter<'_>, e: &QExponent) -> fmt::Result {
    if e.is_integer() && !e.is_negative() {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

/// Prints in the surface syntax; the parser reads it back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Expr::Lit(c) => write!(f, "{c}"),
            Expr::QPow(e) if e == &1 => write!(f, "q"),
            Expr::QPow(e) => {
                write!(f, "q^")?;
                fmt_exponent(f, e)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => " / ",
                };
                wrap(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                wrap(f, b, b.precedence() <= p)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, a.precedence() < 3)
            }
            Expr::Pow(a, n) => {
                wrap(f, a, a.precedence() < 5)?;
                write!(f, "^")?;
                fmt_exponent(f, &QExponent::from_int(*n))
            }
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
