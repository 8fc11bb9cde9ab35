use std::collections::HashMap;

use super::ast::Expr;
use crate::appell::{appell_m, g_abc, h_abc, msplit_rhs, pfrac, theta_abc, theta_np, universal_g_eulerian};
use crate::catalog::MockTheta;
use crate::error::{Error, Result};
use crate::hecke::{f_abc, HeckeSpec, NjSum};
use crate::number::QExponent;
use crate::series::{QMonomial, QSeries};
use crate::theta::{j_am, j_m, jbar_am, jtp_product, pochhammer_finite, pochhammer_infinite};

const RETRIES: usize = 3;

/// Evaluates `expr` with precision at least `order`.
///
/// Runs at a working order `W`, starting at `order`. When the result falls
/// short, `W` grows to cover both the shortfall and the total lowdeg of every
/// divisor seen, for at most three retries.
pub fn evaluate(expr: &Expr, order: &QExponent) -> Result<QSeries> {
    let mut ev = Evaluator::default();
    let mut w = order.clone();
    let mut achieved = None;
    for _ in 0..=RETRIES {
        ev.guard = QExponent::zero();
        let (short, got) = match ev.eval(expr, &w) {
            Ok(s) => match s.precision() {
                Some(p) if p < order => (order - p, Some(p.clone())),
                _ => return Ok(s.truncate(order)),
            },
            Err(Error::InsufficientPrecision { wanted, achieved }) => (&*wanted - &*achieved, Some(*achieved)),
            Err(e) => return Err(e),
        };
        achieved = got;
        let next = &w + &QExponent::max_of(&short, &QExponent::from_int(1));
        w = QExponent::max_of(&(order + &ev.guard), &next);
    }
    let achieved = achieved.unwrap_or_else(QExponent::zero);
    Err(Error::InsufficientPrecision { wanted: Box::new(order.clone()), achieved: Box::new(achieved) })
}

#[derive(Default)]
struct Evaluator {
    memo: HashMap<Expr, QSeries>,
    guard: QExponent,
}

fn mono(e: &Expr) -> Result<QMonomial> {
    e.as_monomial().ok_or_else(|| Error::InvalidArgument(format!("`{e}` is not a nonzero monomial")))
}

fn int(e: &Expr) -> Result<i64> {
    e.as_int().ok_or_else(|| Error::InvalidArgument(format!("`{e}` is not an integer")))
}

fn rat(e: &Expr) -> Result<QExponent> {
    e.as_rational().ok_or_else(|| Error::InvalidArgument(format!("`{e}` is not a rational constant")))
}

impl Evaluator {
    fn eval(&mut self, e: &Expr, w: &QExponent) -> Result<QSeries> {
        if let Some(m) = e.as_monomial() {
            return Ok(QSeries::monomial(&m));
        }
        match e {
            Expr::Lit(c) => Ok(QSeries::constant(c.clone())),
            Expr::QPow(p) => Ok(QSeries::monomial(&QMonomial::q(p.clone()))),
            Expr::Add(a, b) => Ok(self.eval(a, w)?.add(&self.eval(b, w)?)),
            Expr::Sub(a, b) => Ok(self.eval(a, w)?.sub(&self.eval(b, w)?)),
            Expr::Neg(a) => Ok(self.eval(a, w)?.neg()),
            Expr::Mul(a, b) => Ok(self.eval(a, w)?.mul(&self.eval(b, w)?)),
            Expr::Div(a, b) => {
                let num = self.eval(a, w)?;
                let inv = self.reciprocal(b, w)?;
                Ok(num.mul(&inv))
            }
            Expr::Pow(a, n) => {
                if *n >= 0 {
                    return self.eval(a, w)?.pow(*n, None);
                }
                self.reciprocal(a, w)?.pow(-n, None)
            }
            Expr::Call(name, args) => {
                if let Some(s) = self.memo.get(e) {
                    if s.precision().is_none_or(|p| p >= w) {
                        return Ok(s.truncate(w));
                    }
                }
                let s = self.call(name, args, w)?;
                self.memo.insert(e.clone(), s.clone());
                Ok(s)
            }
        }
    }

    fn reciprocal(&mut self, e: &Expr, w: &QExponent) -> Result<QSeries> {
        let d = self.eval(e, w)?;
        if d.is_zero() {
            return match d.precision() {
                // vanishes so far: its lowdeg is at least the precision
                Some(p) => {
                    self.guard = &self.guard + &QExponent::max_of(p, &QExponent::from_int(1));
                    Err(Error::InsufficientPrecision { wanted: Box::new(w + p), achieved: Box::new(w.clone()) })
                }
                None => Err(Error::ZeroSeries),
            };
        }
        let low = d.lowdeg().expect("nonzero");
        self.guard = &self.guard + &low.abs();
        d.inverse_to(Some(w))
    }

    fn call(&mut self, name: &str, args: &[Expr], w: &QExponent) -> Result<QSeries> {
        let m = |i: usize| mono(&args[i]);
        let n = |i: usize| int(&args[i]);
        let r = |i: usize| rat(&args[i]);
        let abc = || -> Result<(i64, i64, i64)> { Ok((n(0)?, n(1)?, n(2)?)) };
        match name {
            "poch_inf" => pochhammer_infinite(&m(0)?, &m(1)?, w),
            "poch_fin" => {
                let k = n(2)?;
                let k = u64::try_from(k).map_err(|_| Error::InvalidArgument(format!("poch_fin length {k} is negative")))?;
                pochhammer_finite(&m(0)?, &m(1)?, k)
            }
            "j" => {
                let xs = args[..args.len() - 1].iter().map(mono).collect::<Result<Vec<_>>>()?;
                jtp_product(&xs, &m(args.len() - 1)?, w)
            }
            "J" => j_am(&r(0)?, &r(1)?, w),
            "JB" => jbar_am(&r(0)?, &r(1)?, w),
            "Jm" => j_m(&r(0)?, w),
            "m" => appell_m(&m(0)?, &m(1)?, &m(2)?, w),
            "f" => {
                let (a, b, c) = abc()?;
                f_abc(&HeckeSpec::new(a, b, c, m(3)?, m(4)?, m(5)?)?, w)
            }
            "g" => universal_g_eulerian(&m(0)?, &m(1)?, w),
            "g_abc" => {
                let (a, b, c) = abc()?;
                g_abc(a, b, c, &m(3)?, &m(4)?, &m(5)?, &m(6)?, &m(7)?, w)
            }
            "h_abc" => {
                let (a, b, c) = abc()?;
                h_abc(a, b, c, &m(3)?, &m(4)?, &m(5)?, &m(6)?, &m(7)?, w)
            }
            "theta_np" => theta_np(n(0)?, n(1)?, &m(2)?, &m(3)?, &m(4)?, w),
            "theta_abc" => {
                let (a, b, c) = abc()?;
                theta_abc(a, b, c, &m(3)?, &m(4)?, &m(5)?, w)
            }
            "subq" => {
                let k = r(1)?;
                if !k.is_positive() {
                    return Err(Error::NonPositivePower(k));
                }
                self.eval(&args[0], &(w / &k))?.substitute_power(&k)
            }
            "negq" => self.eval(&args[0], w)?.negate_variable(),
            "nj" => {
                let coef =
                    |i: usize| args[i].as_coefficient().ok_or_else(|| Error::InvalidArgument(format!("`{}` is not a constant", args[i])));
                let (lo, hi) = if args.len() == 8 { (n(6)?, n(7)?) } else { (0, 0) };
                NjSum { a: r(0)?, b: r(1)?, c: r(2)?, d: r(3)?, sn: coef(4)?, sj: coef(5)?, lo, hi }.eval(w)
            }
            "pfrac" => pfrac(&m(0)?, &m(1)?, w),
            "msplit" => msplit_rhs(n(0)?, &m(1)?, &m(2)?, &m(3)?, &m(4)?, w),
            _ => match name.parse::<MockTheta>() {
                Ok(f) => f.eval(&m(0)?, w),
                Err(_) => Err(Error::InvalidArgument(format!("unknown function `{name}`"))),
            },
        }
    }
}
