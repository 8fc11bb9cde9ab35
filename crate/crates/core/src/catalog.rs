//! The third order mock theta functions `ψ, ν, φ` and the functions
//! `ψ̄₀, ψ̄₁, φ̄₀, φ̄₁`, as Eulerian sums over a monomial base, together with
//! their Appell-Lerch forms.

use std::fmt;
use std::str::FromStr;

use crate::appell::{appell_m, universal_g_eulerian};
use crate::error::{Error, Result};
use crate::number::{GaussianRational, QExponent};
use crate::product::{den, num, quotient};
use crate::series::{QMonomial, QSeries};
use crate::theta::{check_base, jtp, pochhammer_infinite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MockTheta {
    Psi,
    Nu,
    Phi,
    PsiBar0,
    PsiBar1,
    PhiBar0,
    PhiBar1,
}

impl MockTheta {
    pub const ALL: [MockTheta; 7] =
        [MockTheta::Psi, MockTheta::Nu, MockTheta::Phi, MockTheta::PsiBar0, MockTheta::PsiBar1, MockTheta::PhiBar0, MockTheta::PhiBar1];

    pub fn name(self) -> &'static str {
        match self {
            MockTheta::Psi => "psi",
            MockTheta::Nu => "nu",
            MockTheta::Phi => "phi",
            MockTheta::PsiBar0 => "psibar0",
            MockTheta::PsiBar1 => "psibar1",
            MockTheta::PhiBar0 => "phibar0",
            MockTheta::PhiBar1 => "phibar1",
        }
    }

    /// The Eulerian sum at base `B`.
    pub fn eval(self, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
        check_base(base)?;
        let b = |k: i64| base.pow(k);
        let plus = |k: i64| base.pow(k).neg();
        match self {
            MockTheta::Psi => eulerian(base, order, 1, |n| n * n, &[(b(1), true)], |n| vec![(b(2 * n - 1), true)]),
            MockTheta::Nu => eulerian(base, order, 0, |n| n * (n + 1), &[(plus(1), true)], |n| vec![(plus(2 * n + 1), true)]),
            MockTheta::Phi => eulerian(base, order, 0, |n| n * n, &[], |n| vec![(plus(2 * n), true)]),
            MockTheta::PsiBar0 => eulerian(base, order, 0, |n| 2 * n * n, &[], |n| vec![(plus(2 * n - 1), true), (plus(2 * n), true)]),
            MockTheta::PsiBar1 => {
                eulerian(base, order, 0, |n| 2 * n * n + 2 * n, &[(plus(1), true)], |n| vec![(plus(2 * n), true), (plus(2 * n + 1), true)])
            }
            MockTheta::PhiBar0 => {
                eulerian(base, order, 0, |n| n, &[(plus(1), false)], |n| vec![(plus(2 * n), false), (plus(2 * n + 1), false)])
            }
            MockTheta::PhiBar1 => eulerian(base, order, 0, |n| n, &[], |n| vec![(plus(2 * n - 1), false), (plus(2 * n), false)]),
        }
    }

    /// `F(-q)` for the function at base `B = c q^k`, i.e. the Eulerian sum at
    /// `c (-1)^k q^k`; needs an integral `k`.
    pub fn eval_at_negated_base(self, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
        let k = base.exp().to_i64().ok_or_else(|| Error::FractionalExponent(base.exp().clone()))?;
        let flipped = if k % 2 == 0 { base.clone() } else { base.neg() };
        self.eval(&flipped, order)
    }

    /// The Appell-Lerch and universal-mock-theta forms at base `q`.
    pub fn alternates(self) -> Vec<(&'static str, Alternate)> {
        match self {
            MockTheta::Psi => vec![("q g(q,q^4)", psi_via_g), ("m-pair", psi_via_m), ("m at base -q^3", psi_via_m_neg)],
            MockTheta::Nu => vec![("g(i q^(1/2),q)", nu_via_g), ("m-pair", nu_via_m), ("m plus theta", nu_via_m_theta)],
            MockTheta::Phi => vec![("(1-i)(1+i g(i,q))", phi_via_g), ("four m", phi_via_m), ("m at base -q^3", phi_via_m_neg)],
            _ => Vec::new(),
        }
    }
}

pub type Alternate = fn(&QExponent) -> Result<QSeries>;

impl fmt::Display for MockTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MockTheta {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MockTheta::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown mock theta function `{s}`"))
    }
}

/// `sum_{n>=n0} B^{power(n)} R_n`, where `R_{n0}` applies the `init` factors
/// to 1 and `R_n` applies `step(n)` to `R_{n-1}`. A factor `(u, true)` divides
/// by `1 - u`, `(u, false)` multiplies by it. All factor exponents are positive.
fn eulerian(
    base: &QMonomial,
    order: &QExponent,
    n0: i64,
    power: impl Fn(i64) -> i64,
    init: &[(QMonomial, bool)],
    step: impl Fn(i64) -> Vec<(QMonomial, bool)>,
) -> Result<QSeries> {
    let apply = |r: QSeries, factors: &[(QMonomial, bool)]| -> Result<QSeries> {
        let mut r = r;
        for (u, divide) in factors {
            r = if *divide { r.div_one_minus(u.coeff(), u.exp(), None)? } else { r.mul_one_minus(u.coeff(), u.exp()) };
        }
        Ok(r)
    };
    let mut r = apply(QSeries::one_exact().truncate(order), init)?;
    let mut sum = QSeries::zero(order.clone());
    let mut n = n0;
    loop {
        let lead = base.pow(power(n));
        if lead.exp() >= order {
            break;
        }
        sum = sum.add(&r.mul_monomial(&lead));
        n += 1;
        r = apply(r.truncate(&(order - lead.exp())), &step(n))?;
    }
    Ok(sum)
}

fn q(k: i64) -> QMonomial {
    QMonomial::q_int(k)
}

fn mq(k: i64) -> QMonomial {
    QMonomial::q_int(k).neg()
}

fn m_term(pre: QMonomial, x: QMonomial, base: QMonomial, z: QMonomial, order: &QExponent) -> Result<QSeries> {
    quotient(order, &pre, &[num(move |w| appell_m(&x, &base, &z, w))])
}

/// `c q^s J_{12}^3 / (J_4 J_{3,12})`.
fn j12_quotient(c: i64, s: i64, order: &QExponent) -> Result<QSeries> {
    let pre = QMonomial::int(c, s, 1);
    let j12 = move |w: &QExponent| pochhammer_infinite(&q(12), &q(12), w);
    quotient(order, &pre, &[num(j12), num(j12), num(j12), den(|w| pochhammer_infinite(&q(4), &q(4), w)), den(|w| jtp(&q(3), &q(12), w))])
}

fn psi_via_g(order: &QExponent) -> Result<QSeries> {
    Ok(universal_g_eulerian(&q(1), &q(4), &(order - &1.into()))?.mul_monomial(&q(1)))
}

fn psi_via_m(order: &QExponent) -> Result<QSeries> {
    let a = m_term(mq(-1), q(1), q(12), q(2), order)?;
    let b = m_term(mq(0), q(5), q(12), q(2), order)?;
    Ok(a.add(&b))
}

fn psi_via_m_neg(order: &QExponent) -> Result<QSeries> {
    let a = m_term(mq(0), q(1), mq(3), mq(1), order)?;
    Ok(a.add(&j12_quotient(1, 1, order)?))
}

fn nu_via_g(order: &QExponent) -> Result<QSeries> {
    let x = QMonomial::new(GaussianRational::i(), QExponent::new(1, 2))?;
    universal_g_eulerian(&x, &q(1), order)
}

fn nu_via_m(order: &QExponent) -> Result<QSeries> {
    let a = m_term(q(-1), q(2), q(12), mq(3), order)?;
    let b = m_term(q(-1), q(2), q(12), mq(9), order)?;
    Ok(a.add(&b))
}

fn nu_via_m_theta(order: &QExponent) -> Result<QSeries> {
    let a = m_term(QMonomial::int(2, -1, 1), q(2), q(12), mq(3), order)?;
    let t = quotient(
        order,
        &QMonomial::one(),
        &[num(|w| pochhammer_infinite(&q(1), &q(1), w)), num(|w| jtp(&q(3), &q(12), w)), den(|w| pochhammer_infinite(&q(2), &q(2), w))],
    )?;
    Ok(a.add(&t))
}

fn phi_via_g(order: &QExponent) -> Result<QSeries> {
    let i = GaussianRational::i();
    let g = universal_g_eulerian(&QMonomial::new(i.clone(), QExponent::zero())?, &q(1), order)?;
    let one = GaussianRational::from_int(1);
    let inner = QSeries::constant(one.clone()).add(&g.scale(&i));
    Ok(inner.scale(&(&one - &i)))
}

fn phi_via_m(order: &QExponent) -> Result<QSeries> {
    let mut s = QSeries::zero(order.clone());
    for (pre, x, z) in [(q(0), q(5), q(4)), (q(0), q(5), q(8)), (q(-1), q(1), q(4)), (q(-1), q(1), q(8))] {
        s = s.add(&m_term(pre, x, q(12), z, order)?);
    }
    Ok(s)
}

fn phi_via_m_neg(order: &QExponent) -> Result<QSeries> {
    let a = m_term(QMonomial::int(2, 0, 1), q(1), mq(3), mq(0), order)?;
    Ok(a.add(&j12_quotient(2, 1, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(terms: &[(i64, i64)], prec: i64) -> QSeries {
        QSeries::from_terms(terms.iter().map(|&(e, c)| (QExponent::from_int(e), GaussianRational::from_int(c))), Some(prec.into()))
    }

    #[test]
    fn leading_terms() {
        let b = q(1);
        // hand summation of the first Eulerian terms
        let psi = MockTheta::Psi.eval(&b, &8.into()).unwrap();
        assert_eq!(psi, ints(&[(1, 1), (2, 1), (3, 1), (4, 2), (5, 2), (6, 2), (7, 3)], 8));
        let nu = MockTheta::Nu.eval(&b, &4.into()).unwrap();
        assert_eq!(nu, ints(&[(0, 1), (1, -1), (2, 2), (3, -2)], 4));
        let pb0 = MockTheta::PhiBar0.eval(&b, &3.into()).unwrap();
        assert_eq!(pb0, ints(&[(0, 1), (1, 2), (2, 2)], 3));
    }

    #[test]
    fn alternates_agree() {
        let o = QExponent::from_int(30);
        for f in [MockTheta::Psi, MockTheta::Nu, MockTheta::Phi] {
            let e = f.eval(&q(1), &o).unwrap();
            for (label, alt) in f.alternates() {
                let a = alt(&o).unwrap();
                assert_eq!(e.first_difference(&a), None, "{f} via {label}");
                assert!(a.is_real(), "{f} via {label}");
            }
        }
    }

    #[test]
    fn negated_base() {
        let o = QExponent::from_int(20);
        let direct = MockTheta::Nu.eval_at_negated_base(&q(1), &o).unwrap();
        let flipped = MockTheta::Nu.eval(&q(1), &o).unwrap().negate_variable().unwrap();
        assert_eq!(direct, flipped);
        let half = QMonomial::q(QExponent::new(1, 2));
        assert!(matches!(MockTheta::Psi.eval_at_negated_base(&half, &o), Err(Error::FractionalExponent(_))));
    }

    #[test]
    fn names_round_trip() {
        for f in MockTheta::ALL {
            assert_eq!(f.name().parse::<MockTheta>().unwrap(), f);
        }
    }
}
