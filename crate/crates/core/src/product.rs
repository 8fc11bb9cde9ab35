//! Products and quotients of lazily computed series at a target precision.
//!
//! Each factor is a closure producing its series to a requested order. The
//! orders handed to the closures are inflated by the other factors' lowdegs,
//! estimated as zero at first and corrected from the actual values on retry.

use crate::error::{Error, Result};
use crate::number::QExponent;
use crate::series::{QMonomial, QSeries};

type Producer<'a> = Box<dyn Fn(&QExponent) -> Result<QSeries> + 'a>;

pub(crate) enum Factor<'a> {
    Num(Producer<'a>),
    Den(Producer<'a>),
}

pub(crate) fn num<'a>(f: impl Fn(&QExponent) -> Result<QSeries> + 'a) -> Factor<'a> {
    Factor::Num(Box::new(f))
}

pub(crate) fn den<'a>(f: impl Fn(&QExponent) -> Result<QSeries> + 'a) -> Factor<'a> {
    Factor::Den(Box::new(f))
}

const ATTEMPTS: usize = 5;

/// `pre * prod(nums) / prod(dens)` with precision at least `order`.
pub(crate) fn quotient(order: &QExponent, pre: &QMonomial, factors: &[Factor<'_>]) -> Result<QSeries> {
    // lowdeg of each factor as it enters the product (negated for denominators)
    let mut lows = vec![QExponent::zero(); factors.len()];
    let mut achieved = None;
    for _ in 0..ATTEMPTS {
        let total = lows.iter().fold(QExponent::zero(), |a, b| &a + b);
        let mut acc = QSeries::monomial(pre);
        let mut next = lows.clone();
        let mut degenerate = false;
        for (i, f) in factors.iter().enumerate() {
            let need = &(order - pre.exp()) - &(&total - &lows[i]);
            let s = match f {
                Factor::Num(p) => {
                    let s = p(&need)?;
                    if let Some(l) = s.lowdeg().or_else(|| s.precision().cloned()) {
                        next[i] = l;
                    }
                    s
                }
                Factor::Den(p) => {
                    let low = -&lows[i];
                    let d = p(&(&need + &low.mul_int(2)))?;
                    if d.is_zero() {
                        // vanishing so far; look deeper next time
                        let p = d.precision().cloned().unwrap_or_else(QExponent::zero);
                        let bump = QExponent::max_of(&(&p + &p.abs()), &(&low + &QExponent::from_int(1)));
                        next[i] = -bump;
                        degenerate = true;
                        continue;
                    }
                    next[i] = -d.lowdeg().expect("nonzero");
                    d.inverse_to(Some(&need))?
                }
            };
            acc = acc.mul(&s);
        }
        if !degenerate {
            match acc.precision() {
                Some(p) if p < order => achieved = Some(p.clone()),
                _ => return Ok(acc.truncate(order)),
            }
        }
        lows = next;
    }
    match achieved {
        Some(a) => Err(Error::InsufficientPrecision { wanted: Box::new(order.clone()), achieved: Box::new(a) }),
        None => Err(Error::DegenerateDenominator),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::GaussianRational;
    use crate::theta::{j_am, j_m};

    #[test]
    fn quotient_matches_direct() {
        // J_{1,2} = J_1^2 / J_2
        let o = QExponent::from_int(40);
        let got =
            quotient(&o, &QMonomial::one(), &[num(|w| j_m(&1.into(), w)), num(|w| j_m(&1.into(), w)), den(|w| j_m(&2.into(), w))]).unwrap();
        assert_eq!(got, j_am(&1.into(), &2.into(), &o).unwrap());
    }

    #[test]
    fn quotient_with_shifted_denominator() {
        // q^5 / (q^5 - q^6) = 1/(1-q)
        let o = QExponent::from_int(10);
        let d = |_: &QExponent| {
            Ok(QSeries::from_terms(
                [(QExponent::from_int(5), GaussianRational::from_int(1)), (QExponent::from_int(6), GaussianRational::from_int(-1))],
                None,
            ))
        };
        let got = quotient(&o, &QMonomial::q_int(5), &[den(d)]).unwrap();
        assert_eq!(got.precision(), Some(&o));
        for k in 0..10 {
            assert_eq!(got.coeff(&k.into()).unwrap(), GaussianRational::from_int(1));
        }
    }

    #[test]
    fn vanishing_denominator() {
        let o = QExponent::from_int(10);
        let z = |w: &QExponent| Ok(QSeries::zero(w.clone()));
        assert_eq!(quotient(&o, &QMonomial::one(), &[den(z)]), Err(Error::DegenerateDenominator));
    }
}
