//! q-Pochhammer products and the Jacobi theta function `j(x;B)` for a
//! monomial base `B = c q^e` with `e > 0`.

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::number::{lcm, GaussianRational, QExponent};
use crate::series::{Accumulator, QMonomial, QSeries};

pub(crate) fn check_base(base: &QMonomial) -> Result<()> {
    if base.exp().is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveBase(base.exp().clone()))
    }
}

/// Integer minimiser of a convex `f`, walking downhill from `guess`.
pub(crate) fn convex_argmin(guess: i64, f: impl Fn(i64) -> i128) -> i64 {
    let mut n = guess;
    while f(n - 1) < f(n) {
        n -= 1;
    }
    while f(n + 1) < f(n) {
        n += 1;
    }
    n
}

/// Inclusive integer interval on which a convex `f` stays below `cut`,
/// searched outward from its minimiser near `guess`. Empty when `lo > hi`.
pub(crate) fn convex_range(guess: i64, f: impl Fn(i64) -> i128, cut: i128) -> (i64, i64) {
    let start = convex_argmin(guess, &f);
    if f(start) >= cut {
        return (1, 0);
    }
    let mut lo = start;
    while f(lo - 1) < cut {
        lo -= 1;
    }
    let mut hi = start;
    while f(hi + 1) < cut {
        hi += 1;
    }
    (lo, hi)
}

/// `(x;B)_n`, an exact Laurent polynomial.
pub fn pochhammer_finite(x: &QMonomial, base: &QMonomial, n: u64) -> Result<QSeries> {
    check_base(base)?;
    let mut acc = QSeries::one_exact();
    let mut factor = x.clone();
    for _ in 0..n {
        acc = acc.mul_one_minus(factor.coeff(), factor.exp());
        factor = factor.mul(base);
    }
    Ok(acc)
}

/// `(x;B)_∞` truncated to `order`.
pub fn pochhammer_infinite(x: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    // factors with nonpositive exponent form an exact head
    let mut head = QSeries::one_exact();
    let mut low = QExponent::zero();
    let mut factor = x.clone();
    while !factor.exp().is_positive() {
        if factor.exp().is_negative() {
            low = &low + factor.exp();
        }
        head = head.mul_one_minus(factor.coeff(), factor.exp());
        factor = factor.mul(base);
    }
    if head.is_zero() {
        return Ok(head);
    }
    let tail_order = order - &low;
    let mut tail = QSeries::one_exact().truncate(&tail_order);
    while factor.exp() < &tail_order {
        tail = tail.mul_one_minus(factor.coeff(), factor.exp());
        factor = factor.mul(base);
    }
    Ok(head.mul(&tail).truncate(order))
}

/// `j(x;B) = sum_n (-1)^n B^{binom(n,2)} x^n`, summed over every `n` whose
/// exponent is below `order`.
pub fn jtp(x: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    let den = lcm(lcm(x.exp().denom_i64(), base.exp().denom_i64()), order.denom_i64());
    let b = base.exp().scaled(den) as i128;
    let e = x.exp().scaled(den) as i128;
    let cut = order.scaled_ceil(den) as i128;
    let expo = |n: i64| {
        let n = n as i128;
        b * n * (n - 1) / 2 + n * e
    };
    // minimiser of b n(n-1)/2 + e n is n = 1/2 - e/b
    let vertex = Integer::div_floor(&((b - 2 * e) as i64), &(2 * b as i64));
    let (lo, hi) = convex_range(vertex, expo, cut);
    let mut acc = Accumulator::new(den, Some(order));
    let neg_x = x.neg();
    for n in lo..=hi {
        let mut c = neg_x.coeff().pow(n);
        let bc = base.coeff();
        if !bc.is_one() {
            c = c.mul_ref(&bc.pow(n * (n - 1) / 2));
        }
        acc.add(expo(n) as i64, &c);
    }
    Ok(acc.finish(Some(order.clone())))
}

/// `j(x_1;B) ... j(x_k;B)`.
pub fn jtp_product(xs: &[QMonomial], base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    let mut acc = QSeries::one_exact();
    for x in xs {
        let guard = order - &acc.lowdeg().unwrap_or_else(QExponent::zero);
        acc = acc.mul(&jtp(x, base, &QExponent::max_of(&guard, order))?);
    }
    Ok(acc.truncate(order))
}

/// `J_{a,m} = j(q^a; q^m)`.
pub fn j_am(a: &QExponent, m: &QExponent, order: &QExponent) -> Result<QSeries> {
    jtp(&QMonomial::q(a.clone()), &QMonomial::q(m.clone()), order)
}

/// `J̄_{a,m} = j(-q^a; q^m)`.
pub fn jbar_am(a: &QExponent, m: &QExponent, order: &QExponent) -> Result<QSeries> {
    let x = QMonomial::new(GaussianRational::from_int(-1), a.clone())?;
    jtp(&x, &QMonomial::q(m.clone()), order)
}

/// `J_m = (q^m;q^m)_∞`.
pub fn j_m(m: &QExponent, order: &QExponent) -> Result<QSeries> {
    let b = QMonomial::q(m.clone());
    pochhammer_infinite(&b, &b, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> QMonomial {
        QMonomial::q(QExponent::new(n, d))
    }

    fn mono(c: i64, n: i64, d: i64) -> QMonomial {
        QMonomial::int(c, n, d)
    }

    fn ints(terms: &[(i64, i64)], prec: i64) -> QSeries {
        QSeries::from_terms(terms.iter().map(|&(e, c)| (QExponent::from_int(e), GaussianRational::from_int(c))), Some(prec.into()))
    }

    fn exact(terms: &[(i64, i64)]) -> QSeries {
        QSeries::from_terms(terms.iter().map(|&(e, c)| (QExponent::from_int(e), GaussianRational::from_int(c))), None)
    }

    /// Independent oracle: the triple product side.
    fn jtp_product_side(x: &QMonomial, base: &QMonomial, order: &QExponent) -> QSeries {
        let mut margin = 16;
        loop {
            let wide = order + &QExponent::from_int(margin);
            let a = pochhammer_infinite(x, base, &wide).unwrap();
            let b = pochhammer_infinite(&base.div(x), base, &wide).unwrap();
            let c = pochhammer_infinite(base, base, &wide).unwrap();
            let p = a.mul(&b).mul(&c);
            if p.precision().is_none_or(|p| p >= order) {
                return p.truncate(order);
            }
            margin *= 2;
        }
    }

    #[test]
    fn pochhammer_finite_examples() {
        assert_eq!(pochhammer_finite(&q(1, 1), &q(1, 1), 0).unwrap(), exact(&[(0, 1)]));
        let b2 = q(2, 1);
        assert_eq!(pochhammer_finite(&q(1, 1), &b2, 2).unwrap(), exact(&[(0, 1), (1, -1), (3, -1), (4, 1)]));
        assert_eq!(pochhammer_finite(&mono(-1, 1, 1), &q(1, 1), 2).unwrap(), exact(&[(0, 1), (1, 1)]).mul(&exact(&[(0, 1), (2, 1)])));
    }

    #[test]
    fn pochhammer_infinite_examples() {
        let b = q(1, 1);
        let euler = pochhammer_infinite(&b, &b, &13.into()).unwrap();
        assert_eq!(euler, ints(&[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)], 13));
        assert_eq!(pochhammer_infinite(&q(100, 1), &b, &50.into()).unwrap(), ints(&[(0, 1)], 50));
        let distinct = pochhammer_infinite(&mono(-1, 1, 1), &b, &4.into()).unwrap();
        assert_eq!(distinct, ints(&[(0, 1), (1, 1), (2, 1), (3, 2)], 4));
    }

    #[test]
    fn pochhammer_with_negative_head() {
        // (q^{-1};q)_∞ = (1 - q^{-1})(1 - 1)... is exactly zero
        assert!(pochhammer_infinite(&q(-1, 1), &q(1, 1), &10.into()).unwrap().is_zero());
        let x = q(-3, 2);
        let got = pochhammer_infinite(&x, &q(1, 1), &8.into()).unwrap();
        let head = exact(&[(0, 1)]).mul_one_minus(&GaussianRational::one(), &QExponent::new(-3, 2));
        let head = head.mul_one_minus(&GaussianRational::one(), &QExponent::new(-1, 2));
        let tail = pochhammer_infinite(&q(1, 2), &q(1, 1), &10.into()).unwrap();
        assert_eq!(got, head.mul(&tail).truncate(&8.into()));
        assert_eq!(got.precision(), Some(&QExponent::from_int(8)));
    }

    #[test]
    fn jtp_examples() {
        let b = q(1, 1);
        for k in -3..4 {
            assert!(jtp(&q(k, 1), &b, &30.into()).unwrap().is_zero());
        }
        let got = jtp(&mono(-1, 0, 1), &b, &7.into()).unwrap();
        assert_eq!(got, ints(&[(0, 2), (1, 2), (3, 2), (6, 2)], 7));
        let j13 = jtp(&q(1, 1), &q(3, 1), &20.into()).unwrap();
        assert_eq!(j13, jtp_product_side(&q(1, 1), &q(3, 1), &20.into()));
    }

    #[test]
    fn named_products() {
        let o = QExponent::from_int(30);
        let j1 = j_m(&1.into(), &o).unwrap();
        let j2 = j_m(&2.into(), &o).unwrap();
        let j12 = j_am(&1.into(), &2.into(), &o).unwrap();
        assert_eq!(j12, j1.mul(&j1).mul(&j2.invert().unwrap()).truncate(&o));
        let jb01 = jbar_am(&0.into(), &1.into(), &o).unwrap();
        let want = j2.mul(&j2).scale(&GaussianRational::from_int(2)).mul(&j1.invert().unwrap()).truncate(&o);
        assert_eq!(jb01, want);
        let pent = j_m(&1.into(), &13.into()).unwrap();
        assert_eq!(pent, ints(&[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)], 13));
    }

    #[test]
    fn monomial_base() {
        // j(x;-q) against the product side with base -q
        let base = mono(-1, 1, 1);
        let x = q(2, 7);
        let o = QExponent::from_int(25);
        assert_eq!(jtp(&x, &base, &o).unwrap(), jtp_product_side(&x, &base, &o));
    }

    #[test]
    fn rejects_nonpositive_base() {
        assert_eq!(jtp(&q(1, 1), &q(0, 1), &5.into()), Err(Error::NonPositiveBase(0.into())));
    }

    fn arb_monomial() -> impl Strategy<Value = QMonomial> {
        (prop_oneof![Just(1i64), Just(-1), Just(2), Just(-3)], -20i64..20, prop_oneof![Just(1i64), Just(5), Just(7)])
            .prop_map(|(c, n, d)| QMonomial::int(c, n, d))
    }

    fn arb_base() -> impl Strategy<Value = QMonomial> {
        (prop_oneof![Just(1i64), Just(-1)], 1i64..4, prop_oneof![Just(1i64), Just(2)]).prop_map(|(c, n, d)| QMonomial::int(c, n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn sum_equals_product(x in arb_monomial(), base in arb_base()) {
            let o = QExponent::from_int(18);
            prop_assert_eq!(jtp(&x, &base, &o).unwrap(), jtp_product_side(&x, &base, &o));
        }

        #[test]
        fn quasi_periodicity(x in arb_monomial(), base in arb_base(), n in -3i64..4) {
            // j(B^n x;B) = (-1)^n B^{-binom(n,2)} x^{-n} j(x;B)
            let o = QExponent::from_int(20);
            let lhs = jtp(&base.pow(n).mul(&x), &base, &o).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let factor = base.pow(-(n * (n - 1) / 2)).mul(&x.pow(-n)).scale(&GaussianRational::from_int(sign)).unwrap();
            let wide = &o + &QExponent::from_int(60);
            let rhs = jtp(&x, &base, &wide).unwrap().mul_monomial(&factor);
            prop_assert!(lhs.first_difference(&rhs).is_none());
        }

        #[test]
        fn reflections(x in arb_monomial(), base in arb_base()) {
            // j(x;B) = j(B/x;B) = -x j(1/x;B)
            let o = QExponent::from_int(20);
            let a = jtp(&x, &base, &o).unwrap();
            let b = jtp(&base.div(&x), &base, &o).unwrap();
            let wide = &o + &QExponent::from_int(25);
            let c = jtp(&x.inv(), &base, &wide).unwrap().mul_monomial(&x.neg()).truncate(&o);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(&a, &c);
        }
    }
}
