//! Hecke-type double sums
//! `f_{a,b,c}(x,y,B) = sum_{sg(r)=sg(s)} sg(r) (-1)^{r+s} x^r y^s B^{a binom(r,2) + brs + c binom(s,2)}`
//! and direct `n, j` double loops.

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::number::{lcm, GaussianRational, QExponent};
use crate::series::{Accumulator, QMonomial, QSeries};
use crate::theta::{check_base, convex_argmin, convex_range};

/// Parameters of `f_{a,b,c}(x,y,B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: QMonomial,
    pub y: QMonomial,
    pub base: QMonomial,
}

impl HeckeSpec {
    pub fn new(a: i64, b: i64, c: i64, x: QMonomial, y: QMonomial, base: QMonomial) -> Result<Self> {
        check_base(&base)?;
        if a <= 0 || c <= 0 || b < 0 {
            return Err(Error::InvalidArgument(format!("f_{{a,b,c}} needs a, c > 0 and b >= 0, got ({a},{b},{c})")));
        }
        Ok(HeckeSpec { a, b, c, x, y, base })
    }
}

/// Integer data of a spec on the exponent lattice `1/den`.
struct Lattice {
    den: i64,
    a: i128,
    b: i128,
    c: i128,
    ex: i128,
    ey: i128,
}

impl Lattice {
    fn new(spec: &HeckeSpec, order: &QExponent) -> Self {
        let den = lcm(lcm(lcm(spec.base.exp().denom_i64(), spec.x.exp().denom_i64()), spec.y.exp().denom_i64()), order.denom_i64());
        let eb = spec.base.exp().scaled(den) as i128;
        Lattice {
            den,
            a: eb * spec.a as i128,
            b: eb * spec.b as i128,
            c: eb * spec.c as i128,
            ex: spec.x.exp().scaled(den) as i128,
            ey: spec.y.exp().scaled(den) as i128,
        }
    }

    fn row(&self, r: i128) -> i128 {
        self.a * r * (r - 1) / 2 + r * self.ex
    }

    fn col(&self, s: i128) -> i128 {
        self.c * s * (s - 1) / 2 + s * self.ey
    }

    fn expo(&self, r: i128, s: i128) -> i128 {
        self.row(r) + self.b * r * s + self.col(s)
    }
}

/// Quadrant index `i >= 0` to `r`: the identity or `-1 - i`.
fn unfold(i: i64, negative: bool) -> i128 {
    if negative {
        -1 - i as i128
    } else {
        i as i128
    }
}

const OUT: i128 = i128::MAX / 4;

fn coefficient(spec: &HeckeSpec, r: i64, s: i64) -> GaussianRational {
    let q2 = spec.a * (r * (r - 1) / 2) + spec.b * r * s + spec.c * (s * (s - 1) / 2);
    let mut c = spec.x.coeff().pow(r).mul_ref(&spec.y.coeff().pow(s));
    if !spec.base.coeff().is_one() {
        c = c.mul_ref(&spec.base.coeff().pow(q2));
    }
    let sign = if r >= 0 { 1 } else { -1 } * if (r + s).is_odd() { -1 } else { 1 };
    if sign < 0 {
        -c
    } else {
        c
    }
}

/// Output-sensitive enumeration: for each row solve the column interval.
pub fn f_abc(spec: &HeckeSpec, order: &QExponent) -> Result<QSeries> {
    let lat = Lattice::new(spec, order);
    let cut = order.scaled_ceil(lat.den) as i128;
    let mut acc = Accumulator::new(lat.den, Some(order));
    for negative in [false, true] {
        // E(r,s) >= row(r) + min_s col(s) on the quadrant, since brs >= 0 there
        let col_min = {
            let f = |j: i64| if j < 0 { OUT } else { lat.col(unfold(j, negative)) };
            f(convex_argmin(0, f))
        };
        let bound = |i: i64| if i < 0 { OUT } else { lat.row(unfold(i, negative)) + col_min };
        let (lo, hi) = convex_range(0, bound, cut);
        for i in lo..=hi {
            let r = unfold(i, negative);
            let f = |j: i64| if j < 0 { OUT } else { lat.expo(r, unfold(j, negative)) };
            let (jlo, jhi) = convex_range(0, f, cut);
            for j in jlo..=jhi {
                let s = unfold(j, negative);
                acc.add(lat.expo(r, s) as i64, &coefficient(spec, r as i64, s as i64));
            }
        }
    }
    Ok(acc.finish(Some(order.clone())))
}

/// Independent summation: box bounds from both one-variable lower bounds,
/// columns outer and rows inner.
pub fn f_abc_via_quadrants(spec: &HeckeSpec, order: &QExponent) -> Result<QSeries> {
    let lat = Lattice::new(spec, order);
    let cut = order.scaled_ceil(lat.den) as i128;
    let mut terms = Vec::new();
    for negative in [false, true] {
        let row = |k: i64| if k < 0 { OUT } else { lat.row(unfold(k, negative)) };
        let col = |k: i64| if k < 0 { OUT } else { lat.col(unfold(k, negative)) };
        let (rk, ck) = (convex_argmin(0, row), convex_argmin(0, col));
        let (row_min, col_min) = (row(rk), col(ck));
        let mut rmax = rk;
        while row(rmax + 1) + col_min < cut {
            rmax += 1;
        }
        let mut smax = ck;
        while col(smax + 1) + row_min < cut {
            smax += 1;
        }
        for sj in 0..=smax {
            for ri in 0..=rmax {
                let (r, s) = (unfold(ri, negative), unfold(sj, negative));
                let e = lat.expo(r, s);
                if e < cut {
                    terms.push((QExponent::new(e as i64, lat.den), coefficient(spec, r as i64, s as i64)));
                }
            }
        }
    }
    Ok(QSeries::from_terms(terms, Some(order.clone())))
}

/// `sum_{n>=0} sum_{j=-n-lo}^{n+hi} sn^n sj^j q^{a n^2 + b n + c j^2 + d j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NjSum {
    pub a: QExponent,
    pub b: QExponent,
    pub c: QExponent,
    pub d: QExponent,
    pub sn: GaussianRational,
    pub sj: GaussianRational,
    pub lo: i64,
    pub hi: i64,
}

impl NjSum {
    pub fn eval(&self, order: &QExponent) -> Result<QSeries> {
        let ac = &self.a + &self.c;
        if !self.a.is_positive() || !ac.is_positive() {
            return Err(Error::InvalidArgument("n,j sum needs a > 0 and a + c > 0".into()));
        }
        let mut den = order.denom_i64();
        for v in [&self.a, &self.b, &self.c, &self.d] {
            den = lcm(den, v.denom_i64());
        }
        let sc = |v: &QExponent| v.scaled(den) as i128;
        let (a, b, c, d) = (sc(&self.a), sc(&self.b), sc(&self.c), sc(&self.d));
        let e = |n: i128, j: i128| a * n * n + b * n + c * j * j + d * j;
        let cut = order.scaled_ceil(den) as i128;
        let (lo, hi) = (self.lo as i128, self.hi as i128);
        // interior minimiser of c j^2 + d j when c > 0
        let jv = if c > 0 { Some(Integer::div_floor(&(-d), &(2 * c))) } else { None };
        let bound = |n: i128| -> i128 {
            let (j0, j1) = (-n - lo, n + hi);
            if j0 > j1 {
                return OUT;
            }
            let mut m = e(n, j0).min(e(n, j1));
            if let Some(v) = jv {
                for j in [v, v + 1] {
                    if j > j0 && j < j1 {
                        m = m.min(e(n, j));
                    }
                }
            }
            m
        };
        // past every vertex (in n) of the pieces of the bound, it only grows
        let ceil_div = |p: i128, q: i128| -Integer::div_floor(&-p, &q);
        let mut settle = ceil_div(-(b + 2 * c * hi + d), 2 * (a + c)).max(ceil_div(-(b + 2 * c * lo - d), 2 * (a + c)));
        if let Some(v) = jv {
            settle = settle.max(ceil_div(-b, 2 * a)).max(v.abs() + lo.abs() + hi.abs() + 1);
        }
        let mut acc = Accumulator::new(den, Some(order));
        let mut n: i128 = 0;
        loop {
            let m = bound(n);
            if m >= cut && n > settle {
                break;
            }
            if m < cut {
                let sn = self.sn.pow(n as i64);
                for j in (-n - lo)..=(n + hi) {
                    let ex = e(n, j);
                    if ex < cut {
                        acc.add(ex as i64, &sn.mul_ref(&self.sj.pow(j as i64)));
                    }
                }
            }
            n += 1;
        }
        Ok(acc.finish(Some(order.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::j_m;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> QMonomial {
        QMonomial::q(QExponent::new(n, d))
    }

    fn spec(a: i64, b: i64, c: i64, x: QMonomial, y: QMonomial) -> HeckeSpec {
        HeckeSpec::new(a, b, c, x, y, q(1, 1)).unwrap()
    }

    #[test]
    fn constant_term() {
        let f = f_abc(&spec(3, 5, 3, q(2, 1), q(3, 1)), &10.into()).unwrap();
        assert_eq!(f.coeff(&0.into()).unwrap(), GaussianRational::from_int(1));
        assert_eq!(f.lowdeg(), Some(QExponent::zero()));
    }

    #[test]
    fn j1_squared() {
        // J_1^2 = f_{1,7,1}(q,q^2,q) - q f_{1,7,1}(q^3,q^4,q)
        let o = QExponent::from_int(60);
        let a = f_abc(&spec(1, 7, 1, q(1, 1), q(2, 1)), &o).unwrap();
        let b = f_abc(&spec(1, 7, 1, q(3, 1), q(4, 1)), &o).unwrap().mul_monomial(&q(1, 1));
        let j1 = j_m(&1.into(), &o).unwrap();
        assert_eq!(a.sub(&b), j1.mul(&j1));
    }

    #[test]
    fn nj_matches_f171() {
        // sum q^{2n^2+n}(1-q^{2n+1}) sum_j (-1)^j q^{-3j^2/2+j/2} = J_1^2
        let o = QExponent::from_int(50);
        let mk = |b: i64| NjSum {
            a: 2.into(),
            b: b.into(),
            c: QExponent::new(-3, 2),
            d: QExponent::new(1, 2),
            sn: GaussianRational::from_int(1),
            sj: GaussianRational::from_int(-1),
            lo: 0,
            hi: 0,
        };
        let s = mk(1).eval(&o).unwrap().sub(&mk(3).eval(&o).unwrap().mul_monomial(&q(1, 1)));
        let j1 = j_m(&1.into(), &o).unwrap();
        assert_eq!(s, j1.mul(&j1));
    }

    #[test]
    fn empty_at_order_zero() {
        let s = spec(1, 2, 1, q(1, 1), q(1, 1));
        assert!(f_abc(&s, &0.into()).unwrap().is_zero());
        assert_eq!(f_abc(&s, &0.into()).unwrap(), f_abc_via_quadrants(&s, &0.into()).unwrap());
    }

    fn arb_spec() -> impl Strategy<Value = HeckeSpec> {
        (
            1i64..4,
            0i64..8,
            1i64..4,
            -12i64..12,
            -12i64..12,
            prop_oneof![Just(1i64), Just(5), Just(7)],
            prop_oneof![Just(1i64), Just(-1)],
            prop_oneof![Just(1i64), Just(-1)],
        )
            .prop_map(|(a, b, c, ex, ey, d, sx, sy)| {
                HeckeSpec::new(a, b, c, QMonomial::int(sx, ex, d), QMonomial::int(sy, ey, d), q(1, 1)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn quadrant_oracle(s in arb_spec()) {
            let o = QExponent::from_int(30);
            prop_assert_eq!(f_abc(&s, &o).unwrap(), f_abc_via_quadrants(&s, &o).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn recurrences(s in arb_spec()) {
            let o = QExponent::from_int(30);
            let w = QExponent::from_int(70);
            let (a, b, c) = (s.a, s.b, s.c);
            let f = |x: QMonomial, y: QMonomial, base: QMonomial| f_abc(&HeckeSpec::new(a, b, c, x, y, base).unwrap(), &w).unwrap();
            let (x, y, one) = (s.x.clone(), s.y.clone(), q(1, 1));
            let lhs = f(x.clone(), y.clone(), one.clone()).truncate(&o);
            let qi = |k: i64| QMonomial::q_int(k);

            let spec1 = f(x.mul(&qi(b)), y.mul(&qi(c)), one.clone()).mul_monomial(&y.neg())
                .add(&crate::theta::jtp(&x, &qi(a), &w).unwrap());
            prop_assert_eq!(&lhs, &spec1.truncate(&o));

            let spec2 = f(x.mul(&qi(a)), y.mul(&qi(b)), one.clone()).mul_monomial(&x.neg())
                .add(&crate::theta::jtp(&y, &qi(c), &w).unwrap());
            prop_assert_eq!(&lhs, &spec2.truncate(&o));

            let flip = f(qi(2 * a + b).div(&x), qi(2 * c + b).div(&y), one.clone())
                .mul_monomial(&qi(a + b + c).div(&x.mul(&y)).neg());
            prop_assert_eq!(&lhs, &flip.truncate(&o));

            let (x2, y2, q4) = (x.pow(2).neg(), y.pow(2).neg(), qi(4));
            let mod2 = f(x2.mul(&qi(a)), y2.mul(&qi(c)), q4.clone())
                .sub(&f(x2.mul(&qi(3 * a)), y2.mul(&qi(c + 2 * b)), q4.clone()).mul_monomial(&x))
                .sub(&f(x2.mul(&qi(a + 2 * b)), y2.mul(&qi(3 * c)), q4.clone()).mul_monomial(&y))
                .add(&f(x2.mul(&qi(3 * a + 2 * b)), y2.mul(&qi(3 * c + 2 * b)), q4).mul_monomial(&x.mul(&y).mul(&qi(b))));
            prop_assert_eq!(&lhs, &mod2.truncate(&o));
        }
    }
}
