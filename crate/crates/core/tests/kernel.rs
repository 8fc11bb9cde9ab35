use proptest::prelude::*;
use qmock_core::appell::appell_m;
use qmock_core::theta::{jtp, pochhammer_infinite};
use qmock_core::{unit_fraction_expand, GaussianRational, QExponent, QMonomial, QSeries};

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -2i64..=2, 1i64..=3).prop_filter_map("zero", |(re, im, d)| {
        let c = &GaussianRational::from_ratio(re, d) + &GaussianRational::from_ratio(im, 1).mul_ref(&GaussianRational::i());
        (c != GaussianRational::from_int(0)).then_some(c)
    })
}

/// Sparse series on exponents `k/den`, `-3 <= k/den < 12`, optionally exact.
fn series() -> impl Strategy<Value = QSeries> {
    (
        prop_oneof![Just(1i64), Just(2), Just(3)],
        prop::collection::vec((-6i64..24, coeff()), 0..8),
        prop_oneof![Just(None), (6i64..14).prop_map(Some)],
    )
        .prop_map(|(den, terms, prec)| {
            let terms = terms.into_iter().map(|(k, c)| (QExponent::new(k, 2 * den), c));
            QSeries::from_terms(terms, prec.map(QExponent::from_int))
        })
}

fn unit_leading() -> impl Strategy<Value = QSeries> {
    (series(), -4i64..4, coeff(), 8i64..16).prop_map(|(s, low, c0, prec)| {
        let low = QExponent::new(low, 2);
        let tail = s.truncate(&QExponent::from_int(prec)).mul_monomial(&QMonomial::q(&low + &QExponent::from_int(4)));
        QSeries::monomial(&QMonomial::new(c0, low).unwrap()).add(&tail)
    })
}

fn agree(a: &QSeries, b: &QSeries) -> bool {
    a.first_difference(b).is_none()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn commutative(a in series(), b in series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn associative(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&a.add(&b).add(&c), &a.add(&b.add(&c))));
        let l = a.mul(&b).mul(&c);
        let r = a.mul(&b.mul(&c));
        prop_assert!(agree(&l, &r));
        prop_assert_eq!(l.precision(), r.precision());
    }

    #[test]
    fn distributive(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn invert_round_trip(a in unit_leading()) {
        let inv = a.invert().unwrap();
        let low = a.lowdeg().unwrap();
        let p = a.precision().unwrap();
        prop_assert_eq!(inv.precision(), Some(&(p - &low.mul_int(2))));
        let one = a.mul(&inv);
        prop_assert_eq!(one.precision(), Some(&(p - &low)));
        prop_assert!(agree(&one, &QSeries::one_exact()));
    }

    #[test]
    fn inverse_of_exact(a in unit_leading(), n in 4i64..20) {
        let exact = QSeries::from_terms(a.terms().map(|(e, c)| (e, c.clone())), None);
        let o = QExponent::from_int(n);
        let inv = exact.inverse_to(Some(&o)).unwrap();
        prop_assert!(agree(&exact.mul(&inv), &QSeries::one_exact()));
    }

    #[test]
    fn substitution_homomorphism(a in series(), b in series(), k in prop_oneof![Just((1i64, 2i64)), Just((2, 1)), Just((3, 1)), Just((2, 3))]) {
        let k = QExponent::new(k.0, k.1);
        let s = |x: &QSeries| x.substitute_power(&k).unwrap();
        prop_assert_eq!(s(&a.mul(&b)), s(&a).mul(&s(&b)));
        prop_assert_eq!(s(&a.add(&b)), s(&a).add(&s(&b)));
    }

    #[test]
    fn precision_soundness(a in unit_leading(), b in series(), m in 2i64..10, extra in 1i64..10) {
        let (lo, hi) = (QExponent::from_int(m), QExponent::from_int(m + extra));
        let exact = QSeries::from_terms(a.terms().map(|(e, c)| (e, c.clone())), None);
        prop_assert!(agree(&exact.inverse_to(Some(&lo)).unwrap(), &exact.inverse_to(Some(&hi)).unwrap()));
        // a coarser input never contradicts a finer one
        prop_assert!(agree(&a.truncate(&lo).mul(&b), &a.mul(&b)));
        prop_assert!(agree(&a.truncate(&lo).invert().unwrap(), &a.invert().unwrap()));
        let c = GaussianRational::from_ratio(m, 3);
        let k = QExponent::new(extra, 2);
        prop_assert!(agree(&unit_fraction_expand(&c, &k, &lo).unwrap(), &unit_fraction_expand(&c, &k, &hi).unwrap()));
    }

    #[test]
    fn theta_precision_soundness(e in -12i64..12, d in prop_oneof![Just(1i64), Just(5), Just(7)], sign in prop_oneof![Just(1i64), Just(-1)], m in 2i64..12, extra in 1i64..12) {
        let x = QMonomial::int(sign, e, d);
        let base = QMonomial::q_int(1);
        let (lo, hi) = (QExponent::from_int(m), QExponent::from_int(m + extra));
        prop_assert!(agree(&jtp(&x, &base, &lo).unwrap(), &jtp(&x, &base, &hi).unwrap()));
        if e > 0 {
            prop_assert!(agree(&pochhammer_infinite(&x, &base, &lo).unwrap(), &pochhammer_infinite(&x, &base, &hi).unwrap()));
        }
        let z = QMonomial::q(QExponent::new(1, 3));
        let small = appell_m(&x, &base, &z, &lo).unwrap();
        prop_assert_eq!(small.precision(), Some(&lo));
        prop_assert!(agree(&small, &appell_m(&x, &base, &z, &hi).unwrap()));
    }
}
