//! Truncated sparse Puiseux series in `q` with Gaussian-rational
//! coefficients.
//!
//! A series stores its exponents as integers over a per-series common
//! denominator, so every exponent operation is exact integer arithmetic.
//! The precision is a strict bound: every coefficient below it is known.
//! Exact Laurent polynomials (monomials, finite products) carry no bound.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Bound::{Excluded, Unbounded};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{lcm, GaussianRational, QExponent};

/// `coeff * q^exp` with a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMonomial {
    coeff: GaussianRational,
    exp: QExponent,
}

impl QMonomial {
    pub fn new(coeff: GaussianRational, exp: QExponent) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::InvalidArgument("monomial coefficient must be nonzero".into()));
        }
        Ok(QMonomial { coeff, exp })
    }

    /// `q^exp`.
    pub fn q(exp: QExponent) -> Self {
        QMonomial { coeff: GaussianRational::one(), exp }
    }

    pub fn q_int(exp: i64) -> Self {
        QMonomial::q(QExponent::from_int(exp))
    }

    /// `c * q^exp` for integer `c` and rational `num/den`; panics on `c == 0`.
    pub fn int(c: i64, num: i64, den: i64) -> Self {
        QMonomial::new(GaussianRational::from_int(c), QExponent::new(num, den)).expect("nonzero coefficient")
    }

    pub fn constant(coeff: GaussianRational) -> Result<Self> {
        QMonomial::new(coeff, QExponent::zero())
    }

    pub fn one() -> Self {
        QMonomial::q_int(0)
    }

    pub fn coeff(&self) -> &GaussianRational {
        &self.coeff
    }

    pub fn exp(&self) -> &QExponent {
        &self.exp
    }

    pub fn mul(&self, other: &QMonomial) -> QMonomial {
        QMonomial { coeff: &self.coeff * &other.coeff, exp: &self.exp + &other.exp }
    }

    pub fn inv(&self) -> QMonomial {
        QMonomial { coeff: self.coeff.inv().expect("nonzero"), exp: -&self.exp }
    }

    pub fn div(&self, other: &QMonomial) -> QMonomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> QMonomial {
        QMonomial { coeff: self.coeff.pow(k), exp: self.exp.mul_int(k) }
    }

    /// `self^k` for rational `k`; a non-integral power needs coefficient 1.
    pub fn pow_rational(&self, k: &QExponent) -> Result<QMonomial> {
        if let Some(n) = k.to_i64() {
            return Ok(self.pow(n));
        }
        if !self.coeff.is_one() {
            return Err(Error::InvalidArgument(format!("non-integral power {k} of a monomial with coefficient {}", self.coeff)));
        }
        Ok(QMonomial::q(&self.exp * k))
    }

    pub fn neg(&self) -> QMonomial {
        QMonomial { coeff: -&self.coeff, exp: self.exp.clone() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Result<QMonomial> {
        QMonomial::new(&self.coeff * c, self.exp.clone())
    }

    /// `q^e * self`.
    pub fn shift(&self, e: &QExponent) -> QMonomial {
        QMonomial { coeff: self.coeff.clone(), exp: &self.exp + e }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exp.is_zero()
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, &self.coeff, &self.exp, true)
    }
}

/// A truncated series `sum c_e q^e (+ O(q^precision))`.
#[derive(Clone, Debug)]
pub struct QSeries {
    den: i64,
    /// Ascending by exponent index; no zero coefficients; all below the cutoff.
    terms: Vec<(i64, GaussianRational)>,
    precision: Option<QExponent>,
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.precision == other.precision && self.first_difference(other).is_none()
    }
}

impl QSeries {
    pub fn zero(precision: QExponent) -> Self {
        QSeries { den: 1, terms: Vec::new(), precision: Some(precision) }
    }

    pub fn zero_exact() -> Self {
        QSeries { den: 1, terms: Vec::new(), precision: None }
    }

    pub fn one_exact() -> Self {
        QSeries::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(0, c)] };
        QSeries { den: 1, terms, precision: None }
    }

    pub fn monomial(m: &QMonomial) -> Self {
        let den = m.exp.denom_i64();
        QSeries { den, terms: vec![(m.exp.scaled(den), m.coeff.clone())], precision: None }
    }

    /// Builds a series from arbitrary `(exponent, coefficient)` pairs; like
    /// terms are combined and anything at or beyond `precision` is dropped.
    pub fn from_terms<I>(terms: I, precision: Option<QExponent>) -> Self
    where
        I: IntoIterator<Item = (QExponent, GaussianRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut den = precision.as_ref().map_or(1, |p| p.denom_i64());
        for (e, _) in &terms {
            den = lcm(den, e.denom_i64());
        }
        let mut acc = Accumulator::new(den, precision.as_ref());
        for (e, c) in terms {
            acc.add(e.scaled(den), &c);
        }
        acc.finish(precision)
    }

    pub fn precision(&self) -> Option<&QExponent> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// True when no coefficient below the precision is nonzero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Common denominator of the stored exponents.
    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn terms(&self) -> impl Iterator<Item = (QExponent, &GaussianRational)> + '_ {
        self.terms.iter().map(move |(k, c)| (QExponent::new(*k, self.den), c))
    }

    /// Least stored exponent; `None` for the zero series.
    pub fn lowdeg(&self) -> Option<QExponent> {
        self.terms.first().map(|(k, _)| QExponent::new(*k, self.den))
    }

    /// Least stored exponent, or the precision for a zero series; `None` only
    /// for the exact zero.
    fn lowdeg_or_precision(&self) -> Option<QExponent> {
        self.lowdeg().or_else(|| self.precision.clone())
    }

    pub fn leading(&self) -> Option<QMonomial> {
        self.terms.first().map(|(k, c)| QMonomial { coeff: c.clone(), exp: QExponent::new(*k, self.den) })
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    pub fn coeff(&self, e: &QExponent) -> Result<GaussianRational> {
        if let Some(p) = &self.precision {
            if e >= p {
                return Err(Error::BeyondPrecision { exponent: Box::new(e.clone()), precision: Box::new(p.clone()) });
            }
        }
        let scaled = e.value() * num_rational::BigRational::from_integer(self.den.into());
        if !scaled.is_integer() {
            return Ok(GaussianRational::zero());
        }
        let k: i64 = match num_traits::ToPrimitive::to_i64(&scaled.to_integer()) {
            Some(k) => k,
            None => return Ok(GaussianRational::zero()),
        };
        Ok(self
            .terms
            .binary_search_by_key(&k, |(i, _)| *i)
            .map(|idx| self.terms[idx].1.clone())
            .unwrap_or_else(|_| GaussianRational::zero()))
    }

    fn rescaled_terms(&self, den: i64) -> impl Iterator<Item = (i64, &GaussianRational)> + '_ {
        let f = den / self.den;
        self.terms.iter().map(move |(k, c)| (k * f, c))
    }

    /// Lowers the precision to at most `order`.
    pub fn truncate(&self, order: &QExponent) -> QSeries {
        let precision = match &self.precision {
            Some(p) if p <= order => return self.clone(),
            _ => order.clone(),
        };
        let den = lcm(self.den, precision.denom_i64());
        let cut = precision.scaled_ceil(den);
        let f = den / self.den;
        let terms = self.terms.iter().filter(|(k, _)| k * f < cut).map(|(k, c)| (*k, c.clone())).collect();
        QSeries { den: self.den, terms, precision: Some(precision) }
    }

    pub fn neg(&self) -> QSeries {
        QSeries { den: self.den, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), precision: self.precision.clone() }
    }

    pub fn scale(&self, c: &GaussianRational) -> QSeries {
        if c.is_zero() {
            return QSeries { den: 1, terms: Vec::new(), precision: self.precision.clone() };
        }
        QSeries { den: self.den, terms: self.terms.iter().map(|(k, v)| (*k, v.mul_ref(c))).collect(), precision: self.precision.clone() }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.combine(other, true)
    }

    fn combine(&self, other: &QSeries, negate: bool) -> QSeries {
        let precision = min_precision(self.precision.as_ref(), other.precision.as_ref());
        let mut den = lcm(self.den, other.den);
        if let Some(p) = &precision {
            den = lcm(den, p.denom_i64());
        }
        let cut = precision.as_ref().map(|p| p.scaled_ceil(den));
        let below = |k: i64| cut.is_none_or(|c| k < c);
        let mut a = self.rescaled_terms(den).filter(|(k, _)| below(*k)).peekable();
        let mut b = other.rescaled_terms(den).filter(|(k, _)| below(*k)).peekable();
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ka, ca)), Some(&(kb, cb))) => {
                    if ka < kb {
                        terms.push((ka, ca.clone()));
                        a.next();
                    } else if kb < ka {
                        terms.push((kb, if negate { -cb } else { cb.clone() }));
                        b.next();
                    } else {
                        let mut s = ca.clone();
                        if negate {
                            s -= cb;
                        } else {
                            s += cb;
                        }
                        if !s.is_zero() {
                            terms.push((ka, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&(ka, ca)), None) => {
                    terms.push((ka, ca.clone()));
                    a.next();
                }
                (None, Some(&(kb, cb))) => {
                    terms.push((kb, if negate { -cb } else { cb.clone() }));
                    b.next();
                }
                (None, None) => break,
            }
        }
        QSeries { den, terms, precision }.normalized()
    }

    /// Product. The precision is `min(a.prec + lowdeg(b), b.prec + lowdeg(a))`
    /// where a zero factor contributes its precision as its lowdeg.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (la, lb) = (self.lowdeg_or_precision(), other.lowdeg_or_precision());
        let (la, lb) = match (la, lb) {
            (Some(la), Some(lb)) => (la, lb),
            // one factor is the exact zero
            _ => return QSeries::zero_exact(),
        };
        let pa = self.precision.as_ref().map(|p| p + &lb);
        let pb = other.precision.as_ref().map(|p| p + &la);
        let precision = min_precision(pa.as_ref(), pb.as_ref());
        let mut den = lcm(self.den, other.den);
        if let Some(p) = &precision {
            den = lcm(den, p.denom_i64());
        }
        let cut = precision.as_ref().map(|p| p.scaled_ceil(den));
        let a: Vec<(i64, &GaussianRational)> = self.rescaled_terms(den).collect();
        let b: Vec<(i64, &GaussianRational)> = other.rescaled_terms(den).collect();
        let mut acc = Accumulator::with_span(den, cut, a.first().map(|t| t.0), b.first().map(|t| t.0), a.len() * b.len());
        for &(ka, ca) in &a {
            for &(kb, cb) in &b {
                let k = ka + kb;
                if let Some(c) = cut {
                    if k >= c {
                        break;
                    }
                }
                acc.add_mul(k, ca, cb);
            }
        }
        acc.finish(precision)
    }

    /// `self * m` for a monomial `m`; exact shift of every exponent.
    pub fn mul_monomial(&self, m: &QMonomial) -> QSeries {
        let den = lcm(self.den, m.exp.denom_i64());
        let shift = m.exp.scaled(den);
        let f = den / self.den;
        QSeries {
            den,
            terms: self.terms.iter().map(|(k, c)| (k * f + shift, c.mul_ref(&m.coeff))).collect(),
            precision: self.precision.as_ref().map(|p| p + &m.exp),
        }
        .normalized()
    }

    /// Multiplicative inverse; precision `a.prec - 2*lowdeg(a)`. An exact
    /// monomial inverts exactly; any other exact series needs
    /// [`QSeries::inverse_to`].
    pub fn invert(&self) -> Result<QSeries> {
        self.inverse_to(None)
    }

    /// Inverse with precision at most `order` (required when `self` is exact
    /// and not a monomial).
    pub fn inverse_to(&self, order: Option<&QExponent>) -> Result<QSeries> {
        let (low, c0) = match self.terms.first() {
            Some((k, c)) => (*k, c.clone()),
            None => return Err(Error::ZeroSeries),
        };
        let low_exp = QExponent::new(low, self.den);
        let inv0 = c0.inv().expect("nonzero leading coefficient");
        if self.precision.is_none() && self.terms.len() == 1 {
            return Ok(QSeries { den: self.den, terms: vec![(-low, inv0)], precision: None });
        }
        let natural = self.precision.as_ref().map(|p| p - &low_exp.mul_int(2));
        let precision = match min_precision(natural.as_ref(), order) {
            Some(p) => p,
            None => return Err(Error::InfiniteExpansion),
        };
        let den = lcm(self.den, precision.denom_i64());
        let f = den / self.den;
        let low = low * f;
        // v = 1/u with u = self / (c0 q^low), computed on exponent indices >= 0.
        let vcut = precision.scaled_ceil(den) + low;
        if vcut <= 0 {
            return Ok(QSeries::zero(precision));
        }
        let unit: Vec<(usize, GaussianRational)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(k, c)| ((k * f - low) as usize, -c.mul_ref(&inv0)))
            .take_while(|(d, _)| (*d as i64) < vcut)
            .collect();
        let n = vcut as usize;
        let mut v: Vec<Option<GaussianRational>> = vec![None; n];
        v[0] = Some(GaussianRational::one());
        for k in 1..n {
            let mut sum: Option<GaussianRational> = None;
            for (d, ud) in &unit {
                if *d > k {
                    break;
                }
                if let Some(prev) = &v[k - d] {
                    match &mut sum {
                        Some(s) => s.add_mul(ud, prev),
                        None => sum = Some(ud.mul_ref(prev)),
                    }
                }
            }
            v[k] = sum.filter(|s| !s.is_zero());
        }
        let terms = v.into_iter().enumerate().filter_map(|(k, c)| c.map(|c| (k as i64 - low, c.mul_ref(&inv0)))).collect();
        Ok(QSeries { den, terms, precision: Some(precision) }.normalized())
    }

    /// Integer power; negative powers go through [`QSeries::inverse_to`].
    pub fn pow(&self, k: i64, order: Option<&QExponent>) -> Result<QSeries> {
        if k < 0 {
            return self.inverse_to(order)?.pow(-k, order);
        }
        let mut result = QSeries::one_exact();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// `q -> q^k` for rational `k > 0`.
    pub fn substitute_power(&self, k: &QExponent) -> Result<QSeries> {
        if !k.is_positive() {
            return Err(Error::NonPositivePower(k.clone()));
        }
        let p = num_traits::ToPrimitive::to_i64(k.numer()).expect("substitution power fits i64");
        let r = k.denom_i64();
        QSeries {
            den: self.den * r,
            terms: self.terms.iter().map(|(e, c)| (e * p, c.clone())).collect(),
            precision: self.precision.as_ref().map(|prec| prec * k),
        }
        .normalized_checked()
    }

    /// `q -> -q`; every stored exponent must be an integer.
    pub fn negate_variable(&self) -> Result<QSeries> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            if k % self.den != 0 {
                return Err(Error::FractionalExponent(QExponent::new(*k, self.den)));
            }
            let e = k / self.den;
            terms.push((*k, if e % 2 == 0 { c.clone() } else { -c }));
        }
        Ok(QSeries { den: self.den, terms, precision: self.precision.clone() })
    }

    /// `self * (1 - c q^k)`.
    pub fn mul_one_minus(&self, c: &GaussianRational, k: &QExponent) -> QSeries {
        match QMonomial::new(-c, k.clone()) {
            Ok(m) => self.add(&self.mul_monomial(&m)),
            Err(_) => self.clone(),
        }
    }

    /// `self / (1 - c q^k)`, expanded in ascending powers of `q`. For `k < 0`
    /// the rewrite `1/(1 - c q^k) = -c^{-1} q^{-k} / (1 - c^{-1} q^{-k})` is used.
    pub fn div_one_minus(&self, c: &GaussianRational, k: &QExponent, order: Option<&QExponent>) -> Result<QSeries> {
        if c.is_zero() {
            return Ok(match order {
                Some(o) => self.truncate(o),
                None => self.clone(),
            });
        }
        if k.is_zero() {
            let d = &GaussianRational::one() - c;
            if d.is_zero() {
                return Err(Error::PoleAtOne);
            }
            let s = self.scale(&d.inv().expect("nonzero"));
            return Ok(match order {
                Some(o) => s.truncate(o),
                None => s,
            });
        }
        if k.is_negative() {
            let cinv = c.inv().expect("nonzero");
            let shifted = self.mul_monomial(&QMonomial { coeff: -&cinv, exp: -k });
            return shifted.div_one_minus(&cinv, &-k, order);
        }
        let precision = match min_precision(self.precision.as_ref(), order) {
            Some(p) => p,
            None => {
                if self.terms.is_empty() {
                    return Ok(self.clone());
                }
                return Err(Error::InfiniteExpansion);
            }
        };
        let den = lcm(lcm(self.den, k.denom_i64()), precision.denom_i64());
        let step = k.scaled(den);
        let cut = precision.scaled_ceil(den);
        let mut map: BTreeMap<i64, GaussianRational> =
            self.rescaled_terms(den).filter(|(i, _)| *i < cut).map(|(i, v)| (i, v.clone())).collect();
        let mut cursor = match map.keys().next() {
            Some(&first) => first,
            None => return Ok(QSeries::zero(precision)),
        };
        loop {
            let val = map[&cursor].clone();
            let target = cursor + step;
            if target < cut && !val.is_zero() {
                let add = val.mul_ref(c);
                map.entry(target).and_modify(|e| *e += &add).or_insert(add);
            }
            match map.range((Excluded(cursor), Unbounded)).next() {
                Some((&next, _)) => cursor = next,
                None => break,
            }
        }
        let terms = map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(QSeries { den, terms, precision: Some(precision) }.normalized())
    }

    /// Least exponent (below both precisions) at which `self` and `other`
    /// differ, with the difference `self - other` there.
    pub fn first_difference(&self, other: &QSeries) -> Option<(QExponent, GaussianRational)> {
        let d = self.sub(other);
        d.terms.first().map(|(k, c)| (QExponent::new(*k, d.den), c.clone()))
    }

    /// Drops unrepresentable zeros and reduces the common denominator.
    fn normalized(mut self) -> QSeries {
        self.terms.retain(|(_, c)| !c.is_zero());
        let g = self.terms.iter().fold(self.den, |g, (k, _)| g.gcd(k));
        if g > 1 {
            self.den /= g;
            for (k, _) in &mut self.terms {
                *k /= g;
            }
        }
        self
    }

    fn normalized_checked(self) -> Result<QSeries> {
        Ok(self.normalized())
    }
}

pub(crate) fn min_precision(a: Option<&QExponent>, b: Option<&QExponent>) -> Option<QExponent> {
    match (a, b) {
        (Some(a), Some(b)) => Some(QExponent::min_of(a, b)),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(b.clone()),
        (None, None) => None,
    }
}

/// Collects `(index, coefficient)` contributions on a fixed lattice `1/den`,
/// dropping anything at or beyond the cutoff.
pub(crate) struct Accumulator {
    den: i64,
    cut: Option<i64>,
    dense: Option<(i64, Vec<Option<GaussianRational>>)>,
    sparse: HashMap<i64, GaussianRational>,
}

const DENSE_LIMIT: i64 = 1 << 18;

impl Accumulator {
    pub(crate) fn new(den: i64, precision: Option<&QExponent>) -> Self {
        Accumulator { den, cut: precision.map(|p| p.scaled_ceil(den)), dense: None, sparse: HashMap::new() }
    }

    fn with_span(den: i64, cut: Option<i64>, lo_a: Option<i64>, lo_b: Option<i64>, work: usize) -> Self {
        let dense = match (cut, lo_a, lo_b) {
            (Some(c), Some(a), Some(b)) if c > a + b => {
                let span = c - (a + b);
                // dense storage pays off only when the product fills it reasonably
                if span <= DENSE_LIMIT && (span as usize) <= work.saturating_mul(4) {
                    Some((a + b, vec![None; span as usize]))
                } else {
                    None
                }
            }
            _ => None,
        };
        Accumulator { den, cut, dense, sparse: HashMap::new() }
    }

    pub(crate) fn below_cut(&self, k: i64) -> bool {
        self.cut.is_none_or(|c| k < c)
    }

    fn slot(&mut self, k: i64) -> Option<&mut Option<GaussianRational>> {
        match &mut self.dense {
            Some((lo, v)) if k >= *lo && ((k - *lo) as usize) < v.len() => Some(&mut v[(k - *lo) as usize]),
            _ => None,
        }
    }

    pub(crate) fn add(&mut self, k: i64, c: &GaussianRational) {
        if !self.below_cut(k) || c.is_zero() {
            return;
        }
        if let Some(slot) = self.slot(k) {
            match slot {
                Some(v) => *v += c,
                None => *slot = Some(c.clone()),
            }
            return;
        }
        self.sparse.entry(k).and_modify(|v| *v += c).or_insert_with(|| c.clone());
    }

    pub(crate) fn add_mul(&mut self, k: i64, a: &GaussianRational, b: &GaussianRational) {
        if !self.below_cut(k) {
            return;
        }
        if let Some(slot) = self.slot(k) {
            match slot {
                Some(v) => v.add_mul(a, b),
                None => *slot = Some(a.mul_ref(b)),
            }
            return;
        }
        match self.sparse.get_mut(&k) {
            Some(v) => v.add_mul(a, b),
            None => {
                self.sparse.insert(k, a.mul_ref(b));
            }
        }
    }

    pub(crate) fn finish(self, precision: Option<QExponent>) -> QSeries {
        let mut terms: Vec<(i64, GaussianRational)> = self.sparse.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if let Some((lo, v)) = self.dense {
            terms.extend(v.into_iter().enumerate().filter_map(|(i, c)| c.filter(|c| !c.is_zero()).map(|c| (lo + i as i64, c))));
        }
        terms.sort_unstable_by_key(|(k, _)| *k);
        QSeries { den: self.den, terms, precision }.normalized()
    }
}

fn write_exponent(f: &mut fmt::Formatter<'_>, e: &QExponent) -> fmt::Result {
    if e == &1 {
        write!(f, "q")
    } else if e.is_integer() && !e.is_negative() {
        write!(f, "q^{e}")
    } else {
        write!(f, "q^({e})")
    }
}

/// Writes `c*q^e`; with `first == false` the sign is rendered as ` + ` / ` - `.
fn write_term(f: &mut fmt::Formatter<'_>, c: &GaussianRational, e: &QExponent, first: bool) -> fmt::Result {
    let negative_real = c.is_real() && c.re() < &num_rational::BigRational::zero();
    let shown = if negative_real { -c } else { c.clone() };
    match (first, negative_real) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    if e.is_zero() {
        return write!(f, "{shown}");
    }
    if !shown.is_one() {
        write!(f, "{shown}*")?;
    }
    write_exponent(f, e)
}

impl fmt::Display for QSeries {
    /// Ascending terms; a zero series renders as `0 (+O(q^P))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
            if let Some(p) = &self.precision {
                write!(f, " (+O(")?;
                write_exponent(f, p)?;
                write!(f, "))")?;
            }
            return Ok(());
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            write_term(f, c, &QExponent::new(*k, self.den), i == 0)?;
        }
        Ok(())
    }
}

/// Expansion of `1/(1 - c q^k)` to precision `order`.
pub fn unit_fraction_expand(c: &GaussianRational, k: &QExponent, order: &QExponent) -> Result<QSeries> {
    if k.is_zero() && c.is_one() {
        return Err(Error::PoleAtOne);
    }
    QSeries::one_exact().div_one_minus(c, k, Some(order))
}
