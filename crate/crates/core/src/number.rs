//! Exact scalars: Gaussian rationals for coefficients and rationals for
//! exponents of `q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact complex number `re + im*i` with arbitrary-precision rational
/// parts. `BigRational` keeps both parts in lowest terms, so derived
/// equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::real(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::real(BigRational::new(num.into(), den.into()))
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Integer power; negative exponents invert. Panics on `0^-k`.
    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inv().expect("negative power of zero").pow(-k);
        }
        if let Some(sign) = self.unit_sign() {
            return if sign > 0 || k % 2 == 0 { GaussianRational::one() } else { -GaussianRational::one() };
        }
        let mut result = GaussianRational::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `Some(±1)` when the value is `±1`.
    fn unit_sign(&self) -> Option<i8> {
        if !self.im.is_zero() || !self.re.is_integer() {
            return None;
        }
        let n = self.re.numer();
        if n.is_one() {
            Some(1)
        } else if (-n).is_one() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        if self.im.is_zero() {
            if rhs.im.is_zero() {
                return GaussianRational::real(&self.re * &rhs.re);
            }
            return GaussianRational { re: &self.re * &rhs.re, im: &self.re * &rhs.im };
        }
        if rhs.im.is_zero() {
            return GaussianRational { re: &self.re * &rhs.re, im: &self.im * &rhs.re };
        }
        GaussianRational { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }

    /// `self += a * b` without an intermediate allocation for the common
    /// real case.
    pub fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.im.is_zero() && b.im.is_zero() {
            self.re += &a.re * &b.re;
        } else {
            *self += &a.mul_ref(b);
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        GaussianRational::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        self.mul_ref(rhs)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        self.mul_ref(&rhs)
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = self.mul_ref(rhs);
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero, like the rational types it wraps.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.mul_ref(&rhs.inv().expect("division by zero"))
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return write!(f, "i");
            }
            if (-&self.im).is_one() {
                return write!(f, "-i");
            }
            fmt_rational(&self.im, f)?;
            return write!(f, "*i");
        }
        write!(f, "(")?;
        fmt_rational(&self.re, f)?;
        if self.im.is_negative() {
            write!(f, "-")?;
            fmt_rational(&-&self.im, f)?;
        } else {
            write!(f, "+")?;
            fmt_rational(&self.im, f)?;
        }
        write!(f, "*i)")
    }
}

/// A rational power of `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QExponent(BigRational);

impl QExponent {
    pub fn new(num: i64, den: i64) -> Self {
        QExponent(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: i64) -> Self {
        QExponent(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        QExponent(r)
    }

    pub fn zero() -> Self {
        QExponent(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Denominator as a machine integer; exponents in this crate are small.
    pub fn denom_i64(&self) -> i64 {
        self.0.denom().to_i64().expect("exponent denominator overflows i64")
    }

    /// `self * den`, which must be an integer.
    pub fn scaled(&self, den: i64) -> i64 {
        let v = &self.0 * BigRational::from_integer(den.into());
        debug_assert!(v.is_integer(), "exponent {} not on lattice 1/{}", self, den);
        v.to_integer().to_i64().expect("scaled exponent overflows i64")
    }

    /// `ceil(self * den)`.
    pub fn scaled_ceil(&self, den: i64) -> i64 {
        let v = &self.0 * BigRational::from_integer(den.into());
        v.ceil().to_integer().to_i64().expect("scaled exponent overflows i64")
    }

    /// `floor(self * den)`.
    pub fn scaled_floor(&self, den: i64) -> i64 {
        let v = &self.0 * BigRational::from_integer(den.into());
        v.floor().to_integer().to_i64().expect("scaled exponent overflows i64")
    }

    pub fn abs(&self) -> Self {
        QExponent(self.0.abs())
    }

    pub fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        QExponent(&self.0 * BigRational::from_integer(k.into()))
    }
}

impl From<i64> for QExponent {
    fn from(n: i64) -> Self {
        QExponent::from_int(n)
    }
}

impl FromStr for QExponent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| format!("invalid rational `{s}`"))?;
        let d: BigInt = den.parse().map_err(|_| format!("invalid rational `{s}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(QExponent(BigRational::new(n, d)))
    }
}

macro_rules! exponent_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a QExponent> for &'a QExponent {
            type Output = QExponent;
            fn $m(self, rhs: &QExponent) -> QExponent {
                QExponent(&self.0 $op &rhs.0)
            }
        }
        impl $tr for QExponent {
            type Output = QExponent;
            fn $m(self, rhs: QExponent) -> QExponent {
                QExponent(self.0 $op rhs.0)
            }
        }
    };
}

exponent_binop!(Add, add, +);
exponent_binop!(Sub, sub, -);
exponent_binop!(Mul, mul, *);
exponent_binop!(Div, div, /);

impl Neg for QExponent {
    type Output = QExponent;
    fn neg(self) -> QExponent {
        QExponent(-self.0)
    }
}

impl Neg for &QExponent {
    type Output = QExponent;
    fn neg(self) -> QExponent {
        QExponent(-&self.0)
    }
}

impl PartialEq<i64> for QExponent {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for QExponent {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

impl fmt::Display for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.0, f)
    }
}

/// Least common multiple of two positive denominators.
pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}
