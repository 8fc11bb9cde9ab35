//! Appell-Lerch sums `m(x,B,z)`, the universal mock theta function `g(x,B)`
//! and the theta/Appell-Lerch combinations of the Hecke-sum structure
//! theorems.

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::number::{lcm, GaussianRational, QExponent};
use crate::product::{den, num, quotient, Factor};
use crate::series::{Accumulator, QMonomial, QSeries};
use crate::theta::{check_base, convex_argmin, convex_range, jtp, pochhammer_infinite};

fn minus_one() -> GaussianRational {
    GaussianRational::from_int(-1)
}

fn neg(m: &QMonomial) -> QMonomial {
    m.neg()
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// `j(z;B)` expanded until it is visibly nonzero, at least to `order`.
fn theta_nonzero(z: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    // j(z;B) vanishes exactly when z is an integral power of B
    let k = z.exp() / base.exp();
    if let Some(k) = k.to_i64() {
        if &base.pow(k) == z {
            return Err(Error::ZeroSeries);
        }
    }
    let mut w = order.clone();
    loop {
        let s = jtp(z, base, &w)?;
        if !s.is_zero() {
            return Ok(s);
        }
        w = &(&w + &w.abs()) + base.exp();
    }
}

/// `m(x,B,z) = 1/j(z;B) sum_r (-1)^r B^{binom(r,2)} z^r / (1 - B^{r-1} x z)`.
pub fn appell_m(x: &QMonomial, base: &QMonomial, z: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    let xz = x.mul(z);
    // the pole 1 - B^{r-1} x z = 0 for some r
    let k = xz.exp() / base.exp();
    if let Some(k) = k.to_i64() {
        if base.pow(k) == xz {
            return Err(Error::DegenerateZ);
        }
    }
    let jz = match theta_nonzero(z, base, order) {
        Ok(s) => s,
        Err(Error::ZeroSeries) => return Err(Error::DegenerateZ),
        Err(e) => return Err(e),
    };
    let lz = jz.lowdeg().expect("nonzero");

    let den = lcm(lcm(lcm(base.exp().denom_i64(), x.exp().denom_i64()), z.exp().denom_i64()), order.denom_i64());
    let den = lcm(den, lz.denom_i64());
    let b = base.exp().scaled(den) as i128;
    let ex = x.exp().scaled(den) as i128;
    let ez = z.exp().scaled(den) as i128;
    // least exponent of summand r: numerator b binom(r,2) + r ez, plus |k_r| when k_r < 0
    let kr = |r: i64| b * (r as i128 - 1) + ex + ez;
    let low = |r: i64| {
        let r128 = r as i128;
        b * r128 * (r128 - 1) / 2 + r128 * ez + (-kr(r)).max(0)
    };
    let vertex = Integer::div_floor(&((b - 2 * ez) as i64), &(2 * b as i64));
    let rmin = convex_argmin(vertex, low);
    let smin = QExponent::new(low(rmin) as i64, den);

    // S to precision order + lz, 1/j(z) to precision order - smin
    let ws = order + &lz;
    let wj = &(order + &lz.mul_int(2)) - &smin;
    if wj <= lz {
        return Ok(QSeries::zero(order.clone()));
    }
    let ws_cut = ws.scaled_ceil(den) as i128;
    let (lo, hi) = convex_range(vertex, low, ws_cut);
    let mut acc = Accumulator::new(den, Some(&ws));
    let xz_c = xz.coeff();
    let (bc, zc) = (base.coeff(), z.coeff());
    for r in lo..=hi {
        let k = kr(r);
        let c = bc.pow(r - 1).mul_ref(xz_c);
        let lead_exp = b * (r as i128) * (r as i128 - 1) / 2 + r as i128 * ez;
        let mut lead = zc.pow(r);
        if !bc.is_one() {
            lead = lead.mul_ref(&bc.pow(binom2(r)));
        }
        if r % 2 != 0 {
            lead = -lead;
        }
        if k == 0 {
            let d = &GaussianRational::one() - &c;
            let inv = d.inv().ok_or(Error::DegenerateZ)?;
            acc.add(lead_exp as i64, &lead.mul_ref(&inv));
            continue;
        }
        // geometric tail: sum_{n>=0} c^n q^{nk}, or -sum_{n>=1} c^{-n} q^{-nk}
        let (ratio, step, mut e, mut coef) = if k > 0 {
            (c.clone(), k, lead_exp, lead)
        } else {
            let ci = c.inv().expect("nonzero");
            (ci.clone(), -k, lead_exp - k, -lead.mul_ref(&ci))
        };
        while e < ws_cut {
            acc.add(e as i64, &coef);
            e += step;
            coef = coef.mul_ref(&ratio);
        }
    }
    let s = acc.finish(Some(ws.clone()));
    let jz = if jz.precision().is_some_and(|p| p >= &wj) { jz } else { jtp(z, base, &wj)? };
    let inv = jz.truncate(&wj).invert()?;
    let out = s.mul(&inv);
    match out.precision() {
        Some(p) if p < order => Err(Error::InsufficientPrecision { wanted: Box::new(order.clone()), achieved: Box::new(p.clone()) }),
        _ => Ok(out.truncate(order)),
    }
}

/// `g(x,B) = x^{-1}(-1 + sum_{n>=0} B^{n^2} / ((x;B)_{n+1} (B/x;B)_n))`.
pub fn universal_g_eulerian(x: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    let w = order + x.exp();
    let pole = |e: Error| if e == Error::PoleAtOne { Error::DegenerateX } else { e };
    // running 1/((x)_{n+1} (B/x)_n), its extra lowdeg and B^{n^2}
    let mut r = QSeries::one_exact().div_one_minus(x.coeff(), x.exp(), Some(&w)).map_err(pole)?;
    let mut extra = QExponent::max_of(&QExponent::zero(), &-x.exp());
    let mut sum = QSeries::constant(minus_one()).truncate(&w);
    let mut n: i64 = 0;
    let mut bn2 = QMonomial::one();
    let mut xb = x.clone();
    let mut bx = base.div(x);
    loop {
        if (bn2.exp() + &extra) >= w {
            break;
        }
        let term = r.mul_monomial(&bn2);
        sum = sum.add(&term);
        n += 1;
        xb = xb.mul(base);
        let left = &w - &base.exp().mul_int(n * n);
        r = r.truncate(&left);
        r = r.div_one_minus(xb.coeff(), xb.exp(), None).map_err(pole)?;
        r = r.div_one_minus(bx.coeff(), bx.exp(), None).map_err(pole)?;
        for f in [&xb, &bx] {
            if f.exp().is_negative() {
                extra = &extra - f.exp();
            }
        }
        bx = bx.mul(base);
        bn2 = base.pow(n * n);
    }
    Ok(sum.mul_monomial(&x.inv()).truncate(order))
}

/// `g(x,B) = -x^{-1} m(B^2 x^{-3}, B^3, x^2) - x^{-2} m(B x^{-3}, B^3, x^2)`.
pub fn universal_g_via_m(x: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    let b3 = base.pow(3);
    let x2 = x.pow(2);
    let xi3 = x.pow(-3);
    let a = appell_m(&base.pow(2).mul(&xi3), &b3, &x2, &(order + x.exp()))?.mul_monomial(&x.inv().neg());
    let b = appell_m(&base.mul(&xi3), &b3, &x2, &(order + &x.exp().mul_int(2)))?.mul_monomial(&x.pow(-2).neg());
    Ok(a.add(&b).truncate(order))
}

fn theta_factor<'a>(x: QMonomial, base: QMonomial) -> Factor<'a> {
    num(move |w| jtp(&x, &base, w))
}

fn m_factor<'a>(x: QMonomial, base: QMonomial, z: QMonomial) -> Factor<'a> {
    num(move |w| appell_m(&x, &base, &z, w))
}

/// `J_k` over the base `B`, i.e. `(B^k;B^k)_∞`.
fn jm_factor<'a>(base: &QMonomial, k: i64, denominator: bool) -> Factor<'a> {
    let bk = base.pow(k);
    let f = move |w: &QExponent| pochhammer_infinite(&bk, &bk, w);
    if denominator {
        den(f)
    } else {
        num(f)
    }
}

fn check_positive(vals: &[i64]) -> Result<()> {
    if vals.iter().any(|v| *v <= 0) {
        return Err(Error::InvalidArgument("parameters must be positive integers".into()));
    }
    Ok(())
}

/// `g_{a,b,c}(x,y,B,z_1,z_0)`.
#[allow(clippy::too_many_arguments)]
pub fn g_abc(
    a: i64,
    b: i64,
    c: i64,
    x: &QMonomial,
    y: &QMonomial,
    base: &QMonomial,
    z1: &QMonomial,
    z0: &QMonomial,
    order: &QExponent,
) -> Result<QSeries> {
    check_base(base)?;
    check_positive(&[a, b, c])?;
    let disc = b * b - a * c;
    if disc <= 0 {
        return Err(Error::InvalidArgument("g_{a,b,c} needs b^2 > ac".into()));
    }
    let (nx, ny) = (neg(x), neg(y));
    let mut total = QSeries::zero(order.clone());
    let halves = [(a, c, x, &ny, &nx, z0), (c, a, y, &nx, &ny, z1)];
    for (p, s, u, nv, nu, z) in halves {
        // sum_{t<p} (-v)^t B^{s binom(t,2)} j(B^{bt} u; B^p) m(-B^{p binom(b+1,2) - s binom(p+1,2) - t disc} (-v)^p/(-u)^b, B^{p disc}, z)
        let mbase = base.pow(p * disc);
        for t in 0..p {
            let pre = nv.pow(t).mul(&base.pow(s * binom2(t)));
            let theta_arg = base.pow(b * t).mul(u);
            let mx = base.pow(p * binom2(b + 1) - s * binom2(p + 1) - t * disc).mul(&nv.pow(p)).mul(&nu.pow(-b)).neg();
            let term = quotient(order, &pre, &[theta_factor(theta_arg, base.pow(p)), m_factor(mx, mbase.clone(), z.clone())])?;
            total = total.add(&term);
        }
    }
    Ok(total)
}

/// `h_{a,b,c}(x,y,B,z_1,z_0)` for `a | b` and `c | b`.
#[allow(clippy::too_many_arguments)]
pub fn h_abc(
    a: i64,
    b: i64,
    c: i64,
    x: &QMonomial,
    y: &QMonomial,
    base: &QMonomial,
    z1: &QMonomial,
    z0: &QMonomial,
    order: &QExponent,
) -> Result<QSeries> {
    check_base(base)?;
    check_positive(&[a, b, c])?;
    if b % a != 0 || b % c != 0 {
        return Err(Error::DivisibilityViolation(format!("b = {b} must be divisible by a = {a} and c = {c}")));
    }
    if b * b <= a * c {
        return Err(Error::InvalidArgument("h_{a,b,c} needs b^2 > ac".into()));
    }
    let (nx, ny) = (neg(x), neg(y));
    let (ba, bc) = (b / a, b / c);
    let mx1 = base.pow(a * binom2(ba + 1) - c).mul(&ny).mul(&nx.pow(-ba)).neg();
    let mx0 = base.pow(c * binom2(bc + 1) - a).mul(&nx).mul(&ny.pow(-bc)).neg();
    let one = QMonomial::one();
    let t1 = quotient(order, &one, &[theta_factor(x.clone(), base.pow(a)), m_factor(mx1, base.pow(b * ba - c), z1.clone())])?;
    let t0 = quotient(order, &one, &[theta_factor(y.clone(), base.pow(c)), m_factor(mx0, base.pow(b * bc - a), z0.clone())])?;
    Ok(t1.add(&t0))
}

/// `B^k` for rational `k`.
fn bpow(base: &QMonomial, k: &QExponent) -> Result<QMonomial> {
    base.pow_rational(k)
}

fn frac(n: i64, d: i64) -> QExponent {
    QExponent::new(n, d)
}

/// `θ_{n,p}(x,y,B)`, the theta correction in `f_{n,n+p,n} = g_{n,n+p,n}(x,y,B,-1,-1) + θ_{n,p}`.
pub fn theta_np(n: i64, p: i64, x: &QMonomial, y: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    check_positive(&[n, p])?;
    if n.gcd(&p) != 1 {
        return Err(Error::InvalidArgument(format!("theta_np needs gcd(n,p) = 1, got ({n},{p})")));
    }
    let (nx, ny) = (neg(x), neg(y));
    let shift = if n % 2 == 0 { frac(1, 2) } else { QExponent::zero() };
    let half_nm1 = frac(n - 1, 2);
    let m1 = p * p * (2 * n + p);
    let big = base.pow(m1);
    let mut total = QSeries::zero(order.clone());
    for rs in 0..p {
        for ss in 0..p {
            let r = &QExponent::from_int(rs) + &shift;
            let s = &QExponent::from_int(ss) + &shift;
            // R = r - (n-1)/2 and S = s + (n+1)/2 are integers
            let rr = (&r - &half_nm1).to_i64().expect("integral");
            let sr = (&s + &frac(n + 1, 2)).to_i64().expect("integral");
            let pre = base.pow(n * binom2(rr) + (n + p) * rr * sr + n * binom2(sr)).mul(&nx.pow(rr)).mul(&ny.pow(sr));
            let a1 = bpow(base, &(&(&s - &r) * &QExponent::from_int(n * p)))?.mul(&x.pow(n)).mul(&y.pow(-n)).neg();
            let a2 = bpow(base, &(&(&(&r + &s) * &QExponent::from_int(p * (2 * n + p))) + &QExponent::from_int(p * (n + p))))?
                .mul(&x.pow(p))
                .mul(&y.pow(p));
            let half = frac(p * (n + p), 2);
            let d1 = bpow(base, &(&(&r * &QExponent::from_int(p * (2 * n + p))) + &half))?.mul(&ny.pow(n + p)).mul(&nx.pow(-n));
            let d2 = bpow(base, &(&(&s * &QExponent::from_int(p * (2 * n + p))) + &half))?.mul(&nx.pow(n + p)).mul(&ny.pow(-n));
            let jbar_base = base.pow(n * p * (2 * n + p));
            let minus = QMonomial::new(minus_one(), QExponent::zero())?;
            let b1 = base.pow(n * p * p);
            let term = quotient(
                order,
                &pre,
                &[
                    jm_factor(base, m1, false),
                    jm_factor(base, m1, false),
                    jm_factor(base, m1, false),
                    theta_factor(a1, b1),
                    theta_factor(a2, big.clone()),
                    den({
                        let (m, bb) = (minus.clone(), jbar_base.clone());
                        move |w| jtp(&m, &bb, w)
                    }),
                    den({
                        let bb = big.clone();
                        move |w| jtp(&d1, &bb, w)
                    }),
                    den({
                        let bb = big.clone();
                        move |w| jtp(&d2, &bb, w)
                    }),
                ],
            )?;
            total = total.add(&term);
        }
    }
    Ok(total)
}

/// `θ_{a,b,c}(x,y,B)`, the triple theta sum of the `a | b`, `c | b` structure theorem.
pub fn theta_abc(a: i64, b: i64, c: i64, x: &QMonomial, y: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    check_positive(&[a, b, c])?;
    if b % a != 0 || b % c != 0 {
        return Err(Error::DivisibilityViolation(format!("b = {b} must be divisible by a = {a} and c = {c}")));
    }
    if b * b <= a * c {
        return Err(Error::InvalidArgument("theta_abc needs b^2 > ac".into()));
    }
    let (nx, ny) = (neg(x), neg(y));
    let (ba, bc) = (b / a, b / c);
    let ra = b * ba - c; // b^2/a - c
    let rc = b * bc - a; // b^2/c - a
                         // b (b^2/(ac) - 1) and (b^2/a)(b^2/(ac) - 1), as rationals
    let k = &frac(b * b, a * c) - &QExponent::from_int(1);
    let m2 = &QExponent::from_int(b) * &k;
    let m3 = &QExponent::from_int(b * ba) * &k;
    let shift3 = frac(b * b * b * (b - a), 2 * a * a * c);
    let b_m2 = bpow(base, &m2)?;
    let b_m3 = bpow(base, &m3)?;
    let mut total = QSeries::zero(order.clone());
    for d in 0..bc {
        for e in 0..ba {
            for f in 0..ba {
                let pre = base.pow(ra * binom2(d + 1) + rc * binom2(e + f + 1) + a * binom2(f)).mul(&nx.pow(f));
                let t1 = base.pow(ra * (d + 1) + b * f).mul(y);
                let e2 = &(&(&m2 * &QExponent::from_int(e + f + 1)) - &QExponent::from_int(ra * (d + 1))) + &shift3;
                let t2 = bpow(base, &e2)?.mul(&nx.pow(ba)).mul(&y.inv());
                let t3 = base.pow(rc * (e + 1) + ra * (d + 1) - c * binom2(bc) - a * binom2(ba)).mul(&nx.pow(1 - ba)).mul(&ny.pow(1 - bc));
                let d1 = base.pow(rc * (e + 1) - c * binom2(bc)).mul(&nx).mul(&ny.pow(-bc));
                let d2 = base.pow(ra * (d + 1) - a * binom2(ba)).mul(&nx.pow(-ba)).mul(&ny);
                let jm = {
                    let bm = b_m2.clone();
                    move |w: &QExponent| pochhammer_infinite(&bm, &bm, w)
                };
                let term = quotient(
                    order,
                    &pre,
                    &[
                        theta_factor(t1, base.pow(b * ba)),
                        theta_factor(t2, b_m3.clone()),
                        num(jm.clone()),
                        num(jm.clone()),
                        num(jm),
                        theta_factor(t3, b_m2.clone()),
                        den({
                            let bb = b_m2.clone();
                            move |w| jtp(&d1, &bb, w)
                        }),
                        den({
                            let bb = b_m2.clone();
                            move |w| jtp(&d2, &bb, w)
                        }),
                    ],
                )?;
                total = total.add(&term);
            }
        }
    }
    Ok(total)
}

/// Right side of the `n`-fold Appell-Lerch splitting of `m(x,B,z)` with auxiliary `z'`.
pub fn msplit_rhs(n: i64, x: &QMonomial, base: &QMonomial, z: &QMonomial, zp: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    check_positive(&[n])?;
    let nx = neg(x);
    let bn2 = base.pow(n * n);
    let bn = base.pow(n);
    let mut total = QSeries::zero(order.clone());
    for r in 0..n {
        let pre = base.pow(-binom2(r + 1)).mul(&nx.pow(r));
        let mx = base.pow(binom2(n) - n * r).mul(&nx.pow(n)).neg();
        let term = quotient(order, &pre, &[m_factor(mx, bn2.clone(), zp.clone())])?;
        total = total.add(&term);
    }
    let xz = x.mul(z);
    for r in 0..n {
        let pre = zp.mul(&base.pow(binom2(r))).mul(&xz.neg().pow(r));
        let a1 = base.pow(binom2(n) + r).mul(&nx.pow(n)).mul(z).mul(zp).neg();
        let a2 = base.pow(n * r).mul(&z.pow(n)).mul(&zp.inv());
        let d1 = base.pow(binom2(n)).mul(&nx.pow(n)).mul(zp).neg();
        let d2 = base.pow(r).mul(z);
        let (xz2, zp2, b1, bb2, bb3, bb4) = (xz.clone(), zp.clone(), base.clone(), bn2.clone(), bn.clone(), bn.clone());
        let term = quotient(
            order,
            &pre,
            &[
                jm_factor(base, n, false),
                jm_factor(base, n, false),
                jm_factor(base, n, false),
                theta_factor(a1, bn.clone()),
                theta_factor(a2, bn2.clone()),
                den(move |w| jtp(&xz2, &b1, w)),
                den(move |w| jtp(&zp2, &bb2, w)),
                den(move |w| jtp(&d1, &bb3, w)),
                den(move |w| jtp(&d2, &bb4, w)),
            ],
        )?;
        total = total.add(&term);
    }
    Ok(total)
}

/// `sum_n (-1)^n B^{binom(n+1,2)} / (1 - B^n z)`, the partial fraction side
/// of the reciprocal of `j(z;B)`.
pub fn pfrac(z: &QMonomial, base: &QMonomial, order: &QExponent) -> Result<QSeries> {
    check_base(base)?;
    let den_ = lcm(lcm(base.exp().denom_i64(), z.exp().denom_i64()), order.denom_i64());
    let b = base.exp().scaled(den_) as i128;
    let ez = z.exp().scaled(den_) as i128;
    let cut = order.scaled_ceil(den_) as i128;
    let kn = |n: i64| b * n as i128 + ez;
    let low = |n: i64| {
        let n128 = n as i128;
        b * n128 * (n128 + 1) / 2 + (-kn(n)).max(0)
    };
    let vertex = Integer::div_floor(&(-(b as i64)), &(2 * b as i64));
    let (lo, hi) = convex_range(vertex, low, cut);
    let mut acc = Accumulator::new(den_, Some(order));
    for n in lo..=hi {
        let c = base.coeff().pow(n).mul_ref(z.coeff());
        let k = kn(n);
        let mut lead = base.coeff().pow(binom2(n + 1));
        if n % 2 != 0 {
            lead = -lead;
        }
        let lead_exp = b * (n as i128) * (n as i128 + 1) / 2;
        if k == 0 {
            let d = &GaussianRational::one() - &c;
            let inv = d.inv().ok_or(Error::PoleAtOne)?;
            acc.add(lead_exp as i64, &lead.mul_ref(&inv));
            continue;
        }
        let (ratio, step, mut e, mut coef) = if k > 0 {
            (c.clone(), k, lead_exp, lead)
        } else {
            let ci = c.inv().expect("nonzero");
            (ci.clone(), -k, lead_exp - k, -lead.mul_ref(&ci))
        };
        while e < cut {
            acc.add(e as i64, &coef);
            e += step;
            coef = coef.mul_ref(&ratio);
        }
    }
    Ok(acc.finish(Some(order.clone())))
}
