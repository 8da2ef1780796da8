//! Midpoint-radius real balls with arbitrary-precision dyadic midpoints.
//!
//! Every operation returns a ball containing the exact image of its inputs.
//! Midpoints are rounded to a caller-supplied number of bits and the rounding
//! error is folded into the radius; radii are kept as short upward-rounded
//! dyadics ([`Mag`]).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

const MAG_BITS: u32 = 32;

/// Nonnegative upper bound `m * 2^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    m: u64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0, e: 0 };

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    fn norm_up(m: u128, e: i64) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        if bits <= MAG_BITS {
            return Mag { m: m as u64, e };
        }
        let sh = bits - MAG_BITS;
        let mut q = m >> sh;
        if q << sh != m {
            q += 1;
        }
        Mag { m: q as u64, e: e + sh as i64 }
    }

    fn norm_down(m: u128, e: i64) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        if bits <= MAG_BITS {
            return Mag { m: m as u64, e };
        }
        let sh = bits - MAG_BITS;
        Mag { m: (m >> sh) as u64, e: e + sh as i64 }
    }

    /// Upper bound for `|mant| * 2^exp`.
    pub fn from_dyadic_up(mant: &BigInt, exp: i64) -> Mag {
        let a = mant.magnitude();
        let bits = a.bits();
        if bits == 0 {
            return Mag::ZERO;
        }
        if bits <= 64 {
            return Mag::norm_up(a.to_u64().unwrap() as u128, exp);
        }
        let sh = bits - 64;
        let top: u64 = (a >> sh).to_u64().unwrap();
        let exact = (&(a >> sh) << sh) == *a;
        Mag::norm_up(top as u128 + u128::from(!exact), exp + sh as i64)
    }

    /// Lower bound for `|mant| * 2^exp`.
    pub fn from_dyadic_down(mant: &BigInt, exp: i64) -> Mag {
        let a = mant.magnitude();
        let bits = a.bits();
        if bits == 0 {
            return Mag::ZERO;
        }
        if bits <= 64 {
            return Mag::norm_down(a.to_u64().unwrap() as u128, exp);
        }
        let sh = bits - 64;
        Mag::norm_down((a >> sh).to_u64().unwrap() as u128, exp + sh as i64)
    }

    pub fn pow2(e: i64) -> Mag {
        Mag { m: 1, e }
    }

    /// Upper bound for a nonnegative rational.
    pub fn from_rational_up(q: &Rational) -> Mag {
        let (n, d) = (q.numer().abs(), q.denom().clone());
        if n.is_zero() {
            return Mag::ZERO;
        }
        let s = 64 + d.bits() as i64 - n.bits() as i64;
        let (num, den) = if s >= 0 { (n << s as usize, d) } else { (n, d << (-s) as usize) };
        let (q, r) = num.div_rem(&den);
        let q = if r.is_zero() { q } else { q + 1 };
        Mag::from_dyadic_up(&q, -s)
    }

    pub fn to_rational(&self) -> Rational {
        dyadic_to_rational(&BigInt::from(self.m), self.e)
    }

    pub fn add(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d > 60 {
            // lo is below one unit of hi's mantissa
            return Mag::norm_up(hi.m as u128 + 1, hi.e);
        }
        Mag::norm_up(((hi.m as u128) << d) + lo.m as u128, lo.e)
    }

    pub fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm_up(self.m as u128 * o.m as u128, self.e + o.e)
    }

    /// Upper bound for `self / d` where `d` is a lower bound of the divisor.
    pub fn div_up(&self, d: &Mag) -> Mag {
        assert!(!d.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.m as u128) << 64;
        let q = num / d.m as u128 + 1;
        Mag::norm_up(q, self.e - d.e - 64)
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() {
            *self
        } else {
            Mag { m: self.m, e: self.e + k }
        }
    }

    /// Position of the leading bit plus one: `self < 2^log2_ceil`.
    pub fn log2_ceil(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.e + 64 - self.m.leading_zeros() as i64
        }
    }

    /// `self <= 2^k`.
    pub fn le_pow2(&self, k: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        self.cmp_mag(&Mag::pow2(k)) != Ordering::Greater
    }

    pub fn cmp_mag(&self, o: &Mag) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (self.log2_ceil(), o.log2_ceil());
        if la != lb {
            return la.cmp(&lb);
        }
        self.to_rational().cmp(&o.to_rational())
    }

    pub fn to_f64(&self) -> f64 {
        self.m as f64 * 2f64.powi(self.e.clamp(-1074, 1023) as i32)
    }
}

fn dyadic_to_rational(m: &BigInt, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(m << e as usize)
    } else {
        Rational::new(m.clone(), BigInt::one() << (-e) as usize)
    }
}

/// Closed ball `[mid - rad, mid + rad]` with `mid = mant * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    mant: BigInt,
    exp: i64,
    rad: Mag,
}

fn top_bit(m: &BigInt, e: i64) -> i64 {
    m.bits() as i64 + e
}

/// Rounds `m * 2^e` to at most `prec` bits; returns the error bound.
fn round_mid(m: BigInt, e: i64, prec: u32) -> (BigInt, i64, Mag) {
    let bits = m.bits();
    if bits <= prec as u64 {
        return (m, e, Mag::ZERO);
    }
    let sh = bits - prec as u64;
    let q = &m >> sh as usize;
    let exact = (&q << sh as usize) == m;
    let err = if exact { Mag::ZERO } else { Mag::pow2(e + sh as i64) };
    (q, e + sh as i64, err)
}

impl RealBall {
    pub fn zero() -> Self {
        RealBall { mant: BigInt::zero(), exp: 0, rad: Mag::ZERO }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        RealBall { mant: BigInt::from(n), exp: 0, rad: Mag::ZERO }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        let (m, e, err) = round_mid(n.clone(), 0, prec);
        RealBall { mant: m, exp: e, rad: err }
    }

    /// Exact dyadic `m * 2^e`.
    pub fn from_dyadic(m: BigInt, e: i64) -> Self {
        RealBall { mant: m, exp: e, rad: Mag::ZERO }
    }

    pub fn with_radius(mut self, r: Mag) -> Self {
        self.rad = self.rad.add(&r);
        self
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (n, d) = (q.numer(), q.denom());
        if n.is_zero() {
            return Self::zero();
        }
        if d.is_one() {
            return Self::from_bigint(n, prec);
        }
        if (d & (d - BigInt::one())).is_zero() {
            // power-of-two denominator: exact dyadic
            let k = d.bits() as i64 - 1;
            let (m, e, err) = round_mid(n.clone(), -k, prec);
            return RealBall { mant: m, exp: e, rad: err };
        }
        let s = prec as i64 + d.bits() as i64 - n.bits() as i64 + 1;
        let (num, den) = if s >= 0 { (n << s as usize, d.clone()) } else { (n.clone(), d << (-s) as usize) };
        let (q, r) = num.div_mod_floor(&den);
        let rad = if r.is_zero() { Mag::ZERO } else { Mag::pow2(-s) };
        RealBall { mant: q, exp: -s, rad }
    }

    /// Smallest convenient ball containing the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
        let half = (hi - lo) / Rational::from_integer(BigInt::from(2));
        Self::from_rational(&mid, prec).with_radius(Mag::from_rational_up(&half))
    }

    pub fn radius(&self) -> Mag {
        self.rad
    }

    pub fn mid_rational(&self) -> Rational {
        dyadic_to_rational(&self.mant, self.exp)
    }

    pub fn lo(&self) -> Rational {
        self.mid_rational() - self.rad.to_rational()
    }

    pub fn hi(&self) -> Rational {
        self.mid_rational() + self.rad.to_rational()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Endpoints as dyadics `(lo, hi, e)`, meaning `lo * 2^e` and `hi * 2^e`.
    fn dyadic_endpoints(&self) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(self.rad.e);
        let mid = &self.mant << (self.exp - e) as usize;
        let r = BigInt::from(self.rad.m) << (self.rad.e - e) as usize;
        (&mid - &r, mid + r, e)
    }

    /// Common floor of every point of the ball, if there is one.
    pub fn floor(&self) -> Option<BigInt> {
        let (lo, hi, e) = self.dyadic_endpoints();
        if e >= 0 {
            return (lo == hi).then(|| lo << e as usize);
        }
        let sh = (-e) as usize;
        let f = &lo >> sh;
        // hi < f + 1
        (hi < ((&f + 1) << sh)).then_some(f)
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        (x - self.mid_rational()).abs() <= self.rad.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_rational().abs() <= self.rad.to_rational()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive() && self.mid_rational() > self.rad.to_rational()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative() && -self.mid_rational() > self.rad.to_rational()
    }

    pub fn overlaps(&self, o: &RealBall) -> bool {
        (self.mid_rational() - o.mid_rational()).abs() <= self.rad.to_rational() + o.rad.to_rational()
    }

    /// Upper bound for `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_dyadic_up(&self.mant, self.exp).add(&self.rad)
    }

    /// Lower bound for `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        let lo = self.mid_rational().abs() - self.rad.to_rational();
        if lo.is_positive() {
            lower_mag(&lo)
        } else {
            Mag::ZERO
        }
    }

    pub fn neg(&self) -> Self {
        RealBall { mant: -&self.mant, exp: self.exp, rad: self.rad }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        RealBall { mant: self.mant.clone(), exp: self.exp + k, rad: self.rad.mul_2exp(k) }
    }

    pub fn add(&self, o: &RealBall, prec: u32) -> Self {
        if self.mant.is_zero() && self.rad.is_zero() {
            return o.round(prec);
        }
        if o.mant.is_zero() && o.rad.is_zero() {
            return self.round(prec);
        }
        let (t1, t2) = (top_bit(&self.mant, self.exp), top_bit(&o.mant, o.exp));
        let guard = prec as i64 + 8;
        if !o.mant.is_zero() && !self.mant.is_zero() {
            if t2 < t1 - guard {
                let r = self.round(prec);
                return r.with_radius(o.abs_upper());
            }
            if t1 < t2 - guard {
                let r = o.round(prec);
                return r.with_radius(self.abs_upper());
            }
        }
        let e = self.exp.min(o.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (&o.mant << (o.exp - e) as usize);
        let (m, e, err) = round_mid(m, e, prec);
        RealBall { mant: m, exp: e, rad: self.rad.add(&o.rad).add(&err) }
    }

    pub fn sub(&self, o: &RealBall, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn round(&self, prec: u32) -> Self {
        let (m, e, err) = round_mid(self.mant.clone(), self.exp, prec);
        RealBall { mant: m, exp: e, rad: self.rad.add(&err) }
    }

    pub fn mul(&self, o: &RealBall, prec: u32) -> Self {
        let m = &self.mant * &o.mant;
        let e = self.exp + o.exp;
        let (m, e, err) = round_mid(m, e, prec);
        let a = Mag::from_dyadic_up(&self.mant, self.exp);
        let b = Mag::from_dyadic_up(&o.mant, o.exp);
        let rad = a.mul(&o.rad).add(&b.mul(&self.rad)).add(&self.rad.mul(&o.rad)).add(&err);
        RealBall { mant: m, exp: e, rad }
    }

    pub fn mul_rational(&self, q: &Rational, prec: u32) -> Self {
        self.mul(&RealBall::from_rational(q, prec + 16), prec)
    }

    pub fn mul_int(&self, n: &BigInt, prec: u32) -> Self {
        let (m, e, err) = round_mid(&self.mant * n, self.exp, prec);
        let rad = self.rad.mul(&Mag::from_dyadic_up(n, 0)).add(&err);
        RealBall { mant: m, exp: e, rad }
    }

    /// Division; `None` if the divisor contains zero.
    pub fn div(&self, o: &RealBall, prec: u32) -> Option<Self> {
        let den_lower = {
            let lo = o.mid_rational().abs() - o.rad.to_rational();
            if !lo.is_positive() {
                return None;
            }
            lower_mag(&lo)
        };
        if den_lower.is_zero() {
            return None;
        }
        if self.mant.is_zero() {
            return Some(RealBall { mant: BigInt::zero(), exp: 0, rad: self.rad.div_up(&den_lower) });
        }
        let s = (prec as i64 + o.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << s as usize;
        let (q, r) = num.div_mod_floor(&o.mant);
        let exp = self.exp - o.exp - s;
        let trunc = if r.is_zero() { Mag::ZERO } else { Mag::pow2(exp) };
        let (q, exp, err) = round_mid(q, exp, prec);
        // |a/b - ma/mb| <= (ra + |ma/mb| rb) / (|mb| - rb)
        let qa = Mag::from_dyadic_up(&q, exp).add(&trunc).add(&err);
        let num_err = self.rad.add(&qa.mul(&o.rad));
        let rad = num_err.div_up(&den_lower).add(&trunc).add(&err);
        Some(RealBall { mant: q, exp, rad })
    }

    pub fn div_int(&self, n: u64, prec: u32) -> Self {
        self.div(&RealBall::from_int(n as i64), prec).expect("nonzero integer divisor")
    }

    pub fn pow(&self, mut e: u64, prec: u32) -> Self {
        let mut result = RealBall::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        result
    }

    /// Square root; the ball must not lie entirely below zero.
    pub fn sqrt(&self, prec: u32) -> Option<Self> {
        let lo = self.lo();
        let hi = self.hi();
        if hi.is_negative() {
            return None;
        }
        let lo = if lo.is_negative() { Rational::zero() } else { lo };
        let down = sqrt_bound(&lo, prec + 8, false);
        let up = sqrt_bound(&hi, prec + 8, true);
        Some(RealBall::from_interval(&down, &up, prec))
    }

    /// Natural logarithm; the ball must be strictly positive.
    pub fn ln(&self, prec: u32) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        let w = prec + 16;
        let center = ln_dyadic(&self.mant, self.exp, w);
        if self.rad.is_zero() {
            return Some(center.round(prec));
        }
        // mean value bound: |ln x - ln mid| <= rad / (mid - rad)
        let lo = self.mid_rational() - self.rad.to_rational();
        let extra = self.rad.div_up(&lower_mag(&lo));
        Some(center.with_radius(extra).round(prec))
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        if bits == 0 {
            return 0.0;
        }
        let sh = (bits - 60).max(0);
        let top = (&self.mant >> sh as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powf((self.exp + sh) as f64)
    }

    /// Rigorous outward decimal rendering of the endpoints.
    pub fn endpoints_decimal(&self, digits: usize) -> (String, String) {
        (decimal_floor(&self.lo(), digits), decimal_ceil(&self.hi(), digits))
    }

    pub fn mid_decimal(&self, digits: usize) -> String {
        decimal_floor(&self.mid_rational(), digits)
    }
}

/// Lower bound for `|q|` with about 64 significant bits.
pub fn lower_mag(q: &Rational) -> Mag {
    // floor(q * 2^s) * 2^-s with ~64 significant bits
    let (n, d) = (q.numer().abs(), q.denom().clone());
    if n.is_zero() {
        return Mag::ZERO;
    }
    let s = 64 + d.bits() as i64 - n.bits() as i64;
    let (num, den) = if s >= 0 { (n << s as usize, d) } else { (n, d << (-s) as usize) };
    Mag::from_dyadic_down(&(num / den), -s)
}

fn sqrt_bound(x: &Rational, prec: u32, up: bool) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    // sqrt(x) ~ isqrt(x * 4^k) / 2^k
    let k = prec as i64 + (x.denom().bits() as i64 - x.numer().bits() as i64) / 2 + 2;
    let k = k.max(0) as usize;
    let scaled = x * Rational::from_integer(BigInt::one() << (2 * k));
    let fl = scaled.floor().to_integer();
    let mut s = fl.sqrt();
    if up {
        let ce = scaled.ceil().to_integer();
        s = ce.sqrt();
        if &s * &s < ce {
            s += 1;
        }
    }
    Rational::new(s, BigInt::one() << k)
}

fn atanh_series(t: &RealBall, t_abs_max_log2: f64, w: u32) -> RealBall {
    // sum_{j>=0} t^(2j+1)/(2j+1) with tail <= 2 |t|^(2K+1)
    let terms_needed = ((w as f64 + 2.0) / t_abs_max_log2 / 2.0).ceil() as u64 + 1;
    let t2 = t.mul(t, w);
    let mut pow = t.clone();
    let mut sum = RealBall::zero();
    for j in 0..terms_needed {
        sum = sum.add(&pow.div_int(2 * j + 1, w), w);
        pow = pow.mul(&t2, w);
    }
    sum.with_radius(Mag::pow2(-(w as i64)))
}

fn ln2(w: u32) -> RealBall {
    let third = RealBall::one().div_int(3, w + 8);
    atanh_series(&third, 3f64.log2(), w + 8).mul_2exp(1).round(w)
}

/// Enclosure of `ln(m * 2^e)` for `m > 0`.
fn ln_dyadic(m: &BigInt, e: i64, w: u32) -> RealBall {
    debug_assert_eq!(m.sign(), Sign::Plus);
    let b = m.bits() as i64;
    // y = m / 2^b in [1/2, 1); move into [2/3, 4/3)
    let three_m = m * 3;
    let (y_exp, k) = if three_m < (BigInt::one() << (b + 1) as usize) { (-(b - 1), b + e - 1) } else { (-b, b + e) };
    let wp = w + 16;
    let y = RealBall::from_dyadic(m.clone(), y_exp).round(wp);
    let one = RealBall::one();
    let t = y.sub(&one, wp).div(&y.add(&one, wp), wp).expect("y + 1 > 0");
    let s = atanh_series(&t, 5f64.log2() - 0.01, wp).mul_2exp(1);
    let kl = ln2(wp).mul_int(&BigInt::from(k), wp);
    kl.add(&s, w)
}

/// Decimal string of `q` rounded toward negative infinity.
pub fn decimal_floor(q: &Rational, digits: usize) -> String {
    decimal_round(q, digits, false)
}

/// Decimal string of `q` rounded toward positive infinity.
pub fn decimal_ceil(q: &Rational, digits: usize) -> String {
    decimal_round(q, digits, true)
}

fn decimal_round(q: &Rational, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let s = q * Rational::from_integer(scale.clone());
    let n = if up { s.ceil() } else { s.floor() }.to_integer();
    let neg = n.is_negative();
    let a = n.abs();
    let (ip, fp) = a.div_rem(&scale);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&ip.to_string());
    if digits > 0 {
        let f = fp.to_string();
        out.push('.');
        out.push_str(&"0".repeat(digits - f.len()));
        out.push_str(&f);
    }
    out
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:.3e}]", self.mid_decimal(20), self.rad.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn mag_bounds() {
        let a = Mag::from_rational_up(&rat(1, 3));
        assert!(a.to_rational() >= rat(1, 3));
        assert!(a.to_rational() - rat(1, 3) < rat(1, 1 << 30));
        let s = a.add(&Mag::pow2(-200));
        assert!(s.to_rational() > a.to_rational());
        let d = Mag::pow2(0).div_up(&Mag::from_rational_up(&int(3)));
        assert!(d.to_rational() >= rat(1, 3));
    }

    #[test]
    fn encloses_rational_arithmetic() {
        let prec = 64;
        let a = RealBall::from_rational(&rat(1, 3), prec);
        let b = RealBall::from_rational(&rat(-5, 7), prec);
        assert!(a.contains_rational(&rat(1, 3)));
        assert!(a.add(&b, prec).contains_rational(&rat(-8, 21)));
        assert!(a.mul(&b, prec).contains_rational(&rat(-5, 21)));
        assert!(a.div(&b, prec).unwrap().contains_rational(&rat(-7, 15)));
        assert!(b.pow(5, prec).contains_rational(&num_traits::pow(rat(-5, 7), 5)));
        assert!(RealBall::from_int(0).div(&RealBall::zero(), prec).is_none());
    }

    #[test]
    fn sqrt_and_log() {
        let s = RealBall::from_int(2).sqrt(200).unwrap();
        let sq = s.mul(&s, 200);
        assert!(sq.contains_rational(&int(2)));
        assert!(s.radius().le_pow2(-190));
        let l2 = RealBall::from_int(2).ln(128).unwrap();
        assert!((l2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l2.radius().le_pow2(-120));
        let l10 = RealBall::from_int(10).ln(100).unwrap();
        assert!((l10.to_f64() - std::f64::consts::LN_10).abs() < 1e-14);
        let small = RealBall::from_rational(&rat(1, 1000), 80).ln(80).unwrap();
        assert!((small.to_f64() - (0.001f64).ln()).abs() < 1e-13);
        assert!(RealBall::from_int(-1).ln(64).is_none());
    }

    #[test]
    fn huge_exponent_gap_addition() {
        let big = RealBall::from_int(1);
        let tiny = RealBall::from_dyadic(BigInt::from(3), -100_000);
        let s = big.add(&tiny, 64);
        assert!(s.contains_rational(&int(1)));
        assert!(s.radius().le_pow2(-99_990));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_floor(&rat(-1, 3), 3), "-0.334");
        assert_eq!(decimal_ceil(&rat(-1, 3), 3), "-0.333");
        assert_eq!(decimal_floor(&rat(5, 2), 2), "2.50");
    }
}
