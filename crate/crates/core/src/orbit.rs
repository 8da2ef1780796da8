//! Orbit points stored as signed prime-exponent vectors.
//!
//! `T^k alpha` has coordinates with about `rho^k` digits, so orbits are kept
//! as exponent vectors over the primes of `alpha`; the monomial action is
//! then linear. Comparisons with 1 and between monomials reduce to signs of
//! linear forms in logarithms of primes, which are decided exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::ball::RealBall;
use crate::exact::Rational;
use crate::factor::factorize;
use crate::transform::MonomialTransform;

/// Point with nonzero rational coordinates
/// `x_i = sign_i * prod_p p^{e_ip}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPoint {
    primes: Vec<BigInt>,
    exps: Vec<Vec<BigInt>>,
    negative: Vec<bool>,
}

impl ExpPoint {
    pub fn from_rationals(alpha: &[Rational]) -> Result<Self> {
        let mut table: Vec<(BigInt, Vec<i64>)> = Vec::new();
        let mut per: Vec<Vec<(BigInt, i64)>> = Vec::new();
        for (i, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::ZeroCoordinate(i));
            }
            let mut v = Vec::new();
            for (p, e) in factorize(a.numer()) {
                v.push((p, e as i64));
            }
            for (p, e) in factorize(a.denom()) {
                v.push((p, -(e as i64)));
            }
            per.push(v);
        }
        for v in &per {
            for (p, _) in v {
                if !table.iter().any(|(q, _)| q == p) {
                    table.push((p.clone(), Vec::new()));
                }
            }
        }
        table.sort_by(|a, b| a.0.cmp(&b.0));
        let primes: Vec<BigInt> = table.into_iter().map(|(p, _)| p).collect();
        let exps = per
            .iter()
            .map(|v| {
                primes
                    .iter()
                    .map(|p| BigInt::from(v.iter().filter(|(q, _)| q == p).map(|(_, e)| e).sum::<i64>()))
                    .collect()
            })
            .collect();
        Ok(ExpPoint { primes, exps, negative: alpha.iter().map(|a| a.is_negative()).collect() })
    }

    pub fn from_parts(primes: Vec<BigInt>, exps: Vec<Vec<BigInt>>, negative: Vec<bool>) -> Self {
        ExpPoint { primes, exps, negative }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn exponents(&self) -> &[Vec<BigInt>] {
        &self.exps
    }

    pub fn negative(&self) -> &[bool] {
        &self.negative
    }

    /// Image under the monomial transformation.
    pub fn apply(&self, t: &MonomialTransform) -> Self {
        let n = self.dim();
        assert_eq!(t.size(), n, "transform size");
        let np = self.primes.len();
        let mut exps = vec![vec![BigInt::zero(); np]; n];
        let mut negative = vec![false; n];
        for i in 0..n {
            for j in 0..n {
                let tij = t.entry(i, j);
                if tij.is_zero() {
                    continue;
                }
                for p in 0..np {
                    if !self.exps[j][p].is_zero() {
                        exps[i][p] += tij * &self.exps[j][p];
                    }
                }
                if self.negative[j] && tij.is_odd() {
                    negative[i] = !negative[i];
                }
            }
        }
        ExpPoint { primes: self.primes.clone(), exps, negative }
    }

    /// Restriction to a range of coordinates.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        ExpPoint { primes: self.primes.clone(), exps: self.exps[range.clone()].to_vec(), negative: self.negative[range].to_vec() }
    }

    /// Concatenation over the union of the prime lists.
    pub fn concat(parts: &[ExpPoint]) -> Self {
        let mut primes: Vec<BigInt> = parts.iter().flat_map(|p| p.primes.iter().cloned()).collect();
        primes.sort();
        primes.dedup();
        let mut exps = Vec::new();
        let mut negative = Vec::new();
        for part in parts {
            for (row, neg) in part.exps.iter().zip(&part.negative) {
                let mut v = vec![BigInt::zero(); primes.len()];
                for (p, e) in part.primes.iter().zip(row) {
                    let k = primes.binary_search(p).expect("prime present");
                    v[k] = e.clone();
                }
                exps.push(v);
                negative.push(*neg);
            }
        }
        ExpPoint { primes, exps, negative }
    }

    /// Exponent vector and sign of the monomial `x^lambda`.
    pub fn monomial(&self, lambda: &[u32]) -> (Vec<BigInt>, bool) {
        let mut e = vec![BigInt::zero(); self.primes.len()];
        let mut neg = false;
        for (i, &l) in lambda.iter().enumerate() {
            if l == 0 {
                continue;
            }
            for (p, x) in self.exps[i].iter().enumerate() {
                e[p] += x * l;
            }
            if self.negative[i] && l % 2 == 1 {
                neg = !neg;
            }
        }
        (e, neg)
    }

    /// Rough bit size of the coordinates written out.
    pub fn bits_estimate(&self) -> f64 {
        self.exps
            .iter()
            .map(|row| row.iter().zip(&self.primes).map(|(e, p)| bigint_abs_f64(e) * bigint_log2(p)).sum::<f64>())
            .sum()
    }

    pub fn to_rationals(&self) -> Option<Vec<Rational>> {
        if self.bits_estimate() > 1e7 {
            return None;
        }
        Some((0..self.dim()).map(|i| compose(&self.primes, &self.exps[i], self.negative[i])).collect())
    }

    /// Exact comparison of `|x_i|` with 1.
    pub fn abs_cmp_one(&self, i: usize) -> Ordering {
        log_form_sign(&self.primes, &self.exps[i])
    }

    /// Approximate `log2 max_i |x_i|`.
    pub fn log2_norm_estimate(&self) -> f64 {
        (0..self.dim()).map(|i| self.log2_abs_estimate(i)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn log2_abs_estimate(&self, i: usize) -> f64 {
        self.exps[i].iter().zip(&self.primes).map(|(e, p)| bigint_f64(e) * bigint_log2(p)).sum()
    }

    /// Enclosure of `ln |x_i|`.
    pub fn ln_abs(&self, i: usize, prec: u32) -> RealBall {
        ln_form(&self.primes, &self.exps[i], prec)
    }
}

pub fn compose(primes: &[BigInt], exps: &[BigInt], negative: bool) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (p, e) in primes.iter().zip(exps) {
        let k = e.abs().to_usize().expect("exponent fits in memory");
        if e.is_positive() {
            num *= num_traits::pow(p.clone(), k);
        } else if e.is_negative() {
            den *= num_traits::pow(p.clone(), k);
        }
    }
    let r = Rational::new(num, den);
    if negative {
        -r
    } else {
        r
    }
}

pub(crate) fn bigint_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn bigint_abs_f64(x: &BigInt) -> f64 {
    bigint_f64(x).abs()
}

pub(crate) fn bigint_log2(p: &BigInt) -> f64 {
    let b = p.bits();
    if b <= 52 {
        p.to_f64().unwrap().log2()
    } else {
        let top = (p >> (b - 52) as usize).to_f64().unwrap();
        top.log2() + (b - 52) as f64
    }
}

/// Enclosure of `sum_p e_p ln p`.
pub fn ln_form(primes: &[BigInt], exps: &[BigInt], prec: u32) -> RealBall {
    let mut acc = RealBall::zero();
    for (p, e) in primes.iter().zip(exps) {
        if e.is_zero() {
            continue;
        }
        let w = prec + e.bits() as u32 + 8;
        let lp = RealBall::from_bigint(p, w).ln(w).expect("prime > 0");
        acc = acc.add(&lp.mul_int(e, w), w);
    }
    acc
}

/// Exact sign of `sum_p e_p ln p`, which vanishes only for `e = 0`.
pub fn log_form_sign(primes: &[BigInt], exps: &[BigInt]) -> Ordering {
    if exps.iter().all(Zero::is_zero) {
        return Ordering::Equal;
    }
    let mut prec = 64;
    loop {
        let b = ln_form(primes, exps, prec);
        if b.is_positive() {
            return Ordering::Greater;
        }
        if b.is_negative() {
            return Ordering::Less;
        }
        // |ln(A/B)| >= 1/(2 max(A,B)) for distinct integers A, B
        let bits: f64 = primes.iter().zip(exps).map(|(p, e)| bigint_abs_f64(e) * bigint_log2(p)).sum();
        if prec as f64 > 2.0 * bits + 128.0 {
            // unreachable in exact arithmetic; fall back to integers
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            for (p, e) in primes.iter().zip(exps) {
                let k = e.abs().to_usize().expect("small exponent");
                if e.is_positive() {
                    num *= num_traits::pow(p.clone(), k);
                } else {
                    den *= num_traits::pow(p.clone(), k);
                }
            }
            return num.cmp(&den);
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn round_trip_and_action() {
        let a = vec![rat(-9, 8), rat(1, 6)];
        let p = ExpPoint::from_rationals(&a).unwrap();
        assert_eq!(p.to_rationals().unwrap(), a);
        let t = MonomialTransform::from_u64(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(p.apply(&t).to_rationals().unwrap(), t.apply(&a).unwrap());
        assert_eq!(p.abs_cmp_one(0), Ordering::Greater);
        assert_eq!(p.abs_cmp_one(1), Ordering::Less);
        let one = ExpPoint::from_rationals(&[int(-1)]).unwrap();
        assert_eq!(one.abs_cmp_one(0), Ordering::Equal);
    }

    #[test]
    fn close_logs_are_separated() {
        // 2^10 = 1024 vs 1000 = 2^3 5^3
        let p = ExpPoint::from_rationals(&[rat(1024, 1000), rat(999, 1000)]).unwrap();
        assert_eq!(p.abs_cmp_one(0), Ordering::Greater);
        assert_eq!(p.abs_cmp_one(1), Ordering::Less);
    }
}
