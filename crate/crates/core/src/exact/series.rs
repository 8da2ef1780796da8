//! Truncated multivariate power series with an explicit coefficient bound.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::ball::{lower_mag, Mag, RealBall};
use super::poly::{Monomial, MultiPolynomial, Vars};
use super::ratfun::RationalFunction;
use super::Rational;
use crate::error::{Error, Result};

/// Power series known exactly below total degree `order`.
///
/// `tail_constant`, when present, bounds the absolute value of every
/// coefficient of the full series, stored or not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vars,
    order: u64,
    coeffs: BTreeMap<Monomial, Rational>,
    tail_constant: Option<Rational>,
}

/// All exponent vectors in `n` variables of total degree exactly `d`,
/// in decreasing lexicographic order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

impl TruncatedSeries {
    pub fn new(vars: &Vars, order: u64, coeffs: impl IntoIterator<Item = (Vec<u32>, Rational)>, tail_constant: Option<Rational>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in coeffs {
            if e.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), got: e.len() });
            }
            let m = Monomial(e);
            if m.degree() >= order || c.is_zero() {
                continue;
            }
            map.insert(m, c);
        }
        let s = TruncatedSeries { vars: vars.clone(), order, coeffs: map, tail_constant };
        if let Some(c) = &s.tail_constant {
            if s.coeffs.values().any(|x| x.abs() > *c) {
                return Err(Error::Invalid("tail constant is smaller than a stored coefficient".into()));
            }
        }
        Ok(s)
    }

    /// Univariate series from dense coefficients `a_0, a_1, ...`; the order
    /// is the number of coefficients.
    pub fn univariate(vars: &Vars, coeffs: &[Rational], tail_constant: Option<Rational>) -> Result<Self> {
        if vars.len() != 1 {
            return Err(Error::ArityMismatch { expected: 1, got: vars.len() });
        }
        Self::new(vars, coeffs.len() as u64, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())), tail_constant)
    }

    pub fn zero(vars: &Vars, order: u64) -> Self {
        TruncatedSeries { vars: vars.clone(), order, coeffs: BTreeMap::new(), tail_constant: None }
    }

    /// Truncation of a polynomial.
    pub fn from_poly(p: &MultiPolynomial, order: u64) -> Self {
        let coeffs = p.terms().filter(|(m, _)| m.degree() < order).map(|(m, c)| (m.clone(), c.clone())).collect();
        TruncatedSeries { vars: p.vars().clone(), order, coeffs, tail_constant: None }
    }

    /// Expansion of `r` at the origin; the denominator must not vanish there.
    pub fn from_rational_function(r: &RationalFunction, order: u64) -> Result<Self> {
        let den = r.den();
        let d0 = den.constant_term();
        if d0.is_zero() {
            return Err(Error::PoleAtPoint { point: "origin".into() });
        }
        let n = r.vars().len();
        let inv = d0.recip();
        let den_terms: Vec<(Monomial, Rational)> =
            den.terms().filter(|(m, _)| m.degree() > 0).map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut coeffs: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for d in 0..order as u32 {
            for e in monomials_of_degree(n.max(1), d) {
                let m = Monomial(if n == 0 { Vec::new() } else { e });
                let mut acc = r.num().coeff(&m);
                for (dm, dc) in &den_terms {
                    if let Some(rest) = m.div(dm) {
                        if let Some(f) = coeffs.get(&rest) {
                            acc -= dc * f;
                        }
                    }
                }
                if !acc.is_zero() {
                    coeffs.insert(m, acc * &inv);
                }
                if n == 0 {
                    break;
                }
            }
            if n == 0 {
                break;
            }
        }
        Ok(TruncatedSeries { vars: r.vars().clone(), order, coeffs, tail_constant: None })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn tail_constant(&self) -> Option<&Rational> {
        self.tail_constant.as_ref()
    }

    pub fn with_tail_constant(mut self, c: Rational) -> Result<Self> {
        if self.coeffs.values().any(|x| x.abs() > c) {
            return Err(Error::Invalid("tail constant is smaller than a stored coefficient".into()));
        }
        self.tail_constant = Some(c);
        Ok(self)
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.coeffs.get(&Monomial(m.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense coefficient list of a univariate series.
    pub fn dense(&self) -> Vec<Rational> {
        assert_eq!(self.vars.len(), 1);
        (0..self.order).map(|i| self.coeff(&[i as u32])).collect()
    }

    pub fn truncate(&self, order: u64) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            vars: self.vars.clone(),
            order,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.degree() < order).map(|(m, c)| (m.clone(), c.clone())).collect(),
            tail_constant: self.tail_constant.clone(),
        }
    }

    /// Sum; the result is known up to the smaller order.
    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut coeffs = self.truncate(order).coeffs;
        for (m, c) in &o.coeffs {
            if m.degree() >= order {
                continue;
            }
            let e = coeffs.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                coeffs.remove(m);
            }
        }
        TruncatedSeries { vars: self.vars.clone(), order, coeffs, tail_constant: None }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            vars: self.vars.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            tail_constant: self.tail_constant.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Product with a polynomial, kept to the same order.
    pub fn mul_poly(&self, p: &MultiPolynomial) -> Self {
        let mut coeffs: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (pm, pc) in p.terms() {
            if pm.degree() >= self.order {
                continue;
            }
            for (m, c) in &self.coeffs {
                let e = m.mul(pm);
                if e.degree() >= self.order {
                    continue;
                }
                *coeffs.entry(e).or_insert_with(Rational::zero) += pc * c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        TruncatedSeries { vars: self.vars.clone(), order: self.order, coeffs, tail_constant: None }
    }

    /// `f(Tz)` for the monomial transformation with the given rows.
    ///
    /// Every row of `T` is nonzero, so each total degree is at least
    /// preserved and the result is exact below the same order.
    pub fn substitute_monomial(&self, rows: &[Vec<u64>]) -> Self {
        let n = self.vars.len();
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            let mut e = vec![0u64; n];
            for (i, &mi) in m.0.iter().enumerate() {
                for j in 0..n {
                    e[j] += rows[i][j] * mi as u64;
                }
            }
            if e.iter().sum::<u64>() >= self.order {
                continue;
            }
            coeffs.insert(Monomial(e.into_iter().map(|x| x as u32).collect()), c.clone());
        }
        TruncatedSeries { vars: self.vars.clone(), order: self.order, coeffs, tail_constant: self.tail_constant.clone() }
    }

    /// Lowest-order nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(&Monomial, &Rational)> {
        self.coeffs.iter().next()
    }
}

/// Upper bound for `C * sum_{d >= N} (d+1)^(n-1) rho^d` with `rho < 1`.
pub fn tail_bound(c: &Rational, n: usize, order: u64, rho: &Mag) -> Mag {
    if c.is_zero() {
        return Mag::ZERO;
    }
    let rho_q = rho.to_rational();
    debug_assert!(rho_q < Rational::one());
    if rho.is_zero() {
        return Mag::ZERO;
    }
    let k = n.saturating_sub(1) as u32;
    // explicit terms until the ratio ((d+2)/(d+1))^k rho drops below 1
    let mut d = order;
    let mut acc = Mag::ZERO;
    let term = |d: u64| -> Mag {
        let poly = Mag::from_rational_up(&Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(d + 1), k as usize)));
        poly.mul(&mag_pow(rho, d))
    };
    let half_way = (Rational::one() + &rho_q) / Rational::from_integer(2.into());
    loop {
        let ratio = num_traits::pow(Rational::new((d + 2).into(), (d + 1).into()), k as usize) * &rho_q;
        if ratio <= half_way {
            // the ratio keeps decreasing, so the rest is dominated geometrically
            let tail = term(d).div_up(&lower_mag(&(Rational::one() - &ratio)));
            acc = acc.add(&tail);
            break;
        }
        acc = acc.add(&term(d));
        d += 1;
    }
    acc.mul(&Mag::from_rational_up(c))
}

fn mag_pow(x: &Mag, mut e: u64) -> Mag {
    let mut result = Mag::pow2(0);
    let mut base = *x;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

/// Encloses the full series at a point inside the open unit polydisc.
pub fn series_eval_ball(s: &TruncatedSeries, point: &[RealBall], prec: u32) -> Result<RealBall> {
    let n = s.vars.len();
    if point.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: point.len() });
    }
    let one = Mag::pow2(0);
    let mut rho = Mag::ZERO;
    for (i, x) in point.iter().enumerate() {
        let u = x.abs_upper();
        if u.cmp_mag(&one) != std::cmp::Ordering::Less {
            return Err(Error::DivergenceRisk(i));
        }
        if u.cmp_mag(&rho) == std::cmp::Ordering::Greater {
            rho = u;
        }
    }
    let c = s
        .tail_constant
        .as_ref()
        .ok_or_else(|| Error::MissingTailBound(format!("series in {} has no tail constant", s.vars.join(","))))?;
    let w = prec + 16;
    let mut powers: Vec<BTreeMap<u32, RealBall>> = vec![BTreeMap::new(); n];
    let mut acc = RealBall::zero();
    for (m, coef) in &s.coeffs {
        let mut t = RealBall::from_rational(coef, w);
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = powers[i].entry(e).or_insert_with(|| point[i].pow(e as u64, w));
            t = t.mul(p, w);
        }
        acc = acc.add(&t, w);
    }
    Ok(acc.with_radius(tail_bound(c, n, s.order, &rho)).round(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::vars;
    use crate::exact::{int, rat};

    fn geometric(order: usize) -> TruncatedSeries {
        TruncatedSeries::univariate(&vars(&["z"]), &vec![int(1); order], Some(int(1))).unwrap()
    }

    #[test]
    fn geometric_series_enclosure() {
        let s = geometric(64);
        let b = series_eval_ball(&s, &[RealBall::from_rational(&rat(1, 2), 128)], 128).unwrap();
        assert!(b.contains_rational(&int(2)));
        assert!(b.radius().le_pow2(-60));
    }

    #[test]
    fn tail_formula_for_single_term() {
        let s = TruncatedSeries::univariate(&vars(&["z"]), &[int(0), int(1)], Some(int(1))).unwrap();
        let b = series_eval_ball(&s, &[RealBall::from_rational(&rat(1, 4), 64)], 64).unwrap();
        assert!(b.contains_rational(&rat(1, 4)));
        // tail <= (1/4)^2 / (1 - 1/4) = 1/12
        assert!(b.radius().to_rational() <= rat(1, 12) * rat(101, 100));
    }

    #[test]
    fn refuses_outside_unit_disc_or_without_bound() {
        let s = geometric(8);
        assert_eq!(series_eval_ball(&s, &[RealBall::from_int(1)], 64), Err(Error::DivergenceRisk(0)));
        let bare = TruncatedSeries::univariate(&vars(&["z"]), &[int(1)], None).unwrap();
        assert!(matches!(series_eval_ball(&bare, &[RealBall::zero()], 64), Err(Error::MissingTailBound(_))));
    }

    #[test]
    fn multivariate_tail_bound_dominates() {
        // sum of all monomials in two variables = 1/((1-x)(1-y))
        let v = vars(&["x", "y"]);
        let mut coeffs = Vec::new();
        for d in 0..20u32 {
            for e in monomials_of_degree(2, d) {
                coeffs.push((e, int(1)));
            }
        }
        let s = TruncatedSeries::new(&v, 20, coeffs, Some(int(1))).unwrap();
        let x = RealBall::from_rational(&rat(1, 3), 64);
        let y = RealBall::from_rational(&rat(1, 5), 64);
        let b = series_eval_ball(&s, &[x, y], 64).unwrap();
        assert!(b.contains_rational(&(rat(3, 2) * rat(5, 4))));
    }

    #[test]
    fn rational_function_expansion() {
        let v = vars(&["z"]);
        let r = crate::exact::parse::parse_rational_function("z/(1-z^2)", &v).unwrap();
        let s = TruncatedSeries::from_rational_function(&r, 10).unwrap();
        let want: Vec<Rational> = (0..10).map(|i| int(i % 2)).collect();
        assert_eq!(s.dense(), want);
        let back = s.mul_poly(r.den());
        assert_eq!(back.truncate(10), TruncatedSeries::from_poly(r.num(), 10));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_of_degree(3, 1).len(), 3);
        assert_eq!(monomials_of_degree(1, 5), vec![vec![5]]);
    }
}
