//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{common_denominator, numerator_gcd, Rational};
use crate::error::{Error, Result};

/// Exponent multi-index, ordered graded-lexicographically: total degree
/// first, then the first variable with a larger exponent wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered variable names shared between polynomials.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Multivariate polynomial over the rationals.
///
/// A polynomial with an empty variable list is a bare constant and combines
/// with polynomials over any variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPolynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPolynomial {
    pub fn zero_in(vars: &Vars) -> Self {
        MultiPolynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant_in(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero_in(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::constant_in(&Vars::from(Vec::new()), c)
    }

    /// The `i`-th variable.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, Monomial(e), Rational::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "monomial arity");
        let mut p = Self::zero_in(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero_in(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "monomial arity");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Univariate polynomial from dense coefficients `c_0, c_1, ...`.
    pub fn univariate(vars: &Vars, coeffs: &[Rational]) -> Self {
        assert_eq!(vars.len(), 1);
        Self::from_terms(vars, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.nvars())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Re-express this polynomial over `target`, which must contain every
    /// variable occurring here.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        if Arc::ptr_eq(&self.vars, target) || self.vars[..] == target[..] {
            return Ok(MultiPolynomial { vars: target.clone(), terms: self.terms.clone() });
        }
        let map = self
            .vars
            .iter()
            .map(|v| {
                target
                    .iter()
                    .position(|t| t == v)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{v}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self::zero_in(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            p.add_term(Monomial(e), c.clone());
        }
        Ok(p)
    }

    /// Same terms over a renamed variable list of equal length.
    pub fn relabel(&self, names: &Vars) -> Self {
        if self.vars.is_empty() {
            return Self::constant_in(names, self.constant_term());
        }
        assert_eq!(names.len(), self.vars.len(), "relabel arity");
        MultiPolynomial { vars: names.clone(), terms: self.terms.clone() }
    }

    fn aligned(a: &Self, b: &Self) -> (Vars, Self, Self) {
        if a.vars[..] == b.vars[..] {
            return (a.vars.clone(), a.clone(), b.clone());
        }
        if a.vars.is_empty() {
            let a2 = MultiPolynomial::constant_in(&b.vars, a.constant_term());
            return (b.vars.clone(), a2, b.clone());
        }
        if b.vars.is_empty() {
            let b2 = MultiPolynomial::constant_in(&a.vars, b.constant_term());
            return (a.vars.clone(), a.clone(), b2);
        }
        panic!("polynomials over different variable lists: {:?} vs {:?}", a.vars, b.vars);
    }

    fn binary(&self, other: &Self, f: impl FnOnce(&Vars, &Self, &Self) -> Self) -> Self {
        if self.vars[..] == other.vars[..] {
            f(&self.vars, self, other)
        } else {
            let (v, a, b) = Self::aligned(self, other);
            f(&v, &a, &b)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_in(&self.vars);
        }
        MultiPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_in(&self.vars);
        }
        MultiPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::constant_in(&self.vars, Rational::one());
        let mut base = self.clone();
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

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() && !self.vars.is_empty() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        if self.vars.is_empty() {
            return Ok(self.constant_term());
        }
        // powers are cached per variable since orbit points can be large
        let mut cache: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); self.nvars()];
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache[i]
                    .entry(e)
                    .or_insert_with(|| num_traits::pow(point[i].clone(), e as usize));
                t *= &*p;
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Monomial substitution `z_i -> prod_j z_j^{t_ij}`.
    pub fn substitute_monomial(&self, rows: &[Vec<u64>]) -> Self {
        let n = self.nvars();
        assert_eq!(rows.len(), n, "transform size");
        let mut p = Self::zero_in(&self.vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; n];
            for (i, &mi) in m.0.iter().enumerate() {
                if mi == 0 {
                    continue;
                }
                for j in 0..n {
                    e[j] += (rows[i][j] as u32) * mi;
                }
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Substitutes polynomials (over a common target list) for every variable.
    pub fn compose(&self, images: &[MultiPolynomial]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        let mut acc = Self::zero_in(&target);
        for (m, c) in &self.terms {
            let mut t = Self::constant_in(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Numeric content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients.
    pub fn numeric_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let den = common_denominator(self.terms.values());
        let scaled: Vec<Rational> = self.terms.values().map(|c| c * Rational::from_integer(den.clone())).collect();
        let g = numerator_gcd(scaled.iter());
        Rational::new(g.abs(), den)
    }

    /// Integer primitive representative with a positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.numeric_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (vars, a, d) = Self::aligned(self, d);
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = a;
        let mut q = Self::zero_in(&vars);
        while let Some((rm, rc)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            q.add_term(m.clone(), c.clone());
            r = &r - &d.mul_monomial(&m, &c);
        }
        Some(q)
    }

    /// Coefficients in variable `v`: `self = sum_k coeff_k * v^k` where each
    /// `coeff_k` no longer involves `v`.
    fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero_in(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut e = m.clone();
            e.0[v] = 0;
            out[k].add_term(e, c.clone());
        }
        out
    }

    fn first_var(&self) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.degree_in(i) > 0)
    }

    /// Greatest common divisor, normalized to be integer primitive with a
    /// positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (_, a, b) = Self::aligned(self, other);
        gcd_rec(&a, &b)
    }

    /// Pseudo-remainder of `self` by `d` as polynomials in variable `v`.
    fn prem(&self, d: &Self, v: usize) -> Self {
        let dd = d.degree_in(v);
        let lc_d = d.coeffs_in(v).pop().expect("nonzero divisor");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let dr = r.degree_in(v);
            let lc_r = r.coeffs_in(v).pop().expect("nonzero");
            let mut shift = vec![0; self.nvars()];
            shift[v] = dr - dd;
            let t = &lc_r * &Self::monomial(&self.vars, Monomial(shift), Rational::one());
            r = &(&r * &lc_d) - &(&t * d);
            r = r.normalized();
        }
        r
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut p = Self::zero_in(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[v];
            if k > 0 {
                let mut e = m.clone();
                e.0[v] -= 1;
                p.add_term(e, c * Rational::from_integer(BigInt::from(k)));
            }
        }
        p
    }

    /// Sum of absolute values of all non-constant coefficients weighted by
    /// `r^|lambda|`.
    pub fn nonconstant_weight(&self, r: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let d = m.degree();
            if d > 0 {
                acc += c.abs() * num_traits::pow(r.clone(), d as usize);
            }
        }
        acc
    }
}

fn content_in(p: &MultiPolynomial, v: usize) -> MultiPolynomial {
    let mut g = MultiPolynomial::zero_in(&p.vars);
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return MultiPolynomial::constant_in(&p.vars, Rational::one());
        }
    }
    g
}

fn primitive_in(p: &MultiPolynomial, v: usize) -> MultiPolynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    let q = if c.is_constant() { p.clone() } else { p.exact_div(&c).expect("content divides") };
    q.normalized()
}

fn gcd_rec(a: &MultiPolynomial, b: &MultiPolynomial) -> MultiPolynomial {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPolynomial::constant_in(&a.vars, Rational::one());
    }
    let v = match (a.first_var(), b.first_var()) {
        (Some(x), Some(y)) => x.min(y),
        _ => unreachable!(),
    };
    if a.degree_in(v) == 0 {
        return gcd_rec(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd_rec(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let mut x = primitive_in(a, v);
    let mut y = primitive_in(b, v);
    if x.degree_in(v) < y.degree_in(v) {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        if y.is_zero() {
            break;
        }
        if y.degree_in(v) == 0 {
            // a primitive polynomial free of v is a unit
            x = MultiPolynomial::constant_in(&a.vars, Rational::one());
            break;
        }
        let r = x.prem(&y, v);
        x = y;
        y = primitive_in(&r, v);
    }
    let g = if x.is_constant() { x } else { primitive_in(&x, v) };
    (&g * &c).normalized()
}

impl Zero for MultiPolynomial {
    fn zero() -> Self {
        MultiPolynomial::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPolynomial {
    fn one() -> Self {
        MultiPolynomial::constant(Rational::one())
    }
}

impl<'a> Add<&'a MultiPolynomial> for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn add(self, other: &MultiPolynomial) -> MultiPolynomial {
        self.binary(other, |_, a, b| {
            let mut p = a.clone();
            for (m, c) in &b.terms {
                p.add_term(m.clone(), c.clone());
            }
            p
        })
    }
}

impl<'a> Sub<&'a MultiPolynomial> for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn sub(self, other: &MultiPolynomial) -> MultiPolynomial {
        self.binary(other, |_, a, b| {
            let mut p = a.clone();
            for (m, c) in &b.terms {
                p.add_term(m.clone(), -c);
            }
            p
        })
    }
}

impl<'a> Mul<&'a MultiPolynomial> for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn mul(self, other: &MultiPolynomial) -> MultiPolynomial {
        self.binary(other, |v, a, b| {
            let mut p = MultiPolynomial::zero_in(v);
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    p.add_term(ma.mul(mb), ca * cb);
                }
            }
            p
        })
    }
}

impl Neg for &MultiPolynomial {
    type Output = MultiPolynomial;
    fn neg(self) -> MultiPolynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, other: $t) -> $t { (&self).$m(&other) }
        }
    )*};
}
forward_owned!(MultiPolynomial, Add add, Sub sub, Mul mul);

impl Neg for MultiPolynomial {
    type Output = MultiPolynomial;
    fn neg(self) -> MultiPolynomial {
        -&self
    }
}

pub(crate) fn fmt_rational_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            let coeff = fmt_rational_coeff(&a);
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else if a.is_integer() {
                write!(f, "{}*{}", coeff, factors.join("*"))?;
            } else {
                write!(f, "({})*{}", coeff, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn v2() -> Vars {
        vars(&["z1", "z2"])
    }

    #[test]
    fn grlex_order() {
        assert!(Monomial(vec![2, 0]) > Monomial(vec![1, 1]));
        assert!(Monomial(vec![1, 1]) > Monomial(vec![0, 2]));
        assert!(Monomial(vec![0, 2]) > Monomial(vec![1, 0]));
    }

    #[test]
    fn evaluates_examples() {
        let v = v2();
        let z1 = MultiPolynomial::var(&v, 0);
        let z2 = MultiPolynomial::var(&v, 1);
        let one = MultiPolynomial::constant_in(&v, int(1));
        let p = &(&z1 * &z2) - &one;
        assert_eq!(p.eval(&[rat(1, 2), int(2)]).unwrap(), int(0));
        assert_eq!(one.eval(&[rat(7, 3), int(-5)]).unwrap(), int(1));
        let q = &z1.pow(2) + &z2;
        assert_eq!(q.eval(&[rat(1, 3), rat(1, 9)]).unwrap(), rat(2, 9));
        assert!(matches!(q.eval(&[int(1)]), Err(Error::ArityMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn univariate_gcd() {
        let v = vars(&["z"]);
        let z = MultiPolynomial::var(&v, 0);
        let one = MultiPolynomial::constant_in(&v, int(1));
        let a = &(&one - &z.pow(2)) * &(&z + &one);
        let b = &(&one - &z.pow(4)) * &z;
        let g = a.gcd(&b);
        // gcd is (1 - z^2) up to normalization
        assert_eq!(g, (&z.pow(2) - &one).normalized());
    }

    #[test]
    fn multivariate_gcd_and_division() {
        let v = v2();
        let x = MultiPolynomial::var(&v, 0);
        let y = MultiPolynomial::var(&v, 1);
        let one = MultiPolynomial::constant_in(&v, int(1));
        let f = &(&x + &y) * &(&(&x * &y) - &one);
        let g = &(&x + &y) * &(&x - &(&y * &y));
        let d = f.gcd(&g);
        assert_eq!(d, (&x + &y).normalized());
        assert_eq!(f.exact_div(&d).unwrap(), &(&x * &y) - &one);
        assert!(f.exact_div(&(&x - &one)).is_none());
    }

    #[test]
    fn monomial_substitution() {
        let v = v2();
        let x = MultiPolynomial::var(&v, 0);
        let y = MultiPolynomial::var(&v, 1);
        let p = &x + &(&x * &y);
        let rows = vec![vec![1, 1], vec![1, 0]];
        // x -> x*y, y -> x
        let q = p.substitute_monomial(&rows);
        assert_eq!(q, &(&x * &y) + &(&x.pow(2) * &y));
    }

    #[test]
    fn displays_in_grammar() {
        let v = v2();
        let x = MultiPolynomial::var(&v, 0);
        let y = MultiPolynomial::var(&v, 1);
        let p = &(&x.pow(2).scale(&int(3)) - &y) + &MultiPolynomial::constant_in(&v, rat(1, 2));
        assert_eq!(p.to_string(), "3*z1^2 - z2 + 1/2");
    }
}
