//! Dense univariate polynomials over the rationals, Sturm-sequence real root
//! isolation, and exactly comparable real algebraic numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ball::RealBall;
use super::matrix::Matrix;
use super::poly::{MultiPolynomial, Vars};
use super::{common_denominator, int, Rational};
use crate::error::{Error, Result};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Rational::one()])
    }

    /// `x^n`.
    pub fn x_pow(n: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        UPoly(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn eval_ball(&self, x: &RealBall, prec: u32) -> RealBall {
        let mut acc = RealBall::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(x, prec).add(&RealBall::from_rational(c, prec), prec);
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Rational::zero) + o.0.get(i).cloned().unwrap_or_else(Rational::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let lc = d.lead();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Integer primitive representative with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = common_denominator(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        let s = if self.lead().is_negative() { -g } else { g };
        Self::new(ints.into_iter().map(|x| Rational::new(x, s.clone())).collect())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    /// Strict upper bound on the absolute value of every complex root.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.lead().abs();
        let m = self.0[..self.0.len() - 1].iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    pub fn to_multi(&self, vars: &Vars) -> MultiPolynomial {
        MultiPolynomial::univariate(vars, &self.0)
    }

    pub fn from_multi(p: &MultiPolynomial) -> Result<Self> {
        if p.nvars() > 1 {
            return Err(Error::DimensionMismatch("expected a univariate polynomial".into()));
        }
        if p.nvars() == 0 {
            return Ok(Self::new(vec![p.constant_term()]));
        }
        let deg = p.degree_in(0) as usize;
        let mut c = vec![Rational::zero(); deg + 1];
        for (m, x) in p.terms() {
            c[m.0[0] as usize] = x.clone();
        }
        Ok(Self::new(c))
    }

    /// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
    pub fn charpoly(m: &Matrix<Rational>) -> Self {
        let n = m.rows();
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut mk: Matrix<Rational> = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = m.mul(&mk).expect("square");
            let c = coeffs[n - k + 1].clone();
            for i in 0..n {
                let v = next.get(i, i) + &c;
                next.set(i, i, v);
            }
            mk = next;
            let am = m.mul(&mk).expect("square");
            let tr: Rational = (0..n).map(|i| am.get(i, i).clone()).sum();
            coeffs[n - k] = -tr / int(k as i64);
        }
        Self::new(coeffs)
    }

    /// Cyclotomic polynomial `Phi_d`.
    pub fn cyclotomic(d: usize) -> Self {
        let mut cache: Vec<Option<UPoly>> = vec![None; d + 1];
        cyclotomic_rec(d, &mut cache)
    }

    /// Sturm sequence of a squarefree polynomial.
    fn sturm(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps sign patterns intact
            let r = r.neg();
            let c = r.lead().abs();
            seq.push(r.scale(&c.recip()));
        }
        seq
    }

    fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
        let signs: Vec<i32> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        let sf = self.squarefree_part();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = sf.sturm();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// One isolating interval per distinct real root, in increasing order.
    pub fn isolate_real_roots(&self) -> Vec<RootInterval> {
        assert!(!self.is_zero(), "root isolation of the zero polynomial");
        let sf = self.squarefree_part();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let seq = sf.sturm();
        let b = sf.cauchy_bound();
        let mut out = Vec::new();
        isolate(&sf, &seq, -b.clone(), b, &mut out);
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Real roots as algebraic numbers, in increasing order.
    pub fn real_roots(&self) -> Vec<RealAlgebraic> {
        let sf = self.squarefree_part();
        self.isolate_real_roots()
            .into_iter()
            .map(|iv| RealAlgebraic { poly: sf.clone(), lo: iv.lo, hi: iv.hi })
            .collect()
    }
}

fn cyclotomic_rec(d: usize, cache: &mut Vec<Option<UPoly>>) -> UPoly {
    if let Some(p) = &cache[d] {
        return p.clone();
    }
    let mut p = UPoly::x_pow(d).sub(&UPoly::one());
    for e in 1..d {
        if d.is_multiple_of(e) {
            let f = cyclotomic_rec(e, cache);
            p = p.div_rem(&f).0;
        }
    }
    cache[d] = Some(p.clone());
    p
}

fn isolate(p: &UPoly, seq: &[UPoly], a: Rational, b: Rational, out: &mut Vec<RootInterval>) {
    let count = UPoly::sign_changes(seq, &a) - UPoly::sign_changes(seq, &b);
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(RootInterval { lo: a, hi: b });
        return;
    }
    let m = (&a + &b) / int(2);
    if p.sign_at(&m) != 0 {
        isolate(p, seq, a, m.clone(), out);
        isolate(p, seq, m, b, out);
        return;
    }
    out.push(RootInterval { lo: m.clone(), hi: m.clone() });
    let mut delta = (&b - &a) / int(4);
    loop {
        let l = &m - &delta;
        let h = &m + &delta;
        if p.sign_at(&l) != 0 && p.sign_at(&h) != 0 && UPoly::sign_changes(seq, &l) - UPoly::sign_changes(seq, &h) == 1 {
            isolate(p, seq, a, l, out);
            isolate(p, seq, h, b, out);
            return;
        }
        delta /= int(2);
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = super::poly::vars(&["x"]);
        write!(f, "{}", self.to_multi(&v))
    }
}

/// Isolating interval: the single point `lo` when `lo == hi`, otherwise the
/// open interval `(lo, hi)` whose endpoints are not roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_exact() {
            *x == self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }
}

/// A real root of a squarefree rational polynomial, pinned by an isolating
/// interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealAlgebraic {
    poly: UPoly,
    lo: Rational,
    hi: Rational,
}

impl RealAlgebraic {
    pub fn from_rational(x: Rational) -> Self {
        let poly = UPoly::new(vec![-x.clone(), Rational::one()]);
        RealAlgebraic { poly, lo: x.clone(), hi: x }
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn interval(&self) -> (Rational, Rational) {
        (self.lo.clone(), self.hi.clone())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Bisects until the isolating interval is at most `width` wide.
    pub fn refine(&mut self, width: &Rational) {
        while !self.is_exact() && &(&self.hi - &self.lo) > width {
            self.bisect();
        }
    }

    fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let m = (&self.lo + &self.hi) / int(2);
        let sm = self.poly.sign_at(&m);
        if sm == 0 {
            self.lo = m.clone();
            self.hi = m;
            return;
        }
        if sm == self.poly.sign_at(&self.lo) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    pub fn refined(&self, width: &Rational) -> Self {
        let mut c = self.clone();
        c.refine(width);
        c
    }

    /// Ball enclosure with radius at most `2^-prec` (relative to magnitude 1).
    pub fn to_ball(&self, prec: u32) -> RealBall {
        let w = Rational::new(BigInt::one(), BigInt::one() << (prec as usize + 2));
        let r = self.refined(&w);
        RealBall::from_interval(&r.lo, &r.hi, prec + 8)
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.is_exact() && b.is_exact() {
            return a.lo.cmp(&b.lo);
        }
        let g = a.poly.gcd(&b.poly);
        loop {
            if a.hi < b.lo || (a.hi == b.lo && !(a.is_exact() && b.is_exact())) {
                return Ordering::Less;
            }
            if b.hi < a.lo || (b.hi == a.lo && !(a.is_exact() && b.is_exact())) {
                return Ordering::Greater;
            }
            // intervals overlap: equal iff the gcd has a root in the overlap
            let lo = if a.lo > b.lo { a.lo.clone() } else { b.lo.clone() };
            let hi = if a.hi < b.hi { a.hi.clone() } else { b.hi.clone() };
            if g.degree().unwrap_or(0) > 0 {
                let inside = if lo == hi {
                    g.sign_at(&lo) == 0
                } else {
                    g.count_roots(&lo, &hi) - usize::from(g.sign_at(&hi) == 0) > 0
                };
                if inside && a.contains_or_is(&lo, &hi) && b.contains_or_is(&lo, &hi) {
                    return Ordering::Equal;
                }
            }
            a.bisect();
            b.bisect();
        }
    }

    fn contains_or_is(&self, lo: &Rational, hi: &Rational) -> bool {
        if self.is_exact() {
            lo == hi && *lo == self.lo
        } else {
            &self.lo <= lo && hi <= &self.hi
        }
    }

    /// Midpoint approximation, for reporting only.
    pub fn approx_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let r = self.refined(&Rational::new(BigInt::one(), BigInt::one() << 64usize));
        ((&r.lo + &r.hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "root of {} in ({}, {})", self.poly, self.lo, self.hi)
        }
    }
}
