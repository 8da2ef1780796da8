//! Rational functions in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::{MultiPolynomial, Vars};
use super::{format_point, Rational};
use crate::error::{Error, Result};

/// Quotient `num / den` with `gcd(num, den) = 1`.
///
/// The canonical form has `den` integer primitive with a positive graded-lex
/// leading coefficient; the zero function is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: MultiPolynomial,
    den: MultiPolynomial,
}

impl RationalFunction {
    pub fn new(num: MultiPolynomial, den: MultiPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: MultiPolynomial) -> Self {
        let den = MultiPolynomial::constant_in(p.vars(), Rational::one());
        RationalFunction { num: p, den }
    }

    pub fn constant_in(vars: &Vars, c: Rational) -> Self {
        Self::from_poly(MultiPolynomial::constant_in(vars, c))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPolynomial::constant(c))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::from_poly(MultiPolynomial::var(vars, i))
    }

    fn normalize(num: MultiPolynomial, den: MultiPolynomial) -> Self {
        let vars = if num.vars().is_empty() { den.vars().clone() } else { num.vars().clone() };
        if num.is_zero() {
            return RationalFunction {
                num: MultiPolynomial::zero_in(&vars),
                den: MultiPolynomial::constant_in(&vars, Rational::one()),
            };
        }
        let (num, den) = if den.is_constant() {
            let c = den.constant_term();
            (num.scale(&c.recip()), MultiPolynomial::constant_in(den.vars(), Rational::one()))
        } else if num.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
            }
        };
        let mut c = den.numeric_content();
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        let num = num.scale(&inv).embed_or_promote(&vars);
        let den = den.scale(&inv).embed_or_promote(&vars);
        RationalFunction { num, den }
    }

    pub fn num(&self) -> &MultiPolynomial {
        &self.num
    }

    pub fn den(&self) -> &MultiPolynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn embed(&self, target: &Vars) -> Result<Self> {
        Ok(RationalFunction { num: self.num.embed(target)?, den: self.den.embed(target)? })
    }

    pub fn relabel(&self, names: &Vars) -> Self {
        RationalFunction { num: self.num.relabel(names), den: self.den.relabel(names) }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint { point: format_point(point) });
        }
        Ok(self.num.eval(point)? / d)
    }

    /// `r(Tz)` for the monomial transformation with the given rows.
    pub fn substitute_monomial(&self, rows: &[Vec<u64>]) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        Self::normalize(self.num.substitute_monomial(rows), self.den.substitute_monomial(rows))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }
}

trait EmbedOrPromote {
    fn embed_or_promote(self, vars: &Vars) -> Self;
}

impl EmbedOrPromote for MultiPolynomial {
    fn embed_or_promote(self, vars: &Vars) -> Self {
        if self.vars()[..] == vars[..] {
            self
        } else if self.vars().is_empty() {
            MultiPolynomial::constant_in(vars, self.constant_term())
        } else {
            self
        }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::normalize(&self.num + &o.num, self.den.clone());
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RationalFunction::normalize(num, &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero().promote(self, o);
        }
        if self.is_polynomial() && o.is_polynomial() {
            return RationalFunction::normalize(&self.num * &o.num, &self.den * &o.den);
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = o.den.exact_div(&g1).expect("gcd divides");
        let n2 = o.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        RationalFunction::normalize(&n1 * &n2, &d1 * &d2)
    }
}

impl RationalFunction {
    fn promote(self, a: &RationalFunction, b: &RationalFunction) -> Self {
        let vars = if a.vars().is_empty() { b.vars() } else { a.vars() };
        RationalFunction::constant_in(vars, self.num.constant_term())
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self * &o.recip().expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, other: RationalFunction) -> RationalFunction { (&self).$m(&other) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MultiPolynomial| {
            if p.num_terms() > 1 || p.to_string().contains(['/', '*']) {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::vars;
    use crate::exact::{int, rat};

    fn tm_entry() -> RationalFunction {
        let v = vars(&["z"]);
        let z = MultiPolynomial::var(&v, 0);
        let one = MultiPolynomial::constant_in(&v, int(1));
        RationalFunction::new(z.clone(), &one - &z.pow(2)).unwrap()
    }

    #[test]
    fn evaluation_and_poles() {
        let r = tm_entry();
        assert_eq!(r.eval(&[rat(1, 3)]).unwrap(), rat(3, 8));
        assert!(matches!(r.eval(&[int(1)]), Err(Error::PoleAtPoint { .. })));
        let c = RationalFunction::constant(int(5));
        assert_eq!(c.eval(&[rat(1, 7)]).unwrap(), int(5));
    }

    #[test]
    fn rejects_zero_denominator() {
        let v = vars(&["z"]);
        let z = MultiPolynomial::var(&v, 0);
        assert_eq!(RationalFunction::new(z, MultiPolynomial::zero_in(&v)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let v = vars(&["z"]);
        let z = MultiPolynomial::var(&v, 0);
        let one = MultiPolynomial::constant_in(&v, int(1));
        // (1 - z^2) / (2 - 2z) = (1 + z) / 2
        let r = RationalFunction::new(&one - &z.pow(2), (&one - &z).scale(&int(2))).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &(&one + &z).scale(&rat(1, 2)));
        let sum = &tm_entry() + &tm_entry();
        assert_eq!(sum.eval(&[rat(1, 3)]).unwrap(), rat(3, 4));
        let q = &sum / &tm_entry();
        assert_eq!(q, RationalFunction::constant_in(&v, int(2)));
    }

    #[test]
    fn normalization_is_idempotent() {
        let r = tm_entry();
        let again = RationalFunction::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(r, again);
        assert!(r.den().leading_coeff() > Rational::zero());
    }
}
