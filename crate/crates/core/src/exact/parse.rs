//! Text grammar for polynomials and rational functions:
//! integers, identifiers, `+ - * / ^ ( )`, with `^` taking a nonnegative
//! integer exponent.
//!
//! Division is accepted anywhere (`1/(z - 1/16)`), which is a superset of
//! the "numerator / denominator" form written by [`std::fmt::Display`].

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{MultiPolynomial, Vars};
use super::ratfun::RationalFunction;
use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Int(txt.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Vars,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in `{}`", self.src))
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    n.to_u32().ok_or_else(|| self.err("exponent too large"))?
                }
                _ => return Err(self.err("`^` needs a nonnegative integer exponent")),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant_in(self.vars, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| self.err(&format!("unknown variable `{name}`")))?;
                Ok(RationalFunction::var(self.vars, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

pub fn parse_rational_function(s: &str, vars: &Vars) -> Result<RationalFunction> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, vars, src: s };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

pub fn parse_polynomial(s: &str, vars: &Vars) -> Result<MultiPolynomial> {
    let r = parse_rational_function(s, vars)?;
    if !r.is_polynomial() {
        return Err(Error::Parse(format!("`{s}` is not a polynomial")));
    }
    let c = r.den().constant_term();
    debug_assert!(!c.is_zero());
    Ok(if c.is_one() { r.num().clone() } else { r.num().scale(&c.recip()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::vars;
    use crate::exact::{int, rat};

    #[test]
    fn parses_polynomials() {
        let v = vars(&["z1", "z2"]);
        let p = parse_polynomial("z1^2 + z2 - 3*(z1 - 1)", &v).unwrap();
        assert_eq!(p.eval(&[int(2), int(5)]).unwrap(), int(6));
        assert_eq!(parse_polynomial("-z1", &v).unwrap().eval(&[int(4), int(0)]).unwrap(), int(-4));
        assert!(parse_polynomial("z3", &v).is_err());
        assert!(parse_polynomial("z1^-1", &v).is_err());
        assert!(parse_polynomial("1/z1", &v).is_err());
    }

    #[test]
    fn parses_rational_functions() {
        let v = vars(&["z"]);
        let r = parse_rational_function("z/(1-z^2)", &v).unwrap();
        assert_eq!(r.eval(&[rat(1, 3)]).unwrap(), rat(3, 8));
        let pole = parse_rational_function("1/(z - 1/16)", &v).unwrap();
        assert_eq!(pole.eval(&[rat(1, 2)]).unwrap(), rat(16, 7));
        assert!(parse_rational_function("1/(z-z)", &v).is_err());
    }

    #[test]
    fn display_round_trips() {
        let v = vars(&["z1", "z2"]);
        for s in ["z1/(1 - z1^2)", "-z2 + 3*z1^2*z2", "(z1 + z2)/(2*z1*z2 - 1)", "1/2"] {
            let r = parse_rational_function(s, &v).unwrap();
            let again = parse_rational_function(&r.to_string(), &v).unwrap();
            assert_eq!(r, again, "{s} -> {r}");
        }
    }
}
