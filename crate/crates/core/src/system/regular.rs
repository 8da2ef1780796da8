//! Regularity of a point for a Mahler system.
//!
//! `alpha` is regular when every `A(T^k alpha)` is defined and invertible.
//! Small `k` are checked exactly; the tail is covered by a polydisc of
//! radius `r` around the origin on which no denominator and no numerator of
//! `det A` vanishes, once the orbit has entered it.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::poly::MultiPolynomial;
use crate::exact::{format_point, Rational};
use crate::orbit::{log_form_sign, ExpPoint};

use super::MahlerSystem;

/// Orbit points beyond this many bits are not written out.
const EXACT_BITS: f64 = 4.0e6;
/// Search limit for the orbit to enter the polydisc.
const ENTRY_LIMIT: u64 = 512;

/// `|p(0)| > sum_{lambda != 0} |p_lambda| r^|lambda|` for one polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBound {
    pub polynomial: String,
    pub value_at_zero: String,
    pub weight_at_radius: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    /// `A(T^k alpha)` was evaluated exactly for `k <= checked_exactly_up_to`.
    pub checked_exactly_up_to: u64,
    /// First `k` with `||T^k alpha|| <= r`; all later orbit points stay in
    /// the polydisc.
    pub k_star: u64,
    /// `r`, or `None` when `A` has constant denominators and determinant.
    pub tail_radius: Option<String>,
    pub tail_argument: Vec<TailBound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Regularity {
    Certificate(RegularityCertificate),
    CounterexampleAt { k: u64, point: Option<String>, reason: String },
    Inconclusive { checked_exactly_up_to: u64, reason: String },
}

impl Regularity {
    pub fn certificate(&self) -> Option<&RegularityCertificate> {
        match self {
            Regularity::Certificate(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_regular(&self) -> bool {
        self.certificate().is_some()
    }
}

/// Denominators of all entries and the numerator of `det A`, deduplicated.
pub fn relevant_polynomials(s: &MahlerSystem) -> Vec<MultiPolynomial> {
    let mut out: Vec<MultiPolynomial> = Vec::new();
    let mut push = |p: &MultiPolynomial| {
        if !p.is_constant() {
            let p = p.normalized();
            if !out.contains(&p) {
                out.push(p);
            }
        }
    };
    for e in s.matrix().iter() {
        push(e.den());
    }
    push(s.det().num());
    out
}

/// Whether `A(x)` is defined and invertible; `Err(reason)` otherwise.
pub fn check_point(s: &MahlerSystem, x: &[Rational]) -> std::result::Result<(), String> {
    let mut vals = Vec::with_capacity(s.size() * s.size());
    for e in s.matrix().iter() {
        match e.eval(x) {
            Ok(v) => vals.push(v),
            Err(_) => return Err(format!("pole of {e}")),
        }
    }
    let m = Matrix::from_rows(vals.chunks(s.size()).map(<[Rational]>::to_vec).collect()).expect("square");
    if m.det().expect("square").is_zero() {
        return Err("singular matrix".into());
    }
    Ok(())
}

/// `||x|| <= 2^{-j}` decided exactly on exponent vectors.
pub fn norm_le_pow2(p: &ExpPoint, j: u64) -> bool {
    let two = BigInt::from(2);
    let pos = p.primes().iter().position(|q| *q == two);
    let mut primes = p.primes().to_vec();
    if pos.is_none() {
        primes.push(two.clone());
    }
    let k = pos.unwrap_or(primes.len() - 1);
    (0..p.dim()).all(|i| {
        let mut e = p.exponents()[i].clone();
        if pos.is_none() {
            e.push(BigInt::zero());
        }
        e[k] += BigInt::from(j);
        log_form_sign(&primes, &e) != Ordering::Greater
    })
}

/// Largest `r = 2^{-j}`, `j >= 1`, with the coefficient-sum bound for every
/// polynomial, or `None` if some polynomial vanishes at the origin.
pub fn tail_radius(polys: &[MultiPolynomial]) -> Option<(u64, Vec<TailBound>)> {
    if polys.iter().any(|p| p.constant_term().is_zero()) {
        return None;
    }
    let mut j = 1u64;
    loop {
        let r = Rational::new(BigInt::one(), BigInt::one() << j as usize);
        let ok = polys.iter().all(|p| p.constant_term().abs() > p.nonconstant_weight(&r));
        if ok {
            let bounds = polys
                .iter()
                .map(|p| TailBound {
                    polynomial: p.to_string(),
                    value_at_zero: p.constant_term().to_string(),
                    weight_at_radius: p.nonconstant_weight(&r).to_string(),
                })
                .collect();
            return Some((j, bounds));
        }
        j += 1;
    }
}

pub fn check_regular(s: &MahlerSystem, alpha: &[Rational], k_exact: u64) -> Result<Regularity> {
    if alpha.len() != s.nvars() {
        return Err(Error::DimensionMismatch(format!("point has {} coordinates, system has {} variables", alpha.len(), s.nvars())));
    }
    let polys = relevant_polynomials(s);
    let t = s.transform();
    let start = ExpPoint::from_rationals(alpha)?;

    let tail = if polys.is_empty() {
        Some((0u64, None, Vec::new()))
    } else if t.min_row_sum().is_zero() {
        None
    } else {
        tail_radius(&polys).and_then(|(j, bounds)| {
            let mut p = start.clone();
            for k in 0..=ENTRY_LIMIT {
                if norm_le_pow2(&p, j) {
                    let r = Rational::new(BigInt::one(), BigInt::one() << j as usize);
                    return Some((k, Some(r.to_string()), bounds));
                }
                p = p.apply(t);
            }
            None
        })
    };

    let last = match &tail {
        Some((k_star, _, _)) => (*k_star).max(k_exact),
        None => k_exact,
    };
    let mut x = alpha.to_vec();
    let mut p = start;
    for k in 0..=last {
        if let Err(reason) = check_point(s, &x) {
            return Ok(Regularity::CounterexampleAt { k, point: Some(format_point(&x)), reason });
        }
        if k == last {
            break;
        }
        p = p.apply(t);
        if p.bits_estimate() > EXACT_BITS {
            return Ok(Regularity::Inconclusive { checked_exactly_up_to: k, reason: "orbit points too large to evaluate exactly".into() });
        }
        x = p.to_rationals().expect("within budget");
    }
    match tail {
        Some((k_star, tail_radius, tail_argument)) => {
            Ok(Regularity::Certificate(RegularityCertificate { checked_exactly_up_to: last, k_star, tail_radius, tail_argument }))
        }
        None => {
            let reason = if polys.iter().any(|p| p.constant_term().is_zero()) {
                "A is not defined and invertible at the origin"
            } else {
                "orbit did not enter the certified polydisc"
            };
            Ok(Regularity::Inconclusive { checked_exactly_up_to: last, reason: reason.into() })
        }
    }
}

/// Replays a regularity verdict with exact arithmetic only: the tail
/// inequalities at the stated radius, the orbit entering the polydisc at
/// `k_star`, and every exactly checked orbit point; or the stated failure.
pub fn verify_regularity(s: &MahlerSystem, alpha: &[Rational], r: &Regularity) -> Result<bool> {
    let t = s.transform();
    let orbit = |k: u64| -> Result<Option<Vec<Rational>>> {
        let p = ExpPoint::from_rationals(alpha)?.apply(&t.power(k));
        Ok(if p.bits_estimate() > EXACT_BITS { None } else { p.to_rationals() })
    };
    match r {
        Regularity::Certificate(c) => {
            let polys = relevant_polynomials(s);
            match &c.tail_radius {
                None => {
                    if !polys.is_empty() {
                        return Ok(false);
                    }
                }
                Some(rs) => {
                    let radius = crate::exact::parse_rational(rs)?;
                    let j = radius.denom().bits() - 1;
                    if !radius.numer().is_one() || radius.denom() != &(BigInt::one() << j as usize) || t.min_row_sum().is_zero() {
                        return Ok(false);
                    }
                    if !polys.iter().all(|p| p.constant_term().abs() > p.nonconstant_weight(&radius)) {
                        return Ok(false);
                    }
                    if !norm_le_pow2(&ExpPoint::from_rationals(alpha)?.apply(&t.power(c.k_star)), j) {
                        return Ok(false);
                    }
                }
            }
            if c.checked_exactly_up_to < c.k_star {
                return Ok(false);
            }
            for k in 0..=c.checked_exactly_up_to {
                match orbit(k)? {
                    Some(x) if check_point(s, &x).is_ok() => {}
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
        Regularity::CounterexampleAt { k, .. } => Ok(matches!(orbit(*k)?, Some(x) if check_point(s, &x).is_err())),
        Regularity::Inconclusive { .. } => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::vars;
    use crate::exact::rat;
    use crate::system::tests::{example_two_eight, rf_matrix, thue_morse};
    use crate::transform::MonomialTransform;

    #[test]
    fn polynomial_system_has_trivial_tail() {
        let r = check_regular(&example_two_eight(), &[rat(1, 2), rat(1, 3)], 0).unwrap();
        let c = r.certificate().unwrap();
        assert_eq!(c.k_star, 0);
        assert!(c.tail_radius.is_none());
    }

    #[test]
    fn thue_morse_is_regular_at_one_third() {
        let r = check_regular(&thue_morse(), &[rat(1, 3)], 4).unwrap();
        let c = r.certificate().unwrap();
        assert_eq!(c.tail_argument.len(), 2);
        assert_eq!(c.tail_radius.as_deref(), Some("1/2"));
        assert_eq!(c.k_star, 0);
        assert_eq!(c.checked_exactly_up_to, 4);
        assert!(verify_regularity(&thue_morse(), &[rat(1, 3)], &r).unwrap());
        let mut forged = c.clone();
        forged.tail_radius = Some("1".into());
        assert!(!verify_regularity(&thue_morse(), &[rat(1, 3)], &Regularity::Certificate(forged)).unwrap());
    }

    #[test]
    fn constructed_pole() {
        let v = vars(&["z"]);
        let s = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1/(z - 1/16)"]], &v), vec!["f".into()]).unwrap();
        let r = check_regular(&s, &[rat(1, 2)], 0).unwrap();
        assert!(matches!(r, Regularity::CounterexampleAt { k: 2, .. }), "{r:?}");
        assert!(verify_regularity(&s, &[rat(1, 2)], &r).unwrap());
        let forged = Regularity::CounterexampleAt { k: 1, point: None, reason: String::new() };
        assert!(!verify_regularity(&s, &[rat(1, 2)], &forged).unwrap());
    }

    #[test]
    fn singular_at_origin_is_inconclusive() {
        let v = vars(&["z"]);
        let s = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["z"]], &v), vec!["f".into()]).unwrap();
        let r = check_regular(&s, &[rat(1, 2)], 6).unwrap();
        assert!(matches!(r, Regularity::Inconclusive { checked_exactly_up_to: 6, .. }), "{r:?}");
        assert!(check_regular(&s, &[rat(1, 2), rat(1, 2)], 6).is_err());
    }
}
