//! Scalar equations `p_{-1}(z) + sum_i p_i(z) f(z^{q^i}) = 0` and their
//! companion systems.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::parse::parse_polynomial;
use crate::exact::poly::{vars, MultiPolynomial};
use crate::exact::ratfun::RationalFunction;
use crate::exact::Rational;
use crate::transform::MonomialTransform;

use super::{homogenize, InhomogeneousSystem, MahlerSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMahlerEquation {
    pub q: u64,
    /// `p_0, ..., p_m` in the variable `z`.
    pub coeffs: Vec<MultiPolynomial>,
    pub inhomogeneous: Option<MultiPolynomial>,
}

/// Serialized form with polynomials as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarEquationJson {
    pub q: u64,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inhomogeneous: Option<String>,
}

impl ScalarMahlerEquation {
    pub fn new(q: u64, coeffs: Vec<MultiPolynomial>, inhomogeneous: Option<MultiPolynomial>) -> Result<Self> {
        if q < 2 {
            return Err(Error::Invalid("q must be at least 2".into()));
        }
        let z = vars(&["z"]);
        let coeffs: Vec<MultiPolynomial> = coeffs.iter().map(|p| p.embed(&z)).collect::<Result<_>>()?;
        let inhomogeneous = inhomogeneous.map(|p| p.embed(&z)).transpose()?.filter(|p| !p.is_zero());
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("all coefficients are zero".into()));
        }
        Ok(ScalarMahlerEquation { q, coeffs, inhomogeneous })
    }

    /// Parses polynomial strings in `z`.
    pub fn homogeneous(q: u64, coeffs: &[&str]) -> Result<Self> {
        let z = vars(&["z"]);
        Self::new(q, coeffs.iter().map(|s| parse_polynomial(s, &z)).collect::<Result<_>>()?, None)
    }

    pub fn from_json(j: &ScalarEquationJson) -> Result<Self> {
        let z = vars(&["z"]);
        let coeffs = j.coeffs.iter().map(|s| parse_polynomial(s, &z)).collect::<Result<_>>()?;
        let inh = j.inhomogeneous.as_deref().map(|s| parse_polynomial(s, &z)).transpose()?;
        Self::new(j.q, coeffs, inh)
    }

    pub fn to_json(&self) -> ScalarEquationJson {
        ScalarEquationJson {
            q: self.q,
            coeffs: self.coeffs.iter().map(|p| p.to_string()).collect(),
            inhomogeneous: self.inhomogeneous.as_ref().map(|p| p.to_string()),
        }
    }

    /// Order `m`, ignoring trailing zero coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.iter().rposition(|p| !p.is_zero()).unwrap_or(0)
    }

    /// Coefficients of `sum_i p_i(z) f(z^{q^i}) + p_{-1}(z)` for a series `f`,
    /// below degree `n`; `f` is given densely.
    pub fn residual(&self, f: &[Rational], n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        if let Some(p) = &self.inhomogeneous {
            add_poly_times(&mut out, p, &[Rational::one()], 1);
        }
        let mut step = 1usize;
        for p in &self.coeffs {
            if !p.is_zero() {
                add_poly_times(&mut out, p, f, step);
            }
            step = step.saturating_mul(self.q as usize);
        }
        out
    }
}

/// `out += p(z) * g(z^step)` where `g` is dense.
fn add_poly_times(out: &mut [Rational], p: &MultiPolynomial, g: &[Rational], step: usize) {
    let n = out.len();
    for (m, c) in p.terms() {
        let d = m.0[0] as usize;
        for (k, gk) in g.iter().enumerate() {
            if gk.is_zero() {
                continue;
            }
            let e = match k.checked_mul(step).and_then(|x| x.checked_add(d)) {
                Some(e) if e < n => e,
                _ => break,
            };
            out[e] += c * gk;
        }
    }
}

/// Companion system for `(f(z), f(z^q), ..., f(z^{q^{m-1}}))`, with the
/// constant 1 prepended when the equation is inhomogeneous.
pub fn scalar_to_system(e: &ScalarMahlerEquation) -> Result<MahlerSystem> {
    let p0 = &e.coeffs[0];
    if p0.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let m = e.order();
    let z = vars(&["z"]);
    let t = MonomialTransform::scalar(1, e.q);
    let zero = RationalFunction::constant_in(&z, Rational::zero());
    let one = RationalFunction::constant_in(&z, Rational::one());
    let p0r = RationalFunction::from_poly(p0.clone());
    if m == 0 {
        // p_0 f + p_{-1} = 0: f is rational and f(z) = (f(z)/f(z^q)) f(z^q)
        return Err(Error::Invalid("equation of order 0 has no Mahler part".into()));
    }
    let comps: Vec<String> = (0..m).map(|i| if i == 0 { "f".to_string() } else { format!("f_q{i}") }).collect();
    let a = Matrix::from_fn(m, m, |i, j| {
        if i == 0 {
            -(&RationalFunction::from_poly(e.coeffs[j + 1].clone()) / &p0r)
        } else if j + 1 == i {
            one.clone()
        } else {
            zero.clone()
        }
    });
    let base = MahlerSystem::new(z.clone(), t, a, comps)?;
    match &e.inhomogeneous {
        None => Ok(base),
        Some(b) => {
            let mut col = vec![zero.clone(); m];
            col[0] = -(&RationalFunction::from_poly(b.clone()) / &p0r);
            homogenize(&InhomogeneousSystem { system: base, inhomogeneous: col })
        }
    }
}
