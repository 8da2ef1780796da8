//! Admissibility of a pair `(T, alpha)`: class M, orbit tending to zero and
//! T-independence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::orbit::ExpPoint;
use crate::relations::{check_t_independence, multiplicatively_independent, verify_dependence, TIndependence};
use crate::transform::{check_class_m, check_limit_zero, ClassMReport, LimitZero, MonomialTransform};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityOptions {
    pub k_max: u64,
    pub b_max: u64,
    /// Width of the isolating interval reported for the spectral radius.
    pub radius_width: Rational,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions { k_max: 64, b_max: 16, radius_width: rat(1, 1_000_000) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail")]
pub enum Verdict {
    /// Every condition holds with a certificate.
    Admissible,
    /// Class M and limit zero are certified; no orbit relation exists for
    /// progression moduli up to `b_max`.
    AdmissibleUpToBound { b_max: u64 },
    NotAdmissible { reason: String },
    /// The orbit did not fall below norm 1 within `k_max` steps.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub class_m: ClassMReport,
    pub limit_zero: LimitZero,
    /// Absent when `T` is singular.
    pub t_independence: Option<TIndependence>,
    pub verdict: Verdict,
    /// Isolating interval for `rho(T)`.
    pub rho: (String, String),
    /// `-ln ||T^{k0} alpha|| / rho^{k0}`, a numerical estimate of the decay
    /// constant `c`.
    pub c_estimate: Option<f64>,
}

pub fn check_admissible_pair(t: &MonomialTransform, alpha: &[Rational], opts: &AdmissibilityOptions) -> Result<AdmissibilityReport> {
    if alpha.len() != t.size() {
        return Err(Error::DimensionMismatch("point and transform sizes differ".into()));
    }
    let class_m = check_class_m(t, &opts.radius_width);
    let limit_zero = check_limit_zero(t, alpha, opts.k_max)?;
    let t_independence = if t.is_nonsingular() { Some(check_t_independence(t, alpha, opts.b_max)?) } else { None };
    let rho = class_m.spectral_radius.clone();

    let c_estimate = match &limit_zero {
        LimitZero::Certificate(c) => {
            let p = ExpPoint::from_rationals(alpha)?.apply(&t.power(c.k0));
            let ln_norm = p.log2_norm_estimate() * std::f64::consts::LN_2;
            let rho_f = t.spectral_radius().approx_f64();
            Some(-ln_norm / rho_f.powi(c.k0 as i32))
        }
        LimitZero::Inconclusive { .. } => None,
    };

    let verdict = if let Some(f) = &class_m.failed {
        Verdict::NotAdmissible { reason: format!("T is not in class M: {f} condition fails") }
    } else if let Some(TIndependence::Dependent { mu, a, b }) = &t_independence {
        Verdict::NotAdmissible { reason: format!("alpha is T-dependent: (T^({a}+{b}d) alpha)^({}) = 1 for all d", mu.join(",")) }
    } else if let LimitZero::Inconclusive { .. } = limit_zero {
        Verdict::Inconclusive { reason: format!("||T^k alpha|| >= 1 for all k <= {}", opts.k_max) }
    } else {
        match &t_independence {
            Some(TIndependence::Independent { proved: true, .. }) => Verdict::Admissible,
            _ => Verdict::AdmissibleUpToBound { b_max: opts.b_max },
        }
    };
    Ok(AdmissibilityReport { class_m, limit_zero, t_independence, verdict, rho, c_estimate })
}

/// Orbit steps over which a dependence witness is replayed.
pub const REPLAY_DEPTH: u64 = 50;

/// Replays an admissibility report with exact arithmetic: the class-M
/// conditions are recomputed, the limit-zero witness re-derived and a
/// dependence witness checked for `d = 0..=REPLAY_DEPTH`.
pub fn verify_admissibility(t: &MonomialTransform, alpha: &[Rational], r: &AdmissibilityReport) -> Result<bool> {
    let class_m = check_class_m(t, &AdmissibilityOptions::default().radius_width);
    if class_m.in_class_m != r.class_m.in_class_m || class_m.failed != r.class_m.failed || class_m.determinant != r.class_m.determinant {
        return Ok(false);
    }
    if let LimitZero::Certificate(c) = &r.limit_zero {
        if !c.verify(t, alpha)? {
            return Ok(false);
        }
    }
    if let Some((mu, a, b)) = r.t_independence.as_ref().and_then(TIndependence::witness) {
        if !verify_dependence(t, alpha, &mu, a, b, REPLAY_DEPTH)? {
            return Ok(false);
        }
    }
    if let Some(TIndependence::Independent { proved: true, .. }) = &r.t_independence {
        if !multiplicatively_independent(alpha)?.independent {
            return Ok(false);
        }
    }
    let consistent = match &r.verdict {
        Verdict::Admissible => {
            class_m.in_class_m && matches!(r.limit_zero, LimitZero::Certificate(_)) && matches!(r.t_independence, Some(TIndependence::Independent { proved: true, .. }))
        }
        Verdict::AdmissibleUpToBound { .. } => class_m.in_class_m && matches!(r.limit_zero, LimitZero::Certificate(_)),
        Verdict::NotAdmissible { .. } => !class_m.in_class_m || matches!(r.t_independence, Some(TIndependence::Dependent { .. })),
        Verdict::Inconclusive { .. } => true,
    };
    Ok(consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn spec_pairs() {
        let o = AdmissibilityOptions::default();
        let two = MonomialTransform::scalar(2, 2);
        let r = check_admissible_pair(&two, &[rat(1, 2), rat(1, 3)], &o).unwrap();
        assert_eq!(r.verdict, Verdict::Admissible);
        assert!(r.c_estimate.unwrap() > 0.6);
        assert!(verify_admissibility(&two, &[rat(1, 2), rat(1, 3)], &r).unwrap());
        let r = check_admissible_pair(&two, &[rat(1, 2), rat(1, 2)], &o).unwrap();
        assert!(matches!(r.verdict, Verdict::NotAdmissible { ref reason } if reason.contains("T-dependent")));
        assert!(verify_admissibility(&two, &[rat(1, 2), rat(1, 2)], &r).unwrap());
        assert!(!verify_admissibility(&two, &[rat(1, 2), rat(1, 4)], &r).unwrap());
        let r = check_admissible_pair(&MonomialTransform::diag(&[2, 3]), &[rat(1, 2), rat(1, 3)], &o).unwrap();
        assert!(matches!(r.verdict, Verdict::NotAdmissible { ref reason } if reason.contains("Perron")));
    }

    #[test]
    fn orbit_away_from_zero() {
        let o = AdmissibilityOptions { k_max: 10, ..Default::default() };
        let r = check_admissible_pair(&MonomialTransform::scalar(1, 2), &[rat(3, 2)], &o).unwrap();
        assert!(matches!(r.verdict, Verdict::Inconclusive { .. }));
    }
}
