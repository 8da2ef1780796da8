//! Rigorous values `f(alpha) = A_k(alpha) f(T^k alpha)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::ball::RealBall;
use crate::exact::matrix::Matrix;
use crate::exact::series::{series_eval_ball, TruncatedSeries};
use crate::exact::Rational;
use crate::orbit::ExpPoint;

use super::regular::{check_regular, Regularity};
use super::MahlerSystem;

/// Largest iterate tried by [`evaluate_values`].
pub const MAX_DEPTH: u64 = 32;
const EXACT_BITS: f64 = 4.0e6;

/// `A_k(alpha)` from the exact orbit points.
pub fn iterate_at(s: &MahlerSystem, alpha: &[Rational], k: u64) -> Result<Matrix<Rational>> {
    let m = s.size();
    let mut acc = Matrix::<Rational>::identity(m);
    let mut p = ExpPoint::from_rationals(alpha)?;
    for _ in 0..k {
        let x = p.to_rationals().ok_or(Error::PrecisionUnreachable(0))?;
        let a = s.matrix().try_map(|r| r.eval(&x))?;
        acc = acc.mul(&a)?;
        p = p.apply(s.transform());
    }
    Ok(acc)
}

fn check_series(s: &MahlerSystem, series: &[TruncatedSeries]) -> Result<()> {
    if series.len() != s.size() {
        return Err(Error::DimensionMismatch(format!("{} series for {} components", series.len(), s.size())));
    }
    for f in series {
        if f.vars().len() != s.nvars() {
            return Err(Error::ArityMismatch { expected: s.nvars(), got: f.vars().len() });
        }
        if f.tail_constant().is_none() {
            return Err(Error::MissingTailBound(format!("series in {} has no tail constant", f.vars().join(","))));
        }
    }
    Ok(())
}

/// `A_k(alpha) * (series at T^k alpha)` at working precision `prec`, with no
/// accuracy target.
pub fn evaluate_at_depth(s: &MahlerSystem, alpha: &[Rational], series: &[TruncatedSeries], k: u64, prec: u32) -> Result<Vec<RealBall>> {
    check_series(s, series)?;
    let p = ExpPoint::from_rationals(alpha)?.apply(&s.transform().power(k));
    if p.bits_estimate() > EXACT_BITS {
        return Err(Error::PrecisionUnreachable(prec as usize));
    }
    let x = p.to_rationals().expect("within budget");
    let ak = iterate_at(s, alpha, k)?;
    let ball_point: Vec<RealBall> = x.iter().map(|v| RealBall::from_rational(v, prec)).collect();
    let inner: Vec<RealBall> = series.iter().map(|f| series_eval_ball(f, &ball_point, prec)).collect::<Result<_>>()?;
    Ok(combine(&ak, &inner, prec))
}

fn combine(ak: &Matrix<Rational>, inner: &[RealBall], prec: u32) -> Vec<RealBall> {
    (0..ak.rows())
        .map(|i| {
            let mut acc = RealBall::zero();
            for (j, b) in inner.iter().enumerate() {
                let c = ak.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let term = if c.is_one() { b.clone() } else { b.mul_rational(c, prec) };
                acc = acc.add(&term, prec);
            }
            acc
        })
        .collect()
}

/// Balls of radius at most `2^-precision_bits` around the values of the
/// components at a regular point.
pub fn evaluate_values(s: &MahlerSystem, alpha: &[Rational], series: &[TruncatedSeries], precision_bits: u32) -> Result<Vec<RealBall>> {
    evaluate_values_with_depth(s, alpha, series, precision_bits).map(|(v, _)| v)
}

/// [`evaluate_values`] together with the iteration depth `k` that reached
/// the target.
pub fn evaluate_values_with_depth(s: &MahlerSystem, alpha: &[Rational], series: &[TruncatedSeries], precision_bits: u32) -> Result<(Vec<RealBall>, u64)> {
    check_series(s, series)?;
    match check_regular(s, alpha, 0)? {
        Regularity::Certificate(_) => {}
        Regularity::CounterexampleAt { k, reason, .. } => return Err(Error::NotRegular(format!("fails at k = {k}: {reason}"))),
        Regularity::Inconclusive { reason, .. } => return Err(Error::NotRegular(format!("regularity not certified: {reason}"))),
    }
    let w = precision_bits + 64;
    let mut p = ExpPoint::from_rationals(alpha)?;
    let min_order = series.iter().map(|f| f.order()).min().unwrap_or(0) as f64;
    let mut ak = Matrix::<Rational>::identity(s.size());
    for k in 0..=MAX_DEPTH {
        if p.bits_estimate() > EXACT_BITS {
            break;
        }
        let x = p.to_rationals().expect("within budget");
        // cheap skip: the tail is about ||x||^order
        let l = p.log2_norm_estimate();
        let promising = l < 0.0 && l * min_order < -(precision_bits as f64) + 8.0;
        if promising {
            let ball_point: Vec<RealBall> = x.iter().map(|v| RealBall::from_rational(v, w)).collect();
            let inner: Option<Vec<RealBall>> = series
                .iter()
                .map(|f| match series_eval_ball(f, &ball_point, w) {
                    Ok(b) => Some(Ok(b)),
                    Err(Error::DivergenceRisk(_)) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Option<Result<Vec<_>>>>()
                .transpose()?;
            if let Some(inner) = inner {
                let out = combine(&ak, &inner, w);
                if out.iter().all(|b| b.radius().le_pow2(-(precision_bits as i64))) {
                    return Ok((out, k));
                }
            }
        }
        if k == MAX_DEPTH {
            break;
        }
        let a = s.matrix().try_map(|r| r.eval(&x))?;
        ak = ak.mul(&a)?;
        p = p.apply(s.transform());
    }
    Err(Error::PrecisionUnreachable(precision_bits as usize))
}

/// One-line description of a ball: decimal endpoints and radius.
pub fn describe_ball(b: &RealBall, digits: usize) -> String {
    let (lo, hi) = b.endpoints_decimal(digits);
    format!("[{lo}, {hi}] (radius <= 2^{})", b.radius().log2_ceil())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::vars;
    use crate::exact::{int, rat};
    use crate::system::scalar::{scalar_to_system, ScalarMahlerEquation};
    use crate::system::tests::{rf_matrix, thue_morse};
    use crate::transform::MonomialTransform;

    fn lacunary(order: usize) -> Vec<Rational> {
        let mut c = vec![int(0); order];
        let mut e = 1;
        while e < order {
            c[e] = int(1);
            e *= 2;
        }
        c
    }

    fn lacunary_value(x: &Rational) -> Rational {
        let mut acc = int(0);
        let mut p = x.clone();
        for _ in 0..12 {
            acc += &p;
            p = &p * &p;
        }
        acc
    }

    #[test]
    fn lacunary_series_value() {
        // (1, f) with f(z) = f(z^2) + z
        let v = vars(&["z"]);
        let s = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1", "0"], &["z", "1"]], &v), vec!["one".into(), "f".into()]).unwrap();
        let series = vec![
            TruncatedSeries::univariate(&v, &[int(1)], Some(int(1))).unwrap(),
            TruncatedSeries::univariate(&v, &lacunary(64), Some(int(1))).unwrap(),
        ];
        for (x, digits) in [(rat(1, 2), "0.8164215090"), (rat(1, 3), "0.4569425624")] {
            let out = evaluate_values(&s, std::slice::from_ref(&x), &series, 200).unwrap();
            assert!(out[1].radius().le_pow2(-200));
            // partial sums of 12 terms are within 2^-4000 of the value
            let oracle = lacunary_value(&x);
            let eps = Rational::new(1.into(), num_bigint::BigInt::one() << 4000usize);
            assert!(out[1].overlaps(&RealBall::from_interval(&oracle, &(&oracle + eps), 4200)));
            assert!(out[1].mid_decimal(10).starts_with(digits), "{}", out[1].mid_decimal(10));
        }
    }

    #[test]
    fn pole_at_origin_is_not_certified() {
        let eq = ScalarMahlerEquation::homogeneous(2, &["z", "-z-1", "1"]).unwrap();
        let s = scalar_to_system(&eq).unwrap();
        let v = vars(&["z"]);
        let series = vec![TruncatedSeries::univariate(&v, &lacunary(16), Some(int(1))).unwrap(); 2];
        assert!(matches!(evaluate_values(&s, &[rat(1, 2)], &series, 64), Err(Error::NotRegular(_))));
    }

    #[test]
    fn geometric_series() {
        let v = vars(&["z"]);
        let s = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1+z"]], &v), vec!["f".into()]).unwrap();
        let series = vec![TruncatedSeries::univariate(&v, &vec![int(1); 32], Some(int(1))).unwrap()];
        let out = evaluate_values(&s, &[rat(1, 2)], &series, 100).unwrap();
        assert!(out[0].contains_rational(&int(2)));
    }

    #[test]
    fn depth_consistency_and_errors() {
        let s = thue_morse();
        let v = vars(&["z"]);
        let one = TruncatedSeries::univariate(&v, &[int(1)], Some(int(1))).unwrap();
        let tm: Vec<Rational> = (0..64u32).map(|n| int((n.count_ones() % 2) as i64)).collect();
        let f = TruncatedSeries::univariate(&v, &tm, Some(int(1))).unwrap();
        let series = vec![one, f.clone()];
        let balls: Vec<RealBall> = (0..5).map(|k| evaluate_at_depth(&s, &[rat(1, 3)], &series, k, 128).unwrap()[1].clone()).collect();
        for a in &balls {
            for b in &balls {
                assert!(a.overlaps(b));
            }
        }
        let bare = vec![series[0].clone(), TruncatedSeries::univariate(&v, &tm, None).unwrap()];
        assert!(matches!(evaluate_values(&s, &[rat(1, 3)], &bare, 64), Err(Error::MissingTailBound(_))));
        let pole = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1/(z - 1/16)"]], &v), vec!["f".into()]).unwrap();
        let r = evaluate_values(&pole, &[rat(1, 2)], &[f], 64);
        assert!(matches!(r, Err(Error::NotRegular(_))));
    }
}
