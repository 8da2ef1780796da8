//! Empirical search for polynomial relations among evaluated values.
//!
//! Nothing here proves independence: a bounded search that finds nothing is
//! only consistent with independence.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ball::RealBall;
use crate::exact::poly::{vars, MultiPolynomial};
use crate::exact::series::{monomials_of_degree, TruncatedSeries};
use crate::exact::{format_point, Rational};
use crate::lattice::{lll, norm2, short_vector, IVec};
use crate::relations::{check_t_independence, multiplicatively_independent, TIndependence};
use crate::system::admissible::{check_admissible_pair, AdmissibilityOptions, Verdict};
use crate::system::eval::evaluate_values;
use crate::system::regular::check_regular;
use crate::system::MahlerSystem;
use crate::transform::MonomialTransform;

/// Extra bits per monomial in the precision rule.
pub const GUARD_BITS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum RelationSearch {
    NoRelationFound { degree_bound: u32, height_bound: String, precision: u32 },
    CandidateRelation {
        polynomial: String,
        /// Residual interval at doubled working precision.
        residual: (String, String),
        precision: u32,
    },
}

impl RelationSearch {
    pub fn is_candidate(&self) -> bool {
        matches!(self, RelationSearch::CandidateRelation { .. })
    }

    pub fn polynomial(&self) -> Option<&str> {
        match self {
            RelationSearch::CandidateRelation { polynomial, .. } => Some(polynomial),
            _ => None,
        }
    }
}

/// Names used when printing relations: `x, y, z` for up to three values.
pub fn value_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Exponent vectors of total degree at most `d`, highest degree first.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    (0..=d).rev().flat_map(|k| monomials_of_degree(n, k)).collect()
}

/// Bits demanded by the precision rule `p >= t (log2 H + 64)`.
pub fn required_precision(monomials: usize, height: &BigInt) -> u64 {
    monomials as u64 * (height.bits() + GUARD_BITS)
}

fn effective_precision(values: &[RealBall]) -> Option<u64> {
    values.iter().filter(|b| !b.is_exact()).map(|b| (-b.radius().log2_ceil()).max(0) as u64).min()
}

fn monomial_value(values: &[RealBall], e: &[u32], prec: u32) -> RealBall {
    let mut acc = RealBall::one();
    for (v, &k) in values.iter().zip(e) {
        if k > 0 {
            acc = acc.mul(&v.pow(k as u64, prec), prec);
        }
    }
    acc
}

fn residual(values: &[RealBall], monos: &[Vec<u32>], c: &[BigInt], prec: u32) -> RealBall {
    let mut acc = RealBall::zero();
    for (e, ci) in monos.iter().zip(c) {
        if !ci.is_zero() {
            acc = acc.add(&monomial_value(values, e, prec).mul_int(ci, prec), prec);
        }
    }
    acc
}

/// Lattice search over `[I | round(2^s v)]` for an integer vector `c` with
/// `|c| <= height` and `sum c_i v_i` vanishing at doubled precision.
/// Returns the coefficient vector and the residual ball.
pub fn linear_relation(values: &[RealBall], height: &BigInt) -> Result<Option<(IVec, RealBall)>> {
    let t = values.len();
    if t < 2 {
        return Ok(None);
    }
    let need = required_precision(t, height);
    let p = effective_precision(values).unwrap_or(need);
    if p < need {
        return Err(Error::InsufficientPrecision(format!("{t} unknowns with height 2^{} need {need} bits, values carry {p}", height.bits())));
    }
    let s = need;
    let scale = Rational::from_integer(BigInt::one() << s as usize);
    let basis: Vec<IVec> = (0..t)
        .map(|i| {
            let mut row: IVec = (0..t).map(|j| BigInt::from((i == j) as i64)).collect();
            row.push((values[i].mid_rational() * &scale).round().to_integer());
            row
        })
        .collect();
    let reduced = lll(&basis)?;
    let mut cands: Vec<IVec> = reduced.iter().map(|r| r[..t].to_vec()).collect();
    if let Some(v) = short_vector(&reduced) {
        cands.insert(0, v[..t].to_vec());
    }
    cands.sort_by_key(|c| norm2(c));
    let check = (2 * p).min(u32::MAX as u64) as u32;
    for mut c in cands {
        if c.iter().all(Zero::is_zero) || c.iter().any(|x| x.abs() > *height) {
            continue;
        }
        let r = values.iter().zip(&c).fold(RealBall::zero(), |acc, (v, ci)| acc.add(&v.mul_int(ci, check), check));
        let narrow = r.radius().le_pow2(-((p / 2) as i64) - 1);
        if r.contains_zero() && narrow {
            let g = c.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
            if !g.is_one() {
                c.iter_mut().for_each(|x| *x /= &g);
            }
            return Ok(Some((c, r)));
        }
    }
    Ok(None)
}

/// Integer polynomial relation of total degree `<= degree` and coefficient
/// height `<= height` among the values.
pub fn integer_relation(values: &[RealBall], degree: u32, height: &BigInt) -> Result<RelationSearch> {
    let n = values.len();
    if n == 0 || degree == 0 {
        return Err(Error::Invalid("need at least one value and degree >= 1".into()));
    }
    let monos = monomials_up_to(n, degree);
    let t = monos.len();
    let need = required_precision(t, height);
    let p = effective_precision(values).unwrap_or(need);
    if p < need {
        return Err(Error::InsufficientPrecision(format!("{t} monomials with height 2^{} need {need} bits, values carry {p}", height.bits())));
    }
    let prec = (p + 32).min(u32::MAX as u64) as u32;
    let mvals: Vec<RealBall> = monos.iter().map(|e| monomial_value(values, e, prec)).collect();
    let precision = p as u32;
    match linear_relation(&mvals, height)? {
        None => Ok(RelationSearch::NoRelationFound { degree_bound: degree, height_bound: height.to_string(), precision }),
        Some((c, _)) => {
            let names = vars(&value_names(n));
            let poly = MultiPolynomial::from_terms(&names, monos.iter().cloned().zip(c.iter().map(|x| Rational::from_integer(x.clone())))).normalized();
            // residual recomputed from the original values at doubled precision
            let coeffs: Vec<BigInt> = monos.iter().map(|e| poly.coeff(&crate::exact::poly::Monomial(e.clone())).to_integer()).collect();
            let r = residual(values, &monos, &coeffs, (2 * p).min(u32::MAX as u64) as u32);
            if !r.contains_zero() {
                return Ok(RelationSearch::NoRelationFound { degree_bound: degree, height_bound: height.to_string(), precision });
            }
            let (lo, hi) = r.endpoints_decimal(12);
            Ok(RelationSearch::CandidateRelation { polynomial: poly.to_string(), residual: (lo, hi), precision })
        }
    }
}

/// One system, point and series triple of a probe bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleEntry {
    pub system: MahlerSystem,
    pub series: Vec<TruncatedSeries>,
    pub point: Vec<Rational>,
    /// Components to evaluate; by default every component whose series is
    /// not a constant.
    pub components: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryChecks {
    pub point: String,
    pub points_multiplicatively_independent: bool,
    pub admissibility: Verdict,
    pub regular: bool,
    pub regularity_status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub entries: Vec<EntryChecks>,
    /// Orbit relations for the direct sum of all entries.
    pub direct_sum_t_independence: Option<TIndependence>,
    /// `None` when some spectral radius is not rational, so the exact
    /// check does not apply.
    pub radii_pairwise_independent: Option<bool>,
    /// Single system: admissible and regular.
    pub single_system: bool,
    /// Several systems sharing a transform: direct sum admissible, regular
    /// and T-independent.
    pub shared_transform: bool,
    /// Several systems with pairwise multiplicatively independent radii.
    pub independent_radii: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRecord {
    pub entry: usize,
    pub component: String,
    pub point: String,
    pub lo: String,
    pub hi: String,
    pub radius_log2: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub degree_bound: u32,
    pub height_bound: String,
    pub precision_bits: u32,
    pub hypotheses: Hypotheses,
    pub values: Vec<ValueRecord>,
    pub probe_result: RelationSearch,
    /// Values whose balls admit a rational of small height: possibly in K,
    /// undecided.
    pub possibly_rational: Vec<usize>,
    pub summary: String,
}

fn is_constant_series(f: &TruncatedSeries) -> bool {
    f.terms().all(|(m, _)| m.0.iter().all(|&e| e == 0))
}

fn direct_sum_transform(ts: &[&MonomialTransform]) -> Result<MonomialTransform> {
    let n: usize = ts.iter().map(|t| t.size()).sum();
    let mut rows = vec![vec![0u64; n]; n];
    let mut off = 0;
    for t in ts {
        for (i, r) in t.rows_u64()?.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                rows[off + i][off + j] = *x;
            }
        }
        off += t.size();
    }
    MonomialTransform::from_u64(&rows)
}

fn radii_independent(ts: &[&MonomialTransform]) -> Result<Option<bool>> {
    let mut rs = Vec::new();
    for t in ts {
        let r = t.spectral_radius();
        if !r.is_exact() {
            return Ok(None);
        }
        rs.push(r.interval().0);
    }
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if !multiplicatively_independent(&[rs[i].clone(), rs[j].clone()])?.independent {
                return Ok(Some(false));
            }
        }
    }
    Ok(Some(true))
}

pub const SUMMARY_NONE: &str = "no relation within the search bounds; consistent with the values being algebraically independent, which this bounded search does not establish";

/// Hypothesis checks, rigorous values and a bounded relation search.
pub fn independence_report(bundle: &[BundleEntry], degree: u32, height: &BigInt, precision_bits: u32) -> Result<IndependenceReport> {
    if bundle.is_empty() {
        return Err(Error::Invalid("empty bundle".into()));
    }
    let opts = AdmissibilityOptions::default();
    let mut entries = Vec::new();
    let mut balls = Vec::new();
    let mut records = Vec::new();
    for (idx, e) in bundle.iter().enumerate() {
        let t = e.system.transform();
        let adm = check_admissible_pair(t, &e.point, &opts)?;
        let reg = check_regular(&e.system, &e.point, 0)?;
        let indep = multiplicatively_independent(&e.point)?.independent;
        let status = serde_json::to_value(&reg).ok().and_then(|v| v.get("status").and_then(|s| s.as_str()).map(String::from)).unwrap_or_default();
        entries.push(EntryChecks { point: format_point(&e.point), points_multiplicatively_independent: indep, admissibility: adm.verdict.clone(), regular: reg.is_regular(), regularity_status: status });
        let vals = evaluate_values(&e.system, &e.point, &e.series, precision_bits)?;
        for (i, c) in e.system.components().iter().enumerate() {
            let chosen = match &e.components {
                Some(list) => list.contains(c),
                None => !is_constant_series(&e.series[i]),
            };
            if chosen {
                let (lo, hi) = vals[i].endpoints_decimal(((precision_bits as f64) * std::f64::consts::LOG10_2) as usize);
                records.push(ValueRecord { entry: idx, component: c.clone(), point: format_point(&e.point), lo, hi, radius_log2: vals[i].radius().log2_ceil() });
                balls.push(vals[i].clone());
            }
        }
    }
    if let Some(list) = bundle.iter().filter_map(|e| e.components.as_ref()).next() {
        if balls.is_empty() {
            return Err(Error::Invalid(format!("no component among {list:?}")));
        }
    }
    let ts: Vec<&MonomialTransform> = bundle.iter().map(|e| e.system.transform()).collect();
    let big_t = direct_sum_transform(&ts)?;
    let big_alpha: Vec<Rational> = bundle.iter().flat_map(|e| e.point.iter().cloned()).collect();
    let direct = if big_t.is_nonsingular() { Some(check_t_independence(&big_t, &big_alpha, opts.b_max)?) } else { None };
    let radii = radii_independent(&ts)?;
    let ok = |c: &EntryChecks| c.regular && matches!(c.admissibility, Verdict::Admissible | Verdict::AdmissibleUpToBound { .. });
    let single_system = bundle.len() == 1 && ok(&entries[0]);
    let same_t = ts.windows(2).all(|w| w[0] == w[1]);
    let shared_transform = bundle.len() > 1 && same_t && entries.iter().all(ok) && matches!(direct, Some(TIndependence::Independent { .. }));
    let independent_radii = bundle.len() > 1 && entries.iter().all(ok) && radii == Some(true);
    let hypotheses = Hypotheses { entries, direct_sum_t_independence: direct, radii_pairwise_independent: radii, single_system, shared_transform, independent_radii };

    let probe_result = integer_relation(&balls, degree, height)?;
    // values close to a rational of height <= 2^32
    let small = BigInt::one() << 32usize;
    let mut possibly_rational = Vec::new();
    for (i, b) in balls.iter().enumerate() {
        if let Some((c, _)) = linear_relation(&[RealBall::one(), b.clone()], &small).ok().flatten() {
            if !c[1].is_zero() {
                possibly_rational.push(i);
            }
        }
    }
    let summary = match &probe_result {
        RelationSearch::NoRelationFound { .. } => SUMMARY_NONE.to_string(),
        RelationSearch::CandidateRelation { polynomial, .. } => format!("candidate relation {polynomial} = 0, numerically verified only"),
    };
    Ok(IndependenceReport {
        degree_bound: degree,
        height_bound: height.to_string(),
        precision_bits,
        hypotheses,
        values: records,
        probe_result,
        possibly_rational,
        summary,
    })
}

/// `ceil(digits * log2 10)`.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil().to_u32().unwrap_or(u32::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn h() -> BigInt {
        BigInt::from(10u64).pow(15)
    }

    #[test]
    fn sqrt_two() {
        let p = digits_to_bits(300);
        let r = RealBall::from_int(2).sqrt(p + 16).unwrap();
        let res = integer_relation(&[r], 2, &h()).unwrap();
        assert_eq!(res.polynomial(), Some("x^2 - 2"));
    }

    #[test]
    fn planted_linear_relation() {
        let p = 1200;
        let v = RealBall::from_int(3).ln(p).unwrap();
        let w = RealBall::one().sub(&v, p);
        assert_eq!(integer_relation(&[v.clone(), w], 1, &h()).unwrap().polynomial(), Some("x + y - 1"));
        assert_eq!(integer_relation(&[v.clone(), v], 1, &h()).unwrap().polynomial(), Some("x - y"));
    }

    #[test]
    fn no_relation_between_logs() {
        let p = 1200;
        let a = RealBall::from_int(2).ln(p).unwrap();
        let b = RealBall::from_int(3).ln(p).unwrap();
        let res = integer_relation(&[a, b], 2, &h()).unwrap();
        assert!(matches!(res, RelationSearch::NoRelationFound { degree_bound: 2, .. }), "{res:?}");
    }

    #[test]
    fn precision_rule() {
        let a = RealBall::from_rational(&rat(1, 3), 100);
        assert!(matches!(integer_relation(&[a], 3, &h()), Err(Error::InsufficientPrecision(_))));
        assert_eq!(required_precision(10, &h()), 10 * (50 + 64));
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        let _ = int(0);
    }

    fn lacunary_bundle(alpha: &[Rational]) -> BundleEntry {
        let system = crate::system::tests::example_two_eight();
        let v = system.vars().clone();
        let lac = |i: usize| -> Vec<(Vec<u32>, Rational)> {
            (0..7).map(|k| {
                let mut e = vec![0, 0];
                e[i] = 1 << k;
                (e, int(1))
            }).collect()
        };
        let series = vec![
            TruncatedSeries::new(&v, 128, vec![(vec![0, 0], int(1))], Some(int(1))).unwrap(),
            TruncatedSeries::new(&v, 128, lac(0), Some(int(1))).unwrap(),
            TruncatedSeries::new(&v, 128, lac(1), Some(int(1))).unwrap(),
        ];
        BundleEntry { system, series, point: alpha.to_vec(), components: None }
    }

    #[test]
    fn bundle_reports() {
        let r = independence_report(&[lacunary_bundle(&[rat(1, 2), rat(1, 3)])], 1, &h(), 500).unwrap();
        assert!(r.hypotheses.single_system, "{:?}", r.hypotheses);
        assert_eq!(r.values.len(), 2);
        assert!(r.values[0].lo.starts_with("0.8164215090"));
        assert!(!r.probe_result.is_candidate());
        assert!(r.summary.contains("consistent with"));
        let r = independence_report(&[lacunary_bundle(&[rat(1, 2), rat(1, 2)])], 1, &h(), 500).unwrap();
        assert!(!r.hypotheses.single_system);
        assert!(matches!(r.hypotheses.entries[0].admissibility, Verdict::NotAdmissible { .. }));
        assert_eq!(r.probe_result.polynomial(), Some("x - y"));
    }
}

