//! Multihomogeneous monomial bases, relation matrices, iteration schedules
//! and orbit scans.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ball::RealBall;
use crate::exact::matrix::{Matrix, RingElem};
use crate::exact::poly::MultiPolynomial;
use crate::exact::ratfun::RationalFunction;
use crate::exact::series::monomials_of_degree;
use crate::exact::upoly::RealAlgebraic;
use crate::exact::{rat, Rational};
use crate::lattice::{sign_normalize, IVec};
use crate::orbit::{compose, ExpPoint};
use crate::probe::linear_relation;
use crate::transform::{check_class_m, MonomialTransform};

/// Exponent tuples `mu` with `sum_j mu_{i,j} = d_i` in every block,
/// graded-lex within a block, first block varying slowest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIndex {
    pub block_sizes: Vec<usize>,
    pub degrees: Vec<u32>,
    pub monomials: Vec<Vec<u32>>,
}

impl MonomialIndex {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn total_size(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn position(&self, mu: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|m| m == mu)
    }
}

pub fn monomial_basis(m: &[usize], d: &[u32]) -> Result<MonomialIndex> {
    if m.len() != d.len() || m.is_empty() {
        return Err(Error::DimensionMismatch("one degree per block is needed".into()));
    }
    if m.contains(&0) {
        return Err(Error::Invalid("block sizes must be positive".into()));
    }
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (&mi, &di) in m.iter().zip(d) {
        let block = monomials_of_degree(mi, di);
        out = out.iter().flat_map(|pre| block.iter().map(move |b| pre.iter().chain(b).copied().collect())).collect();
    }
    Ok(MonomialIndex { block_sizes: m.to_vec(), degrees: d.to_vec(), monomials: out })
}

fn check_blocks<T: RingElem>(b: &Matrix<T>, idx: &MonomialIndex) -> Result<()> {
    let n = idx.total_size();
    if b.rows() != n || b.cols() != n {
        return Err(Error::BlockMismatch(format!("matrix is {}x{}, blocks need {n}x{n}", b.rows(), b.cols())));
    }
    let mut block_of = Vec::with_capacity(n);
    for (i, &s) in idx.block_sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(i, s));
    }
    for i in 0..n {
        for j in 0..n {
            if block_of[i] != block_of[j] && !b.get(i, j).is_zero() {
                return Err(Error::BlockMismatch(format!("entry ({i},{j}) lies outside the diagonal blocks")));
            }
        }
    }
    Ok(())
}

/// `R(B)` with `(B X)^{mu_j} = sum_l R_{j,l}(B) X^{mu_l}`.
pub fn relation_matrix<T: RingElem>(b: &Matrix<T>, idx: &MonomialIndex) -> Result<Matrix<T>> {
    check_blocks(b, idx)?;
    let n = idx.total_size();
    let col: HashMap<&[u32], usize> = idx.monomials.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let mut out = Matrix::zeros(idx.len(), idx.len());
    for (j, mu) in idx.monomials.iter().enumerate() {
        let mut acc: BTreeMap<Vec<u32>, T> = BTreeMap::new();
        acc.insert(vec![0; n], T::one());
        for (k, &e) in mu.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<u32>, T> = BTreeMap::new();
                for (mono, c) in &acc {
                    for l in 0..n {
                        let bkl = b.get(k, l);
                        if bkl.is_zero() {
                            continue;
                        }
                        let mut m2 = mono.clone();
                        m2[l] += 1;
                        let v = c.clone() * bkl.clone();
                        match next.remove(&m2) {
                            Some(old) => {
                                let s = old + v;
                                if !s.is_zero() {
                                    next.insert(m2, s);
                                }
                            }
                            None => {
                                next.insert(m2, v);
                            }
                        }
                    }
                }
                acc = next;
            }
        }
        for (mono, c) in acc {
            let l = col[mono.as_slice()];
            out.set(j, l, c);
        }
    }
    Ok(out)
}

/// [`relation_matrix`] with every entry written over the variables of `b`.
pub fn relation_matrix_rf(b: &Matrix<RationalFunction>, idx: &MonomialIndex) -> Result<Matrix<RationalFunction>> {
    let vars = b.iter().next().map(|e| e.vars().clone()).ok_or_else(|| Error::BlockMismatch("empty matrix".into()))?;
    relation_matrix(b, idx)?.try_map(|r| r.embed(&vars))
}

/// Enclosure of `1 / ln rho` with radius at most `2^-prec`.
pub fn inverse_log(rho: &RealAlgebraic, prec: u32) -> Result<RealBall> {
    let w = prec + 32;
    let b = rho.to_ball(w);
    let l = b.ln(w).filter(|l| l.is_positive()).ok_or_else(|| Error::Invalid(format!("spectral radius {rho} is not above 1")))?;
    RealBall::one().div(&l, w).map(|x| x.round(prec)).ok_or(Error::DivisionByZero)
}

/// `floor` of the reals in the ball, if they share one.
pub fn ball_floor(b: &RealBall) -> Option<BigInt> {
    b.floor()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSchedule {
    pub v_basis: Vec<Vec<String>>,
    pub l0: u64,
    pub block: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationSchedule {
    pub rhos: Vec<(String, String)>,
    pub theta: Vec<(String, String)>,
    /// `k_0, ..., k_L`.
    pub entries: Vec<Vec<u64>>,
    pub deviation_bound: String,
    /// Every entry satisfies the deviation bound and the order, checked
    /// with interval arithmetic.
    pub verified: bool,
    pub lattice: Option<LatticeSchedule>,
}

const SCHEDULE_START_PREC: u32 = 128;
const SCHEDULE_MAX_PREC: u32 = 1 << 14;

fn ball_pair(b: &RealBall) -> (String, String) {
    b.endpoints_decimal(20)
}

fn thetas(rhos: &[RealAlgebraic], prec: u32) -> Result<Vec<RealBall>> {
    rhos.iter().map(|r| inverse_log(r, prec)).collect()
}

/// Schedule for the given transforms, each of which must lie in class M.
pub fn build_schedule(ts: &[MonomialTransform], l_max: u64, v_basis: Option<&[IVec]>) -> Result<IterationSchedule> {
    let mut rhos = Vec::new();
    for (i, t) in ts.iter().enumerate() {
        let rep = check_class_m(t, &rat(1, 1_000_000));
        if !rep.in_class_m {
            return Err(Error::Invalid(format!("transform {} is not in class M ({})", i + 1, rep.failed.unwrap_or_default())));
        }
        rhos.push(t.spectral_radius());
    }
    schedule_from_radii(&rhos, l_max, v_basis)
}

pub fn schedule_from_radii(rhos: &[RealAlgebraic], l_max: u64, v_basis: Option<&[IVec]>) -> Result<IterationSchedule> {
    if rhos.is_empty() {
        return Err(Error::Invalid("no transforms".into()));
    }
    let r = rhos.len();
    let rho_strings = rhos.iter().map(|x| ball_pair(&x.to_ball(64))).collect();
    let (entries, theta, bound, lattice) = match v_basis {
        None => {
            let (entries, theta) = floor_schedule(rhos, l_max)?;
            (entries, theta, Rational::one(), None)
        }
        Some(basis) => lattice_schedule(rhos, l_max, basis)?,
    };
    let verified = verify_schedule(&entries, &theta, &bound) && entries.iter().all(|k| k.len() == r);
    Ok(IterationSchedule {
        rhos: rho_strings,
        theta: theta.iter().map(ball_pair).collect(),
        entries,
        deviation_bound: bound.to_string(),
        verified,
        lattice,
    })
}

/// `k_l = floor(l * theta)` componentwise, refining until every floor is
/// separated from the neighbouring integers.
fn floor_schedule(rhos: &[RealAlgebraic], l_max: u64) -> Result<(Vec<Vec<u64>>, Vec<RealBall>)> {
    let mut prec = SCHEDULE_START_PREC;
    let mut theta = thetas(rhos, prec)?;
    let mut entries = Vec::with_capacity(l_max as usize + 1);
    for l in 0..=l_max {
        let li = BigInt::from(l);
        let mut k = Vec::with_capacity(rhos.len());
        let mut i = 0;
        while i < rhos.len() {
            match ball_floor(&theta[i].mul_int(&li, prec + 64)) {
                Some(f) => {
                    k.push(f.to_u64().expect("schedule entry fits in u64"));
                    i += 1;
                }
                None if prec < SCHEDULE_MAX_PREC => {
                    prec *= 2;
                    theta = thetas(rhos, prec)?;
                }
                None => return Err(Error::AmbiguousFloor(format!("{l} / ln rho_{}", i + 1))),
            }
        }
        entries.push(k);
    }
    Ok((entries, theta))
}

/// Lattice projection onto `V^perp`: `l theta = sum lambda_i(l) e_i`,
/// `a_l = sum floor(lambda_i(l)) e_i`, then `a_{l0 + jb}` is repeated in
/// blocks of length `b` so that the sequence increases.
type Projected = (Vec<Vec<u64>>, Vec<RealBall>, Rational, Option<LatticeSchedule>);

fn lattice_schedule(rhos: &[RealAlgebraic], l_max: u64, basis: &[IVec]) -> Result<Projected> {
    let r = rhos.len();
    let s = basis.len();
    if s == 0 || basis.iter().any(|e| e.len() != r) {
        return Err(Error::DimensionMismatch(format!("basis vectors of length {r} expected")));
    }
    let e_mat = Matrix::from_fn(s, r, |i, j| Rational::from_integer(basis[i][j].clone()));
    let gram = e_mat.mul(&e_mat.transpose())?;
    let ginv = gram.inverse().map_err(|_| Error::Invalid("basis vectors are linearly dependent".into()))?;
    // coefficients of theta in the basis: G^{-1} E theta
    let mut prec = SCHEDULE_START_PREC;
    loop {
        let theta = thetas(rhos, prec)?;
        let w = prec + 64;
        let et: Vec<RealBall> = (0..s).map(|i| (0..r).fold(RealBall::zero(), |acc, j| acc.add(&theta[j].mul_int(&basis[i][j], w), w))).collect();
        let coef: Vec<RealBall> = (0..s).map(|i| (0..s).fold(RealBall::zero(), |acc, j| acc.add(&et[j].mul_rational(ginv.get(i, j), w), w))).collect();
        // theta must lie in the span of the basis
        for j in 0..r {
            let back = (0..s).fold(RealBall::zero(), |acc, i| acc.add(&coef[i].mul_int(&basis[i][j], w), w));
            if !back.sub(&theta[j], w).contains_zero() {
                return Err(Error::Invalid("theta is not in the span of the supplied basis".into()));
            }
        }
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(l_max as usize + 1);
        let mut ok = true;
        'outer: for l in 0..=l_max {
            let li = BigInt::from(l);
            let mut v = vec![BigInt::zero(); r];
            for (i, c) in coef.iter().enumerate() {
                let Some(f) = ball_floor(&c.mul_int(&li, w)) else {
                    ok = false;
                    break 'outer;
                };
                for j in 0..r {
                    v[j] += &f * &basis[i][j];
                }
            }
            a.push(v);
        }
        if !ok {
            if prec >= SCHEDULE_MAX_PREC {
                return Err(Error::AmbiguousFloor("lambda coordinates".into()));
            }
            prec *= 2;
            continue;
        }
        // e = sum ||e_i||_inf, b = ceil(2e / min theta)
        let e: BigInt = basis.iter().map(|v| v.iter().map(|x| x.abs()).max().unwrap_or_default()).sum();
        let theta_min = theta.iter().map(|t| t.lo()).min().expect("nonempty");
        let theta_max = theta.iter().map(|t| t.hi()).max().expect("nonempty");
        let block = (Rational::from_integer(2 * &e) / &theta_min).ceil().to_integer().to_u64().unwrap_or(u64::MAX).max(1);
        let l0 = a.iter().position(|v| v.iter().all(|x| x.is_positive())).map_or(l_max + 1, |p| p as u64);
        let mut entries = Vec::with_capacity(a.len());
        for l in 0..=l_max {
            if l < l0 {
                entries.push(vec![0u64; r]);
            } else {
                let base = l0 + (l - l0) / block * block;
                entries.push(a[base as usize].iter().map(|x| x.to_u64().expect("nonnegative entry")).collect());
            }
        }
        let tail = Rational::from_integer(e) + Rational::from_integer(BigInt::from(block)) * &theta_max;
        let head = Rational::from_integer(BigInt::from(l0)) * &theta_max;
        let bound = if tail > head { tail } else { head };
        let bound = bound.ceil();
        let lat = LatticeSchedule { v_basis: basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(), l0, block };
        return Ok((entries, theta, bound, Some(lat)));
    }
}

/// `||k_l - l theta||_inf < bound` and `k_l <= k_{l+1}` for every stored `l`.
pub fn verify_schedule(entries: &[Vec<u64>], theta: &[RealBall], bound: &Rational) -> bool {
    let prec = 256;
    let b = RealBall::from_rational(bound, prec);
    for (l, k) in entries.iter().enumerate() {
        if let Some(next) = entries.get(l + 1) {
            if k.iter().zip(next).any(|(a, b)| a > b) {
                return false;
            }
        }
        let li = BigInt::from(l);
        for (ki, t) in k.iter().zip(theta) {
            let d = t.mul_int(&li, prec + 64).sub(&RealBall::from_bigint(&BigInt::from(*ki), prec), prec + 64);
            if !d.sub(&b, prec).is_negative() || !d.add(&b, prec).is_positive() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogRelation {
    /// `nu` with `sum nu_i / ln rho_i` numerically zero.
    pub nu: Vec<String>,
    pub residual: (String, String),
    pub precision_bits: u32,
}

/// Lattice search for a small integer relation among `1 / ln rho_i`. A
/// hit is a numerical candidate only.
pub fn log_relation_probe(rhos: &[RealAlgebraic], precision_bits: u32, height: &BigInt) -> Result<Option<LogRelation>> {
    if rhos.len() < 2 {
        return Err(Error::Invalid("need at least two spectral radii".into()));
    }
    let theta = thetas(rhos, precision_bits)?;
    Ok(linear_relation(&theta, height)?.map(|(mut c, r)| {
        sign_normalize(&mut c);
        LogRelation { nu: c.iter().map(|x| x.to_string()).collect(), residual: r.endpoints_decimal(12), precision_bits }
    }))
}

/// Outcome of the exact zero test at one orbit point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Undecided,
}

const SCAN_EXACT_BITS: f64 = 2.0e5;

/// `ln p` for the primes seen so far, kept at the highest precision asked.
#[derive(Default)]
pub struct LnCache {
    prec: u32,
    logs: HashMap<BigInt, RealBall>,
}

impl LnCache {
    fn ln(&mut self, p: &BigInt, prec: u32) -> RealBall {
        if prec > self.prec {
            self.prec = prec.max(2 * self.prec);
            self.logs.clear();
        }
        let w = self.prec;
        self.logs.entry(p.clone()).or_insert_with(|| RealBall::from_bigint(p, w).ln(w).expect("prime > 0")).clone()
    }

    /// Enclosure of `sum_p e_p ln p` with absolute error about `2^-prec`.
    pub fn ln_form(&mut self, primes: &[BigInt], exps: &[BigInt], prec: u32) -> RealBall {
        let mut acc = RealBall::zero();
        for (p, e) in primes.iter().zip(exps) {
            if e.is_zero() {
                continue;
            }
            let w = prec + e.bits() as u32 + 8;
            acc = acc.add(&self.ln(p, w).mul_int(e, w), w);
        }
        acc
    }
}

/// Exact zero test of `g` at a point given by prime exponents: terms with
/// equal values are merged, then either one term dominates the rest by
/// magnitude or the point is small enough to write out.
pub fn vanishes_at(g: &MultiPolynomial, p: &ExpPoint) -> ZeroTest {
    vanishes_at_cached(g, p, &mut LnCache::default())
}

pub fn vanishes_at_cached(g: &MultiPolynomial, p: &ExpPoint, cache: &mut LnCache) -> ZeroTest {
    let mut groups: BTreeMap<Vec<BigInt>, Rational> = BTreeMap::new();
    for (m, c) in g.terms() {
        let (e, neg) = p.monomial(&m.0);
        let c = if neg { -c.clone() } else { c.clone() };
        let slot = groups.entry(e).or_insert_with(Rational::zero);
        *slot += c;
    }
    groups.retain(|_, c| !c.is_zero());
    match groups.len() {
        0 => return ZeroTest::Zero,
        1 => return ZeroTest::NonZero,
        _ => {}
    }
    let prec = 64;
    let logs: Vec<RealBall> = groups
        .iter()
        .map(|(e, c)| {
            let lc = RealBall::from_rational(&c.abs(), prec + 16).ln(prec + 16).expect("nonzero coefficient");
            cache.ln_form(p.primes(), e, prec).add(&lc, prec)
        })
        .collect();
    let top = (0..logs.len()).max_by(|&i, &j| logs[i].mid_rational().cmp(&logs[j].mid_rational())).expect("nonempty");
    let others_hi = (0..logs.len()).filter(|&i| i != top).map(|i| logs[i].hi()).max().expect("two groups");
    let count = RealBall::from_int(logs.len() as i64 - 1).ln(prec).expect("positive");
    if logs[top].lo() > others_hi + count.hi() {
        return ZeroTest::NonZero;
    }
    let bits: f64 = groups.keys().map(|e| e.iter().zip(p.primes()).map(|(x, q)| x.to_f64().unwrap_or(f64::INFINITY).abs() * (q.bits() as f64)).sum::<f64>()).sum();
    if bits > SCAN_EXACT_BITS {
        return ZeroTest::Undecided;
    }
    let sum = groups.iter().fold(Rational::zero(), |acc, (e, c)| acc + c * compose(p.primes(), e, false));
    if sum.is_zero() {
        ZeroTest::Zero
    } else {
        ZeroTest::NonZero
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroScan {
    /// Scanned indices are `1..=window`.
    pub window: u64,
    pub zero_indices: Vec<u64>,
    pub zero_count: u64,
    pub density: f64,
    pub undecided: Vec<u64>,
    /// Largest gap between consecutive zeros in the window: the least `B`
    /// for which all zeros seen form one chain. A window heuristic only.
    pub max_gap: Option<u64>,
    /// `(B, longest chain with gaps <= B)` for small `B`.
    pub chain_profile: Vec<(u64, u64)>,
}

/// `k_l = (l, ..., l)`.
pub fn diagonal_schedule(r: usize, l_max: u64) -> Vec<Vec<u64>> {
    (0..=l_max).map(|l| vec![l; r]).collect()
}

/// Evaluates `g(T_1^{k_{l,1}} alpha_1, ..., T_r^{k_{l,r}} alpha_r)` exactly
/// for `l = 1..=l_max`.
pub fn zero_orbit_scan(g: &MultiPolynomial, ts: &[MonomialTransform], alphas: &[Vec<Rational>], schedule: &[Vec<u64>], l_max: u64) -> Result<ZeroScan> {
    if g.is_zero() {
        return Err(Error::Invalid("g must be nonzero".into()));
    }
    if ts.len() != alphas.len() || ts.is_empty() {
        return Err(Error::DimensionMismatch("one point per transform".into()));
    }
    let dim: usize = alphas.iter().map(Vec::len).sum();
    if g.nvars() != dim {
        return Err(Error::ArityMismatch { expected: dim, got: g.nvars() });
    }
    for (t, a) in ts.iter().zip(alphas) {
        if t.size() != a.len() {
            return Err(Error::DimensionMismatch("point and transform sizes differ".into()));
        }
    }
    if (schedule.len() as u64) <= l_max || schedule.iter().any(|k| k.len() != ts.len()) {
        return Err(Error::DimensionMismatch(format!("schedule needs entries k_0..k_{l_max} with {} coordinates", ts.len())));
    }
    let bases: Vec<ExpPoint> = alphas.iter().map(|a| ExpPoint::from_rationals(a)).collect::<Result<_>>()?;
    let mut zeros = Vec::new();
    let mut undecided = Vec::new();
    let mut cache = LnCache::default();
    for l in 1..=l_max {
        let parts: Vec<ExpPoint> = bases.iter().zip(ts).zip(&schedule[l as usize]).map(|((b, t), &k)| b.apply(&t.power(k))).collect();
        match vanishes_at_cached(g, &ExpPoint::concat(&parts), &mut cache) {
            ZeroTest::Zero => zeros.push(l),
            ZeroTest::NonZero => {}
            ZeroTest::Undecided => undecided.push(l),
        }
    }
    let max_gap = zeros.windows(2).map(|w| w[1] - w[0]).max().or(if zeros.is_empty() { None } else { Some(1) });
    let chain_profile = (1..=max_gap.unwrap_or(0).min(16)).map(|b| (b, longest_chain(&zeros, b))).collect();
    Ok(ZeroScan {
        window: l_max,
        zero_count: zeros.len() as u64,
        density: zeros.len() as f64 / l_max.max(1) as f64,
        zero_indices: zeros,
        undecided,
        max_gap,
        chain_profile,
    })
}

fn longest_chain(zeros: &[u64], b: u64) -> u64 {
    let mut best = 0;
    let mut cur = 0;
    for (i, z) in zeros.iter().enumerate() {
        cur = if i > 0 && z - zeros[i - 1] <= b { cur + 1 } else { 1 };
        best = best.max(cur);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::exact::poly::vars;
    use crate::lattice::ivec;

    fn imat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn bases() {
        assert_eq!(monomial_basis(&[2], &[2]).unwrap().monomials, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(&[1], &[5]).unwrap().monomials, vec![vec![5]]);
        assert_eq!(monomial_basis(&[2, 2], &[1, 1]).unwrap().len(), 4);
        assert!(monomial_basis(&[0], &[1]).is_err());
    }

    #[test]
    fn relation_matrix_examples() {
        let idx = monomial_basis(&[2], &[2]).unwrap();
        assert_eq!(relation_matrix(&imat(&[&[1, 1], &[0, 1]]), &idx).unwrap(), imat(&[&[1, 2, 1], &[0, 1, 1], &[0, 0, 1]]));
        let idx = monomial_basis(&[1, 2], &[2, 1]).unwrap();
        assert_eq!(relation_matrix(&Matrix::<Rational>::identity(3), &idx).unwrap(), Matrix::identity(idx.len()));
        let bad = imat(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(relation_matrix(&bad, &idx), Err(Error::BlockMismatch(_))));
    }

    #[test]
    fn schedule_examples() {
        let s = build_schedule(&[MonomialTransform::scalar(1, 2), MonomialTransform::scalar(1, 3)], 10, None).unwrap();
        assert_eq!(s.entries[10], vec![14, 9]);
        assert_eq!(s.entries[5], vec![7, 4]);
        assert!(s.verified);
        let s = build_schedule(&[MonomialTransform::scalar(1, 2)], 7, None).unwrap();
        assert_eq!(s.entries[7], vec![10]);
        assert!(build_schedule(&[MonomialTransform::from_u64(&[vec![0, 1], vec![1, 0]]).unwrap()], 3, None).is_err());
    }

    #[test]
    fn lattice_schedule_stays_in_v_perp() {
        // 1/ln 4 = (1/2)/ln 2, so V^perp is spanned by (2, 1)
        let ts = [MonomialTransform::scalar(1, 2), MonomialTransform::scalar(1, 4)];
        let s = build_schedule(&ts, 200, Some(&[ivec(&[2, 1])])).unwrap();
        assert!(s.verified, "{s:?}");
        assert!(s.entries.iter().all(|k| k[0] == 2 * k[1]));
        assert!(s.entries[200][1] > 0);
        assert!(build_schedule(&ts, 10, Some(&[ivec(&[1, 1])])).is_err());
    }

    #[test]
    fn log_relations() {
        let r = |x: i64| RealAlgebraic::from_rational(int(x));
        let h = BigInt::from(1_000_000);
        assert_eq!(log_relation_probe(&[r(2), r(4)], 500, &h).unwrap().unwrap().nu, ["1", "-2"]);
        assert_eq!(log_relation_probe(&[r(2), r(8)], 500, &h).unwrap().unwrap().nu, ["1", "-3"]);
        assert_eq!(log_relation_probe(&[r(2), r(3)], 500, &h).unwrap(), None);
        assert!(matches!(log_relation_probe(&[r(2), r(3)], 100, &h), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn scans() {
        let v = vars(&["z1", "z2"]);
        let g = MultiPolynomial::var(&v, 0) - MultiPolynomial::var(&v, 1);
        let ts = [MonomialTransform::scalar(1, 2), MonomialTransform::scalar(1, 2)];
        let k = diagonal_schedule(2, 200);
        let s = zero_orbit_scan(&g, &ts, &[vec![rat(1, 2)], vec![rat(1, 2)]], &k, 200).unwrap();
        assert_eq!((s.zero_count, s.density), (200, 1.0));
        let s = zero_orbit_scan(&g, &ts, &[vec![rat(1, 2)], vec![rat(1, 3)]], &k, 200).unwrap();
        assert_eq!(s.zero_count, 0);
        assert!(s.undecided.is_empty());
        let g2 = MultiPolynomial::var(&v, 0) * MultiPolynomial::var(&v, 1) - MultiPolynomial::var(&v, 0);
        let s = zero_orbit_scan(&g2, &ts, &[vec![rat(1, 2)], vec![rat(1, 3)]], &k, 200).unwrap();
        assert_eq!(s.zero_count, 0);
        // exact cancellation among distinct monomials: 2 z1^2 - z1 at 1/2
        let g3 = MultiPolynomial::var(&v, 0).pow(2).scale(&int(2)) - MultiPolynomial::var(&v, 1);
        assert_eq!(vanishes_at(&g3, &ExpPoint::from_rationals(&[rat(1, 2), rat(1, 2)]).unwrap()), ZeroTest::Zero);
    }
}
