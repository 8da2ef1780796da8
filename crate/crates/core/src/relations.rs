//! Multiplicative relations among nonzero rationals and T-independence.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat_pow, Rational};
use crate::lattice::{hnf, left_kernel, lll, short_vector, sign_normalize, IVec};
use crate::orbit::ExpPoint;
use crate::transform::MonomialTransform;

/// `|alpha_i| = prod_j primes_j^{exponents_ij}` and `sign(alpha_i) = signs_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFactorization {
    pub primes: Vec<BigInt>,
    pub exponents: Vec<Vec<BigInt>>,
    pub signs: Vec<i8>,
}

impl SignedFactorization {
    pub fn recompose(&self) -> Vec<Rational> {
        self.exponents
            .iter()
            .zip(&self.signs)
            .map(|(row, &s)| crate::orbit::compose(&self.primes, row, s < 0))
            .collect()
    }
}

pub fn signed_factorize(alpha: &[Rational]) -> Result<SignedFactorization> {
    let p = ExpPoint::from_rationals(alpha)?;
    Ok(SignedFactorization {
        primes: p.primes().to_vec(),
        exponents: p.exponents().to_vec(),
        signs: p.negative().iter().map(|&n| if n { -1 } else { 1 }).collect(),
    })
}

/// The lattice `{nu in Z^r : alpha^nu = 1}` in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentLattice {
    pub basis: Vec<IVec>,
}

impl ExponentLattice {
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// `alpha^nu` computed exactly.
pub fn power_product(alpha: &[Rational], nu: &[BigInt]) -> Rational {
    alpha.iter().zip(nu).fold(Rational::one(), |acc, (a, e)| if e.is_zero() { acc } else { acc * rat_pow(a, e) })
}

/// Integer kernel of `rows` (one per unknown) with an extra parity column:
/// solutions satisfy `v rows = 0` and `v . parity = 0 (mod 2)`.
fn kernel_with_parity(rows: &[IVec], parity: &[Vec<bool>]) -> Vec<IVec> {
    let r = rows.len();
    let np = parity.first().map(Vec::len).unwrap_or(0);
    let width = rows.first().map(Vec::len).unwrap_or(0) + np;
    let mut m: Vec<IVec> = rows
        .iter()
        .zip(parity)
        .map(|(row, par)| {
            let mut v = row.clone();
            v.extend(par.iter().map(|&b| BigInt::from(b as u8)));
            v
        })
        .collect();
    // one slack unknown per parity column absorbs multiples of 2
    for j in 0..np {
        let mut v = vec![BigInt::zero(); width];
        v[width - np + j] = BigInt::from(2);
        m.push(v);
    }
    let k = left_kernel(&m);
    let projected: Vec<IVec> = k.into_iter().map(|v| v[..r].to_vec()).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    hnf(&projected)
}

pub fn exponent_lattice(alpha: &[Rational]) -> Result<ExponentLattice> {
    let f = signed_factorize(alpha)?;
    let rows: Vec<IVec> = if f.primes.is_empty() { vec![Vec::new(); alpha.len()] } else { f.exponents.clone() };
    let parity: Vec<Vec<bool>> = f.signs.iter().map(|&s| vec![s < 0]).collect();
    let basis = kernel_with_parity(&rows, &parity);
    Ok(ExponentLattice { basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Independence {
    pub independent: bool,
    pub witness: Option<IVec>,
}

pub fn multiplicatively_independent(x: &[Rational]) -> Result<Independence> {
    let l = exponent_lattice(x)?;
    if l.is_trivial() {
        return Ok(Independence { independent: true, witness: None });
    }
    let red = lll(&l.basis).expect("basis is independent");
    Ok(Independence { independent: false, witness: short_vector(&red) })
}

/// Outcome of the T-independence search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum TIndependence {
    /// `proved` is set when the coordinates of alpha are multiplicatively
    /// independent, which excludes every orbit relation; otherwise no
    /// relation was found for progression moduli up to `b_max`.
    Independent { b_max: u64, proved: bool },
    Dependent { mu: Vec<String>, a: u64, b: u64 },
}

impl TIndependence {
    pub fn witness(&self) -> Option<(IVec, u64, u64)> {
        match self {
            TIndependence::Dependent { mu, a, b } => Some((mu.iter().map(|s| s.parse().expect("integer")).collect(), *a, *b)),
            _ => None,
        }
    }
}

/// `(T^k alpha)^mu = 1`, decided on exponent vectors (equivalent to exact
/// rational equality).
pub fn orbit_relation_holds(t: &MonomialTransform, alpha: &[Rational], mu: &[BigInt], k: u64) -> Result<bool> {
    let p = ExpPoint::from_rationals(alpha)?.apply(&t.power(k));
    let lambda_exps = mu_combination(&p, mu);
    Ok(lambda_exps.0.iter().all(Zero::is_zero) && !lambda_exps.1)
}

fn mu_combination(p: &ExpPoint, mu: &[BigInt]) -> (Vec<BigInt>, bool) {
    let np = p.primes().len();
    let mut e = vec![BigInt::zero(); np];
    let mut neg = false;
    for (i, m) in mu.iter().enumerate() {
        for (k, x) in p.exponents()[i].iter().enumerate() {
            e[k] += m * x;
        }
        if p.negative()[i] && (m % 2u8) != BigInt::zero() {
            neg = !neg;
        }
    }
    (e, neg)
}

/// Same check with the orbit point written out as rationals; only for
/// small `k`.
pub fn orbit_relation_holds_rational(t: &MonomialTransform, alpha: &[Rational], mu: &[BigInt], k: u64) -> Result<bool> {
    let x = t.power(k).apply(alpha)?;
    Ok(power_product(&x, mu).is_one())
}

pub fn check_t_independence(t: &MonomialTransform, alpha: &[Rational], b_max: u64) -> Result<TIndependence> {
    let n = t.size();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch("point and transform sizes differ".into()));
    }
    if !t.is_nonsingular() {
        return Err(Error::SingularTransform);
    }
    if multiplicatively_independent(alpha)?.independent {
        return Ok(TIndependence::Independent { b_max, proved: true });
    }
    let base = ExpPoint::from_rationals(alpha)?;
    for b in 1..=b_max {
        for a in 0..b {
            // (T^{a+db} alpha)^mu = alpha^{mu T^{a+db}} for d = 0..=n
            let mut rows: Vec<IVec> = vec![Vec::new(); n];
            let mut parity: Vec<Vec<bool>> = vec![Vec::new(); n];
            for d in 0..=n as u64 {
                let p = base.apply(&t.power(a + d * b));
                for i in 0..n {
                    rows[i].extend(p.exponents()[i].iter().cloned());
                    parity[i].push(p.negative()[i]);
                }
            }
            let k = kernel_with_parity(&rows, &parity);
            if k.is_empty() {
                continue;
            }
            let red = lll(&k).expect("independent basis");
            let mut mu = short_vector(&red).expect("nonempty");
            sign_normalize(&mut mu);
            return Ok(TIndependence::Dependent { mu: mu.iter().map(|x| x.to_string()).collect(), a, b });
        }
    }
    Ok(TIndependence::Independent { b_max, proved: false })
}

/// Re-checks a dependence witness for `d = 0..=d_max`.
pub fn verify_dependence(t: &MonomialTransform, alpha: &[Rational], mu: &[BigInt], a: u64, b: u64, d_max: u64) -> Result<bool> {
    if mu.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    let step = t.power(b);
    let mut p = ExpPoint::from_rationals(alpha)?.apply(&t.power(a));
    for d in 0..=d_max {
        let (e, neg) = mu_combination(&p, mu);
        if neg || e.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
        if d < d_max {
            p = p.apply(&step);
        }
    }
    Ok(true)
}
