//! Monomial transformations `T`, their spectra and class-M membership.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::upoly::{RealAlgebraic, UPoly};
use crate::exact::{max_norm, rat_pow, Rational};
use crate::orbit::ExpPoint;

/// Square matrix of nonnegative integers acting by
/// `(T alpha)_i = prod_j alpha_j^{t_ij}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialTransform {
    rows: Vec<Vec<BigInt>>,
}

impl MonomialTransform {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty transform".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("transform must be square".into()));
        }
        if rows.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::Invalid("transform entries must be nonnegative".into()));
        }
        Ok(MonomialTransform { rows })
    }

    pub fn from_u64(rows: &[Vec<u64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: u64) -> Self {
        Self::diag(&vec![c; n])
    }

    pub fn diag(d: &[u64]) -> Self {
        let n = d.len();
        let rows = (0..n).map(|i| (0..n).map(|j| BigInt::from(if i == j { d[i] } else { 0 })).collect()).collect();
        MonomialTransform { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    /// Entries as machine integers, for symbolic substitution.
    pub fn rows_u64(&self) -> Result<Vec<Vec<u64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_u64().ok_or_else(|| Error::Invalid("transform entry too large".into()))).collect())
            .collect()
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let n = self.size();
        if o.size() != n {
            return Err(Error::DimensionMismatch("transform sizes differ".into()));
        }
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &self.rows[i][k] * &o.rows[k][j])).collect())
            .collect();
        Ok(MonomialTransform { rows })
    }

    pub fn power(&self, mut k: u64) -> Self {
        let mut result = Self::identity(self.size());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same size");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same size");
            }
        }
        result
    }

    pub fn to_rational_matrix(&self) -> Matrix<Rational> {
        let n = self.size();
        Matrix::from_fn(n, n, |i, j| Rational::from_integer(self.rows[i][j].clone()))
    }

    pub fn det(&self) -> BigInt {
        self.to_rational_matrix().det().expect("square").to_integer()
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn charpoly(&self) -> UPoly {
        UPoly::charpoly(&self.to_rational_matrix())
    }

    /// Spectral radius as an exact real algebraic number; for a
    /// nonnegative matrix this is the largest real eigenvalue.
    pub fn spectral_radius(&self) -> RealAlgebraic {
        largest_real_root(&self.charpoly())
    }

    pub fn min_row_sum(&self) -> BigInt {
        self.rows.iter().map(|r| r.iter().sum::<BigInt>()).min().unwrap_or_default()
    }

    pub fn max_row_sum(&self) -> BigInt {
        self.rows.iter().map(|r| r.iter().sum::<BigInt>()).max().unwrap_or_default()
    }

    /// Exact image of a point with nonzero coordinates.
    pub fn apply(&self, alpha: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.size();
        if alpha.len() != n {
            return Err(Error::DimensionMismatch(format!("point has {} coordinates, transform size {n}", alpha.len())));
        }
        if let Some(i) = alpha.iter().position(Zero::is_zero) {
            return Err(Error::ZeroCoordinate(i));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(alpha).fold(Rational::one(), |acc, (t, a)| if t.is_zero() { acc } else { acc * rat_pow(a, t) }))
            .collect())
    }

    /// Block-diagonal sum of transforms.
    pub fn direct_sum(ts: &[MonomialTransform]) -> Self {
        let n: usize = ts.iter().map(|t| t.size()).sum();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        let mut off = 0;
        for t in ts {
            for i in 0..t.size() {
                for j in 0..t.size() {
                    rows[off + i][off + j] = t.rows[i][j].clone();
                }
            }
            off += t.size();
        }
        MonomialTransform { rows }
    }

    /// Simultaneous relabeling: `P T P^{-1}` with `perm[i]` the new index of `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.size();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                rows[perm[i]][perm[j]] = self.rows[i][j].clone();
            }
        }
        MonomialTransform { rows }
    }

    fn principal(&self, idx: &[usize]) -> Matrix<Rational> {
        Matrix::from_fn(idx.len(), idx.len(), |a, b| Rational::from_integer(self.rows[idx[a]][idx[b]].clone()))
    }
}

impl fmt::Display for MonomialTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

fn largest_real_root(p: &UPoly) -> RealAlgebraic {
    p.real_roots().into_iter().max_by(|a, b| a.cmp_exact(b)).unwrap_or_else(|| RealAlgebraic::from_rational(Rational::zero()))
}

/// Class-M membership data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMReport {
    pub nonsingular: bool,
    pub determinant: String,
    pub charpoly: String,
    /// Indices `d` with `gcd(charpoly, Phi_d) != 1`.
    pub root_of_unity_eigenvalues: Vec<usize>,
    pub has_positive_perron_eigenvector: bool,
    /// Strongly connected classes of the access graph, their spectral
    /// radii (approximate) and whether they are final.
    pub classes: Vec<ClassInfo>,
    pub spectral_radius: (String, String),
    pub in_class_m: bool,
    /// First failed condition: "nonsingular", "no root-of-unity eigenvalue",
    /// "positive Perron eigenvector".
    pub failed: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub members: Vec<usize>,
    pub spectral_radius_approx: String,
    pub attains_radius: bool,
    pub is_final: bool,
}

/// Strongly connected components in topological order (Tarjan).
pub(crate) fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct St<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut St, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for &w in &s.adj[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("stack");
                s.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = adj.len();
    let mut s = St { adj, index: vec![None; n], low: vec![0; n], on: vec![false; n], stack: Vec::new(), next: 0, out: Vec::new() };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out.reverse();
    s.out
}

/// Decides membership in class M and reports the spectral radius to
/// within `radius_width`.
pub fn check_class_m(t: &MonomialTransform, radius_width: &Rational) -> ClassMReport {
    let n = t.size();
    let det = t.det();
    let nonsingular = !det.is_zero();
    let cp = t.charpoly();
    let mut roots_of_unity = Vec::new();
    for d in 1..=2 * n * n {
        let g = cp.gcd(&UPoly::cyclotomic(d));
        if g.degree().unwrap_or(0) > 0 {
            roots_of_unity.push(d);
        }
    }
    let rho = t.spectral_radius();
    // access graph: i -> j when t_ij > 0
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| t.rows[i][j].is_positive()).collect()).collect();
    let comps = sccs(&adj);
    let mut comp_of = vec![0; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    let mut classes = Vec::new();
    let mut perron_ok = true;
    for (c, members) in comps.iter().enumerate() {
        let rc = largest_real_root(&UPoly::charpoly(&t.principal(members)));
        let attains = rc.cmp_exact(&rho) == Ordering::Equal;
        let is_final = members.iter().all(|&v| adj[v].iter().all(|&w| comp_of[w] == c));
        if attains != is_final {
            perron_ok = false;
        }
        classes.push(ClassInfo {
            members: members.clone(),
            spectral_radius_approx: format!("{:.6}", rc.approx_f64()),
            attains_radius: attains,
            is_final,
        });
    }
    let refined = rho.refined(radius_width);
    let (lo, hi) = refined.interval();
    let failed = if !nonsingular {
        Some("nonsingular".to_string())
    } else if !roots_of_unity.is_empty() {
        Some("no root-of-unity eigenvalue".to_string())
    } else if !perron_ok {
        Some("positive Perron eigenvector".to_string())
    } else {
        None
    };
    ClassMReport {
        nonsingular,
        determinant: det.to_string(),
        charpoly: cp.to_string(),
        root_of_unity_eigenvalues: roots_of_unity,
        has_positive_perron_eigenvector: perron_ok,
        classes,
        spectral_radius: (lo.to_string(), hi.to_string()),
        in_class_m: failed.is_none(),
        failed,
    }
}

/// Proof that `||T^{k0} alpha|| < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitZeroCertificate {
    pub k0: u64,
    /// `T^{k0} alpha`, present when small enough to write out.
    pub witness_point: Option<Vec<String>>,
    pub witness_norm: Option<String>,
    /// `log2 ||T^{k0} alpha||`, approximate.
    pub witness_log2_norm: f64,
    /// The orbit tends to zero only when `T` is also in class M.
    pub requires_class_m: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LimitZero {
    Certificate(LimitZeroCertificate),
    /// `log2 ||T^k alpha||` for `k = 0..=k_max`.
    Inconclusive { trajectory: Vec<f64> },
}

/// Bit budget for writing out orbit points exactly.
pub const WITNESS_BITS: f64 = 65536.0;

/// Searches the least `k0 <= k_max` with `||T^{k0} alpha|| < 1`.
pub fn check_limit_zero(t: &MonomialTransform, alpha: &[Rational], k_max: u64) -> Result<LimitZero> {
    if alpha.len() != t.size() {
        return Err(Error::DimensionMismatch("point and transform sizes differ".into()));
    }
    let mut p = ExpPoint::from_rationals(alpha)?;
    let mut trajectory = Vec::new();
    for k in 0..=k_max {
        let below = (0..p.dim()).all(|i| p.abs_cmp_one(i) == Ordering::Less);
        let log2 = p.log2_norm_estimate();
        trajectory.push(log2);
        if below {
            let exact = if p.bits_estimate() <= WITNESS_BITS { p.to_rationals() } else { None };
            return Ok(LimitZero::Certificate(LimitZeroCertificate {
                k0: k,
                witness_norm: exact.as_ref().map(|x| max_norm(x).to_string()),
                witness_point: exact.map(|x| x.iter().map(|v| v.to_string()).collect()),
                witness_log2_norm: log2,
                requires_class_m: true,
            }));
        }
        if k < k_max {
            p = p.apply(t);
        }
    }
    Ok(LimitZero::Inconclusive { trajectory })
}

impl LimitZeroCertificate {
    /// Re-derives `T^{k0} alpha` and checks the norm inequality exactly.
    pub fn verify(&self, t: &MonomialTransform, alpha: &[Rational]) -> Result<bool> {
        let p = ExpPoint::from_rationals(alpha)?.apply(&t.power(self.k0));
        if !(0..p.dim()).all(|i| p.abs_cmp_one(i) == Ordering::Less) {
            return Ok(false);
        }
        if let Some(w) = &self.witness_point {
            let x = t.power(self.k0).apply(alpha)?;
            let claimed: Vec<Rational> = w.iter().map(|s| crate::exact::parse_rational(s)).collect::<Result<_>>()?;
            if claimed != x || max_norm(&x) >= Rational::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn t(rows: &[&[u64]]) -> MonomialTransform {
        MonomialTransform::from_u64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn apply_and_power() {
        assert_eq!(MonomialTransform::scalar(2, 2).apply(&[rat(1, 2), rat(1, 3)]).unwrap(), vec![rat(1, 4), rat(1, 9)]);
        let fib = t(&[&[1, 1], &[1, 0]]);
        assert_eq!(fib.apply(&[rat(2, 3), rat(2, 3)]).unwrap(), vec![rat(4, 9), rat(2, 3)]);
        assert_eq!(fib.power(2), t(&[&[2, 1], &[1, 1]]));
        assert_eq!(fib.power(0), MonomialTransform::identity(2));
        assert_eq!(MonomialTransform::scalar(2, 2).power(3), MonomialTransform::scalar(2, 8));
        assert_eq!(fib.apply(&[int(0), int(1)]), Err(Error::ZeroCoordinate(0)));
    }

    #[test]
    fn class_m_examples() {
        let w = rat(1, 1000);
        let r = check_class_m(&t(&[&[2]]), &w);
        assert!(r.in_class_m);
        let r = check_class_m(&t(&[&[0, 1], &[1, 0]]), &w);
        assert!(!r.in_class_m);
        assert_eq!(r.root_of_unity_eigenvalues, vec![1, 2]);
        let r = check_class_m(&t(&[&[2, 0], &[0, 3]]), &w);
        assert!(r.root_of_unity_eigenvalues.is_empty());
        assert!(!r.has_positive_perron_eigenvector);
        assert_eq!(r.failed.as_deref(), Some("positive Perron eigenvector"));
        let r = check_class_m(&t(&[&[1, 1], &[1, 0]]), &w);
        assert!(r.in_class_m, "{r:?}");
        let r = check_class_m(&t(&[&[2, 1], &[0, 3]]), &w);
        assert!(r.has_positive_perron_eigenvector);
        let r = check_class_m(&t(&[&[3, 1], &[0, 2]]), &w);
        assert!(!r.has_positive_perron_eigenvector);
    }

    #[test]
    fn limit_zero_examples() {
        let two = MonomialTransform::scalar(2, 2);
        match check_limit_zero(&two, &[rat(1, 2), rat(1, 3)], 64).unwrap() {
            LimitZero::Certificate(c) => assert_eq!(c.k0, 0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(check_limit_zero(&two, &[rat(3, 2), rat(1, 2)], 20).unwrap(), LimitZero::Inconclusive { .. }));
        let fib = t(&[&[1, 1], &[1, 0]]);
        let LimitZero::Certificate(c) = check_limit_zero(&fib, &[rat(2, 3), rat(2, 3)], 64).unwrap() else { panic!() };
        // (2/3, 2/3) already has norm below 1; its image (4/9, 2/3) too
        assert_eq!(c.k0, 0);
        assert_eq!(fib.apply(&[rat(2, 3), rat(2, 3)]).unwrap(), vec![rat(4, 9), rat(2, 3)]);
        let LimitZero::Certificate(c) = check_limit_zero(&fib, &[rat(2, 3), rat(3, 2)], 64).unwrap() else { panic!() };
        assert_eq!(c.k0, 3);
        assert!(c.verify(&fib, &[rat(2, 3), rat(3, 2)]).unwrap());
    }
}
