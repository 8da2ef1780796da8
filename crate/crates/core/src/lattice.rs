//! Integer lattices: LLL reduction, Hermite normal form and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IVec = Vec<BigInt>;

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

fn round_div(a: &BigInt, d: &BigInt) -> BigInt {
    // nearest integer to a/d for d > 0
    (a * BigInt::from(2) + d).div_floor(&(d * BigInt::from(2)))
}

/// Integral LLL reduction of linearly independent rows with parameter
/// `delta = num/den` (exact arithmetic throughout).
pub fn lll_with(basis: &[IVec], num: i64, den: i64) -> Result<Vec<IVec>> {
    let n = basis.len();
    let mut b: Vec<IVec> = basis.to_vec();
    if n <= 1 {
        return Ok(b);
    }
    let (pn, pd) = (BigInt::from(num), BigInt::from(den));
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::Invalid("LLL input rows are linearly dependent".into()));
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Invalid("LLL input rows are linearly dependent".into()));
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(&mut b, &mut lam, &d, k, k - 1);
        let lhs = &pd * &d[k + 1] * &d[k - 1];
        let rhs = &pn * &d[k] * &d[k] - &pd * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = std::mem::take(&mut lam[k][j]);
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let l = lam[k][k - 1].clone();
            let big_b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = big_b;
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(b)
}

fn reduce(b: &mut [IVec], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    if (&lam[k][l] * BigInt::from(2)).abs() > d[l + 1] {
        let q = round_div(&lam[k][l], &d[l + 1]);
        let bl = b[l].clone();
        axpy(&mut b[k], &q, &bl);
        lam[k][l] -= &q * &d[l + 1];
        for i in 0..l {
            let t = &q * &lam[l][i];
            lam[k][i] -= t;
        }
    }
}

pub fn lll(basis: &[IVec]) -> Result<Vec<IVec>> {
    lll_with(basis, 99, 100)
}

/// Row echelon form by unimodular integer row operations on the first
/// `cols` columns; returns the number of pivot rows. Rows keep any extra
/// trailing columns, which record the transformation.
fn echelon(a: &mut [IVec], cols: usize) -> usize {
    let m = a.len();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        loop {
            // row with the smallest nonzero entry in column c
            let piv = (r..m).filter(|&i| !a[i][c].is_zero()).min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let row = a[r].clone();
                axpy(&mut a[i], &q, &row);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..m).any(|i| !a[i][c].is_zero()) {
            r += 1;
        }
    }
    r
}

/// Hermite normal form of the lattice spanned by the rows: nonzero rows
/// only, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[IVec]) -> Vec<IVec> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut a = rows.to_vec();
    let rank = echelon(&mut a, cols);
    a.truncate(rank);
    let mut pivots = Vec::new();
    for row in a.iter_mut() {
        let c = row.iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
        if row[c].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        pivots.push(c);
    }
    for i in 0..a.len() {
        let c = pivots[i];
        for j in 0..i {
            let q = a[j][c].div_floor(&a[i][c]);
            if !q.is_zero() {
                let row = a[i].clone();
                axpy(&mut a[j], &q, &row);
            }
        }
    }
    a
}

/// Basis of the left integer kernel `{v in Z^r : v M = 0}` of an `r x c`
/// integer matrix, LLL-reduced.
pub fn left_kernel(m: &[IVec]) -> Vec<IVec> {
    let r = m.len();
    if r == 0 {
        return Vec::new();
    }
    let c = m[0].len();
    let mut a: Vec<IVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let rank = echelon(&mut a, c);
    let kernel: Vec<IVec> = a[rank..].iter().map(|row| row[c..].to_vec()).collect();
    if kernel.is_empty() {
        return kernel;
    }
    lll(&kernel).expect("kernel rows are independent")
}

/// Makes the first nonzero entry positive.
pub fn sign_normalize(v: &mut [BigInt]) {
    if let Some(x) = v.iter().find(|x| !x.is_zero()) {
        if x.is_negative() {
            for y in v.iter_mut() {
                *y = -&*y;
            }
        }
    }
}

pub fn norm2(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// A shortest nonzero vector of the lattice spanned by an LLL-reduced
/// basis, searched over small combinations when the rank is small.
pub fn short_vector(reduced: &[IVec]) -> Option<IVec> {
    let first = reduced.first()?.clone();
    let k = reduced.len();
    let mut best = first;
    if k <= 4 {
        let range: i64 = 2;
        let total = (2 * range + 1).pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = vec![BigInt::zero(); best.len()];
            let mut nz = false;
            for row in reduced {
                let x = c % (2 * range + 1) - range;
                c /= 2 * range + 1;
                if x != 0 {
                    nz = true;
                    for (vi, ri) in v.iter_mut().zip(row) {
                        *vi += ri * x;
                    }
                }
            }
            if nz && v.iter().any(|x| !x.is_zero()) && norm2(&v) < norm2(&best) {
                best = v;
            }
        }
    }
    sign_normalize(&mut best);
    Some(best)
}

pub fn ivec(xs: &[i64]) -> IVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_finds_short_relation() {
        // columns: identity | round(2^40 * (1, sqrt 2 ~, 2 sqrt 2 ~))
        let s = 1i64 << 40;
        let r2 = (2f64.sqrt() * s as f64).round() as i64;
        let basis = vec![ivec(&[1, 0, 0, s]), ivec(&[0, 1, 0, r2]), ivec(&[0, 0, 1, 2 * r2])];
        let red = lll(&basis).unwrap();
        assert!(red.iter().any(|v| v[..3] == ivec(&[0, 2, -1])[..] || v[..3] == ivec(&[0, -2, 1])[..]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&[ivec(&[2, 4]), ivec(&[3, 7])]);
        assert_eq!(a, vec![ivec(&[1, 1]), ivec(&[0, 2])]);
        let b = hnf(&[ivec(&[3, 7]), ivec(&[5, 11]), ivec(&[2, 4])]);
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_of_exponent_matrix() {
        // 4 = 2^2, 8 = 2^3
        let k = left_kernel(&[ivec(&[2]), ivec(&[3])]);
        assert_eq!(k.len(), 1);
        let mut v = short_vector(&k).unwrap();
        sign_normalize(&mut v);
        assert_eq!(v, ivec(&[3, -2]));
        assert!(left_kernel(&[ivec(&[1, 0]), ivec(&[0, 1])]).is_empty());
        let k3 = left_kernel(&[ivec(&[1, 1, 0]), ivec(&[1, 0, 1]), ivec(&[0, 1, 1])]);
        assert!(k3.is_empty());
    }
}
