//! Integer factorization: trial division, Miller-Rabin, Pollard rho.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases; deterministic below
/// 3.3e24 and a strong probable-prime test beyond.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt, c: u64) -> Option<BigInt> {
    let f = |x: &BigInt| (x * x + c) % n;
    let mut y = BigInt::from(2);
    let mut r: u64 = 1;
    let mut q = BigInt::one();
    let m = 64;
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (&q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split(n: BigInt, out: &mut BTreeMap<BigInt, u64>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    for c in 1u64.. {
        if let Some(d) = pollard_brent(&n, c) {
            let other = &n / &d;
            split(d, out);
            split(other, out);
            return;
        }
        assert!(c < 64, "factorization did not converge");
    }
}

/// Prime factorization of `|n|`, `n != 0`.
pub fn factorize(n: &BigInt) -> BTreeMap<BigInt, u64> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = BTreeMap::new();
    let mut m = n.abs();
    let mut p: u64 = 2;
    while p < 10_000 {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % &pb).is_zero() {
            m /= &pb;
            *out.entry(pb.clone()).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.to_u64().is_some_and(|v| v < p * p) {
        if !m.is_one() {
            *out.entry(m).or_insert(0) += 1;
        }
        return out;
    }
    split(m, &mut out);
    out
}
