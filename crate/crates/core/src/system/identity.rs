//! Series check of `f(z) = A(z) f(Tz)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::poly::MultiPolynomial;
use crate::exact::series::TruncatedSeries;
use crate::exact::Rational;

use super::MahlerSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub row: usize,
    pub component: String,
    pub exponent: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Total degree below which the residual was computed.
    pub order: u64,
    pub vanishes: bool,
    /// Lowest-degree nonzero residual coefficient over all rows.
    pub first_nonzero: Option<ResidualTerm>,
}

fn lcm(a: &MultiPolynomial, b: &MultiPolynomial) -> MultiPolynomial {
    let g = a.gcd(b);
    (a * b).exact_div(&g).expect("gcd divides the product").normalized()
}

/// Expands `D_i f_i(z) - sum_j D_i A_ij(z) f_j(Tz)` below total degree
/// `order`, where `D_i` clears the denominators of row `i`.
pub fn verify_functional_identity(s: &MahlerSystem, series: &[TruncatedSeries], order: u64) -> Result<IdentityReport> {
    let m = s.size();
    if series.len() != m {
        return Err(Error::DimensionMismatch(format!("{} series for {} components", series.len(), m)));
    }
    for f in series {
        if f.vars().len() != s.nvars() {
            return Err(Error::ArityMismatch { expected: s.nvars(), got: f.vars().len() });
        }
        if f.order() < order {
            return Err(Error::InsufficientOrder(format!("series known below degree {}, identity requested below {order}", f.order())));
        }
    }
    if s.transform().min_row_sum().is_zero() {
        return Err(Error::Invalid("transform has a zero row; f(Tz) is not a power series in z".into()));
    }
    let rows = s.transform().rows_u64()?;
    let vars = s.vars();
    let truncated: Vec<TruncatedSeries> = series.iter().map(|f| f.truncate(order)).collect();
    let shifted: Vec<TruncatedSeries> = truncated.iter().map(|f| f.substitute_monomial(&rows)).collect();
    let mut best: Option<ResidualTerm> = None;
    let mut best_key = None;
    for i in 0..m {
        let mut d = MultiPolynomial::constant_in(vars, Rational::one());
        for j in 0..m {
            d = lcm(&d, s.matrix().get(i, j).den());
        }
        let mut res = truncated[i].mul_poly(&d);
        for j in 0..m {
            let a = s.matrix().get(i, j);
            if a.is_zero() {
                continue;
            }
            let coef = (&d * a.num()).exact_div(a.den()).expect("denominator divides the row multiplier");
            res = res.sub(&shifted[j].mul_poly(&coef));
        }
        if let Some((mono, c)) = res.first_nonzero() {
            let key = (mono.clone(), i);
            if best_key.as_ref().is_none_or(|b| key < *b) {
                best = Some(ResidualTerm { row: i, component: s.components()[i].clone(), exponent: mono.0.clone(), coefficient: c.to_string() });
                best_key = Some(key);
            }
        }
    }
    Ok(IdentityReport { order, vanishes: best.is_none(), first_nonzero: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::vars;
    use crate::exact::int;
    use crate::system::tests::{rf_matrix, thue_morse};
    use crate::transform::MonomialTransform;

    fn tm_series(order: usize) -> Vec<TruncatedSeries> {
        let v = vars(&["z"]);
        let tm: Vec<Rational> = (0..order as u32).map(|n| int((n.count_ones() % 2) as i64)).collect();
        let mut one = vec![int(0); order];
        one[0] = int(1);
        vec![TruncatedSeries::univariate(&v, &one, Some(int(1))).unwrap(), TruncatedSeries::univariate(&v, &tm, Some(int(1))).unwrap()]
    }

    #[test]
    fn thue_morse_identity_vanishes() {
        let r = verify_functional_identity(&thue_morse(), &tm_series(512), 256).unwrap();
        assert!(r.vanishes, "{r:?}");
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let v = vars(&["z"]);
        let bad = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1", "0"], &["z/(1-z^2)", "1+z"]], &v), vec!["one".into(), "f".into()]).unwrap();
        let r = verify_functional_identity(&bad, &tm_series(64), 32).unwrap();
        let t = r.first_nonzero.unwrap();
        assert_eq!(t.row, 1);
        assert!(t.exponent[0] <= 4, "{t:?}");
        assert!(matches!(verify_functional_identity(&bad, &tm_series(16), 32), Err(Error::InsufficientOrder(_))));
    }

    #[test]
    fn constant_system() {
        let v = vars(&["z"]);
        let s = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 3), rf_matrix(&[&["1"]], &v), vec!["c".into()]).unwrap();
        let f = TruncatedSeries::univariate(&v, &[int(7), int(0), int(0)], Some(int(7))).unwrap();
        assert!(verify_functional_identity(&s, &[f], 3).unwrap().vanishes);
    }
}
