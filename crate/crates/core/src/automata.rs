//! Automatic sequences: DFAOs read least significant digit first, their
//! q-kernels and the Mahler systems of the generating functions.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::poly::{vars, MultiPolynomial};
use crate::exact::ratfun::RationalFunction;
use crate::exact::series::TruncatedSeries;
use crate::exact::{common_denominator, parse_rational, Rational};
use crate::system::identity::verify_functional_identity;
use crate::system::scalar::ScalarMahlerEquation;
use crate::system::MahlerSystem;
use crate::transform::MonomialTransform;

/// Deterministic finite automaton with output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    q: usize,
    initial: usize,
    /// `delta[s][r]`
    delta: Vec<Vec<usize>>,
    output: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaoJson {
    pub q: usize,
    pub states: usize,
    #[serde(default)]
    pub initial: usize,
    pub transitions: Vec<Vec<usize>>,
    pub output: Vec<String>,
    #[serde(default = "lsd")]
    pub digit_order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn lsd() -> String {
    "lsd".into()
}

impl Dfao {
    pub fn new(q: usize, initial: usize, delta: Vec<Vec<usize>>, output: Vec<Rational>) -> Result<Self> {
        let n = delta.len();
        if q < 2 {
            return Err(Error::Invalid("base q must be at least 2".into()));
        }
        if n == 0 || output.len() != n || initial >= n {
            return Err(Error::DimensionMismatch("states, outputs and initial state disagree".into()));
        }
        if delta.iter().any(|row| row.len() != q || row.iter().any(|&t| t >= n)) {
            return Err(Error::Invalid("transition table must be total with targets in range".into()));
        }
        Ok(Dfao { q, initial, delta, output })
    }

    pub fn from_json(j: &DfaoJson) -> Result<Self> {
        if j.digit_order != "lsd" {
            return Err(Error::Invalid(format!("digit order `{}` is not supported; use \"lsd\"", j.digit_order)));
        }
        if j.transitions.len() != j.states {
            return Err(Error::DimensionMismatch(format!("{} states but {} transition rows", j.states, j.transitions.len())));
        }
        let out = j.output.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        Self::new(j.q, j.initial, j.transitions.clone(), out)
    }

    pub fn to_json(&self) -> DfaoJson {
        DfaoJson {
            q: self.q,
            states: self.delta.len(),
            initial: self.initial,
            transitions: self.delta.clone(),
            output: self.output.iter().map(|c| c.to_string()).collect(),
            digit_order: lsd(),
            name: None,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transition(&self, s: usize, r: usize) -> usize {
        self.delta[s][r]
    }

    pub fn output(&self, s: usize) -> &Rational {
        &self.output[s]
    }

    /// State reached from `s` on the base-q digits of `n`, least
    /// significant first; `n = 0` reads the empty word.
    pub fn run_from(&self, s: usize, mut n: u64) -> usize {
        let mut st = s;
        while n > 0 {
            st = self.delta[st][(n % self.q as u64) as usize];
            n /= self.q as u64;
        }
        st
    }

    /// `a_s(0), ..., a_s(count - 1)`.
    pub fn terms_from(&self, s: usize, count: usize) -> Vec<Rational> {
        (0..count as u64).map(|n| self.output[self.run_from(s, n)].clone()).collect()
    }

    pub fn max_abs_output(&self) -> Rational {
        self.output.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Thue-Morse: parity of the binary digit sum.
    pub fn thue_morse() -> Self {
        Self::new(2, 0, vec![vec![0, 1], vec![1, 0]], vec![Rational::zero(), Rational::one()]).expect("valid")
    }

    /// Indicator of the powers of two.
    pub fn powers_of_two() -> Self {
        Self::new(2, 0, vec![vec![0, 1], vec![1, 2], vec![2, 2]], vec![Rational::zero(), Rational::one(), Rational::zero()]).expect("valid")
    }

    /// Baum-Sweet: 1 iff every block of zeros in binary has even length.
    pub fn baum_sweet() -> Self {
        // even-so-far, odd-so-far, dead
        Self::new(2, 0, vec![vec![1, 0], vec![0, 2], vec![2, 2]], vec![Rational::one(), Rational::zero(), Rational::zero()]).expect("valid")
    }

    /// Period-doubling: parity of the 2-adic valuation of n + 1, i.e. of
    /// the number of trailing ones of n.
    pub fn period_doubling() -> Self {
        // P0, P1 count trailing ones; S0, S1 freeze the parity after a zero
        let (z, o) = (Rational::zero(), Rational::one());
        Self::new(2, 0, vec![vec![2, 1], vec![3, 0], vec![2, 2], vec![3, 3]], vec![z.clone(), o.clone(), z, o]).expect("valid")
    }

    pub fn constant(q: usize, c: Rational) -> Self {
        Self::new(q, 0, vec![vec![0; q]], vec![c]).expect("valid")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "thue-morse" => Self::thue_morse(),
            "powers-of-two" => Self::powers_of_two(),
            "baum-sweet" => Self::baum_sweet(),
            "period-doubling" => Self::period_doubling(),
            "constant" => Self::constant(2, Rational::one()),
            _ => return None,
        })
    }

    pub const BUILTINS: [&'static str; 5] = ["thue-morse", "powers-of-two", "baum-sweet", "period-doubling", "constant"];

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for &t in &self.delta[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..self.states()).filter(|&s| seen[s]).collect()
    }

    /// Moore partition refinement on the reachable states: class index per
    /// state (`None` if unreachable).
    pub fn equivalence_classes(&self) -> Vec<Option<usize>> {
        let reach = self.reachable();
        let mut class: Vec<Option<usize>> = vec![None; self.states()];
        let mut outs: Vec<&Rational> = Vec::new();
        for &s in &reach {
            let k = outs.iter().position(|o| **o == self.output[s]).unwrap_or_else(|| {
                outs.push(&self.output[s]);
                outs.len() - 1
            });
            class[s] = Some(k);
        }
        loop {
            let mut sigs: Vec<(usize, Vec<usize>)> = Vec::new();
            let mut next = vec![None; self.states()];
            for &s in &reach {
                let sig = (class[s].unwrap(), self.delta[s].iter().map(|&t| class[t].unwrap()).collect::<Vec<_>>());
                let k = sigs.iter().position(|x| *x == sig).unwrap_or_else(|| {
                    sigs.push(sig.clone());
                    sigs.len() - 1
                });
                next[s] = Some(k);
            }
            let before = class.iter().flatten().max().map_or(0, |m| m + 1);
            let after = sigs.len();
            class = next;
            if after == before {
                return class;
            }
        }
    }

    /// `a_s(n) = 0` for every `n >= 1`: no word ending in a nonzero digit
    /// leads from `s` to a state with nonzero output.
    fn is_constant_state(&self, s: usize) -> bool {
        let mut seen = vec![false; self.states()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(t) = stack.pop() {
            for r in 0..self.q {
                let u = self.delta[t][r];
                if r > 0 && !self.output[u].is_zero() {
                    return false;
                }
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        true
    }
}

/// Generating-function system of a DFAO.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSystem {
    pub system: MahlerSystem,
    /// Representative DFAO state of each component; `None` for the
    /// constant component.
    pub state_map: Vec<Option<usize>>,
    /// `c_s = output(s) - output(delta(s, 0))` per component.
    pub corrections: Vec<Rational>,
    /// Initial values `f_i(0)`.
    pub initial_values: Vec<Rational>,
    /// Index of the component for the initial state, or `None` when its
    /// sequence is supported at 0 only (then it is a multiple of 1).
    pub main_component: Option<usize>,
    /// Exact series of each component to `order`, tail constant
    /// `max |output|`.
    pub series: Vec<TruncatedSeries>,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSummary {
    pub components: Vec<String>,
    pub states: Vec<Option<usize>>,
    pub corrections: Vec<String>,
    pub main_component: Option<usize>,
    pub identity_order: u64,
}

impl KernelSystem {
    pub fn summary(&self) -> KernelSummary {
        KernelSummary {
            components: self.system.components().to_vec(),
            states: self.state_map.clone(),
            corrections: self.corrections.iter().map(|c| c.to_string()).collect(),
            main_component: self.main_component,
            identity_order: self.order / 2,
        }
    }
}

/// Default number of exact coefficients attached to a kernel system.
pub const KERNEL_ORDER: u64 = 512;

/// `f_s(z) = sum_{r<q} z^r f_{delta(s,r)}(z^q) + c_s` over the minimized
/// automaton, dropping states with zero sequence and folding states whose
/// sequence is supported at 0 into the constant component.
pub fn kernel_system(d: &Dfao) -> Result<KernelSystem> {
    kernel_system_with_order(d, KERNEL_ORDER)
}

pub fn kernel_system_with_order(d: &Dfao, order: u64) -> Result<KernelSystem> {
    let class = d.equivalence_classes();
    let nclass = class.iter().flatten().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; nclass];
    for (s, c) in class.iter().enumerate() {
        if let Some(c) = c {
            if rep[*c] == usize::MAX {
                rep[*c] = s;
            }
        }
    }
    // classes whose sequence is c * [n = 0]
    let constant: Vec<Option<Rational>> = rep.iter().map(|&s| d.is_constant_state(s).then(|| d.output[s].clone())).collect();
    let init_class = class[d.initial].expect("initial state is reachable");
    // keep the non-constant classes reachable from the initial one
    let mut keep: Vec<usize> = Vec::new();
    let mut stack = vec![init_class];
    let mut seen = vec![false; nclass];
    seen[init_class] = true;
    while let Some(c) = stack.pop() {
        if constant[c].is_none() {
            keep.push(c);
        }
        for &t in &d.delta[rep[c]] {
            let tc = class[t].unwrap();
            if !seen[tc] {
                seen[tc] = true;
                stack.push(tc);
            }
        }
    }
    keep.sort_unstable_by_key(|&c| (c != init_class, rep[c]));
    let pos = |c: usize| keep.iter().position(|&k| k == c);
    let z = vars(&["z"]);
    let q = d.q;
    let m = keep.len();
    // constant column: c_s plus contributions from folded classes
    let mut constant_col = vec![MultiPolynomial::zero_in(&z); m];
    let mut rows = vec![vec![MultiPolynomial::zero_in(&z); m]; m];
    let mut corrections = Vec::new();
    for (i, &c) in keep.iter().enumerate() {
        let s = rep[c];
        let cs = &d.output[s] - &d.output[d.delta[s][0]];
        corrections.push(cs.clone());
        constant_col[i] = MultiPolynomial::constant_in(&z, cs);
        for r in 0..q {
            let tc = class[d.delta[s][r]].unwrap();
            let zr = MultiPolynomial::monomial(&z, crate::exact::poly::Monomial(vec![r as u32]), Rational::one());
            match (&constant[tc], pos(tc)) {
                (Some(v), _) => constant_col[i] = &constant_col[i] + &zr.scale(v),
                (None, Some(j)) => rows[i][j] = &rows[i][j] + &zr,
                (None, None) => unreachable!("kept classes are closed under transitions"),
            }
        }
    }
    let needs_one = constant_col.iter().any(|p| !p.is_zero()) || m == 0;
    let mut comps: Vec<String> = Vec::new();
    let mut state_map = Vec::new();
    let mut initial_values = Vec::new();
    let mut corr = Vec::new();
    if needs_one {
        comps.push("one".into());
        state_map.push(None);
        initial_values.push(Rational::one());
        corr.push(Rational::zero());
    }
    for (i, &c) in keep.iter().enumerate() {
        comps.push(format!("f{}", rep[c]));
        state_map.push(Some(rep[c]));
        initial_values.push(d.output[rep[c]].clone());
        corr.push(corrections[i].clone());
    }
    let size = comps.len();
    let off = needs_one as usize;
    let full: Vec<Vec<MultiPolynomial>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if needs_one && i == 0 {
                        MultiPolynomial::constant_in(&z, if j == 0 { Rational::one() } else { Rational::zero() })
                    } else if needs_one && j == 0 {
                        constant_col[i - off].clone()
                    } else {
                        rows[i - off][j - off].clone()
                    }
                })
                .collect()
        })
        .collect();
    // distinct states can still give Q-dependent components (same successors,
    // different outputs); those make A singular and are eliminated here
    let seq = |i: usize, len: usize| match state_map[i] {
        None => (0..len).map(|n| if n == 0 { Rational::one() } else { Rational::zero() }).collect(),
        Some(s) => d.terms_from(s, len),
    };
    let (basis, expr) = eliminate_dependent(size, q, seq);
    let a = Matrix::from_fn(basis.len(), basis.len(), |i, b| {
        let mut p = MultiPolynomial::zero_in(&z);
        for (j, e) in expr.iter().enumerate() {
            if !e[b].is_zero() {
                p = &p + &full[basis[i]][j].scale(&e[b]);
            }
        }
        RationalFunction::from_poly(p)
    });
    fn pick<T>(v: Vec<T>, basis: &[usize]) -> Vec<T> {
        v.into_iter().enumerate().filter(|(i, _)| basis.contains(i)).map(|(_, x)| x).collect()
    }
    let comps = pick(comps, &basis);
    let state_map = pick(state_map, &basis);
    let initial_values = pick(initial_values, &basis);
    let corr = pick(corr, &basis);
    let system = MahlerSystem::new(z.clone(), MonomialTransform::scalar(1, q as u64), a, comps)?;
    let bound = d.max_abs_output().max(Rational::one());
    let series: Vec<TruncatedSeries> = state_map
        .iter()
        .map(|s| {
            let coeffs = match s {
                None => {
                    let mut v = vec![Rational::zero(); order as usize];
                    v[0] = Rational::one();
                    v
                }
                Some(s) => d.terms_from(*s, order as usize),
            };
            TruncatedSeries::univariate(&z, &coeffs, Some(bound.clone()))
        })
        .collect::<Result<_>>()?;
    let main_component = pos(init_class).and_then(|i| basis.iter().position(|&b| b == i + off));
    let k = KernelSystem { system, state_map, corrections: corr, initial_values, main_component, series, order };
    let report = verify_functional_identity(&k.system, &k.series, order)?;
    if !report.vanishes {
        return Err(Error::Invalid(format!("kernel identity fails: {:?}", report.first_nonzero)));
    }
    Ok(k)
}

/// Keeps a maximal Q-independent set of components, preferring earlier ones,
/// and writes every component in that basis: `(basis, expr)` with
/// `f_j = sum_b expr[j][b] f_{basis[b]}`.
///
/// Relations that hold on the first `q^j` terms form a decreasing chain; each
/// step is the preimage of the previous one under the kernel operators, so
/// once two consecutive steps agree the relations hold for every `n`.
fn eliminate_dependent(size: usize, q: usize, seq: impl Fn(usize, usize) -> Vec<Rational>) -> (Vec<usize>, Vec<Vec<Rational>>) {
    let mut len = 1;
    let mut prev = usize::MAX;
    let relations = loop {
        let cols: Vec<Vec<Rational>> = (0..size).map(|i| seq(i, len)).collect();
        let rel = Matrix::from_fn(len, size, |n, i| cols[i][n].clone()).nullspace();
        if rel.len() == prev {
            break rel;
        }
        prev = rel.len();
        len *= q;
    };
    // reduced echelon form with pivots taken from the last column backwards
    let mut r = relations;
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for c in (0..size).rev() {
        let Some(k) = (row..r.len()).find(|&k| !r[k][c].is_zero()) else { continue };
        r.swap(row, k);
        let inv = r[row][c].recip();
        for x in r[row].iter_mut() {
            *x *= &inv;
        }
        for k in 0..r.len() {
            if k != row && !r[k][c].is_zero() {
                let f = r[k][c].clone();
                let pr = r[row].clone();
                for (x, y) in r[k].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let basis: Vec<usize> = (0..size).filter(|c| !pivots.contains(c)).collect();
    let mut expr = vec![vec![Rational::zero(); basis.len()]; size];
    for (b, &c) in basis.iter().enumerate() {
        expr[c][b] = Rational::one();
    }
    for (k, &p) in pivots.iter().enumerate() {
        for (b, &c) in basis.iter().enumerate() {
            expr[p][b] = -r[k][c].clone();
        }
    }
    (basis, expr)
}

/// Coefficients of the components below `order`, computed from the
/// functional equation alone: `[z^n] f_i = sum_j sum_d A_ij[d] [z^{(n-d)/q}] f_j`.
/// Needs polynomial entries, a univariate scalar transform and the values
/// at 0.
pub fn unroll_series(s: &MahlerSystem, initial: &[Rational], order: usize) -> Result<Vec<Vec<Rational>>> {
    if s.nvars() != 1 {
        return Err(Error::Invalid("unrolling needs a univariate system".into()));
    }
    let q = s.transform().rows_u64()?[0][0] as usize;
    if q < 2 {
        return Err(Error::Invalid("unrolling needs q >= 2".into()));
    }
    let m = s.size();
    if initial.len() != m {
        return Err(Error::DimensionMismatch("initial values".into()));
    }
    let mut entries: Vec<Vec<Vec<(usize, Rational)>>> = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let e = s.matrix().get(i, j);
            if !e.is_polynomial() {
                return Err(Error::Invalid("unrolling needs polynomial entries".into()));
            }
            let den = e.den().constant_term();
            for (mono, c) in e.num().terms() {
                entries[i][j].push((mono.0[0] as usize, c / &den));
            }
        }
    }
    let mut f = vec![vec![Rational::zero(); order]; m];
    for i in 0..m {
        if order > 0 {
            f[i][0] = initial[i].clone();
        }
    }
    for n in 1..order {
        for i in 0..m {
            let mut acc = Rational::zero();
            for j in 0..m {
                for (d, c) in &entries[i][j] {
                    if *d <= n && (n - d) % q == 0 {
                        acc += c * &f[j][(n - d) / q];
                    }
                }
            }
            f[i][n] = acc;
        }
    }
    Ok(f)
}

/// Safety margin of extra equations beyond the unknown count.
pub const SEARCH_MARGIN: usize = 8;

/// Best-effort search for `sum_{i<=m} p_i(z) f(z^{q^i}) = 0` with
/// `deg p_i <= d_max`, smallest `m` then smallest degree first.
pub fn scalar_equation_search(series: &TruncatedSeries, q: u64, m_max: usize, d_max: usize, n: usize) -> Result<Option<ScalarMahlerEquation>> {
    if series.vars().len() != 1 {
        return Err(Error::ArityMismatch { expected: 1, got: series.vars().len() });
    }
    if (series.order() as usize) < 2 * n {
        return Err(Error::InsufficientOrder(format!("series order {} is below 2N = {}", series.order(), 2 * n)));
    }
    if n <= (m_max + 1) * (d_max + 1) + SEARCH_MARGIN {
        return Err(Error::InsufficientOrder(format!("N = {n} must exceed (m_max+1)(d_max+1) + {SEARCH_MARGIN}")));
    }
    let f = series.dense();
    let z = vars(&["z"]);
    for m in 1..=m_max {
        for d in 0..=d_max {
            let unknowns = (m + 1) * (d + 1);
            // column (i, k): coefficient of z^e in z^k f(z^{q^i})
            let col = |i: usize, k: usize, e: usize| -> Rational {
                let step = (q as usize).pow(i as u32);
                if e < k || !(e - k).is_multiple_of(step) {
                    Rational::zero()
                } else {
                    f[(e - k) / step].clone()
                }
            };
            let mat = Matrix::from_fn(n, unknowns, |e, u| col(u / (d + 1), u % (d + 1), e));
            let null = mat.nullspace();
            let Some(v) = null.into_iter().next() else { continue };
            let den = common_denominator(v.iter());
            let v: Vec<Rational> = v.iter().map(|x| x * Rational::from_integer(den.clone())).collect();
            let coeffs: Vec<MultiPolynomial> = (0..=m).map(|i| MultiPolynomial::univariate(&z, &v[i * (d + 1)..(i + 1) * (d + 1)])).collect();
            let mut eq = ScalarMahlerEquation::new(q, coeffs, None)?;
            normalize_equation(&mut eq);
            if eq.residual(&f, 2 * n).iter().all(Zero::is_zero) {
                return Ok(Some(eq));
            }
        }
    }
    Ok(None)
}

/// Integer coefficients with content 1 and a positive leading coefficient
/// in the first nonzero `p_i`.
fn normalize_equation(e: &mut ScalarMahlerEquation) {
    let all: Vec<Rational> = e.coeffs.iter().flat_map(|p| p.terms().map(|(_, c)| c.clone()).collect::<Vec<_>>()).collect();
    let den = common_denominator(all.iter());
    let scaled: Vec<Rational> = all.iter().map(|c| c * Rational::from_integer(den.clone())).collect();
    let g = crate::exact::numerator_gcd(scaled.iter());
    let mut factor = Rational::new(den, g);
    if let Some(p) = e.coeffs.iter().find(|p| !p.is_zero()) {
        if p.leading_coeff().is_negative() {
            factor = -factor;
        }
    }
    for p in e.coeffs.iter_mut() {
        *p = p.scale(&factor);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn sequences() {
        assert_eq!(Dfao::thue_morse().terms_from(0, 8), ints(&[0, 1, 1, 0, 1, 0, 0, 1]));
        assert_eq!(Dfao::constant(2, int(1)).terms_from(0, 4), ints(&[1, 1, 1, 1]));
        let p = Dfao::powers_of_two().terms_from(0, 20);
        for (n, a) in p.iter().enumerate() {
            assert_eq!(*a, int((n > 0 && n.is_power_of_two()) as i64), "n = {n}");
        }
        // 0:1 1:1 2:0 3:1 4:1 5:0 6:0 7:1 8:0 9:1
        assert_eq!(Dfao::baum_sweet().terms_from(0, 10), ints(&[1, 1, 0, 1, 1, 0, 0, 1, 0, 1]));
        assert_eq!(Dfao::period_doubling().terms_from(0, 12), ints(&[0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0]));
    }

    #[test]
    fn constant_dfao_gives_one_relation() {
        let k = kernel_system(&Dfao::constant(2, int(1))).unwrap();
        assert_eq!(k.system.size(), 1);
        assert_eq!(k.system.matrix().get(0, 0).to_string(), "z + 1");
    }

    #[test]
    fn powers_of_two_kernel() {
        let k = kernel_system(&Dfao::powers_of_two()).unwrap();
        assert_eq!(k.system.size(), 2);
        assert_eq!(k.system.matrix().get(1, 0).to_string(), "z");
        assert_eq!(k.system.matrix().get(1, 1).to_string(), "1");
    }

    #[test]
    fn unrolled_series_match_automata() {
        for name in Dfao::BUILTINS {
            let d = Dfao::builtin(name).unwrap();
            let k = kernel_system(&d).unwrap();
            let f = unroll_series(&k.system, &k.initial_values, 512).unwrap();
            let main = k.main_component.unwrap();
            assert_eq!(f[main], d.terms_from(d.initial(), 512), "{name}");
        }
    }

    #[test]
    fn equation_search() {
        let z = vars(&["z"]);
        let lac: Vec<Rational> = (0..128usize).map(|i| int((i > 0 && i.is_power_of_two()) as i64)).collect();
        let s = TruncatedSeries::univariate(&z, &lac, Some(int(1))).unwrap();
        let e = scalar_equation_search(&s, 2, 2, 1, 40).unwrap().unwrap();
        assert_eq!(e.coeffs.iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["z", "-z - 1", "1"]);
        let g = TruncatedSeries::univariate(&z, &vec![int(1); 64], Some(int(1))).unwrap();
        let e = scalar_equation_search(&g, 2, 1, 1, 20).unwrap().unwrap();
        assert_eq!(e.coeffs.iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["1", "-z - 1"]);
        assert!(matches!(scalar_equation_search(&g, 2, 1, 1, 40), Err(Error::InsufficientOrder(_))));
    }

    #[test]
    fn thue_morse_kernel_satisfies_two_by_two_system() {
        let k = kernel_system(&Dfao::thue_morse()).unwrap();
        // f_0 = f_0(z^2) + z f_1(z^2), f_1 = z f_0(z^2) + f_1(z^2); no constant needed
        assert_eq!(k.system.size(), 2);
        let main = k.main_component.unwrap();
        let one = TruncatedSeries::new(&vars(&["z"]), KERNEL_ORDER, vec![(vec![0], int(1))], Some(int(1))).unwrap();
        let fs = vec![one, k.series[main].clone()];
        let r = verify_functional_identity(&crate::system::tests::thue_morse(), &fs, 256).unwrap();
        assert!(r.vanishes, "{r:?}");
    }

    #[test]
    fn random_sequence_has_no_small_equation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let z = vars(&["z"]);
        let c: Vec<Rational> = (0..256).map(|_| int(rng.gen_range(0..2))).collect();
        let s = TruncatedSeries::univariate(&z, &c, Some(int(1))).unwrap();
        assert_eq!(scalar_equation_search(&s, 2, 3, 3, 100).unwrap(), None);
    }

    #[test]
    fn dependent_states_are_eliminated() {
        // states 1 and 2 share successors, so f_2 = f_1 + 1 as series
        let d = Dfao::new(2, 0, vec![vec![1, 2], vec![1, 2], vec![1, 2]], vec![int(0), int(1), int(2)]).unwrap();
        let k = kernel_system(&d).unwrap();
        assert!(k.system.size() < 4, "{:?}", k.summary());
        let unrolled = unroll_series(&k.system, &k.initial_values, 256).unwrap();
        assert_eq!(unrolled[k.main_component.unwrap()], d.terms_from(0, 256));
    }
}
