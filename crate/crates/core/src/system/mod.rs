//! Linear Mahler systems `f(z) = A(z) f(Tz)`.

pub mod admissible;
pub mod eval;
pub mod identity;
pub mod load;
pub mod regular;
pub mod scalar;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::poly::{vars as make_vars, Vars};
use crate::exact::ratfun::RationalFunction;
use crate::exact::Rational;
use crate::transform::MonomialTransform;

/// Mahler system in forward form `f(z) = A(z) f(Tz)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerSystem {
    vars: Vars,
    t: MonomialTransform,
    a: Matrix<RationalFunction>,
    components: Vec<String>,
    det: RationalFunction,
}

impl MahlerSystem {
    pub fn new(vars: Vars, t: MonomialTransform, a: Matrix<RationalFunction>, components: Vec<String>) -> Result<Self> {
        if t.size() != vars.len() {
            return Err(Error::DimensionMismatch(format!("{} variables but transform of size {}", vars.len(), t.size())));
        }
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::DimensionMismatch("system matrix must be square and nonempty".into()));
        }
        if components.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!("{} component names for a {}x{} matrix", components.len(), a.rows(), a.rows())));
        }
        let a = a.try_map(|r| r.embed(&vars))?;
        let det = a.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(MahlerSystem { vars, t, a, components, det })
    }

    /// From the backward form `f(Tz) = B(z) f(z)`, using `A = B^{-1}`.
    pub fn from_backward(vars: Vars, t: MonomialTransform, b: Matrix<RationalFunction>, components: Vec<String>) -> Result<Self> {
        let b = b.try_map(|r| r.embed(&vars))?;
        if b.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let a = b.inverse()?;
        Self::new(vars, t, a, components)
    }

    /// Default component names `f1, f2, ...`.
    pub fn default_components(m: usize) -> Vec<String> {
        (1..=m).map(|i| format!("f{i}")).collect()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn transform(&self) -> &MonomialTransform {
        &self.t
    }

    pub fn matrix(&self) -> &Matrix<RationalFunction> {
        &self.a
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn det(&self) -> &RationalFunction {
        &self.det
    }

    /// `M(T^k z)` entrywise.
    pub fn substitute(&self, m: &Matrix<RationalFunction>, k: u64) -> Result<Matrix<RationalFunction>> {
        if k == 0 {
            return Ok(m.clone());
        }
        let rows = self.t.power(k).rows_u64()?;
        Ok(m.map(|r| r.substitute_monomial(&rows)))
    }

    /// `A_k(z) = A(z) A(Tz) ... A(T^{k-1} z)`.
    pub fn iterate(&self, k: u64) -> Result<Matrix<RationalFunction>> {
        let mut acc = identity_rf(self.size(), &self.vars);
        let rows = self.t.rows_u64()?;
        // A_{j+1}(z) = A(z) A_j(Tz)
        for _ in 0..k {
            let shifted = acc.map(|r| r.substitute_monomial(&rows));
            acc = self.a.mul(&shifted)?.try_map(|r| r.embed(&self.vars))?;
        }
        Ok(acc)
    }

    /// The system satisfied by `g(z) = f(T^l z)`: `g(z) = A(T^l z) g(Tz)`.
    pub fn shifted(&self, l: u64) -> Result<Self> {
        let a = self.substitute(&self.a, l)?;
        Self::new(self.vars.clone(), self.t.clone(), a, self.components.clone())
    }
}

pub fn identity_rf(m: usize, vars: &Vars) -> Matrix<RationalFunction> {
    Matrix::from_fn(m, m, |i, j| RationalFunction::constant_in(vars, if i == j { Rational::one() } else { Rational::zero() }))
}

/// Block-diagonal sum; variables and component names that collide are
/// renamed with a `_<block index>` suffix.
pub fn direct_sum(systems: &[MahlerSystem]) -> Result<MahlerSystem> {
    if systems.is_empty() {
        return Err(Error::Invalid("direct sum of no systems".into()));
    }
    if systems.len() == 1 {
        return Ok(systems[0].clone());
    }
    let mut all_vars: Vec<String> = Vec::new();
    let mut renamed: Vec<Vars> = Vec::new();
    let mut comps: Vec<String> = Vec::new();
    for (b, s) in systems.iter().enumerate() {
        let names: Vec<String> = s
            .vars
            .iter()
            .map(|v| {
                let clash = systems.iter().enumerate().any(|(o, t)| o != b && t.vars.contains(v));
                if clash {
                    format!("{v}_{}", b + 1)
                } else {
                    v.clone()
                }
            })
            .collect();
        all_vars.extend(names.iter().cloned());
        renamed.push(make_vars(&names));
        for c in &s.components {
            let clash = systems.iter().enumerate().any(|(o, t)| o != b && t.components.contains(c));
            comps.push(if clash { format!("{c}_{}", b + 1) } else { c.clone() });
        }
    }
    let target = make_vars(&all_vars);
    let blocks: Vec<Matrix<RationalFunction>> = systems
        .iter()
        .zip(&renamed)
        .map(|(s, names)| s.a.try_map(|r| r.relabel(names).embed(&target)))
        .collect::<Result<_>>()?;
    let m: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut a = Matrix::from_fn(m, m, |_, _| RationalFunction::constant_in(&target, Rational::zero()));
    let mut off = 0;
    for b in &blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                a.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    let t = MonomialTransform::direct_sum(&systems.iter().map(|s| s.t.clone()).collect::<Vec<_>>());
    MahlerSystem::new(target, t, a, comps)
}

/// `f(z) = A(z) f(Tz) + b(z)` before homogenization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomogeneousSystem {
    pub system: MahlerSystem,
    pub inhomogeneous: Vec<RationalFunction>,
}

/// Adds the constant function 1 as first component: `(1, f)` satisfies a
/// homogeneous system with first row `(1, 0, ..., 0)`. Returns the system
/// unchanged when `b = 0`.
pub fn homogenize(s: &InhomogeneousSystem) -> Result<MahlerSystem> {
    if s.inhomogeneous.iter().all(|b| b.is_zero()) {
        return Ok(s.system.clone());
    }
    let m = s.system.size();
    if s.inhomogeneous.len() != m {
        return Err(Error::DimensionMismatch("inhomogeneous column length".into()));
    }
    let vars = s.system.vars.clone();
    let zero = RationalFunction::constant_in(&vars, Rational::zero());
    let a = Matrix::from_fn(m + 1, m + 1, |i, j| match (i, j) {
        (0, 0) => RationalFunction::constant_in(&vars, Rational::one()),
        (0, _) => zero.clone(),
        (_, 0) => s.inhomogeneous[i - 1].clone(),
        _ => s.system.a.get(i - 1, j - 1).clone(),
    });
    let mut comps = vec![unused_name("one", &s.system.components)];
    comps.extend(s.system.components.iter().cloned());
    MahlerSystem::new(vars, s.system.t.clone(), a, comps)
}

fn unused_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    let mut i = 1;
    while taken.contains(&name) {
        name = format!("{base}{i}");
        i += 1;
    }
    name
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::parse::parse_rational_function;
    use crate::exact::{int, rat};

    pub(crate) fn rf_matrix(rows: &[&[&str]], v: &Vars) -> Matrix<RationalFunction> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_rational_function(s, v).unwrap()).collect()).collect()).unwrap()
    }

    pub(crate) fn thue_morse() -> MahlerSystem {
        let v = make_vars(&["z"]);
        MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1", "0"], &["z/(1-z^2)", "1-z"]], &v), vec!["one".into(), "f".into()]).unwrap()
    }

    pub(crate) fn example_two_eight() -> MahlerSystem {
        let v = make_vars(&["z1", "z2"]);
        MahlerSystem::from_backward(
            v.clone(),
            MonomialTransform::scalar(2, 2),
            rf_matrix(&[&["1", "0", "0"], &["-z1", "1", "0"], &["-z2", "0", "1"]], &v),
            vec!["one".into(), "f1".into(), "f2".into()],
        )
        .unwrap()
    }

    #[test]
    fn backward_form_is_inverted() {
        let s = example_two_eight();
        let v = s.vars().clone();
        assert_eq!(s.matrix(), &rf_matrix(&[&["1", "0", "0"], &["z1", "1", "0"], &["z2", "0", "1"]], &v));
        assert!(s.det().is_constant());
    }

    #[test]
    fn singular_matrix_rejected() {
        let v = make_vars(&["z"]);
        let r = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["z", "z"], &["z", "z"]], &v), MahlerSystem::default_components(2));
        assert_eq!(r, Err(Error::SingularMatrix));
    }

    #[test]
    fn thue_morse_second_iterate() {
        let s = thue_morse();
        let v = s.vars().clone();
        let a2 = s.iterate(2).unwrap();
        let want = rf_matrix(&[&["1", "0"], &["z/(1-z^2) + (1-z)*z^2/(1-z^4)", "(1-z)*(1-z^2)"]], &v);
        assert_eq!(a2, want);
        assert_eq!(s.iterate(1).unwrap(), *s.matrix());
        assert_eq!(s.iterate(0).unwrap(), identity_rf(2, s.vars()));
    }

    #[test]
    fn direct_sum_renames_and_blocks() {
        let v = make_vars(&["z"]);
        let one = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1+z"]], &v), vec!["f".into()]).unwrap();
        let s = direct_sum(&[one.clone(), one.clone()]).unwrap();
        assert_eq!(s.vars()[..], ["z_1".to_string(), "z_2".to_string()][..]);
        assert_eq!(s.transform(), &MonomialTransform::scalar(2, 2));
        assert_eq!(s.matrix().get(1, 1).to_string(), "z_2 + 1");
        assert!(s.matrix().get(0, 1).is_zero());
        assert_eq!(direct_sum(std::slice::from_ref(&one)).unwrap(), one);
        let three = MahlerSystem::new(make_vars(&["w"]), MonomialTransform::scalar(1, 3), rf_matrix(&[&["1"]], &make_vars(&["w"])), vec!["g".into()]).unwrap();
        let mixed = direct_sum(&[thue_morse(), three]).unwrap();
        assert_eq!(mixed.transform(), &MonomialTransform::diag(&[2, 3]));
    }

    #[test]
    fn homogenization() {
        let v = make_vars(&["z"]);
        let base = MahlerSystem::new(v.clone(), MonomialTransform::scalar(1, 2), rf_matrix(&[&["1-z"]], &v), vec!["f".into()]).unwrap();
        let inh = InhomogeneousSystem { system: base.clone(), inhomogeneous: vec![parse_rational_function("z/(1-z^2)", &v).unwrap()] };
        let h = homogenize(&inh).unwrap();
        assert_eq!(h.matrix(), thue_morse().matrix());
        assert_eq!(h.components(), ["one".to_string(), "f".to_string()]);
        let same = InhomogeneousSystem { system: base.clone(), inhomogeneous: vec![RationalFunction::constant_in(&v, int(0))] };
        assert_eq!(homogenize(&same).unwrap(), base);
        let _ = rat(1, 2);
    }
}
