//! JSON description of a system and, optionally, its component series.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::parse::parse_rational_function;
use crate::exact::poly::vars as make_vars;
use crate::exact::series::TruncatedSeries;
use crate::exact::{parse_rational, Rational};
use crate::transform::MonomialTransform;

use super::{homogenize, InhomogeneousSystem, MahlerSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformJson {
    pub size: usize,
    pub rows: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// `f(z) = A(z) f(Tz)`
    #[default]
    Forward,
    /// `f(Tz) = A(z) f(z)`
    Backward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemJson {
    pub vars: Vec<String>,
    pub transform: TransformJson,
    #[serde(default)]
    pub form: Form,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inhomogeneous: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Map<String, Value>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedSystem {
    pub system: MahlerSystem,
    /// One series per component, in component order, when supplied.
    pub series: Option<Vec<TruncatedSeries>>,
}

pub fn transform_from_json(t: &TransformJson) -> Result<MonomialTransform> {
    if t.rows.len() != t.size {
        return Err(Error::DimensionMismatch(format!("transform size {} with {} rows", t.size, t.rows.len())));
    }
    MonomialTransform::from_u64(&t.rows)
}

pub fn transform_to_json(t: &MonomialTransform) -> Result<TransformJson> {
    Ok(TransformJson { size: t.size(), rows: t.rows_u64()? })
}

fn scalar_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational number, found {v}"))),
    }
}

/// Reads one series: a dense list, `{"coeffs", "tail_constant"}` or
/// `{"order", "terms", "tail_constant"}`.
pub fn series_from_json(v: &Value, vars: &crate::exact::poly::Vars, default_tail: Option<&Rational>) -> Result<TruncatedSeries> {
    match v {
        Value::Array(items) => {
            if vars.len() != 1 {
                return Err(Error::Parse("dense coefficient lists need a single variable; use \"terms\"".into()));
            }
            let coeffs: Vec<Rational> = items.iter().map(scalar_value).collect::<Result<_>>()?;
            TruncatedSeries::univariate(vars, &coeffs, default_tail.cloned())
        }
        Value::Object(o) => {
            let tail = match o.get("tail_constant") {
                Some(t) => Some(scalar_value(t)?),
                None => default_tail.cloned(),
            };
            if let Some(c) = o.get("coeffs") {
                let s = series_from_json(c, vars, None)?;
                return match tail {
                    Some(t) => s.with_tail_constant(t),
                    None => Ok(s),
                };
            }
            let order = o.get("order").and_then(Value::as_u64).ok_or_else(|| Error::Parse("series object needs \"order\"".into()))?;
            let terms = o.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Parse("series object needs \"terms\" or \"coeffs\"".into()))?;
            let mut out = Vec::new();
            for t in terms {
                let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse("term must be [exponents, coefficient]".into()))?;
                let exps = pair[0]
                    .as_array()
                    .ok_or_else(|| Error::Parse("exponents must be a list".into()))?
                    .iter()
                    .map(|e| e.as_u64().map(|x| x as u32).ok_or_else(|| Error::Parse("exponent must be a nonnegative integer".into())))
                    .collect::<Result<Vec<u32>>>()?;
                out.push((exps, scalar_value(&pair[1])?));
            }
            TruncatedSeries::new(vars, order, out, tail)
        }
        _ => Err(Error::Parse("series must be a list or an object".into())),
    }
}

pub fn system_from_json(j: &SystemJson) -> Result<LoadedSystem> {
    let vars = make_vars(&j.vars);
    let t = transform_from_json(&j.transform)?;
    let m = j.matrix.len();
    if j.matrix.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    let rows = j.matrix.iter().map(|r| r.iter().map(|s| parse_rational_function(s, &vars)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let a = Matrix::from_rows(rows)?;
    let comps = j.components.clone().unwrap_or_else(|| MahlerSystem::default_components(m));
    let mut system = match j.form {
        Form::Forward => MahlerSystem::new(vars.clone(), t, a, comps)?,
        Form::Backward => MahlerSystem::from_backward(vars.clone(), t, a, comps)?,
    };
    if let Some(b) = &j.inhomogeneous {
        if j.form == Form::Backward {
            return Err(Error::Invalid("inhomogeneous terms are only read in forward form".into()));
        }
        let b = b.iter().map(|s| parse_rational_function(s, &vars)).collect::<Result<Vec<_>>>()?;
        system = homogenize(&InhomogeneousSystem { system, inhomogeneous: b })?;
    }
    let series = match &j.series {
        None => None,
        Some(map) => {
            let default_tail = map.get("tail_constant").map(scalar_value).transpose()?;
            let mut out = Vec::new();
            for c in system.components() {
                let v = map.get(c).ok_or_else(|| Error::Parse(format!("no series for component `{c}`")))?;
                out.push(series_from_json(v, system.vars(), default_tail.as_ref())?);
            }
            Some(out)
        }
    };
    Ok(LoadedSystem { system, series })
}

pub fn load_system(text: &str) -> Result<LoadedSystem> {
    let j: SystemJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("system JSON: {e}")))?;
    system_from_json(&j)
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    let mut o = Map::new();
    if s.vars().len() == 1 {
        o.insert("coeffs".into(), Value::Array(s.dense().iter().map(|c| Value::String(c.to_string())).collect()));
    } else {
        let terms: Vec<Value> = s.terms().map(|(m, c)| json!([m.0, c.to_string()])).collect();
        o.insert("order".into(), json!(s.order()));
        o.insert("terms".into(), Value::Array(terms));
    }
    if let Some(c) = s.tail_constant() {
        o.insert("tail_constant".into(), Value::String(c.to_string()));
    }
    Value::Object(o)
}

/// Forward-form description, with series when given.
pub fn system_to_json(s: &MahlerSystem, series: Option<&[TruncatedSeries]>) -> Result<SystemJson> {
    let series = series.map(|fs| {
        let mut map = Map::new();
        for (c, f) in s.components().iter().zip(fs) {
            map.insert(c.clone(), series_to_json(f));
        }
        map
    });
    Ok(SystemJson {
        vars: s.vars().to_vec(),
        transform: transform_to_json(s.transform())?,
        form: Form::Forward,
        matrix: s.matrix().to_rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
        components: Some(s.components().to_vec()),
        inhomogeneous: None,
        series,
    })
}

/// Component name to series lookup used by reports.
pub fn series_by_component(l: &LoadedSystem) -> BTreeMap<String, TruncatedSeries> {
    match &l.series {
        None => BTreeMap::new(),
        Some(fs) => l.system.components().iter().cloned().zip(fs.iter().cloned()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::system::tests::example_two_eight;

    const TWO_EIGHT: &str = r#"{"vars":["z1","z2"],"transform":{"size":2,"rows":[[2,0],[0,2]]},"form":"backward",
        "matrix":[["1","0","0"],["-z1","1","0"],["-z2","0","1"]],"components":["one","f1","f2"]}"#;

    #[test]
    fn loads_backward_form() {
        let l = load_system(TWO_EIGHT).unwrap();
        assert_eq!(l.system, example_two_eight());
        assert!(l.series.is_none());
    }

    #[test]
    fn round_trip_with_series() {
        let text = r#"{"vars":["z"],"transform":{"size":1,"rows":[[2]]},"matrix":[["1","0"],["z","1"]],
            "components":["one","f"],"series":{"tail_constant":"1","one":["1"],"f":{"coeffs":[0,1,1,0,1]}}}"#;
        let l = load_system(text).unwrap();
        let fs = l.series.clone().unwrap();
        assert_eq!(fs[1].dense(), vec![int(0), int(1), int(1), int(0), int(1)]);
        assert_eq!(fs[1].tail_constant(), Some(&int(1)));
        let back = system_to_json(&l.system, Some(&fs)).unwrap();
        let again = system_from_json(&back).unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn errors() {
        assert!(matches!(load_system("{"), Err(Error::Parse(_))));
        let singular = r#"{"vars":["z"],"transform":{"size":1,"rows":[[2]]},"matrix":[["z","z"],["z","z"]]}"#;
        assert_eq!(load_system(singular), Err(Error::SingularMatrix));
        let bad = r#"{"vars":["z"],"transform":{"size":2,"rows":[[2,0],[0,2]]},"matrix":[["1"]]}"#;
        assert!(matches!(load_system(bad), Err(Error::DimensionMismatch(_))));
        let multi = r#"{"vars":["x","y"],"transform":{"size":2,"rows":[[2,0],[0,2]]},"matrix":[["1"]],"components":["g"],
            "series":{"g":{"order":3,"terms":[[[1,1],"2"],[[0,0],"1"]],"tail_constant":"2"}}}"#;
        let l = load_system(multi).unwrap();
        assert_eq!(l.series.unwrap()[0].coeff(&[1, 1]), int(2));
    }
}
