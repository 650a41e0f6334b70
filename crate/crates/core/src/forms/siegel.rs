use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{atomic_write, elem_is_zero, FieldElem, FormsError, JacobiCuspFormExact, NumberFieldSpec};
use crate::rigor::decimal::parse_rational;

pub const EIGENFORM_FORMAT: &str = "siegel-eigenform/1";

/// Siegel cusp eigenform of degree 2 given by exact Fourier coefficients
/// `a(n, r, m)` and Hecke eigenvalues `λ_ℓ`.
///
/// Coverage: for every `m <= index_max`, all keys with `-m < r <= m` and
/// `4nm - r² <= disc_bound` are either stored or zero. Other keys of index
/// `m` follow from `r ↦ r + 2m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelEigenformData {
    pub name: String,
    pub k: i64,
    pub field: NumberFieldSpec,
    pub coeffs: BTreeMap<(i64, i64, i64), FieldElem>,
    pub eigenvalues: BTreeMap<u64, FieldElem>,
    pub disc_bound: i64,
    pub index_max: i64,
}

fn rat_str(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn elem_json(x: &FieldElem) -> Value {
    Value::Array(x.iter().map(|c| Value::String(rat_str(c))).collect())
}

fn parse_rat(v: &Value) -> Result<BigRational, FormsError> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(FormsError::ParseError(format!("expected a rational, got {}", v))),
    };
    parse_rational(&s).ok_or_else(|| FormsError::ParseError(format!("bad rational {:?}", s)))
}

fn parse_int(v: &Value) -> Result<BigInt, FormsError> {
    let q = parse_rat(v)?;
    if !q.is_integer() {
        return Err(FormsError::ParseError(format!("expected an integer, got {}", v)));
    }
    Ok(q.to_integer())
}

fn parse_i64(v: &Value, what: &str) -> Result<i64, FormsError> {
    v.as_i64()
        .ok_or_else(|| FormsError::ParseError(format!("{} must be an integer", what)))
}

/// Coordinates `["p/q", …]`, or a bare rational.
pub fn parse_elem(v: &Value) -> Result<FieldElem, FormsError> {
    match v {
        Value::Array(a) => a.iter().map(parse_rat).collect(),
        _ => Ok(vec![parse_rat(v)?]),
    }
}

impl SiegelEigenformData {
    pub fn to_json(&self) -> Value {
        let field = if self.field.is_rational() {
            Value::Null
        } else {
            json!({
                "minpoly": self.field.minpoly.iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>(),
                "root": [rat_str(&self.field.root.0), rat_str(&self.field.root.1)],
            })
        };
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(&(n, r, m), v)| json!([n, r, m, elem_json(v)]))
            .collect();
        let eig: Vec<Value> = self
            .eigenvalues
            .iter()
            .map(|(&l, v)| json!([l, elem_json(v)]))
            .collect();
        json!({
            "format": EIGENFORM_FORMAT,
            "name": self.name,
            "weight": self.k,
            "field": field,
            "disc_bound": self.disc_bound,
            "index_max": self.index_max,
            "coeffs": coeffs,
            "eigenvalues": eig,
        })
    }

    pub fn from_json(v: &Value) -> Result<SiegelEigenformData, FormsError> {
        let format = v.get("format").and_then(Value::as_str).unwrap_or("");
        if format != EIGENFORM_FORMAT {
            return Err(FormsError::VersionMismatch(format.to_string()));
        }
        let name = v
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| FormsError::ParseError("missing name".into()))?
            .to_string();
        let k = parse_i64(v.get("weight").unwrap_or(&Value::Null), "weight")?;
        let field = match v.get("field") {
            None | Some(Value::Null) => NumberFieldSpec::rational(),
            Some(f) => {
                let minpoly = f
                    .get("minpoly")
                    .and_then(Value::as_array)
                    .ok_or_else(|| FormsError::ParseError("field.minpoly".into()))?
                    .iter()
                    .map(parse_int)
                    .collect::<Result<Vec<_>, _>>()?;
                let root = f
                    .get("root")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| FormsError::ParseError("field.root".into()))?;
                NumberFieldSpec {
                    minpoly,
                    root: (parse_rat(&root[0])?, parse_rat(&root[1])?),
                }
            }
        };
        field.validate().map_err(FormsError::InvariantViolation)?;
        let mut coeffs = BTreeMap::new();
        let mut max_disc = 0;
        let mut max_m = 0;
        for e in v.get("coeffs").and_then(Value::as_array).cloned().unwrap_or_default() {
            let a = e
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| FormsError::ParseError(format!("bad coefficient entry {}", e)))?;
            let n = parse_i64(&a[0], "n")?;
            let r = parse_i64(&a[1], "r")?;
            let m = parse_i64(&a[2], "m")?;
            let val = parse_elem(&a[3])?;
            if n < 0 || m < 0 || r * r - 4 * n * m >= 0 {
                return Err(FormsError::InvariantViolation(format!(
                    "key ({}, {}, {}) is not positive definite",
                    n, r, m
                )));
            }
            if val.len() > field.degree().max(1) {
                return Err(FormsError::InvariantViolation(format!(
                    "coordinate vector longer than the field degree at ({}, {}, {})",
                    n, r, m
                )));
            }
            max_disc = max_disc.max(4 * n * m - r * r);
            max_m = max_m.max(m);
            if !elem_is_zero(&val) {
                coeffs.insert((n, r, m), val);
            }
        }
        let mut eigenvalues = BTreeMap::new();
        for e in v.get("eigenvalues").and_then(Value::as_array).cloned().unwrap_or_default() {
            let a = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| FormsError::ParseError(format!("bad eigenvalue entry {}", e)))?;
            let l = a[0]
                .as_u64()
                .filter(|&l| l >= 1)
                .ok_or_else(|| FormsError::ParseError("eigenvalue index".into()))?;
            eigenvalues.insert(l, parse_elem(&a[1])?);
        }
        let disc_bound = match v.get("disc_bound") {
            Some(x) if !x.is_null() => parse_i64(x, "disc_bound")?,
            _ => max_disc,
        };
        let index_max = match v.get("index_max") {
            Some(x) if !x.is_null() => parse_i64(x, "index_max")?,
            _ => max_m,
        };
        Ok(SiegelEigenformData {
            name,
            k,
            field,
            coeffs,
            eigenvalues,
            disc_bound,
            index_max,
        })
    }

    pub fn eigenvalue(&self, l: u64) -> Option<&FieldElem> {
        self.eigenvalues.get(&l)
    }
}

pub fn load_eigenform(path: &Path) -> Result<SiegelEigenformData, FormsError> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| FormsError::ParseError(e.to_string()))?;
    SiegelEigenformData::from_json(&v)
}

pub fn save_eigenform(f: &SiegelEigenformData, path: &Path) -> Result<(), FormsError> {
    let text = serde_json::to_string_pretty(&f.to_json()).expect("serializable");
    atomic_write(path, text.as_bytes())
}

/// The `N`-th Fourier-Jacobi coefficient: `C(D, r) = a((r² - D)/4N, r, N)`.
pub fn fj_slice(f: &SiegelEigenformData, n: i64) -> Result<JacobiCuspFormExact, FormsError> {
    if n < 1 {
        return Err(FormsError::InvariantViolation("index must be positive".into()));
    }
    if n > f.index_max {
        return Err(FormsError::CoverageExceeded {
            d: -1,
            d_min: f.disc_bound,
        });
    }
    let mut phi = JacobiCuspFormExact::new(f.k, n, f.field.clone(), f.disc_bound);
    let mut seen: BTreeMap<(i64, i64), &FieldElem> = BTreeMap::new();
    for (&(nn, r, m), v) in f.coeffs.iter() {
        if m != n {
            continue;
        }
        let d = r * r - 4 * nn * n;
        if -d > f.disc_bound {
            continue;
        }
        let key = (d, r.rem_euclid(2 * n));
        if let Some(prev) = seen.get(&key) {
            if *prev != v {
                return Err(FormsError::InvariantViolation(format!(
                    "a({}, {}, {}) disagrees with another key of the class {:?}",
                    nn, r, m, key
                )));
            }
            continue;
        }
        seen.insert(key, v);
        phi.insert(d, r, v.clone())?;
    }
    Ok(phi)
}
