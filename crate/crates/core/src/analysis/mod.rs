//! Dirichlet series built from Petersson products of Fourier-Jacobi
//! coefficients, spinor series, multiplicativity checks and the
//! interval-determinant independence certificate.

mod certify;

pub use certify::{build_m, certify, certify_matrix, interval_det, CertificateReport, CertifyInput, IntervalDet, Verdict};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::forms::{elem_add, elem_scale, fj_slice, petersson_real, FieldElem, FormsError, GramData, SiegelEigenformData};
use crate::rigor::{decimal::parse_rational, BallReal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("normalizing coefficient encloses zero")]
    NormalizerContainsZero,
    #[error("eigenvalue λ_{0} missing")]
    MissingEigenvalue(u64),
    #[error("series known to index {have}, {need} required")]
    CoverageExceeded { need: usize, have: usize },
    #[error("elimination found no pivot excluding zero")]
    PivotContainsZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// Coefficients `a(1), …, a(n)` of a Dirichlet series. `exact` holds the
/// exact values when the series comes from exact data.
#[derive(Clone, Debug)]
pub struct SeriesCoeffs {
    pub k: i64,
    pub label: String,
    pub values: Vec<BallReal>,
    pub exact: Option<Vec<FieldElem>>,
    pub convolved: bool,
}

impl SeriesCoeffs {
    pub fn from_balls(k: i64, label: &str, values: Vec<BallReal>, convolved: bool) -> SeriesCoeffs {
        SeriesCoeffs {
            k,
            label: label.to_string(),
            values,
            exact: None,
            convolved,
        }
    }

    /// Rational series; balls are exact at `prec` bits when the values fit.
    pub fn from_exact(k: i64, label: &str, values: Vec<BigRational>, convolved: bool, prec: u32) -> SeriesCoeffs {
        SeriesCoeffs {
            k,
            label: label.to_string(),
            values: values.iter().map(|q| BallReal::from_rational(q, prec)).collect(),
            exact: Some(values.into_iter().map(|q| vec![q]).collect()),
            convolved,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficient of index `n >= 1`.
    pub fn get(&self, n: usize) -> &BallReal {
        &self.values[n - 1]
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = match &self.exact {
            Some(ex) if ex.iter().all(|e| e.len() <= 1) => ex
                .iter()
                .map(|e| {
                    let q = e.first().cloned().unwrap_or_else(BigRational::zero);
                    Value::String(if q.is_integer() {
                        q.numer().to_string()
                    } else {
                        format!("{}/{}", q.numer(), q.denom())
                    })
                })
                .collect(),
            _ => self.values.iter().map(|b| Value::String(b.to_decimal_string())).collect(),
        };
        json!({
            "format": "series/1",
            "k": self.k,
            "label": self.label,
            "convolved": self.convolved,
            "values": values,
        })
    }

    /// Values are exact rationals (`"p/q"`, integers, decimals) or balls
    /// `"mid ± rad"`; an optional `"radius"` field widens decimal entries.
    pub fn from_json(v: &Value, prec: u32) -> Result<SeriesCoeffs, AnalysisError> {
        let perr = |s: &str| AnalysisError::Parse(s.to_string());
        if v.get("format").and_then(Value::as_str) != Some("series/1") {
            return Err(perr("format must be series/1"));
        }
        let k = v.get("k").and_then(Value::as_i64).ok_or_else(|| perr("k"))?;
        let label = v.get("label").and_then(Value::as_str).unwrap_or("").to_string();
        let convolved = v.get("convolved").and_then(Value::as_bool).unwrap_or(false);
        let radius = match v.get("radius") {
            Some(Value::String(s)) => Some(parse_rational(s).ok_or_else(|| perr("radius"))?),
            Some(Value::Number(n)) => Some(parse_rational(&n.to_string()).ok_or_else(|| perr("radius"))?),
            _ => None,
        };
        let raw = v.get("values").and_then(Value::as_array).ok_or_else(|| perr("values"))?;
        let mut balls = Vec::new();
        let mut exact = Vec::new();
        let mut all_exact = radius.is_none();
        for x in raw {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(perr("value")),
            };
            if s.contains('±') {
                all_exact = false;
                balls.push(BallReal::parse_decimal_string(&s, prec).ok_or_else(|| perr(&s))?);
            } else {
                let q = parse_rational(&s).ok_or_else(|| perr(&s))?;
                let mut b = BallReal::from_rational(&q, prec);
                if let Some(r) = &radius {
                    b = b.add_error(crate::rigor::decimal::mag_from_rational_up(r));
                }
                balls.push(b);
                exact.push(vec![q]);
            }
        }
        Ok(SeriesCoeffs {
            k,
            label,
            values: balls,
            exact: if all_exact { Some(exact) } else { None },
            convolved,
        })
    }
}

/// Multiply by `ζ(2s - 2k + 4)`: `out(n) = Σ_{m² | n} m^{2k-4} s(n/m²)`.
pub fn zeta_convolve(k: i64, s: &SeriesCoeffs) -> SeriesCoeffs {
    let n = s.len();
    let e = (2 * k - 4) as usize;
    let weight = |m: usize| num_traits::pow(BigInt::from(m), e);
    let mut values = Vec::with_capacity(n);
    let mut exact = s.exact.as_ref().map(|_| Vec::with_capacity(n));
    for i in 1..=n {
        let mut acc = s.get(i).clone();
        let mut acc_exact = s.exact.as_ref().map(|ex| ex[i - 1].clone());
        let mut m = 2;
        while m * m <= i {
            if i % (m * m) == 0 {
                let w = weight(m);
                let j = i / (m * m);
                acc = &acc + &(s.get(j) * &BallReal::from_int(w.clone(), s.get(j).prec()));
                if let (Some(a), Some(ex)) = (acc_exact.as_mut(), s.exact.as_ref()) {
                    *a = elem_add(a, &elem_scale(&ex[j - 1], &BigRational::from_integer(w)));
                }
            }
            m += 1;
        }
        values.push(acc);
        if let (Some(v), Some(a)) = (exact.as_mut(), acc_exact) {
            v.push(a);
        }
    }
    SeriesCoeffs {
        k: s.k,
        label: s.label.clone(),
        values,
        exact,
        convolved: true,
    }
}

/// Spinor coefficients `b(1..=n)` from the eigenvalues `λ_ℓ` of `F`.
pub fn spinor_coeffs(f: &SiegelEigenformData, n_max: usize, prec: u32) -> Result<SeriesCoeffs, AnalysisError> {
    let theta = if f.field.is_rational() {
        BallReal::zero(prec)
    } else {
        f.field.theta(prec + 16)
    };
    let mut exact = Vec::with_capacity(n_max);
    let mut balls = Vec::with_capacity(n_max);
    for l in 1..=n_max as u64 {
        let v = f.eigenvalue(l).ok_or(AnalysisError::MissingEigenvalue(l))?;
        balls.push(f.field.embed_with(&theta, v).with_prec(prec));
        exact.push(v.clone());
    }
    let s = SeriesCoeffs {
        k: f.k,
        label: format!("L({})", f.name),
        values: balls,
        exact: Some(exact),
        convolved: false,
    };
    Ok(zeta_convolve(f.k, &s))
}

/// Unconvolved `⟨F_N, G_N⟩` for `N = 1..=n_max`, with Gram matrices from
/// `gram_for(N)`.
pub fn petersson_sequence(
    f: &SiegelEigenformData,
    g: &SiegelEigenformData,
    n_max: usize,
    gram_for: &mut dyn FnMut(i64) -> Result<GramData, FormsError>,
) -> Result<SeriesCoeffs, AnalysisError> {
    if f.k != g.k {
        return Err(AnalysisError::Shape(format!("weights {} and {} differ", f.k, g.k)));
    }
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max as i64 {
        let gram = gram_for(n)?;
        let a = fj_slice(f, n)?;
        let b = fj_slice(g, n)?;
        values.push(petersson_real(&a, &b, &gram)?);
    }
    Ok(SeriesCoeffs::from_balls(f.k, &format!("<{},{}>", f.name, g.name), values, false))
}

/// Divide every coefficient by the first one.
pub fn dtilde(seq: &SeriesCoeffs) -> Result<SeriesCoeffs, AnalysisError> {
    if seq.is_empty() {
        return Err(AnalysisError::CoverageExceeded { need: 1, have: 0 });
    }
    let norm = seq.get(1).clone();
    if norm.contains_zero() {
        return Err(AnalysisError::NormalizerContainsZero);
    }
    let values = seq
        .values
        .iter()
        .map(|v| v.div(&norm).map_err(|_| AnalysisError::NormalizerContainsZero))
        .collect::<Result<Vec<_>, _>>()?;
    let exact = match &seq.exact {
        Some(ex) if ex.iter().all(|e| e.len() <= 1) && !ex[0].is_empty() => {
            let d = ex[0][0].clone();
            Some(ex.iter().map(|e| elem_scale(e, &(BigRational::one() / &d))).collect())
        }
        _ => None,
    };
    Ok(SeriesCoeffs {
        k: seq.k,
        label: format!("~{}", seq.label),
        values,
        exact,
        convolved: seq.convolved,
    })
}

/// A certified failure of `a(m) a(n) = a(mn)` for coprime `m, n`.
#[derive(Clone, Debug)]
pub struct Violation {
    pub m: usize,
    pub n: usize,
    pub gap: BallReal,
}

fn coprime_pairs(len: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=len).flat_map(move |m| {
        ((m + 1)..=len / m).filter(move |&n| num_integer::gcd(m, n) == 1).map(move |n| (m, n))
    })
}

/// Coprime pairs `m < n`, `mn <= len` whose gap ball `a(m)a(n) - a(mn)`
/// excludes zero.
pub fn mult_check(seq: &SeriesCoeffs) -> Vec<Violation> {
    coprime_pairs(seq.len())
        .filter_map(|(m, n)| {
            let gap = &(seq.get(m) * seq.get(n)) - seq.get(m * n);
            (!gap.contains_zero()).then_some(Violation { m, n, gap })
        })
        .collect()
}

/// Exact counterpart of [`mult_check`] for rational series: every coprime
/// pair with `a(m)a(n) != a(mn)`, or `None` without exact data.
pub fn mult_check_exact(seq: &SeriesCoeffs) -> Option<Vec<(usize, usize)>> {
    let ex = seq.exact.as_ref()?;
    if ex.iter().any(|e| e.len() > 1) {
        return None;
    }
    let get = |i: usize| ex[i - 1].first().cloned().unwrap_or_else(BigRational::zero);
    Some(coprime_pairs(seq.len()).filter(|&(m, n)| get(m) * get(n) != get(m * n)).collect())
}
