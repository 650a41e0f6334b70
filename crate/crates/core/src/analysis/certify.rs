use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{dtilde, petersson_sequence, AnalysisError, SeriesCoeffs};
use crate::forms::{fj_slice, gamma_vector, l2_norm, FormsError, GramData, SiegelEigenformData};
use crate::rigor::matrix::{det, MatrixError};
use crate::rigor::{BallReal, Mag};

/// Determinant enclosure with the elimination record.
#[derive(Clone, Debug)]
pub struct IntervalDet {
    pub det: BallReal,
    pub pivot_rows: Vec<usize>,
    /// Column order used (identity unless a permutation was needed).
    pub column_order: Vec<usize>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Interval determinant. If elimination finds no pivot and `n <= 6`, every
/// column permutation is tried before giving up.
pub fn interval_det(m: &[Vec<BallReal>]) -> Result<IntervalDet, AnalysisError> {
    let n = m.len();
    match det(m) {
        Ok(d) => {
            return Ok(IntervalDet {
                det: d.det,
                pivot_rows: d.pivot_rows,
                column_order: (0..n).collect(),
            })
        }
        Err(MatrixError::Shape) => return Err(AnalysisError::Shape("matrix is not square".into())),
        Err(MatrixError::PivotContainsZero(_)) => {}
    }
    if n <= 6 {
        for p in permutations(n) {
            let pm: Vec<Vec<BallReal>> = m.iter().map(|row| p.iter().map(|&c| row[c].clone()).collect()).collect();
            if let Ok(d) = det(&pm) {
                let det = if parity(&p) { -d.det } else { d.det };
                return Ok(IntervalDet {
                    det,
                    pivot_rows: d.pivot_rows,
                    column_order: p,
                });
            }
        }
    }
    Err(AnalysisError::PivotContainsZero)
}

/// Rows are the given sequences truncated to `n` columns.
pub fn build_m(rows: &[SeriesCoeffs], n: usize) -> Result<Vec<Vec<BallReal>>, AnalysisError> {
    if rows.len() != n {
        return Err(AnalysisError::Shape(format!("{} rows for a {}x{} matrix", rows.len(), n, n)));
    }
    rows.iter()
        .map(|r| {
            if r.len() < n {
                return Err(AnalysisError::CoverageExceeded { need: n, have: r.len() });
            }
            Ok(r.values[..n].to_vec())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Independent => "independent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub k: i64,
    pub n: usize,
    pub eps1: f64,
    pub eps2: BallReal,
    pub det: Option<IntervalDet>,
    pub verdict: Verdict,
    pub row_labels: Vec<String>,
    pub inputs: Vec<(String, String)>,
}

impl CertificateReport {
    /// `(D_m, D_δ)`: midpoint and radius of the determinant enclosure.
    pub fn det_interval(&self) -> Option<(f64, f64)> {
        self.det.as_ref().map(|d| (d.det.to_f64(), d.det.rad().to_f64()))
    }

    pub fn to_json(&self) -> Value {
        let (dm, dd, pivots, cols) = match &self.det {
            Some(d) => {
                let (m, r) = d.det.to_decimal_parts();
                (Value::String(m), Value::String(r), json!(d.pivot_rows), json!(d.column_order))
            }
            None => (Value::Null, Value::Null, Value::Null, Value::Null),
        };
        json!({
            "format": "certificate/1",
            "k": self.k,
            "n": self.n,
            "eps1": self.eps1,
            "eps2": self.eps2.to_decimal_string(),
            "D_m": dm,
            "D_delta": dd,
            "pivot_order": pivots,
            "column_order": cols,
            "verdict": self.verdict.as_str(),
            "rows": self.row_labels,
            "row_semantics": "pair rows are unconvolved Petersson sequences divided by their first term",
            "inputs": self.inputs.iter().map(|(n, h)| json!({"name": n, "sha256": h})).collect::<Vec<_>>(),
        })
    }
}

/// Certificate for an assembled matrix whose pair rows (the first
/// `pair_rows` rows) get entry radius at least `eps2`.
pub fn certify_matrix(
    k: i64,
    mut m: Vec<Vec<BallReal>>,
    pair_rows: usize,
    eps1: f64,
    eps2: BallReal,
    row_labels: Vec<String>,
    inputs: Vec<(String, String)>,
) -> CertificateReport {
    let e2 = eps2.abs_upper();
    for row in m.iter_mut().take(pair_rows) {
        for x in row.iter_mut() {
            *x = BallReal::new(x.mid().clone(), x.rad().max(e2), x.prec());
        }
    }
    let n = m.len();
    let d = interval_det(&m).ok();
    let verdict = match &d {
        Some(d) if !d.det.contains_zero() => Verdict::Independent,
        _ => Verdict::Inconclusive,
    };
    CertificateReport {
        k,
        n,
        eps1,
        eps2,
        det: d,
        verdict,
        row_labels,
        inputs,
    }
}

/// Data for [`certify`]: the interesting eigenforms `F_1..F_e` (pair rows)
/// and the eigenforms whose eigenvalue sequences form the remaining rows.
pub struct CertifyInput {
    pub k: i64,
    pub interesting: Vec<SiegelEigenformData>,
    pub eigen_rows: Vec<SiegelEigenformData>,
    pub n: usize,
    pub eps1: f64,
}

fn form_hash(f: &SiegelEigenformData) -> String {
    hex::encode(Sha256::digest(f.to_json().to_string().as_bytes()))
}

/// Builds `I(M)` with `ε₂ = ε₁ · max ‖γ_h(F_{i,N})‖₂² / min |γ_{i,j}|` and
/// decides independence from the interval determinant.
pub fn certify(
    input: &CertifyInput,
    gram_for: &mut dyn FnMut(i64) -> Result<GramData, FormsError>,
) -> Result<CertificateReport, AnalysisError> {
    let e = input.interesting.len();
    let n = input.n;
    let expected = e * (e + 1) / 2 + input.eigen_rows.len();
    if expected != n {
        return Err(AnalysisError::Shape(format!(
            "e(e+1)/2 + d = {} but n = {}",
            expected, n
        )));
    }
    let grams: Vec<GramData> = (1..=n as i64).map(&mut *gram_for).collect::<Result<_, _>>()?;
    let prec = grams.iter().map(|g| g.precision_bits).max().unwrap_or(128);
    let mut gram_at = |nn: i64| Ok(grams[nn as usize - 1].clone());

    let mut max_gamma = Mag::ZERO;
    for f in &input.interesting {
        for g in &grams {
            let v = gamma_vector(&fj_slice(f, g.n)?, &g.anchors, prec)?;
            max_gamma = max_gamma.max(l2_norm(&v).abs_upper());
        }
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut min_gamma: Option<Mag> = None;
    for i in 0..e {
        for j in i..e {
            let seq = petersson_sequence(&input.interesting[i], &input.interesting[j], n, &mut gram_at)?;
            let g11 = seq.get(1).abs_lower();
            min_gamma = Some(min_gamma.map_or(g11, |m: Mag| if g11 < m { g11 } else { m }));
            rows.push(dtilde(&seq)?);
            labels.push(format!("<F{},F{}>/gamma", i + 1, j + 1));
        }
    }
    for f in &input.eigen_rows {
        let theta = if f.field.is_rational() { BallReal::zero(prec) } else { f.field.theta(prec + 16) };
        let vals = (1..=n as u64)
            .map(|l| {
                f.eigenvalue(l)
                    .map(|v| f.field.embed_with(&theta, v).with_prec(prec))
                    .ok_or(AnalysisError::MissingEigenvalue(l))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(SeriesCoeffs::from_balls(input.k, &f.name, vals, false));
        labels.push(format!("lambda({})", f.name));
    }
    let eps2 = match min_gamma {
        Some(mg) if !mg.is_zero() => {
            let num = BallReal::from_f64(input.eps1, prec) * BallReal::new(max_gamma.to_dyadic(), Mag::ZERO, prec).sqr();
            num.div(&BallReal::new(mg.to_dyadic(), Mag::ZERO, prec))
                .map_err(|_| AnalysisError::NormalizerContainsZero)?
        }
        Some(_) => return Err(AnalysisError::NormalizerContainsZero),
        None => BallReal::zero(prec),
    };
    let m = build_m(&rows, n)?;
    let inputs = input
        .interesting
        .iter()
        .chain(&input.eigen_rows)
        .map(|f| (f.name.clone(), form_hash(f)))
        .collect();
    Ok(certify_matrix(input.k, m, e * (e + 1) / 2, input.eps1, eps2, labels, inputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: f64, r: f64) -> BallReal {
        BallReal::from_f64(x, 128).add_error(Mag::from_f64_up(r))
    }

    #[test]
    fn determinant_examples() {
        let id: Vec<Vec<BallReal>> = (0..5)
            .map(|i| (0..5).map(|j| b(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let d = interval_det(&id).unwrap();
        assert!(d.det.contains_int(1));
        let m = vec![vec![b(2.0, 0.1), b(0.0, 0.0)], vec![b(0.0, 0.0), b(3.0, 0.1)]];
        let d = interval_det(&m).unwrap().det;
        assert!(d.lower().to_f64() >= 1.9 * 2.9 - 1e-8 && d.upper().to_f64() <= 2.1 * 3.1 + 1e-8);
    }

    #[test]
    fn permutation_fallback() {
        // the leading 2x2 block has a determinant enclosure containing 0, so
        // elimination stalls in column 1 under every column order
        let o = b(0.0, 0.0);
        let m = vec![
            vec![b(1.0, 0.01), b(1.0, 0.0), o.clone(), o.clone(), o.clone()],
            vec![b(1.0, 0.0), b(1.005, 0.0), b(1.0, 0.0), o.clone(), o.clone()],
            vec![o.clone(), o.clone(), b(2.0, 0.0), b(1.0, 0.0), o.clone()],
            vec![o.clone(), o.clone(), o.clone(), b(3.0, 0.0), b(1.0, 0.0)],
            vec![o.clone(), o.clone(), o.clone(), o.clone(), b(5.0, 0.0)],
        ];
        match interval_det(&m) {
            Ok(d) => assert!(d.det.contains_zero()),
            Err(e) => assert_eq!(e, AnalysisError::PivotContainsZero),
        }
        // a row swap is undone by the column order
        let m = vec![
            vec![b(0.0, 0.0), b(2.0, 0.0), b(0.0, 0.0), b(0.0, 0.0), b(0.0, 0.0)],
            vec![b(3.0, 0.0), b(0.0, 0.0), b(0.0, 0.0), b(0.0, 0.0), b(0.0, 0.0)],
            vec![b(0.0, 0.0), b(0.0, 0.0), b(1.0, 0.0), b(0.0, 0.0), b(0.0, 0.0)],
            vec![b(0.0, 0.0), b(0.0, 0.0), b(0.0, 0.0), b(1.0, 0.0), b(0.0, 0.0)],
            vec![b(0.0, 0.0), b(0.0, 0.0), b(0.0, 0.0), b(0.0, 0.0), b(1.0, 0.0)],
        ];
        assert!(interval_det(&m).unwrap().det.contains_int(-6));
        assert!(!parity(&[0, 1, 2]) && parity(&[1, 0, 2]) && !parity(&[1, 2, 0]));
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn one_sided_verdict() {
        let rows = vec![vec![b(1.0, 0.0), b(240.0, 0.0)], vec![b(1.0, 0.0), b(240.0, 0.0)]];
        let r = certify_matrix(10, rows, 1, 1e-15, BallReal::from_f64(1e-20, 64), vec![], vec![]);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let rows = vec![vec![b(1.0, 0.0), b(2.0, 0.0)], vec![b(1.0, 0.0), b(240.0, 0.0)]];
        let r = certify_matrix(10, rows.clone(), 1, 1e-15, BallReal::from_f64(1e-20, 64), vec![], vec![]);
        assert_eq!(r.verdict, Verdict::Independent);
        let r = certify_matrix(10, rows, 1, 1e-2, BallReal::from_f64(1e3, 64), vec![], vec![]);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
