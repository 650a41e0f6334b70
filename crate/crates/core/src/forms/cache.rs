use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{greedy_basis, FormsError, GramData, GreedyOptions};
use crate::poincare::AdmissiblePair;
use crate::rigor::BallReal;

pub const GRAM_FORMAT: &str = "gram/1";

static WRITE_LOCK: Mutex<()> = Mutex::new(());

/// Write through a temporary file in the same directory and rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), FormsError> {
    let _guard = WRITE_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{}.{}.tmp", name, std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn sha_hex(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

fn pairs_json(p: &[AdmissiblePair]) -> Value {
    Value::Array(p.iter().map(|a| json!([a.d, a.r])).collect())
}

/// Hash of a greedy request; names the cache file.
pub fn request_hash(k: i64, n: i64, n_target: usize, eps: f64, opts: &GreedyOptions) -> String {
    sha_hex(&json!({
        "k": k,
        "N": n,
        "n_target": n_target,
        "eps": eps,
        "budget": opts.budget,
        "skip": opts.skip,
        "exclude": pairs_json(&opts.exclude),
        "precision_bits": opts.coeff.precision_bits,
        "m_override": opts.coeff.m_override,
    }))
}

pub fn gram_cache_path(dir: &Path, k: i64, n: i64, hash: &str) -> PathBuf {
    dir.join(format!("gram_k{}_N{}_{}.json", k, n, &hash[..16]))
}

impl GramData {
    /// Hash of `(k, N, anchors, eps)`.
    pub fn content_hash(&self) -> String {
        sha_hex(&json!({
            "k": self.k,
            "N": self.n,
            "anchors": pairs_json(&self.anchors),
            "eps": self.eps,
        }))
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for (i, row) in self.gram.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let (m, r) = x.to_decimal_parts();
                entries.push(json!([i, j, m, r]));
            }
        }
        json!({
            "format": GRAM_FORMAT,
            "k": self.k,
            "N": self.n,
            "eps": self.eps,
            "anchors": pairs_json(&self.anchors),
            "entries": entries,
            "precision_bits": self.precision_bits,
            "M_used": self.m_used,
            "hash": self.content_hash(),
        })
    }

    pub fn from_json(v: &Value) -> Result<GramData, FormsError> {
        let perr = |s: &str| FormsError::ParseError(s.to_string());
        let format = v.get("format").and_then(Value::as_str).unwrap_or("");
        if format != GRAM_FORMAT {
            return Err(FormsError::VersionMismatch(format.to_string()));
        }
        let k = v.get("k").and_then(Value::as_i64).ok_or_else(|| perr("k"))?;
        let n = v.get("N").and_then(Value::as_i64).ok_or_else(|| perr("N"))?;
        let eps = v.get("eps").and_then(Value::as_f64).ok_or_else(|| perr("eps"))?;
        let precision_bits = v
            .get("precision_bits")
            .and_then(Value::as_u64)
            .ok_or_else(|| perr("precision_bits"))? as u32;
        let anchors = v
            .get("anchors")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("anchors"))?
            .iter()
            .map(|a| {
                let d = a.get(0).and_then(Value::as_i64).ok_or_else(|| perr("anchor"))?;
                let r = a.get(1).and_then(Value::as_i64).ok_or_else(|| perr("anchor"))?;
                let p = AdmissiblePair { d, r };
                if !p.is_admissible(n) {
                    return Err(FormsError::InvariantViolation(format!("anchor {:?}", p)));
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let dim = anchors.len();
        let mut gram = vec![vec![None; dim]; dim];
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(|| perr("entries"))? {
            let i = e.get(0).and_then(Value::as_u64).ok_or_else(|| perr("entry"))? as usize;
            let j = e.get(1).and_then(Value::as_u64).ok_or_else(|| perr("entry"))? as usize;
            let m = e.get(2).and_then(Value::as_str).ok_or_else(|| perr("entry"))?;
            let r = e.get(3).and_then(Value::as_str).ok_or_else(|| perr("entry"))?;
            if i >= dim || j >= dim {
                return Err(FormsError::InvariantViolation("entry index out of range".into()));
            }
            gram[i][j] = Some(BallReal::from_decimal_parts(m, r, precision_bits).ok_or_else(|| perr("ball"))?);
        }
        let gram = gram
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| FormsError::InvariantViolation("missing Gram entries".into()))?;
        let m_used: Vec<Vec<u64>> = serde_json::from_value(v.get("M_used").cloned().unwrap_or(Value::Null))
            .map_err(|e| perr(&e.to_string()))?;
        let g = GramData {
            k,
            n,
            anchors,
            gram,
            eps,
            m_used,
            precision_bits,
        };
        if let Some(h) = v.get("hash").and_then(Value::as_str) {
            if h != g.content_hash() {
                return Err(FormsError::InvariantViolation("content hash mismatch".into()));
            }
        }
        Ok(g)
    }

    pub fn save(&self, path: &Path) -> Result<(), FormsError> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        atomic_write(path, text.as_bytes())
    }

    pub fn load(path: &Path) -> Result<GramData, FormsError> {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| FormsError::ParseError(e.to_string()))?;
        GramData::from_json(&v)
    }
}

/// Cached [`greedy_basis`]: returns the Gram and whether it came from disk.
pub fn load_or_compute(
    dir: &Path,
    k: i64,
    n: i64,
    n_target: usize,
    eps: f64,
    opts: &GreedyOptions,
) -> Result<(GramData, bool), FormsError> {
    let path = gram_cache_path(dir, k, n, &request_hash(k, n, n_target, eps, opts));
    if path.exists() {
        if let Ok(g) = GramData::load(&path) {
            if g.k == k && g.n == n && g.eps == eps && g.dim() == n_target {
                return Ok((g, true));
            }
        }
    }
    let g = greedy_basis(k, n, n_target, eps, opts)?;
    g.save(&path)?;
    // hand back the stored copy so that later cache hits are bit-identical
    Ok((GramData::load(&path)?, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_hit() {
        let dir = tempfile::tempdir().unwrap();
        let opts = GreedyOptions::default();
        let (g, hit) = load_or_compute(dir.path(), 10, 1, 1, 1e-12, &opts).unwrap();
        assert!(!hit);
        let (h, hit) = load_or_compute(dir.path(), 10, 1, 1, 1e-12, &opts).unwrap();
        assert!(hit);
        assert_eq!(g.anchors, h.anchors);
        assert_eq!(g.m_used, h.m_used);
        assert_eq!(g.precision_bits, h.precision_bits);
        assert!(h.gram[0][0].contains_ball(&g.gram[0][0]));
        let mut v = g.to_json();
        v["anchors"] = json!([[-4, 0]]);
        assert!(GramData::from_json(&v).is_err());
    }
}
