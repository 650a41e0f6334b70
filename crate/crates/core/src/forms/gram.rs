use std::collections::HashMap;

use rayon::prelude::*;

use super::{admissible_iter, dim_jacobi_cusp, FormsError};
use crate::poincare::{alpha, poincare_coeff, AdmissiblePair, CoeffOptions, PoincareJob};
use crate::rigor::matrix::det;
use crate::rigor::{BallReal, Mag};

/// Anchors `h` and the ball Gram matrix `Γ_h(i,j) = ⟨P_{h(i)}, P_{h(j)}⟩`.
///
/// Entry `(i,j)` is `α(N,k,D_i) · p_{h(i)}(h(j))`; both triangles are
/// computed independently.
#[derive(Clone, Debug)]
pub struct GramData {
    pub k: i64,
    pub n: i64,
    pub anchors: Vec<AdmissiblePair>,
    pub gram: Vec<Vec<BallReal>>,
    pub eps: f64,
    pub m_used: Vec<Vec<u64>>,
    pub precision_bits: u32,
}

#[derive(Clone, Debug)]
pub struct GreedyOptions {
    /// Maximum number of candidates examined.
    pub budget: usize,
    /// Skip this many candidates of the canonical stream before starting.
    pub skip: usize,
    /// Candidates never tried.
    pub exclude: Vec<AdmissiblePair>,
    pub coeff: CoeffOptions,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            budget: 64,
            skip: 0,
            exclude: Vec::new(),
            coeff: CoeffOptions::default(),
        }
    }
}

type EntryCache = HashMap<(AdmissiblePair, AdmissiblePair), (BallReal, u64)>;

fn entry(
    k: i64,
    n: i64,
    a: AdmissiblePair,
    b: AdmissiblePair,
    eps: f64,
    opts: &CoeffOptions,
) -> Result<(BallReal, u64), FormsError> {
    let al = alpha(n, k, a.d, 64);
    // coefficient error eps/α keeps the Gram entry error near eps
    let eps_c = eps / al.to_f64().max(f64::MIN_POSITIVE);
    let job = PoincareJob {
        k,
        n,
        source: a,
        target: b,
        eps: eps_c,
    };
    let res = poincare_coeff(&job, opts)?;
    let al = alpha(n, k, a.d, res.value.prec());
    Ok((&al * &res.value, res.m_used))
}

fn fill(
    k: i64,
    n: i64,
    jobs: &[(AdmissiblePair, AdmissiblePair)],
    eps: f64,
    opts: &CoeffOptions,
    cache: &mut EntryCache,
) -> Result<(), FormsError> {
    let todo: Vec<_> = jobs.iter().filter(|j| !cache.contains_key(j)).copied().collect();
    let run = |&(a, b): &(AdmissiblePair, AdmissiblePair)| entry(k, n, a, b, eps, opts).map(|v| ((a, b), v));
    let out: Vec<_> = if opts.deterministic {
        todo.iter().map(run).collect()
    } else {
        todo.par_iter().map(run).collect()
    };
    for r in out {
        let (key, v) = r?;
        cache.insert(key, v);
    }
    Ok(())
}

fn square_jobs(anchors: &[AdmissiblePair]) -> Vec<(AdmissiblePair, AdmissiblePair)> {
    anchors
        .iter()
        .flat_map(|&a| anchors.iter().map(move |&b| (a, b)))
        .collect()
}

fn assemble(
    k: i64,
    n: i64,
    anchors: &[AdmissiblePair],
    eps: f64,
    cache: &EntryCache,
) -> GramData {
    let gram: Vec<Vec<BallReal>> = anchors
        .iter()
        .map(|&a| anchors.iter().map(|&b| cache[&(a, b)].0.clone()).collect())
        .collect();
    let m_used = anchors
        .iter()
        .map(|&a| anchors.iter().map(|&b| cache[&(a, b)].1).collect())
        .collect();
    let precision_bits = gram.iter().flatten().map(|x| x.prec()).max().unwrap_or(64);
    GramData {
        k,
        n,
        anchors: anchors.to_vec(),
        gram,
        eps,
        m_used,
        precision_bits,
    }
}

/// `Some(det)` when the determinant enclosure of `m` excludes zero.
fn certified_det(m: &[Vec<BallReal>]) -> Option<BallReal> {
    match det(m) {
        Ok(d) if !d.det.contains_zero() => Some(d.det),
        _ => None,
    }
}

/// Gram matrix for a fixed anchor list (no independence check).
pub fn gram_for_anchors(
    k: i64,
    n: i64,
    anchors: &[AdmissiblePair],
    eps: f64,
    opts: &CoeffOptions,
) -> Result<GramData, FormsError> {
    for a in anchors {
        if !a.is_admissible(n) {
            return Err(FormsError::InvariantViolation(format!("{:?} not admissible for N = {}", a, n)));
        }
    }
    let mut cache = EntryCache::new();
    fill(k, n, &square_jobs(anchors), eps, opts, &mut cache)?;
    Ok(assemble(k, n, anchors, eps, &cache))
}

/// Greedy basis selection: walk the canonical pair stream and keep a
/// candidate iff the enlarged Gram determinant enclosure excludes zero.
pub fn greedy_basis(
    k: i64,
    n: i64,
    n_target: usize,
    eps: f64,
    opts: &GreedyOptions,
) -> Result<GramData, FormsError> {
    if n_target == 0 {
        return Err(FormsError::InvariantViolation("n_target must be at least 1".into()));
    }
    if let Some(d) = dim_jacobi_cusp(k, n) {
        if n_target > d {
            return Err(FormsError::InvariantViolation(format!(
                "n_target {} exceeds dim S_{{{},{}}} = {}",
                n_target, k, n, d
            )));
        }
    }
    let mut cache = EntryCache::new();
    let mut anchors: Vec<AdmissiblePair> = Vec::new();
    let stream = admissible_iter(n)
        .filter(|p| !opts.exclude.contains(p))
        .skip(opts.skip)
        .take(opts.budget);
    for cand in stream {
        let mut trial = anchors.clone();
        trial.push(cand);
        fill(k, n, &square_jobs(&trial), eps, &opts.coeff, &mut cache)?;
        let g = assemble(k, n, &trial, eps, &cache);
        if certified_det(&g.gram).is_some() {
            anchors = trial;
            if anchors.len() == n_target {
                return Ok(g);
            }
        }
    }
    Err(FormsError::BasisNotFound {
        target: n_target,
        found: anchors.len(),
        budget: opts.budget,
    })
}

impl GramData {
    pub fn dim(&self) -> usize {
        self.anchors.len()
    }

    /// Determinant enclosure, `None` if elimination fails.
    pub fn det(&self) -> Option<BallReal> {
        det(&self.gram).ok().map(|d| d.det)
    }

    pub fn is_certified(&self) -> bool {
        certified_det(&self.gram).is_some()
    }

    /// `|Γ(i,j) - Γ(j,i)|` covered by the radii for every pair.
    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.gram[i][j].overlaps(&self.gram[j][i])))
    }

    pub fn max_radius(&self) -> Mag {
        self.gram.iter().flatten().fold(Mag::ZERO, |m, x| m.max(x.rad()))
    }

    /// Bound for `‖Γ - Γ̃‖_∞` (maximal row sum of radii).
    pub fn inf_norm_error(&self) -> Mag {
        self.gram.iter().fold(Mag::ZERO, |m, row| {
            m.max(row.iter().fold(Mag::ZERO, |s, x| s.add(x.rad())))
        })
    }

    /// Floating-point Cholesky of the midpoint matrix succeeds.
    pub fn midpoint_cholesky_ok(&self) -> bool {
        let n = self.dim();
        let a: Vec<Vec<f64>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64()).collect())
            .collect();
        let mut l = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..j).map(|t| l[i][t] * l[j][t]).sum();
                if i == j {
                    let v = a[i][i] - s;
                    if !(v > 0.0) {
                        return false;
                    }
                    l[i][i] = v.sqrt();
                } else {
                    l[i][j] = (0.5 * (a[i][j] + a[j][i]) - s) / l[j][j];
                }
            }
        }
        true
    }

    /// First candidate of the canonical stream that is not an anchor and not
    /// excluded, scanning at most `budget` pairs.
    pub fn next_candidate(&self, exclude: &[AdmissiblePair], budget: usize) -> Option<AdmissiblePair> {
        admissible_iter(self.n)
            .take(budget)
            .find(|p| !self.anchors.contains(p) && !exclude.contains(p))
    }

    /// Determinant enclosure of the Gram matrix enlarged by `cand`, or `None`
    /// when elimination cannot find a pivot (the enclosure then contains 0).
    pub fn extension_det(
        &self,
        cand: AdmissiblePair,
        opts: &CoeffOptions,
    ) -> Result<Option<BallReal>, FormsError> {
        let mut cache = EntryCache::new();
        for (i, &a) in self.anchors.iter().enumerate() {
            for (j, &b) in self.anchors.iter().enumerate() {
                cache.insert((a, b), (self.gram[i][j].clone(), self.m_used[i][j]));
            }
        }
        let mut trial = self.anchors.clone();
        trial.push(cand);
        fill(self.k, self.n, &square_jobs(&trial), self.eps, opts, &mut cache)?;
        let g = assemble(self.k, self.n, &trial, self.eps, &cache);
        Ok(det(&g.gram).ok().map(|d| d.det))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_ten_index_one() {
        let g = greedy_basis(10, 1, 1, 1e-15, &GreedyOptions::default()).unwrap();
        assert_eq!(g.anchors, vec![AdmissiblePair { d: -3, r: 1 }]);
        // ⟨P,P⟩ = 1/⟨φ,φ⟩ for C_φ(-3,1) = 1; quadrature gives 7.96257931298938e-6
        let v = g.gram[0][0].to_f64();
        assert!((1.0 / v - 7.96257931298938e-6).abs() < 1e-17, "{}", 1.0 / v);
        assert!(g.max_radius() <= Mag::from_f64_up(2e-15));
        assert!(g.is_symmetric() && g.midpoint_cholesky_ok());
        let c = g.next_candidate(&[], 10).unwrap();
        let d = g.extension_det(c, &CoeffOptions::default()).unwrap();
        assert!(d.map_or(true, |d| d.contains_zero()));
    }

    #[test]
    fn too_many_anchors_rejected() {
        let opts = GreedyOptions {
            budget: 4,
            ..GreedyOptions::default()
        };
        assert!(matches!(
            greedy_basis(10, 2, 2, 1e-10, &opts),
            Err(FormsError::InvariantViolation(_))
        ));
        assert!(matches!(
            greedy_basis(8, 1, 1, 1e-10, &GreedyOptions { budget: 3, ..opts }),
            Err(FormsError::BasisNotFound { .. })
        ));
    }
}
