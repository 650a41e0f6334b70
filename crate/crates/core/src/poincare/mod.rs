//! Fourier coefficients of Jacobi Poincaré series `P_{Δ,r}` of weight `k`
//! and index `N`, with a rigorous bound for the truncated Kloosterman-type
//! sum over `c`.
//!
//! For `ν = k - 3/2` the coefficient of `P_{Δ,r}` at `(Δ',r')` is
//!
//! ```text
//! δ_{Δ,Δ'}(δ_{r,r'} + δ_{-r,r'}) + 2π|Δ'/Δ|^{k/2-3/4} Σ_{c≠0} H*_c J_ν(π√|ΔΔ'| / (|c|N))
//! ```
//!
//! Tail bound: `|H*_c| <= 1` and `|J_ν(x)| <= (x/2)^ν / Γ(ν+1)` give, with
//! `A = π√|ΔΔ'| / (2N)`,
//!
//! ```text
//! Σ_{|c|>M} |H*_c J_ν| <= 2 A^ν/Γ(ν+1) Σ_{c>M} c^{-ν} <= 2 A^ν M^{1-ν} / ((ν-1) Γ(ν+1))
//! ```
//!
//! so the neglected part of the coefficient is at most
//! `4π R A^ν M^{1-ν} / ((ν-1) Γ(ν+1))` with `R = |Δ'/Δ|^{k/2-3/4}`.

mod hstar;

pub use hstar::{hstar, hstar_with_completion};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rigor::{
    bessel_j_half, default_precision, gamma_half, pi, BallComplex, BallReal, Mag, RigorError,
};

/// Pair `(D, r)` with `D < 0` and `D ≡ r² (mod 4N)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub d: i64,
    pub r: i64,
}

impl AdmissiblePair {
    pub fn new(n: i64, d: i64, r: i64) -> Option<AdmissiblePair> {
        if d < 0 && (d - r * r).rem_euclid(4 * n) == 0 {
            Some(AdmissiblePair { d, r })
        } else {
            None
        }
    }

    pub fn is_admissible(&self, n: i64) -> bool {
        self.d < 0 && (self.d - self.r * self.r).rem_euclid(4 * n) == 0
    }

    /// Same pair with `r` replaced by its representative of `±r mod 2N` in `0..=N`.
    pub fn canonical(&self, n: i64) -> AdmissiblePair {
        let r = self.r.rem_euclid(2 * n);
        AdmissiblePair {
            d: self.d,
            r: r.min(2 * n - r),
        }
    }
}

/// One coefficient request.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoincareJob {
    pub k: i64,
    pub n: i64,
    pub source: AdmissiblePair,
    pub target: AdmissiblePair,
    pub eps: f64,
}

#[derive(Clone, Debug)]
pub struct CoeffResult {
    pub value: BallReal,
    /// Imaginary part of the computed enclosure (contains 0 for a valid run).
    pub imag: BallReal,
    pub m_used: u64,
    pub terms: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoincareError {
    #[error("invalid job: {0}")]
    InvalidJob(String),
    #[error("imaginary part {0} excludes zero")]
    RealityCheckFailed(String),
    #[error(transparent)]
    Rigor(#[from] RigorError),
}

/// Execution options for [`poincare_coeff`].
#[derive(Clone, Copy, Debug)]
pub struct CoeffOptions {
    /// Sum the `c` range sequentially instead of with the rayon pool. The
    /// reduction order is fixed either way, so results are bitwise identical.
    pub deterministic: bool,
    /// Working precision override (bits).
    pub precision_bits: Option<u32>,
    /// Truncation index override.
    pub m_override: Option<u64>,
}

impl Default for CoeffOptions {
    fn default() -> Self {
        CoeffOptions {
            deterministic: false,
            precision_bits: None,
            m_override: None,
        }
    }
}

/// `α(N,k,Δ) = 2√N (π|Δ|/N)^{k-3/2} / Γ(k-3/2)`, the factor turning the
/// coefficient `p_{Δ,r}(Δ',r')` into the Petersson product `⟨P_{Δ',r'}, P_{Δ,r}⟩`.
pub fn alpha(n: i64, k: i64, delta: i64, prec: u32) -> BallReal {
    assert!(k >= 4);
    let wp = prec + 32;
    let x = pi(wp)
        .mul_int(delta.abs())
        .div_int(n);
    let m = (k - 2) as u32;
    let pow = x.powi(m) * x.sqrt().expect("positive");
    let sqrt_n = BallReal::from_int(n, wp).sqrt().expect("positive");
    let g = gamma_half(m, wp);
    (pow * sqrt_n).mul_int(2).div(&g).expect("Γ > 0").with_prec(prec)
}

/// `R = |Δ'/Δ|^{k/2 - 3/4}` as a ball.
fn ratio_power(k: i64, delta: i64, delta_p: i64, prec: u32) -> BallReal {
    // (|Δ'|/|Δ|)^{(2k-3)/4}: the fourth root of the (2k-3)-th power
    let q = BallReal::from_ratio_i64(delta_p.abs(), delta.abs(), prec);
    let p = q.powi((2 * k - 3) as u32);
    p.sqrt().and_then(|s| s.sqrt()).expect("positive")
}

/// Rigorous upper bound for the neglected part of the `c`-sum when
/// truncating at `|c| <= M`.
pub fn tail_bound(k: i64, n: i64, delta: i64, delta_p: i64, m: u64) -> Mag {
    assert!(k >= 6 && m >= 1);
    let prec = 96;
    let r = ratio_power(k, delta, delta_p, prec);
    let prod = BallReal::from_int(delta.abs() as i128 * delta_p.abs() as i128, prec);
    let a = (pi(prec) * prod.sqrt().expect("positive")).div_int(2 * n);
    let m0 = (k - 2) as u32; // ν = m0 + 1/2
    let a_nu = a.powi(m0) * a.sqrt().expect("positive");
    let mb = BallReal::from_int(m as i64, prec);
    // M^{1-ν} = 1 / (M^{m0-1} √M)
    let m_pow = mb.powi(m0 - 1) * mb.sqrt().expect("positive");
    // (ν - 1) Γ(ν + 1) = (2m0 - 1)/2 · Γ(m0 + 3/2)
    let denom = gamma_half(m0 + 1, prec).mul_int(2 * m0 as i64 - 1).mul_2exp(-1);
    let num = (pi(prec) * r * a_nu).mul_int(4);
    let t = num.div(&(m_pow * denom)).expect("positive");
    t.abs_upper()
}

/// Least `M >= 1` with `tail_bound(M) <= eps/2`.
pub fn choose_m(k: i64, n: i64, delta: i64, delta_p: i64, eps: f64) -> u64 {
    assert!(eps > 0.0);
    let target = Mag::from_f64_up(eps / 2.0);
    // Mag rounding makes from_f64_up(eps/2) slightly larger than eps/2 only
    // within its 32-bit mantissa; compare against a value rounded down.
    let target = if target.to_f64() > eps / 2.0 {
        Mag::from_f64_up(eps / 2.0 * (1.0 - 1e-9))
    } else {
        target
    };
    let ok = |m: u64| tail_bound(k, n, delta, delta_p, m) <= target;
    // initial guess from the logarithm of the bound
    let t1 = tail_bound(k, n, delta, delta_p, 1).log2();
    let nu1 = k as f64 - 2.5;
    let est = ((t1 - (eps / 2.0).log2()) / nu1).exp2().ceil().max(1.0);
    let mut m = if est.is_finite() && est < 1e12 { est as u64 } else { 1 };
    while !ok(m) {
        m = (m + 1).max(m + m / 64);
    }
    // tighten to the least admissible value
    let mut lo = 0u64; // !ok or 0
    let mut hi = m; // ok
    if hi > 1 && !ok(hi - 1) {
        return hi;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid >= 1 && ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Coefficient `p_{Δ,r}(Δ',r')` of the Poincaré series `P_{Δ,r}`.
pub fn poincare_coeff(job: &PoincareJob, opts: &CoeffOptions) -> Result<CoeffResult, PoincareError> {
    let (k, n) = (job.k, job.n);
    if k < 6 || k % 2 != 0 {
        return Err(PoincareError::InvalidJob(format!("weight {} must be even and >= 6", k)));
    }
    if n < 1 || !(job.eps > 0.0) {
        return Err(PoincareError::InvalidJob("index and eps must be positive".into()));
    }
    if !job.source.is_admissible(n) || !job.target.is_admissible(n) {
        return Err(PoincareError::InvalidJob(format!(
            "pairs {:?}, {:?} not admissible for N = {}",
            job.source, job.target, n
        )));
    }
    let (delta, r) = (job.source.d, job.source.r);
    let (delta_p, rp) = (job.target.d, job.target.r);
    let m = opts
        .m_override
        .unwrap_or_else(|| choose_m(k, n, delta, delta_p, job.eps));
    let tail = tail_bound(k, n, delta, delta_p, m);

    let base = opts.precision_bits.unwrap_or_else(|| default_precision(job.eps));
    let r_low = ratio_power(k, delta, delta_p, 64);
    let mag_bits = r_low.abs_upper().log2().max(0.0).ceil() as u32;
    let wp = base + mag_bits + 40;

    let nu_m = (k - 2) as u32;
    let sqrt_prod = BallReal::from_int(delta.abs() as i128 * delta_p.abs() as i128, wp)
        .sqrt()
        .expect("positive");
    let x0 = (pi(wp) * sqrt_prod).div_int(n);

    let term = |c: u64| -> Result<(BallComplex, u64), PoincareError> {
        let ci = c as i64;
        let j = bessel_j_half(nu_m, &x0.div_int(ci))?;
        let (hp, tp) = hstar::hstar_counted(ci, r, delta, rp, delta_p, n, k, wp);
        let (hm, tm) = hstar::hstar_counted(-ci, r, delta, rp, delta_p, n, k, wp);
        Ok(((&hp + &hm).mul_real(&j), tp + tm))
    };
    let parts: Vec<Result<(BallComplex, u64), PoincareError>> = if opts.deterministic {
        (1..=m).map(term).collect()
    } else {
        (1..=m).into_par_iter().map(term).collect()
    };
    let mut sum = BallComplex::zero(wp);
    let mut terms = 0u64;
    for p in parts {
        let (v, t) = p?;
        sum = &sum + &v;
        terms += t;
    }
    let scale = pi(wp).mul_2exp(1) * ratio_power(k, delta, delta_p, wp);
    let mut val = sum.mul_real(&scale).add_error(tail);
    if delta == delta_p {
        let two_n = 2 * n;
        let hits = ((r - rp).rem_euclid(two_n) == 0) as i64 + ((r + rp).rem_euclid(two_n) == 0) as i64;
        val.re = &val.re + &BallReal::from_int(hits, wp);
    }
    if !val.im.contains_zero() {
        return Err(PoincareError::RealityCheckFailed(val.im.display(10)));
    }
    let out_prec = base + mag_bits + 8;
    Ok(CoeffResult {
        value: val.re.with_prec(out_prec),
        imag: val.im.with_prec(out_prec),
        m_used: m,
        terms,
    })
}
