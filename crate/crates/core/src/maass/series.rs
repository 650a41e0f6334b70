use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::MaassError;

/// Power series `Σ a(n) q^n` known exactly for `n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeriesInt {
    pub coeffs: Vec<BigInt>,
}

impl QSeriesInt {
    pub fn zero(n_max: usize) -> QSeriesInt {
        QSeriesInt {
            coeffs: vec![BigInt::zero(); n_max + 1],
        }
    }

    pub fn one(n_max: usize) -> QSeriesInt {
        let mut s = QSeriesInt::zero(n_max);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&BigInt, MaassError> {
        self.coeffs.get(n).ok_or(MaassError::CoverageExceeded {
            needed: n as i64,
            n_max: self.n_max() as i64,
        })
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &QSeriesInt) -> QSeriesInt {
        let n = self.n_max().min(other.n_max());
        let mut out = QSeriesInt::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, other: &QSeriesInt) -> QSeriesInt {
        let n = self.n_max().min(other.n_max());
        QSeriesInt {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> QSeriesInt {
        QSeriesInt {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> QSeriesInt {
        let mut out = QSeriesInt::one(self.n_max());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse_unit(&self) -> QSeriesInt {
        assert!(self.coeffs[0].is_one(), "constant term must be 1");
        let n = self.n_max();
        let mut out = QSeriesInt::zero(n);
        out.coeffs[0] = BigInt::one();
        for i in 1..=n {
            let mut s = BigInt::zero();
            for j in 1..=i {
                s -= &self.coeffs[j] * &out.coeffs[i - j];
            }
            out.coeffs[i] = s;
        }
        out
    }
}

fn sigma(n: u64, e: u32) -> BigInt {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| num_traits::pow(BigInt::from(d), e as usize))
        .sum()
}

/// `E_4 = 1 + 240 Σ σ_3(n) q^n`, `E_6 = 1 - 504 Σ σ_5(n) q^n`.
pub fn eisenstein(w: u32, n_max: usize) -> Result<QSeriesInt, MaassError> {
    let c = match w {
        4 => 240,
        6 => -504,
        _ => return Err(MaassError::Unsupported(format!("Eisenstein series of weight {}", w))),
    };
    let mut s = QSeriesInt::one(n_max);
    for n in 1..=n_max {
        s.coeffs[n] = sigma(n as u64, w - 1) * c;
    }
    Ok(s)
}

/// `Π (1 - q^n)` up to `q^{n_max}`.
pub fn euler_product(n_max: usize) -> QSeriesInt {
    let mut p = QSeriesInt::one(n_max);
    for n in 1..=n_max {
        for i in (n..=n_max).rev() {
            let t = p.coeffs[i - n].clone();
            p.coeffs[i] -= t;
        }
    }
    p
}

/// `Δ = q Π (1 - q^n)^24`.
pub fn delta(n_max: usize) -> QSeriesInt {
    let p24 = euler_product(n_max).pow(24);
    let mut out = QSeriesInt::zero(n_max);
    for i in 1..=n_max {
        out.coeffs[i] = p24.coeffs[i - 1].clone();
    }
    out
}
