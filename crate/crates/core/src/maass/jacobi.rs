use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::series::{delta, euler_product, QSeriesInt};
use super::MaassError;
use crate::forms::{JacobiCuspFormExact, NumberFieldSpec};

/// Laurent data `(exponent of q, exponent of ζ) -> coefficient`.
type Laurent = BTreeMap<(i64, i64), BigInt>;

fn lmul(a: &Laurent, b: &Laurent, bound: i64) -> Laurent {
    let mut out = Laurent::new();
    for (&(n1, r1), c1) in a {
        for (&(n2, r2), c2) in b {
            if n1 + n2 > bound {
                continue;
            }
            *out.entry((n1 + n2, r1 + r2)).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn from_q(s: &QSeriesInt) -> Laurent {
    s.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| ((n as i64, 0), c.clone()))
        .collect()
}

/// Index-`N` Jacobi form of weight `k` as `Σ c(n, r) q^n ζ^r`, exact for
/// `n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiSeriesExact {
    pub k: i64,
    pub index: i64,
    pub n_max: i64,
    pub coeffs: BTreeMap<(i64, i64), BigInt>,
}

impl JacobiSeriesExact {
    pub fn coeff(&self, n: i64, r: i64) -> Result<BigInt, MaassError> {
        if n > self.n_max {
            return Err(MaassError::CoverageExceeded {
                needed: n,
                n_max: self.n_max,
            });
        }
        Ok(self.coeffs.get(&(n, r)).cloned().unwrap_or_default())
    }

    /// `c(n, r) = c(n, -r)` for all stored keys.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&(n, r), c)| self.coeffs.get(&(n, -r)) == Some(c))
    }

    /// Multiply by an elliptic modular form of weight `w`.
    pub fn mul_q(&self, f: &QSeriesInt, w: i64) -> JacobiSeriesExact {
        let bound = self.n_max.min(f.n_max() as i64);
        JacobiSeriesExact {
            k: self.k + w,
            index: self.index,
            n_max: bound,
            coeffs: lmul(&self.coeffs, &from_q(f), bound),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakJacobi {
    /// `φ_{-2,1} = (ζ - 2 + ζ^{-1}) + O(q)`
    MinusTwo,
    /// `φ_{0,1} = (ζ + 10 + ζ^{-1}) + O(q)`
    Zero,
}

/// `φ_{-2,1} = (ζ - 2 + ζ^{-1}) Π (1 - q^n ζ)² (1 - q^n ζ^{-1})² (1 - q^n)^{-4}`.
fn phi_minus_two(n_max: i64) -> Laurent {
    let mut phi: Laurent = [((0, 1), 1), ((0, 0), -2), ((0, -1), 1)]
        .into_iter()
        .map(|(k, v)| (k, BigInt::from(v)))
        .collect();
    for n in 1..=n_max {
        for z in [1i64, -1] {
            let f: Laurent = [((0, 0), BigInt::one()), ((n, z), -BigInt::one())].into_iter().collect();
            phi = lmul(&phi, &f, n_max);
            phi = lmul(&phi, &f, n_max);
        }
    }
    let inv4 = euler_product(n_max as usize).inverse_unit().pow(4);
    lmul(&phi, &from_q(&inv4), n_max)
}

/// Power series in `t` as a vector, from `(exponent, coefficient)` terms.
fn t_series(terms: impl Iterator<Item = (i64, i64)>, bound: i64) -> QSeriesInt {
    let mut s = QSeriesInt::zero(bound as usize);
    for (e, c) in terms {
        if (0..=bound).contains(&e) {
            s.coeffs[e as usize] += c;
        }
    }
    s
}

/// `φ_{0,1} = 4 Σ_{i=2,3,4} θ_i(τ,z)² / θ_i(τ,0)²`, computed in `t = q^{1/2}`.
fn phi_zero(n_max: i64) -> Laurent {
    let tb = 2 * n_max;
    let amax = ((tb as f64).sqrt() as i64) + 2;
    let range = || -amax..=amax;
    let mut acc = Laurent::new();
    // θ_3 and θ_4: Σ (±1)^{a+b} t^{a²+b²} ζ^{a+b}
    for sign in [1i64, -1] {
        let mut num = Laurent::new();
        for a in range() {
            for b in range() {
                let e = a * a + b * b;
                if e <= tb {
                    let c = if sign < 0 && (a + b) % 2 != 0 { -1 } else { 1 };
                    *num.entry((e, a + b)).or_insert_with(BigInt::zero) += c;
                }
            }
        }
        let th0 = t_series(range().map(|a| (a * a, if sign < 0 && a % 2 != 0 { -1 } else { 1 })), tb);
        let inv = th0.mul(&th0).inverse_unit().scale(&BigInt::from(4));
        for (key, c) in lmul(&num, &from_q(&inv), tb) {
            *acc.entry(key).or_insert_with(BigInt::zero) += c;
        }
    }
    // θ_2: the factors q^{1/4} cancel and θ_2(τ,0)² = 4 (Σ_{n>=0} t^{n²+n})²
    let mut num = Laurent::new();
    for a in range() {
        for b in range() {
            let e = a * a + a + b * b + b;
            if e <= tb {
                *num.entry((e, a + b + 1)).or_insert_with(BigInt::zero) += 1;
            }
        }
    }
    let half = t_series((0..=amax).map(|n| (n * n + n, 1)), tb);
    let inv = half.mul(&half).inverse_unit();
    for (key, c) in lmul(&num, &from_q(&inv), tb) {
        *acc.entry(key).or_insert_with(BigInt::zero) += c;
    }
    acc.retain(|_, c| !c.is_zero());
    acc.into_iter()
        .map(|((e, r), c)| {
            assert!(e % 2 == 0, "half-integral power survived in φ_(0,1)");
            ((e / 2, r), c)
        })
        .collect()
}

/// `θ_1(τ,z)² / η(τ)⁶` from the double sum `θ_1 = Σ (-1)^n q^{(n+1/2)²/2} ζ^{n+1/2}`;
/// an independent construction of `φ_{-2,1}`.
pub fn theta1_squared_over_eta6(n_max: i64) -> JacobiSeriesExact {
    let amax = ((2 * n_max) as f64).sqrt() as i64 + 2;
    let mut num = Laurent::new();
    for a in -amax..=amax {
        for b in -amax..=amax {
            let e2 = a * a + a + b * b + b;
            if e2 / 2 <= n_max {
                let c = if (a + b) % 2 == 0 { 1 } else { -1 };
                *num.entry((e2 / 2, a + b + 1)).or_insert_with(BigInt::zero) += c;
            }
        }
    }
    // the q^{1/4} of θ_1² cancels against η⁶ = q^{1/4} Π (1 - q^n)⁶
    let inv6 = euler_product(n_max as usize).inverse_unit().pow(6);
    let coeffs = lmul(&num, &from_q(&inv6), n_max);
    JacobiSeriesExact {
        k: -2,
        index: 1,
        n_max,
        coeffs,
    }
}

pub fn weak_jacobi(which: WeakJacobi, n_max: i64) -> JacobiSeriesExact {
    match which {
        WeakJacobi::MinusTwo => JacobiSeriesExact {
            k: -2,
            index: 1,
            n_max,
            coeffs: phi_minus_two(n_max),
        },
        WeakJacobi::Zero => JacobiSeriesExact {
            k: 0,
            index: 1,
            n_max,
            coeffs: phi_zero(n_max),
        },
    }
}

/// `φ_{10,1} = Δ φ_{-2,1}` and `φ_{12,1} = Δ φ_{0,1}`.
pub fn phi_cusp(k: i64, n_max: i64) -> Result<JacobiSeriesExact, MaassError> {
    let which = match k {
        10 => WeakJacobi::MinusTwo,
        12 => WeakJacobi::Zero,
        _ => return Err(MaassError::Unsupported(format!("cusp generator of weight {}", k))),
    };
    Ok(weak_jacobi(which, n_max).mul_q(&delta(n_max as usize), 12))
}

fn divisors(n: i64) -> impl Iterator<Item = i64> {
    (1..=n).filter(move |d| n % d == 0)
}

/// `(φ|V_ℓ)(n, r) = Σ_{d | (n, r, ℓ)} d^{k-1} c_φ(nℓ/d², r/d)` for an index-one `φ`.
pub fn v_operator(phi: &JacobiSeriesExact, ell: i64) -> Result<JacobiSeriesExact, MaassError> {
    if phi.index != 1 || ell < 1 {
        return Err(MaassError::Unsupported("V_ℓ needs an index-one form and ℓ >= 1".into()));
    }
    let n_out = phi.n_max / ell;
    let mut coeffs = BTreeMap::new();
    for n in 0..=n_out {
        let rmax = ((4 * n * ell + ell * ell) as f64).sqrt() as i64 + 1;
        for r in -rmax..=rmax {
            let mut s = BigInt::zero();
            for d in divisors(ell) {
                if n % d != 0 || r % d != 0 {
                    continue;
                }
                let c = phi.coeff(n * ell / (d * d), r / d)?;
                if !c.is_zero() {
                    s += c * num_traits::pow(BigInt::from(d), (phi.k - 1) as usize);
                }
            }
            if !s.is_zero() {
                coeffs.insert((n, r), s);
            }
        }
    }
    Ok(JacobiSeriesExact {
        k: phi.k,
        index: ell,
        n_max: n_out,
        coeffs,
    })
}

/// `N`-th Fourier-Jacobi coefficient `φ|V_N` of the Maass lift of `φ`, keyed
/// by `(D, r mod 2N)`.
pub fn maass_fj(phi: &JacobiSeriesExact, n: i64) -> Result<JacobiCuspFormExact, MaassError> {
    let v = v_operator(phi, n)?;
    let d_min = (4 * n * v.n_max - n * n).max(0);
    let mut out = JacobiCuspFormExact::new(phi.k, n, NumberFieldSpec::rational(), d_min);
    for (&(m, r), c) in &v.coeffs {
        let d = r * r - 4 * n * m;
        if d >= 0 {
            return Err(MaassError::Unsupported(format!(
                "coefficient at D = {} >= 0: not a cusp form",
                d
            )));
        }
        if -d > d_min {
            continue;
        }
        out.insert(d, r, vec![BigRational::from_integer(c.clone())])
            .expect("admissible key within coverage");
    }
    Ok(out)
}
