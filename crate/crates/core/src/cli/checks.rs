//! Consistency sweeps shared by `selfcheck` and the test suites.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arith::{gauss_sum_oracle, gcd, v2, Rational, RootOfUnityExact};
use crate::forms::{greedy_basis, GreedyOptions};
use crate::poincare::CoeffOptions;
use crate::rigor::{BallComplex, Mag};
use crate::weil::{weil_entry_with, weil_oracle, OracleError, SL2Z};

pub type SignatureFn = fn(&Rational) -> u8;

/// Reduced `b/a` with `1 <= a <= a_max`, `v2(a) != 1`, `0 < |b| <= b_max`.
pub fn gauss_sweep_fractions(a_max: i64, b_max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in 1..=a_max {
        if v2(a) == Some(1) {
            continue;
        }
        for b in -b_max..=b_max {
            if b != 0 && gcd(a, b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Pairs `(a, b)` for which the oracle ball of `b/a` misses
/// `e_8(sig(2b/a))` or is wider than `max_rad`.
pub fn gauss_sweep(a_max: i64, b_max: i64, prec: u32, max_rad: f64, sig: SignatureFn) -> Vec<(i64, i64)> {
    gauss_sweep_fractions(a_max, b_max)
        .into_iter()
        .filter(|&(a, b)| {
            let z = match gauss_sum_oracle(&Rational::new(b, a), prec) {
                Ok(z) => z,
                Err(_) => return true,
            };
            let e = RootOfUnityExact::e8(sig(&Rational::new(2 * b, a)) as i64).to_ball(prec + 32);
            !(z.overlaps(&e) && z.rad().to_f64() <= max_rad)
        })
        .collect()
}

/// Pseudo-random elements of `SL2(Z)` with entries bounded by `bound`,
/// from random coprime bottom rows completed by extended Euclid.
pub fn random_sl2z(rng: &mut StdRng, bound: i64) -> SL2Z {
    loop {
        let c = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(-bound..=bound);
        if gcd(c, d) != 1 {
            continue;
        }
        if let Some(m) = SL2Z::complete_bottom_row(c, d) {
            if m.a.abs() <= bound && m.b.abs() <= bound {
                return m;
            }
        }
    }
}

/// One failed comparison of the closed formula against the word oracle.
#[derive(Clone, Debug)]
pub struct WeilFailure {
    pub n: i64,
    pub matrix: SL2Z,
    pub detail: String,
}

// long generator words lose precision; retry at doubled working precision
// until every entry is within `max_rad` or the budget is spent
fn escalated_oracle(m: &SL2Z, n: i64, prec: u32, max_rad: f64) -> Result<Vec<Vec<BallComplex>>, OracleError> {
    let mut p = prec;
    loop {
        let o = weil_oracle(m, n, p)?;
        let worst = o.iter().flatten().map(|b| b.rad().to_f64()).fold(0.0, f64::max);
        if worst <= max_rad || p >= 8 * prec {
            return Ok(o);
        }
        p *= 2;
    }
}

/// Closed-form entries against the generator oracle for `count` random
/// matrices; oracle balls wider than `max_rad` count as failures.
pub fn weil_sweep(
    n: i64,
    count: usize,
    bound: i64,
    seed: u64,
    prec: u32,
    max_rad: f64,
    sig: SignatureFn,
) -> Vec<WeilFailure> {
    let mut rng = StdRng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut fails = Vec::new();
    for _ in 0..count {
        let m = random_sl2z(&mut rng, bound);
        let o = match escalated_oracle(&m, n, prec, max_rad) {
            Ok(o) => o,
            Err(e) => {
                fails.push(WeilFailure { n, matrix: m, detail: e.to_string() });
                continue;
            }
        };
        'rows: for x in 0..2 * n {
            for xp in 0..2 * n {
                let c = weil_entry_with(&m, x, xp, n, sig).to_ball(8 * prec + 32);
                let b = &o[x as usize][xp as usize];
                if !b.overlaps(&c) || b.rad().to_f64() > max_rad {
                    fails.push(WeilFailure {
                        n,
                        matrix: m,
                        detail: format!("entry ({}, {}): closed form {} outside oracle {}", x, xp, c, b),
                    });
                    break 'rows;
                }
            }
        }
    }
    fails
}

fn matrix_ball(m: &SL2Z, n: i64, prec: u32, sig: SignatureFn) -> Vec<Vec<BallComplex>> {
    (0..2 * n)
        .map(|x| (0..2 * n).map(|xp| weil_entry_with(m, x, xp, n, sig).to_ball(prec)).collect())
        .collect()
}

fn matmul(a: &[Vec<BallComplex>], b: &[Vec<BallComplex>], prec: u32) -> Vec<Vec<BallComplex>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BallComplex::zero(prec), |acc, l| &acc + &(&a[i][l] * &b[l][j])))
                .collect()
        })
        .collect()
}

/// Rows of `ρ(A)` are orthonormal: `ρ(A) ρ(A)^* = I` as ball matrices.
pub fn is_unitary(m: &SL2Z, n: i64, prec: u32, sig: SignatureFn) -> bool {
    let r = matrix_ball(m, n, prec, sig);
    let size = r.len();
    (0..size).all(|i| {
        (0..size).all(|j| {
            let s = (0..size).fold(BallComplex::zero(prec), |acc, l| &acc + &(&r[i][l] * &r[j][l].conj()));
            let want = if i == j { BallComplex::one(prec) } else { BallComplex::zero(prec) };
            (&s - &want).contains_zero()
        })
    })
}

/// `ρ(A)ρ(B) = ±ρ(AB)` with a single global sign. Returns the sign.
pub fn cocycle_sign(a: &SL2Z, b: &SL2Z, n: i64, prec: u32, sig: SignatureFn) -> Option<i32> {
    let ab = *a * *b;
    let lhs = matmul(&matrix_ball(a, n, prec, sig), &matrix_ball(b, n, prec, sig), prec);
    let rhs = matrix_ball(&ab, n, prec, sig);
    [1, -1].into_iter().find(|&s| {
        lhs.iter().zip(&rhs).all(|(rl, rr)| {
            rl.iter().zip(rr).all(|(x, y)| {
                let y = if s == 1 { y.clone() } else { -y };
                (x - &y).contains_zero()
            })
        })
    })
}

/// Unitarity and cocycle failures on `count` random matrices (pairs).
pub fn weil_structure_sweep(n: i64, count: usize, bound: i64, seed: u64, prec: u32, sig: SignatureFn) -> Vec<WeilFailure> {
    let mut rng = StdRng::seed_from_u64(seed.wrapping_add(n as u64));
    let mut fails = Vec::new();
    for _ in 0..count {
        let a = random_sl2z(&mut rng, bound);
        let b = random_sl2z(&mut rng, bound);
        if !is_unitary(&a, n, prec, sig) {
            fails.push(WeilFailure { n, matrix: a, detail: "not unitary".into() });
        }
        if cocycle_sign(&a, &b, n, prec, sig).is_none() {
            fails.push(WeilFailure {
                n,
                matrix: a,
                detail: format!("rho(A)rho(B) != ±rho(AB) for B = {}", b),
            });
        }
    }
    fails
}

/// Builds the Gram matrix of `dim` anchors and reports whether it is
/// symmetric within radii. Reality of every coefficient is enforced by the
/// coefficient routine itself.
pub fn gram_symmetry(k: i64, n: i64, dim: usize, eps: f64, coeff: CoeffOptions) -> Result<(bool, Mag), String> {
    let opts = GreedyOptions { coeff, ..GreedyOptions::default() };
    let g = greedy_basis(k, n, dim, eps, &opts).map_err(|e| e.to_string())?;
    Ok((g.is_symmetric(), g.max_radius()))
}

/// Signature table with a planted error at denominators divisible by 5.
pub fn corrupted_signature(r: &Rational) -> u8 {
    let s = crate::arith::signature(r);
    if *r.numer() != 0 && r.denom() % 5 == 0 {
        (s + 2) % 8
    } else {
        s
    }
}
