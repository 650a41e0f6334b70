use thiserror::Error;

use super::SL2Z;
use crate::rigor::{e_frac, BallComplex, BallReal, RigorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cocycle branch not separated from its negative at this precision")]
    BranchResolutionFailure,
    #[error(transparent)]
    Rigor(#[from] RigorError),
}

#[derive(Clone, Copy, Debug)]
enum Letter {
    T(i64),
    S,
}

/// Word in `S` and `T^q` whose product (left to right) is `m`.
fn decompose(m: &SL2Z) -> Vec<Letter> {
    let mut word = Vec::new();
    let mut cur = *m;
    while cur.c != 0 {
        let q = cur.a.div_euclid(cur.c);
        // cur = T^q · (T^-q cur)
        cur = SL2Z {
            a: cur.a - q * cur.c,
            b: cur.b - q * cur.d,
            c: cur.c,
            d: cur.d,
        };
        word.push(Letter::T(q));
        // cur = S · (S^-1 cur),  S^-1 = (0 1; -1 0)
        cur = SL2Z {
            a: cur.c,
            b: cur.d,
            c: -cur.a,
            d: -cur.b,
        };
        word.push(Letter::S);
    }
    if cur.a == 1 {
        word.push(Letter::T(cur.b));
    } else {
        // (-1 b; 0 -1) = S^2 T^-b
        word.push(Letter::S);
        word.push(Letter::S);
        word.push(Letter::T(-cur.b));
    }
    word
}

type Mat = Vec<Vec<BallComplex>>;

fn gen_t(q: i64, n: i64, prec: u32) -> Mat {
    let dim = (2 * n) as usize;
    let mut m = vec![vec![BallComplex::zero(prec); dim]; dim];
    for x in 0..dim {
        let xi = x as i64;
        m[x][x] = e_frac(q * xi * xi, 4 * n, prec);
    }
    m
}

fn gen_s(n: i64, prec: u32) -> Mat {
    let dim = (2 * n) as usize;
    let scale = BallReal::from_int(2 * n, prec + 8)
        .sqrt()
        .and_then(|s| s.inv())
        .expect("positive")
        .with_prec(prec);
    let mut m = vec![vec![BallComplex::zero(prec); dim]; dim];
    for x in 0..dim {
        for xp in 0..dim {
            let ph = e_frac(-(x as i64) * (xp as i64) * 4 - n, 8 * n, prec);
            m[x][xp] = ph.mul_real(&scale);
        }
    }
    m
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let prec = a[0][0].prec();
    let mut out = vec![vec![BallComplex::zero(prec); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].contains_zero() && a[i][k].rad().is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][k] * &b[k][j];
                out[i][j] = &out[i][j] + &t;
            }
        }
    }
    out
}

/// `(a τ + b)/(c τ + d)` at `τ = i`.
fn mobius_at_i(m: &SL2Z, prec: u32) -> Result<BallComplex, RigorError> {
    let num = BallComplex::new(BallReal::from_int(m.b, prec), BallReal::from_int(m.a, prec));
    let den = BallComplex::new(BallReal::from_int(m.d, prec), BallReal::from_int(m.c, prec));
    num.div(&den)
}

/// `ρ(A*)` from an S/T factorization of `A`, with the metaplectic sign
/// fixed by tracking the cocycle `(A,w)(A',w') = (AA', w(A'τ) w'(τ))` at
/// `τ = i` and comparing with the principal `√(ci + d)`.
pub fn weil_oracle(m: &SL2Z, n: i64, prec: u32) -> Result<Vec<Vec<BallComplex>>, OracleError> {
    let word = decompose(m);
    let wp = prec + 32;
    let dim = (2 * n) as usize;
    let mut r: Mat = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        BallComplex::one(wp)
                    } else {
                        BallComplex::zero(wp)
                    }
                })
                .collect()
        })
        .collect();
    let s_mat = gen_s(n, wp);
    let mut w = BallComplex::one(wp);
    let mut acc = SL2Z::IDENTITY;
    for letter in word.iter().rev() {
        match *letter {
            Letter::T(q) => {
                acc = SL2Z { a: 1, b: q, c: 0, d: 1 } * acc;
                r = mat_mul(&gen_t(q, n, wp), &r);
            }
            Letter::S => {
                let wg = mobius_at_i(&acc, wp)?.sqrt()?;
                w = &wg * &w;
                acc = SL2Z::S * acc;
                r = mat_mul(&s_mat, &r);
            }
        }
    }
    debug_assert_eq!(acc, *m);
    let target = BallComplex::new(BallReal::from_int(m.d, wp), BallReal::from_int(m.c, wp)).sqrt()?;
    let same = (&w - &target).contains_zero();
    let opposite = (&w + &target).contains_zero();
    let sign = match (same, opposite) {
        (true, false) => 1,
        (false, true) => -1,
        _ => return Err(OracleError::BranchResolutionFailure),
    };
    Ok(r
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| if sign == 1 { e } else { -e }.with_prec(prec))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::{weil_matrix_ball, SL2Z};
    use super::*;

    fn check(m: &SL2Z, n: i64) {
        let o = weil_oracle(m, n, 160).unwrap();
        let c = weil_matrix_ball(m, n, 200);
        for (ro, rc) in o.iter().zip(&c) {
            for (eo, ec) in ro.iter().zip(rc) {
                assert!(eo.overlaps(ec), "{} N={}: {:?} vs {:?}", m, n, eo, ec);
            }
        }
    }

    #[test]
    fn small_words() {
        for n in 1..4 {
            check(&SL2Z::T, n);
            check(&SL2Z::S, n);
            check(&SL2Z::NEG_IDENTITY, n);
            check(&SL2Z::new(1, 0, 1, 1).unwrap(), n);
            check(&SL2Z::new(2, 1, 7, 4).unwrap(), n);
            check(&SL2Z::new(-3, 2, -5, 3).unwrap(), n);
        }
    }
}
