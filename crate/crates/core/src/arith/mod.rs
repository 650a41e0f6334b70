//! Exact number-theory kernel: gcd, 2-adic valuation, Kronecker symbol,
//! the mod-8 signature of a rational, exact roots of unity and Gauss sums.

mod gauss;
mod root;

pub use gauss::{gauss_sum_oracle, standard_gauss_sum};
pub use root::RootOfUnityExact;

use num_integer::Integer;
use thiserror::Error;

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("Kronecker symbol needs a positive lower argument, got {0}")]
    NonPositiveModulus(i64),
    #[error("denominator {0} is exactly divisible by 2")]
    HypothesisViolated(i64),
    #[error("Gauss sum modulus {0} is not odd or a power of two >= 4")]
    UnsupportedModulus(i64),
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Inverse of `a` modulo `m > 0` (requires `gcd(a, m) = 1`).
pub fn inv_mod(a: i64, m: i64) -> i64 {
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    assert_eq!(g, 1, "{} not invertible mod {}", a, m);
    x.rem_euclid(m)
}

/// 2-adic valuation; `None` for 0.
pub fn v2(x: i64) -> Option<u32> {
    if x == 0 {
        None
    } else {
        Some(x.trailing_zeros())
    }
}

/// Kronecker symbol `(b/a)` for `a >= 1`.
pub fn kronecker(b: i64, a: i64) -> Result<i32, ArithError> {
    if a <= 0 {
        return Err(ArithError::NonPositiveModulus(a));
    }
    if gcd(b, a) != 1 {
        return Ok(0);
    }
    let mut res = 1i32;
    let mut a = a;
    let tz = a.trailing_zeros();
    a >>= tz;
    if tz % 2 == 1 && matches!(b.rem_euclid(8), 3 | 5) {
        res = -res;
    }
    // Jacobi symbol for odd a
    let mut n = a;
    let mut m = b.rem_euclid(n);
    while m != 0 {
        while m % 2 == 0 {
            m /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut m, &mut n);
        if m % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        m %= n;
    }
    Ok(if n == 1 { res } else { 0 })
}

/// The class `s mod 8` with `e_8(s) = (b/a) e_8(1 - a_1 + even(a) b a_1)`
/// for `r = b/a` (`a = 2^n a_1`, `a_1` odd); `signature(0) = 0`.
pub fn signature(r: &Rational) -> u8 {
    if *r.numer() == 0 {
        return 0;
    }
    let b = *r.numer() as i128;
    let a = *r.denom();
    let a1 = (a >> a.trailing_zeros()) as i128;
    let even = if a % 2 == 0 { 1 } else { 0 };
    let mut s = (1 - a1 + even * b * a1).rem_euclid(8);
    if kronecker(*r.numer(), a).expect("positive denominator") == -1 {
        s += 4;
    }
    (s % 8) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(2, 7), Ok(1));
        assert_eq!(kronecker(3, 5), Ok(-1));
        assert_eq!(kronecker(4, 9), Ok(1));
        assert_eq!(kronecker(6, 9), Ok(0));
        assert_eq!(kronecker(3, 2), Ok(-1));
        assert_eq!(kronecker(-1, 8), Ok(1));
        assert_eq!(kronecker(1, 0), Err(ArithError::NonPositiveModulus(0)));
    }

    #[test]
    fn kronecker_matches_squares_for_odd_primes() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            for b in -30..30i64 {
                let expect = if b.rem_euclid(p) == 0 {
                    0
                } else if (1..p).any(|x| (x * x - b).rem_euclid(p) == 0) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(b, p).unwrap(), expect, "({}/{})", b, p);
            }
        }
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&Rational::from_integer(2)), 0);
        assert_eq!(signature(&Rational::new(2, 3)), 2);
        assert_eq!(signature(&Rational::from_integer(0)), 0);
        assert_eq!(signature(&Rational::new(4, 6)), 2);
    }

    #[test]
    fn valuations() {
        assert_eq!(v2(0), None);
        assert_eq!(v2(12), Some(2));
        assert_eq!(v2(-8), Some(3));
        assert_eq!(inv_mod(3, 7), 5);
        assert_eq!(inv_mod(-3, 7), 2);
    }
}
