use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rigor::{e_frac, BallComplex};

/// The root of unity `e_n(k) = exp(2πi k/n)`, stored with `gcd(k, n) = 1`
/// and `0 <= k < n` so that equal values compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnityExact {
    order: u64,
    exponent: u64,
}

impl RootOfUnityExact {
    pub const ONE: RootOfUnityExact = RootOfUnityExact {
        order: 1,
        exponent: 0,
    };

    /// `e_n(k)`.
    pub fn new(n: u64, k: i64) -> RootOfUnityExact {
        assert!(n > 0, "order must be positive");
        let k = k.rem_euclid(n as i64) as u64;
        let g = k.gcd(&n);
        if k == 0 {
            return RootOfUnityExact::ONE;
        }
        RootOfUnityExact {
            order: n / g,
            exponent: k / g,
        }
    }

    /// `e_8(k)`.
    pub fn e8(k: i64) -> RootOfUnityExact {
        RootOfUnityExact::new(8, k)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn pow(&self, m: i64) -> RootOfUnityExact {
        let k = (self.exponent as i128 * m as i128).rem_euclid(self.order as i128);
        RootOfUnityExact::new(self.order, k as i64)
    }

    pub fn conj(&self) -> RootOfUnityExact {
        self.pow(-1)
    }

    /// Exponent of this root written over denominator `n` (which must be a
    /// multiple of the order).
    pub fn exponent_over(&self, n: u64) -> u64 {
        assert!(n % self.order == 0, "{} is not a multiple of {}", n, self.order);
        self.exponent * (n / self.order)
    }

    pub fn to_ball(&self, prec: u32) -> BallComplex {
        e_frac(self.exponent as i64, self.order as i64, prec)
    }
}

impl Mul for RootOfUnityExact {
    type Output = RootOfUnityExact;
    fn mul(self, o: RootOfUnityExact) -> RootOfUnityExact {
        let n = self.order.lcm(&o.order);
        let k = self.exponent_over(n) + o.exponent_over(n);
        RootOfUnityExact::new(n, (k % n) as i64)
    }
}

impl fmt::Debug for RootOfUnityExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e_{}({})", self.order, self.exponent)
    }
}

impl fmt::Display for RootOfUnityExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(RootOfUnityExact::new(8, 2), RootOfUnityExact::new(4, 1));
        assert_eq!(RootOfUnityExact::new(6, 6), RootOfUnityExact::ONE);
        assert_eq!(RootOfUnityExact::new(8, -1), RootOfUnityExact::new(8, 7));
    }

    #[test]
    fn product_and_power() {
        let a = RootOfUnityExact::new(3, 1);
        let b = RootOfUnityExact::new(4, 1);
        assert_eq!(a * b, RootOfUnityExact::new(12, 7));
        for n in 1..30u64 {
            for k in 0..n as i64 {
                assert_eq!(RootOfUnityExact::new(n, k).pow(n as i64), RootOfUnityExact::ONE);
            }
        }
    }
}
