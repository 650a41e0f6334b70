//! Low-precision nonnegative magnitudes with directed rounding.
//!
//! A [`Mag`] stores `man * 2^exp` with a 32-bit normalized mantissa. Every
//! operation named `*_up` (and the default arithmetic) rounds toward +inf so
//! that a `Mag` used as a ball radius is always an upper bound.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Dyadic;

const MAG_BITS: u32 = 32;
const MAG_LO: u64 = 1 << (MAG_BITS - 1);
const MAG_HI: u64 = 1 << MAG_BITS;

/// Nonnegative real `man * 2^exp`, `man` zero or in `[2^31, 2^32)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn norm(man: u128, exp: i64, up: bool) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let mut m = (man >> shift) as u64;
            let lost = man & ((1u128 << shift) - 1);
            if up && lost != 0 {
                m += 1;
            }
            let mut e = exp + shift as i64;
            if m == MAG_HI {
                m >>= 1;
                e += 1;
            }
            Mag { man: m, exp: e }
        } else {
            let shift = MAG_BITS - bits;
            Mag {
                man: (man << shift) as u64,
                exp: exp - shift as i64,
            }
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::norm(v as u128, 0, true)
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            man: MAG_LO,
            exp: e - (MAG_BITS as i64 - 1),
        }
    }

    /// Upper bound for `|man| * 2^exp`.
    pub fn from_bigint_up(man: &BigInt, exp: i64) -> Mag {
        Mag::from_bigint(man, exp, true)
    }

    /// Lower bound for `|man| * 2^exp`.
    pub fn from_bigint_down(man: &BigInt, exp: i64) -> Mag {
        Mag::from_bigint(man, exp, false)
    }

    fn from_bigint(man: &BigInt, exp: i64, up: bool) -> Mag {
        if man.is_zero() {
            return Mag::ZERO;
        }
        let bits = man.bits();
        if bits <= 64 {
            let (_, digits) = man.to_u64_digits();
            return Mag::norm(digits[0] as u128, exp, up);
        }
        let shift = bits - 64;
        let top: BigInt = man.abs() >> shift;
        let (_, digits) = top.to_u64_digits();
        let mut m = digits[0] as u128;
        // Anything shifted out only matters for upward rounding; one extra unit
        // in the 64-bit window is a valid (slightly loose) upper bound.
        if up {
            m += 1;
        }
        Mag::norm(m, exp + shift as i64, up)
    }

    pub fn from_dyadic_up(d: &Dyadic) -> Mag {
        Mag::from_bigint_up(d.man(), d.exp())
    }

    pub fn from_dyadic_down(d: &Dyadic) -> Mag {
        Mag::from_bigint_down(d.man(), d.exp())
    }

    /// Upper bound for a finite `f64` magnitude.
    pub fn from_f64_up(v: f64) -> Mag {
        let d = Dyadic::from_f64(v.abs()).expect("finite f64");
        Mag::from_dyadic_up(&d)
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn to_dyadic(self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }

    /// Approximate value; saturates to `inf`/`0` outside the `f64` range.
    pub fn to_f64(self) -> f64 {
        if self.man == 0 {
            return 0.0;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        (self.man as f64) * 2f64.powi(e)
    }

    /// Approximate base-2 logarithm (`-inf` for zero).
    pub fn log2(self) -> f64 {
        if self.man == 0 {
            return f64::NEG_INFINITY;
        }
        (self.man as f64).log2() + self.exp as f64
    }

    /// Exponent `e` with `self < 2^e` (for nonzero values).
    pub fn upper_exp(self) -> i64 {
        self.exp + MAG_BITS as i64
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.man == 0 {
            return other;
        }
        if other.man == 0 {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let d = (hi.exp - lo.exp) as u64;
        if d >= MAG_BITS as u64 {
            // lo < 2^(lo.exp + 32) <= 2^hi.exp, i.e. less than one unit of hi.
            return Mag::norm(hi.man as u128 + 1, hi.exp, true);
        }
        let sum = ((hi.man as u128) << d) + lo.man as u128;
        Mag::norm(sum, lo.exp, true)
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.man == 0 || other.man == 0 {
            return Mag::ZERO;
        }
        Mag::norm(
            self.man as u128 * other.man as u128,
            self.exp + other.exp,
            true,
        )
    }

    pub fn mul_u64(self, k: u64) -> Mag {
        self.mul(Mag::from_u64(k))
    }

    /// Upper bound for `self / other`; `other` must be nonzero.
    pub fn div(self, other: Mag) -> Mag {
        assert!(other.man != 0, "Mag division by zero");
        if self.man == 0 {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num / other.man as u128 + 1;
        Mag::norm(q, self.exp - other.exp - 64, true)
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.man == 0 {
            return self;
        }
        Mag {
            man: self.man,
            exp: self.exp + e,
        }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Upper bound for `self^n`.
    pub fn powi(self, n: u32) -> Mag {
        let mut acc = Mag::from_u64(1);
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.man == 0, other.man == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exp
                .cmp(&other.exp)
                .then_with(|| self.man.cmp(&other.man)),
        }
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mag({}*2^{})", self.man, self.exp)
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.to_dyadic();
        write!(f, "{}", super::decimal::format_upper(&d, 3))
    }
}
