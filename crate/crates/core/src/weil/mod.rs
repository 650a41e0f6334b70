//! Matrix elements of the Weil representation of the metaplectic double
//! cover of SL2(Z) on C[(1/2N)Z/Z], for the lattice (Z, (x,y) -> 2Nxy).
//!
//! Entries are exact: `√radicand · ζ` with a rational radicand and an exact
//! root of unity ζ. [`weil_oracle`] recomputes them independently from the
//! generators S and T.

mod oracle;

pub use oracle::{weil_oracle, OracleError};

use std::fmt;
use std::ops::Mul;

use serde_json::{json, Value};

use crate::arith::{gcd, inv_mod, signature, v2, Rational, RootOfUnityExact};
use crate::rigor::{BallComplex, BallReal};

/// Element `(a b; c d)` of SL2(Z).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SL2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Z {
    pub const IDENTITY: SL2Z = SL2Z { a: 1, b: 0, c: 0, d: 1 };
    pub const NEG_IDENTITY: SL2Z = SL2Z { a: -1, b: 0, c: 0, d: -1 };
    pub const S: SL2Z = SL2Z { a: 0, b: -1, c: 1, d: 0 };
    pub const T: SL2Z = SL2Z { a: 1, b: 1, c: 0, d: 1 };

    /// `None` unless `ad - bc = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<SL2Z> {
        if a as i128 * d as i128 - b as i128 * c as i128 == 1 {
            Some(SL2Z { a, b, c, d })
        } else {
            None
        }
    }

    /// Complete a coprime bottom row `(c, d)` to a matrix, with `a` the
    /// least nonnegative inverse of `d` modulo `|c|` when `c != 0`.
    pub fn complete_bottom_row(c: i64, d: i64) -> Option<SL2Z> {
        if gcd(c, d) != 1 {
            return None;
        }
        if c == 0 {
            return SL2Z::new(d, 0, 0, d);
        }
        let m = c.abs();
        let a = if m == 1 { 0 } else { inv_mod(d, m) };
        // ad - bc = 1  =>  b = (ad - 1)/c
        let num = a as i128 * d as i128 - 1;
        debug_assert!(num % c as i128 == 0);
        let b = (num / c as i128) as i64;
        SL2Z::new(a, b, c, d)
    }

    pub fn inverse(&self) -> SL2Z {
        SL2Z {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn neg(&self) -> SL2Z {
        SL2Z {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Mul for SL2Z {
    type Output = SL2Z;
    fn mul(self, o: SL2Z) -> SL2Z {
        SL2Z {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Display for SL2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Exact matrix element: zero, or `√radicand · root`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WeilEntry {
    pub radicand: Rational,
    pub root: RootOfUnityExact,
    pub zero_flag: bool,
}

impl WeilEntry {
    pub const ZERO: WeilEntry = WeilEntry {
        radicand: Rational::new_raw(0, 1),
        root: RootOfUnityExact::ONE,
        zero_flag: true,
    };

    pub fn is_zero(&self) -> bool {
        self.zero_flag
    }

    pub fn to_ball(&self, prec: u32) -> BallComplex {
        if self.zero_flag {
            return BallComplex::zero(prec);
        }
        let wp = prec + 8;
        let r = BallReal::from_ratio_i64(*self.radicand.numer(), *self.radicand.denom(), wp)
            .sqrt()
            .expect("nonnegative radicand");
        self.root.to_ball(wp).mul_real(&r).with_prec(prec)
    }

    pub fn to_json(&self) -> Value {
        if self.zero_flag {
            return Value::Null;
        }
        json!({
            "radicand": format!("{}/{}", self.radicand.numer(), self.radicand.denom()),
            "order": self.root.order(),
            "exponent": self.root.exponent(),
        })
    }
}

/// `N` if `c/2N` is a 2-adic unit (`v2(c) = v2(2N)`), else 0.
pub fn z_c(c: i64, n: i64) -> i64 {
    match v2(c) {
        Some(v) if Some(v) == v2(2 * n) => n,
        _ => 0,
    }
}

/// The eighth root of unity `χ(A)` of the closed formula.
pub fn chi(m: &SL2Z, n: i64) -> RootOfUnityExact {
    chi_with(m, n, signature)
}

/// `χ(A)` with a replaceable signature function (used for fault injection).
pub fn chi_with(m: &SL2Z, n: i64, sig: fn(&Rational) -> u8) -> RootOfUnityExact {
    if m.c == 0 {
        return if m.d > 0 {
            RootOfUnityExact::ONE
        } else {
            RootOfUnityExact::e8(-2)
        };
    }
    let s = if z_c(m.c, n) != 0 {
        sig(&Rational::new(m.a * n, 2 * m.c))
    } else {
        sig(&Rational::new(2 * m.a * n, m.c))
    };
    RootOfUnityExact::e8(s as i64 - m.c.signum())
}

/// Exact `ρ(A*)_{x, x'}` (row `x`, column `x'`, both mod 2N).
pub fn weil_entry(m: &SL2Z, x: i64, xp: i64, n: i64) -> WeilEntry {
    weil_entry_with(m, x, xp, n, signature)
}

pub fn weil_entry_with(
    m: &SL2Z,
    x: i64,
    xp: i64,
    n: i64,
    sig: fn(&Rational) -> u8,
) -> WeilEntry {
    let two_n = 2 * n;
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    let z = z_c(m.c, n) as i128;
    let (x, xp) = (x as i128, xp as i128);
    // solve c y ≡ x' - a x - z (mod 2N)
    let rhs = (xp - a * x - z).rem_euclid(two_n as i128) as i64;
    let g = gcd(m.c, two_n);
    if rhs % g != 0 {
        return WeilEntry::ZERO;
    }
    let modulus = two_n / g;
    let y = if modulus == 1 {
        0
    } else {
        ((rhs / g) as i128 * inv_mod(m.c / g, modulus) as i128).rem_euclid(modulus as i128)
    };
    let phase = a * b * x * x + 2 * b * c * x * y + c * d * y * y + 2 * z * (b * x + d * y)
        + a * b * z * z;
    let four_n = 4 * n as i128;
    let root = chi_with(m, n, sig)
        * RootOfUnityExact::new(4 * n as u64, phase.rem_euclid(four_n) as i64);
    WeilEntry {
        radicand: Rational::new(g, two_n),
        root,
        zero_flag: false,
    }
}

/// All entries `ρ(A*)_{x,x'}`, indexed `[x][x']`.
pub fn weil_matrix(m: &SL2Z, n: i64) -> Vec<Vec<WeilEntry>> {
    (0..2 * n)
        .map(|x| (0..2 * n).map(|xp| weil_entry(m, x, xp, n)).collect())
        .collect()
}

pub fn weil_matrix_ball(m: &SL2Z, n: i64, prec: u32) -> Vec<Vec<BallComplex>> {
    weil_matrix(m, n)
        .iter()
        .map(|row| row.iter().map(|e| e.to_ball(prec)).collect())
        .collect()
}

/// Debug dump of a matrix as JSON (`null` for zero entries).
pub fn weil_matrix_json(m: &SL2Z, n: i64) -> Value {
    let rows: Vec<Value> = weil_matrix(m, n)
        .iter()
        .map(|row| Value::Array(row.iter().map(|e| e.to_json()).collect()))
        .collect();
    json!({
        "matrix": [m.a, m.b, m.c, m.d],
        "N": n,
        "entries": rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_c_examples() {
        assert_eq!(z_c(2, 1), 1);
        assert_eq!(z_c(1, 1), 0);
        assert_eq!(z_c(0, 3), 0);
        assert_eq!(z_c(-6, 3), 3);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&SL2Z::IDENTITY, 3), RootOfUnityExact::ONE);
        for n in 1..6 {
            assert_eq!(chi(&SL2Z::S, n), RootOfUnityExact::e8(-1));
        }
        assert_eq!(chi(&SL2Z::NEG_IDENTITY, 2), RootOfUnityExact::e8(-2));
    }

    #[test]
    fn generator_t() {
        for n in 1..5i64 {
            let m = weil_matrix(&SL2Z::T, n);
            for x in 0..2 * n {
                for xp in 0..2 * n {
                    let e = m[x as usize][xp as usize];
                    if x == xp {
                        assert_eq!(e.radicand, Rational::from_integer(1));
                        assert_eq!(e.root, RootOfUnityExact::new(4 * n as u64, x * x));
                    } else {
                        assert!(e.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn generator_s() {
        for n in 1..5i64 {
            let m = weil_matrix(&SL2Z::S, n);
            for x in 0..2 * n {
                for xp in 0..2 * n {
                    let e = m[x as usize][xp as usize];
                    assert_eq!(e.radicand, Rational::new(1, 2 * n));
                    let expect = RootOfUnityExact::e8(-1)
                        * RootOfUnityExact::new(2 * n as u64, -x * xp);
                    assert_eq!(e.root, expect);
                }
            }
        }
    }

    #[test]
    fn negative_identity_is_reflection() {
        let m = weil_matrix(&SL2Z::NEG_IDENTITY, 2);
        for x in 0..4i64 {
            for xp in 0..4i64 {
                let e = m[x as usize][xp as usize];
                if (x + xp) % 4 == 0 {
                    assert_eq!(e.root, RootOfUnityExact::e8(-2));
                } else {
                    assert!(e.is_zero());
                }
            }
        }
    }

    #[test]
    fn completion() {
        let m = SL2Z::complete_bottom_row(1, 0).unwrap();
        assert_eq!(m, SL2Z { a: 0, b: -1, c: 1, d: 0 });
        let m = SL2Z::complete_bottom_row(7, 3).unwrap();
        assert_eq!((m.a * 3 - m.b * 7), 1);
        assert_eq!(m.a, 5);
        let m = SL2Z::complete_bottom_row(-5, 2).unwrap();
        assert_eq!(m.a * 2 - m.b * -5, 1);
        assert!(SL2Z::complete_bottom_row(4, 2).is_none());
    }
}
