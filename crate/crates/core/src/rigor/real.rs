use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::decimal;
use super::{Dyadic, Mag, RigorError};

/// Midpoint-radius enclosure `[mid - rad, mid + rad]` of a real number.
///
/// `prec` is the working precision (mantissa bits) used for the midpoint of
/// results; binary operations use the larger precision of their operands.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BallReal {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

fn finish(mid: Dyadic, rad: Mag, prec: u32) -> BallReal {
    let (mid, err) = mid.round(prec);
    BallReal {
        mid,
        rad: rad.add(err),
        prec,
    }
}

impl BallReal {
    /// Ball around `mid`, rounding the midpoint to `prec` bits.
    pub fn new(mid: Dyadic, rad: Mag, prec: u32) -> BallReal {
        finish(mid, rad, prec)
    }

    pub fn zero(prec: u32) -> BallReal {
        BallReal {
            mid: Dyadic::zero(),
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn one(prec: u32) -> BallReal {
        BallReal::from_int(1, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> BallReal {
        finish(Dyadic::from_int(v), Mag::ZERO, prec)
    }

    /// Exact `f64` value (rounded to `prec` if it has more bits).
    pub fn from_f64(v: f64, prec: u32) -> BallReal {
        finish(Dyadic::from_f64(v).expect("finite f64"), Mag::ZERO, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> BallReal {
        let num = q.numer();
        let den = q.denom();
        if den.is_one() {
            return finish(Dyadic::new(num.clone(), 0), Mag::ZERO, prec);
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize).is_one() {
            return finish(Dyadic::new(num.clone(), -(tz as i64)), Mag::ZERO, prec);
        }
        // num / den = floor(num * 2^s / den) * 2^-s + [0, 2^-s)
        let s = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        let scaled = num << s as usize;
        let q = num_integer::Integer::div_floor(&scaled, den);
        finish(Dyadic::new(q, -s), Mag::pow2(-s), prec)
    }

    pub fn from_ratio_i64(num: i64, den: i64, prec: u32) -> BallReal {
        BallReal::from_rational(&BigRational::new(num.into(), den.into()), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Same enclosure with the working precision changed (midpoint re-rounded).
    pub fn with_prec(&self, prec: u32) -> BallReal {
        finish(self.mid.clone(), self.rad, prec)
    }

    /// Inflate the radius by `err`.
    pub fn add_error(&self, err: Mag) -> BallReal {
        BallReal {
            mid: self.mid.clone(),
            rad: self.rad.add(err),
            prec: self.prec,
        }
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad.to_dyadic())
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad.to_dyadic())
    }

    pub fn contains_zero(&self) -> bool {
        Mag::from_dyadic_up(&self.mid) <= self.rad && self.mid.abs() <= self.rad.to_dyadic()
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        self.mid.sub(x).abs() <= self.rad.to_dyadic()
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        (self.mid.to_rational() - x).abs() <= self.rad.to_dyadic().to_rational()
    }

    pub fn contains_int<T: Into<BigInt>>(&self, x: T) -> bool {
        self.contains_dyadic(&Dyadic::from_int(x))
    }

    /// `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &BallReal) -> bool {
        let d = self.mid.sub(&other.mid).abs().add(&other.rad.to_dyadic());
        d <= self.rad.to_dyadic()
    }

    /// The two enclosures have a common point.
    pub fn overlaps(&self, other: &BallReal) -> bool {
        let d = self.mid.sub(&other.mid).abs();
        d <= self.rad.to_dyadic().add(&other.rad.to_dyadic())
    }

    pub fn is_positive(&self) -> bool {
        self.lower().signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper().signum() < 0
    }

    /// Upper bound for `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_dyadic_up(&self.mid).add(self.rad)
    }

    /// Lower bound for `|x|` over the ball (zero if the ball contains 0).
    pub fn abs_lower(&self) -> Mag {
        let d = self.mid.abs().sub(&self.rad.to_dyadic());
        if d.signum() <= 0 {
            Mag::ZERO
        } else {
            Mag::from_dyadic_down(&d)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Relative radius `rad / |mid|` (infinite when mid is zero).
    pub fn rel_width(&self) -> f64 {
        if self.mid.is_zero() {
            return f64::INFINITY;
        }
        (self.rad.log2() - Mag::from_dyadic_down(&self.mid).log2()).exp2()
    }

    pub fn abs(&self) -> BallReal {
        if self.mid.is_negative() {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    fn neg_ref(&self) -> BallReal {
        BallReal {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn add_ref(&self, other: &BallReal) -> BallReal {
        let prec = self.prec.max(other.prec);
        if other.mid.is_zero() {
            return finish(self.mid.clone(), self.rad.add(other.rad), prec);
        }
        if self.mid.is_zero() {
            return finish(other.mid.clone(), self.rad.add(other.rad), prec);
        }
        // A midpoint far below the other's precision is absorbed into the radius.
        let gap = prec as i64 + 64;
        let (ta, tb) = (self.mid.top_bit(), other.mid.top_bit());
        if tb < ta - gap && other.mid.exp() < self.mid.exp() {
            let rad = self.rad.add(other.rad).add(Mag::from_dyadic_up(&other.mid));
            return finish(self.mid.clone(), rad, prec);
        }
        if ta < tb - gap && self.mid.exp() < other.mid.exp() {
            let rad = self.rad.add(other.rad).add(Mag::from_dyadic_up(&self.mid));
            return finish(other.mid.clone(), rad, prec);
        }
        finish(self.mid.add(&other.mid), self.rad.add(other.rad), prec)
    }

    pub fn sub_ref(&self, other: &BallReal) -> BallReal {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &BallReal) -> BallReal {
        let prec = self.prec.max(other.prec);
        let mut mid = self.mid.mul(&other.mid);
        let mut rad = Mag::ZERO;
        if !other.rad.is_zero() {
            rad = rad.add(Mag::from_dyadic_up(&self.mid).mul(other.rad));
        }
        if !self.rad.is_zero() {
            rad = rad.add(Mag::from_dyadic_up(&other.mid).mul(self.rad));
            if !other.rad.is_zero() {
                let rr = self.rad.mul(other.rad);
                if self.contains_zero() || other.contains_zero() {
                    rad = rad.add(rr);
                } else {
                    // endpoints of a product of sign-definite intervals:
                    // shifting the midpoint by ±r1·r2 makes the enclosure tight
                    let shift = rr.to_dyadic();
                    mid = if mid.is_negative() {
                        mid.sub(&shift)
                    } else {
                        mid.add(&shift)
                    };
                }
            }
        }
        finish(mid, rad, prec)
    }

    pub fn sqr(&self) -> BallReal {
        self.mul_ref(self)
    }

    pub fn mul_int(&self, k: i64) -> BallReal {
        let mid = self.mid.mul(&Dyadic::from_int(k));
        let rad = self.rad.mul(Mag::from_u64(k.unsigned_abs()));
        finish(mid, rad, self.prec)
    }

    pub fn mul_2exp(&self, e: i64) -> BallReal {
        BallReal {
            mid: self.mid.mul_2exp(e),
            rad: self.rad.mul_2exp(e),
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, q: &BigRational) -> BallReal {
        self.mul_ref(&BallReal::from_rational(q, self.prec + 8))
            .with_prec(self.prec)
    }

    pub fn div_int(&self, k: i64) -> BallReal {
        assert!(k != 0, "division by zero integer");
        self.div(&BallReal::from_int(k, self.prec))
            .expect("nonzero integer divisor")
    }

    /// `self / other`; fails when the divisor ball contains zero.
    pub fn div(&self, other: &BallReal) -> Result<BallReal, RigorError> {
        let prec = self.prec.max(other.prec);
        let den_low = other.mid.abs().sub(&other.rad.to_dyadic());
        if den_low.signum() <= 0 {
            return Err(RigorError::DivisorContainsZero);
        }
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(BallReal::zero(prec));
        }
        let (q, qerr) = if self.mid.is_zero() {
            (Dyadic::zero(), Mag::ZERO)
        } else {
            let an = self.mid.man();
            let bn = other.mid.man();
            let s = (prec as i64 + 4 + bn.bits() as i64 - an.bits() as i64).max(0);
            let num: BigInt = an << s as usize;
            let qm = &num / bn; // truncation toward zero
            let e = self.mid.exp() - other.mid.exp() - s;
            (Dyadic::new(qm, e), Mag::pow2(e))
        };
        let mut rad = qerr;
        if !self.rad.is_zero() || !other.rad.is_zero() {
            let qabs = Mag::from_dyadic_up(&q).add(qerr);
            let num = self.rad.add(qabs.mul(other.rad));
            rad = rad.add(num.div(Mag::from_dyadic_down(&den_low)));
        }
        Ok(finish(q, rad, prec))
    }

    pub fn inv(&self) -> Result<BallReal, RigorError> {
        BallReal::one(self.prec).div(self)
    }

    /// Square root; the ball must lie in `[0, inf)`.
    pub fn sqrt(&self) -> Result<BallReal, RigorError> {
        if self.lower().signum() < 0 {
            return Err(RigorError::SqrtOfNegative);
        }
        let prec = self.prec;
        if self.mid.is_zero() {
            return Ok(BallReal::zero(prec));
        }
        let man = self.mid.man();
        let mut exp = self.mid.exp();
        let want = 2 * (prec as i64 + 4);
        let mut shift = (want - man.bits() as i64).max(0);
        if (exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled: BigInt = man << shift as usize;
        exp -= shift;
        let root = scaled.sqrt();
        let rexp = exp / 2;
        let s = Dyadic::new(root.clone(), rexp);
        let mut rad = Mag::pow2(rexp);
        if !self.rad.is_zero() {
            // |sqrt(x) - sqrt(m)| <= |x - m| / sqrt(m)
            rad = rad.add(self.rad.div(Mag::from_bigint_down(&root, rexp)));
        }
        Ok(finish(s, rad, prec))
    }

    pub fn powi(&self, n: u32) -> BallReal {
        let mut acc = BallReal::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Decimal serialization `(mid, rad)`; the radius string covers the
    /// midpoint's decimal truncation.
    pub fn to_decimal_parts(&self) -> (String, String) {
        let (m, err) = decimal::format_dyadic_mid(&self.mid, self.prec);
        let rad = self.rad.add(err);
        let r = if rad.is_zero() {
            "0".to_string()
        } else {
            decimal::format_upper(&rad.to_dyadic(), 3)
        };
        (m, r)
    }

    pub fn from_decimal_parts(mid: &str, rad: &str, prec: u32) -> Option<BallReal> {
        let m = decimal::parse_rational(mid)?;
        let r = decimal::parse_rational(rad)?;
        if r.is_negative() {
            return None;
        }
        let ball = BallReal::from_rational(&m, prec);
        Some(ball.add_error(decimal::mag_from_rational_up(&r)))
    }

    /// `"mid ± rad"`.
    pub fn to_decimal_string(&self) -> String {
        let (m, r) = self.to_decimal_parts();
        format!("{} ± {}", m, r)
    }

    pub fn parse_decimal_string(s: &str, prec: u32) -> Option<BallReal> {
        match s.split_once('±') {
            Some((m, r)) => BallReal::from_decimal_parts(m.trim(), r.trim(), prec),
            None => BallReal::from_decimal_parts(s.trim(), "0", prec),
        }
    }

    /// Short human-readable form with `digits` significant digits.
    pub fn display(&self, digits: u32) -> String {
        let (m, _) = decimal::format_truncated(&self.mid.to_rational(), digits);
        if self.rad.is_zero() {
            m
        } else {
            format!("{} ± {}", m, self.rad)
        }
    }
}

impl fmt::Debug for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.display(20))
    }
}

impl fmt::Display for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(15))
    }
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&BallReal> for &BallReal {
            type Output = BallReal;
            fn $m(self, rhs: &BallReal) -> BallReal {
                self.$inner(rhs)
            }
        }
        impl $tr<BallReal> for BallReal {
            type Output = BallReal;
            fn $m(self, rhs: BallReal) -> BallReal {
                self.$inner(&rhs)
            }
        }
        impl $tr<&BallReal> for BallReal {
            type Output = BallReal;
            fn $m(self, rhs: &BallReal) -> BallReal {
                self.$inner(rhs)
            }
        }
        impl $tr<BallReal> for &BallReal {
            type Output = BallReal;
            fn $m(self, rhs: BallReal) -> BallReal {
                self.$inner(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, add_ref);
impl_binop!(Sub, sub, sub_ref);
impl_binop!(Mul, mul, mul_ref);

impl Neg for BallReal {
    type Output = BallReal;
    fn neg(self) -> BallReal {
        self.neg_ref()
    }
}

impl Neg for &BallReal {
    type Output = BallReal;
    fn neg(self) -> BallReal {
        self.neg_ref()
    }
}
