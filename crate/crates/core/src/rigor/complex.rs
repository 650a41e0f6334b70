use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::{BallReal, Mag, RigorError};

/// Rectangular complex ball: independent real and imaginary enclosures.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BallComplex {
    pub re: BallReal,
    pub im: BallReal,
}

impl BallComplex {
    pub fn new(re: BallReal, im: BallReal) -> BallComplex {
        BallComplex { re, im }
    }

    pub fn from_real(re: BallReal) -> BallComplex {
        let prec = re.prec();
        BallComplex {
            re,
            im: BallReal::zero(prec),
        }
    }

    pub fn zero(prec: u32) -> BallComplex {
        BallComplex::from_real(BallReal::zero(prec))
    }

    pub fn one(prec: u32) -> BallComplex {
        BallComplex::from_real(BallReal::one(prec))
    }

    pub fn i(prec: u32) -> BallComplex {
        BallComplex::new(BallReal::zero(prec), BallReal::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> BallComplex {
        BallComplex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    /// Inflate both components by `err`.
    pub fn add_error(&self, err: Mag) -> BallComplex {
        BallComplex::new(self.re.add_error(err), self.im.add_error(err))
    }

    pub fn conj(&self) -> BallComplex {
        BallComplex::new(self.re.clone(), -&self.im)
    }

    pub fn mul_real(&self, x: &BallReal) -> BallComplex {
        BallComplex::new(&self.re * x, &self.im * x)
    }

    pub fn mul_int(&self, k: i64) -> BallComplex {
        BallComplex::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn mul_2exp(&self, e: i64) -> BallComplex {
        BallComplex::new(self.re.mul_2exp(e), self.im.mul_2exp(e))
    }

    /// Multiply by `i^q`.
    pub fn mul_i_pow(&self, q: i64) -> BallComplex {
        match q.rem_euclid(4) {
            0 => self.clone(),
            1 => BallComplex::new(-&self.im, self.re.clone()),
            2 => -self,
            _ => BallComplex::new(self.im.clone(), -&self.re),
        }
    }

    pub fn norm_sqr(&self) -> BallReal {
        self.re.sqr() + self.im.sqr()
    }

    /// Upper bound for `|z|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        let r = self.re.abs_upper();
        let i = self.im.abs_upper();
        // sqrt(r^2 + i^2) <= max + min/2 * (min/max) <= r + i; use the cheaper
        // bound unless one component dominates.
        if r.is_zero() {
            return i;
        }
        if i.is_zero() {
            return r;
        }
        let s = BallReal::new(r.mul(r).add(i.mul(i)).to_dyadic(), Mag::ZERO, 64);
        match s.sqrt() {
            Ok(b) => b.abs_upper(),
            Err(_) => r.add(i),
        }
    }

    /// Principal square root (branch cut on the negative real axis, where
    /// `√(-x) = i√x`). The ball must not straddle the cut.
    pub fn sqrt(&self) -> Result<BallComplex, RigorError> {
        let prec = self.prec();
        if self.im.is_exact() && self.im.mid().is_zero() {
            if self.re.lower().signum() >= 0 {
                return Ok(BallComplex::from_real(self.re.sqrt()?));
            }
            if self.re.upper().signum() < 0 {
                return Ok(BallComplex::new(BallReal::zero(prec), (-&self.re).sqrt()?));
            }
            return Err(RigorError::SqrtOfNegative);
        }
        let r = self.norm_sqr().sqrt()?;
        if self.re.is_positive() || (self.re.lower().signum() >= 0 && !self.im.contains_zero()) {
            let re = (&r + &self.re).mul_2exp(-1).sqrt()?;
            let im = self.im.div(&re.mul_2exp(1))?;
            return Ok(BallComplex::new(re, im));
        }
        if self.im.contains_zero() {
            return Err(RigorError::SqrtOfNegative);
        }
        let mut im = (&r - &self.re).mul_2exp(-1).sqrt()?;
        if self.im.is_negative() {
            im = -im;
        }
        let re = self.im.div(&im.mul_2exp(1))?;
        Ok(BallComplex::new(re, im))
    }

    pub fn div(&self, other: &BallComplex) -> Result<BallComplex, RigorError> {
        let d = other.norm_sqr();
        let num = self * &other.conj();
        Ok(BallComplex::new(num.re.div(&d)?, num.im.div(&d)?))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_rational(&self, re: &BigRational, im: &BigRational) -> bool {
        self.re.contains_rational(re) && self.im.contains_rational(im)
    }

    /// `other` lies componentwise inside `self`.
    pub fn contains_ball(&self, other: &BallComplex) -> bool {
        self.re.contains_ball(&other.re) && self.im.contains_ball(&other.im)
    }

    pub fn overlaps(&self, other: &BallComplex) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    /// Largest component radius.
    pub fn rad(&self) -> Mag {
        self.re.rad().max(self.im.rad())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BallComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for BallComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl Add<&BallComplex> for &BallComplex {
    type Output = BallComplex;
    fn add(self, o: &BallComplex) -> BallComplex {
        BallComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Add for BallComplex {
    type Output = BallComplex;
    fn add(self, o: BallComplex) -> BallComplex {
        &self + &o
    }
}

impl Sub<&BallComplex> for &BallComplex {
    type Output = BallComplex;
    fn sub(self, o: &BallComplex) -> BallComplex {
        BallComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Sub for BallComplex {
    type Output = BallComplex;
    fn sub(self, o: BallComplex) -> BallComplex {
        &self - &o
    }
}

impl Mul<&BallComplex> for &BallComplex {
    type Output = BallComplex;
    fn mul(self, o: &BallComplex) -> BallComplex {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        BallComplex::new(re, im)
    }
}

impl Mul for BallComplex {
    type Output = BallComplex;
    fn mul(self, o: BallComplex) -> BallComplex {
        &self * &o
    }
}

impl Neg for &BallComplex {
    type Output = BallComplex;
    fn neg(self) -> BallComplex {
        BallComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for BallComplex {
    type Output = BallComplex;
    fn neg(self) -> BallComplex {
        -&self
    }
}
