use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rigor::BallReal;

/// A real number field `Q(θ)`: integer minimal polynomial `c0 + c1 x + …`
/// and a rational interval isolating the chosen real root θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldSpec {
    pub minpoly: Vec<BigInt>,
    pub root: (BigRational, BigRational),
}

/// Coordinates of a field element in the power basis `1, θ, θ², …`.
pub type FieldElem = Vec<BigRational>;

fn eval_exact(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

fn eval_ball(p: &[BigRational], x: &BallReal) -> BallReal {
    let prec = x.prec();
    let mut acc = BallReal::zero(prec);
    for c in p.iter().rev() {
        acc = acc * x + BallReal::from_rational(c, prec);
    }
    acc
}

impl NumberFieldSpec {
    /// `Q` itself, as `Q(θ)` with `θ = 0` the root of `x`.
    pub fn rational() -> NumberFieldSpec {
        NumberFieldSpec {
            minpoly: vec![BigInt::zero(), BigInt::one()],
            root: (-BigRational::one(), BigRational::one()),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len().saturating_sub(1)
    }

    /// Checks that the interval contains exactly one root: a sign change at
    /// the endpoints and a derivative enclosure excluding zero.
    pub fn validate(&self) -> Result<(), String> {
        if self.degree() == 0 || self.minpoly.last().is_some_and(|c| c.is_zero()) {
            return Err("minimal polynomial must have positive degree".into());
        }
        let (lo, hi) = &self.root;
        if lo >= hi {
            return Err("empty root interval".into());
        }
        let a = eval_exact(&self.minpoly, lo);
        let b = eval_exact(&self.minpoly, hi);
        if a.is_zero() || b.is_zero() || a.signum() == b.signum() {
            return Err("no sign change of the minimal polynomial on the root interval".into());
        }
        let deriv: Vec<BigRational> = self
            .minpoly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| BigRational::from_integer(c * BigInt::from(i)))
            .collect();
        let x = interval_ball(lo, hi, 128);
        if eval_ball(&deriv, &x).contains_zero() {
            return Err("derivative may vanish on the root interval".into());
        }
        Ok(())
    }

    /// Enclosure of θ with radius below `2^-prec`.
    pub fn theta(&self, prec: u32) -> BallReal {
        let (mut lo, mut hi) = self.root.clone();
        let sign_lo = eval_exact(&self.minpoly, &lo).signum();
        let target = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 2));
        while &hi - &lo > target {
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            let v = eval_exact(&self.minpoly, &mid);
            if v.is_zero() {
                return BallReal::from_rational(&mid, prec + 8);
            }
            if v.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        interval_ball(&lo, &hi, prec + 8)
    }

    /// Real embedding of an element given θ.
    pub fn embed_with(&self, theta: &BallReal, x: &[BigRational]) -> BallReal {
        if x.len() <= 1 {
            return x
                .first()
                .map(|c| BallReal::from_rational(c, theta.prec()))
                .unwrap_or_else(|| BallReal::zero(theta.prec()));
        }
        eval_ball(x, theta)
    }

    pub fn embed(&self, x: &[BigRational], prec: u32) -> BallReal {
        if x.len() <= 1 {
            return self.embed_with(&BallReal::zero(prec), x);
        }
        self.embed_with(&self.theta(prec + 16), x).with_prec(prec)
    }
}

/// Ball covering the rational interval `[lo, hi]`.
fn interval_ball(lo: &BigRational, hi: &BigRational, prec: u32) -> BallReal {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (lo + hi) / &two;
    let half = (hi - lo) / two;
    let m = BallReal::from_rational(&mid, prec);
    m.add_error(crate::rigor::decimal::mag_from_rational_up(&half))
}

/// `a + b` coordinatewise.
pub fn elem_add(a: &[BigRational], b: &[BigRational]) -> FieldElem {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect()
}

/// `s · a` for a rational scalar `s`.
pub fn elem_scale(a: &[BigRational], s: &BigRational) -> FieldElem {
    a.iter().map(|x| x * s).collect()
}

pub fn elem_is_zero(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn sqrt_two_field() {
        let f = NumberFieldSpec {
            minpoly: vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            root: (q(1, 1), q(2, 1)),
        };
        f.validate().unwrap();
        let t1 = f.theta(60);
        let t2 = f.theta(200);
        assert!(t2.rad() < t1.rad());
        assert!((t2.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        // 3 + 2θ
        let x = f.embed(&[q(3, 1), q(2, 1)], 128);
        assert!((x.to_f64() - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);
        let sq = &t2 * &t2;
        assert!(sq.contains_int(2));
    }

    #[test]
    fn rejects_bad_interval() {
        let f = NumberFieldSpec {
            minpoly: vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            root: (q(-2, 1), q(2, 1)),
        };
        assert!(f.validate().is_err());
        NumberFieldSpec::rational().validate().unwrap();
    }
}
