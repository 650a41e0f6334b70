use std::cell::RefCell;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{BallReal, Dyadic, Mag};

static PI_CACHE: Mutex<Option<BallReal>> = Mutex::new(None);

thread_local! {
    static PI_LOCAL: RefCell<Option<BallReal>> = const { RefCell::new(None) };
}

/// `atan(1/x) * 2^w` in fixed point, with an error bound in units of `2^-w`.
fn atan_inv_fixed(x: u32, w: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x as u64 * x as u64);
    let mut power: BigInt = (BigInt::one() << w as usize) / x;
    let mut sum = BigInt::from(0);
    let mut k: u64 = 0;
    loop {
        let term = &power / (2 * k + 1);
        if term.bits() == 0 {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    // each power carries < 2 units of error, each quotient < 1 more; the
    // alternating tail after the first vanishing term is < 1 unit
    (sum, 3 * k + 2)
}

fn compute_pi(prec: u32) -> BallReal {
    let w = prec as u64 + 32;
    let (a, ea) = atan_inv_fixed(5, w);
    let (b, eb) = atan_inv_fixed(239, w);
    let mid = a * 16 - b * 4;
    let err = Mag::from_u64(16 * ea + 4 * eb).mul_2exp(-(w as i64));
    BallReal::new(Dyadic::new(mid, -(w as i64)), err, prec)
}

/// Enclosure of π at `prec` bits (cached at the largest precision requested).
pub fn pi(prec: u32) -> BallReal {
    let local = PI_LOCAL.with(|c| {
        c.borrow()
            .as_ref()
            .filter(|p| p.prec() >= prec)
            .map(|p| p.with_prec(prec))
    });
    if let Some(p) = local {
        return p;
    }
    let out = pi_shared(prec);
    PI_LOCAL.with(|c| *c.borrow_mut() = Some(pi_shared(prec.max(256) + 32)));
    out
}

fn pi_shared(prec: u32) -> BallReal {
    let mut cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = cache.as_ref() {
        if c.prec() >= prec {
            return c.with_prec(prec);
        }
    }
    let fresh = compute_pi(prec.max(256) + 32);
    let out = fresh.with_prec(prec);
    *cache = Some(fresh);
    out
}

pub fn sqrt_pi(prec: u32) -> BallReal {
    pi(prec + 8).sqrt().expect("pi is positive").with_prec(prec)
}

/// `Γ(m + 1/2) = (2m)! √π / (4^m m!)`.
pub fn gamma_half(m: u32, prec: u32) -> BallReal {
    let mut num = BigInt::one();
    for j in (m + 1)..=(2 * m) {
        num *= j;
    }
    // (2m)!/m! / 4^m
    let q = BigRational::new(num, BigInt::one() << (2 * m as usize));
    let g = BallReal::from_rational(&q, prec + 16);
    (g * sqrt_pi(prec + 16)).with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(256);
        assert!(p.rad().log2() < -250.0);
        // 3.14159265358979323846264338327950288 truncated
        let lo = BigRational::new(
            "314159265358979323846264338327950288".parse().unwrap(),
            "100000000000000000000000000000000000".parse().unwrap(),
        );
        let hi = &lo + BigRational::new(BigInt::one(), BigInt::from(10).pow(35));
        assert!(p.lower().to_rational() < hi);
        assert!(p.upper().to_rational() > lo);
    }

    #[test]
    fn gamma_half_small() {
        let g0 = gamma_half(0, 128);
        let s = sqrt_pi(128);
        assert!(g0.overlaps(&s));
        let g1 = gamma_half(1, 128);
        assert!(g1.mul_int(2).overlaps(&s));
        // Γ(5/2) = 3√π/4
        let g2 = gamma_half(2, 128).mul_int(4);
        assert!(g2.overlaps(&s.mul_int(3)));
    }

    #[test]
    fn cached_lower_precision_is_consistent() {
        let a = pi(512);
        let b = pi(100);
        assert!(a.overlaps(&b));
        assert!(b.rad().log2() <= -96.0);
    }
}
