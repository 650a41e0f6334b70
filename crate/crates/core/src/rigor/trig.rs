use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{pi, BallComplex, BallReal, Dyadic, Mag};

/// `(sin x, cos x)` for `|x| <= 1` by fixed-point Taylor series.
fn sin_cos_small(x: &BallReal, prec: u32) -> (BallReal, BallReal) {
    let w = prec as i64 + 32;
    let neg = x.mid().is_negative();
    let xm = x.mid().abs();
    // X = floor(|mid| * 2^w)
    let big_x: BigInt = if xm.exp() + w >= 0 {
        xm.man() << (xm.exp() + w) as usize
    } else {
        xm.man() >> (-(xm.exp() + w)) as usize
    };
    let one: BigInt = BigInt::one() << w as usize;
    assert!(big_x <= one, "sin_cos_small needs |x| <= 1");
    let mut sin = big_x.clone();
    let mut cos = one;
    let mut term = big_x.clone();
    let mut n: u64 = 1;
    loop {
        n += 1;
        term = ((&term * &big_x) >> w as usize) / n;
        if term.is_zero() {
            break;
        }
        let negative = (n / 2) % 2 == 1;
        let acc = if n % 2 == 0 { &mut cos } else { &mut sin };
        if negative {
            *acc -= &term;
        } else {
            *acc += &term;
        }
    }
    // per-term truncation error <= 4 units, first omitted term < 4 units,
    // plus the floor of the input
    let err = Mag::from_u64(4 * n + 8)
        .mul_2exp(-w)
        .add(x.rad());
    let sin = BallReal::new(Dyadic::new(sin, -w), err, prec);
    let cos = BallReal::new(Dyadic::new(cos, -w), err, prec);
    (if neg { -sin } else { sin }, cos)
}

/// `(sin x, cos x)` for a real ball (argument reduction by multiples of π/2).
pub fn sin_cos(x: &BallReal) -> (BallReal, BallReal) {
    let prec = x.prec();
    let approx = x.to_f64();
    assert!(approx.abs() < 1e15, "sin_cos argument too large");
    let q = (approx / std::f64::consts::FRAC_PI_2).round() as i64;
    let extra = 64 - q.unsigned_abs().leading_zeros() + 8;
    let half_pi = pi(prec + extra + 8).mul_2exp(-1);
    let y = x.with_prec(prec + extra + 8) - half_pi.mul_int(q);
    let (s, c) = sin_cos_small(&y, prec + 8);
    let (s, c) = match q.rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    (s.with_prec(prec), c.with_prec(prec))
}

/// `e(u) = exp(2πi u)` for exact `u` with `|u| <= 1/8`.
fn e_small(u: &BigRational, prec: u32) -> BallComplex {
    if u.is_zero() {
        return BallComplex::one(prec);
    }
    let w = prec + 16;
    let two_u = BallReal::from_rational(&(u * BigInt::from(2)), w);
    let x = pi(w) * two_u;
    let (s, c) = sin_cos_small(&x, w);
    BallComplex::new(c.with_prec(prec), s.with_prec(prec))
}

/// `exp(2πi t)` for an exact rational `t`; reduction mod 1 is exact.
pub fn exp_two_pi_i_rational(t: &BigRational, prec: u32) -> BallComplex {
    let num = t.numer();
    let den = t.denom();
    let v = num.mod_floor(den);
    // nearest quarter: q = round(4v/den)
    let four_v: BigInt = &v * 4;
    let twice: BigInt = &four_v * 2 + den;
    let q: BigInt = twice.div_floor(&(den * 2));
    let u = BigRational::new(four_v - &q * den, den * 4);
    let q = q.mod_floor(&BigInt::from(4)).to_i64().unwrap();
    e_small(&u, prec).mul_i_pow(q)
}

/// `exp(2πi num/den)` with machine-integer data.
pub fn e_frac(num: i64, den: i64, prec: u32) -> BallComplex {
    assert!(den != 0);
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let v = (num as i128).rem_euclid(den as i128);
    let q = (8 * v + den as i128).div_euclid(2 * den as i128);
    let unum = 4 * v - q * den as i128;
    if unum == 0 {
        return BallComplex::one(prec).mul_i_pow(q as i64);
    }
    let u = BigRational::new(BigInt::from(unum), BigInt::from(4 * den as i128));
    e_small(&u, prec).mul_i_pow(q as i64)
}

/// `exp(2πi t)` for a real ball `t`.
pub fn exp_two_pi_i(t: &BallReal) -> BallComplex {
    let prec = t.prec();
    let m = t.mid();
    // q = nearest integer to 4*mid
    let four = m.mul_2exp(2);
    let q = four.add(&Dyadic::new(BigInt::one(), -1)).floor();
    let u = t.sub_ref(&BallReal::new(Dyadic::new(q.clone(), -2), Mag::ZERO, prec + 64));
    let w = prec + 16;
    let x = pi(w) * u.with_prec(w).mul_2exp(1);
    let (s, c) = sin_cos_small(&x, w);
    let q = (q.mod_floor(&BigInt::from(4))).to_i64().unwrap();
    BallComplex::new(c.with_prec(prec), s.with_prec(prec)).mul_i_pow(q)
}
