//! Decimal conversion for dyadic values and exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Dyadic, Mag};

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n as usize)
}

/// `floor(log10(|x|))` for nonzero rational `x`.
fn decimal_exponent(x: &BigRational) -> i64 {
    let ax = x.abs();
    let n = ax.numer();
    let d = ax.denom();
    let mut e = (n.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2;
    e = e.floor();
    let mut e = e as i64;
    loop {
        let lo = scale10(&BigRational::one(), e);
        let hi = scale10(&BigRational::one(), e + 1);
        if ax < lo {
            e -= 1;
        } else if ax >= hi {
            e += 1;
        } else {
            return e;
        }
    }
}

fn scale10(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        x * BigRational::from_integer(pow10(e as u32))
    } else {
        x / BigRational::from_integer(pow10((-e) as u32))
    }
}

/// Scientific-notation string of `x` truncated to `digits` significant digits,
/// together with an upper bound on the truncation error.
pub fn format_truncated(x: &BigRational, digits: u32) -> (String, BigRational) {
    if x.is_zero() {
        return ("0".to_string(), BigRational::zero());
    }
    let e = decimal_exponent(x);
    let shift = digits as i64 - 1 - e;
    let scaled = scale10(x, shift);
    let int = scaled.to_integer(); // truncates toward zero
    let err = scale10(&BigRational::one(), -shift);
    (sci_string(&int, digits, e), err)
}

fn sci_string(int: &BigInt, digits: u32, e: i64) -> String {
    let neg = int.is_negative();
    let mut s = int.abs().to_string();
    while s.len() < digits as usize {
        s.insert(0, '0');
    }
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if e != 0 {
        out.push_str(&format!("e{}", e));
    }
    out
}

/// Decimal string of a number `>= |x|` with `digits` significant digits.
pub fn format_upper_rational(x: &BigRational, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let ax = x.abs();
    let e = decimal_exponent(&ax);
    let shift = digits as i64 - 1 - e;
    let scaled = scale10(&ax, shift);
    let mut int = scaled.ceil().to_integer();
    let mut e = e;
    if int.to_string().len() > digits as usize {
        int = int.div_ceil(&BigInt::from(10));
        e += 1;
    }
    sci_string(&int, digits, e)
}

pub fn format_upper(d: &Dyadic, digits: u32) -> String {
    format_upper_rational(&d.to_rational(), digits)
}

/// Parse `"p/q"`, integers and decimal/scientific notation exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let mut v = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    v = scale10(&v, exp - frac_part.len() as i64);
    Some(if neg { -v } else { v })
}

/// Format a dyadic midpoint with enough digits for `prec` bits, returning the
/// string and a magnitude covering the decimal truncation.
pub fn format_dyadic_mid(d: &Dyadic, prec: u32) -> (String, Mag) {
    let digits = (prec as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 3;
    let (s, err) = format_truncated(&d.to_rational(), digits);
    (s, mag_from_rational_up(&err))
}

/// Upper bound `Mag` for `|x|`.
pub fn mag_from_rational_up(x: &BigRational) -> Mag {
    if x.is_zero() {
        return Mag::ZERO;
    }
    let ax = x.abs();
    // |x| <= (floor(n * 2^s / d) + 1) * 2^-s
    let s = 64 + ax.denom().bits() as i64 - ax.numer().bits() as i64;
    let s = s.max(0);
    let q = (ax.numer() << s as usize) / ax.denom() + BigInt::one();
    Mag::from_bigint_up(&q, -s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let r = |s| parse_rational(s).unwrap();
        assert_eq!(r("3/4"), BigRational::new(3.into(), 4.into()));
        assert_eq!(r("-1.25"), BigRational::new((-5).into(), 4.into()));
        assert_eq!(r("2.5e3"), BigRational::from_integer(2500.into()));
        assert_eq!(r("1e-2"), BigRational::new(1.into(), 100.into()));
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn truncation_bound_holds() {
        let x = BigRational::new(BigInt::from(22), BigInt::from(7));
        let (s, err) = format_truncated(&x, 6);
        assert_eq!(s, "3.14285");
        let back = parse_rational(&s).unwrap();
        assert!((x - back).abs() <= err);
    }

    #[test]
    fn upper_is_upper() {
        let x = BigRational::new(BigInt::from(1), BigInt::from(3));
        let s = format_upper_rational(&x, 2);
        assert_eq!(s, "3.4e-1");
        assert_eq!(format_upper_rational(&BigRational::from_integer(999.into()), 2), "1e3");
    }
}
