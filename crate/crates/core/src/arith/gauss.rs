use std::collections::BTreeMap;

use super::{kronecker, ArithError, Rational, RootOfUnityExact};
use crate::rigor::{e_frac, BallComplex, BallReal};

/// `(1/√ã) Σ_{x mod ã} e(r x²)` with `ã = a / gcd(2, a)`, by direct summation.
pub fn gauss_sum_oracle(r: &Rational, prec: u32) -> Result<BallComplex, ArithError> {
    let b = *r.numer();
    let a = *r.denom();
    if a.trailing_zeros() == 1 {
        return Err(ArithError::HypothesisViolated(a));
    }
    let at = if a % 2 == 0 { a / 2 } else { a };
    // group equal phases b x² mod a before evaluating exponentials
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for x in 0..at {
        let j = ((b as i128 * (x as i128 * x as i128)).rem_euclid(a as i128)) as i64;
        *counts.entry(j).or_insert(0) += 1;
    }
    let wp = prec + 16;
    let mut acc = BallComplex::zero(wp);
    for (j, n) in counts {
        acc = &acc + &e_frac(j, a, wp).mul_int(n);
    }
    let s = BallReal::from_int(at, wp).sqrt().expect("positive");
    let re = acc.re.div(&s).expect("nonzero");
    let im = acc.im.div(&s).expect("nonzero");
    Ok(BallComplex::new(re, im).with_prec(prec))
}

/// `Σ_{x mod a} e_a(b x²)` exactly, as `(radicand, root)` meaning
/// `√radicand · root`, for `a` odd or `a = 2^n` with `n >= 2`.
pub fn standard_gauss_sum(b: i64, a: i64) -> Result<(Rational, RootOfUnityExact), ArithError> {
    if a < 1 {
        return Err(ArithError::UnsupportedModulus(a));
    }
    assert_eq!(super::gcd(a, b), 1, "gcd(a, b) must be 1");
    if a % 2 == 1 {
        let leg = kronecker(b, a)?;
        let mut root = if a % 4 == 1 {
            RootOfUnityExact::ONE
        } else {
            RootOfUnityExact::new(4, 1)
        };
        if leg == -1 {
            root = root * RootOfUnityExact::new(2, 1);
        }
        return Ok((Rational::from_integer(a), root));
    }
    if a.count_ones() == 1 && a >= 4 {
        let leg = kronecker(b, 2 * a)?;
        let mut root = RootOfUnityExact::e8(b);
        if leg == -1 {
            root = root * RootOfUnityExact::new(2, 1);
        }
        return Ok((Rational::from_integer(2 * a), root));
    }
    Err(ArithError::UnsupportedModulus(a))
}
