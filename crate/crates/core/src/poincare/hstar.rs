use crate::arith::gcd;
use crate::rigor::{e_frac, BallComplex, BallReal};
use crate::weil::{weil_entry, SL2Z};

/// `H*_c = e_8(-sgn(c)(2k-1))/|c| · Σ_{d mod |c|, (c,d)=1} ρ(A*)_{r,r'} e(-(Δa + Δ'd)/(4Nc))`,
/// where `A = (a b; c d)` completes the bottom row.
#[allow(clippy::too_many_arguments)]
pub fn hstar(c: i64, r: i64, delta: i64, rp: i64, delta_p: i64, n: i64, k: i64, prec: u32) -> BallComplex {
    hstar_counted(c, r, delta, rp, delta_p, n, k, prec).0
}

/// [`hstar`] with every completion `(a b; c d)` replaced by
/// `(a + tc, b + td; c, d)`; the value must not change.
#[allow(clippy::too_many_arguments)]
pub fn hstar_with_completion(
    c: i64,
    r: i64,
    delta: i64,
    rp: i64,
    delta_p: i64,
    n: i64,
    k: i64,
    t: i64,
    prec: u32,
) -> BallComplex {
    hstar_impl(c, r, delta, rp, delta_p, n, k, prec, |m| SL2Z {
        a: m.a + t * m.c,
        b: m.b + t * m.d,
        c: m.c,
        d: m.d,
    })
    .0
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn hstar_counted(
    c: i64,
    r: i64,
    delta: i64,
    rp: i64,
    delta_p: i64,
    n: i64,
    k: i64,
    prec: u32,
) -> (BallComplex, u64) {
    hstar_impl(c, r, delta, rp, delta_p, n, k, prec, |m| m)
}

#[allow(clippy::too_many_arguments)]
fn hstar_impl(
    c: i64,
    r: i64,
    delta: i64,
    rp: i64,
    delta_p: i64,
    n: i64,
    k: i64,
    prec: u32,
    completion: impl Fn(SL2Z) -> SL2Z,
) -> (BallComplex, u64) {
    assert!(c != 0);
    let cabs = c.abs();
    let two_n = 2 * n;
    // every phase below is a multiple of 1/L
    let l = 8 * n * cabs;
    let global = (-c.signum() * (2 * k - 1) * n * cabs).rem_euclid(l);
    let (x, xp) = (r.rem_euclid(two_n), rp.rem_euclid(two_n));
    let mut counts = vec![0u32; l as usize];
    let mut terms = 0u64;
    for d in 0..cabs {
        if gcd(c, d) != 1 {
            continue;
        }
        let m = completion(SL2Z::complete_bottom_row(c, d).expect("coprime"));
        terms += 1;
        let e = weil_entry(&m, x, xp, n);
        if e.is_zero() {
            continue;
        }
        let root = e.root.exponent_over(l as u64) as i64;
        // -(Δa + Δ'd)/(4Nc) = -2 sgn(c) (Δa + Δ'd) / L
        let lin = (-2 * c.signum()) as i128 * (delta as i128 * m.a as i128 + delta_p as i128 * d as i128);
        let j = (root as i128 + lin + global as i128).rem_euclid(l as i128) as usize;
        counts[j] += 1;
    }
    let wp = prec + 16;
    let mut acc = BallComplex::zero(wp);
    for (j, &cnt) in counts.iter().enumerate() {
        if cnt != 0 {
            acc = &acc + &e_frac(j as i64, l, wp).mul_int(cnt as i64);
        }
    }
    // all nonzero entries share the radicand gcd(2N, c)/2N
    let g = gcd(two_n, c);
    let scale = BallReal::from_ratio_i64(g, two_n, wp)
        .sqrt()
        .expect("positive")
        .div_int(cabs);
    (acc.mul_real(&scale).with_prec(prec), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::Mag;
    use crate::weil::weil_matrix_ball;

    #[test]
    fn single_term_at_c_one() {
        for (k, n, r, d, rp, dp) in [(10, 1, 1, -3, 0, -4), (12, 2, 1, -7, 2, -4)] {
            let h = hstar(1, r, d, rp, dp, n, k, 128);
            let s = weil_matrix_ball(&SL2Z::S, n, 128);
            let phase = e_frac(-(2 * k - 1), 8, 128);
            let expect = &phase * &s[r as usize][rp as usize];
            assert!(h.overlaps(&expect));
        }
    }

    #[test]
    fn magnitude_bound() {
        for c in [-12i64, -5, 3, 8, 9] {
            let h = hstar(c, 1, -7, 2, -4, 2, 10, 96);
            assert!(h.abs_upper() <= Mag::from_u64(1).add(Mag::pow2(-60)));
        }
    }

    #[test]
    fn completion_independent() {
        for c in [-7i64, 4, 6, 10] {
            let h0 = hstar(c, 1, -3, 1, -7, 1, 10, 128);
            for t in [-3, 1, 5] {
                let ht = hstar_with_completion(c, 1, -3, 1, -7, 1, 10, t, 128);
                assert!(h0.overlaps(&ht));
            }
        }
    }
}
