use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use rankin::analysis::{certify_matrix, interval_det, mult_check_exact, zeta_convolve, SeriesCoeffs, Verdict};
use rankin::rigor::{bessel_j_half, gamma_half, pi, BallReal, Mag};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000_000i64..10_000_000, 1i64..100_000).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ball_ops_enclose_exact_results(a in rational(), b in rational(), prec in 24u32..200) {
        let x = BallReal::from_rational(&a, prec);
        let y = BallReal::from_rational(&b, prec);
        prop_assert!(x.contains_rational(&a));
        prop_assert!((&x + &y).contains_rational(&(&a + &b)));
        prop_assert!((&x - &y).contains_rational(&(&a - &b)));
        prop_assert!((&x * &y).contains_rational(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(x.div(&y).unwrap().contains_rational(&(&a / &b)));
        }
        prop_assert!(x.sqr().contains_rational(&(&a * &a)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sqrt_encloses_square_roots(n in 1i64..1_000_000, prec in 32u32..300) {
        let s = BallReal::from_int(n * n, prec).sqrt().unwrap();
        prop_assert!(s.contains_int(n));
        let t = BallReal::from_int(n, prec).sqrt().unwrap();
        prop_assert!(t.sqr().contains_int(n));
    }

    #[test]
    fn precision_is_monotone(p in 64u32..256, extra in 32u32..256, nu in 4u32..30, x in 1i64..2000) {
        let lo = pi(p);
        let hi = pi(p + extra);
        prop_assert!(lo.overlaps(&hi) && hi.rad() <= lo.rad());
        let g1 = gamma_half(nu, p);
        let g2 = gamma_half(nu, p + extra);
        prop_assert!(g1.overlaps(&g2) && g2.rad() <= g1.rad());
        let arg1 = BallReal::from_ratio_i64(x, 37, p);
        let arg2 = BallReal::from_ratio_i64(x, 37, p + extra);
        let j1 = bessel_j_half(nu, &arg1).unwrap();
        let j2 = bessel_j_half(nu, &arg2).unwrap();
        prop_assert!(j1.overlaps(&j2));
        prop_assert!(j2.rad() <= j1.rad(), "{} vs {}", j2.rad().to_f64(), j1.rad().to_f64());
    }
}

fn exact_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let v = &f * &a[c][j];
                a[r][j] -= v;
            }
        }
    }
    det
}

fn rational_matrix() -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    prop::collection::vec(prop::collection::vec((-50i64..50, 1i64..8).prop_map(|(n, d)| q(n, d)), 5), 5)
}

fn inflate(m: &[Vec<BigRational>], rad: f64) -> Vec<Vec<BallReal>> {
    m.iter()
        .map(|row| row.iter().map(|x| BallReal::from_rational(x, 128).add_error(Mag::from_f64_up(rad))).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn interval_det_contains_exact(m in rational_matrix(), e in 0u32..12) {
        let rad = if e == 0 { 0.0 } else { 10f64.powi(-(e as i32)) };
        let d = exact_det(&m);
        match interval_det(&inflate(&m, rad)) {
            Ok(r) => prop_assert!(r.det.contains_rational(&d), "{} not in {}", d, r.det),
            Err(_) => prop_assert!(rad > 0.0 || d.is_zero()),
        }
    }

    #[test]
    fn singular_matrices_give_zero(m in rational_matrix(), a in -3i64..4, b in -3i64..4, e in 0u32..12) {
        let mut m = m;
        m[4] = (0..5).map(|j| &m[0][j] * q(a, 1) + &m[1][j] * q(b, 1)).collect();
        prop_assert!(exact_det(&m).is_zero());
        let rad = if e == 0 { 0.0 } else { 10f64.powi(-(e as i32)) };
        if let Ok(r) = interval_det(&inflate(&m, rad)) {
            prop_assert!(r.det.contains_zero());
        }
    }

    #[test]
    fn wider_eps2_never_certifies_more(m in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 3), e1 in 1u32..12, de in 1u32..8) {
        let rows: Vec<Vec<BallReal>> = m.iter().map(|r| r.iter().map(|&x| BallReal::from_int(x, 128)).collect()).collect();
        let narrow = BallReal::from_f64(10f64.powi(-((e1 + de) as i32)), 128);
        let wide = BallReal::from_f64(10f64.powi(-(e1 as i32)), 128);
        let a = certify_matrix(20, rows.clone(), 2, 1e-40, narrow, vec![], vec![]);
        let b = certify_matrix(20, rows, 2, 1e-40, wide, vec![], vec![]);
        if b.verdict == Verdict::Independent {
            prop_assert_eq!(a.verdict, Verdict::Independent);
        }
        if let (Some(da), Some(db)) = (&a.det, &b.det) {
            prop_assert!(da.det.overlaps(&db.det));
        }
    }
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn multiplicative(len: usize, vals: &[Vec<i64>]) -> Vec<BigRational> {
    (1..=len as u64)
        .map(|mut n| {
            let mut acc = BigRational::one();
            for (i, &p) in PRIMES.iter().enumerate() {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                if e > 0 {
                    acc *= BigRational::from_integer(BigInt::from(vals[i][e - 1]));
                }
            }
            acc
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn zeta_convolution_preserves_multiplicativity(
        vals in prop::collection::vec(prop::collection::vec(-1000i64..1000, 6), 6),
        k in prop::sample::select(vec![10i64, 12, 20, 24]),
    ) {
        let len = 60;
        let s = SeriesCoeffs::from_exact(k, "random", multiplicative(len, &vals), false, 128);
        prop_assert_eq!(mult_check_exact(&s), Some(vec![]));
        let c = zeta_convolve(k, &s);
        prop_assert_eq!(mult_check_exact(&c), Some(vec![]));
        for n in 1..=len {
            prop_assert!(c.get(n).contains_rational(&c.exact.as_ref().unwrap()[n - 1][0]));
        }
    }
}
