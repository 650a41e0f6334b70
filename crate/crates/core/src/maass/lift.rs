use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::jacobi::{phi_cusp, v_operator};
use super::series::{delta, eisenstein, QSeriesInt};
use super::MaassError;
use crate::forms::{elem_add, elem_is_zero, elem_scale, FieldElem, JacobiCuspFormExact, NumberFieldSpec, SiegelEigenformData};
use num_integer::Integer;

/// The normalized elliptic eigenform of weight `2k - 2` attached to the
/// Maass lifts of weight `k`: `Δ E_6` for `k = 10`, `Δ E_4 E_6` for `k = 12`.
pub fn elliptic_coeffs(k_siegel: i64, n_max: usize) -> Result<QSeriesInt, MaassError> {
    let d = delta(n_max);
    match k_siegel {
        10 => Ok(d.mul(&eisenstein(6, n_max)?)),
        12 => Ok(d.mul(&eisenstein(4, n_max)?).mul(&eisenstein(6, n_max)?)),
        _ => Err(MaassError::NotOneDimensional(2 * k_siegel - 2)),
    }
}

fn pow_i(b: i64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

/// `λ_p = a_f(p) + p^{k-1} + p^{k-2}`.
pub fn elliptic_eigenvalue(k_siegel: i64, p: u64) -> Result<BigInt, MaassError> {
    let f = elliptic_coeffs(k_siegel, p as usize)?;
    let p = p as i64;
    Ok(&f.coeffs[p as usize] + pow_i(p, k_siegel - 1) + pow_i(p, k_siegel - 2))
}

/// Dirichlet convolution of sequences indexed `1..=n` (entry 0 unused).
fn dconv(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len()) - 1;
    let mut out = vec![BigInt::zero(); n + 1];
    for i in 1..=n {
        if a[i].is_zero() {
            continue;
        }
        for j in 1..=n / i {
            out[i * j] += &a[i] * &b[j];
        }
    }
    out
}

fn power_seq(e: i64, n: usize) -> Vec<BigInt> {
    (0..=n).map(|i| if i == 0 { BigInt::zero() } else { pow_i(i as i64, e) }).collect()
}

fn mobius(n: u64) -> i64 {
    let (mut n, mut s, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            s = -s;
        }
        p += 1;
    }
    if n > 1 {
        s = -s;
    }
    s
}

/// Coefficients `b(1..=n)` of `ζ(s-k+1) ζ(s-k+2) L(f, s)`, the spinor
/// L-series of the Maass lifts of weight `k`.
pub fn spinor_sequence(k_siegel: i64, n: usize) -> Result<Vec<BigInt>, MaassError> {
    let f = elliptic_coeffs(k_siegel, n)?;
    let mut af = f.coeffs.clone();
    af[0] = BigInt::zero();
    Ok(dconv(
        &dconv(&power_seq(k_siegel - 1, n), &power_seq(k_siegel - 2, n)),
        &af,
    ))
}

/// Hecke eigenvalues `λ_ℓ`, `ℓ = 1..=n`: the spinor sequence divided by
/// `ζ(2s - 2k + 4)`.
pub fn spinor_lambda_sequence(k_siegel: i64, n: usize) -> Result<Vec<BigInt>, MaassError> {
    let b = spinor_sequence(k_siegel, n)?;
    let mut inv = vec![BigInt::zero(); n + 1];
    let mut m = 1usize;
    while m * m <= n {
        inv[m * m] = BigInt::from(mobius(m as u64)) * pow_i(m as i64, 2 * k_siegel - 4);
        m += 1;
    }
    Ok(dconv(&b, &inv))
}

/// The Maass lift of `φ_{k,1}` as eigenform data: `a(n, r, m) = (φ|V_m)(n, r)`
/// for `m <= index_max`, `-m < r <= m`, `4nm - r² <= disc_bound`, and
/// eigenvalues `λ_1..λ_{eig_max}`.
pub fn lift_eigenform(
    k: i64,
    index_max: i64,
    disc_bound: i64,
    eig_max: usize,
) -> Result<SiegelEigenformData, MaassError> {
    let n_phi = (disc_bound + index_max * index_max) / 4 + 1;
    let phi = phi_cusp(k, n_phi)?;
    let mut coeffs = BTreeMap::new();
    for m in 1..=index_max {
        let v = v_operator(&phi, m)?;
        for r in (1 - m)..=m {
            let mut n = (r * r) / (4 * m) + 1;
            while 4 * n * m - r * r <= disc_bound {
                let c = v.coeff(n, r)?;
                if !c.is_zero() {
                    coeffs.insert((n, r, m), vec![BigRational::from_integer(c)]);
                }
                n += 1;
            }
        }
    }
    let lam = spinor_lambda_sequence(k, eig_max)?;
    let eigenvalues = (1..=eig_max)
        .map(|l| (l as u64, vec![BigRational::from_integer(lam[l].clone())]))
        .collect();
    Ok(SiegelEigenformData {
        name: format!("maass-lift-k{}", k),
        k,
        field: NumberFieldSpec::rational(),
        coeffs,
        eigenvalues,
        disc_bound,
        index_max,
    })
}

/// Maass lift of an arbitrary index-one cusp form given by its coefficients
/// `C(D, r)`: `a(n, r, m) = Σ_{d | (n, r, m)} d^{k-1} C((r² - 4nm)/d², r/d)`.
/// Coefficients may lie in a number field; no eigenvalues are attached.
pub fn lift_index_one(
    phi: &JacobiCuspFormExact,
    index_max: i64,
    disc_bound: i64,
) -> Result<SiegelEigenformData, MaassError> {
    if phi.n != 1 {
        return Err(MaassError::Unsupported(format!("index {} form, expected index 1", phi.n)));
    }
    if disc_bound > phi.d_min {
        return Err(MaassError::Unsupported(format!(
            "discriminant bound {} exceeds the input coverage {}",
            disc_bound, phi.d_min
        )));
    }
    let k = phi.k;
    let mut coeffs = BTreeMap::new();
    for m in 1..=index_max {
        for r in (1 - m)..=m {
            let mut n = (r * r) / (4 * m) + 1;
            while 4 * n * m - r * r <= disc_bound {
                let g = n.gcd(&r).gcd(&m);
                let mut acc: FieldElem = Vec::new();
                for d in (1..=g).filter(|d| g % d == 0) {
                    let disc = (r * r - 4 * n * m) / (d * d);
                    let c = phi
                        .coeff(disc, r / d)
                        .map_err(|e| MaassError::Unsupported(e.to_string()))?;
                    let w = BigRational::from_integer(pow_i(d, k - 1));
                    acc = elem_add(&acc, &elem_scale(&c, &w));
                }
                if !elem_is_zero(&acc) {
                    coeffs.insert((n, r, m), acc);
                }
                n += 1;
            }
        }
    }
    Ok(SiegelEigenformData {
        name: format!("maass-lift-k{}-index-one", k),
        k,
        field: phi.field.clone(),
        coeffs,
        eigenvalues: BTreeMap::new(),
        disc_bound,
        index_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::fj_slice;
    use crate::maass::maass_fj;
    use num_traits::One;

    #[test]
    fn eigenvalues() {
        let f = elliptic_coeffs(10, 5).unwrap();
        assert_eq!(f.coeffs[2], BigInt::from(-528));
        assert_eq!(elliptic_eigenvalue(10, 2).unwrap(), BigInt::from(240));
        assert_eq!(elliptic_eigenvalue(10, 3).unwrap(), BigInt::from(21960));
        let a22 = elliptic_coeffs(12, 3).unwrap().coeffs[2].clone();
        assert_eq!(elliptic_eigenvalue(12, 2).unwrap(), a22 + 1024 + 2048);
        assert!(matches!(elliptic_eigenvalue(14, 2), Err(MaassError::NotOneDimensional(26))));
    }

    #[test]
    fn lambda_sequence_is_consistent() {
        let lam = spinor_lambda_sequence(10, 30).unwrap();
        assert!(lam[1].is_one());
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(lam[p as usize], elliptic_eigenvalue(10, p).unwrap());
        }
        // spinor coefficients are multiplicative
        let b = spinor_sequence(10, 30).unwrap();
        assert_eq!(&b[2] * &b[3], b[6].clone());
        assert_eq!(&b[3] * &b[10], b[30].clone());
        // b(4) = λ_4 + 2^{2k-4} λ_1
        assert_eq!(b[4], &lam[4] + pow_i(2, 16));
    }

    #[test]
    fn lift_symmetry_and_slices() {
        let f = lift_eigenform(10, 3, 40, 4).unwrap();
        // a(n, r, m) = a(m, r, n) where both keys are stored
        for (&(n, r, m), v) in &f.coeffs {
            if let Some(w) = f.coeffs.get(&(m, r, n)) {
                assert_eq!(v, w);
            }
        }
        let phi = phi_cusp(10, 12).unwrap();
        for n in 1..=3 {
            let a = fj_slice(&f, n).unwrap();
            let b = maass_fj(&phi, n).unwrap();
            for (key, v) in &a.coeffs {
                if -key.0 <= b.d_min {
                    assert_eq!(b.coeff(key.0, key.1).unwrap(), *v);
                }
            }
        }
    }

    #[test]
    fn index_one_lift_matches_eigenform_lift() {
        let f = lift_eigenform(12, 3, 40, 1).unwrap();
        let phi = fj_slice(&f, 1).unwrap();
        let g = lift_index_one(&phi, 3, 40).unwrap();
        assert_eq!(f.coeffs, g.coeffs);
        assert!(lift_index_one(&phi, 3, 41).is_err());
        assert!(lift_index_one(&fj_slice(&f, 2).unwrap(), 3, 40).is_err());
    }
}
