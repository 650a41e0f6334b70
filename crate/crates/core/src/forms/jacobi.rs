use std::collections::BTreeMap;

use num_rational::BigRational;

use super::numfield::{elem_is_zero, FieldElem, NumberFieldSpec};
use super::FormsError;
use crate::poincare::AdmissiblePair;
use crate::rigor::BallReal;

/// Jacobi cusp form of weight `k` and index `N` given by exact coefficients
/// `C(D, r)` with `r` taken mod `2N`. Keys with `|D| <= d_min` that are not
/// stored are zero; everything beyond `d_min` is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCuspFormExact {
    pub k: i64,
    pub n: i64,
    pub field: NumberFieldSpec,
    pub coeffs: BTreeMap<(i64, i64), FieldElem>,
    pub d_min: i64,
}

impl JacobiCuspFormExact {
    pub fn new(k: i64, n: i64, field: NumberFieldSpec, d_min: i64) -> JacobiCuspFormExact {
        JacobiCuspFormExact {
            k,
            n,
            field,
            coeffs: BTreeMap::new(),
            d_min,
        }
    }

    /// Store `C(D, r)`. Zero values are dropped.
    pub fn insert(&mut self, d: i64, r: i64, value: FieldElem) -> Result<(), FormsError> {
        let p = AdmissiblePair { d, r };
        if !p.is_admissible(self.n) {
            return Err(FormsError::InvariantViolation(format!(
                "({}, {}) is not an admissible key for index {}",
                d, r, self.n
            )));
        }
        if -d > self.d_min {
            return Err(FormsError::CoverageExceeded { d, d_min: self.d_min });
        }
        let key = (d, r.rem_euclid(2 * self.n));
        if elem_is_zero(&value) {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    pub fn coeff(&self, d: i64, r: i64) -> Result<FieldElem, FormsError> {
        if d >= 0 {
            return Err(FormsError::InvariantViolation(format!(
                "cusp form coefficient requested at D = {} >= 0",
                d
            )));
        }
        if -d > self.d_min {
            return Err(FormsError::CoverageExceeded { d, d_min: self.d_min });
        }
        Ok(self
            .coeffs
            .get(&(d, r.rem_euclid(2 * self.n)))
            .cloned()
            .unwrap_or_default())
    }

    /// `C(D, r) = C(D, -r)` on all stored data.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().all(|(&(d, r), v)| {
            let rr = (-r).rem_euclid(2 * self.n);
            self.coeffs.get(&(d, rr)).is_some_and(|w| w == v)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiply every coefficient by a rational.
    pub fn scaled(&self, s: &BigRational) -> JacobiCuspFormExact {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.iter().map(|x| x * s).collect();
        }
        out.coeffs.retain(|_, v| !elem_is_zero(v));
        out
    }
}

/// `γ_h(φ) = (C_φ(h(1)), …, C_φ(h(n)))` as real balls.
pub fn gamma_vector(
    phi: &JacobiCuspFormExact,
    h: &[AdmissiblePair],
    prec: u32,
) -> Result<Vec<BallReal>, FormsError> {
    let theta = if phi.field.is_rational() {
        BallReal::zero(prec)
    } else {
        phi.field.theta(prec + 16)
    };
    h.iter()
        .map(|a| {
            let c = phi.coeff(a.d, a.r)?;
            Ok(phi.field.embed_with(&theta, &c).with_prec(prec))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn q(v: i64) -> FieldElem {
        vec![BigRational::from_integer(v.into())]
    }

    #[test]
    fn gamma_vector_examples() {
        let mut phi = JacobiCuspFormExact::new(10, 1, NumberFieldSpec::rational(), 20);
        phi.insert(-3, 1, q(1)).unwrap();
        phi.insert(-3, -1, q(1)).unwrap();
        phi.insert(-4, 0, q(0)).unwrap();
        let h = [AdmissiblePair { d: -3, r: 1 }, AdmissiblePair { d: -4, r: 0 }];
        let g = gamma_vector(&phi, &h, 64).unwrap();
        assert!(g[0].contains_int(1) && g[0].is_exact());
        assert!(g[1].contains_int(0) && g[1].is_exact());
        assert!(gamma_vector(&phi, &[], 64).unwrap().is_empty());
        assert!(phi.is_even());
        let far = [AdmissiblePair { d: -35, r: 1 }];
        assert!(matches!(gamma_vector(&phi, &far, 64), Err(FormsError::CoverageExceeded { .. })));
    }

    #[test]
    fn rejects_inadmissible() {
        let mut phi = JacobiCuspFormExact::new(10, 2, NumberFieldSpec::rational(), 20);
        assert!(phi.insert(-5, 1, q(1)).is_err());
        assert!(phi.insert(-7, 1, q(1)).is_ok());
        assert!(phi.insert(-7, 5, q(2)).is_ok());
        assert_eq!(phi.coeff(-7, 1).unwrap(), q(2));
    }

    #[test]
    fn number_field_embedding_shrinks() {
        let field = NumberFieldSpec {
            minpoly: vec![BigInt::from(-5), BigInt::zero(), BigInt::one()],
            root: (BigRational::from_integer(2.into()), BigRational::from_integer(3.into())),
        };
        let mut phi = JacobiCuspFormExact::new(20, 1, field, 10);
        phi.insert(-3, 1, vec![BigRational::one(), BigRational::one()]).unwrap();
        let h = [AdmissiblePair { d: -3, r: 1 }];
        let lo = gamma_vector(&phi, &h, 64).unwrap();
        let hi = gamma_vector(&phi, &h, 256).unwrap();
        assert!(hi[0].rad() < lo[0].rad());
        assert!((hi[0].to_f64() - (1.0 + 5f64.sqrt())).abs() < 1e-15);
    }
}
