//! Jacobi and Siegel form data: admissible pairs, exact coefficient tables,
//! Gram matrices of Poincaré series and Petersson products.

mod cache;
mod dims;
mod gram;
mod jacobi;
mod numfield;
mod petersson;
mod siegel;

pub use cache::{atomic_write, gram_cache_path, load_or_compute, request_hash};
pub use dims::{dim_jacobi_cusp, table_rows};
pub use gram::{gram_for_anchors, greedy_basis, GramData, GreedyOptions};
pub use jacobi::{gamma_vector, JacobiCuspFormExact};
pub use numfield::{elem_add, elem_is_zero, elem_scale, FieldElem, NumberFieldSpec};
pub use petersson::{l2_norm, petersson, petersson_real, predictive_error, predictive_error_vectors};
pub use siegel::{fj_slice, load_eigenform, parse_elem, save_eigenform, SiegelEigenformData};

use thiserror::Error;

use crate::poincare::{AdmissiblePair, PoincareError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormsError {
    #[error("coefficient at D = {d} outside coverage |D| <= {d_min}")]
    CoverageExceeded { d: i64, d_min: i64 },
    #[error("no basis of size {target} found within {budget} candidates (found {found})")]
    BasisNotFound { target: usize, found: usize, budget: usize },
    #[error("Gram determinant enclosure contains zero")]
    SingularGram,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unsupported format version {0}")]
    VersionMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Poincare(#[from] PoincareError),
}

impl From<std::io::Error> for FormsError {
    fn from(e: std::io::Error) -> Self {
        FormsError::Io(e.to_string())
    }
}

/// The first `count` admissible pairs for index `N`, ordered by `|D|`, then
/// by `r` in `0..=N`.
pub fn enumerate_admissible(n: i64, count: usize) -> Vec<AdmissiblePair> {
    admissible_iter(n).take(count).collect()
}

/// Endless stream of admissible pairs in canonical order.
pub fn admissible_iter(n: i64) -> impl Iterator<Item = AdmissiblePair> {
    (1i64..).flat_map(move |ad| {
        (0..=n).filter_map(move |r| AdmissiblePair::new(n, -ad, r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[(i64, i64)]) -> Vec<AdmissiblePair> {
        v.iter().map(|&(d, r)| AdmissiblePair { d, r }).collect()
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_admissible(1, 4), pairs(&[(-3, 1), (-4, 0), (-7, 1), (-8, 0)]));
        assert_eq!(enumerate_admissible(2, 3), pairs(&[(-4, 2), (-7, 1), (-8, 0)]));
        for n in 1..8 {
            for p in enumerate_admissible(n, 40) {
                assert_eq!((p.d - p.r * p.r).rem_euclid(4 * n), 0);
                assert!((0..=n).contains(&p.r));
            }
        }
    }
}
