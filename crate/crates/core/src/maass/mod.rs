//! Exact test data: integer q-series, index-one Jacobi cusp forms built from
//! theta functions, the `V_N` operators and the Maass lifts they generate.

mod jacobi;
mod lift;
mod series;

pub use jacobi::{
    maass_fj, phi_cusp, theta1_squared_over_eta6, v_operator, weak_jacobi, JacobiSeriesExact, WeakJacobi,
};
pub use lift::{elliptic_coeffs, elliptic_eigenvalue, lift_eigenform, lift_index_one, spinor_sequence, spinor_lambda_sequence};
pub use series::{delta, eisenstein, QSeriesInt};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaassError {
    #[error("coefficient at q^{needed} requested but series known to q^{n_max}")]
    CoverageExceeded { needed: i64, n_max: i64 },
    #[error("weight {0}: the elliptic cusp space is not one-dimensional")]
    NotOneDimensional(i64),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
}
