//! The interval-determinant certificate on a small self-contained input: a
//! Maass lift as the sole pair row, once alone and once together with its
//! own eigenvalue sequence (which makes the rows dependent).

use rankin::analysis::{certify, CertifyInput};
use rankin::forms::{dim_jacobi_cusp, greedy_basis, GreedyOptions};
use rankin::maass::lift_eigenform;

fn main() {
    let k = 10;
    let eps1 = 1e-20;
    let f = lift_eigenform(k, 3, 60, 3).expect("lift");
    let mut gram_for = |n: i64| {
        let dim = dim_jacobi_cusp(k, n).expect("tabulated");
        greedy_basis(k, n, dim, eps1, &GreedyOptions::default())
    };
    for (label, rows) in [("pair row only", vec![]), ("with eigenvalue row", vec![f.clone()])] {
        let input = CertifyInput {
            k,
            interesting: vec![f.clone()],
            n: 1 + rows.len(),
            eigen_rows: rows,
            eps1,
        };
        let report = certify(&input, &mut gram_for).expect("certificate");
        let (dm, dd) = report.det_interval().unwrap_or((f64::NAN, f64::NAN));
        println!(
            "{:<20} n={} eps2={:.2e} D_m={:.3e} D_delta={:.3e} verdict={}",
            label,
            report.n,
            report.eps2.to_f64(),
            dm,
            dd,
            report.verdict.as_str()
        );
    }
}
