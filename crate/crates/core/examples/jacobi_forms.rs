//! Exact q-expansions: the weak Jacobi forms of index one, the cusp forms
//! of weight 10 and 12 built from them, and the Hecke-type operator V_ℓ.

use rankin::maass::{phi_cusp, v_operator, weak_jacobi, JacobiSeriesExact, WeakJacobi};

fn table(name: &str, phi: &JacobiSeriesExact, n_max: i64) {
    println!("{} (weight {}, index {}):", name, phi.k, phi.index);
    let m = phi.index;
    for n in 0..=n_max {
        let row: Vec<String> = (-2 * m..=2 * m)
            .map(|r| phi.coeff(n, r).map(|c| c.to_string()).unwrap_or_else(|_| "?".into()))
            .collect();
        println!("  q^{}: r={}..{}: [{}]", n, -2 * m, 2 * m, row.join(", "));
    }
}

fn main() {
    table("phi_{-2,1}", &weak_jacobi(WeakJacobi::MinusTwo, 6), 3);
    table("phi_{0,1}", &weak_jacobi(WeakJacobi::Zero, 6), 3);
    let p10 = phi_cusp(10, 12).expect("weight 10");
    let p12 = phi_cusp(12, 12).expect("weight 12");
    table("phi_{10,1}", &p10, 3);
    table("phi_{12,1}", &p12, 3);
    for ell in [2, 3] {
        let v = v_operator(&p10, ell).expect("coverage");
        table(&format!("phi_{{10,1}} | V_{}", ell), &v, 2);
    }
}
