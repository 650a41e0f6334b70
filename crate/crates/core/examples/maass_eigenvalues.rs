//! Ratios ⟨F_p, F_p⟩ / ⟨F_1, F_1⟩ for the Maass lift of φ_{10,1} against the
//! Hecke eigenvalues λ_p.

use std::time::Instant;

use rankin::forms::{dim_jacobi_cusp, greedy_basis, petersson_real, GreedyOptions};
use rankin::maass::{elliptic_eigenvalue, maass_fj, phi_cusp};

fn main() {
    let k = 10;
    let eps = 1e-15;
    let phi = phi_cusp(k, 40).expect("weight 10 generator");
    let mut norms = Vec::new();
    for n in [1i64, 2, 3, 5, 7] {
        let t = Instant::now();
        let dim = dim_jacobi_cusp(k, n).expect("tabulated");
        let gram = greedy_basis(k, n, dim, eps, &GreedyOptions::default()).expect("basis");
        let f = maass_fj(&phi, n).expect("coverage");
        let v = petersson_real(&f, &f, &gram).expect("certified Gram");
        println!("N={} anchors={:?} <F_N,F_N>={} ({:.1?})", n, gram.anchors, v.display(20), t.elapsed());
        norms.push((n, v));
    }
    let one = norms[0].1.clone();
    for (p, v) in &norms[1..] {
        let ratio = v.div(&one).expect("nonzero norm");
        let lam = elliptic_eigenvalue(k, *p as u64).expect("weight 10");
        println!(
            "p={} ratio={} lambda={} contained={} rel.width={:.2e}",
            p,
            ratio.display(15),
            lam,
            ratio.contains_int(lam.clone()),
            ratio.rel_width()
        );
    }
}
