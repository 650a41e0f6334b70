//! Greedy selection of anchors whose Poincaré series span S_{k,N}: the
//! certified Gram determinant, and the failure to extend beyond dim S_{k,N}.

use std::time::Instant;

use rankin::forms::{dim_jacobi_cusp, greedy_basis, GreedyOptions};

fn main() {
    let opts = GreedyOptions::default();
    for (k, n) in [(10, 1), (10, 4), (20, 1), (20, 2), (22, 1), (24, 1)] {
        let t = Instant::now();
        let dim = dim_jacobi_cusp(k, n).expect("tabulated");
        let g = greedy_basis(k, n, dim, 1e-15, &opts).expect("basis");
        let anchors: Vec<_> = g.anchors.iter().map(|a| (a.d, a.r)).collect();
        let next = g.next_candidate(&[], opts.budget).expect("candidate");
        let ext = g
            .extension_det(next, &opts.coeff)
            .expect("extension")
            .map(|d| (d.display(6), d.contains_zero()))
            .unwrap_or_else(|| ("no pivot".into(), true));
        println!(
            "k={} N={} dim={} anchors={:?} det={} symmetric={} | next {:?} det={} contains 0: {} ({:.1?})",
            k,
            n,
            dim,
            anchors,
            g.det().expect("certified").display(12),
            g.is_symmetric(),
            (next.d, next.r),
            ext.0,
            ext.1,
            t.elapsed()
        );
    }
}
