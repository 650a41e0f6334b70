//! Petersson products from Fourier coefficients: the same product computed
//! with three different anchor sets, and the a priori error estimate.

use rankin::forms::{dim_jacobi_cusp, greedy_basis, petersson_real, predictive_error, GreedyOptions};
use rankin::maass::{maass_fj, phi_cusp};

fn main() {
    let k = 10;
    let phi = phi_cusp(k, 40).expect("weight 10");
    for n in 1..=3 {
        let f = maass_fj(&phi, n).expect("coverage");
        let dim = dim_jacobi_cusp(k, n).expect("tabulated");
        let mut values = Vec::new();
        for (label, opts) in [
            ("first anchors", GreedyOptions::default()),
            ("skip 2", GreedyOptions { skip: 2, ..GreedyOptions::default() }),
            ("skip 3", GreedyOptions { skip: 3, ..GreedyOptions::default() }),
        ] {
            let gram = greedy_basis(k, n, dim, 1e-15, &opts).expect("basis");
            let v = petersson_real(&f, &f, &gram).expect("certified Gram");
            let pred = predictive_error(gram.eps, &f, &f, &gram.anchors, 64).expect("coverage");
            let anchors: Vec<_> = gram.anchors.iter().map(|a| (a.d, a.r)).collect();
            println!(
                "N={} {:<13} anchors={:<24} <F_N,F_N> = {}  predicted error {:.1e}",
                n,
                label,
                format!("{:?}", anchors),
                v.display(18),
                pred.to_f64()
            );
            values.push(v);
        }
        let consistent = values.iter().all(|a| values.iter().all(|b| a.overlaps(b)));
        println!("N={} all enclosures intersect: {}", n, consistent);
    }
}
