//! Fourier coefficients of Jacobi Poincaré series with certified error, and
//! how the truncation point grows with the requested accuracy.

use rankin::poincare::{alpha, poincare_coeff, AdmissiblePair, CoeffOptions, PoincareJob};

fn main() {
    let k = 10;
    let n = 1;
    let source = AdmissiblePair::new(n, -3, 1).unwrap();
    for eps in [1e-10, 1e-15] {
        for target in [(-3, 1), (-4, 0), (-7, 1), (-8, 0)] {
            let target = AdmissiblePair::new(n, target.0, target.1).unwrap();
            let job = PoincareJob { k, n, source, target, eps };
            let r = poincare_coeff(&job, &CoeffOptions::default()).expect("valid job");
            println!(
                "eps={:.0e} p_{:?}({:?}) = {}  (M={}, terms={}, Im encloses 0: {})",
                eps,
                (source.d, source.r),
                (target.d, target.r),
                r.value.display(25),
                r.m_used,
                r.terms,
                r.imag.contains_zero()
            );
        }
    }
    // weight 20, index 2: the normalization constant turns coefficients into
    // Petersson products
    let a = alpha(2, 20, -7, 128);
    println!("alpha(N=2, k=20, D=-7) = {}", a.display(20));
}
