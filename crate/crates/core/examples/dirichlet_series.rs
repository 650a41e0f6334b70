//! Dirichlet series coefficients: the spinor series of a Maass lift, the
//! ζ-convolution, and certified multiplicativity checks on tabulated data.

use rankin::analysis::{mult_check, mult_check_exact, spinor_coeffs, SeriesCoeffs};
use rankin::maass::lift_eigenform;

fn load(text: &str) -> SeriesCoeffs {
    let v = serde_json::from_str(text).expect("json");
    SeriesCoeffs::from_json(&v, 128).expect("series/1")
}

fn main() {
    let f = lift_eigenform(12, 2, 40, 30).expect("weight 12 lift");
    let b = spinor_coeffs(&f, 30, 128).expect("eigenvalues");
    println!("spinor coefficients b(n) of {}:", f.name);
    for n in 1..=12 {
        println!("  b({:>2}) = {}", n, b.get(n).display(20));
    }
    println!("exact multiplicativity failures: {:?}", mult_check_exact(&b));

    let exact = load(include_str!("../data/upsilon24a_spinor.json"));
    println!("{}: exact failures {:?}", exact.label, mult_check_exact(&exact));

    for text in [
        include_str!("../data/dtilde_24aa.json"),
        include_str!("../data/dtilde_24ab.json"),
        include_str!("../data/dtilde_24bb.json"),
    ] {
        let s = load(text);
        let v = mult_check(&s);
        println!("{}: {} certified violations", s.label, v.len());
        for x in v.iter().take(3) {
            println!("  a({})a({}) - a({}) = {}", x.m, x.n, x.m * x.n, x.gap.display(10));
        }
    }
}
