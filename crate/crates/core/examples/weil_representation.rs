//! Closed-form Weil representation matrices checked against the word
//! oracle, and the Gauss sums behind the eighth roots of unity.

use rankin::arith::{gauss_sum_oracle, signature, Rational};
use rankin::weil::{weil_matrix, weil_oracle, SL2Z};

fn show(m: &SL2Z, n: i64) {
    println!("rho({}) for N = {}:", m, n);
    for row in weil_matrix(m, n) {
        let cells: Vec<String> = row
            .iter()
            .map(|e| {
                if e.is_zero() {
                    "0".to_string()
                } else {
                    format!("sqrt({})*e({}/{})", e.radicand, e.root.exponent(), e.root.order())
                }
            })
            .collect();
        println!("  [{}]", cells.join(", "));
    }
}

fn main() {
    show(&SL2Z::T, 2);
    show(&SL2Z::S, 2);
    show(&SL2Z::NEG_IDENTITY, 2);

    let m = SL2Z::new(7, 3, 30, 13).expect("det 1");
    for n in 1..=4 {
        let oracle = weil_oracle(&m, n, 160).expect("branch resolved");
        let closed = weil_matrix(&m, n);
        let agree = closed.iter().zip(&oracle).all(|(rc, ro)| {
            rc.iter().zip(ro).all(|(c, o)| o.overlaps(&c.to_ball(200)))
        });
        println!("N={} A={} closed form inside oracle balls: {}", n, m, agree);
    }

    for (b, a) in [(1, 3), (2, 5), (1, 4), (3, 8), (-5, 9)] {
        let r = Rational::new(b, a);
        let g = gauss_sum_oracle(&r, 96).expect("v2(a) != 1");
        let s = signature(&Rational::new(2 * b, a));
        println!("b/a = {:>5}: normalized Gauss sum {}  e_8({})", r.to_string(), g, s);
    }
}
