//! Acceptance criteria, one line each. Run with
//! `cargo test --release --test acceptance`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use rankin::analysis::{
    certify, dtilde, interval_det, mult_check, mult_check_exact, petersson_sequence, zeta_convolve, SeriesCoeffs,
    Verdict,
};
use rankin::arith::signature;
use rankin::cli::checks::{gauss_sweep, weil_structure_sweep, weil_sweep};
use rankin::cli::load_manifest;
use rankin::forms::{
    dim_jacobi_cusp, fj_slice, greedy_basis, load_eigenform, petersson_real, GramData, GreedyOptions,
    SiegelEigenformData,
};
use rankin::forms::FormsError;
use rankin::maass::{elliptic_eigenvalue, lift_eigenform, lift_index_one};
use rankin::poincare::CoeffOptions;
use rankin::rigor::{BallReal, Mag};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, id: u32, what: &str, tol: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match out {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                self.failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("[{}] {}: {} ({}; {:.1}s) {}", tag, id, what, tol, secs, detail);
    }
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn load_series(path: &Path) -> SeriesCoeffs {
    let text = std::fs::read_to_string(path).expect("fixture readable");
    let v: serde_json::Value = serde_json::from_str(&text).expect("fixture is json");
    SeriesCoeffs::from_json(&v, 128).expect("series/1 fixture")
}

fn greedy(k: i64, n: i64, eps: f64, skip: usize) -> Result<GramData, FormsError> {
    let dim = dim_jacobi_cusp(k, n).ok_or(FormsError::InvariantViolation(format!("no dim for ({}, {})", k, n)))?;
    let opts = GreedyOptions { skip, ..GreedyOptions::default() };
    greedy_basis(k, n, dim, eps, &opts)
}

fn gram_memo(k: i64, eps: f64) -> impl FnMut(i64) -> Result<GramData, FormsError> {
    let mut memo: BTreeMap<i64, GramData> = BTreeMap::new();
    move |n| {
        if let Some(g) = memo.get(&n) {
            return Ok(g.clone());
        }
        let g = greedy(k, n, eps, 0)?;
        memo.insert(n, g.clone());
        Ok(g)
    }
}

fn gauss() -> Outcome {
    let fails = gauss_sweep(60, 60, 128, 1e-30, signature);
    verdict(fails.is_empty(), format!("failures={:?}", fails))
}

fn weil() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=6 {
        let f = weil_sweep(n, 200, 50, 1, 160, 1e-40, signature);
        let g = weil_structure_sweep(n, 200, 50, 2, 128, signature);
        bad.extend(f.into_iter().chain(g).map(|w| format!("N={} {} {}", w.n, w.matrix, w.detail)));
    }
    verdict(bad.is_empty(), format!("1200 matrices, failures={:?}", bad))
}

fn gram_structure() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (k, n) in [(10, 1), (10, 2), (10, 3), (20, 1), (20, 2)] {
        match greedy(k, n, 1e-15, 0) {
            Ok(g) => {
                ok &= g.is_symmetric() && g.is_certified();
                notes.push(format!("({},{}) sym={} maxrad={:.1e}", k, n, g.is_symmetric(), g.max_radius().to_f64()));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("({},{}) {}", k, n, e));
            }
        }
    }
    verdict(ok, notes.join(", "))
}

fn greedy_dims() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (k, n, want) in [(20, 1, 2usize), (20, 2, 4), (22, 1, 3), (24, 1, 3)] {
        let res = greedy(k, n, 1e-15, 0).and_then(|g| {
            let next = g.next_candidate(&[], 64).expect("stream is infinite");
            let d = g.extension_det(next, &CoeffOptions::default())?;
            Ok((g.dim(), d.map_or(true, |d| d.contains_zero())))
        });
        match res {
            Ok((dim, next_zero)) => {
                ok &= dim == want && next_zero;
                notes.push(format!("({},{}) dim={} next-contains-0={}", k, n, dim, next_zero));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("({},{}) {}", k, n, e));
            }
        }
    }
    verdict(ok, notes.join(", "))
}

fn maass_ratios() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (k, primes) in [(10i64, vec![2u64, 3, 5, 7]), (12, vec![2, 3])] {
        let nmax = *primes.last().unwrap() as usize;
        let f = match lift_eigenform(k, nmax as i64, 32 * nmax as i64, 1) {
            Ok(f) => f,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let mut gram_for = gram_memo(k, 1e-15);
        let ratio = match petersson_sequence(&f, &f, nmax, &mut gram_for).map_err(|e| e.to_string()).and_then(|s| dtilde(&s).map_err(|e| e.to_string())) {
            Ok(r) => r,
            Err(e) => return Outcome::Fail(e),
        };
        for p in primes {
            let lam = elliptic_eigenvalue(k, p).unwrap();
            let r = ratio.get(p as usize);
            let good = r.contains_int(lam.clone()) && r.rel_width() < 1e-6;
            ok &= good;
            notes.push(format!("k={} p={} lambda={} width={:.1e}", k, p, lam, r.rel_width()));
        }
    }
    verdict(ok, notes.join(", "))
}

fn anchor_invariance() -> Outcome {
    let f = match lift_eigenform(10, 3, 80, 1) {
        Ok(f) => f,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let phi = fj_slice(&f, n).unwrap();
        let vals: Result<Vec<BallReal>, String> = [0usize, 1, 2]
            .iter()
            .map(|&skip| {
                let g = greedy(10, n, 1e-15, skip).map_err(|e| e.to_string())?;
                petersson_real(&phi, &phi, &g).map_err(|e| e.to_string())
            })
            .collect();
        match vals {
            Ok(v) => {
                let inter = v.iter().all(|a| v.iter().all(|b| a.overlaps(b)));
                ok &= inter;
                notes.push(format!("N={} overlap={}", n, inter));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("N={} {}", n, e));
            }
        }
    }
    verdict(ok, notes.join(", "))
}

fn multiplicativity() -> Outcome {
    let spin = load_series(&data_dir().join("upsilon24a_spinor.json"));
    let ex = spin.exact.as_ref().expect("exact spinor data");
    let b = |n: usize| ex[n - 1][0].clone();
    let exact_ok = &b(2) * &b(3) == b(6) && &b(2) * &b(5) == b(10) && mult_check_exact(&spin) == Some(vec![]);
    let aa = load_series(&data_dir().join("dtilde_24aa.json"));
    let viol = mult_check(&aa);
    let has23 = viol.iter().any(|v| (v.m, v.n) == (2, 3));
    verdict(exact_ok && has23, format!("b exact={} certified violations={} incl (2,3)={}", exact_ok, viol.len(), has23))
}

fn rel_close(a: &BallReal, b: &BallReal, digits: i32) -> bool {
    let (x, y) = (a.to_f64(), b.to_f64());
    (x - y).abs() <= 10f64.powi(-digits) * y.abs().max(f64::MIN_POSITIVE)
}

fn external_fixtures() -> Outcome {
    let Ok(dir) = std::env::var("RANKIN_FIXTURE_DIR") else {
        return Outcome::Skip("RANKIN_FIXTURE_DIR not set".into());
    };
    let dir = PathBuf::from(dir);
    let mut notes = Vec::new();
    let mut ok = true;
    let mut ran = false;

    let k20 = dir.join("k20");
    if k20.join("manifest.json").exists() {
        ran = true;
        let res = load_manifest(&k20, 20, 1e-40).and_then(|input| {
            let mut gram_for = gram_memo(20, 1e-40);
            certify(&input, &mut gram_for).map_err(|e| e.to_string())
        });
        match res {
            Ok(rep) => {
                let (dm, dd) = rep.det_interval().unwrap_or((0.0, f64::INFINITY));
                let mut good = rep.verdict == Verdict::Independent;
                if let Ok(t) = std::fs::read_to_string(k20.join("expected.json")) {
                    let e: serde_json::Value = serde_json::from_str(&t).unwrap_or_default();
                    if let Some(want) = e["d_m"].as_f64() {
                        good &= want.signum() == dm.signum() && (dm / want).log10().abs() < 1.0;
                    }
                }
                ok &= good;
                notes.push(format!("k=20 verdict={} D_m={:.3e} D_delta={:.1e}", rep.verdict.as_str(), dm, dd));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("k=20 {}", e));
            }
        }
    }

    let forms: Vec<(String, SiegelEigenformData)> = ["a", "b"]
        .iter()
        .filter_map(|s| {
            let p = dir.join(format!("upsilon24{}.json", s));
            p.exists().then(|| (s.to_string(), load_eigenform(&p).expect("eigenform fixture")))
        })
        .collect();
    if forms.len() == 2 {
        ran = true;
        let mut gram_for = gram_memo(24, 1e-20);
        for (i, (si, f)) in forms.iter().enumerate() {
            for (sj, g) in &forms[i..] {
                let want = load_series(&data_dir().join(format!("dtilde_24{}{}.json", si, sj)));
                let got = petersson_sequence(f, g, want.len(), &mut gram_for)
                    .and_then(|s| dtilde(&zeta_convolve(24, &s)));
                let good = got.as_ref().is_ok_and(|got| (1..=want.len()).all(|n| rel_close(got.get(n), want.get(n), 8)));
                ok &= good;
                notes.push(format!("D~24{}{} 8 digits={}", si, sj, good));
            }
        }
        let spin = load_series(&data_dir().join("upsilon24a_spinor.json"));
        let f = &forms[0].1;
        let res = fj_slice(f, 1)
            .map_err(|e| e.to_string())
            .and_then(|phi| {
                let g = lift_index_one(&phi, spin.len() as i64, f.disc_bound).map_err(|e| e.to_string())?;
                let norm = petersson_real(&phi, &phi, &gram_for(1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let seq = petersson_sequence(f, &g, spin.len(), &mut gram_for).map_err(|e| e.to_string())?;
                let conv = zeta_convolve(24, &seq);
                Ok((1..=spin.len()).all(|n| conv.get(n).div(&norm).is_ok_and(|a| rel_close(&a, spin.get(n), 10))))
            });
        let good = res.as_ref().is_ok_and(|&b| b);
        ok &= good;
        notes.push(format!("a(N)=b(N) 10 digits={:?}", res));
    }
    if !ran {
        return Outcome::Skip(format!("no k20/manifest.json or upsilon24a/b.json in {}", dir.display()));
    }
    verdict(ok, notes.join(", "))
}

fn exact_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let v = &f * &a[c][j];
                a[r][j] -= v;
            }
        }
    }
    det
}

fn determinants() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut bad = 0;
    let mut zero_bad = 0;
    for trial in 0..1000 {
        let mut m: Vec<Vec<BigRational>> = (0..5)
            .map(|_| {
                (0..5)
                    .map(|_| BigRational::new(BigInt::from(rng.gen_range(-60i64..60)), BigInt::from(rng.gen_range(1i64..9))))
                    .collect()
            })
            .collect();
        let singular = trial % 4 == 0;
        if singular {
            let (a, b) = (BigInt::from(rng.gen_range(-3i64..4)), BigInt::from(rng.gen_range(-3i64..4)));
            m[4] = (0..5)
                .map(|j| &m[0][j] * BigRational::from_integer(a.clone()) + &m[2][j] * BigRational::from_integer(b.clone()))
                .collect();
        }
        let rad = 10f64.powi(-rng.gen_range(3i32..15));
        let balls: Vec<Vec<BallReal>> = m
            .iter()
            .map(|r| r.iter().map(|x| BallReal::from_rational(x, 128).add_error(Mag::from_f64_up(rad))).collect())
            .collect();
        let d = exact_det(&m);
        match interval_det(&balls) {
            Ok(r) => {
                if !r.det.contains_rational(&d) {
                    bad += 1;
                }
                if singular && !r.det.contains_zero() {
                    zero_bad += 1;
                }
            }
            // no pivot: the determinant enclosure is all of R
            Err(_) => {}
        }
    }
    verdict(bad == 0 && zero_bad == 0, format!("1000 matrices, misses={} singular misses={}", bad, zero_bad))
}

fn main() {
    let mut r = Report { failed: 0 };
    r.run(1, "Gauss sums vs eighth-root formula, 1<=a,b<=60", "radius <= 1e-30", gauss);
    r.run(2, "Weil closed form vs generators, unitary, projective; N=1..6, 200 matrices", "radius <= 1e-40", weil);
    r.run(3, "Gram matrices symmetric, real and certified", "eps 1e-15", gram_structure);
    r.run(4, "greedy basis sizes and next candidate", "eps 1e-15", greedy_dims);
    r.run(5, "Maass lift ratios <F_p,F_p>/<F_1,F_1> contain lambda_p", "rel width < 1e-6", maass_ratios);
    r.run(6, "Petersson norms agree across anchor sets, k=10, N=1..3", "balls intersect", anchor_invariance);
    r.run(7, "spinor coefficients multiplicative, D~ is not", "exact / certified", multiplicativity);
    r.run(8, "external eigenform fixtures (k=20 certificate, weight 24 series)", "8 and 10 digits", external_fixtures);
    r.run(9, "interval determinant encloses exact determinant", "radii 1e-3..1e-14", determinants);
    if r.failed > 0 {
        println!("{} criteria failed", r.failed);
        std::process::exit(1);
    }
}
