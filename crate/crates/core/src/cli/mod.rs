//! Command-line front end. Every subcommand prints an aligned text table or
//! a JSON document; the exit code is 0 on success, 2 for an inconclusive
//! certificate and 1 on any error.

pub mod checks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    certify, dtilde, mult_check, mult_check_exact, petersson_sequence, zeta_convolve, CertifyInput, SeriesCoeffs,
    Verdict,
};
use crate::arith::signature;
use crate::forms::{dim_jacobi_cusp, greedy_basis, load_eigenform, load_or_compute, FormsError, GramData, GreedyOptions};
use crate::maass::{lift_eigenform, spinor_lambda_sequence};
use crate::poincare::CoeffOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "rankin", version, about = "Rigorous Petersson products of Jacobi forms and Rankin-type Dirichlet series")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Working precision in bits (default: derived from the error target).
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    #[arg(long, global = true, env = "RANKIN_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Sequential evaluation; results are identical either way.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Size of the worker pool (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss-sum sweep, Weil oracle equivalence and Gram symmetry.
    Selfcheck {
        /// Run with a deliberately corrupted signature table.
        #[arg(long)]
        inject_fault: bool,
        /// Random matrices per index in the Weil comparison.
        #[arg(long, default_value_t = 200)]
        matrices: usize,
        /// Skip the Gram symmetry checks.
        #[arg(long)]
        skip_gram: bool,
    },
    /// Compute and cache Gram matrices for a range of indices.
    Gram {
        #[arg(long)]
        k: i64,
        /// Index or inclusive range such as `1..4`.
        #[arg(long = "n", value_parser = parse_range)]
        n: (i64, i64),
        #[arg(long, default_value_t = 1e-15)]
        eps: f64,
        /// Number of anchors (default: the tabulated dimension).
        #[arg(long)]
        n_override: Option<usize>,
    },
    /// Petersson products `<F_N, G_N>` and the normalized series.
    Dseries {
        #[arg(long = "f", conflicts_with = "maass_k", required_unless_present = "maass_k")]
        f_path: Option<PathBuf>,
        #[arg(long = "g")]
        g_path: Option<PathBuf>,
        /// Use the Maass lift of the index-one cusp form of this weight.
        #[arg(long)]
        maass_k: Option<i64>,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-15)]
        eps: f64,
    },
    /// Interval-determinant independence certificate.
    Certify {
        #[arg(long)]
        k: i64,
        /// Directory with `manifest.json` and the eigenform files.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1e-40)]
        eps1: f64,
        /// Also write the certificate to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiplicativity check of a series file.
    Multcheck { series: PathBuf },
}

/// Parsed global options.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: Option<u32>,
    pub eps: Option<f64>,
    pub eps1: Option<f64>,
    pub cache_dir: Option<PathBuf>,
    pub deterministic: bool,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if let Some(p) = self.precision_bits {
            if p < 64 {
                return Err(format!("--precision-bits must be at least 64, got {}", p));
            }
        }
        for (name, e) in [("--eps", self.eps), ("--eps1", self.eps1)] {
            if let Some(e) = e {
                if !(e > 0.0 && e.is_finite()) {
                    return Err(format!("{} must be positive, got {}", name, e));
                }
            }
        }
        if self.workers == Some(0) {
            return Err("--workers must be positive".into());
        }
        Ok(())
    }

    pub fn coeff_options(&self) -> CoeffOptions {
        CoeffOptions {
            deterministic: self.deterministic,
            precision_bits: self.precision_bits,
            m_override: None,
        }
    }

    pub fn greedy_options(&self) -> GreedyOptions {
        GreedyOptions {
            coeff: self.coeff_options(),
            ..GreedyOptions::default()
        }
    }

    /// Hash over the settings that influence results (not the worker count).
    pub fn hash(&self, command: &str) -> String {
        let v = json!({
            "command": command,
            "precision_bits": self.precision_bits,
            "eps": self.eps,
            "eps1": self.eps1,
        });
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }
}

/// `a`, `a..b` or `a..=b`, both ends inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected N or A..B, got `{}`", s);
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo < 1 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn config_for(cli: &Cli) -> RunConfig {
    let (eps, eps1) = match &cli.command {
        Command::Gram { eps, .. } | Command::Dseries { eps, .. } => (Some(*eps), None),
        Command::Certify { eps1, .. } => (None, Some(*eps1)),
        _ => (None, None),
    };
    RunConfig {
        precision_bits: cli.global.precision_bits,
        eps,
        eps1,
        cache_dir: cli.global.cache_dir.clone(),
        deterministic: cli.global.deterministic,
        workers: cli.global.workers,
    }
}

/// Entry point of the binary.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    execute(&cli, &mut out)
}

/// Runs a parsed command, writing the report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> i32 {
    let cfg = config_for(cli);
    if let Err(e) = cfg.validate() {
        let _ = writeln!(out, "error: {}", e);
        return EXIT_ERROR;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(out, "error: {}", e);
            return EXIT_ERROR;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let res = pool.install(|| {
        let out: &mut dyn Write = &mut buf;
        match &cli.command {
        Command::Selfcheck { inject_fault, matrices, skip_gram } => {
            cmd_selfcheck(&cfg, *inject_fault, *matrices, *skip_gram, cli.global.format, out)
        }
        Command::Gram { k, n, eps, n_override } => cmd_gram(&cfg, *k, *n, *eps, *n_override, cli.global.format, out),
        Command::Dseries { f_path, g_path, maass_k, nmax, eps } => cmd_dseries(
            &cfg,
            f_path.as_deref(),
            g_path.as_deref(),
            *maass_k,
            *nmax,
            *eps,
            cli.global.format,
            out,
        ),
        Command::Certify { k, data, eps1, out: path } => {
            cmd_certify(&cfg, *k, data, *eps1, path.as_deref(), cli.global.format, out)
        }
        Command::Multcheck { series } => cmd_multcheck(&cfg, series, cli.global.format, out),
        }
    });
    let _ = out.write_all(&buf);
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {}", e);
            EXIT_ERROR
        }
    }
}

type CmdResult = Result<i32, String>;

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), String> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn w(out: &mut dyn Write, s: String) -> Result<(), String> {
    writeln!(out, "{}", s).map_err(|e| e.to_string())
}

pub fn cmd_selfcheck(
    cfg: &RunConfig,
    inject_fault: bool,
    matrices: usize,
    skip_gram: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let sig: checks::SignatureFn = if inject_fault { checks::corrupted_signature } else { signature };
    let mut report = Vec::new();
    let mut ok = true;

    let t = Instant::now();
    let fails = checks::gauss_sweep(60, 60, 128, 1e-30, sig);
    ok &= fails.is_empty();
    report.push(json!({
        "check": "gauss_sum_sweep",
        "passed": fails.is_empty(),
        "cases": checks::gauss_sweep_fractions(60, 60).len(),
        "failures": fails.iter().take(20).map(|(a, b)| json!({"a": a, "b": b})).collect::<Vec<_>>(),
        "failure_count": fails.len(),
        "seconds": t.elapsed().as_secs_f64(),
    }));

    let t = Instant::now();
    let weil_fails: Vec<_> = (1..=6i64)
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut f = checks::weil_sweep(n, matrices, 50, 1, 160, 1e-40, sig);
            f.extend(checks::weil_structure_sweep(n, matrices / 10 + 1, 50, 2, 160, sig));
            f
        })
        .collect();
    ok &= weil_fails.is_empty();
    report.push(json!({
        "check": "weil_oracle",
        "passed": weil_fails.is_empty(),
        "failures": weil_fails.iter().take(20).map(|f| json!({
            "N": f.n,
            "matrix": [f.matrix.a, f.matrix.b, f.matrix.c, f.matrix.d],
            "detail": f.detail,
        })).collect::<Vec<_>>(),
        "failure_count": weil_fails.len(),
        "seconds": t.elapsed().as_secs_f64(),
    }));

    if !skip_gram {
        for (k, n) in [(10i64, 1i64), (10, 2), (20, 1)] {
            let t = Instant::now();
            let dim = dim_jacobi_cusp(k, n).ok_or_else(|| format!("no dimension for ({}, {})", k, n))?;
            let (passed, detail) = match checks::gram_symmetry(k, n, dim, 1e-15, cfg.coeff_options()) {
                Ok((sym, rad)) => (sym, format!("max radius {:.3e}", rad.to_f64())),
                Err(e) => (false, e),
            };
            ok &= passed;
            report.push(json!({
                "check": format!("gram_symmetry k={} N={}", k, n),
                "passed": passed,
                "detail": detail,
                "seconds": t.elapsed().as_secs_f64(),
            }));
        }
    }

    match format {
        Format::Json => {
            let mut report = report.clone();
            if cfg.deterministic {
                for r in report.iter_mut() {
                    if let Some(o) = r.as_object_mut() {
                        o.remove("seconds");
                    }
                }
            }
            emit_json(out, &json!({"selfcheck": report, "passed": ok}))?
        }
        Format::Text => {
            for r in &report {
                let status = if r["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                w(out, format!("{:<28} {}  ({:.2}s)", r["check"].as_str().unwrap_or(""), status, r["seconds"].as_f64().unwrap_or(0.0)))?;
                if let Some(fs) = r["failures"].as_array() {
                    for f in fs {
                        if f.get("a").is_some() {
                            w(out, format!("    failing (a,b) = ({}, {})", f["a"], f["b"]))?;
                        } else {
                            w(out, format!("    N={} A={} {}", f["N"], f["matrix"], f["detail"].as_str().unwrap_or("")))?;
                        }
                    }
                }
                if let Some(d) = r.get("detail").and_then(|d| d.as_str()) {
                    w(out, format!("    {}", d))?;
                }
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_ERROR })
}

fn gram_source(
    cfg: &RunConfig,
    k: i64,
    eps: f64,
    n_override: Option<usize>,
) -> impl FnMut(i64) -> Result<(GramData, bool), FormsError> + '_ {
    let opts = cfg.greedy_options();
    move |n| {
        let dim = match n_override.or_else(|| dim_jacobi_cusp(k, n)) {
            Some(d) => d,
            None => {
                return Err(FormsError::InvariantViolation(format!(
                    "dim S_{{{},{}}} not tabulated; pass --n-override",
                    k, n
                )))
            }
        };
        match &cfg.cache_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                load_or_compute(dir, k, n, dim, eps, &opts)
            }
            None => greedy_basis(k, n, dim, eps, &opts).map(|g| (g, false)),
        }
    }
}

pub fn cmd_gram(
    cfg: &RunConfig,
    k: i64,
    range: (i64, i64),
    eps: f64,
    n_override: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let mut src = gram_source(cfg, k, eps, n_override);
    let mut rows = Vec::new();
    let mut timing = Vec::new();
    for n in range.0..=range.1 {
        let t = Instant::now();
        let (g, hit) = src(n).map_err(|e| format!("N={}: {}", n, e))?;
        let det = g.det().map(|d| d.display(12)).unwrap_or_else(|| "-".into());
        rows.push(json!({
            "N": n,
            "dim": g.dim(),
            "anchors": g.anchors.iter().map(|a| [a.d, a.r]).collect::<Vec<_>>(),
            "det": det,
            "max_radius": g.max_radius().to_f64(),
            "hash": g.content_hash(),
        }));
        timing.push((hit, t.elapsed().as_secs_f64()));
    }
    match format {
        Format::Json => emit_json(out, &json!({"k": k, "eps": eps, "config_hash": cfg.hash("gram"), "gram": rows}))?,
        Format::Text => {
            w(out, format!("{:>4} {:>4} {:>6} {:>8} {:>12} {:<40} {}", "N", "dim", "cached", "secs", "max rad", "anchors (D,r)", "det"))?;
            for (r, (hit, secs)) in rows.iter().zip(&timing) {
                let anchors: Vec<String> = r["anchors"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|a| format!("({},{})", a[0], a[1]))
                    .collect();
                w(out, format!(
                    "{:>4} {:>4} {:>6} {:>8.2} {:>12.3e} {:<40} {}",
                    r["N"].to_string(),
                    r["dim"].to_string(),
                    if *hit { "yes" } else { "no" },
                    secs,
                    r["max_radius"].as_f64().unwrap_or(0.0),
                    anchors.join(" "),
                    r["det"].as_str().unwrap_or("")
                ))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_dseries(
    cfg: &RunConfig,
    f_path: Option<&Path>,
    g_path: Option<&Path>,
    maass_k: Option<i64>,
    nmax: usize,
    eps: f64,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    if nmax == 0 {
        return Err("--nmax must be positive".into());
    }
    let (f, g) = match (maass_k, f_path) {
        (Some(k), _) => {
            let disc_bound = 32 * (nmax as i64).max(2);
            let f = lift_eigenform(k, nmax as i64, disc_bound, nmax).map_err(|e| e.to_string())?;
            (f.clone(), f)
        }
        (None, Some(p)) => {
            let f = load_eigenform(p).map_err(|e| e.to_string())?;
            let g = match g_path {
                Some(q) => load_eigenform(q).map_err(|e| e.to_string())?,
                None => f.clone(),
            };
            (f, g)
        }
        (None, None) => return Err("either --f or --maass-k is required".into()),
    };
    let mut src = gram_source(cfg, f.k, eps, None);
    let mut gram_for = |n: i64| src(n).map(|(g, _)| g);
    let seq = petersson_sequence(&f, &g, nmax, &mut gram_for).map_err(|e| e.to_string())?;
    let ratio = dtilde(&seq).map_err(|e| e.to_string())?;
    let conv = dtilde(&zeta_convolve(f.k, &seq)).map_err(|e| e.to_string())?;

    let lambdas = match maass_k {
        Some(k) => Some(spinor_lambda_sequence(k, nmax).map_err(|e| e.to_string())?),
        None => None,
    };
    let mut all_contained = true;
    let mut rows = Vec::new();
    for n in 1..=nmax {
        let mut row = json!({
            "N": n,
            "petersson": seq.get(n).to_decimal_string(),
            "ratio": ratio.get(n).to_decimal_string(),
            "dtilde": conv.get(n).to_decimal_string(),
        });
        if let Some(lam) = &lambdas {
            if is_prime(n) {
                let c = ratio.get(n).contains_int(lam[n].clone());
                all_contained &= c;
                row["lambda"] = json!(lam[n].to_string());
                row["contains_lambda"] = json!(c);
                row["rel_width"] = json!(ratio.get(n).rel_width());
            }
        }
        rows.push(row);
    }
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "F": f.name,
                "G": g.name,
                "k": f.k,
                "eps": eps,
                "config_hash": cfg.hash("dseries"),
                "rows": rows,
            }),
        )?,
        Format::Text => {
            w(out, format!("{:>4} {:>26} {:>26} {:>26}", "N", "<F_N,G_N>", "<F_N,G_N>/<F_1,G_1>", "D~(N)"))?;
            for n in 1..=nmax {
                w(out, format!(
                    "{:>4} {:>26} {:>26} {:>26}",
                    n,
                    seq.get(n).display(15),
                    ratio.get(n).display(15),
                    conv.get(n).display(15)
                ))?;
            }
            for r in &rows {
                if let Some(c) = r.get("contains_lambda") {
                    w(out, format!(
                        "p={:<3} lambda_p={:<14} contained={} rel.width={:.2e}",
                        r["N"].to_string(),
                        r["lambda"].as_str().unwrap_or(""),
                        c,
                        r["rel_width"].as_f64().unwrap_or(f64::NAN)
                    ))?;
                }
            }
        }
    }
    Ok(if all_contained { EXIT_OK } else { EXIT_ERROR })
}

/// `manifest.json` of a certification data directory: the interesting
/// eigenforms, the eigenforms contributing eigenvalue rows, and the matrix
/// size (optional, defaults to `e(e+1)/2 + d`).
pub fn load_manifest(dir: &Path, k: i64, eps1: f64) -> Result<CertifyInput, String> {
    let text = std::fs::read_to_string(dir.join("manifest.json")).map_err(|e| format!("manifest.json: {}", e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("manifest.json: {}", e))?;
    let list = |key: &str| -> Result<Vec<_>, String> {
        v[key]
            .as_array()
            .ok_or_else(|| format!("manifest.json: `{}` must be a list of file names", key))?
            .iter()
            .map(|p| {
                let p = p.as_str().ok_or_else(|| format!("manifest.json: bad entry in `{}`", key))?;
                load_eigenform(&dir.join(p)).map_err(|e| format!("{}: {}", p, e))
            })
            .collect()
    };
    let interesting = list("interesting")?;
    let eigen_rows = list("eigen_rows")?;
    if let Some(f) = interesting.iter().chain(&eigen_rows).find(|f| f.k != k) {
        return Err(format!("{} has weight {}, expected {}", f.name, f.k, k));
    }
    let e = interesting.len();
    let n = v["n"].as_u64().map(|n| n as usize).unwrap_or(e * (e + 1) / 2 + eigen_rows.len());
    Ok(CertifyInput {
        k,
        interesting,
        eigen_rows,
        n,
        eps1,
    })
}

pub fn cmd_certify(
    cfg: &RunConfig,
    k: i64,
    data: &Path,
    eps1: f64,
    path: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let input = load_manifest(data, k, eps1)?;
    let mut src = gram_source(cfg, k, eps1, None);
    let mut gram_for = |n: i64| src(n).map(|(g, _)| g);
    let report = certify(&input, &mut gram_for).map_err(|e| e.to_string())?;
    let mut j = report.to_json();
    j["config_hash"] = json!(cfg.hash("certify"));
    if let Some(p) = path {
        let bytes = serde_json::to_vec_pretty(&j).map_err(|e| e.to_string())?;
        crate::forms::atomic_write(p, &bytes).map_err(|e| e.to_string())?;
    }
    match format {
        Format::Json => emit_json(out, &j)?,
        Format::Text => {
            let (dm, dd) = report.det_interval().unwrap_or((f64::NAN, f64::NAN));
            w(out, format!("{:>4} {:>10} {:>10} {:>12} {:>12} {}", "k", "eps1", "eps2", "D_m", "D_delta", "verdict"))?;
            w(out, format!(
                "{:>4} {:>10.1e} {:>10.1e} {:>12.2e} {:>12.2e} {}",
                k,
                eps1,
                report.eps2.to_f64(),
                dm,
                dd,
                report.verdict.as_str()
            ))?;
        }
    }
    Ok(match report.verdict {
        Verdict::Independent => EXIT_OK,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

pub fn cmd_multcheck(_cfg: &RunConfig, path: &Path, format: Format, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e))?;
    let s = SeriesCoeffs::from_json(&v, 256).map_err(|e| e.to_string())?;
    let violations = mult_check(&s);
    let exact = mult_check_exact(&s);
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "series": s.label,
                "length": s.len(),
                "certified_violations": violations.iter().map(|x| json!({
                    "m": x.m, "n": x.n, "gap": x.gap.to_decimal_string(),
                })).collect::<Vec<_>>(),
                "exact_violations": exact.as_ref().map(|e| e.iter().map(|(m, n)| json!([m, n])).collect::<Vec<_>>()),
            }),
        )?,
        Format::Text => {
            w(out, format!("series {} ({} coefficients)", s.label, s.len()))?;
            if let Some(ex) = &exact {
                if ex.is_empty() {
                    w(out, "exact data: a(m)a(n) = a(mn) for every coprime pair in range".into())?;
                } else {
                    for (m, n) in ex {
                        w(out, format!("exact violation at (m,n) = ({}, {})", m, n))?;
                    }
                }
            }
            w(out, format!("{:>4} {:>4} {:>30}", "m", "n", "a(m)a(n) - a(mn)"))?;
            for x in &violations {
                w(out, format!("{:>4} {:>4} {:>30}", x.m, x.n, x.gap.display(12)))?;
            }
            if violations.is_empty() {
                w(out, "no certified violation".into())?;
            }
        }
    }
    Ok(EXIT_OK)
}
