use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mahlerlab::error::{Error, Result};
use mahlerlab::lfunc::{configured_curves, find_curve, lprime_chi_minus1, lprime_e_0, DirichletChar};
use mahlerlab::mahler::{mahler_2d_grid, mahler_jensen};
use mahlerlab::polyfam::Family;
use mahlerlab::quadrature::DEFAULT_TOL;
use mahlerlab::verify::report::{summary_line, write_csv, write_json};
use mahlerlab::verify::{exit_status, run_suite, Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "mahlerlab", version, about = "Mahler measures, their derivatives, and matching L-values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report every row.
    Verify {
        #[arg(long, value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        /// Override the tolerance of every counted row.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Worker threads (defaults to the number of cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Mahler measure of one family member.
    Measure {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, value_enum, default_value_t = Method::Jensen)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Grid size per angle for `grid2d`.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// L'(E, 0) for a configured curve or L'(chi, -1) for chi_-3, chi_-4.
    Lvalue {
        #[arg(long, conflicts_with = "chi", required_unless_present = "chi")]
        curve: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i32>,
    },
    /// Tabulate k against m for one family.
    Scan {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        k_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        k_max: f64,
        /// Number of intervals; the table has steps + 1 rows.
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Jensen,
    Grid2d,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Family::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain { .. } | Error::Structural(_) => 2,
        Error::NonConvergence { .. } | Error::NonFiniteIntegrand { .. } | Error::LeadingCoefficientVanishes { .. } => 3,
    }
}

fn verify(suite: Suite, tol: Option<f64>, csv: Option<PathBuf>, json: Option<PathBuf>, jobs: Option<usize>) -> Result<u8> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(Error::Config(format!("tolerance {t} must be positive")));
        }
    }
    let cfg = VerifyConfig {
        tol_override: tol,
        curves: configured_curves()?,
        ..VerifyConfig::default()
    };
    let rows = run_suite(suite, &cfg)?;
    for r in &rows {
        println!("{}", summary_line(r));
    }
    if let Some(path) = csv {
        write_csv(&rows, &path)?;
    }
    if let Some(path) = json {
        write_json(&rows, &path)?;
    }
    let status = exit_status(&rows);
    let counted = rows.iter().filter(|r| r.counts_toward_status());
    let failed = counted.clone().filter(|r| !r.passed).count();
    println!("{} rows, {} counted, {failed} failed", rows.len(), counted.count());
    Ok(status as u8)
}

fn measure(family: Family, k: f64, method: Method, tol: f64, grid: usize) -> Result<u8> {
    let p = family.polynomial(k);
    match method {
        Method::Jensen => {
            let r = mahler_jensen(&p, tol)?;
            println!("m = {}", r.value);
            println!("error_estimate = {:e}", r.error_estimate);
            Ok(if r.converged { 0 } else { 3 })
        }
        Method::Grid2d => {
            if grid < 32 {
                return Err(Error::Config("grid size must be at least 32".into()));
            }
            let fine = mahler_2d_grid(&p, grid);
            let coarse = mahler_2d_grid(&p, grid / 2);
            println!("m = {fine}");
            println!("error_estimate = {:e}", (fine - coarse).abs());
            Ok(0)
        }
    }
}

fn lvalue(curve: Option<String>, chi: Option<i32>) -> Result<u8> {
    match (curve, chi) {
        (Some(label), _) => {
            let curves = configured_curves()?;
            let c = find_curve(&curves, &label)?;
            println!("L'({}, 0) = {}", c.label, lprime_e_0(c)?);
        }
        (None, Some(d)) => {
            let chi = DirichletChar::new(d).map_err(|e| Error::Config(e.to_string()))?;
            println!("L'(chi_{d}, -1) = {}", lprime_chi_minus1(chi)?);
        }
        (None, None) => return Err(Error::Config("pass --curve or --chi".into())),
    }
    Ok(0)
}

fn scan(family: Family, k_min: f64, k_max: f64, steps: usize, csv: PathBuf, tol: f64) -> Result<u8> {
    if steps == 0 || !(k_min <= k_max) {
        return Err(Error::Config("need steps >= 1 and k-min <= k-max".into()));
    }
    let mut out = String::from("k,m,error_estimate\n");
    let mut status = 0;
    for i in 0..=steps {
        let k = k_min + (k_max - k_min) * i as f64 / steps as f64;
        let r = mahler_jensen(&family.polynomial(k), tol)?;
        if !r.converged {
            status = 3;
        }
        out.push_str(&format!("{k},{},{}\n", r.value, r.error_estimate));
    }
    std::fs::write(&csv, out).map_err(|e| Error::Config(format!("writing {}: {e}", csv.display())))?;
    println!("wrote {} rows to {}", steps + 1, csv.display());
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { suite, tol, csv, json, jobs } => verify(suite, tol, csv, json, jobs),
        Command::Measure { family, k, method, tol, grid } => measure(family, k, method, tol, grid),
        Command::Lvalue { curve, chi } => lvalue(curve, chi),
        Command::Scan { family, k_min, k_max, steps, csv, tol } => scan(family, k_min, k_max, steps, csv, tol),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
