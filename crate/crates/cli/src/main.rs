use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use willmore_core::geometry::GridSpec;
use willmore_core::real::Precision;
use willmore_core::report::{run_suite, RadiiSpec, Report, Suite, SuiteConfig, SurfaceSpec};

const CSV_HELP: &str = "\
CSV columns by suite:
  identities    x, y, unit_norm, orthogonality, h_from_y, pullback, null_dz, null_dzz, gradient_forms
  energies      nx, ny, w, e, total_a, area, gauss_int, w_error
  willmore      x, y, residual, normalized
  quartic       z_re, z_im, abs_q, arg_q, abs_dzbar_q, z4_q, z2_q, z1_q, relative_q
  branch        puncture, radius, sup_q, r_sup_q, relative_q
  monotonicity  t, big_t, lhs, rhs, tolerance, holds
  convergence   level, nx, ny, w, error

Exit codes: 0 all checks pass, 1 a check fails, 2 invalid configuration, 3 numerical failure.
Thread count: WILLMORE_LAB_THREADS (defaults to all cores).";

/// Run a named suite of checks on one surface and write a JSON report.
#[derive(Debug, Parser)]
#[command(name = "willmore-lab", version, after_help = CSV_HELP)]
struct Args {
    /// Zoo surface, e.g. `sphere`, `inverted-enneper` or `ellipsoid(1,1,2)`.
    #[arg(long, conflicts_with = "dsl_file")]
    surface: Option<String>,

    /// File holding an immersion in the expression language.
    #[arg(long, requires = "domain")]
    dsl_file: Option<PathBuf>,

    /// Parameter domain of a DSL surface: cylinder:T0:T1, disk:T0:T1, torus:PX:PY or rect:X0:X1:Y0:Y1.
    #[arg(long)]
    domain: Option<String>,

    /// Quadrature grid as NXxNY.
    #[arg(long, default_value = "256x64")]
    grid: String,

    /// Jet order, 2 to 6.
    #[arg(long, default_value_t = 5)]
    jet_order: usize,

    /// `double` or `extended`.
    #[arg(long, default_value = "double")]
    precision: String,

    /// Radii as r0:ratio:count.
    #[arg(long)]
    radii: Option<String>,

    /// JSON report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    /// CSV table path.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// identities, energies, willmore, quartic, branch, monotonicity or convergence.
    #[arg(long)]
    suite: String,

    /// Refinement levels for the convergence suite.
    #[arg(long, default_value_t = 3)]
    levels: usize,

    /// Record wall-clock time in the report.
    #[arg(long)]
    timings: bool,
}

fn config(args: &Args) -> Result<SuiteConfig, String> {
    let surface = match (&args.surface, &args.dsl_file) {
        (Some(s), None) => SurfaceSpec::Zoo(s.clone()),
        (None, Some(p)) => {
            let source = fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let domain = args.domain.clone().ok_or("--dsl-file needs --domain")?;
            SurfaceSpec::Dsl { source, path: Some(p.clone()), domain }
        }
        _ => return Err("exactly one of --surface or --dsl-file is required".into()),
    };
    let suite: Suite = args.suite.parse().map_err(|e| format!("{e}"))?;
    let mut cfg = SuiteConfig::new(surface, suite);
    cfg.grid = args.grid.parse::<GridSpec>().map_err(|e| format!("{e}"))?;
    cfg.jet_order = args.jet_order;
    cfg.precision = args.precision.parse::<Precision>().map_err(|e| format!("{e}"))?;
    cfg.radii = args.radii.as_deref().map(|r| r.parse::<RadiiSpec>()).transpose().map_err(|e| format!("{e}"))?;
    cfg.levels = args.levels;
    cfg.timings = args.timings;
    Ok(cfg)
}

fn write_csv(report: &Report, path: &PathBuf) -> Result<(), String> {
    let table = report.table.as_ref().ok_or("suite produced no table")?;
    let mut w = csv::Writer::from_path(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    w.write_record(&table.columns).map_err(|e| e.to_string())?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("WILLMORE_LAB_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("WILLMORE_LAB_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err("WILLMORE_LAB_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match init_threads().and_then(|_| config(&args)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match &args.out {
        Some(p) => {
            if let Err(e) = fs::write(p, json + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => {
            let _ = writeln!(std::io::stdout(), "{json}");
        }
    }
    if let Some(p) = &args.csv {
        if let Err(e) = write_csv(&report, p) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    for c in &report.checks {
        eprintln!("{} {} = {:e} ({} {:e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.relation, c.tolerance);
    }
    if let Some(a) = &report.aborted {
        eprintln!("aborted: {a}");
    }
    ExitCode::from(report.exit_code() as u8)
}
