use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rodwave::cache::{load_or_build, CacheKey, PoleCache};
use rodwave::check::run_check;
use rodwave::config::{Overrides, RunConfig};
use rodwave::grid::{evaluate_grid, with_threads};
use rodwave::output::{write_csv, FieldSummary, PoleSummary, RunManifest};
use rodwave::{RunError, RunResult};
use rodwave_core::fields::nondimensionalize;
use rodwave_core::poles::build_pole_set;
use rodwave_core::{MaterialParams, PoleSet};

/// Stress relaxation in a fractional viscoelastic rod.
#[derive(Parser)]
#[command(name = "rodwave", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration; without it the default relaxation grids are used
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for grid evaluation
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Upper limit of the cut integrals
    #[arg(long, global = true)]
    qmax: Option<f64>,
    /// Number of pole pairs in the residue sums
    #[arg(long, global = true)]
    nres: Option<usize>,
    /// Relative tolerance of the cut quadrature
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the configured fields on their grids; writes fields.csv and manifest.json
    Relax(Common),
    /// Build a pole set and write it as a JSON cache
    Poles {
        #[command(flatten)]
        common: Common,
        /// Override params.a
        #[arg(long)]
        a: Option<f64>,
        /// Override params.b
        #[arg(long)]
        b: Option<f64>,
    },
    /// Compare fields with the numerical Laplace inversion
    Check(Common),
    /// Scale the configured physical record to dimensionless form
    Nondim(Common),
}

fn load(common: &Common) -> RunResult<RunConfig> {
    if common.threads == Some(0) {
        return Err(RunError::Config("--threads must be at least 1".into()));
    }
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    cfg.apply(Overrides { q_max: common.qmax, n_residues: common.nres, rel_tol: common.tol })?;
    Ok(cfg)
}

fn poles_for(cfg: &RunConfig) -> RunResult<PoleSet> {
    load_or_build(&cfg.params, cfg.solver.n_residues, &cfg.solver.roots, cfg.pole_cache.as_deref())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> RunResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n")?;
    Ok(())
}

fn relax(common: &Common) -> RunResult<()> {
    let cfg = load(common)?;
    let started = Instant::now();
    fs::create_dir_all(&common.out)?;
    let poles = poles_for(&cfg)?;
    let grids = with_threads(common.threads, || {
        cfg.fields
            .iter()
            .map(|&f| evaluate_grid(f, cfg.grid_for(f), &cfg.forcing, &cfg.params, &poles, &cfg.solver))
            .collect::<rodwave_core::Result<Vec<_>>>()
    })?;
    let csv_path = common.out.join("fields.csv");
    write_csv(BufWriter::new(File::create(&csv_path)?), &grids)
        .map_err(|e| RunError::Io(std::io::Error::other(e)))?;

    let mut manifest = RunManifest::new("relax", &cfg, common.threads);
    manifest.poles = PoleSummary::of(&poles);
    manifest.fields = grids.iter().map(FieldSummary::of).collect();
    manifest.outputs = vec!["fields.csv".into()];
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    write_json(&common.out.join("manifest.json"), &manifest)?;
    for s in &manifest.fields {
        println!("{}: {} samples, max error estimate {:.3e}", s.field, s.samples, s.max_error_estimate);
    }
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn poles(common: &Common, a: Option<f64>, b: Option<f64>) -> RunResult<()> {
    let mut cfg = load(common)?;
    if a.is_some() || b.is_some() {
        cfg.params = MaterialParams::new(a.unwrap_or(cfg.params.a()), b.unwrap_or(cfg.params.b()))
            .map_err(|e| RunError::Config(format!("params: {e}")))?;
    }
    let n = cfg.solver.n_residues;
    let set = build_pole_set(n, &cfg.params, &cfg.solver.roots)?;
    println!("{:>5} {:>24} {:>24} {:>10} {:>10}", "n", "re", "im", "residual", "asym_gap");
    for p in &set.poles {
        println!(
            "{:>5} {:>24.16e} {:>24.16e} {:>10.2e} {:>10.2e}",
            p.index,
            p.location.re,
            p.location.im,
            p.residual,
            set.asymptotic_gap(p)
        );
    }
    let flagged = set.flagged();
    if !flagged.is_empty() {
        println!("flagged: {flagged:?}");
    }
    fs::create_dir_all(&common.out)?;
    let key = CacheKey::new(&cfg.params, n, &cfg.solver.roots);
    let path = common.out.join(key.file_name());
    fs::write(&path, PoleCache { key, poles: set }.to_json())?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Returns whether every sample is within tolerance.
fn check(common: &Common) -> RunResult<bool> {
    let cfg = load(common)?;
    let poles = poles_for(&cfg)?;
    let report = run_check(&cfg, &poles)?;
    for s in &report.samples {
        println!(
            "{:<6} x={:<5} t={:<6} field={:<22} oracle={:<22} rel_diff={:.2e}",
            s.quantity, s.x, s.t, s.field, s.oracle, s.rel_diff
        );
    }
    println!(
        "max rel diff {:.3e} (tolerance {:.1e}): {}",
        report.max_rel_diff,
        report.tolerance,
        if report.passed { "PASS" } else { "FAIL" }
    );
    fs::create_dir_all(&common.out)?;
    write_json(&common.out.join("check.json"), &report)?;
    Ok(report.passed)
}

fn nondim(common: &Common) -> RunResult<()> {
    let cfg = load(common)?;
    let rec = cfg.nondim.ok_or_else(|| RunError::Config("nondim: the config has no physical record".into()))?;
    let d = nondimensionalize(&rec).map_err(|e| RunError::Config(format!("nondim: {e}")))?;
    let text = serde_json::to_string_pretty(&d).expect("serializable");
    println!("{text}");
    fs::create_dir_all(&common.out)?;
    fs::write(common.out.join("nondim.json"), text + "\n")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Relax(c) => relax(c),
        Command::Poles { common, a, b } => poles(common, *a, *b),
        Command::Check(c) => check(c).and_then(|ok| {
            if ok {
                Ok(())
            } else {
                Err(RunError::Numerical(rodwave_core::Error::OracleFailure("fields disagree with the inversion")))
            }
        }),
        Command::Nondim(c) => nondim(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rodwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
