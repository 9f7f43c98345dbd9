use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elastinv::commands::{self, default_out};
use elastinv::{selftest, CliError, Overrides, RunConfig};

/// Near-field imaging of a periodic surface through a dense elastic slab.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize clean and noisy far-field data with the FD solver.
    Forward {
        #[command(flatten)]
        common: Common,
        /// Also write the full field as field.bin.
        #[arg(long)]
        dump: bool,
    },
    /// Reconstruct the surface from a trace CSV.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Measurement CSV (x, re_u1, im_u1, re_u2, im_u2).
        trace: PathBuf,
    },
    /// Reconstruction error against slab density.
    BenchResolution {
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in oracle checks.
    Selftest,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; built-in defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Slab density; a comma-separated list for bench-resolution.
    #[arg(long, value_delimiter = ',')]
    rho1: Vec<f64>,
    /// Relative noise level.
    #[arg(long)]
    delta: Option<f64>,
    /// Nonlinear correction steps.
    #[arg(long)]
    iters: Option<usize>,
    /// Relative singular-value cutoff of the pseudo-inverse.
    #[arg(long)]
    rcond: Option<f64>,
    /// Data grid as nx,ny.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,
}

fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected nx,ny")?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok([p(a)?, p(b)?])
}

impl Common {
    /// Config file plus flag overrides; `single` rejects density lists.
    fn load(&self, single: bool) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if single && self.rho1.len() > 1 {
            return Err(CliError::Config("--rho1 takes a single value here".into()));
        }
        cfg.apply(&Overrides {
            seed: self.seed,
            rho1: self.rho1.first().copied(),
            delta: self.delta,
            iters: self.iters,
            rcond: self.rcond,
            grid: self.grid,
        })?;
        Ok(cfg)
    }

    fn out(&self, command: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| default_out(command))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Forward { common, dump } => {
            let cfg = common.load(true)?;
            let m = commands::forward(&cfg, common.config.as_deref(), &common.out("forward"), dump)?;
            report(&m.output_dir, &m.run_id);
        }
        Command::Reconstruct { common, trace } => {
            let cfg = common.load(true)?;
            let m = commands::reconstruct(&cfg, common.config.as_deref(), &trace, &common.out("reconstruct"))?;
            report(&m.output_dir, &m.run_id);
        }
        Command::BenchResolution { common } => {
            let cfg = common.load(false)?;
            let rho1s = if common.rho1.is_empty() { vec![1.0, 2.0, 4.0] } else { common.rho1.clone() };
            let (m, rows) = commands::bench_resolution(&cfg, common.config.as_deref(), &rho1s, &common.out("bench"))?;
            for r in &rows {
                println!("rho1={} N=({}, {}) linear={:.4} final={:.4}", r.rho1, r.cutoff[0], r.cutoff[1], r.err_linear, r.err_final);
            }
            report(&m.output_dir, &m.run_id);
        }
        Command::Selftest => {
            let checks = selftest::run();
            for c in &checks {
                println!("{} {:<36} {:.3e} (tol {:.0e})", if c.passed() { "ok  " } else { "FAIL" }, c.name, c.value, c.tol);
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                return Err(CliError::Numerical(elastinv_core::Error::Forward(format!("{failed} self-test check(s) failed"))));
            }
        }
    }
    Ok(())
}

fn report(dir: &Path, id: &str) {
    println!("run {id} written to {}", dir.display());
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
