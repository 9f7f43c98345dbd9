use std::path::{Path, PathBuf};

use elastinv_core::config::{derive_wavenumbers, mode_grid};
use elastinv_core::decomposition::FarFieldRecord;
use elastinv_core::forward::{add_noise, solve_direct_fd, trace_at_top, FdSolver};
use elastinv_core::inversion::{nonlinear_correction, relative_l2_error, InversionSetup, LinearizedSystem, ReconstructionResult};
use elastinv_core::ModeCoefficients;

use crate::config::{Overrides, RunConfig};
use crate::error::CliError;
use crate::io;
use crate::manifest::RunManifest;

fn prepare(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))
}

/// Clean and noisy synthetic data for a config.
pub fn simulate(cfg: &RunConfig) -> Result<(elastinv_core::forward::ForwardField, FarFieldRecord, FarFieldRecord), CliError> {
    let field = solve_direct_fd(&cfg.problem()?, &cfg.surface()?, cfg.data_grid()?, cfg.richardson)?;
    let clean = trace_at_top(&field, cfg.n_samples);
    let noisy = add_noise(&clean, cfg.noise_delta, cfg.seed);
    Ok((field, clean, noisy))
}

pub fn forward(cfg: &RunConfig, config_path: Option<&Path>, out: &Path, dump: bool) -> Result<RunManifest, CliError> {
    prepare(out)?;
    let mut m = RunManifest::start("forward", "", cfg, config_path, out)?;
    let (field, clean, noisy) = simulate(cfg)?;
    let id = m.run_id.clone();
    io::write_record(&m.artifact("trace_clean.csv"), &id, &clean)?;
    io::write_record(&m.artifact("trace_noisy.csv"), &id, &noisy)?;
    if dump {
        io::write_field_dump(&m.artifact("field.bin"), &field)?;
    }
    m.finish()
}

/// Linearized reconstruction followed by `cfg.iters` correction steps.
pub fn invert(cfg: &RunConfig, rec: &FarFieldRecord) -> Result<(LinearizedSystem, ReconstructionResult), CliError> {
    let problem = cfg.problem()?;
    if (rec.period - problem.period).abs() > 1e-9 * problem.period {
        return Err(CliError::Config(format!("trace period {} differs from configured period {}", rec.period, problem.period)));
    }
    let mut setup = InversionSetup::new(problem, cfg.policy()?)?;
    setup.rcond = cfg.rcond;
    let (sys, res) = setup.linearized(rec, rec.xs.len())?;
    if cfg.iters == 0 {
        return Ok((sys, res));
    }
    let mut solver = FdSolver::new(problem, cfg.loop_grid()?, cfg.richardson, rec.xs.len());
    let res = nonlinear_correction(&res, &sys, &setup, &mut solver, cfg.iters, cfg.tol)?;
    Ok((sys, res))
}

pub fn reconstruct(cfg: &RunConfig, config_path: Option<&Path>, trace: &Path, out: &Path) -> Result<RunManifest, CliError> {
    let rec = io::read_record(trace)?;
    prepare(out)?;
    let mut m = RunManifest::start("reconstruct", &trace.display().to_string(), cfg, config_path, out)?;
    let (sys, res) = invert(cfg, &rec)?;
    let id = m.run_id.clone();

    let exact = cfg.exact_surface(&res.xs);
    let mut header = vec!["x".to_string()];
    if exact.is_some() {
        header.push("f_exact".into());
    }
    header.push("f_linear".into());
    header.extend((1..res.iterates.len()).map(|l| format!("f_iter{l}")));
    let rows: Vec<Vec<f64>> = (0..res.xs.len())
        .map(|i| {
            let mut r = vec![res.xs[i]];
            if let Some(e) = &exact {
                r.push(e[i]);
            }
            r.extend(res.iterates.iter().map(|f| f[i]));
            r
        })
        .collect();
    io::write_table(&m.artifact("reconstruction.csv"), &id, &header, &rows)?;

    let sv: Vec<Vec<f64>> = sys
        .sigma
        .iter()
        .enumerate()
        .map(|(i, &s)| vec![i as f64, s, if i < sys.kept_rank { 1.0 } else { 0.0 }])
        .collect();
    let sv_header = ["index", "sigma", "kept"].map(String::from);
    io::write_table(&m.artifact("singular_values.csv"), &id, &sv_header, &sv)?;
    let coeffs = ModeCoefficients::from_values("f", res.f_coeffs.clone(), 0.0);
    io::write_modes(&m.artifact("coefficients.csv"), &id, &coeffs)?;
    let m = m.finish()?;
    match res.aborted {
        Some(e) => Err(CliError::Numerical(e)),
        None => Ok(m),
    }
}

/// One row of the density sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub rho1: f64,
    pub cutoff: [usize; 2],
    pub err_linear: f64,
    pub err_final: f64,
}

fn bench_entry(cfg: &RunConfig) -> Result<BenchRow, CliError> {
    let problem = cfg.problem()?;
    let wn = derive_wavenumbers(&problem)?;
    let grid = mode_grid(&problem, &wn);
    let (_, _, noisy) = simulate(cfg)?;
    let (_, res) = invert(cfg, &noisy)?;
    if let Some(e) = res.aborted {
        return Err(CliError::Numerical(e));
    }
    let exact = cfg.exact_surface(&res.xs).ok_or_else(|| CliError::Config("bench needs a known profile".into()))?;
    Ok(BenchRow {
        rho1: cfg.rho1,
        cutoff: [grid.cutoff(1), grid.cutoff(2)],
        err_linear: relative_l2_error(&res.iterates[0], &exact),
        err_final: relative_l2_error(&res.f_samples, &exact),
    })
}

/// Entry i runs with seed `seed + i`; entries run on separate threads.
pub fn bench_resolution(cfg: &RunConfig, config_path: Option<&Path>, rho1s: &[f64], out: &Path) -> Result<(RunManifest, Vec<BenchRow>), CliError> {
    if rho1s.len() < 2 {
        return Err(CliError::Config("bench-resolution needs at least two densities".into()));
    }
    if cfg.profile == "flat" {
        return Err(CliError::Config("bench needs a known profile".into()));
    }
    let entries: Vec<RunConfig> = rho1s
        .iter()
        .enumerate()
        .map(|(i, &rho1)| {
            let mut c = RunConfig { rho1, seed: cfg.seed.wrapping_add(i as u64), ..cfg.clone() };
            c.apply(&Overrides::default())?;
            Ok(c)
        })
        .collect::<Result<_, CliError>>()?;
    prepare(out)?;
    let list = rho1s.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
    let mut m = RunManifest::start("bench-resolution", &list, cfg, config_path, out)?;
    let rows: Vec<BenchRow> = std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|c| s.spawn(move || bench_entry(c))).collect();
        handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect::<Result<_, _>>()
    })?;
    let header = ["rho1", "N1", "N2", "rel_L2_error_linear", "rel_L2_error_after_iters"].map(String::from);
    let table: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| vec![r.rho1, r.cutoff[0] as f64, r.cutoff[1] as f64, r.err_linear, r.err_final])
        .collect();
    let id = m.run_id.clone();
    io::write_table(&m.artifact("bench.csv"), &id, &header, &table)?;
    Ok((m.finish()?, rows))
}

/// Default output directory for a command.
pub fn default_out(command: &str) -> PathBuf {
    PathBuf::from("out").join(command)
}
