//! Quick oracle checks runnable from the command line.

use std::f64::consts::PI;

use elastinv_core::config::{derive_wavenumbers, mode_grid};
use elastinv_core::decomposition::{displacement_from_potentials, potentials_from_displacement};
use elastinv_core::forward::{flat_layered_oracle, solve_direct_fd, FdGrid};
use elastinv_core::linalg::{pseudo_inverse, CMatrix};
use elastinv_core::spectral::{incident_displacement, tbc_sources, vertical_wavenumbers, UniformGrid};
use elastinv_core::tfe::{order1_trace, tfe_recursion, TfeOptions};
use elastinv_core::{Error, ModeCoefficients, ProblemConfig, ResonancePolicy, SurfaceProfile, VerticalWavenumbers, C64};

type CheckFn = fn() -> Result<f64, Error>;

pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

fn constants() -> Result<f64, Error> {
    let w = derive_wavenumbers(&ProblemConfig::example(1.0, 3.1)?)?;
    let c4 = ProblemConfig::example(4.0, 3.1)?;
    let g4 = mode_grid(&c4, &derive_wavenumbers(&c4)?);
    let g1 = mode_grid(&ProblemConfig::example(1.0, 3.1)?, &w);
    let ok = w.kappa1 == PI && w.kappa2 == 2.0 * PI && g1.cutoff(1) == 1 && g4.cutoff(1) == 3 && g4.cutoff(2) == 6;
    Ok(if ok { 0.0 } else { 1.0 })
}

fn flux() -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for rho1 in [1.0, 2.0, 4.0] {
        let o = flat_layered_oracle(&ProblemConfig::example(rho1, 3.1)?)?;
        let inc = o.incident_flux().abs();
        worst = worst.max((o.reflected_flux() + o.incident_flux()).abs() / inc);
    }
    Ok(worst)
}

fn flat_fd() -> Result<f64, Error> {
    let c = ProblemConfig::example(4.0, 3.1)?;
    let o = flat_layered_oracle(&c)?.displacement(c.a);
    let inc = incident_displacement(&derive_wavenumbers(&c)?, c.a);
    let f = solve_direct_fd(&c, &SurfaceProfile::flat(c.period), FdGrid::from_ppw(&c, 20.0, 5)?, true)?;
    let err = (f.top_modes[0][2] - o[0]).norm().hypot((f.top_modes[1][2] - o[1]).norm());
    Ok(err / (o[0] - inc[0]).norm().hypot((o[1] - inc[1]).norm()))
}

fn decomposition() -> Result<f64, Error> {
    let c = ProblemConfig::example(4.0, 3.1)?;
    let w = derive_wavenumbers(&c)?;
    let vw = vertical_wavenumbers(&w, &mode_grid(&c, &w), ResonancePolicy::Reject)?;
    let src = tbc_sources(&c, &w);
    let vals = |s: f64| (0..13).map(|i| C64::new((i as f64 * s).sin(), (i as f64 * s).cos())).collect::<Vec<_>>();
    let (p1, p2) = (ModeCoefficients::from_values("phi1", vals(0.7), c.a), ModeCoefficients::from_values("phi2", vals(1.3), c.a));
    let rec = displacement_from_potentials(&p1, &p2, &vw, &src, &UniformGrid::measurement(c.period, 500));
    let (q1, q2) = potentials_from_displacement(&rec, &c, &vw, &src, 6)?;
    Ok((-6..=6).map(|n| (q1.get(n) - p1.get(n)).norm().max((q2.get(n) - p2.get(n)).norm())).fold(0.0, f64::max))
}

fn order1() -> Result<f64, Error> {
    let c = ProblemConfig::example(4.0, 3.1)?;
    let w = derive_wavenumbers(&c)?;
    let vw = VerticalWavenumbers::new(&w, c.period, 6, ResonancePolicy::Reject)?;
    let mut tau = [ModeCoefficients::zeros("tau1", 6, c.b), ModeCoefficients::zeros("tau2", 6, c.b)];
    for n in -6i64..=6 {
        tau[0].set(n, C64::new(0.3 + 0.1 * n as f64, -0.2));
        tau[1].set(n, C64::new(-0.1, 0.4 + 0.05 * n as f64));
    }
    let g = SurfaceProfile::new(0.01, c.period, vec![C64::new(0.0, 0.5), C64::default(), C64::new(0.0, -0.5)])?;
    let rec = tfe_recursion(&tau, &g, &c, &vw, 1, TfeOptions::default())?;
    let closed = order1_trace(&tau, &g, &c, &vw, 6)?;
    let mut worst = 0.0f64;
    for j in 1..=2 {
        let t = rec[1].trace_b(j);
        let scale = closed[j - 1].values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        for n in -6..=6 {
            worst = worst.max((t.get(n) - closed[j - 1].get(n)).norm() / scale);
        }
    }
    Ok(worst)
}

fn pinv() -> Result<f64, Error> {
    let vals = (0..12).map(|i| C64::new((i as f64).sin(), (2.0 * i as f64).cos())).collect();
    let a = CMatrix::from_vec(4, 3, vals)?;
    let (p, _, _) = pseudo_inverse(&a, 1e-12);
    let apa = a.matmul(&p).matmul(&a);
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..3 {
            worst = worst.max((apa[(i, j)] - a[(i, j)]).norm());
        }
    }
    Ok(worst)
}

/// Runs every check; a check that errors is reported with value ∞.
pub fn run() -> Vec<Check> {
    let checks: [(&'static str, CheckFn, f64); 6] = [
        ("wavenumbers and cutoffs", constants, 0.0),
        ("flat oracle energy flux", flux, 1e-10),
        ("flat FD vs oracle at 20 ppw", flat_fd, 1e-3),
        ("displacement/potential round trip", decomposition, 1e-10),
        ("order-1 closed form vs recursion", order1, 1e-8),
        ("pseudo-inverse A·A⁺·A = A", pinv, 1e-10),
    ];
    checks
        .into_iter()
        .map(|(name, f, tol)| Check { name, value: f().unwrap_or(f64::INFINITY), tol })
        .collect()
}
