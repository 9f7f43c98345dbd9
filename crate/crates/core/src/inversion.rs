//! Truncated linearized inversion and the nonlinear correction loop.

use alloc::format;
use alloc::vec::Vec;

use crate::config::{derive_wavenumbers, mode_grid, ModeGrid, ProblemConfig, Wavenumbers};
use crate::decomposition::{potentials_from_displacement, FarFieldRecord};
use crate::ftn::{far_to_near, SlabTraces};
use crate::linalg::{pseudo_inverse, CMatrix};
use crate::profile::SurfaceProfile;
use crate::spectral::{synthesize_at, tbc_sources, vertical_wavenumbers, ModeCoefficients, ResonancePolicy, TbcSources, UniformGrid, VerticalWavenumbers};
use crate::tfe::{m_kernels, order1_coefficient};
use crate::{Error, C64};

/// Default relative singular-value cutoff of the pseudo-inverse.
pub const DEFAULT_RCOND: f64 = 1e-6;
pub const DEFAULT_ITERS: usize = 3;
pub const DEFAULT_TOL: f64 = 1e-3;

/// Truncated system C s = t for the surface coefficients s_m = f_m.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedSystem {
    /// Row n, column k (both in −N_j..=N_j) holds C_j^{(n, n−k)}.
    pub c: CMatrix,
    pub t: Vec<C64>,
    pub s: Vec<C64>,
    pub sigma: Vec<f64>,
    pub pinv: Option<CMatrix>,
    pub kept_rank: usize,
    pub j_used: usize,
    pub n_j: usize,
    pub rcond: f64,
}

impl LinearizedSystem {
    pub fn dim(&self) -> usize {
        2 * self.n_j + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub xs: Vec<f64>,
    pub f_samples: Vec<f64>,
    /// Coefficients s_m, m = −N_j..=N_j.
    pub f_coeffs: Vec<C64>,
    pub iterations: usize,
    /// ‖f_l − f_{l−1}‖₂/‖f_l‖₂ per correction step.
    pub residual_history: Vec<f64>,
    /// f_0, f_1, … sampled on `xs`.
    pub iterates: Vec<Vec<f64>>,
    pub kept_rank: usize,
    /// Largest |Im Σ s_m e^{iα_m x}| before the real projection.
    pub max_imag: f64,
    /// Set when a forward solve failed; the result holds the last good iterate.
    pub aborted: Option<Error>,
}

/// φ_jn^{(0)}(b) = M_{j1}^{(n)}(b)τ₁ₙ + M_{j2}^{(n)}(b)τ₂ₙ.
pub fn order0_at_b(tau: &[ModeCoefficients; 2], b: f64, vw: &VerticalWavenumbers) -> [ModeCoefficients; 2] {
    let mut out = [ModeCoefficients::zeros("phi1_0", tau[0].n_max(), b), ModeCoefficients::zeros("phi2_0", tau[0].n_max(), b)];
    for n in tau[0].modes() {
        let (m, _) = m_kernels(n, b, b, vw);
        for j in 0..2 {
            out[j].set(n, m[j][0] * tau[0].get(n) + m[j][1] * tau[1].get(n));
        }
    }
    out
}

/// Builds C_j and t_j; rows of modes outside `kept_modes[j]` are zero.
pub fn assemble_system(
    traces: &SlabTraces,
    phi_b_measured: &[ModeCoefficients; 2],
    order0_trace_at_b: &[ModeCoefficients; 2],
    config: &ProblemConfig,
    vw: &VerticalWavenumbers,
    j: usize,
    n_j: usize,
) -> Result<LinearizedSystem, Error> {
    if !(j == 1 || j == 2) {
        return Err(Error::InvalidConfig(format!("potential index must be 1 or 2, got {j}")));
    }
    if n_j > traces.n_max() || n_j > vw.n_max {
        return Err(Error::Dimension(format!("N_j = {n_j} exceeds trace bandwidth {}", traces.n_max())));
    }
    let dim = 2 * n_j + 1;
    let nj = n_j as i64;
    let mut c = CMatrix::zeros(dim, dim);
    let mut t = alloc::vec![C64::default(); dim];
    for (row, n) in (-nj..=nj).enumerate() {
        if !traces.is_kept(j, n) {
            continue;
        }
        vw.checked_denom(n, config.omega)?;
        t[row] = phi_b_measured[j - 1].get(n) - order0_trace_at_b[j - 1].get(n);
        for (col, k) in (-nj..=nj).enumerate() {
            let m = n - k;
            if m.abs() > nj {
                continue;
            }
            vw.checked_denom(m, config.omega)?;
            let (t1, t2) = (traces.tau[0].get(m), traces.tau[1].get(m));
            c[(row, col)] = order1_coefficient(j, n, m, t1, t2, config.b, vw);
        }
    }
    Ok(LinearizedSystem { c, t, s: Vec::new(), sigma: Vec::new(), pinv: None, kept_rank: 0, j_used: j, n_j, rcond: DEFAULT_RCOND })
}

/// s = C†t through a truncated SVD.
pub fn solve_pseudo_inverse(mut sys: LinearizedSystem) -> Result<LinearizedSystem, Error> {
    if sys.c.max_abs() == 0.0 {
        return Err(Error::Singular("system matrix is identically zero".into()));
    }
    let (pinv, sigma, rank) = pseudo_inverse(&sys.c, sys.rcond);
    sys.s = pinv.matvec(&sys.t);
    sys.sigma = sigma;
    sys.kept_rank = rank;
    sys.pinv = Some(pinv);
    Ok(sys)
}

/// f(x) = Re Σ s_m e^{iα_m x} on the measurement grid.
pub fn reconstruct_surface(sys: &LinearizedSystem, period: f64, n_samples: usize) -> ReconstructionResult {
    let xs = UniformGrid::measurement(period, n_samples).points();
    let z = synthesize_at(&sys.s, period, &xs);
    let f: Vec<f64> = z.iter().map(|v| v.re).collect();
    ReconstructionResult {
        max_imag: z.iter().fold(0.0, |m, v| m.max(v.im.abs())),
        xs,
        iterates: alloc::vec![f.clone()],
        f_samples: f,
        f_coeffs: sys.s.clone(),
        iterations: 0,
        residual_history: Vec::new(),
        kept_rank: sys.kept_rank,
        aborted: None,
    }
}

/// Surface whose Fourier coefficients are those of Re Σ s_m e^{iα_m x}.
pub fn surface_from_coeffs(period: f64, s: &[C64]) -> Result<SurfaceProfile, Error> {
    let n = s.len();
    let sym = (0..n).map(|i| (s[i] + s[n - 1 - i].conj()) * 0.5).collect();
    SurfaceProfile::from_f_coeffs(period, sym)
}

/// Anything that produces the displacement on Γ_a for a given surface.
pub trait ForwardSolver {
    fn solve(&mut self, profile: &SurfaceProfile) -> Result<FarFieldRecord, Error>;
}

/// Shared quantities of one inversion run.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionSetup {
    pub config: ProblemConfig,
    pub wn: Wavenumbers,
    pub grid: ModeGrid,
    pub vw: VerticalWavenumbers,
    pub src: TbcSources,
    pub j: usize,
    pub rcond: f64,
}

impl InversionSetup {
    pub fn new(config: ProblemConfig, policy: ResonancePolicy) -> Result<Self, Error> {
        let wn = derive_wavenumbers(&config)?;
        let grid = mode_grid(&config, &wn);
        let vw = vertical_wavenumbers(&wn, &grid, policy)?;
        let src = tbc_sources(&config, &wn);
        Ok(Self { config, wn, grid, vw, src, j: 1, rcond: DEFAULT_RCOND })
    }

    pub fn n_j(&self) -> usize {
        self.grid.cutoff(self.j)
    }

    /// Measured record → slab traces with τ.
    pub fn traces(&self, rec: &FarFieldRecord) -> Result<SlabTraces, Error> {
        let (p1, p2) = potentials_from_displacement(rec, &self.config, &self.vw, &self.src, self.grid.n_max())?;
        far_to_near((&p1, &p2), &self.src, &self.config, &self.wn, &self.vw)
    }

    /// C_j and t_j built from a record.
    pub fn system(&self, rec: &FarFieldRecord) -> Result<LinearizedSystem, Error> {
        let traces = self.traces(rec)?;
        let phi_b = traces.phi_b(&self.wn);
        let phi0 = order0_at_b(&traces.tau, self.config.b, &self.vw);
        let mut sys = assemble_system(&traces, &phi_b, &phi0, &self.config, &self.vw, self.j, self.n_j())?;
        sys.rcond = self.rcond;
        Ok(sys)
    }

    /// Linearized reconstruction from a record.
    pub fn linearized(&self, rec: &FarFieldRecord, n_samples: usize) -> Result<(LinearizedSystem, ReconstructionResult), Error> {
        let sys = solve_pseudo_inverse(self.system(rec)?)?;
        let res = reconstruct_surface(&sys, self.config.period, n_samples);
        Ok((sys, res))
    }
}

fn l2(v: &[f64]) -> f64 {
    num_traits::Float::sqrt(v.iter().map(|x| x * x).sum::<f64>())
}

/// s^{[l]} = C†(t + C^{[f_{l−1}]}s^{[l−1]} − t^{[f_{l−1}]}), up to `max_iters` steps
/// or until the relative change of f drops below `tol`.
pub fn nonlinear_correction(
    initial: &ReconstructionResult,
    sys: &LinearizedSystem,
    setup: &InversionSetup,
    solver: &mut dyn ForwardSolver,
    max_iters: usize,
    tol: f64,
) -> Result<ReconstructionResult, Error> {
    let pinv = sys.pinv.as_ref().ok_or_else(|| Error::Singular("system has not been solved".into()))?;
    let period = setup.config.period;
    let mut res = initial.clone();
    let mut s = initial.f_coeffs.clone();
    for _ in 0..max_iters {
        let profile = surface_from_coeffs(period, &s)?;
        let rec = match solver.solve(&profile) {
            Ok(r) => r,
            Err(e) => {
                res.aborted = Some(e);
                return Ok(res);
            }
        };
        let sys_f = setup.system(&rec)?;
        let cs = sys_f.c.matvec(&s);
        let rhs: Vec<C64> = (0..sys.dim()).map(|i| sys.t[i] + cs[i] - sys_f.t[i]).collect();
        s = pinv.matvec(&rhs);
        let z = synthesize_at(&s, period, &res.xs);
        let f: Vec<f64> = z.iter().map(|v| v.re).collect();
        let diff: Vec<f64> = f.iter().zip(&res.f_samples).map(|(a, b)| a - b).collect();
        let change = l2(&diff) / l2(&f).max(f64::MIN_POSITIVE);
        res.max_imag = z.iter().fold(0.0, |m, v| m.max(v.im.abs()));
        res.f_samples = f.clone();
        res.f_coeffs = s.clone();
        res.iterates.push(f);
        res.iterations += 1;
        res.residual_history.push(change);
        if change < tol {
            break;
        }
    }
    Ok(res)
}

/// Relative L² distance between two sampled functions.
pub fn relative_l2_error(approx: &[f64], exact: &[f64]) -> f64 {
    let diff: Vec<f64> = approx.iter().zip(exact).map(|(a, b)| a - b).collect();
    l2(&diff) / l2(exact)
}
