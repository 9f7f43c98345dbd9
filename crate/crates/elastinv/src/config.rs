//! Run configuration: one flat TOML table shared by every command.

use std::path::Path;

use elastinv_core::forward::FdGrid;
use elastinv_core::inversion::{DEFAULT_ITERS, DEFAULT_RCOND, DEFAULT_TOL};
use elastinv_core::profile::{builtin_exact, builtin_profile, ProfileName};
use elastinv_core::{ProblemConfig, ResonancePolicy, SurfaceProfile};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lambda: f64,
    pub mu: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub omega: f64,
    /// Defaults to the built-in profile's period.
    pub period: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
    /// `example1`, `example2` or `flat`.
    pub profile: String,
    pub n_samples: usize,
    pub noise_delta: f64,
    pub seed: u64,
    /// `reject`, `allow` or `regularize`.
    pub resonance: String,
    pub resonance_shift: f64,
    /// Data grid [nx, ny]; defaults to nx = 65 and 32 intervals across the gap.
    pub grid: Option<[usize; 2]>,
    pub richardson: bool,
    pub iters: usize,
    pub rcond: f64,
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            mu: 1.0,
            rho0: 1.0,
            rho1: 4.0,
            omega: 2.0 * std::f64::consts::PI,
            period: None,
            a: 2.0,
            b: 0.05,
            epsilon: 0.01,
            profile: "example1".into(),
            n_samples: 500,
            noise_delta: 0.02,
            seed: 1,
            resonance: "reject".into(),
            resonance_shift: 1e-6,
            grid: None,
            richardson: true,
            iters: DEFAULT_ITERS,
            rcond: DEFAULT_RCOND,
            tol: DEFAULT_TOL,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub rho1: Option<f64>,
    pub delta: Option<f64>,
    pub iters: Option<usize>,
    pub rcond: Option<f64>,
    pub grid: Option<[usize; 2]>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.rho1 {
            self.rho1 = v;
        }
        if let Some(v) = o.delta {
            self.noise_delta = v;
        }
        if let Some(v) = o.iters {
            self.iters = v;
        }
        if let Some(v) = o.rcond {
            self.rcond = v;
        }
        if o.grid.is_some() {
            self.grid = o.grid;
        }
        self.check()
    }

    fn check(&self) -> Result<(), CliError> {
        self.problem()?;
        self.policy()?;
        let surface = self.surface()?;
        surface.check_below(self.b)?;
        if self.n_samples < 2 {
            return Err(CliError::Config("n_samples must be at least 2".into()));
        }
        if !(0.0..1.0).contains(&self.noise_delta) {
            return Err(CliError::Config("noise_delta must lie in [0, 1)".into()));
        }
        if !(self.rcond > 0.0 && self.rcond < 1.0) {
            return Err(CliError::Config("rcond must lie in (0, 1)".into()));
        }
        self.data_grid()?;
        Ok(())
    }

    fn profile_name(&self) -> Result<Option<ProfileName>, CliError> {
        match self.profile.as_str() {
            "flat" => Ok(None),
            name => Ok(Some(ProfileName::parse(name)?)),
        }
    }

    pub fn period(&self) -> Result<f64, CliError> {
        match (self.period, self.profile_name()?) {
            (Some(p), _) => Ok(p),
            (None, Some(name)) => Ok(name.period()),
            (None, None) => Err(CliError::Config("a flat profile needs an explicit period".into())),
        }
    }

    pub fn problem(&self) -> Result<ProblemConfig, CliError> {
        let c = ProblemConfig::new(self.lambda, self.mu, self.rho0, self.rho1, self.omega, self.period()?, self.a, self.b)?;
        Ok(c)
    }

    pub fn policy(&self) -> Result<ResonancePolicy, CliError> {
        match self.resonance.as_str() {
            "reject" => Ok(ResonancePolicy::Reject),
            "allow" => Ok(ResonancePolicy::Allow),
            "regularize" if self.resonance_shift > 0.0 => Ok(ResonancePolicy::Regularize { shift: self.resonance_shift }),
            "regularize" => Err(CliError::Config("resonance_shift must be positive".into())),
            other => Err(CliError::Config(format!("unknown resonance policy `{other}`"))),
        }
    }

    pub fn surface(&self) -> Result<SurfaceProfile, CliError> {
        let period = self.period()?;
        match self.profile_name()? {
            None => Ok(SurfaceProfile::flat(period)),
            Some(name) => {
                if (name.period() - period).abs() > 1e-12 {
                    return Err(CliError::Config(format!("{} has period {}, not {period}", name.as_str(), name.period())));
                }
                Ok(builtin_profile(name, self.n_samples)?.with_epsilon(self.epsilon))
            }
        }
    }

    /// f = εg at `xs`, when the profile is known.
    pub fn exact_surface(&self, xs: &[f64]) -> Option<Vec<f64>> {
        match self.profile_name().ok()? {
            None => Some(vec![0.0; xs.len()]),
            Some(name) => Some(xs.iter().map(|&x| self.epsilon * builtin_exact(name, x)).collect()),
        }
    }

    pub fn data_grid(&self) -> Result<FdGrid, CliError> {
        let [nx, ny] = self.grid.unwrap_or([65, (32.0 * self.a / self.b).round() as usize]);
        let g = FdGrid::new(nx, ny)?;
        g.kb(&self.problem()?)?;
        Ok(g)
    }

    /// Grid of the correction loop: half the data resolution in x and y.
    pub fn loop_grid(&self) -> Result<FdGrid, CliError> {
        let d = self.data_grid()?;
        let g = FdGrid::new(2 * ((d.nx - 1) / 4) + 1, d.ny / 2)?;
        g.kb(&self.problem()?)?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_experiments() {
        let c = RunConfig::parse("").unwrap();
        let p = c.problem().unwrap();
        assert_eq!(p, ProblemConfig::example(4.0, 3.1).unwrap());
        assert_eq!(c.data_grid().unwrap(), FdGrid::new(65, 1280).unwrap());
        assert_eq!(c.loop_grid().unwrap(), FdGrid::new(33, 640).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RunConfig::parse("rho1 = 0.5"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("colour = 1"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("profile = \"example3\""), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("epsilon = 0.1"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("grid = [65, 1001]"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("profile = \"flat\""), Err(CliError::Config(_))));
        assert!(RunConfig::parse("profile = \"flat\"\nperiod = 2.5").is_ok());
    }

    #[test]
    fn overrides_win() {
        let mut c = RunConfig::parse("rho1 = 2.0\nseed = 3").unwrap();
        c.apply(&Overrides { seed: Some(9), rho1: Some(1.0), ..Default::default() }).unwrap();
        assert_eq!((c.seed, c.rho1), (9, 1.0));
        assert!(c.apply(&Overrides { rcond: Some(2.0), ..Default::default() }).is_err());
    }

    #[test]
    fn toml_roundtrip() {
        let c = RunConfig { grid: Some([33, 640]), ..Default::default() };
        assert_eq!(RunConfig::parse(&c.to_toml()).unwrap(), c);
    }
}
