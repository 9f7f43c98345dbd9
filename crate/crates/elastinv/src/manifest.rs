use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use elastinv_core::config::{derive_wavenumbers, mode_grid};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

/// Record of one command invocation, written as `manifest.json` next to its
/// artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// First 16 hex digits of SHA-256 over the command and the resolved config.
    pub run_id: String,
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub started: String,
    pub finished: Option<String>,
    pub kappa: [f64; 2],
    pub eta: [f64; 2],
    pub cutoff: [usize; 2],
    pub config: RunConfig,
    pub artifacts: Vec<String>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn run_id(command: &str, extra: &str, cfg: &RunConfig) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(extra.as_bytes());
    h.update([0]);
    h.update(cfg.to_toml().as_bytes());
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    /// `extra` carries command inputs that are not part of the config, such
    /// as an input file or a density list.
    pub fn start(command: &str, extra: &str, cfg: &RunConfig, config_path: Option<&Path>, out: &Path) -> Result<Self, CliError> {
        let problem = cfg.problem()?;
        let wn = derive_wavenumbers(&problem)?;
        let grid = mode_grid(&problem, &wn);
        Ok(Self {
            run_id: run_id(command, extra, cfg),
            command: command.into(),
            config_path: config_path.map(Path::to_path_buf),
            output_dir: out.to_path_buf(),
            seed: cfg.seed,
            started: now(),
            finished: None,
            kappa: [wn.kappa1, wn.kappa2],
            eta: [wn.eta1, wn.eta2],
            cutoff: [grid.cutoff(1), grid.cutoff(2)],
            config: cfg.clone(),
            artifacts: Vec::new(),
        })
    }

    /// Path of an artifact in the output directory, recorded in the manifest.
    pub fn artifact(&mut self, name: &str) -> PathBuf {
        self.artifacts.push(name.into());
        self.output_dir.join(name)
    }

    pub fn finish(mut self) -> Result<Self, CliError> {
        self.finished = Some(now());
        let path = self.output_dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(self)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_depends_on_inputs_only() {
        let c = RunConfig::default();
        assert_eq!(run_id("forward", "", &c), run_id("forward", "", &c));
        assert_eq!(run_id("forward", "", &c).len(), 16);
        assert_ne!(run_id("forward", "", &c), run_id("reconstruct", "", &c));
        let d = RunConfig { seed: 2, ..c.clone() };
        assert_ne!(run_id("forward", "", &c), run_id("forward", "", &d));
    }

    #[test]
    fn derived_quantities() {
        let m = RunManifest::start("forward", "", &RunConfig::default(), None, Path::new(".")).unwrap();
        assert_eq!(m.kappa, [std::f64::consts::PI, 2.0 * std::f64::consts::PI]);
        assert_eq!(m.cutoff, [3, 6]);
    }
}
