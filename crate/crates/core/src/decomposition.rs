//! Conversion between displacement traces on Γ_a and scalar-potential traces.

use alloc::format;
use alloc::vec::Vec;

use crate::config::ProblemConfig;
use crate::spectral::{analyze, synthesize, ModeCoefficients, TbcSources, UniformGrid, VerticalWavenumbers};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Sampled total displacement on Γ_a.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldRecord {
    pub xs: Vec<f64>,
    pub u1: Vec<C64>,
    pub u2: Vec<C64>,
    pub period: f64,
    /// Noise level applied to the samples (0 for clean data).
    pub delta: f64,
    pub seed: u64,
}

impl FarFieldRecord {
    /// Checks lengths and that `xs` is uniform over one period.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.xs.len();
        if n < 2 || self.u1.len() != n || self.u2.len() != n {
            return Err(Error::Dimension(format!(
                "record lengths xs={n}, u1={}, u2={}",
                self.u1.len(),
                self.u2.len()
            )));
        }
        let h = self.period / n as f64;
        for (i, x) in self.xs.iter().enumerate() {
            if (x - (self.xs[0] + i as f64 * h)).abs() > 1e-9 * self.period {
                return Err(Error::Dimension(format!("sample {i} is off the uniform grid")));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> UniformGrid {
        UniformGrid { x0: self.xs[0], period: self.period, count: self.xs.len() }
    }
}

/// Fourier coefficients (φ₁ₙ, φ₂ₙ) on Γ_a from a measured displacement record.
pub fn potentials_from_displacement(
    rec: &FarFieldRecord,
    config: &ProblemConfig,
    vw: &VerticalWavenumbers,
    src: &TbcSources,
    n_max: usize,
) -> Result<(ModeCoefficients, ModeCoefficients), Error> {
    rec.validate()?;
    let grid = rec.grid();
    let u1 = analyze(&rec.u1, &grid, n_max)?;
    let u2 = analyze(&rec.u2, &grid, n_max)?;
    let u1 = ModeCoefficients::from_values("u1", u1, config.a);
    let u2 = ModeCoefficients::from_values("u2", u2, config.a);
    potentials_from_modes(&u1, &u2, config, vw, src)
}

/// Mode-wise Cramer solve of the Γ_a system for (φ₁ₙ, φ₂ₙ).
pub fn potentials_from_modes(
    u1: &ModeCoefficients,
    u2: &ModeCoefficients,
    config: &ProblemConfig,
    vw: &VerticalWavenumbers,
    src: &TbcSources,
) -> Result<(ModeCoefficients, ModeCoefficients), Error> {
    let n_max = u1.n_max();
    let mut phi1 = ModeCoefficients::zeros("phi1", n_max, config.a);
    let mut phi2 = ModeCoefficients::zeros("phi2", n_max, config.a);
    for n in u1.modes() {
        let a = vw.alpha(n);
        let d = vw.checked_denom(n, config.omega)?;
        let p1 = u1.get(n) - src.g_mode(2, n);
        let p2 = u2.get(n) - src.g_mode(1, n);
        phi1.set(n, -I * (p1 * a + vw.beta(2, n) * p2) / d);
        phi2.set(n, I * (p2 * a - vw.beta(1, n) * p1) / d);
    }
    Ok((phi1, phi2))
}

/// Displacement coefficients on Γ_a from potential coefficients.
pub fn displacement_modes(
    phi1: &ModeCoefficients,
    phi2: &ModeCoefficients,
    vw: &VerticalWavenumbers,
    src: &TbcSources,
) -> (ModeCoefficients, ModeCoefficients) {
    let mut u1 = ModeCoefficients::zeros("u1", phi1.n_max(), phi1.height);
    let mut u2 = u1.clone();
    u2.label = "u2".into();
    for n in phi1.modes() {
        let a = vw.alpha(n);
        let (f1, f2) = (phi1.get(n), phi2.get(n));
        u1.set(n, I * a * f1 + I * vw.beta(2, n) * f2 + src.g_mode(2, n));
        u2.set(n, I * vw.beta(1, n) * f1 - I * a * f2 + src.g_mode(1, n));
    }
    (u1, u2)
}

/// Synthesizes the displacement record produced by potentials on Γ_a.
pub fn displacement_from_potentials(
    phi1: &ModeCoefficients,
    phi2: &ModeCoefficients,
    vw: &VerticalWavenumbers,
    src: &TbcSources,
    grid: &UniformGrid,
) -> FarFieldRecord {
    let (u1, u2) = displacement_modes(phi1, phi2, vw, src);
    FarFieldRecord {
        xs: grid.points(),
        u1: synthesize(&u1.values, grid),
        u2: synthesize(&u2.values, grid),
        period: grid.period,
        delta: 0.0,
        seed: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{derive_wavenumbers, mode_grid};
    use crate::spectral::{tbc_sources, vertical_wavenumbers, ResonancePolicy};
    use num_traits::Zero;

    fn setup() -> (ProblemConfig, VerticalWavenumbers, TbcSources) {
        let c = ProblemConfig::example(4.0, 3.1).unwrap();
        let w = derive_wavenumbers(&c).unwrap();
        let g = mode_grid(&c, &w);
        (c, vertical_wavenumbers(&w, &g, ResonancePolicy::Reject).unwrap(), tbc_sources(&c, &w))
    }

    #[test]
    fn zero_potentials_give_source_only() {
        let (c, v, s) = setup();
        let z = ModeCoefficients::zeros("phi", 6, c.a);
        let rec = displacement_from_potentials(&z, &z, &v, &s, &UniformGrid::measurement(c.period, 500));
        assert!(rec.u1.iter().all(|u| u.norm() < 1e-15));
        assert!(rec.u2.iter().all(|u| (u - s.g1).norm() < 1e-13));
    }

    #[test]
    fn single_shear_mode() {
        let (c, v, s) = setup();
        let z = ModeCoefficients::zeros("phi1", 6, c.a);
        let mut p2 = z.clone();
        p2.set(0, C64::from(1.0));
        let (u1, u2) = displacement_modes(&z, &p2, &v, &s);
        assert!((u1.get(0) - I * v.beta(2, 0)).norm() < 1e-15);
        assert!((u2.get(0) - s.g1).norm() < 1e-15);
    }

    #[test]
    fn roundtrip_single_mode() {
        let (c, v, s) = setup();
        let mut p1 = ModeCoefficients::zeros("phi1", 6, c.a);
        p1.set(0, C64::from(1.0));
        let p2 = ModeCoefficients::zeros("phi2", 6, c.a);
        let rec = displacement_from_potentials(&p1, &p2, &v, &s, &UniformGrid::measurement(c.period, 500));
        let (q1, q2) = potentials_from_displacement(&rec, &c, &v, &s, 6).unwrap();
        assert!((q1.get(0) - C64::from(1.0)).norm() < 1e-12);
        assert!(q2.values.iter().all(|z| z.norm() < 1e-12));
        assert!(q1.values.iter().enumerate().all(|(k, z)| k == 6 || z.is_zero() || z.norm() < 1e-12));
    }
}
