//! Far-to-near conversion through the slab b < y < a.
//!
//! The slab potentials ψ_j solve ψ'' + γ²ψ = 0 per mode with final data on
//! Γ_a; their traces on Γ_b give the near-field potentials and the data τ_j
//! of the reduced problem below the slab.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::config::{ProblemConfig, Wavenumbers};
use crate::spectral::{ModeCoefficients, TbcSources, VerticalWavenumbers};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Modes with |α_n| ≥ η_j(1 − KEEP_TOL) are treated as evanescent in the slab.
pub const KEEP_TOL: f64 = 1e-10;

/// Hatted slab quantities for one potential index j.
#[derive(Debug, Clone, PartialEq)]
pub struct HatQuantities {
    pub phi_hat: [ModeCoefficients; 2],
    pub beta_hat: [Vec<C64>; 2],
    pub g_hat: [ModeCoefficients; 2],
}

impl HatQuantities {
    pub fn beta_hat(&self, j: usize, n: i64) -> C64 {
        let m = self.phi_hat[0].n_max() as i64;
        self.beta_hat[j - 1][(n + m) as usize]
    }
}

/// Traces of the slab solution on Γ_b and the reduced-problem data τ.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabTraces {
    pub psi_b: [ModeCoefficients; 2],
    pub dpsi_b: [ModeCoefficients; 2],
    pub tau: [ModeCoefficients; 2],
    pub kept_modes: [Vec<i64>; 2],
}

impl SlabTraces {
    pub fn n_max(&self) -> usize {
        self.psi_b[0].n_max()
    }

    pub fn is_kept(&self, j: usize, n: i64) -> bool {
        self.kept_modes[j - 1].contains(&n)
    }

    /// Near-field potentials φ_jn(b) = (η_j²/κ_j²)ψ_jn(b).
    pub fn phi_b(&self, wn: &Wavenumbers) -> [ModeCoefficients; 2] {
        let scale = |j: usize| {
            let s = wn.eta(j).powi(2) / wn.kappa(j).powi(2);
            let mut out = self.psi_b[j - 1].clone();
            out.label = alloc::format!("phi{j}_b");
            out.values.iter_mut().for_each(|v| *v *= s);
            out
        };
        [scale(1), scale(2)]
    }
}

pub fn hat_quantities(
    phi: (&ModeCoefficients, &ModeCoefficients),
    src: &TbcSources,
    wn: &Wavenumbers,
    vw: &VerticalWavenumbers,
) -> HatQuantities {
    let ratio = |j: usize| wn.kappa(j).powi(2) / wn.eta(j).powi(2);
    let (c1, c2) = (wn.contrast_over_eta2(1), wn.contrast_over_eta2(2));
    let mut phi_hat = [phi.0.clone(), phi.1.clone()];
    let mut g_hat = [phi.0.clone(), phi.1.clone()];
    let mut beta_hat = [Vec::new(), Vec::new()];
    for j in 1..=2 {
        phi_hat[j - 1].label = alloc::format!("phi{j}_hat");
        g_hat[j - 1].label = alloc::format!("g{j}_hat");
    }
    for n in phi.0.modes() {
        let a = vw.alpha(n);
        let (f1, f2) = (phi.0.get(n), phi.1.get(n));
        phi_hat[0].set(n, f1 * ratio(1));
        phi_hat[1].set(n, f2 * ratio(2));
        beta_hat[0].push(vw.beta(1, n) / ratio(1));
        beta_hat[1].push(vw.beta(2, n) / ratio(2));
        g_hat[0].set(n, src.g_mode(1, n) - I * a * c2 * f2);
        g_hat[1].set(n, src.g_mode(2, n) + I * a * c1 * f1);
    }
    HatQuantities { phi_hat, beta_hat, g_hat }
}

/// ψ(y) solving ψ'' + γ²ψ = 0 with ψ(a) = φ̂ and ψ'(a) − iβ̂ψ(a) = ĝ.
///
/// Equal to the bracket form [(γ+β̂)φ̂ − iĝ]e^{−iγ(a−y)}/(2γ) +
/// [(γ−β̂)φ̂ + iĝ]e^{iγ(a−y)}/(2γ), written with cos and sin(z)/z so that the
/// grazing limit γ → 0 is exact.
pub fn slab_mode_solution(phi_hat: C64, g_hat: C64, beta_hat: C64, gamma: C64, a: f64, y: f64) -> C64 {
    let d = I * beta_hat * phi_hat + g_hat;
    let s = y - a;
    phi_hat * (gamma * s).cos() + d * s * sinc(gamma * s)
}

/// ψ'(y) for the same final-value problem.
pub fn slab_mode_derivative(phi_hat: C64, g_hat: C64, beta_hat: C64, gamma: C64, a: f64, y: f64) -> C64 {
    let d = I * beta_hat * phi_hat + g_hat;
    let s = y - a;
    -phi_hat * gamma * gamma * s * sinc(gamma * s) + d * (gamma * s).cos()
}

fn sinc(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Whether mode n of potential j propagates in the slab; grazing modes
/// (|α_n| = η_j) are excluded.
pub fn is_propagating(wn: &Wavenumbers, vw: &VerticalWavenumbers, j: usize, n: i64) -> bool {
    vw.alpha(n).abs() < wn.eta(j) * (1.0 - KEEP_TOL)
}

/// ψ_jn(b) and ∂_yψ_jn(b) for the propagating modes; the rest are zero.
pub fn traces_at_bottom(
    phi: (&ModeCoefficients, &ModeCoefficients),
    src: &TbcSources,
    config: &ProblemConfig,
    wn: &Wavenumbers,
    vw: &VerticalWavenumbers,
) -> Result<SlabTraces, Error> {
    let hats = hat_quantities(phi, src, wn, vw);
    let n_max = phi.0.n_max();
    if n_max > vw.n_max {
        return Err(Error::Dimension(alloc::format!("{n_max} modes requested, wavenumbers cover {}", vw.n_max)));
    }
    let zero = |label: &str| ModeCoefficients::zeros(label, n_max, config.b);
    let mut psi_b = [zero("psi1_b"), zero("psi2_b")];
    let mut dpsi_b = [zero("dpsi1_b"), zero("dpsi2_b")];
    let mut kept_modes = [Vec::new(), Vec::new()];
    for j in 1..=2 {
        for n in phi.0.modes() {
            if !is_propagating(wn, vw, j, n) {
                continue;
            }
            let gamma = vw.gamma(j, n);
            let args = (hats.phi_hat[j - 1].get(n), hats.g_hat[j - 1].get(n), hats.beta_hat(j, n), gamma);
            psi_b[j - 1].set(n, slab_mode_solution(args.0, args.1, args.2, args.3, config.a, config.b));
            dpsi_b[j - 1].set(n, slab_mode_derivative(args.0, args.1, args.2, args.3, config.a, config.b));
            kept_modes[j - 1].push(n);
        }
    }
    let tau = [zero("tau1"), zero("tau2")];
    Ok(SlabTraces { psi_b, dpsi_b, tau, kept_modes })
}

/// Fills τ_jn from the slab traces.
pub fn tau_from_traces(mut traces: SlabTraces, wn: &Wavenumbers, vw: &VerticalWavenumbers) -> SlabTraces {
    let bh = |j: usize, n: i64| vw.beta(j, n) * (wn.eta(j).powi(2) / wn.kappa(j).powi(2));
    let (c1, c2) = (wn.contrast_over_kappa2(1), wn.contrast_over_kappa2(2));
    for n in traces.psi_b[0].modes() {
        let a = vw.alpha(n);
        let (p1, p2) = (traces.psi_b[0].get(n), traces.psi_b[1].get(n));
        let (d1, d2) = (traces.dpsi_b[0].get(n), traces.dpsi_b[1].get(n));
        traces.tau[0].set(n, d1 - I * bh(1, n) * p1 + I * a * c2 * p2);
        traces.tau[1].set(n, d2 - I * bh(2, n) * p2 - I * a * c1 * p1);
    }
    traces
}

/// Potentials on Γ_a → τ on Γ_b.
pub fn far_to_near(
    phi: (&ModeCoefficients, &ModeCoefficients),
    src: &TbcSources,
    config: &ProblemConfig,
    wn: &Wavenumbers,
    vw: &VerticalWavenumbers,
) -> Result<SlabTraces, Error> {
    Ok(tau_from_traces(traces_at_bottom(phi, src, config, wn, vw)?, wn, vw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{derive_wavenumbers, mode_grid};
    use crate::spectral::{tbc_sources, vertical_wavenumbers, ResonancePolicy};

    fn setup(rho1: f64) -> (ProblemConfig, Wavenumbers, VerticalWavenumbers, TbcSources) {
        let c = ProblemConfig::example(rho1, 3.1).unwrap();
        let w = derive_wavenumbers(&c).unwrap();
        let v = vertical_wavenumbers(&w, &mode_grid(&c, &w), ResonancePolicy::Reject).unwrap();
        let s = tbc_sources(&c, &w);
        (c, w, v, s)
    }

    #[test]
    fn final_conditions() {
        let (phi, g, bh, gam) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5), C64::new(1.7, 0.0), C64::new(4.1, 0.0));
        let a = 2.0;
        assert!((slab_mode_solution(phi, g, bh, gam, a, a) - phi).norm() < 1e-15);
        let d = slab_mode_derivative(phi, g, bh, gam, a, a);
        assert!((d - I * bh * phi - g).norm() < 1e-14);
    }

    #[test]
    fn matches_bracket_form() {
        let (phi, g, bh) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5), C64::new(1.7, 0.0));
        let (a, y) = (2.0, 0.05);
        for gam in [C64::new(4.1, 0.0), C64::new(0.0, 0.7), C64::new(1e-3, 0.0)] {
            let down = ((gam + bh) * phi - I * g) / (gam * 2.0);
            let up = ((gam - bh) * phi + I * g) / (gam * 2.0);
            let e = (I * gam * (a - y)).exp();
            let want = down / e + up * e;
            let dwant = I * gam * (down / e - up * e);
            assert!((slab_mode_solution(phi, g, bh, gam, a, y) - want).norm() < 1e-10 * want.norm());
            assert!((slab_mode_derivative(phi, g, bh, gam, a, y) - dwant).norm() < 1e-10 * dwant.norm());
        }
    }

    #[test]
    fn grazing_mode_is_linear() {
        let (phi, g, bh) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5), C64::new(1.7, 0.0));
        let d = I * bh * phi + g;
        let psi = slab_mode_solution(phi, g, bh, C64::default(), 2.0, 0.05);
        assert!((psi - (phi - d * 1.95)).norm() < 1e-14);
        assert_eq!(slab_mode_derivative(phi, g, bh, C64::default(), 2.0, 0.05), d);
        // Λ = 2, ρ₁ = 4: α₂ = η₁ exactly and the mode is dropped
        let c = ProblemConfig::example(4.0, 2.0).unwrap();
        let w = derive_wavenumbers(&c).unwrap();
        let v = vertical_wavenumbers(&w, &mode_grid(&c, &w), ResonancePolicy::Allow).unwrap();
        assert!(is_propagating(&w, &v, 1, 1) && is_propagating(&w, &v, 1, -1));
        assert!(!is_propagating(&w, &v, 1, 2) && !is_propagating(&w, &v, 1, -2));
    }

    #[test]
    fn pure_downgoing() {
        let (phi, bh, gam) = (C64::new(1.0, 0.5), C64::new(0.7, 0.0), C64::new(3.0, 0.0));
        let g = I * (gam - bh) * phi;
        for &y in &[0.05, 0.8, 1.9] {
            let want = phi * (-I * gam * (2.0 - y)).exp();
            assert!((slab_mode_solution(phi, g, bh, gam, 2.0, y) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn identical_density_hats_are_trivial() {
        let (c, w, v, s) = setup(1.0);
        let mut p1 = ModeCoefficients::zeros("phi1", 1, c.a);
        let mut p2 = p1.clone();
        p1.set(1, C64::new(0.4, 0.1));
        p2.set(-1, C64::new(-0.2, 0.3));
        let h = hat_quantities((&p1, &p2), &s, &w, &v);
        assert_eq!(h.phi_hat[0].values, p1.values);
        assert_eq!(h.beta_hat(1, 1), v.beta(1, 1));
        assert_eq!(h.g_hat[0].get(1), C64::default());
        assert_eq!(h.g_hat[0].get(0), s.g1);
    }

    #[test]
    fn evanescent_modes_are_zeroed() {
        let (c, w, v, s) = setup(4.0);
        let mut p1 = ModeCoefficients::zeros("phi1", 6, c.a);
        let p2 = p1.clone();
        for n in p1.modes().collect::<Vec<_>>() {
            p1.set(n, C64::new(1.0, n as f64));
        }
        let t = traces_at_bottom((&p1, &p2), &s, &c, &w, &v).unwrap();
        // η₁ = 2π: only |n| ≤ 3 propagate for j = 1.
        assert_eq!(t.kept_modes[0], (-3..=3).collect::<Vec<_>>());
        assert_eq!(t.kept_modes[1].len(), 13);
        for n in [-6, -5, -4, 4, 5, 6] {
            assert_eq!(t.psi_b[0].get(n), C64::default());
            assert_eq!(t.dpsi_b[0].get(n), C64::default());
        }
    }
}
