//! Transformed field expansion of the reduced problem in Ω = {f < y < b}.
//!
//! After flattening Γ_f to y = 0 the potentials are expanded as
//! φ_j = Σ_k ε^k φ_j^{(k)}; each order solves decoupled two-point problems
//! per mode, coupled only through the boundary rows at y = 0.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::config::{derive_wavenumbers, ProblemConfig};
use crate::profile::SurfaceProfile;
use crate::quad::{cumulative, integrate, simpson_weights};
use crate::spectral::{ModeCoefficients, VerticalWavenumbers};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default number of y-points on [0, b] (256 Simpson intervals).
pub const DEFAULT_Y_POINTS: usize = 257;

/// Which Lemma A.2 kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    K1,
    K2,
    K3,
}

fn guard_beta(beta: C64) -> Result<(), Error> {
    if beta.norm() == 0.0 || !beta.norm().is_finite() {
        return Err(Error::Resonance { quantity: "beta", mode: 0, magnitude: beta.norm() });
    }
    Ok(())
}

/// Green's kernels of u'' + β²u = v, u'(0) = r, u'(h) − iβu(h) = s.
/// `z` is only used by K3.
pub fn kernel_k(which: Kernel, y: f64, z: f64, beta: C64, h: f64) -> Result<C64, Error> {
    guard_beta(beta)?;
    let ib = I * beta;
    Ok(match which {
        Kernel::K1 => (ib * y).exp() / ib,
        Kernel::K2 => (ib * h).exp() * ((ib * y).exp() + (-ib * y).exp()) / (ib * 2.0),
        Kernel::K3 => {
            let (lo, hi) = if z < y { (z, y) } else { (y, z) };
            (ib * hi).exp() * ((ib * lo).exp() + (-ib * lo).exp()) / (ib * 2.0)
        }
    })
}

/// Uniform grid on [0, b] with Simpson weights.
#[derive(Debug, Clone, PartialEq)]
pub struct YGrid {
    pub b: f64,
    pub h: f64,
    pub ys: Vec<f64>,
    pub weights: Vec<f64>,
}

impl YGrid {
    pub fn new(b: f64, points: usize) -> Result<Self, Error> {
        if points < 65 || points % 2 == 0 {
            return Err(Error::InvalidConfig(alloc::format!("y-grid needs an odd count ≥ 65, got {points}")));
        }
        let h = b / (points - 1) as f64;
        Ok(Self { b, h, ys: (0..points).map(|i| i as f64 * h).collect(), weights: simpson_weights(points, h) })
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }
}

/// φ, φ′ and the source u of one mode on the y-grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeProfile {
    pub phi: Vec<C64>,
    pub dphi: Vec<C64>,
    pub src: Vec<C64>,
}

/// One order of the expansion: profiles φ_jn^{(k)}(y) for |n| ≤ n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct TfeField {
    pub order: usize,
    pub n_max: usize,
    pub y_grid: Vec<f64>,
    pub profiles: [Vec<ModeProfile>; 2],
    /// max |β_jn|·Δy over the modes of this order.
    pub max_beta_h: f64,
}

impl TfeField {
    pub fn profile(&self, j: usize, n: i64) -> Option<&ModeProfile> {
        let m = self.n_max as i64;
        if n.abs() > m { None } else { Some(&self.profiles[j - 1][(n + m) as usize]) }
    }

    /// Coefficients φ_jn^{(k)}(y_i) at grid index i.
    pub fn trace(&self, j: usize, i: usize) -> ModeCoefficients {
        let v = self.profiles[j - 1].iter().map(|p| p.phi[i]).collect();
        ModeCoefficients::from_values("phi", v, self.y_grid[i])
    }

    pub fn trace_b(&self, j: usize) -> ModeCoefficients {
        self.trace(j, self.y_grid.len() - 1)
    }

    /// Oscillation per grid cell above 0.5 rad makes the quadrature unreliable.
    pub fn under_resolved(&self) -> bool {
        self.max_beta_h > 0.5
    }
}

/// Mapping coefficients c₁..c₄ of the flattened equation at (x, y).
pub fn change_of_variables_map(profile: &SurfaceProfile, config: &ProblemConfig, x: f64, y: f64) -> [f64; 4] {
    let [f, f1, f2] = profile.f_derivs(x);
    let b = config.b;
    [
        (b - f) * (b - f),
        (f1 * (b - y)).powi(2) + b * b,
        -2.0 * f1 * (b - y) * (b - f),
        -(b - y) * (f2 * (b - f) + 2.0 * f1 * f1),
    ]
}

/// Order-0 kernels M_{jl}^{(n)}(y) and their y-derivatives.
pub fn m_kernels(n: i64, y: f64, b: f64, vw: &VerticalWavenumbers) -> ([[C64; 2]; 2], [[C64; 2]; 2]) {
    let a = vw.alpha(n);
    let (b1, b2) = (vw.beta(1, n), vw.beta(2, n));
    let d = vw.denom(n);
    let (e1b, e2b) = ((I * b1 * b).exp(), (I * b2 * b).exp());
    let (e1, e2) = ((I * b1 * y).exp(), (I * b2 * y).exp());
    let diag = |bj: C64, ejb: C64, ej: C64| {
        let m = -(I * a * a * ejb / (bj * d)) * ej + I * ejb / (bj * 2.0) * (ej + 1.0 / ej);
        let dm = (a * a * ejb / d) * ej - I * ejb * (bj * y).sin();
        (m, dm)
    };
    let (m11, d11) = diag(b1, e1b, e1);
    let (m22, d22) = diag(b2, e2b, e2);
    let m12 = I * a * e2b / d * e1;
    let m21 = -(I * a * e1b / d) * e2;
    ([[m11, m12], [m21, m22]], [[d11, I * b1 * m12], [I * b2 * m21, d22]])
}

/// φ_jn^{(0)}(0) from τ (Eq. for the order-0 boundary values).
pub fn order0_at_zero(n: i64, tau1: C64, tau2: C64, b: f64, vw: &VerticalWavenumbers) -> (C64, C64) {
    let a = vw.alpha(n);
    let (b1, b2) = (vw.beta(1, n), vw.beta(2, n));
    let d = vw.denom(n);
    let (e1, e2) = ((I * b1 * b).exp(), (I * b2 * b).exp());
    (I * (b2 * e1 * tau1 + a * e2 * tau2) / d, I * (b1 * e2 * tau2 - a * e1 * tau1) / d)
}

/// Order-0 field from the closed-form M-kernels.
pub fn order0(tau: &[ModeCoefficients; 2], config: &ProblemConfig, vw: &VerticalWavenumbers, y_points: usize) -> Result<TfeField, Error> {
    let grid = YGrid::new(config.b, y_points)?;
    let n_max = tau[0].n_max();
    check_cover(vw, n_max)?;
    let mut profiles = [Vec::new(), Vec::new()];
    let mut max_beta_h: f64 = 0.0;
    for n in tau[0].modes() {
        vw.checked_denom(n, config.omega)?;
        let t = [tau[0].get(n), tau[1].get(n)];
        let mut p = [ModeProfile::default(), ModeProfile::default()];
        for &y in &grid.ys {
            let (m, dm) = m_kernels(n, y, config.b, vw);
            for j in 0..2 {
                p[j].phi.push(m[j][0] * t[0] + m[j][1] * t[1]);
                p[j].dphi.push(dm[j][0] * t[0] + dm[j][1] * t[1]);
                p[j].src.push(C64::default());
            }
        }
        for j in 0..2 {
            max_beta_h = max_beta_h.max(vw.beta(j + 1, n).norm() * grid.h);
        }
        let [p1, p2] = p;
        profiles[0].push(p1);
        profiles[1].push(p2);
    }
    Ok(TfeField { order: 0, n_max, y_grid: grid.ys, profiles, max_beta_h })
}

/// Coefficient of g_{n−m} in φ_jn^{(1)}(b) contributed by τ_m.
pub fn order1_coefficient(j: usize, n: i64, m: i64, tau1m: C64, tau2m: C64, b: f64, vw: &VerticalWavenumbers) -> C64 {
    let (an, am) = (vw.alpha(n), vw.alpha(m));
    let (b1n, b2n, b1m, b2m) = (vw.beta(1, n), vw.beta(2, n), vw.beta(1, m), vw.beta(2, m));
    let (dn, dm) = (vw.denom(n), vw.denom(m));
    let (f1, f2) = order0_at_zero(m, tau1m, tau2m, b, vw);
    let da = an - am;
    let p = I * am * f1 / b - am * da * f2;
    let q = -I * am * f2 / b - am * da * f1;
    let i1 = (I * am * f2 + b1m * b1m * b * f1 - b1n * am * b * f2) / b;
    let i2 = (-I * am * f1 + b2m * b2m * b * f2 + b2n * am * b * f1) / b;
    let j1 = (I * am * f2 * 2.0 + b1m * b1m * b * f1 * 2.0) / b;
    let j2 = (-I * am * f1 * 2.0 + b2m * b2m * b * f2 * 2.0) / b;
    let (a_block, bjn) = if j == 1 {
        (dm * (b1n * b2n * q * 2.0 + an * b1n * p * 2.0 + an * b1n * i2 * 2.0 - an * an * i1 * 2.0 + dn * j1), b1n)
    } else {
        (dm * (b1n * b2n * p * 2.0 - an * b2n * q * 2.0 - an * b2n * i1 * 2.0 - an * an * i2 * 2.0 + dn * j2), b2n)
    };
    (I * bjn * b).exp() / (I * bjn * 2.0 * dn * dm) * a_block
}

/// φ_jn^{(1)}(b) for |n| ≤ n_out from the closed form.
pub fn order1_trace(
    tau: &[ModeCoefficients; 2],
    profile: &SurfaceProfile,
    config: &ProblemConfig,
    vw: &VerticalWavenumbers,
    n_out: usize,
) -> Result<[ModeCoefficients; 2], Error> {
    check_cover(vw, n_out.max(tau[0].n_max()))?;
    let mut out = [ModeCoefficients::zeros("phi1_1", n_out, config.b), ModeCoefficients::zeros("phi2_1", n_out, config.b)];
    for n in out[0].modes().collect::<Vec<_>>() {
        vw.checked_denom(n, config.omega)?;
        for j in 1..=2 {
            let mut s = C64::default();
            for m in tau[0].modes() {
                let g = profile.g_coeff(n - m);
                if g == C64::default() {
                    continue;
                }
                vw.checked_denom(m, config.omega)?;
                s += order1_coefficient(j, n, m, tau[0].get(m), tau[1].get(m), config.b, vw) * g;
            }
            out[j - 1].set(n, s);
        }
    }
    Ok(out)
}

fn check_cover(vw: &VerticalWavenumbers, n: usize) -> Result<(), Error> {
    if n > vw.n_max {
        return Err(Error::Dimension(alloc::format!("modes up to {n} needed, wavenumbers cover {}", vw.n_max)));
    }
    Ok(())
}

/// Options of the general recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfeOptions {
    pub y_points: usize,
    /// Cap on the mode bandwidth of any order.
    pub max_modes: usize,
}

impl Default for TfeOptions {
    fn default() -> Self {
        Self { y_points: DEFAULT_Y_POINTS, max_modes: 64 }
    }
}

fn convolve(a: &ModeCoefficients, b: &ModeCoefficients) -> ModeCoefficients {
    let n = a.n_max() + b.n_max();
    let mut out = ModeCoefficients::zeros("conv", n, 0.0);
    for p in a.modes() {
        let x = a.get(p);
        if x == C64::default() {
            continue;
        }
        for q in b.modes() {
            out.set(p + q, out.get(p + q) + x * b.get(q));
        }
    }
    out
}

/// Spectral coefficients of g, g′, g″ and of the products entering 𝒟^{(2)}.
struct ProfileSeries {
    mg: i64,
    g: ModeCoefficients,
    g1: ModeCoefficients,
    g2: ModeCoefficients,
    gg: ModeCoefficients,
    g1g1: ModeCoefficients,
    gg1: ModeCoefficients,
    gg2: ModeCoefficients,
}

impl ProfileSeries {
    fn new(profile: &SurfaceProfile) -> Self {
        let g = ModeCoefficients::from_values("g", profile.g_coeffs.clone(), 0.0);
        let mut g1 = g.clone();
        let mut g2 = g.clone();
        for m in g.modes() {
            let a = crate::config::alpha(profile.period, m);
            g1.set(m, I * a * g.get(m));
            g2.set(m, -(a * a) * g.get(m));
        }
        Self {
            mg: profile.m_g() as i64,
            gg: convolve(&g, &g),
            g1g1: convolve(&g1, &g1),
            gg1: convolve(&g, &g1),
            gg2: convolve(&g, &g2),
            g,
            g1,
            g2,
        }
    }
}

/// Solves u'' + β²u = src with u'(0) = s0, u'(b) − iβu(b) = r on the grid.
pub fn solve_mode(beta: C64, s0: C64, r: C64, src: Vec<C64>, grid: &YGrid) -> Result<ModeProfile, Error> {
    guard_beta(beta)?;
    let ib = I * beta;
    let b = grid.b;
    let eb = (ib * b).exp();
    let two_cos: Vec<C64> = grid.ys.iter().zip(&src).map(|(&z, u)| ((ib * z).exp() + (-ib * z).exp()) * u).collect();
    let e_src: Vec<C64> = grid.ys.iter().zip(&src).map(|(&z, u)| (ib * z).exp() * u).collect();
    let c = cumulative(&two_cos, grid.h);
    let e_cum = cumulative(&e_src, grid.h);
    let e_tot = integrate(&grid.weights, &e_src);
    let mut phi = Vec::with_capacity(grid.len());
    let mut dphi = Vec::with_capacity(grid.len());
    for (i, &y) in grid.ys.iter().enumerate() {
        let ey = (ib * y).exp();
        let cosy = (ey + 1.0 / ey) * 0.5;
        let siny = (beta * y).sin();
        let e = if i == grid.len() - 1 { C64::default() } else { e_tot - e_cum[i] };
        phi.push(ey / ib * s0 - eb * cosy / ib * r + ey / (ib * 2.0) * c[i] + cosy / ib * e);
        dphi.push(ey * s0 - I * eb * siny * r + ey * 0.5 * c[i] + I * siny * e);
    }
    Ok(ModeProfile { phi, dphi, src })
}

struct Recursion<'a> {
    grid: YGrid,
    vw: VerticalWavenumbers,
    kappa2: [f64; 2],
    b: f64,
    omega: f64,
    series: ProfileSeries,
    tau: &'a [ModeCoefficients; 2],
}

impl Recursion<'_> {
    fn beta(&self, j: usize, n: i64) -> C64 {
        self.vw.beta(j, n)
    }

    /// u_jn^{(k)} from the previous two orders.
    fn source(&self, j: usize, n: i64, prev1: Option<&TfeField>, prev2: Option<&TfeField>) -> Vec<C64> {
        let ny = self.grid.len();
        let mut u = vec![C64::default(); ny];
        let b = self.b;
        let k2 = self.kappa2[j - 1];
        let s = &self.series;
        if let Some(f) = prev1 {
            for m in -(f.n_max as i64)..=f.n_max as i64 {
                let d = n - m;
                if d.abs() > s.mg {
                    continue;
                }
                let am = self.vw.alpha(m);
                let p = f.profile(j, m).unwrap();
                let c0 = s.g.get(d) * (2.0 * (k2 - am * am)) / b;
                let c1 = (s.g1.get(d) * (2.0 * am) * I + s.g2.get(d)) / b;
                for i in 0..ny {
                    u[i] += c0 * p.phi[i] + c1 * (b - self.grid.ys[i]) * p.dphi[i];
                }
            }
        }
        if let Some(f) = prev2 {
            let b2 = b * b;
            for m in -(f.n_max as i64)..=f.n_max as i64 {
                let d = n - m;
                if d.abs() > 2 * s.mg {
                    continue;
                }
                let am = self.vw.alpha(m);
                let bm2 = self.beta(j, m) * self.beta(j, m);
                let p = f.profile(j, m).unwrap();
                let c0 = s.gg.get(d) * (k2 - am * am);
                let cyy = s.g1g1.get(d);
                let cy = s.gg1.get(d) * (2.0 * am) * I - (s.g1g1.get(d) * 2.0 - s.gg2.get(d));
                for i in 0..ny {
                    let w = b - self.grid.ys[i];
                    let pyy = p.src[i] - bm2 * p.phi[i];
                    u[i] -= (c0 * p.phi[i] + cyy * w * w * pyy + cy * w * p.dphi[i]) / b2;
                }
            }
        }
        u
    }

    fn order(&self, k: usize, n_max: usize, prev1: Option<&TfeField>, prev2: Option<&TfeField>) -> Result<TfeField, Error> {
        let b = self.b;
        let s = &self.series;
        let last = self.grid.len() - 1;
        let mut profiles = [Vec::new(), Vec::new()];
        let mut max_beta_h: f64 = 0.0;
        for n in -(n_max as i64)..=n_max as i64 {
            let an = self.vw.alpha(n);
            let d = self.vw.checked_denom(n, self.omega)?;
            let src = [self.source(1, n, prev1, prev2), self.source(2, n, prev1, prev2)];
            // boundary data p, q at y = 0 and r at y = b
            let (mut p, mut q) = (C64::default(), C64::default());
            let mut r = [C64::default(); 2];
            if k == 0 {
                r = [self.tau[0].get(n), self.tau[1].get(n)];
            } else if let Some(f) = prev1 {
                for m in -(f.n_max as i64)..=f.n_max as i64 {
                    let dd = n - m;
                    if dd.abs() > s.mg {
                        continue;
                    }
                    let am = self.vw.alpha(m);
                    let (g, g1) = (s.g.get(dd), s.g1.get(dd));
                    let (f1, f2) = (f.profile(1, m).unwrap(), f.profile(2, m).unwrap());
                    p += g * I * am / b * f1.phi[0] + g1 * f1.dphi[0];
                    q -= g * I * am / b * f2.phi[0] + g1 * f2.dphi[0];
                    for j in 1..=2 {
                        let fj = if j == 1 { f1 } else { f2 };
                        let mut t = I * self.beta(j, m) * fj.phi[last];
                        if k == 1 {
                            t += self.tau[j - 1].get(m);
                        }
                        r[j - 1] -= g * t / b;
                    }
                }
            }
            let (b1, b2) = (self.beta(1, n), self.beta(2, n));
            let w = &self.grid.weights;
            let mom = |bj: C64, u: &[C64]| -> C64 {
                let e: Vec<C64> = self.grid.ys.iter().zip(u).map(|(&z, u)| (I * bj * z).exp() * u).collect();
                integrate(w, &e)
            };
            let v1 = q - (I * b1 * b).exp() * r[0] + mom(b1, &src[0]);
            let v2 = p - (I * b2 * b).exp() * r[1] + mom(b2, &src[1]);
            let phi10 = -I * (b2 * v1 + an * v2) / d;
            let phi20 = -I * (b1 * v2 - an * v1) / d;
            let [s1, s2] = src;
            profiles[0].push(solve_mode(b1, q + I * an * phi20, r[0], s1, &self.grid)?);
            profiles[1].push(solve_mode(b2, p - I * an * phi10, r[1], s2, &self.grid)?);
            max_beta_h = max_beta_h.max(b1.norm().max(b2.norm()) * self.grid.h);
        }
        Ok(TfeField { order: k, n_max, y_grid: self.grid.ys.clone(), profiles, max_beta_h })
    }
}

/// Orders k = 0..=k_max of the expansion; order k carries modes
/// |n| ≤ min(N_τ + k·M_g, max_modes).
pub fn tfe_recursion(
    tau: &[ModeCoefficients; 2],
    profile: &SurfaceProfile,
    config: &ProblemConfig,
    vw: &VerticalWavenumbers,
    k_max: usize,
    opts: TfeOptions,
) -> Result<Vec<TfeField>, Error> {
    profile.check_below(config.b)?;
    let n_tau = tau[0].n_max();
    let mg = profile.m_g();
    let width = |k: usize| (n_tau + k * mg).min(opts.max_modes.max(n_tau));
    let wn = derive_wavenumbers(config)?;
    let vw_ext = VerticalWavenumbers::new(&wn, config.period, width(k_max).max(vw.n_max), vw.policy)?;
    let ctx = Recursion {
        grid: YGrid::new(config.b, opts.y_points)?,
        vw: vw_ext,
        kappa2: [wn.kappa1 * wn.kappa1, wn.kappa2 * wn.kappa2],
        b: config.b,
        omega: config.omega,
        series: ProfileSeries::new(profile),
        tau,
    };
    let mut out: Vec<TfeField> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let prev1 = if k >= 1 { out.get(k - 1) } else { None };
        let prev2 = if k >= 2 { out.get(k - 2) } else { None };
        let f = ctx.order(k, width(k), prev1, prev2)?;
        out.push(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::mode_grid;
    use crate::spectral::{vertical_wavenumbers, ResonancePolicy};

    fn setup() -> (ProblemConfig, VerticalWavenumbers) {
        let c = ProblemConfig::example(4.0, 3.1).unwrap();
        let w = derive_wavenumbers(&c).unwrap();
        (c, vertical_wavenumbers(&w, &mode_grid(&c, &w), ResonancePolicy::Reject).unwrap())
    }

    fn tau_sample(n_max: usize) -> [ModeCoefficients; 2] {
        let mut t = [ModeCoefficients::zeros("tau1", n_max, 0.05), ModeCoefficients::zeros("tau2", n_max, 0.05)];
        for n in -(n_max as i64)..=n_max as i64 {
            t[0].set(n, C64::new(0.3 + 0.1 * n as f64, -0.2));
            t[1].set(n, C64::new(-0.1, 0.05 * n as f64 + 0.4));
        }
        t
    }

    #[test]
    fn kernel_values() {
        let beta = C64::new(2.5, 0.0);
        let k1 = kernel_k(Kernel::K1, 0.0, 0.0, beta, 0.05).unwrap();
        assert!((k1 - 1.0 / (I * beta)).norm() < 1e-15);
        let a = kernel_k(Kernel::K3, 0.01, 0.03, beta, 0.05).unwrap();
        let b = kernel_k(Kernel::K3, 0.03, 0.01, beta, 0.05).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!(kernel_k(Kernel::K1, 0.0, 0.0, C64::default(), 0.05).is_err());
    }

    #[test]
    fn mapping_of_flat_surface() {
        let c = ProblemConfig::example(1.0, 3.1).unwrap();
        let m = change_of_variables_map(&SurfaceProfile::flat(3.1), &c, 0.4, 0.02);
        assert_eq!(m, [c.b * c.b, c.b * c.b, 0.0, 0.0]);
    }

    #[test]
    fn order0_matches_recursion() {
        let (c, v) = setup();
        let tau = tau_sample(6);
        let f0 = order0(&tau, &c, &v, DEFAULT_Y_POINTS).unwrap();
        let rec = tfe_recursion(&tau, &SurfaceProfile::flat(3.1), &c, &v, 0, TfeOptions::default()).unwrap();
        for j in 1..=2 {
            for n in -6..=6 {
                let (p, q) = (f0.profile(j, n).unwrap(), rec[0].profile(j, n).unwrap());
                for i in 0..p.phi.len() {
                    assert!((p.phi[i] - q.phi[i]).norm() < 1e-12 * (1.0 + p.phi[i].norm()));
                    assert!((p.dphi[i] - q.dphi[i]).norm() < 1e-10 * (1.0 + p.dphi[i].norm()));
                }
            }
        }
    }

    #[test]
    fn order0_zero_mode() {
        let (c, v) = setup();
        let (m, _) = m_kernels(0, 0.02, c.b, &v);
        let b = v.beta(1, 0);
        assert_eq!(m[0][1], C64::default());
        assert_eq!(m[1][0], C64::default());
        let want = I * (I * b * c.b).exp() * ((I * b * 0.02).exp() + (-I * b * 0.02).exp()) / (b * 2.0);
        assert!((m[0][0] - want).norm() < 1e-14);
    }

    #[test]
    fn order1_closed_form_matches_recursion() {
        let (c, v) = setup();
        let tau = tau_sample(6);
        let g = crate::profile::builtin_profile(crate::profile::ProfileName::Example1, 500).unwrap();
        let rec = tfe_recursion(&tau, &g, &c, &v, 1, TfeOptions::default()).unwrap();
        let wn = derive_wavenumbers(&c).unwrap();
        let vbig = VerticalWavenumbers::new(&wn, c.period, 6, ResonancePolicy::Reject).unwrap();
        let closed = order1_trace(&tau, &g, &c, &vbig, 6).unwrap();
        for j in 1..=2 {
            let t = rec[1].trace_b(j);
            for n in -6..=6 {
                let (x, y) = (closed[j - 1].get(n), t.get(n));
                assert!((x - y).norm() <= 1e-8 * x.norm().max(1e-3), "j={j} n={n}: {x} vs {y}");
            }
        }
    }
}
