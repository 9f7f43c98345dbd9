//! Vertical wavenumbers, discrete Fourier analysis of periodic traces, and
//! the scalar and elastic Dirichlet-to-Neumann operators on Γ_a.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::{Float, Zero};

use crate::config::{alpha, ModeGrid, ProblemConfig, Wavenumbers};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relative tolerance of the resonance guard on β_jn and γ_jn.
pub const RESONANCE_TOL: f64 = 1e-8;

/// Relative tolerance of the guard on α_n² + β₁ₙβ₂ₙ (relative to ω²).
pub const DENOM_TOL: f64 = 1e-10;

/// Complex Fourier coefficients of a periodic trace, indexed n = −N..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients {
    pub label: String,
    pub values: Vec<C64>,
    pub height: f64,
}

impl ModeCoefficients {
    pub fn zeros(label: &str, n_max: usize, height: f64) -> Self {
        Self { label: label.into(), values: vec![C64::zero(); 2 * n_max + 1], height }
    }

    pub fn from_values(label: &str, values: Vec<C64>, height: f64) -> Self {
        assert!(values.len() % 2 == 1, "mode vector must have odd length");
        Self { label: label.into(), values, height }
    }

    pub fn n_max(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    /// Coefficient of mode n; zero outside the stored range.
    pub fn get(&self, n: i64) -> C64 {
        let m = self.n_max() as i64;
        if n.abs() > m { C64::zero() } else { self.values[(n + m) as usize] }
    }

    pub fn set(&mut self, n: i64, v: C64) {
        let m = self.n_max() as i64;
        self.values[(n + m) as usize] = v;
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let m = self.n_max() as i64;
        -m..=m
    }

    /// Copy truncated or zero-padded to a new bandwidth.
    pub fn resized(&self, n_max: usize) -> Self {
        let mut out = Self::zeros(&self.label, n_max, self.height);
        for n in out.modes().collect::<Vec<_>>() {
            out.set(n, self.get(n));
        }
        out
    }
}

/// Uniform grid of `count` points over one period starting at `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub x0: f64,
    pub period: f64,
    pub count: usize,
}

impl UniformGrid {
    /// x_i = −Λ/2 + iΛ/n for i = 1..=n, the measurement grid.
    pub fn measurement(period: f64, count: usize) -> Self {
        Self { x0: -period / 2.0 + period / count as f64, period, count }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.period / self.count as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.x(i)).collect()
    }
}

/// Discrete approximation of u_n = (1/Λ)∫u(x)e^{−iα_n x}dx for |n| ≤ N.
pub fn analyze(samples: &[C64], grid: &UniformGrid, n_max: usize) -> Result<Vec<C64>, Error> {
    let count = samples.len();
    if count != grid.count {
        return Err(Error::Dimension(format!("{count} samples on a {}-point grid", grid.count)));
    }
    if 2 * n_max + 1 > count {
        return Err(Error::InsufficientSamples { needed: 2 * n_max + 1, got: count });
    }
    let mut out = vec![C64::zero(); 2 * n_max + 1];
    let a1 = alpha(grid.period, 1);
    for (i, &u) in samples.iter().enumerate() {
        let x = grid.x(i);
        let step = C64::from_polar(1.0, -a1 * x);
        // e^{-iα_n x} for n = -N..=N by repeated multiplication from n = -N.
        let mut w = C64::from_polar(1.0, a1 * x * n_max as f64);
        for o in out.iter_mut() {
            *o += u * w;
            w *= step;
        }
    }
    let inv = 1.0 / count as f64;
    for o in &mut out {
        *o *= inv;
    }
    Ok(out)
}

/// Evaluates Σ_n c_n e^{iα_n x} at arbitrary abscissae.
pub fn synthesize_at(coeffs: &[C64], period: f64, xs: &[f64]) -> Vec<C64> {
    let n_max = (coeffs.len() - 1) / 2;
    let a1 = alpha(period, 1);
    xs.iter()
        .map(|&x| {
            let step = C64::from_polar(1.0, a1 * x);
            let mut w = C64::from_polar(1.0, -a1 * x * n_max as f64);
            let mut s = C64::zero();
            for &c in coeffs {
                s += c * w;
                w *= step;
            }
            s
        })
        .collect()
}

pub fn synthesize(coeffs: &[C64], grid: &UniformGrid) -> Vec<C64> {
    synthesize_at(coeffs, grid.period, &grid.points())
}

/// Treatment of vanishing vertical wavenumbers (Wood anomalies).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ResonancePolicy {
    /// Fail when |β_jn| or |γ_jn| drops below 1e−8·κ_j.
    #[default]
    Reject,
    /// No guard; exact values are used, including zeros.
    Allow,
    /// Limiting absorption: κ² → κ²(1 + i·shift) for every mode.
    Regularize { shift: f64 },
}

/// β_jn (free space) and γ_jn (slab) on the principal branch.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalWavenumbers {
    pub n_max: usize,
    pub period: f64,
    pub beta1: Vec<C64>,
    pub beta2: Vec<C64>,
    pub gamma1: Vec<C64>,
    pub gamma2: Vec<C64>,
    pub policy: ResonancePolicy,
}

/// √(k² − α²) with non-negative real part, +i on the negative real axis.
pub fn vertical(k: f64, a: f64, policy: ResonancePolicy) -> C64 {
    match policy {
        ResonancePolicy::Regularize { shift } => C64::new(k * k - a * a, shift * k * k).sqrt(),
        _ => {
            let z = k * k - a * a;
            if z >= 0.0 { C64::new(z.sqrt(), 0.0) } else { C64::new(0.0, (-z).sqrt()) }
        }
    }
}

impl VerticalWavenumbers {
    pub fn new(wn: &Wavenumbers, period: f64, n_max: usize, policy: ResonancePolicy) -> Result<Self, Error> {
        let m = n_max as i64;
        let mut out = Self {
            n_max,
            period,
            beta1: Vec::new(),
            beta2: Vec::new(),
            gamma1: Vec::new(),
            gamma2: Vec::new(),
            policy,
        };
        for n in -m..=m {
            let a = alpha(period, n);
            let vals = [
                ("beta1", wn.kappa1, vertical(wn.kappa1, a, policy)),
                ("beta2", wn.kappa2, vertical(wn.kappa2, a, policy)),
                ("gamma1", wn.kappa1, vertical(wn.eta1, a, policy)),
                ("gamma2", wn.kappa2, vertical(wn.eta2, a, policy)),
            ];
            if policy == ResonancePolicy::Reject {
                for (name, scale, v) in vals {
                    if v.norm() < RESONANCE_TOL * scale {
                        return Err(Error::Resonance { quantity: name, mode: n, magnitude: v.norm() });
                    }
                }
            }
            out.beta1.push(vals[0].2);
            out.beta2.push(vals[1].2);
            out.gamma1.push(vals[2].2);
            out.gamma2.push(vals[3].2);
        }
        Ok(out)
    }

    fn idx(&self, n: i64) -> usize {
        assert!(n.unsigned_abs() as usize <= self.n_max, "mode {n} outside ±{}", self.n_max);
        (n + self.n_max as i64) as usize
    }

    pub fn alpha(&self, n: i64) -> f64 {
        alpha(self.period, n)
    }

    pub fn beta(&self, j: usize, n: i64) -> C64 {
        let i = self.idx(n);
        if j == 1 { self.beta1[i] } else { self.beta2[i] }
    }

    pub fn gamma(&self, j: usize, n: i64) -> C64 {
        let i = self.idx(n);
        if j == 1 { self.gamma1[i] } else { self.gamma2[i] }
    }

    /// α_n² + β₁ₙβ₂ₙ.
    pub fn denom(&self, n: i64) -> C64 {
        let a = self.alpha(n);
        self.beta(1, n) * self.beta(2, n) + a * a
    }

    /// α_n² + β₁ₙβ₂ₙ with the guard |·| > 1e−10·ω².
    pub fn checked_denom(&self, n: i64, omega: f64) -> Result<C64, Error> {
        let d = self.denom(n);
        if d.norm() <= DENOM_TOL * omega * omega {
            return Err(Error::Resonance { quantity: "alpha^2+beta1*beta2", mode: n, magnitude: d.norm() });
        }
        Ok(d)
    }
}

/// β_jn, γ_jn for |n| ≤ max(N₁, N₂).
pub fn vertical_wavenumbers(wn: &Wavenumbers, grid: &ModeGrid, policy: ResonancePolicy) -> Result<VerticalWavenumbers, Error> {
    VerticalWavenumbers::new(wn, grid.period, grid.n_max(), policy)
}

/// Scalar DtN operator: (𝒯_j u)_n = iβ_jn u_n.
pub fn dtn_scalar(coeffs: &ModeCoefficients, j: usize, vw: &VerticalWavenumbers) -> ModeCoefficients {
    let mut out = coeffs.clone();
    for n in coeffs.modes() {
        out.set(n, I * vw.beta(j, n) * coeffs.get(n));
    }
    out
}

/// Per-mode matrix of the elastic DtN operator 𝒯 on Γ_a.
pub fn elastic_dtn_matrix(n: i64, config: &ProblemConfig, vw: &VerticalWavenumbers) -> Result<[[C64; 2]; 2], Error> {
    let a = vw.alpha(n);
    let (b1, b2) = (vw.beta(1, n), vw.beta(2, n));
    let d = vw.checked_denom(n, config.omega)?;
    let w2 = config.omega * config.omega;
    let off = w2 * a / d;
    Ok([
        [I * w2 * b1 / d, I * (C64::from(config.mu * a) - off)],
        [I * (off - config.mu * a), I * w2 * b2 / d],
    ])
}

/// Applies 𝒯 mode by mode to a displacement trace (u₁ₙ, u₂ₙ).
pub fn dtn_elastic(
    u: (&ModeCoefficients, &ModeCoefficients),
    config: &ProblemConfig,
    vw: &VerticalWavenumbers,
) -> Result<(ModeCoefficients, ModeCoefficients), Error> {
    let (mut o1, mut o2) = (u.0.clone(), u.1.clone());
    for n in u.0.modes() {
        let m = elastic_dtn_matrix(n, config, vw)?;
        let (x, y) = (u.0.get(n), u.1.get(n));
        o1.set(n, m[0][0] * x + m[0][1] * y);
        o2.set(n, m[1][0] * x + m[1][1] * y);
    }
    Ok((o1, o2))
}

/// Sources of the transparent boundary conditions for normal compressional
/// incidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TbcSources {
    /// Source of the compressional potential condition, g₁ = −2e^{−iκ₁a}.
    pub g1: C64,
    /// Source of the shear potential condition (zero).
    pub g2: C64,
    /// Source of the displacement condition, 2iκ₁(λ+2μ)(0,1)e^{−iκ₁a}.
    pub h: [C64; 2],
}

impl TbcSources {
    /// Mode-n coefficient of g_j (the sources are constant in x).
    pub fn g_mode(&self, j: usize, n: i64) -> C64 {
        match (j, n) {
            (1, 0) => self.g1,
            (2, 0) => self.g2,
            _ => C64::zero(),
        }
    }
}

pub fn tbc_sources(config: &ProblemConfig, wn: &Wavenumbers) -> TbcSources {
    let e = C64::from_polar(1.0, -wn.kappa1 * config.a);
    TbcSources {
        g1: -2.0 * e,
        g2: C64::zero(),
        h: [C64::zero(), 2.0 * I * wn.kappa1 * config.p_modulus() * e],
    }
}

/// Incident compressional potential φ₁^inc(y) = −(i/κ₁)e^{−iκ₁y}.
pub fn incident_potential(wn: &Wavenumbers, y: f64) -> C64 {
    -I / wn.kappa1 * C64::from_polar(1.0, -wn.kappa1 * y)
}

/// Incident displacement (0, −1)e^{−iκ₁y}.
pub fn incident_displacement(wn: &Wavenumbers, y: f64) -> [C64; 2] {
    [C64::zero(), -C64::from_polar(1.0, -wn.kappa1 * y)]
}
