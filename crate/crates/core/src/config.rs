//! Physical parameters, derived wavenumbers and the Fourier mode grid.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::Error;

/// Physical and geometric parameters of the layered problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConfig {
    /// Lamé first parameter λ.
    pub lambda_lame: f64,
    /// Shear modulus μ.
    pub mu: f64,
    /// Density of the free space above the slab and of the gap below it.
    pub rho0: f64,
    /// Density of the slab.
    pub rho1: f64,
    /// Angular frequency.
    pub omega: f64,
    /// Period Λ of the surface.
    pub period: f64,
    /// Height of the slab top Γ_a (measurement line).
    pub a: f64,
    /// Height of the slab bottom Γ_b.
    pub b: f64,
}

impl ProblemConfig {
    /// Validated constructor.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda_lame: f64,
        mu: f64,
        rho0: f64,
        rho1: f64,
        omega: f64,
        period: f64,
        a: f64,
        b: f64,
    ) -> Result<Self, Error> {
        let c = Self { lambda_lame, mu, rho0, rho1, omega, period, a, b };
        c.validate()?;
        Ok(c)
    }

    /// Parameters of the numerical experiments: λ=2, μ=1, ρ₀=1, ω=2π, so
    /// κ₁=π and κ₂=2π; b = 0.05λ₂ and a = 2λ₂.
    pub fn example(rho1: f64, period: f64) -> Result<Self, Error> {
        Self::new(2.0, 1.0, 1.0, rho1, 2.0 * PI, period, 2.0, 0.05)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let fields = [
            ("lambda", self.lambda_lame),
            ("mu", self.mu),
            ("rho0", self.rho0),
            ("rho1", self.rho1),
            ("omega", self.omega),
            ("period", self.period),
            ("a", self.a),
            ("b", self.b),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} is not finite")));
            }
        }
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.mu <= 0.0 {
            return bad("mu must be positive");
        }
        if self.lambda_lame + self.mu <= 0.0 {
            return bad("lambda + mu must be positive");
        }
        if self.rho0 <= 0.0 {
            return bad("rho0 must be positive");
        }
        if self.rho1 < self.rho0 {
            return bad("rho1 must be at least rho0");
        }
        if !(self.b > 0.0 && self.b < self.a) {
            return bad("need 0 < b < a");
        }
        if self.period <= 0.0 {
            return bad("period must be positive");
        }
        if self.omega <= 0.0 {
            return bad("omega must be positive");
        }
        Ok(())
    }

    /// λ + 2μ.
    pub fn p_modulus(&self) -> f64 {
        self.lambda_lame + 2.0 * self.mu
    }
}

/// Compressional and shear wavenumbers outside (κ) and inside (η) the slab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub kappa1: f64,
    pub kappa2: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub wavelen1: f64,
    pub wavelen2: f64,
}

impl Wavenumbers {
    pub fn kappa(&self, j: usize) -> f64 {
        if j == 1 { self.kappa1 } else { self.kappa2 }
    }

    pub fn eta(&self, j: usize) -> f64 {
        if j == 1 { self.eta1 } else { self.eta2 }
    }

    /// (η_j² − κ_j²)/η_j², the contrast factor appearing in ĝ.
    pub fn contrast_over_eta2(&self, j: usize) -> f64 {
        let (k, e) = (self.kappa(j), self.eta(j));
        (e * e - k * k) / (e * e)
    }

    /// (η_j² − κ_j²)/κ_j², the contrast factor appearing in τ.
    pub fn contrast_over_kappa2(&self, j: usize) -> f64 {
        let (k, e) = (self.kappa(j), self.eta(j));
        (e * e - k * k) / (k * k)
    }
}

pub fn derive_wavenumbers(config: &ProblemConfig) -> Result<Wavenumbers, Error> {
    config.validate()?;
    let pm = config.p_modulus();
    let kappa1 = config.omega * (config.rho0 / pm).sqrt();
    let kappa2 = config.omega * (config.rho0 / config.mu).sqrt();
    let eta1 = config.omega * (config.rho1 / pm).sqrt();
    let eta2 = config.omega * (config.rho1 / config.mu).sqrt();
    Ok(Wavenumbers {
        kappa1,
        kappa2,
        eta1,
        eta2,
        wavelen1: 2.0 * PI / kappa1,
        wavelen2: 2.0 * PI / kappa2,
    })
}

/// Mode cutoffs N_j = ⌊η_jΛ/2π⌋ and horizontal wavenumbers α_n.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub n1: usize,
    pub n2: usize,
    pub period: f64,
    /// α_n for n = −N..=N with N = max(N₁, N₂).
    pub alphas: Vec<f64>,
}

impl ModeGrid {
    pub fn n_max(&self) -> usize {
        self.n1.max(self.n2)
    }

    pub fn cutoff(&self, j: usize) -> usize {
        if j == 1 { self.n1 } else { self.n2 }
    }

    pub fn alpha(&self, n: i64) -> f64 {
        alpha(self.period, n)
    }
}

/// α_n = 2πn/Λ.
pub fn alpha(period: f64, n: i64) -> f64 {
    2.0 * PI * n as f64 / period
}

pub fn mode_grid(config: &ProblemConfig, wn: &Wavenumbers) -> ModeGrid {
    // Guard against η_jΛ/2π landing a rounding error below an integer.
    let cut = |eta: f64| {
        let x = eta * config.period / (2.0 * PI);
        (x * (1.0 + 1e-12)).floor() as usize
    };
    let (n1, n2) = (cut(wn.eta1), cut(wn.eta2));
    let n = n1.max(n2) as i64;
    ModeGrid { n1, n2, period: config.period, alphas: (-n..=n).map(|k| alpha(config.period, k)).collect() }
}
