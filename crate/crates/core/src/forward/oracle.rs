//! Exact mode-matching solution for a flat surface under the slab.

#[allow(unused_imports)]
use num_traits::Float;

use crate::config::{alpha, ProblemConfig};
use crate::decomposition::FarFieldRecord;
use crate::linalg::{CMatrix, Lu};
use crate::spectral::{vertical, ResonancePolicy, UniformGrid};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Vertical wavenumbers (P, S) of one homogeneous layer.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Layer {
    qp: C64,
    qs: C64,
}

impl Layer {
    fn new(config: &ProblemConfig, rho: f64, a: f64) -> Self {
        let kp = config.omega * (rho / config.p_modulus()).sqrt();
        let ks = config.omega * (rho / config.mu).sqrt();
        Self { qp: vertical(kp, a, ResonancePolicy::Allow), qs: vertical(ks, a, ResonancePolicy::Allow) }
    }
}

/// Displacement and pseudo-traction (μ∂_yu₁, (λ+2μ)∂_yu₂ + (λ+μ)∂_xu₁) of a
/// unit plane wave; `shear` selects S over P, `s` = ±1 the vertical direction.
fn plane_wave(config: &ProblemConfig, a: f64, q: C64, shear: bool, s: f64) -> ([C64; 4], C64) {
    let (lam, mu) = (config.lambda_lame, config.mu);
    let sq = q * s;
    let (u, sig) = if shear {
        ([I * sq, -I * a], [-(q * q) * mu, sq * (mu * a)])
    } else {
        ([I * a, I * sq], [-sq * (mu * a), -(q * q) * (lam + 2.0 * mu) - (lam + mu) * a * a])
    };
    ([u[0], u[1], sig[0], sig[1]], I * sq)
}

/// Amplitudes of the ten partial waves of the flat layered problem for the
/// excited mode n = 0: two outgoing waves above Γ_a, four in the slab and four
/// in Ω, each referenced to the layer boundary it grows from.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatLayerSolution {
    pub config: ProblemConfig,
    /// [P↑, S↑] above; [P↑, P↓, S↑, S↓] in the slab and in Ω.
    pub amplitudes: [C64; 10],
    /// Horizontal wavenumber α_n of the mode.
    pub alpha: f64,
    /// Amplitude of the incident potential (zero for a pure bottom-driven mode).
    incident_amp: C64,
    upper: Layer,
    slab: Layer,
    lower: Layer,
}

/// (layer, P?, direction, reference height) of each unknown.
fn waves(sol: &FlatLayerSolution) -> [(Layer, bool, f64, f64); 10] {
    let c = &sol.config;
    [
        (sol.upper, false, 1.0, c.a),
        (sol.upper, true, 1.0, c.a),
        (sol.slab, false, 1.0, c.b),
        (sol.slab, false, -1.0, c.a),
        (sol.slab, true, 1.0, c.b),
        (sol.slab, true, -1.0, c.a),
        (sol.lower, false, 1.0, 0.0),
        (sol.lower, false, -1.0, c.b),
        (sol.lower, true, 1.0, 0.0),
        (sol.lower, true, -1.0, c.b),
    ]
}

fn wave_at(config: &ProblemConfig, a: f64, layer: Layer, shear: bool, s: f64, y_ref: f64, y: f64) -> [C64; 4] {
    let q = if shear { layer.qs } else { layer.qp };
    let (v, _) = plane_wave(config, a, q, shear, s);
    let e = (I * q * s * (y - y_ref)).exp();
    v.map(|z| z * e)
}

impl FlatLayerSolution {
    fn incident(&self, y: f64) -> [C64; 4] {
        wave_at(&self.config, self.alpha, self.upper, false, -1.0, 0.0, y).map(|z| z * self.incident_amp)
    }

    /// Which layer y lies in: 0 above Γ_a, 1 slab, 2 Ω.
    fn layer_of(&self, y: f64) -> usize {
        if y > self.config.a { 0 } else if y >= self.config.b { 1 } else { 2 }
    }

    /// (u₁, u₂, σ̃₁, σ̃₂) of the total field at height y.
    pub fn state(&self, y: f64) -> [C64; 4] {
        let l = self.layer_of(y);
        let range = [0..2, 2..6, 6..10][l].clone();
        let w = waves(self);
        let mut out = if l == 0 { self.incident(y) } else { [C64::default(); 4] };
        for k in range {
            let (layer, shear, s, yr) = w[k];
            let v = wave_at(&self.config, self.alpha, layer, shear, s, yr, y);
            for c in 0..4 {
                out[c] += v[c] * self.amplitudes[k];
            }
        }
        out
    }

    pub fn displacement(&self, y: f64) -> [C64; 2] {
        let s = self.state(y);
        [s[0], s[1]]
    }

    /// ∂_y(u₁, u₂) at height y.
    pub fn dy_displacement(&self, y: f64) -> [C64; 2] {
        let s = self.state(y);
        let c = &self.config;
        [s[2] / c.mu, (s[3] - I * self.alpha * (c.lambda_lame + c.mu) * s[0]) / c.p_modulus()]
    }

    /// Compressional and shear potentials (φ₁, φ₂) in Ω at height y < b.
    pub fn lower_potentials(&self, y: f64) -> [C64; 2] {
        let w = waves(self);
        let mut out = [C64::default(); 2];
        for k in 6..10 {
            let (layer, shear, s, yr) = w[k];
            let q = if shear { layer.qs } else { layer.qp };
            out[shear as usize] += self.amplitudes[k] * (I * q * s * (y - yr)).exp();
        }
        out
    }

    /// Vertical energy flux Im(ū·σ_y) of the total field.
    pub fn flux(&self, y: f64) -> f64 {
        let s = self.state(y);
        (s[0].conj() * s[2] + s[1].conj() * s[3]).im
    }

    /// Flux carried by the incident wave alone (downward, so negative).
    pub fn incident_flux(&self) -> f64 {
        let s = self.incident(self.config.a);
        (s[0].conj() * s[2] + s[1].conj() * s[3]).im
    }

    /// Flux of the outgoing waves above Γ_a.
    pub fn reflected_flux(&self) -> f64 {
        let w = waves(self);
        let mut s = [C64::default(); 4];
        for k in 0..2 {
            let (layer, shear, d, yr) = w[k];
            let v = wave_at(&self.config, self.alpha, layer, shear, d, yr, self.config.a);
            for c in 0..4 {
                s[c] += v[c] * self.amplitudes[k];
            }
        }
        (s[0].conj() * s[2] + s[1].conj() * s[3]).im
    }

    /// Total displacement on Γ_a sampled on the measurement grid.
    pub fn trace(&self, n_samples: usize) -> FarFieldRecord {
        let grid = UniformGrid::measurement(self.config.period, n_samples);
        let u = self.displacement(self.config.a);
        FarFieldRecord {
            xs: grid.points(),
            u1: alloc::vec![u[0]; n_samples],
            u2: alloc::vec![u[1]; n_samples],
            period: self.config.period,
            delta: 0.0,
            seed: 0,
        }
    }
}

/// Solves the 10×10 mode-matching system for normal incidence on a flat
/// rigid surface at y = 0.
pub fn flat_layered_oracle(config: &ProblemConfig) -> Result<FlatLayerSolution, Error> {
    let wn = crate::config::derive_wavenumbers(config)?;
    mode_matching(config, 0, -I / wn.kappa1, [C64::default(); 2])
}

/// Mode n of the flat layered problem with no incident wave and prescribed
/// displacement `bottom` on y = 0 (times e^{iα_n x}).
pub fn flat_mode_response(config: &ProblemConfig, n: i64, bottom: [C64; 2]) -> Result<FlatLayerSolution, Error> {
    mode_matching(config, n, C64::default(), bottom)
}

fn mode_matching(config: &ProblemConfig, n: i64, incident_amp: C64, bottom: [C64; 2]) -> Result<FlatLayerSolution, Error> {
    config.validate()?;
    let an = alpha(config.period, n);
    let mut sol = FlatLayerSolution {
        config: *config,
        amplitudes: [C64::default(); 10],
        alpha: an,
        incident_amp,
        upper: Layer::new(config, config.rho0, an),
        slab: Layer::new(config, config.rho1, an),
        lower: Layer::new(config, config.rho0, an),
    };
    let w = waves(&sol);
    let mut m = CMatrix::zeros(10, 10);
    let mut rhs = [C64::default(); 10];
    let inc = sol.incident(config.a);
    for (k, &(layer, shear, s, yr)) in w.iter().enumerate() {
        // continuity at Γ_a (rows 0..4), at Γ_b (rows 4..8), u given at y = 0 (rows 8..10)
        let (rows, sign, y) = match k {
            0..=1 => (0..4, 1.0, config.a),
            2..=5 => (0..4, -1.0, config.a),
            _ => (4..8, -1.0, config.b),
        };
        let v = wave_at(config, an, layer, shear, s, yr, y);
        for (r, c) in rows.zip(0..4) {
            m[(r, k)] = v[c] * sign;
        }
        if (2..=5).contains(&k) {
            let v = wave_at(config, an, layer, shear, s, yr, config.b);
            for c in 0..4 {
                m[(4 + c, k)] = v[c];
            }
        }
        if k >= 6 {
            let v = wave_at(config, an, layer, shear, s, yr, 0.0);
            m[(8, k)] = v[0];
            m[(9, k)] = v[1];
        }
    }
    for c in 0..4 {
        rhs[c] = -inc[c];
    }
    rhs[8] = bottom[0];
    rhs[9] = bottom[1];
    let lu = Lu::new(m).map_err(|_| Error::Singular(alloc::format!("flat layered system, mode {n}")))?;
    let x = lu.solve(&rhs);
    sol.amplitudes.copy_from_slice(&x);
    Ok(sol)
}
