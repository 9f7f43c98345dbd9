//! Periodic surface profiles f = εg stored by their Fourier coefficients.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::{Float, Zero};

use crate::config::alpha;
use crate::spectral::{analyze, synthesize_at, UniformGrid};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Built-in test profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileName {
    /// (1/5)sin(20πx/31) − sin(40πx/31) + sin(60πx/31), period 3.1.
    Example1,
    /// Piecewise 1 − cos(2πx) on [−1,0), 0.5 − 0.5cos(2πx) on (0,1], period 2.
    Example2,
}

impl ProfileName {
    pub fn parse(name: &str) -> Result<Self, Error> {
        match name {
            "example1" => Ok(Self::Example1),
            "example2" => Ok(Self::Example2),
            other => Err(Error::UnknownProfile(other.into())),
        }
    }

    pub fn period(self) -> f64 {
        match self {
            Self::Example1 => 3.1,
            Self::Example2 => 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Example1 => "example1",
            Self::Example2 => "example2",
        }
    }
}

/// Surface f(x) = εg(x) with g given by its Fourier coefficients ĝ_m,
/// m = −M_g..=M_g.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceProfile {
    pub epsilon: f64,
    pub period: f64,
    pub g_coeffs: Vec<C64>,
    /// Optional samples of g on the measurement grid.
    pub samples: Option<Vec<f64>>,
}

impl SurfaceProfile {
    pub fn new(epsilon: f64, period: f64, g_coeffs: Vec<C64>) -> Result<Self, Error> {
        if g_coeffs.len() % 2 != 1 {
            return Err(Error::Dimension("profile coefficients need odd length".into()));
        }
        if !(epsilon.is_finite() && period > 0.0) {
            return Err(Error::InvalidConfig("profile needs finite epsilon and positive period".into()));
        }
        Ok(Self { epsilon, period, g_coeffs, samples: None })
    }

    /// The flat surface g ≡ 0.
    pub fn flat(period: f64) -> Self {
        Self { epsilon: 0.0, period, g_coeffs: vec![C64::zero()], samples: None }
    }

    /// Profile with f's Fourier coefficients given directly (ε = 1).
    pub fn from_f_coeffs(period: f64, f_coeffs: Vec<C64>) -> Result<Self, Error> {
        Self::new(1.0, period, f_coeffs)
    }

    pub fn m_g(&self) -> usize {
        (self.g_coeffs.len() - 1) / 2
    }

    pub fn g_coeff(&self, m: i64) -> C64 {
        let mg = self.m_g() as i64;
        if m.abs() > mg { C64::zero() } else { self.g_coeffs[(m + mg) as usize] }
    }

    /// Fourier coefficients of f = εg.
    pub fn f_coeff(&self, m: i64) -> C64 {
        self.g_coeff(m) * self.epsilon
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// g and its first two derivatives at x, computed spectrally.
    pub fn g_derivs(&self, x: f64) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mg = self.m_g() as i64;
        for m in -mg..=mg {
            let c = self.g_coeff(m);
            if c.is_zero() {
                continue;
            }
            let a = alpha(self.period, m);
            let e = c * C64::from_polar(1.0, a * x);
            out[0] += e.re;
            out[1] += (I * a * e).re;
            out[2] += -(a * a) * e.re;
        }
        out
    }

    /// f, f′, f″ at x.
    pub fn f_derivs(&self, x: f64) -> [f64; 3] {
        self.g_derivs(x).map(|v| v * self.epsilon)
    }

    pub fn g_at(&self, x: f64) -> f64 {
        self.g_derivs(x)[0]
    }

    pub fn f_at(&self, x: f64) -> f64 {
        self.epsilon * self.g_at(x)
    }

    /// g sampled at arbitrary points.
    pub fn g_samples(&self, xs: &[f64]) -> Vec<f64> {
        synthesize_at(&self.g_coeffs, self.period, xs).iter().map(|z| z.re).collect()
    }

    pub fn f_samples(&self, xs: &[f64]) -> Vec<f64> {
        self.g_samples(xs).iter().map(|g| g * self.epsilon).collect()
    }

    /// max_x |f(x)| estimated on a fine grid.
    pub fn max_abs_f(&self) -> f64 {
        let n = (64 * (self.m_g() + 1)).max(512);
        let grid = UniformGrid { x0: 0.0, period: self.period, count: n };
        self.f_samples(&grid.points()).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Rejects surfaces that reach the slab bottom.
    pub fn check_below(&self, b: f64) -> Result<(), Error> {
        let m = self.max_abs_f();
        if m >= b {
            return Err(Error::InvalidConfig(format!("surface reaches the slab: max|f| = {m} ≥ b = {b}")));
        }
        Ok(())
    }

    /// Largest |Im ĝ_m + ĝ_{−m}|-type asymmetry; zero for real profiles.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let mg = self.m_g() as i64;
        (-mg..=mg).fold(0.0, |m, k| m.max((self.g_coeff(k) - self.g_coeff(-k).conj()).norm()))
    }

    /// Attaches samples of g on the measurement grid.
    pub fn with_samples(mut self, n_samples: usize) -> Self {
        let grid = UniformGrid::measurement(self.period, n_samples);
        self.samples = Some(self.g_samples(&grid.points()));
        self
    }

    /// Profile from samples of g on the measurement grid, keeping |m| ≤ m_g.
    pub fn from_samples(epsilon: f64, period: f64, samples: &[f64], m_g: usize) -> Result<Self, Error> {
        let n = samples.len();
        if n < 2 * (2 * m_g + 1) {
            return Err(Error::InsufficientSamples { needed: 2 * (2 * m_g + 1), got: n });
        }
        let grid = UniformGrid::measurement(period, n);
        let z: Vec<C64> = samples.iter().map(|&v| C64::from(v)).collect();
        let coeffs = analyze(&z, &grid, m_g)?;
        let mut p = Self::new(epsilon, period, coeffs)?;
        p.samples = Some(samples.to_vec());
        Ok(p)
    }
}

/// Coefficients → samples → coefficients on the measurement grid.
pub fn profile_roundtrip(profile: &SurfaceProfile, n_samples: usize) -> Result<SurfaceProfile, Error> {
    let grid = UniformGrid::measurement(profile.period, n_samples);
    let samples = profile.g_samples(&grid.points());
    SurfaceProfile::from_samples(profile.epsilon, profile.period, &samples, profile.m_g())
}

/// ∫_lo^hi e^{−icx} dx.
fn exp_integral(c: f64, lo: f64, hi: f64) -> C64 {
    if c == 0.0 {
        return C64::from(hi - lo);
    }
    (C64::from_polar(1.0, -c * hi) - C64::from_polar(1.0, -c * lo)) / (-I * c)
}

fn example2_coeff(m: i64) -> C64 {
    // Period 2, α_m = πm, ĝ_m = (1/2)∫_{−1}^{1} g(x)e^{−iπmx}dx.
    let c = PI * m as f64;
    let cos_part = |lo: f64, hi: f64| (exp_integral(c - 2.0 * PI, lo, hi) + exp_integral(c + 2.0 * PI, lo, hi)) * 0.5;
    let left = exp_integral(c, -1.0, 0.0) - cos_part(-1.0, 0.0);
    let right = (exp_integral(c, 0.0, 1.0) - cos_part(0.0, 1.0)) * 0.5;
    (left + right) * 0.5
}

/// One of the built-in profiles with ε = 0.01, with samples of g attached.
///
/// Example 2 is not band-limited; its exact Fourier series is truncated at
/// M_g = n_samples/4.
pub fn builtin_profile(name: ProfileName, n_samples: usize) -> Result<SurfaceProfile, Error> {
    let coeffs = match name {
        ProfileName::Example1 => {
            if n_samples < 12 {
                return Err(Error::InsufficientSamples { needed: 12, got: n_samples });
            }
            // sin(α_m x) = (e^{iα_m x} − e^{−iα_m x})/(2i)
            let amp = [0.2, -1.0, 1.0];
            let mut c = vec![C64::zero(); 7];
            for (k, a) in amp.iter().enumerate() {
                let m = k + 1;
                c[3 + m] = -I * (a / 2.0);
                c[3 - m] = I * (a / 2.0);
            }
            c
        }
        ProfileName::Example2 => {
            let mg = n_samples / 4;
            if mg < 1 {
                return Err(Error::InsufficientSamples { needed: 4, got: n_samples });
            }
            (-(mg as i64)..=mg as i64).map(example2_coeff).collect()
        }
    };
    Ok(SurfaceProfile::new(0.01, name.period(), coeffs)?.with_samples(n_samples))
}

/// Exact pointwise g for the built-in profiles (no truncation).
pub fn builtin_exact(name: ProfileName, x: f64) -> f64 {
    match name {
        ProfileName::Example1 => {
            let w = 20.0 * PI / 31.0;
            0.2 * (w * x).sin() - (2.0 * w * x).sin() + (3.0 * w * x).sin()
        }
        ProfileName::Example2 => {
            // wrap to [−1, 1)
            let t = x - 2.0 * ((x + 1.0) / 2.0).floor();
            if t < 0.0 { 1.0 - (2.0 * PI * t).cos() } else { 0.5 - 0.5 * (2.0 * PI * t).cos() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_values() {
        let p = builtin_profile(ProfileName::Example1, 500).unwrap();
        assert!(p.g_at(0.0).abs() < 1e-15);
        for &x in &[0.1, -0.7, 1.3, 2.9] {
            assert!((p.g_at(x) - builtin_exact(ProfileName::Example1, x)).abs() < 1e-13);
        }
        assert_eq!(p.m_g(), 3);
        assert!(p.g_coeff(0).norm() == 0.0);
        assert!(p.conjugate_asymmetry() < 1e-15);
    }

    #[test]
    fn example2_values() {
        let p = builtin_profile(ProfileName::Example2, 2000).unwrap();
        assert!(p.conjugate_asymmetry() < 1e-15);
        for &x in &[-0.75, -0.3, 0.2, 0.6] {
            // coefficients decay like m^{-3}; truncation at 500 leaves ~1e-6
            assert!((p.g_at(x) - builtin_exact(ProfileName::Example2, x)).abs() < 1e-5, "{x}");
        }
        assert!(builtin_exact(ProfileName::Example2, 1.0).abs() < 1e-15);
        assert!(builtin_exact(ProfileName::Example2, -1.0).abs() < 1e-15);
        assert!(builtin_exact(ProfileName::Example2, 0.0).abs() < 1e-15);
        // mean of g: (1/2)(1 + 0.5)
        assert!((p.g_coeff(0).re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn roundtrip() {
        let p = builtin_profile(ProfileName::Example1, 500).unwrap();
        let q = profile_roundtrip(&p, 500).unwrap();
        for (a, b) in p.g_coeffs.iter().zip(&q.g_coeffs) {
            assert!((a - b).norm() < 1e-12);
        }
        let flat = SurfaceProfile::flat(2.0);
        let q = profile_roundtrip(&flat, 16).unwrap();
        assert!(q.g_coeffs.iter().all(|c| c.norm() == 0.0));
        assert!(profile_roundtrip(&p, 10).is_err());
    }

    #[test]
    fn cosine_coefficients() {
        let n = 64;
        let grid = UniformGrid::measurement(3.1, n);
        let s: Vec<f64> = grid.points().iter().map(|&x| (2.0 * PI * x / 3.1).cos()).collect();
        let p = SurfaceProfile::from_samples(1.0, 3.1, &s, 4).unwrap();
        assert!((p.g_coeff(1) - C64::from(0.5)).norm() < 1e-14);
        assert!((p.g_coeff(-1) - C64::from(0.5)).norm() < 1e-14);
        assert!(p.g_coeff(2).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = builtin_profile(ProfileName::Example1, 500).unwrap();
        let h = 1e-5;
        for &x in &[0.3, 1.7] {
            let d = p.g_derivs(x);
            assert!((d[1] - (p.g_at(x + h) - p.g_at(x - h)) / (2.0 * h)).abs() < 1e-7);
            assert!((d[2] - (p.g_at(x + h) - 2.0 * p.g_at(x) + p.g_at(x - h)) / (h * h)).abs() < 1e-3);
        }
    }

    #[test]
    fn surface_below_slab() {
        let p = builtin_profile(ProfileName::Example1, 500).unwrap();
        assert!(p.check_below(0.05).is_ok());
        assert!(p.clone().with_epsilon(0.05).check_below(0.05).is_err());
    }
}
