//! Quadrature on uniform grids.

use alloc::vec;
use alloc::vec::Vec;

use crate::C64;

/// Composite Simpson weights for `n` points (n odd, n ≥ 3) with spacing `h`.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number of points, got {n}");
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == n - 1 {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    w
}

pub fn integrate(w: &[f64], f: &[C64]) -> C64 {
    w.iter().zip(f).map(|(w, f)| f * w).sum()
}

/// Running integral F_i = ∫_{y_0}^{y_i} f with a fourth-order local cubic rule
/// (one-sided at the two end intervals). Needs at least 4 points.
pub fn cumulative(f: &[C64], h: f64) -> Vec<C64> {
    let n = f.len();
    assert!(n >= 4, "cumulative rule needs 4 points, got {n}");
    let c = h / 24.0;
    let mut out = vec![C64::default(); n];
    for i in 0..n - 1 {
        let step = if i == 0 {
            (f[0] * 9.0 + f[1] * 19.0 - f[2] * 5.0 + f[3]) * c
        } else if i == n - 2 {
            (f[n - 1] * 9.0 + f[n - 2] * 19.0 - f[n - 3] * 5.0 + f[n - 4]) * c
        } else {
            ((f[i] + f[i + 1]) * 13.0 - f[i - 1] - f[i + 2]) * c
        };
        out[i + 1] = out[i] + step;
    }
    out
}
