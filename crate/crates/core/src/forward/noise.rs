use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::FarFieldRecord;

/// u_δ(x_i) = u(x_i)(1 + δr_i), with each displacement component of r_i drawn
/// independently from U[−1, 1]. Deterministic in `seed`.
pub fn add_noise(rec: &FarFieldRecord, delta: f64, seed: u64) -> FarFieldRecord {
    let mut out = rec.clone();
    out.delta = delta;
    out.seed = seed;
    if delta == 0.0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (u1, u2) in out.u1.iter_mut().zip(out.u2.iter_mut()) {
        *u1 *= 1.0 + delta * rng.random_range(-1.0..=1.0);
        *u2 *= 1.0 + delta * rng.random_range(-1.0..=1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn record() -> FarFieldRecord {
        let n = 50;
        FarFieldRecord {
            xs: (0..n).map(|i| i as f64 / n as f64).collect(),
            u1: (0..n).map(|i| C64::new(1.0, i as f64)).collect(),
            u2: (0..n).map(|i| C64::new(-2.0, 0.5 * i as f64)).collect(),
            period: 1.0,
            delta: 0.0,
            seed: 0,
        }
    }

    #[test]
    fn zero_delta_is_identity() {
        let r = record();
        let n = add_noise(&r, 0.0, 7);
        assert_eq!(n.u1, r.u1);
        assert_eq!(n.u2, r.u2);
    }

    #[test]
    fn bounded_and_deterministic() {
        let r = record();
        let a = add_noise(&r, 0.02, 11);
        let b = add_noise(&r, 0.02, 11);
        assert_eq!(a, b);
        for (p, q) in a.u1.iter().zip(&r.u1) {
            assert!((p - q).norm() <= 0.02 * q.norm() * (1.0 + 1e-12));
        }
        assert_ne!(add_noise(&r, 0.02, 12).u1, a.u1);
    }
}
