mod common;

use common::{rel, rk4_second_order, rk4_two_point, I};
use elastinv_core::config::{derive_wavenumbers, mode_grid};
use elastinv_core::decomposition::{displacement_from_potentials, potentials_from_displacement};
use elastinv_core::ftn::{far_to_near, slab_mode_solution, slab_mode_derivative};
use elastinv_core::linalg::{pseudo_inverse, CMatrix};
use elastinv_core::quad::simpson_weights;
use elastinv_core::spectral::{analyze, synthesize, tbc_sources, vertical, vertical_wavenumbers, UniformGrid};
use elastinv_core::tfe::{kernel_k, solve_mode, Kernel, YGrid};
use elastinv_core::{ModeCoefficients, ProblemConfig, ResonancePolicy, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C64::new(a, b))
}

/// Propagating or evanescent vertical wavenumber.
fn wavenumber() -> impl Strategy<Value = C64> {
    (0.3..15.0f64, any::<bool>()).prop_map(|(k, prop)| if prop { C64::new(k, 0.0) } else { C64::new(0.0, k) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slab_final_value_matches_rk4(p in complex(), q in complex(), beta in wavenumber(), eta in 0.3..15.0f64, b in 0.01..0.5f64) {
        let (a, gamma) = (2.0, C64::from(eta));
        let du = I * beta * p + q;
        let (u, du_b) = rk4_second_order(|_, u| -gamma * gamma * u, a, b, p, du, 20_000);
        prop_assert!(rel(slab_mode_solution(p, q, beta, gamma, a, b), u) < 1e-8);
        prop_assert!(rel(slab_mode_derivative(p, q, beta, gamma, a, b), du_b) < 1e-8);
    }

    #[test]
    fn green_kernels_match_rk4(r in complex(), s in complex(), beta in wavenumber(), c0 in complex(), c1 in complex(), k in 0.0..40.0f64, t in 0.0..1.0f64) {
        let h = 0.05;
        let y = t * h;
        let v = move |z: f64| c0 + c1 * C64::from_polar(1.0, k * z);
        // ∫K₃(y,z)v(z)dz split at the kink z = y
        let piece = |lo: f64, hi: f64| {
            let n = 401;
            let w = simpson_weights(n, (hi - lo) / (n - 1) as f64);
            (0..n).map(|i| {
                let z = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                kernel_k(Kernel::K3, y, z, beta, h).unwrap() * v(z) * w[i]
            }).sum::<C64>()
        };
        let u = kernel_k(Kernel::K1, y, 0.0, beta, h).unwrap() * r - kernel_k(Kernel::K2, y, 0.0, beta, h).unwrap() * s
            + piece(0.0, y) + piece(y, h);
        let want = rk4_two_point(beta, r, s, &v, h, y, 4000);
        prop_assert!(rel(u, want) < 1e-8, "{u} vs {want}");
    }

    #[test]
    fn mode_solver_matches_rk4(r in complex(), s in complex(), beta in wavenumber(), c0 in complex(), c1 in complex(), k in 0.0..40.0f64) {
        let grid = YGrid::new(0.05, 257).unwrap();
        let v = move |z: f64| c0 + c1 * C64::from_polar(1.0, k * z);
        let src: Vec<C64> = grid.ys.iter().map(|&z| v(z)).collect();
        let p = solve_mode(beta, r, s, src, &grid).unwrap();
        for i in [0, 64, 200, 256] {
            let want = rk4_two_point(beta, r, s, &v, 0.05, grid.ys[i], 2048);
            prop_assert!(rel(p.phi[i], want) < 1e-8, "i={i}");
        }
    }

    #[test]
    fn branch_is_pure(k in 0.1..20.0f64, a in -40.0..40.0f64) {
        let b = vertical(k, a, ResonancePolicy::Allow);
        prop_assert_eq!(b.re * b.im, 0.0);
        prop_assert!(b.re + b.im >= 0.0);
        prop_assert!((b * b - C64::from(k * k - a * a)).norm() < 1e-10 * (k * k + a * a));
    }

    #[test]
    fn fourier_roundtrip(coeffs in prop::collection::vec(complex(), 1..20), period in 0.5..5.0f64) {
        let n_max = (coeffs.len() - 1) / 2;
        let c = &coeffs[..2 * n_max + 1];
        let grid = UniformGrid::measurement(period, 97);
        let back = analyze(&synthesize(c, &grid), &grid, n_max).unwrap();
        for (x, y) in back.iter().zip(c) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn cutoff_invariants(rho1 in 1.0..9.0f64, period in 0.5..6.0f64) {
        let c = ProblemConfig::example(rho1, period).unwrap();
        let w = derive_wavenumbers(&c).unwrap();
        let g = mode_grid(&c, &w);
        prop_assert!(w.kappa1 < w.kappa2 && w.eta1 < w.eta2);
        for j in 1..=2 {
            let n = g.cutoff(j) as i64;
            prop_assert!(g.alpha(n).abs() <= w.eta(j) * (1.0 + 1e-12));
            prop_assert!(g.alpha(n + 1).abs() > w.eta(j));
        }
    }

    #[test]
    fn moore_penrose(entries in prop::collection::vec(complex(), 12)) {
        let a = CMatrix::from_vec(4, 3, entries).unwrap();
        let (p, _, _) = pseudo_inverse(&a, 1e-12);
        let apa = a.matmul(&p).matmul(&a);
        let pap = p.matmul(&a).matmul(&p);
        for i in 0..4 {
            for j in 0..3 {
                prop_assert!((apa[(i, j)] - a[(i, j)]).norm() < 1e-9);
            }
        }
        for i in 0..3 {
            for j in 0..4 {
                prop_assert!((pap[(i, j)] - p[(i, j)]).norm() < 1e-9 * (1.0 + p.max_abs()));
            }
        }
        let ap = a.matmul(&p);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((ap[(i, j)] - ap[(j, i)].conj()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn displacement_potential_roundtrip(v1 in prop::collection::vec(complex(), 13), v2 in prop::collection::vec(complex(), 13)) {
        let c = ProblemConfig::example(4.0, 3.1).unwrap();
        let w = derive_wavenumbers(&c).unwrap();
        let vw = vertical_wavenumbers(&w, &mode_grid(&c, &w), ResonancePolicy::Reject).unwrap();
        let src = tbc_sources(&c, &w);
        let phi1 = ModeCoefficients::from_values("phi1", v1, c.a);
        let phi2 = ModeCoefficients::from_values("phi2", v2, c.a);
        let rec = displacement_from_potentials(&phi1, &phi2, &vw, &src, &UniformGrid::measurement(c.period, 500));
        let (p1, p2) = potentials_from_displacement(&rec, &c, &vw, &src, 6).unwrap();
        for n in -6..=6 {
            prop_assert!((p1.get(n) - phi1.get(n)).norm() < 1e-11);
            prop_assert!((p2.get(n) - phi2.get(n)).norm() < 1e-11);
        }
    }
}

#[test]
fn evanescent_modes_are_exactly_zero() {
    let c = ProblemConfig::example(2.0, 3.1).unwrap();
    let w = derive_wavenumbers(&c).unwrap();
    let vw = elastinv_core::VerticalWavenumbers::new(&w, c.period, 12, ResonancePolicy::Reject).unwrap();
    let src = tbc_sources(&c, &w);
    let ones = ModeCoefficients::from_values("phi", vec![C64::new(1.0, 1.0); 25], c.a);
    let t = far_to_near((&ones, &ones), &src, &c, &w, &vw).unwrap();
    for j in 1..=2 {
        for n in -12i64..=12 {
            let evanescent = vw.alpha(n).abs() > w.eta(j);
            assert_eq!(!evanescent, t.kept_modes[j - 1].contains(&n), "j={j} n={n}");
            if evanescent {
                assert_eq!(t.psi_b[j - 1].get(n), C64::default());
                assert_eq!(t.dpsi_b[j - 1].get(n), C64::default());
            }
        }
    }
}
