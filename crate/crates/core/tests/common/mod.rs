#![allow(dead_code)]

use elastinv_core::C64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Classical RK4 for u'' = rhs(y, u) written as a first-order system,
/// from y0 to y1 in `steps` steps. Returns (u, u') at y1.
pub fn rk4_second_order(rhs: impl Fn(f64, C64) -> C64, y0: f64, y1: f64, u0: C64, du0: C64, steps: usize) -> (C64, C64) {
    let h = (y1 - y0) / steps as f64;
    let (mut u, mut v) = (u0, du0);
    let mut y = y0;
    for _ in 0..steps {
        let k1u = v;
        let k1v = rhs(y, u);
        let k2u = v + k1v * (h / 2.0);
        let k2v = rhs(y + h / 2.0, u + k1u * (h / 2.0));
        let k3u = v + k2v * (h / 2.0);
        let k3v = rhs(y + h / 2.0, u + k2u * (h / 2.0));
        let k4u = v + k3v * h;
        let k4v = rhs(y + h, u + k3u * h);
        u += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        y += h;
    }
    (u, v)
}

/// Shooting solution of u'' + β²u = v(y), u'(0) = r, u'(h) − iβu(h) = s,
/// evaluated at `y_eval`.
pub fn rk4_two_point(beta: C64, r: C64, s: C64, v: &dyn Fn(f64) -> C64, h: f64, y_eval: f64, steps: usize) -> C64 {
    let b2 = beta * beta;
    let forced = |y: f64, u: C64| v(y) - b2 * u;
    let free = |_: f64, u: C64| -b2 * u;
    // u = U_p + c·U_h with U_p(0) = 0, U_p'(0) = r and U_h(0) = 1, U_h'(0) = 0
    let (up, dup) = rk4_second_order(forced, 0.0, h, C64::default(), r, steps);
    let (uh, duh) = rk4_second_order(free, 0.0, h, C64::from(1.0), C64::default(), steps);
    let c = (s - (dup - I * beta * up)) / (duh - I * beta * uh);
    let n_eval = ((y_eval / h) * steps as f64).round() as usize;
    if n_eval == 0 {
        return c;
    }
    let (pe, _) = rk4_second_order(forced, 0.0, y_eval, C64::default(), r, n_eval);
    let (he, _) = rk4_second_order(free, 0.0, y_eval, C64::from(1.0), C64::default(), n_eval);
    pe + he * c
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// ‖a − b‖∞ / ‖b‖∞
pub fn rel_inf(a: &[C64], b: &[C64]) -> f64 {
    let num = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    let den = b.iter().fold(0.0f64, |m, y| m.max(y.norm()));
    num / den.max(f64::MIN_POSITIVE)
}
