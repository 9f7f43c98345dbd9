//! Finite-difference solver of the Navier equation on the layered domain.
//!
//! x is discretized by Fourier collocation on nx = 2K+1 nodes, ỹ by a
//! conservative second-order scheme on a uniform grid with a line on Γ_b.
//! Below Γ_b the surface is flattened by ỹ = b(y − f)/(b − f) and the rows
//! are dense in x; above Γ_b the equations decouple per Fourier mode. The top
//! row carries the exact elastic DtN condition.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::config::{alpha, derive_wavenumbers, ProblemConfig};
use crate::decomposition::FarFieldRecord;
use crate::inversion::ForwardSolver;
use crate::linalg::{CMatrix, Lu};
use crate::profile::SurfaceProfile;
use crate::spectral::{elastic_dtn_matrix, synthesize_at, tbc_sources, ResonancePolicy, UniformGrid, VerticalWavenumbers};
use crate::{Error, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

type M2 = [[C64; 2]; 2];

/// Grid sizes: `nx` collocation points over one period (odd), `ny` uniform
/// intervals over [0, a].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FdGrid {
    pub nx: usize,
    pub ny: usize,
}

impl FdGrid {
    pub fn new(nx: usize, ny: usize) -> Result<Self, Error> {
        if nx < 3 || nx % 2 == 0 {
            return Err(Error::InvalidConfig(alloc::format!("nx must be odd and ≥ 3, got {nx}")));
        }
        if ny < 2 {
            return Err(Error::InvalidConfig(alloc::format!("ny must be ≥ 2, got {ny}")));
        }
        Ok(Self { nx, ny })
    }

    /// Coarsest grid with at least `ppw` points per shortest shear wavelength
    /// that places a line on Γ_b.
    pub fn from_ppw(config: &ProblemConfig, ppw: f64, nx: usize) -> Result<Self, Error> {
        let wn = derive_wavenumbers(config)?;
        let h_max = 2.0 * core::f64::consts::PI / wn.eta2.max(wn.kappa2) / ppw;
        let kb = (config.b / h_max - 1e-9).ceil().max(1.0) as usize;
        let ny = (config.a / (config.b / kb as f64)).round() as usize;
        let g = Self::new(nx, ny)?;
        g.kb(config)?;
        Ok(g)
    }

    pub fn h(&self, config: &ProblemConfig) -> f64 {
        config.a / self.ny as f64
    }

    /// Index of the grid line on Γ_b.
    pub fn kb(&self, config: &ProblemConfig) -> Result<usize, Error> {
        let x = config.b / self.h(config);
        let k = x.round();
        if (x - k).abs() > 1e-8 * x.max(1.0) || k < 1.0 {
            return Err(Error::InvalidConfig(alloc::format!("b/h = {x} is not a positive integer")));
        }
        Ok(k as usize)
    }

    /// Same nx with half the y-spacing.
    pub fn refined(&self) -> Self {
        Self { nx: self.nx, ny: 2 * self.ny }
    }

    /// Points per shortest shear wavelength.
    pub fn ppw(&self, config: &ProblemConfig) -> f64 {
        let wn = derive_wavenumbers(config).expect("validated config");
        2.0 * core::f64::consts::PI / wn.eta2.max(wn.kappa2) / self.h(config)
    }
}


/// Solved displacement on the transformed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardField {
    pub grid: FdGrid,
    pub kb: usize,
    pub period: f64,
    pub a: f64,
    pub b: f64,
    /// Row k holds [u₁(x_0..x_{nx−1}), u₂(x_0..x_{nx−1})] at ỹ_k = k·a/ny.
    pub rows: Vec<Vec<C64>>,
    /// Fourier coefficients of u₁, u₂ on Γ_a for n = −K..=K (Richardson
    /// extrapolated when requested).
    pub top_modes: [Vec<C64>; 2],
    pub extrapolated: bool,
}

impl ForwardField {
    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.grid.nx).map(|i| i as f64 * self.period / self.grid.nx as f64).collect()
    }
}

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[C64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn m2_add(a: &M2, b: &M2) -> M2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

fn m2_scale(a: &M2, s: C64) -> M2 {
    a.map(|r| r.map(|v| v * s))
}

fn m2_vec(a: &M2, v: &[C64; 2]) -> [C64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn m2_inv(a: &M2, mode: i64, row: usize) -> Result<M2, Error> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.norm()));
    if det.norm() <= 1e-14 * scale * scale {
        return Err(Error::Forward(alloc::format!("singular slab block, mode {mode}, row {row}")));
    }
    Ok([[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
}

struct Stencil {
    lam_mu: f64,
    p_mod: f64,
    mu: f64,
    h: f64,
}

impl Stencil {
    /// Flat half-level flux F = Fm u_k + Fp u_{k+1} for mode α.
    fn flux(&self, a: f64) -> (M2, M2) {
        let z = C64::default();
        let c = I * (self.lam_mu * a * 0.5);
        let (m, p) = (C64::from(self.mu / self.h), C64::from(self.p_mod / self.h));
        ([[-m, z], [c, -p]], [[m, z], [c, p]])
    }

    /// iα σ̃_x at a node: coefficients on u_{k−1}, u_k, u_{k+1}.
    fn xterm(&self, a: f64) -> (M2, M2, M2) {
        let z = C64::default();
        let c = I * (a * self.lam_mu / (2.0 * self.h));
        ([[z, -c], [z, z]], [[C64::from(-self.p_mod * a * a), z], [z, C64::from(-self.mu * a * a)]], [[z, c], [z, z]])
    }
}

/// Dense 2n×2n block helpers.
struct Blocks {
    n: usize,
}

impl Blocks {
    fn add(&self, m: &mut CMatrix, bi: usize, bj: usize, sub: &CMatrix, s: f64) {
        let n = self.n;
        for i in 0..n {
            let src = sub.row(i);
            let dst = &mut m.row_mut(bi * n + i)[bj * n..(bj + 1) * n];
            for (d, v) in dst.iter_mut().zip(src) {
                *d += v * s;
            }
        }
    }

    fn add_diag(&self, m: &mut CMatrix, bi: usize, bj: usize, d: &[f64]) {
        for (i, v) in d.iter().enumerate() {
            m[(bi * self.n + i, bj * self.n + i)] += v;
        }
    }

    /// diag(d)·A
    fn row_scaled(a: &CMatrix, d: &[f64]) -> CMatrix {
        let mut out = a.clone();
        for (i, &s) in d.iter().enumerate() {
            for v in out.row_mut(i) {
                *v *= s;
            }
        }
        out
    }

    /// A·diag(d)
    fn col_scaled(a: &CMatrix, d: &[f64]) -> CMatrix {
        let mut out = a.clone();
        for i in 0..out.rows() {
            for (v, &s) in out.row_mut(i).iter_mut().zip(d) {
                *v *= s;
            }
        }
        out
    }
}

/// Metric data of the flattening map at the x-nodes.
struct Metric {
    jac: Vec<f64>,
    zeta: Vec<f64>,
    /// ξ(x, ỹ) = xi_base(x)·(b − ỹ)
    xi_base: Vec<f64>,
}

fn solve_once(config: &ProblemConfig, profile: &SurfaceProfile, grid: FdGrid) -> Result<ForwardField, Error> {
    let wn = derive_wavenumbers(config)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let kb = grid.kb(config)?;
    let h = grid.h(config);
    let kmax = (nx - 1) / 2;
    let km = kmax as i64;
    let period = config.period;
    let (lam, mu) = (config.lambda_lame, config.mu);
    let st = Stencil { lam_mu: lam + mu, p_mod: lam + 2.0 * mu, mu, h };
    let w2 = config.omega * config.omega;
    let vw = VerticalWavenumbers::new(&wn, period, kmax, ResonancePolicy::Allow)?;
    let src = tbc_sources(config, &wn);

    // ---- slab and top rows, per mode, eliminated downward ----
    // xs[k - kb - 1][p], ys[..][p] for k = kb+1..=ny
    let nslab = ny - kb;
    let mut xs: Vec<Vec<M2>> = vec![Vec::with_capacity(nx); nslab];
    let mut ys: Vec<Vec<[C64; 2]>> = vec![Vec::with_capacity(nx); nslab];
    for n in -km..=km {
        let a = alpha(period, n);
        let t = elastic_dtn_matrix(n, config, &vw)?;
        let hs = if n == 0 { src.h } else { [C64::default(); 2] };
        let (fm, fp) = st.flux(a);
        let (sm, s0, sp) = st.xterm(a);
        let rho_w = C64::from(w2 * config.rho1);
        let ident: M2 = [[C64::from(1.0), C64::default()], [C64::default(), C64::from(1.0)]];
        let inv_h = C64::from(1.0 / h);
        // top half-cell
        let lm_pm = st.lam_mu / st.p_mod;
        let sx: M2 = [
            [C64::from(-st.p_mod * a * a + st.lam_mu * lm_pm * a * a) + I * a * lm_pm * t[1][0], I * a * lm_pm * t[1][1]],
            [C64::default(), C64::from(-mu * a * a)],
        ];
        let bmat = m2_add(&m2_scale(&m2_add(&t, &m2_scale(&fp, C64::from(-1.0))), inv_h), &m2_scale(&m2_add(&sx, &m2_scale(&ident, rho_w)), C64::from(0.5)));
        let lmat = m2_scale(&fm, -inv_h);
        let r = [-(hs[0] / h + I * a * lm_pm * hs[1] * 0.5), -(hs[1] / h)];
        let binv = m2_inv(&bmat, n, ny)?;
        let mut x = m2_scale(&m2_mul(&binv, &lmat), C64::from(-1.0));
        let mut y = m2_vec(&binv, &r);
        xs[nslab - 1].push(x);
        ys[nslab - 1].push(y);
        // interior slab rows
        let lrow = m2_add(&m2_scale(&fm, -inv_h), &sm);
        let drow = m2_add(&m2_add(&m2_scale(&m2_add(&fm, &m2_scale(&fp, C64::from(-1.0))), inv_h), &s0), &m2_scale(&ident, rho_w));
        let urow = m2_add(&m2_scale(&fp, inv_h), &sp);
        for k in (kb + 1..ny).rev() {
            let m = m2_add(&drow, &m2_mul(&urow, &x));
            let minv = m2_inv(&m, n, k)?;
            x = m2_scale(&m2_mul(&minv, &lrow), C64::from(-1.0));
            let uy = m2_vec(&urow, &y);
            y = m2_vec(&minv, &[-uy[0], -uy[1]]);
            xs[k - kb - 1].push(x);
            ys[k - kb - 1].push(y);
        }
    }

    // ---- nodal operators ----
    let xn: Vec<f64> = (0..nx).map(|i| i as f64 * period / nx as f64).collect();
    let e_mat = CMatrix::from_fn(nx, nx, |i, p| C64::from_polar(1.0, alpha(period, p as i64 - km) * xn[i]));
    let f_mat = CMatrix::from_fn(nx, nx, |p, i| C64::from_polar(1.0 / nx as f64, -alpha(period, p as i64 - km) * xn[i]));
    let dx = CMatrix::from_fn(nx, nx, |i, l| {
        let mut s = C64::default();
        for n in -km..=km {
            let a = alpha(period, n);
            s += I * a * C64::from_polar(1.0, a * (xn[i] - xn[l]));
        }
        C64::from(s.re / nx as f64)
    });
    let b = config.b;
    let metric = {
        let mut jac = Vec::with_capacity(nx);
        let mut zeta = Vec::with_capacity(nx);
        let mut xi_base = Vec::with_capacity(nx);
        for &x in &xn {
            let [f, f1, _] = profile.f_derivs(x);
            jac.push((b - f) / b);
            zeta.push(b / (b - f));
            xi_base.push(-f1 / (b - f));
        }
        Metric { jac, zeta, xi_base }
    };
    let bl = Blocks { n: nx };
    let (pm, lmu) = (st.p_mod, st.lam_mu);
    let map = |d: &[f64], g: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..d.len()).map(g).collect() };
    let jz: Vec<f64> = map(&metric.jac, &|i| metric.jac[i] * metric.zeta[i]);

    // Ω half-level flux G = Gm u_k + Gp u_{k+1} at ỹ = yh.
    let flux = |yh: f64| -> (CMatrix, CMatrix) {
        let xi: Vec<f64> = metric.xi_base.iter().map(|v| v * (b - yh)).collect();
        let jxi: Vec<f64> = (0..nx).map(|i| metric.jac[i] * xi[i]).collect();
        let mut out = (CMatrix::zeros(2 * nx, 2 * nx), CMatrix::zeros(2 * nx, 2 * nx));
        for (mat, wd) in [(&mut out.0, -1.0 / h), (&mut out.1, 1.0 / h)] {
            // P = ½Dx + diag(ξ wd), Q = diag(ζ wd)
            let mut p_op = dx.clone();
            p_op.scale(C64::from(0.5));
            for i in 0..nx {
                p_op[(i, i)] += xi[i] * wd;
            }
            let q: Vec<f64> = metric.zeta.iter().map(|z| z * wd).collect();
            let a1: Vec<f64> = jxi.iter().map(|v| v * pm).collect();
            let b1: Vec<f64> = jxi.iter().map(|v| v * mu).collect();
            let b3: Vec<f64> = jz.iter().map(|v| v * lmu).collect();
            bl.add(mat, 0, 0, &Blocks::row_scaled(&p_op, &a1), 1.0);
            bl.add_diag(mat, 0, 0, &(0..nx).map(|i| jz[i] * mu * q[i]).collect::<Vec<_>>());
            bl.add_diag(mat, 0, 1, &(0..nx).map(|i| jxi[i] * lmu * q[i]).collect::<Vec<_>>());
            bl.add(mat, 1, 0, &Blocks::row_scaled(&p_op, &b3), 1.0);
            bl.add(mat, 1, 1, &Blocks::row_scaled(&p_op, &b1), 1.0);
            bl.add_diag(mat, 1, 1, &(0..nx).map(|i| jz[i] * pm * q[i]).collect::<Vec<_>>());
        }
        out
    };
    // Node x-term Dx(J σ̃_x): pieces independent of ỹ.
    let dx_j_pm_dx = Blocks::col_scaled(&dx, &metric.jac.iter().map(|j| j * pm).collect::<Vec<_>>()).matmul(&dx);
    let dx_j_mu_dx = Blocks::col_scaled(&dx, &metric.jac.iter().map(|j| j * mu).collect::<Vec<_>>()).matmul(&dx);
    let dx_j_pm_xib = Blocks::col_scaled(&dx, &(0..nx).map(|i| metric.jac[i] * pm * metric.xi_base[i]).collect::<Vec<_>>());
    let dx_j_mu_xib = Blocks::col_scaled(&dx, &(0..nx).map(|i| metric.jac[i] * mu * metric.xi_base[i]).collect::<Vec<_>>());
    let dx_j_lm_z = Blocks::col_scaled(&dx, &(0..nx).map(|i| jz[i] * lmu).collect::<Vec<_>>());
    let c2h = 1.0 / (2.0 * h);

    // nodal form of the slab relation u_{kb+1} = X u_kb + Y
    let (xn_op, yn_vec) = {
        let x = &xs[0];
        let y = &ys[0];
        let mut op = CMatrix::zeros(2 * nx, 2 * nx);
        for c in 0..2 {
            for d in 0..2 {
                let diag: Vec<C64> = x.iter().map(|m| m[c][d]).collect();
                let mut ed = e_mat.clone();
                for i in 0..nx {
                    for (v, s) in ed.row_mut(i).iter_mut().zip(&diag) {
                        *v *= s;
                    }
                }
                let blk = ed.matmul(&f_mat);
                bl.add(&mut op, c, d, &blk, 1.0);
            }
        }
        let mut yv = Vec::with_capacity(2 * nx);
        for c in 0..2 {
            let coeffs: Vec<C64> = y.iter().map(|v| v[c]).collect();
            yv.extend(e_mat.matvec(&coeffs));
        }
        (op, yv)
    };

    // ---- interface row kb ----
    let (gm_b, gp_b) = flux(b - 0.5 * h);
    let mut lb = gm_b.clone();
    lb.scale(C64::from(-1.0 / h));
    // J∂_yu₂⁻ + ∂_yu₂⁺ = (u₂,kb+1 − u₂,kb−1)/h since Jζ = 1
    bl.add(&mut lb, 0, 1, &dx, -lmu * c2h);
    let mut db = gp_b.clone();
    db.scale(C64::from(-1.0 / h));
    let jp1_pm = Blocks::col_scaled(&dx, &metric.jac.iter().map(|j| (j + 1.0) * pm).collect::<Vec<_>>()).matmul(&dx);
    let jp1_mu = Blocks::col_scaled(&dx, &metric.jac.iter().map(|j| (j + 1.0) * mu).collect::<Vec<_>>()).matmul(&dx);
    bl.add(&mut db, 0, 0, &jp1_pm, 0.5);
    bl.add(&mut db, 1, 1, &jp1_mu, 0.5);
    let mass: Vec<f64> = metric.jac.iter().map(|j| 0.5 * w2 * (j * config.rho0 + config.rho1)).collect();
    bl.add_diag(&mut db, 0, 0, &mass.iter().map(|m| m - mu / (h * h)).collect::<Vec<_>>());
    bl.add_diag(&mut db, 1, 1, &mass.iter().map(|m| m - pm / (h * h)).collect::<Vec<_>>());
    bl.add(&mut db, 1, 0, &dx, lmu * c2h);
    let mut ub = CMatrix::zeros(2 * nx, 2 * nx);
    bl.add_diag(&mut ub, 0, 0, &vec![mu / (h * h); nx]);
    bl.add_diag(&mut ub, 1, 1, &vec![pm / (h * h); nx]);
    bl.add(&mut ub, 1, 0, &dx, lmu * c2h);
    bl.add(&mut ub, 0, 1, &dx, lmu * c2h);

    // ---- Ω rows eliminated downward: u_k = X_k u_{k−1} + Y_k ----
    let mut xo: Vec<Option<CMatrix>> = vec![None; kb + 1];
    let mut yo: Vec<Vec<C64>> = vec![Vec::new(); kb + 1];
    {
        let mut m = db;
        m.add_assign(&ub.matmul(&xn_op));
        let rhs: Vec<C64> = ub.matvec(&yn_vec).iter().map(|v| -v).collect();
        let lu = Lu::new(m).map_err(|e| Error::Forward(alloc::format!("interface row: {e}")))?;
        yo[kb] = lu.solve(&rhs);
        if kb > 1 {
            let mut x = lu.solve_matrix(&lb);
            x.scale(C64::from(-1.0));
            xo[kb] = Some(x);
        }
    }
    for k in (1..kb).rev() {
        let yk = k as f64 * h;
        let (gm_p, gp_p) = flux(yk + 0.5 * h);
        let (gm_m, gp_m) = flux(yk - 0.5 * h);
        let w = b - yk;
        let mut l = gm_m;
        l.scale(C64::from(-1.0 / h));
        let mut d = gm_p;
        d.sub_assign(&gp_m);
        d.scale(C64::from(1.0 / h));
        let mut u = gp_p;
        u.scale(C64::from(1.0 / h));
        bl.add(&mut d, 0, 0, &dx_j_pm_dx, 1.0);
        bl.add(&mut d, 1, 1, &dx_j_mu_dx, 1.0);
        let m_diag: Vec<f64> = metric.jac.iter().map(|j| j * w2 * config.rho0).collect();
        bl.add_diag(&mut d, 0, 0, &m_diag);
        bl.add_diag(&mut d, 1, 1, &m_diag);
        for (mat, s) in [(&mut l, -c2h), (&mut u, c2h)] {
            bl.add(mat, 0, 0, &dx_j_pm_xib, s * w);
            bl.add(mat, 0, 1, &dx_j_lm_z, s);
            bl.add(mat, 1, 1, &dx_j_mu_xib, s * w);
        }
        let xk1 = xo[k + 1].as_ref().expect("set on the previous row");
        let mut m = d;
        m.add_assign(&u.matmul(xk1));
        let rhs: Vec<C64> = u.matvec(&yo[k + 1]).iter().map(|v| -v).collect();
        let lu = Lu::new(m).map_err(|e| Error::Forward(alloc::format!("row {k}: {e}")))?;
        yo[k] = lu.solve(&rhs);
        if k > 1 {
            let mut x = lu.solve_matrix(&l);
            x.scale(C64::from(-1.0));
            xo[k] = Some(x);
        }
    }

    // ---- back substitution ----
    let mut rows = vec![vec![C64::default(); 2 * nx]; ny + 1];
    rows[1] = yo[1].clone();
    for k in 2..=kb {
        let mut v = xo[k].as_ref().unwrap().matvec(&rows[k - 1]);
        for (a, y) in v.iter_mut().zip(&yo[k]) {
            *a += y;
        }
        rows[k] = v;
    }
    let mut modal: Vec<[C64; 2]> = {
        let u1 = f_mat.matvec(&rows[kb][..nx]);
        let u2 = f_mat.matvec(&rows[kb][nx..]);
        u1.into_iter().zip(u2).map(|(a, b)| [a, b]).collect()
    };
    for k in kb + 1..=ny {
        let s = k - kb - 1;
        for p in 0..nx {
            let v = m2_vec(&xs[s][p], &modal[p]);
            modal[p] = [v[0] + ys[s][p][0], v[1] + ys[s][p][1]];
        }
        let c1: Vec<C64> = modal.iter().map(|v| v[0]).collect();
        let c2: Vec<C64> = modal.iter().map(|v| v[1]).collect();
        let mut row = e_mat.matvec(&c1);
        row.extend(e_mat.matvec(&c2));
        rows[k] = row;
    }
    let top_modes = [modal.iter().map(|v| v[0]).collect(), modal.iter().map(|v| v[1]).collect()];
    Ok(ForwardField { grid, kb, period, a: config.a, b, rows, top_modes, extrapolated: false })
}

/// Solves the direct problem; with `richardson` the top trace is
/// extrapolated from grids h and h/2.
pub fn solve_direct_fd(config: &ProblemConfig, profile: &SurfaceProfile, grid: FdGrid, richardson: bool) -> Result<ForwardField, Error> {
    config.validate()?;
    if (profile.period - config.period).abs() > 1e-12 * config.period {
        return Err(Error::InvalidConfig("profile period differs from the configured period".into()));
    }
    profile.check_below(config.b)?;
    let coarse = solve_once(config, profile, grid)?;
    if !richardson {
        return Ok(coarse);
    }
    let mut fine = solve_once(config, profile, grid.refined())?;
    for c in 0..2 {
        for (f, g) in fine.top_modes[c].iter_mut().zip(&coarse.top_modes[c]) {
            *f = (*f * 4.0 - g) / 3.0;
        }
    }
    fine.extrapolated = true;
    Ok(fine)
}

/// Displacement on Γ_a at the measurement points by trigonometric
/// interpolation of the top row.
pub fn trace_at_top(field: &ForwardField, n_samples: usize) -> FarFieldRecord {
    let grid = UniformGrid::measurement(field.period, n_samples);
    let xs = grid.points();
    FarFieldRecord {
        u1: synthesize_at(&field.top_modes[0], field.period, &xs),
        u2: synthesize_at(&field.top_modes[1], field.period, &xs),
        xs,
        period: field.period,
        delta: 0.0,
        seed: 0,
    }
}

/// [`ForwardSolver`] backed by [`solve_direct_fd`].
#[derive(Debug, Clone, PartialEq)]
pub struct FdSolver {
    pub config: ProblemConfig,
    pub grid: FdGrid,
    pub richardson: bool,
    pub n_samples: usize,
    pub solves: usize,
}

impl FdSolver {
    pub fn new(config: ProblemConfig, grid: FdGrid, richardson: bool, n_samples: usize) -> Self {
        Self { config, grid, richardson, n_samples, solves: 0 }
    }
}

impl ForwardSolver for FdSolver {
    fn solve(&mut self, profile: &SurfaceProfile) -> Result<FarFieldRecord, Error> {
        self.solves += 1;
        let field = solve_direct_fd(&self.config, profile, self.grid, self.richardson)?;
        Ok(trace_at_top(&field, self.n_samples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::flat_layered_oracle;

    /// Error of the mode-0 top trace, relative to the unit incident amplitude.
    fn top_err(cfg: &ProblemConfig, field: &ForwardField) -> f64 {
        let o = flat_layered_oracle(cfg).unwrap().displacement(cfg.a);
        let k = (field.grid.nx - 1) / 2;
        let u = [field.top_modes[0][k], field.top_modes[1][k]];
        ((u[0] - o[0]).norm_sqr() + (u[1] - o[1]).norm_sqr()).sqrt()
    }

    #[test]
    fn flat_matches_oracle() {
        for rho1 in [1.0, 4.0] {
            let c = ProblemConfig::example(rho1, 3.1).unwrap();
            let flat = SurfaceProfile::flat(3.1);
            let g = FdGrid::from_ppw(&c, 20.0, 5).unwrap();
            let f = solve_direct_fd(&c, &flat, g, false).unwrap();
            let e1 = top_err(&c, &f);
            let e2 = top_err(&c, &solve_direct_fd(&c, &flat, g.refined(), false).unwrap());
            let er = top_err(&c, &solve_direct_fd(&c, &flat, g, true).unwrap());
            assert!(e1 < 5e-2, "rho1={rho1}: {e1}");
            assert!(e1 / e2 > 3.5 && e1 / e2 < 4.5, "rho1={rho1}: order ratio {}", e1 / e2);
            assert!(er < 0.05 * e2, "rho1={rho1}: extrapolated {er} vs {e2}");
            assert!(f.rows[0].iter().all(|v| *v == C64::default()));
            for v in &f.top_modes[0] {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn interior_matches_oracle() {
        let c = ProblemConfig::example(4.0, 3.1).unwrap();
        let o = flat_layered_oracle(&c).unwrap();
        let g = FdGrid::new(5, 1280).unwrap();
        let f = solve_direct_fd(&c, &SurfaceProfile::flat(3.1), g, false).unwrap();
        let h = g.h(&c);
        for k in (0..=g.ny).step_by(40) {
            let want = o.displacement(k as f64 * h)[1];
            // all nodes carry the same x-independent value
            for i in 0..5 {
                assert!((f.rows[k][5 + i] - want).norm() < 2e-3, "k={k}");
            }
        }
    }

    #[test]
    fn grid_from_ppw() {
        let c = ProblemConfig::example(4.0, 3.1).unwrap();
        let g = FdGrid::from_ppw(&c, 20.0, 33).unwrap();
        assert_eq!(g.kb(&c).unwrap(), 2);
        assert_eq!(g.ny, 80);
        assert!(g.ppw(&c) >= 20.0 - 1e-9);
    }
}
