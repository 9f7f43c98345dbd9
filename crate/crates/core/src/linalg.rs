//! Small dense complex linear algebra: row-major matrices, LU with partial
//! pivoting, one-sided Jacobi SVD and the Moore–Penrose pseudo-inverse.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::{Float, Zero};

use crate::{Error, C64};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(alloc::format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
    }

    pub fn scale(&mut self, s: C64) {
        for a in &mut self.data {
            *a *= s;
        }
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(mut a: CMatrix) -> Result<Self, Error> {
        let n = a.rows;
        if n != a.cols {
            return Err(Error::Dimension(alloc::format!("LU of a {}x{} matrix", n, a.cols)));
        }
        let scale = a.max_abs();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut p, mut best) = (k, 0.0);
            for i in k..n {
                let v = a[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || best <= scale * 1e-300 {
                return Err(Error::Singular(alloc::format!("zero pivot in column {k}")));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let l = a[(i, k)] / piv;
                a[(i, k)] = l;
                if l.is_zero() {
                    continue;
                }
                let (top, bottom) = a.data.split_at_mut(i * n);
                let krow = &top[k * n..(k + 1) * n];
                let irow = &mut bottom[..n];
                for j in k + 1..n {
                    irow[j] -= l * krow[j];
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s -= row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s -= row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        x
    }

    /// Solves `A X = B` for a matrix right-hand side.
    pub fn solve_matrix(&self, b: &CMatrix) -> CMatrix {
        let n = self.dim();
        assert_eq!(b.rows, n);
        let m = b.cols;
        let mut x = CMatrix::zeros(n, m);
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(b.row(p));
        }
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                if l.is_zero() {
                    continue;
                }
                let (top, bottom) = x.data.split_at_mut(i * m);
                let src = &top[j * m..(j + 1) * m];
                for (d, s) in bottom[..m].iter_mut().zip(src) {
                    *d -= l * s;
                }
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                if u.is_zero() {
                    continue;
                }
                let (top, bottom) = x.data.split_at_mut(j * m);
                let dst = &mut top[i * m..(i + 1) * m];
                for (d, s) in dst.iter_mut().zip(&bottom[..m]) {
                    *d -= u * s;
                }
            }
            let inv = self.lu[(i, i)].inv();
            for d in x.row_mut(i) {
                *d *= inv;
            }
        }
        x
    }
}

/// Solves a 2x2 complex system `[[a, b], [c, d]] x = r` by Cramer's rule.
pub fn solve2(a: C64, b: C64, c: C64, d: C64, r: [C64; 2]) -> Result<[C64; 2], Error> {
    let det = a * d - b * c;
    let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
    if det.norm() <= scale * scale * 1e-300 || det.is_zero() {
        return Err(Error::Singular("2x2 block".into()));
    }
    Ok([(d * r[0] - b * r[1]) / det, (a * r[1] - c * r[0]) / det])
}

/// Thin singular value decomposition `A = U diag(sigma) V^H`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// One-sided (Hestenes) Jacobi SVD. Singular values are sorted descending.
pub fn svd(a: &CMatrix) -> Svd {
    if a.rows < a.cols {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, sigma: t.sigma, v: t.u };
    }
    let (m, n) = (a.rows, a.cols);
    // Work column-major for cheap column access.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::zero() }).collect())
        .collect();
    let eps = f64::EPSILON;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let rot = |x: &mut Vec<Vec<C64>>| {
                    let (lo, hi) = x.split_at_mut(q);
                    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let yq = *xq * phase.conj();
                        let np = *xp * c - yq * s;
                        let nq = *xp * s + yq * c;
                        *xp = np;
                        *xq = nq;
                    }
                };
                rot(&mut cols);
                rot(&mut v);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));
    let mut u = CMatrix::zeros(m, n);
    let mut vm = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        for i in 0..m {
            u[(i, k)] = if s > 0.0 { cols[j][i] / s } else { C64::zero() };
        }
        for i in 0..n {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd { u, sigma, v: vm }
}

/// Moore–Penrose pseudo-inverse with relative truncation: singular values
/// below `rcond * sigma_max` are treated as zero. Returns the pseudo-inverse,
/// all singular values, and the number kept.
pub fn pseudo_inverse(a: &CMatrix, rcond: f64) -> (CMatrix, Vec<f64>, usize) {
    let Svd { u, sigma, v } = svd(a);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cut = rcond * smax;
    let rank = sigma.iter().filter(|&&s| s > cut && s > 0.0).count();
    let mut pinv = CMatrix::zeros(a.cols, a.rows);
    for k in 0..rank {
        let inv = 1.0 / sigma[k];
        for i in 0..a.cols {
            let vik = v[(i, k)] * inv;
            for j in 0..a.rows {
                pinv[(i, j)] += vik * u[(j, k)].conj();
            }
        }
    }
    (pinv, sigma, rank)
}
