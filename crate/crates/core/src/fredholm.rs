//! Determinant engines: dense LU, circle operators by Nyström with grid
//! doubling, lattice operators by window truncation with an a-priori tail
//! bound, and spectral helpers for `det(1 - r S)` as a polynomial in `r`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{multi_kernel_matrix, nystrom_matrix, DiscreteKernel, QuadratureGrid};
use crate::symbol::CircleFunction;

pub type CMatrix = DMatrix<Complex64>;

/// Largest lattice window ever built.
pub const MAX_WINDOW: usize = 600;
const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetResult {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Quadrature nodes (circle) or window length (lattice).
    pub resolution_used: usize,
    pub converged: bool,
}

/// `P A = L U` with unit lower `L`, stored packed in `lu`.
#[derive(Debug, Clone)]
pub struct Lu {
    pub lu: CMatrix,
    /// Row `i` of `P A` is row `perm[i]` of `A`.
    pub perm: Vec<usize>,
    pub sign: f64,
}

impl Lu {
    pub fn det(&self) -> Complex64 {
        let mut d = Complex64::new(self.sign, 0.0);
        for i in 0..self.lu.nrows() {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn l(&self) -> CMatrix {
        let n = self.lu.nrows();
        CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
            std::cmp::Ordering::Less => Complex64::new(0.0, 0.0),
        })
    }

    pub fn u(&self) -> CMatrix {
        let n = self.lu.nrows();
        CMatrix::from_fn(n, n, |i, j| {
            if i <= j {
                self.lu[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// LU with partial pivoting. Exactly singular columns are skipped, giving a zero determinant.
pub fn lu(m: &CMatrix) -> Result<Lu> {
    if !m.is_square() {
        return Err(Error::LengthMismatch(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, a[(i, k)].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if p != k {
            a.swap_rows(p, k);
            perm.swap(p, k);
            sign = -sign;
        }
        if best == 0.0 {
            continue;
        }
        let pivot = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / pivot;
            a[(i, k)] = f;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    Ok(Lu { lu: a, perm, sign })
}

pub fn det_dense(m: &CMatrix) -> Result<Complex64> {
    Ok(lu(m)?.det())
}

/// Doubling schedule for the circle engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleOptions {
    pub start: usize,
    pub max: usize,
}

impl Default for CircleOptions {
    fn default() -> Self {
        CircleOptions { start: 32, max: 512 }
    }
}

impl CircleOptions {
    /// Widen the schedule so the first grid resolves `z^n`-type oscillation.
    pub fn for_degree(n: i64, extra: usize) -> Self {
        let need = (2 * n.unsigned_abs() as usize + extra + 16).next_power_of_two();
        let start = need.max(32);
        CircleOptions {
            start,
            max: (4 * start).max(512),
        }
    }
}

fn circle_doubling(
    opts: CircleOptions,
    tol: f64,
    mut det_at: impl FnMut(usize) -> Result<Complex64>,
) -> Result<DetResult> {
    let mut m = opts.start.max(16);
    let mut prev = det_at(m)?;
    loop {
        let next_m = 2 * m;
        if next_m > opts.max.max(2 * opts.start) {
            return Ok(DetResult {
                value: prev,
                error_estimate: f64::INFINITY,
                resolution_used: m,
                converged: false,
            });
        }
        let cur = det_at(next_m)?;
        let diff = (cur - prev).norm();
        let scale = cur.norm().max(1.0);
        let error_estimate = diff + next_m as f64 * EPS * scale;
        if error_estimate < tol * scale {
            return Ok(DetResult {
                value: cur,
                error_estimate,
                resolution_used: next_m,
                converged: true,
            });
        }
        if next_m >= opts.max {
            return Ok(DetResult {
                value: cur,
                error_estimate,
                resolution_used: next_m,
                converged: false,
            });
        }
        prev = cur;
        m = next_m;
    }
}

fn identity_minus(m: CMatrix, s: Complex64) -> CMatrix {
    let n = m.nrows();
    CMatrix::identity(n, n) - m * s
}

/// `det(1 - s K_n)` on the circle.
pub fn fredholm_det_circle<F: CircleFunction + ?Sized>(phi: &F, n: i64, s: Complex64, tol: f64) -> Result<DetResult> {
    fredholm_det_circle_with(phi, n, s, tol, CircleOptions::for_degree(n, 0))
}

pub fn fredholm_det_circle_with<F: CircleFunction + ?Sized>(
    phi: &F,
    n: i64,
    s: Complex64,
    tol: f64,
    opts: CircleOptions,
) -> Result<DetResult> {
    check_tol(tol)?;
    circle_doubling(opts, tol, |m| {
        let grid = QuadratureGrid::new(m);
        det_dense(&identity_minus(nystrom_matrix(phi, n, &grid), s))
    })
}

/// `det(1 - sum_j (s_j - s_{j-1}) K_{n_j})` on the circle.
pub fn fredholm_det_multi_circle<F: CircleFunction + ?Sized>(
    phi: &F,
    breakpoints: &[i64],
    weights: &[Complex64],
    tol: f64,
) -> Result<DetResult> {
    check_tol(tol)?;
    let reach = breakpoints.iter().map(|n| n.abs()).max().unwrap_or(0);
    circle_doubling(CircleOptions::for_degree(reach, 0), tol, |m| {
        let grid = QuadratureGrid::new(m);
        det_dense(&identity_minus(
            multi_kernel_matrix(phi, breakpoints, weights, &grid)?,
            Complex64::new(1.0, 0.0),
        ))
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")))
    }
}

/// Smallest window length whose discarded tail, scaled by `weight_sup`, is below `tol`.
pub fn lattice_window(kern: &DiscreteKernel, n: i64, weight_sup: f64, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    let mut len = 4;
    loop {
        if weight_sup * kern.tail_bound(n, len) < tol {
            return Ok(len);
        }
        if len >= MAX_WINDOW {
            return Err(Error::NoConvergence(format!(
                "lattice tail bound above {tol:e} at window cap {MAX_WINDOW}"
            )));
        }
        len = (len + 4).min(MAX_WINDOW);
    }
}

/// `I - W K` on the window of length `len` at `n`, with `W = diag(weight(i))`.
pub fn lattice_matrix(kern: &DiscreteKernel, n: i64, len: usize, weight: &dyn Fn(i64) -> Complex64) -> CMatrix {
    let idx = kern.window(n, len);
    let k = kern.window_matrix(n, len);
    CMatrix::from_fn(len, len, |a, b| {
        let d = if a == b { 1.0 } else { 0.0 };
        Complex64::new(d, 0.0) - weight(idx[a]) * k[(a, b)]
    })
}

/// `det(1 - w K)` for the half-line kernel at `n` with weight `w`.
///
/// The weight is read only on the window; it is assumed bounded by its
/// supremum there beyond the window as well (true for piecewise constant weights).
pub fn fredholm_det_lattice(
    kern: &DiscreteKernel,
    n: i64,
    weight: &dyn Fn(i64) -> Complex64,
    tol: f64,
) -> Result<DetResult> {
    check_tol(tol)?;
    // The window length depends on the weight's size, which in turn is read on a
    // provisional window; one refinement pass settles it.
    let probe = kern.window(n, MAX_WINDOW);
    let sup = probe.iter().map(|&i| weight(i).norm()).fold(0.0, f64::max);
    if sup == 0.0 {
        return Ok(DetResult {
            value: Complex64::new(1.0, 0.0),
            error_estimate: 0.0,
            resolution_used: 0,
            converged: true,
        });
    }
    let len = lattice_window(kern, n, sup, tol)?;
    let tail = sup * kern.tail_bound(n, len);
    let value = det_dense(&lattice_matrix(kern, n, len, weight))?;
    let error_estimate = tail + len as f64 * EPS * value.norm().max(1.0);
    Ok(DetResult {
        value,
        error_estimate,
        resolution_used: len,
        converged: error_estimate < tol,
    })
}

fn is_hermitian(m: &CMatrix) -> bool {
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    (m - m.adjoint()).iter().all(|v| v.norm() <= 1e-13 * scale)
}

/// Eigenvalues of the (unweighted) window of length `len` at `n`.
pub fn eig_lattice(kern: &DiscreteKernel, n: i64, len: usize) -> Vec<Complex64> {
    eigenvalues(&kern.window_matrix(n, len))
}

pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    if is_hermitian(m) {
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect()
    } else {
        Schur::new(m.clone())
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }
}

/// Taylor coefficients `c_0..=c_order` of `h -> prod_j (1 - (r0 + h) a_j)`.
pub fn det_taylor(eigs: &[Complex64], r0: Complex64, order: usize) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(0.0, 0.0); order + 1];
    poly[0] = Complex64::new(1.0, 0.0);
    for &a in eigs {
        let c0 = 1.0 - r0 * a;
        for d in (0..=order).rev() {
            let lower = if d > 0 {
                poly[d - 1] * (-a)
            } else {
                Complex64::new(0.0, 0.0)
            };
            poly[d] = poly[d] * c0 + lower;
        }
    }
    poly
}

/// `d^k/dr^k det(1 - r S)` at `r0` for `k = 0..=order`.
pub fn det_derivatives(eigs: &[Complex64], r0: Complex64, order: usize) -> Vec<Complex64> {
    let mut fact = 1.0;
    det_taylor(eigs, r0, order)
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                fact *= k as f64;
            }
            c * fact
        })
        .collect()
}

/// Coefficients `P_0, P_1, ...` of `prod_j ((1 - a_j) + a_j u)` for real eigenvalues in `[0, 1]`.
///
/// `P_c` is the probability that the associated point process puts exactly
/// `c` points in the window; each product term is a Bernoulli factor so the
/// recursion involves no cancellation.
pub fn count_distribution(eigs: &[f64], max_count: usize) -> Vec<f64> {
    let mut p = vec![0.0; max_count + 1];
    p[0] = 1.0;
    for &a in eigs {
        let a = a.clamp(0.0, 1.0);
        for c in (0..=max_count).rev() {
            let from_below = if c > 0 { p[c - 1] * a } else { 0.0 };
            p[c] = p[c] * (1.0 - a) + from_below;
        }
    }
    p
}

/// `f^{(k)}(center)` for `k = 0..=order` by the trapezoid rule on `|s - center| = radius`.
pub fn cauchy_derivatives(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    center: Complex64,
    radius: f64,
    nodes: usize,
    order: usize,
) -> Result<Vec<Complex64>> {
    let mut acc = vec![Complex64::new(0.0, 0.0); order + 1];
    for j in 0..nodes {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
        let v = f(center + radius * w)?;
        let mut scaled = v;
        for a in acc.iter_mut() {
            *a += scaled;
            scaled /= radius * w;
        }
    }
    let mut fact = 1.0;
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(k, a)| {
            if k > 0 {
                fact *= k as f64;
            }
            a * fact / nodes as f64
        })
        .collect())
}
