//! Finite matrices for the circle operator `K_n`, the lattice kernels `S`/`R`
//! (plain and m-colored), and Toeplitz sections.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbol::{CircleFunction, Symbol, Which};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Below this separation the kernel switches to its analytic diagonal value.
pub const DIAGONAL_EPS: f64 = 1e-8;

/// Equispaced trapezoid rule for `integral over |w| = 1 of f(w) dw`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub m_points: usize,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl QuadratureGrid {
    pub fn new(m_points: usize) -> Self {
        let nodes: Vec<Complex64> = (0..m_points)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m_points as f64))
            .collect();
        let weights = nodes.iter().map(|z| 2.0 * PI * I * z / m_points as f64).collect();
        QuadratureGrid {
            m_points,
            nodes,
            weights,
        }
    }
}

/// `K_n(z, w) = (1 - z^n phi(z) w^{-n} / phi(w)) / (2 pi i (z - w))`.
///
/// On the diagonal the removable singularity is replaced by its limit
/// `-(n/z + phi'(z)/phi(z)) / (2 pi i)`.
pub fn k_kernel_value<F: CircleFunction + ?Sized>(phi: &F, n: i64, z: Complex64, w: Complex64) -> Complex64 {
    if (z - w).norm() < DIAGONAL_EPS {
        return -(n as f64 / z + phi.log_derivative(z)) / (2.0 * PI * I);
    }
    let ratio = (z / w).powi(n as i32) * phi.eval(z) / phi.eval(w);
    (1.0 - ratio) / (2.0 * PI * I * (z - w))
}

struct NodeData {
    /// `z_a^n phi(z_a)` per node.
    lifted: Vec<Complex64>,
    diag: Vec<Complex64>,
}

fn node_data<F: CircleFunction + ?Sized>(phi: &F, n: i64, grid: &QuadratureGrid) -> NodeData {
    let lifted = grid.nodes.iter().map(|&z| z.powi(n as i32) * phi.eval(z)).collect();
    let diag = grid
        .nodes
        .iter()
        .map(|&z| -(n as f64 / z + phi.log_derivative(z)) / (2.0 * PI * I))
        .collect();
    NodeData { lifted, diag }
}

fn add_kernel(out: &mut DMatrix<Complex64>, data: &NodeData, grid: &QuadratureGrid, scale: Complex64) {
    let m = grid.m_points;
    for b in 0..m {
        let wb = grid.weights[b] * scale;
        for a in 0..m {
            let k = if a == b {
                data.diag[a]
            } else {
                (1.0 - data.lifted[a] / data.lifted[b]) / (2.0 * PI * I * (grid.nodes[a] - grid.nodes[b]))
            };
            out[(a, b)] += k * wb;
        }
    }
}

/// Nyström matrix `M[a][b] = K_n(z_a, z_b) w_b`; `det(I - s M)` approximates `det(1 - s K_n)`.
pub fn nystrom_matrix<F: CircleFunction + ?Sized>(phi: &F, n: i64, grid: &QuadratureGrid) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(grid.m_points, grid.m_points);
    add_kernel(&mut out, &node_data(phi, n, grid), grid, Complex64::new(1.0, 0.0));
    out
}

/// Nyström matrix of `sum_j (s_j - s_{j-1}) K_{n_j}` with `s_0 = 0`.
pub fn multi_kernel_matrix<F: CircleFunction + ?Sized>(
    phi: &F,
    breakpoints: &[i64],
    weights: &[Complex64],
    grid: &QuadratureGrid,
) -> Result<DMatrix<Complex64>> {
    if breakpoints.len() != weights.len() || breakpoints.is_empty() {
        return Err(Error::LengthMismatch(format!(
            "{} breakpoints vs {} weights",
            breakpoints.len(),
            weights.len()
        )));
    }
    let mut out = DMatrix::zeros(grid.m_points, grid.m_points);
    let mut prev = Complex64::new(0.0, 0.0);
    for (&n, &s) in breakpoints.iter().zip(weights) {
        let coef = s - prev;
        prev = s;
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        add_kernel(&mut out, &node_data(phi, n, grid), grid, coef);
    }
    Ok(out)
}

/// `T_n` with `(p, q) -> c_{p-q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMatrix {
    pub n: usize,
    /// `c_k` for `k = -(n-1) ..= n-1`, stored at `k + n - 1`.
    diagonals: Vec<Complex64>,
}

impl ToeplitzMatrix {
    pub fn entry(&self, p: usize, q: usize) -> Complex64 {
        self.diagonals[p + self.n - 1 - q]
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |p, q| self.entry(p, q))
    }
}

pub fn toeplitz(sym: &Symbol, n: usize) -> Result<ToeplitzMatrix> {
    let lo = -(n as i64) + 1;
    let diagonals = (lo..n as i64)
        .map(|k| sym.fourier_coeff(Which::Direct, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ToeplitzMatrix { n, diagonals })
}

/// `S` sums over `k >= 1`, `R` over `k <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    S,
    R,
}

/// Lattice kernel `sum_k (1/phi)_{(i+k)/m} phi_{(-j-k)/m}` over `k >= 1` (S) or `k <= 0` (R).
///
/// `colors = 1` is the plain kernel. For `colors = m > 1` coefficients at
/// non-integral index vanish, which gives the block structure
/// `S^(m)(m i + r, m j + r') = delta_{r r'} S(i, j)` without ever forming blocks.
/// Coefficients with `|index| > cutoff` are treated as zero.
#[derive(Debug, Clone)]
pub struct DiscreteKernel {
    pub side: Side,
    pub symbol: Symbol,
    pub colors: u32,
    pub cutoff: i64,
}

/// Default coefficient tail tolerance used to size `cutoff`.
pub const DEFAULT_COEFF_TOL: f64 = 1e-17;

impl DiscreteKernel {
    pub fn new(symbol: &Symbol, side: Side, colors: u32, coeff_tol: f64) -> Result<Self> {
        if colors == 0 {
            return Err(Error::InvalidParameter("color count must be >= 1".into()));
        }
        let cutoff = match symbol.decay_bound(coeff_tol) {
            Ok(j) => j,
            // Tables are already truncated at round-off; fall back to their edge.
            Err(Error::NoConvergence(_)) => symbol
                .table(Which::Direct)
                .effective_support(1e-18)
                .max(symbol.table(Which::Inverse).effective_support(1e-18)),
            Err(e) => return Err(e),
        };
        Ok(DiscreteKernel {
            side,
            symbol: symbol.clone(),
            colors,
            cutoff,
        })
    }

    pub fn s(symbol: &Symbol) -> Result<Self> {
        Self::new(symbol, Side::S, 1, DEFAULT_COEFF_TOL)
    }

    pub fn r(symbol: &Symbol) -> Result<Self> {
        Self::new(symbol, Side::R, 1, DEFAULT_COEFF_TOL)
    }

    pub fn colored(symbol: &Symbol, side: Side, m: u32) -> Result<Self> {
        Self::new(symbol, side, m, DEFAULT_COEFF_TOL)
    }

    /// Largest lattice index carrying a nonzero coefficient.
    fn reach(&self) -> i64 {
        self.cutoff * self.colors as i64
    }

    /// `(1/phi)_{p/m}`, zero unless `m | p`.
    #[inline]
    pub fn inv_coeff(&self, p: i64) -> Complex64 {
        self.coeff(Which::Inverse, p)
    }

    /// `phi_{q/m}`, zero unless `m | q`.
    #[inline]
    pub fn dir_coeff(&self, q: i64) -> Complex64 {
        self.coeff(Which::Direct, q)
    }

    #[inline]
    fn coeff(&self, which: Which, p: i64) -> Complex64 {
        let m = self.colors as i64;
        if p.rem_euclid(m) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        let idx = p / m;
        if idx.abs() > self.cutoff {
            return Complex64::new(0.0, 0.0);
        }
        self.symbol.table(which).get(idx)
    }

    /// Kernel entry `K(i, j)`.
    pub fn entry(&self, i: i64, j: i64) -> Complex64 {
        let m = self.colors as i64;
        if (i - j).rem_euclid(m) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        let reach = self.reach();
        let lo_common = (-reach - i).max(-reach - j);
        let hi_common = (reach - i).min(reach - j);
        let (lo, hi) = match self.side {
            Side::S => (lo_common.max(1), hi_common),
            Side::R => (lo_common, hi_common.min(0)),
        };
        if lo > hi {
            return Complex64::new(0.0, 0.0);
        }
        // first k >= lo with i + k divisible by m
        let start = lo + (-(i + lo)).rem_euclid(m);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = start;
        while k <= hi {
            acc += self.inv_coeff(i + k) * self.dir_coeff(-j - k);
            k += m;
        }
        acc
    }

    /// Lattice indices of the truncated window of size `len`:
    /// `[n, n + len)` for S, `[n - len, n - 1]` for R.
    pub fn window(&self, n: i64, len: usize) -> Vec<i64> {
        match self.side {
            Side::S => (n..n + len as i64).collect(),
            Side::R => (n - len as i64..n).collect(),
        }
    }

    pub fn window_matrix(&self, n: i64, len: usize) -> DMatrix<Complex64> {
        let idx = self.window(n, len);
        DMatrix::from_fn(len, len, |a, b| self.entry(idx[a], idx[b]))
    }

    /// Entrywise l1 bound on the part of `chi K chi` (chi the half-line at `n`)
    /// discarded by a window of length `len`. It dominates the trace norm of the
    /// discarded operator.
    pub fn tail_bound(&self, n: i64, len: usize) -> f64 {
        let reach = self.reach();
        let a = |p: i64| self.inv_coeff(p).norm();
        let b = |q: i64| self.dir_coeff(q).norm();
        let sum = |lo: i64, hi: i64, f: &dyn Fn(i64) -> f64| -> f64 {
            if lo > hi {
                0.0
            } else {
                (lo..=hi).map(f).sum()
            }
        };
        match self.side {
            Side::S => {
                let n0 = n + len as i64;
                let a_tail = sum(n0 + 1, reach, &|p| (p - n0) as f64 * a(p));
                let a_head = sum(n + 1, reach, &|p| a(p));
                let b_tail = sum(n0 + 1, reach, &|q| (q - n0) as f64 * b(-q));
                let b_head = sum(n + 1, reach, &|q| b(-q));
                a_tail * b_head + a_head * b_tail
            }
            Side::R => {
                let n1 = n - len as i64 - 1;
                let a_tail = sum(-reach, n1, &|p| (n1 - p + 1) as f64 * a(p));
                let a_head = sum(-reach, n - 1, &|p| a(p));
                let b_tail = sum(-n1, reach, &|q| (q + n1 + 1) as f64 * b(q));
                let b_head = sum(1 - n, reach, &|q| b(q));
                a_tail * b_head + a_head * b_tail
            }
        }
    }
}

/// Export a matrix as nested JSON arrays of `[re, im]` pairs.
pub fn matrix_to_json(m: &DMatrix<Complex64>) -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect();
    serde_json::to_string(&rows).expect("matrix serializes")
}
