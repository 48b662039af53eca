//! Row distributions of Poissonized Plancherel partitions from the discrete
//! Bessel kernel: single-row and joint CDFs, the second-row cross-check
//! against the circle operator, de-Poissonization brackets, moments of the
//! scaled rows and tail-decay probes.
//!
//! The points `lambda_j - j` form a determinantal process with kernel `S`, so
//! `lambda_k <= n` holds exactly when fewer than `k` points lie in
//! `[n - k + 1, inf)`. On a truncated window the number of points there is a
//! sum of independent Bernoulli variables whose parameters are the
//! eigenvalues of the window, which gives every row CDF without cancellation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fredholm::{
    cauchy_derivatives, count_distribution, det_dense, det_derivatives, eig_lattice, fredholm_det_circle,
    lattice_matrix, lattice_window, CMatrix,
};
use crate::identities::{IdentityId, IdentityReport};
use crate::kernels::{DiscreteKernel, Side};
use crate::symbol::Symbol;

/// Default truncation tolerance for probabilities.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Contour radius around `s = 1` for the circle-side second-row derivative.
pub const K_SIDE_RADIUS: f64 = 0.25;
/// Contour radius around `s = -1` for lattice-side mixed partials.
pub const S_SIDE_RADIUS: f64 = 0.5;
pub const CONTOUR_NODES: usize = 32;
/// CDF increments below this are treated as zero in moment sums.
pub const CLAMP_BELOW: f64 = 1e-14;
/// Tail values below this are flagged and left out of slope fits.
pub const UNDERFLOW: f64 = 1e-15;

/// Poissonized Plancherel measure at parameter `t` (mean size `t^2`), optionally
/// superimposed over `colors` independent copies.
#[derive(Debug, Clone)]
pub struct PoissonizedModel {
    pub t: f64,
    pub symbol: Symbol,
    pub kernel: DiscreteKernel,
}

impl PoissonizedModel {
    pub fn new(t: f64) -> Result<Self> {
        Self::colored(t, 1)
    }

    pub fn colored(t: f64, colors: u32) -> Result<Self> {
        let symbol = Symbol::bessel(t)?;
        let kernel = DiscreteKernel::colored(&symbol, Side::S, colors)?;
        Ok(PoissonizedModel { t, symbol, kernel })
    }

    pub fn colors(&self) -> u32 {
        self.kernel.colors
    }

    /// Eigenvalues (real, clamped into `[0, 1]`) of the kernel on `[start, inf)`.
    pub fn window_eigenvalues(&self, start: i64, tol: f64) -> Result<Vec<f64>> {
        let len = lattice_window(&self.kernel, start, 1.0, tol)?;
        Ok(eig_lattice(&self.kernel, start, len)
            .iter()
            .map(|a| a.re.clamp(0.0, 1.0))
            .collect())
    }

    /// Distribution of the number of points in `[start, inf)`, up to `max_count`.
    pub fn counts(&self, start: i64, max_count: usize, tol: f64) -> Result<Vec<f64>> {
        Ok(count_distribution(&self.window_eigenvalues(start, tol)?, max_count))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("row index k must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_range(value: f64, tol: f64) -> Result<f64> {
    if value < -tol || value > 1.0 + tol || !value.is_finite() {
        Err(Error::OutOfRange { value, tol })
    } else {
        Ok(value)
    }
}

/// `Prob(lambda_k <= n)` and its complement, both computed without cancellation.
pub fn row_cdf_pair(model: &PoissonizedModel, k: usize, n: i64, tol: f64) -> Result<(f64, f64)> {
    check_k(k)?;
    let start = n - k as i64 + 1;
    let eigs = model.window_eigenvalues(start, tol)?;
    let p = count_distribution(&eigs, eigs.len().max(k));
    let below: f64 = p[..k].iter().sum();
    let above: f64 = p[k..].iter().sum();
    Ok((check_range(below, tol.max(1e-12))?, above))
}

/// `phi^(k)_n(t) = Prob(lambda_k <= n)`.
pub fn row_cdf(model: &PoissonizedModel, k: usize, n: i64, tol: f64) -> Result<f64> {
    Ok(row_cdf_pair(model, k, n, tol)?.0)
}

/// Which evaluation of `d^k/dr^k det(1 - r S_n)` at `r = 1` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DerivativePath {
    Eigen,
    Contour,
}

/// `d^j/dr^j det(1 - r S_n)` at `r = 1`, `j = 0..=order`.
pub fn det_r_derivatives(
    model: &PoissonizedModel,
    n: i64,
    order: usize,
    path: DerivativePath,
    tol: f64,
) -> Result<Vec<f64>> {
    let len = lattice_window(&model.kernel, n, 1.0, tol)?;
    let one = Complex64::new(1.0, 0.0);
    let out = match path {
        DerivativePath::Eigen => det_derivatives(&eig_lattice(&model.kernel, n, len), one, order),
        DerivativePath::Contour => {
            let f = |s: Complex64| det_dense(&lattice_matrix(&model.kernel, n, len, &|_| s));
            cauchy_derivatives(&f, one, S_SIDE_RADIUS, CONTOUR_NODES, order)?
        }
    };
    Ok(out.iter().map(|v| v.re).collect())
}

/// `phi^(k)_n` through the derivative recursion
/// `phi^(j+1)_{m+j} = phi^(j)_{m+j-1} + (1/j!) (-d/dr)^j det(1 - r S_m)|_{r=1}`,
/// starting from `phi^(1)_{n-k+1} = det(1 - S_{n-k+1})`.
pub fn row_cdf_recursive(model: &PoissonizedModel, k: usize, n: i64, path: DerivativePath, tol: f64) -> Result<f64> {
    check_k(k)?;
    let m = n - k as i64 + 1;
    let d = det_r_derivatives(model, m, k - 1, path, tol)?;
    let mut value = d[0];
    let mut fact = 1.0;
    for (j, dj) in d.iter().enumerate().skip(1) {
        fact *= j as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        value += sign * dj / fact;
    }
    check_range(value, tol.max(1e-10))
}

/// Thresholds `a_1 >= ... >= a_k` for the event `lambda_l - l <= a_l`;
/// `None` stands for `+inf` and may only appear as a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointQuery {
    pub a: Vec<Option<i64>>,
}

impl JointQuery {
    pub fn new(a: Vec<Option<i64>>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter(
                "joint query needs at least one threshold".into(),
            ));
        }
        let key = |v: &Option<i64>| v.unwrap_or(i64::MAX);
        if a.windows(2).any(|w| key(&w[0]) < key(&w[1])) {
            return Err(Error::InvalidParameter("thresholds must be nonincreasing".into()));
        }
        if a.last().unwrap().is_none() {
            return Err(Error::InvalidParameter("the last threshold must be finite".into()));
        }
        Ok(JointQuery { a })
    }

    /// Event `lambda_1 <= b_1, ..., lambda_k <= b_k` in row-length form.
    pub fn from_row_bounds(b: &[Option<i64>]) -> Result<Self> {
        Self::new(b.iter().enumerate().map(|(l, v)| v.map(|x| x - l as i64 - 1)).collect())
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }
}

/// `{n in N^k : n_1 + ... + n_r <= r - 1 for r = 1..=k}`.
pub fn lambda_set(k: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, k: usize, sum: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == k {
            out.push(cur.clone());
            return;
        }
        // after adding n_{r+1}, the partial sum may be at most r
        for v in 0..=(r - sum) {
            cur.push(v);
            rec(r + 1, k, sum + v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(0, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// `Prob(lambda_l - l <= a_l, l = 1..=k)` as the `Lambda_k` sum of normalized
/// mixed partials of `det(1 + sum_l s_l chi_(a_l, a_{l-1}] S)` at `s = -1`,
/// using tensor-product Cauchy contours.
pub fn joint_cdf(model: &PoissonizedModel, q: &JointQuery, tol: f64) -> Result<f64> {
    let k = q.k();
    if k > 4 {
        return Err(Error::TooLarge(format!("joint CDF supports k <= 4, got {k}")));
    }
    let start = q.a[k - 1].unwrap() + 1;
    let len = lattice_window(&model.kernel, start, 1.0 + S_SIDE_RADIUS, tol)?;
    let idx = model.kernel.window(start, len);
    let kmat = model.kernel.window_matrix(start, len);
    // band l (1-based) holds rows with a_l < i <= a_{l-1}
    let band: Vec<usize> = idx
        .iter()
        .map(|&i| {
            (1..=k)
                .find(|&l| {
                    let lo = q.a[l - 1].unwrap_or(i64::MAX);
                    let hi = if l == 1 {
                        i64::MAX
                    } else {
                        q.a[l - 2].unwrap_or(i64::MAX)
                    };
                    i > lo && i <= hi
                })
                .unwrap_or(0)
        })
        .collect();
    let occupied: Vec<bool> = (1..=k).map(|l| band.contains(&l)).collect();
    let nodes: Vec<usize> = occupied.iter().map(|&o| if o { CONTOUR_NODES } else { 1 }).collect();
    let total: usize = nodes.iter().product();
    let terms = lambda_set(k);
    let roots: Vec<Complex64> = (0..CONTOUR_NODES)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CONTOUR_NODES as f64))
        .collect();

    let partial: Result<Vec<Vec<Complex64>>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut offsets = vec![Complex64::new(0.0, 0.0); k];
            for l in 0..k {
                let j = rem % nodes[l];
                rem /= nodes[l];
                if occupied[l] {
                    offsets[l] = S_SIDE_RADIUS * roots[j];
                }
            }
            let s: Vec<Complex64> = offsets.iter().map(|o| -1.0 + o).collect();
            let m = CMatrix::from_fn(len, len, |a, b| {
                let d = if a == b {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let w = if band[a] == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    s[band[a] - 1]
                };
                d + w * kmat[(a, b)]
            });
            let f = det_dense(&m)?;
            Ok(terms
                .iter()
                .map(|nv| {
                    let mut v = f;
                    for l in 0..k {
                        if nv[l] > 0 {
                            if !occupied[l] {
                                return Complex64::new(0.0, 0.0);
                            }
                            v /= offsets[l].powi(nv[l] as i32);
                        }
                    }
                    v
                })
                .collect())
        })
        .collect();
    let partial = partial?;
    let mut value = Complex64::new(0.0, 0.0);
    for row in &partial {
        for v in row {
            value += v;
        }
    }
    value /= total as f64;
    check_range(value.re, tol.max(1e-9))
}

/// Second-row cross-check: circle side `-(d/ds)[(1+sqrt s)^{-n} det(1 - sqrt(s) K_n)]` at `s = 1`
/// against lattice side `(d/ds) det(1 + s chi_[n,inf) S)` at `s = -1`.
pub fn lambda2_crosscheck(model: &PoissonizedModel, n: i64, tol: f64) -> Result<IdentityReport> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("n must be >= 0, got {n}")));
    }
    let ctol = (tol * 1e-3).max(1e-13);
    let sym = &model.symbol;
    let g = |s: Complex64| -> Result<Complex64> {
        let r = s.sqrt();
        Ok((1.0 + r).powi(-(n as i32)) * fredholm_det_circle(sym, n, r, ctol)?.value)
    };
    let d = cauchy_derivatives(&g, Complex64::new(1.0, 0.0), K_SIDE_RADIUS, CONTOUR_NODES, 1)?;
    let k_side = -d[1];
    let p = model.counts(n, 1, (tol * 1e-3).max(1e-15))?;
    let s_side = Complex64::new(p[1], 0.0);
    let base = row_cdf(model, 1, n, tol)?;
    let params = json!({"t": model.t, "n": n, "lambda1_cdf": base, "lambda2_cdf": base + p[1]});
    Ok(IdentityReport::new(
        IdentityId::Lambda2Consistency,
        params,
        k_side,
        s_side,
        Complex64::new(1.0, 0.0),
        0.0,
        tol,
    ))
}

/// `x = (n - 2t) 2^{1/3} / n^{1/3}`.
pub fn scaled_x(n: i64, t: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be >= 1, got {n}")));
    }
    let nf = n as f64;
    Ok((nf - 2.0 * t) * 2f64.cbrt() / nf.cbrt())
}

/// Poissonized scaling `(lambda - 2t) / t^{1/3}`.
pub fn xi_poissonized(lambda: f64, t: f64) -> f64 {
    (lambda - 2.0 * t) / t.cbrt()
}

/// `xi_j = (lambda_j - 2 sqrt N) / N^{1/6}` for a fixed-size partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledRow {
    pub j: usize,
    pub raw: u32,
    pub size: usize,
    pub value: f64,
}

impl ScaledRow {
    pub fn new(j: usize, raw: u32, size: usize) -> Result<Self> {
        if j == 0 || size == 0 {
            return Err(Error::InvalidParameter("row index and size must be >= 1".into()));
        }
        let nf = size as f64;
        let value = (raw as f64 - 2.0 * nf.sqrt()) / nf.powf(1.0 / 6.0);
        Ok(ScaledRow { j, raw, size, value })
    }
}

/// De-Poissonization sandwich at fixed size `N` with the unspecified constant set to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub t_minus: f64,
    pub t_plus: f64,
    /// `phi^(k)_n(t_-)`, the upper end.
    pub phi_minus: f64,
    /// `phi^(k)_n(t_+)`, the lower end.
    pub phi_plus: f64,
    pub low: f64,
    pub high: f64,
}

impl Bracket {
    pub fn contains(&self, p: f64) -> bool {
        self.low <= p && p <= self.high
    }
}

/// `t_-^2 = N - sqrt N`, `t_+^2 = N + sqrt N`; bracket `[1 - (1 - phi(t_+)), phi(t_-)]`.
pub fn depoissonization_bracket(size: usize, n: i64, k: usize, tol: f64) -> Result<Bracket> {
    if size < 4 {
        return Err(Error::InvalidParameter(format!("N must be >= 4, got {size}")));
    }
    let nf = size as f64;
    let t_minus = (nf - nf.sqrt()).sqrt();
    let t_plus = (nf + nf.sqrt()).sqrt();
    let phi_minus = row_cdf(&PoissonizedModel::new(t_minus)?, k, n, tol)?;
    let phi_plus = row_cdf(&PoissonizedModel::new(t_plus)?, k, n, tol)?;
    Ok(Bracket {
        t_minus,
        t_plus,
        phi_minus,
        phi_plus,
        low: 1.0 - (1.0 - phi_plus),
        high: phi_minus,
    })
}

/// Mass captured outside `[n_lo, n_hi]` that the moment sum tolerates.
pub const MOMENT_MASS_TOL: f64 = 1e-8;

/// `E[xi_k^a]` with `xi_k = (lambda_k - 2t)/t^{1/3}`, summed over `n in [n_lo, n_hi]`.
pub fn poissonized_moment(model: &PoissonizedModel, k: usize, a: u32, n_lo: i64, n_hi: i64) -> Result<f64> {
    check_k(k)?;
    if n_hi < n_lo {
        return Err(Error::InvalidParameter(format!("empty window [{n_lo}, {n_hi}]")));
    }
    let ns: Vec<i64> = (n_lo - 1..=n_hi).collect();
    let cdf: Result<Vec<(f64, f64)>> = ns
        .par_iter()
        .map(|&n| {
            if n < 0 {
                Ok((0.0, 1.0))
            } else {
                row_cdf_pair(model, k, n, DEFAULT_TOL)
            }
        })
        .collect();
    let cdf = cdf?;
    let below = cdf[0].0;
    let above = cdf[cdf.len() - 1].1;
    let mass = 1.0 - below - above;
    if below > MOMENT_MASS_TOL || above > MOMENT_MASS_TOL {
        return Err(Error::WindowTooSmall {
            lo: n_lo,
            hi: n_hi,
            mass,
        });
    }
    let mut acc = 0.0;
    for (i, &n) in ns.iter().enumerate().skip(1) {
        let mut dp = cdf[i].0 - cdf[i - 1].0;
        if dp.abs() < CLAMP_BELOW {
            dp = 0.0;
        }
        acc += xi_poissonized(n as f64, model.t).powi(a as i32) * dp;
    }
    Ok(acc)
}

/// Moment over an automatically sized window starting at 0.
pub fn poissonized_moment_auto(model: &PoissonizedModel, k: usize, a: u32) -> Result<f64> {
    let mut n_hi = (2.0 * model.t + 10.0 * model.t.cbrt() + 8.0).ceil() as i64;
    loop {
        match poissonized_moment(model, k, a, 0, n_hi) {
            Err(Error::WindowTooSmall { .. }) if n_hi < 2000 => n_hi += n_hi / 2 + 4,
            other => return other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `1 - phi` for `x >= 0`.
    Upper,
    /// `phi` for `x < 0`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailRow {
    pub n: i64,
    pub t: f64,
    pub x: f64,
    pub tail: f64,
    pub log_tail: f64,
    pub underflow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailTable {
    pub k: usize,
    pub regime: Regime,
    pub rows: Vec<TailRow>,
    /// Least-squares slope of `log tail` against `|x|^{3/2}` over non-underflow rows.
    pub slope: Option<f64>,
}

pub fn tail_probe(k: usize, regime: Regime, samples: &[(i64, f64)]) -> Result<TailTable> {
    check_k(k)?;
    let rows: Result<Vec<TailRow>> = samples
        .par_iter()
        .map(|&(n, t)| {
            let model = PoissonizedModel::new(t)?;
            let (cdf, complement) = row_cdf_pair(&model, k, n, 1e-16)?;
            let tail = match regime {
                Regime::Upper => complement,
                Regime::Lower => cdf,
            };
            let x = scaled_x(n, t)?;
            Ok(TailRow {
                n,
                t,
                x,
                tail,
                log_tail: tail.ln(),
                underflow: tail < UNDERFLOW,
            })
        })
        .collect();
    let rows = rows?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.underflow)
        .map(|r| (r.x.abs().powf(1.5), r.log_tail))
        .collect();
    Ok(TailTable {
        k,
        regime,
        slope: least_squares_slope(&pts),
        rows,
    })
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Lattice points `n` with `scaled_x(n, t)` in `[x_lo, x_hi]`.
pub fn n_range_for_x(t: f64, x_lo: f64, x_hi: f64) -> Vec<i64> {
    let hi = (2.0 * t + x_hi.abs() * (4.0 * t).cbrt() * 2.0 + 10.0) as i64;
    (1..=hi)
        .filter(|&n| scaled_x(n, t).map(|x| x >= x_lo && x <= x_hi).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_i;
    use crate::oracle::{poissonized_prob, Partition};

    #[test]
    fn small_t_gives_one() {
        let m = PoissonizedModel::new(1e-6).unwrap();
        for n in 0..4 {
            assert!((row_cdf(&m, 1, n, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn first_row_at_one_is_bessel() {
        let m = PoissonizedModel::new(1.0).unwrap();
        let want = (-1f64).exp() * bessel_i(0, 2.0);
        assert!((row_cdf(&m, 1, 1, 1e-13).unwrap() - want).abs() < 1e-12);
        assert!((want - 0.838_612_567_126_025_8).abs() < 1e-13);
    }

    #[test]
    fn second_row_matches_oracle() {
        let m = PoissonizedModel::new(1.0).unwrap();
        for n in 0..=5i64 {
            let want = poissonized_prob(1.0, &|l: &Partition| l.row(2) as i64 <= n, 30)
                .unwrap()
                .value;
            assert!((row_cdf(&m, 2, n, 1e-12).unwrap() - want).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn recursion_paths_agree_with_counts() {
        let m = PoissonizedModel::new(1.5).unwrap();
        for k in 1..=4 {
            for n in 0..6 {
                let direct = row_cdf(&m, k, n, 1e-13).unwrap();
                let eig = row_cdf_recursive(&m, k, n, DerivativePath::Eigen, 1e-13).unwrap();
                let con = row_cdf_recursive(&m, k, n, DerivativePath::Contour, 1e-13).unwrap();
                assert!(
                    (direct - eig).abs() < 1e-10 && (direct - con).abs() < 1e-9,
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn lambda_set_sizes() {
        let sizes: Vec<usize> = (1..=4).map(|k| lambda_set(k).len()).collect();
        assert_eq!(sizes, vec![1, 2, 5, 14]);
        assert_eq!(lambda_set(2), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn joint_reduces_to_row() {
        let m = PoissonizedModel::new(1.0).unwrap();
        for n in 1..4 {
            let q = JointQuery::new(vec![Some(n - 1)]).unwrap();
            let j = joint_cdf(&m, &q, 1e-12).unwrap();
            assert!((j - row_cdf(&m, 1, n, 1e-12).unwrap()).abs() < 1e-10);
        }
        let q = JointQuery::new(vec![None, Some(1)]).unwrap();
        let j = joint_cdf(&m, &q, 1e-12).unwrap();
        assert!((j - row_cdf(&m, 2, 3, 1e-12).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn joint_query_validation() {
        assert!(JointQuery::new(vec![Some(1), Some(3)]).is_err());
        assert!(JointQuery::new(vec![Some(1), None]).is_err());
        let q = JointQuery::from_row_bounds(&[Some(4), Some(3)]).unwrap();
        assert_eq!(q.a, vec![Some(3), Some(1)]);
    }

    #[test]
    fn scaled_x_examples() {
        assert_eq!(scaled_x(6, 3.0).unwrap(), 0.0);
        assert!((scaled_x(8, 3.0).unwrap() - 2f64.cbrt()).abs() < 1e-14);
        assert!((scaled_x(4, 3.0).unwrap() + 2f64.powf(2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn lambda2_small() {
        let m = PoissonizedModel::new(1.0).unwrap();
        let r = lambda2_crosscheck(&m, 2, 1e-7).unwrap();
        assert!(r.residual < 1e-7, "{}", r.residual);
        let tiny = lambda2_crosscheck(&PoissonizedModel::new(1e-4).unwrap(), 1, 1e-7).unwrap();
        assert!(tiny.lhs.norm() < 1e-6 && tiny.rhs.norm() < 1e-6);
    }

    #[test]
    fn zeroth_moment_is_one() {
        let m = PoissonizedModel::new(2.0).unwrap();
        assert!((poissonized_moment_auto(&m, 1, 0).unwrap() - 1.0).abs() < 1e-8);
        assert!(matches!(
            poissonized_moment(&m, 1, 1, 0, 3),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 1.0 - 2.0 * i as f64)).collect();
        assert!((least_squares_slope(&pts).unwrap() + 2.0).abs() < 1e-14);
        assert_eq!(least_squares_slope(&pts[..1]), None);
    }

    #[test]
    fn bracket_orderings() {
        let b = depoissonization_bracket(9, 5, 1, 1e-12).unwrap();
        assert!(b.t_minus < 3.0 && 3.0 < b.t_plus);
        assert!(b.phi_plus <= b.phi_minus && b.low <= b.high);
        assert!(depoissonization_bracket(3, 2, 1, 1e-12).is_err());
    }

    #[test]
    fn zero_t_is_empty_diagram() {
        let m = PoissonizedModel::new(0.0).unwrap();
        for n in 0..3 {
            assert_eq!(row_cdf(&m, 1, n, 1e-12).unwrap(), 1.0);
        }
    }

    #[test]
    fn scaled_row_bounds() {
        let r = ScaledRow::new(1, 0, 8).unwrap();
        assert!(r.value >= -2.0 * 8f64.cbrt() - 1e-12);
    }
}
