//! Symbols on the unit circle and their Fourier data.
//!
//! A [`Symbol`] is a non-vanishing function `phi` on `|z| = 1`. Every kernel in
//! this crate is assembled from the Fourier coefficients of `phi` and `1/phi`,
//! so construction eagerly tabulates both and the value is immutable afterwards
//! (safe to share across threads).
//!
//! Closed forms are used where they exist:
//!
//! - `bessel(t)`: `phi(z) = exp(t (z - 1/z))`, `phi_j = J_j(2t)`, `(1/phi)_j = (-1)^j J_j(2t)`.
//! - `gessel(t)`: `phi(z) = exp(t (z + 1/z))`, `phi_j = I_j(2t)`, `(1/phi)_j = (-1)^j I_j(2t)`.
//!
//! Laurent polynomials have exact direct coefficients; inverses and products go
//! through an FFT of samples on the circle, doubling the grid until the edge of
//! the spectrum is below round-off.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_i_table, bessel_j_table};
use crate::error::{Error, Result};

pub const DEFAULT_RESOLUTION: usize = 4096;
pub const MAX_RESOLUTION: usize = 1 << 20;
pub const ZERO_TOL: f64 = 1e-12;
/// Winding results with a larger phase defect than this are rejected.
pub const WINDING_DEFECT_LIMIT: f64 = 0.1 * 2.0 * PI;

/// Anything that can be evaluated on the circle together with its
/// logarithmic derivative. Implemented by [`Symbol`] and [`Dilated`].
pub trait CircleFunction: Sync {
    fn eval(&self, z: Complex64) -> Complex64;
    /// `phi'(z) / phi(z)`.
    fn log_derivative(&self, z: Complex64) -> Complex64;
}

/// Which coefficient sequence to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Direct,
    Inverse,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    Laurent(BTreeMap<i64, Complex64>),
    Bessel { t: f64 },
    Gessel { t: f64 },
    Product(Vec<Symbol>),
}

/// JSON form: `{"kind":"bessel","t":1.0}`,
/// `{"kind":"laurent","coeffs":{"-1":[re,im],...}}`,
/// `{"kind":"product","factors":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SymbolDescriptor {
    Bessel { t: f64 },
    Gessel { t: f64 },
    Laurent { coeffs: BTreeMap<String, [f64; 2]> },
    Product { factors: Vec<SymbolDescriptor> },
}

impl SymbolDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    /// Descriptor for `z^k`.
    pub fn monomial(k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k.to_string(), [1.0, 0.0]);
        SymbolDescriptor::Laurent { coeffs }
    }

    pub fn laurent(terms: &[(i64, Complex64)]) -> Self {
        let coeffs = terms.iter().map(|(k, c)| (k.to_string(), [c.re, c.im])).collect();
        SymbolDescriptor::Laurent { coeffs }
    }
}

/// Coefficients `c_j` for `|j| <= half`, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    half: i64,
    values: Arc<[Complex64]>,
}

impl CoeffTable {
    fn from_fn(half: i64, f: impl Fn(i64) -> Complex64) -> Self {
        let values: Vec<Complex64> = (-half..=half).map(f).collect();
        CoeffTable {
            half,
            values: values.into(),
        }
    }

    #[inline]
    pub fn get(&self, j: i64) -> Complex64 {
        if j.abs() > self.half {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[(j + self.half) as usize]
        }
    }

    pub fn half_width(&self) -> i64 {
        self.half
    }

    /// Largest `|j|` carrying a coefficient above `rel * max|c|`.
    pub fn effective_support(&self, rel: f64) -> i64 {
        let max = self.values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = rel * max;
        (0..=self.half)
            .rev()
            .find(|&j| self.get(j).norm() > cut || self.get(-j).norm() > cut)
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    kind: SymbolKind,
    resolution: usize,
    direct: CoeffTable,
    inverse: CoeffTable,
    sup: f64,
    inv_sup: f64,
}

/// Outcome of the argument-principle count.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingResult {
    pub winding: i64,
    /// Phase change of `phi` between consecutive grid nodes, radians.
    pub phase_increments: Vec<f64>,
    /// Distance of the accumulated phase from the nearest multiple of `2 pi`.
    pub confidence: f64,
    pub resolution: usize,
}

fn circle_node(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

fn fft_coefficients(n: usize, f: &dyn Fn(Complex64) -> Complex64) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..n).map(|k| f(circle_node(k, n))).collect();
    let fft = FftPlanner::new().plan_fft_forward(n);
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// FFT coefficients of `f`, doubling the grid from `start` until the outer
/// eighth of the spectrum is at round-off level.
fn resolved_table(start: usize, f: &dyn Fn(Complex64) -> Complex64) -> Result<(CoeffTable, usize)> {
    let mut n = start;
    loop {
        let raw = fft_coefficients(n, f);
        let half = (n / 2 - 1) as i64;
        let at = |j: i64| raw[j.rem_euclid(n as i64) as usize];
        let max = raw.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let edge = ((3 * n / 8) as i64..=half)
            .map(|j| at(j).norm().max(at(-j).norm()))
            .fold(0.0, f64::max);
        if edge <= 1e-15 * max {
            // entries at the FFT noise floor are not resolved coefficients
            let floor = 1e-15 * max;
            let clean = |j: i64| {
                let c = at(j);
                if c.norm() < floor {
                    Complex64::new(0.0, 0.0)
                } else {
                    c
                }
            };
            return Ok((CoeffTable::from_fn(half, clean), n));
        }
        if n >= MAX_RESOLUTION {
            return Err(Error::Unresolved(n));
        }
        n *= 2;
    }
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("t must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn bessel_half_width(t: f64, resolution: usize) -> i64 {
    let x = 2.0 * t;
    let w = x.ceil() + 60.0 + 10.0 * x.cbrt();
    (w as i64).min(resolution as i64 / 2)
}

impl Symbol {
    pub fn from_descriptor(desc: &SymbolDescriptor) -> Result<Self> {
        Self::from_descriptor_with_resolution(desc, DEFAULT_RESOLUTION)
    }

    pub fn from_descriptor_with_resolution(desc: &SymbolDescriptor, resolution: usize) -> Result<Self> {
        match desc {
            SymbolDescriptor::Bessel { t } => Self::bessel_with_resolution(*t, resolution),
            SymbolDescriptor::Gessel { t } => Self::gessel_with_resolution(*t, resolution),
            SymbolDescriptor::Laurent { coeffs } => {
                let mut map = BTreeMap::new();
                for (k, [re, im]) in coeffs {
                    let deg: i64 = k
                        .trim()
                        .parse()
                        .map_err(|_| Error::Descriptor(format!("bad Laurent degree {k:?}")))?;
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::Descriptor(format!("non-finite coefficient at degree {deg}")));
                    }
                    *map.entry(deg).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(*re, *im);
                }
                Self::laurent_with_resolution(map, resolution)
            }
            SymbolDescriptor::Product { factors } => {
                let syms = factors
                    .iter()
                    .map(|d| Self::from_descriptor_with_resolution(d, resolution))
                    .collect::<Result<Vec<_>>>()?;
                Self::product_with_resolution(syms, resolution)
            }
        }
    }

    pub fn bessel(t: f64) -> Result<Self> {
        Self::bessel_with_resolution(t, DEFAULT_RESOLUTION)
    }

    fn bessel_with_resolution(t: f64, resolution: usize) -> Result<Self> {
        check_t(t)?;
        let half = bessel_half_width(t, resolution);
        let j = bessel_j_table(half as usize, 2.0 * t);
        let sign = |k: i64| if k % 2 == 0 { 1.0 } else { -1.0 };
        let direct = CoeffTable::from_fn(half, |k| {
            let v = j[k.unsigned_abs() as usize];
            Complex64::new(if k < 0 { sign(k) * v } else { v }, 0.0)
        });
        let inverse = CoeffTable::from_fn(half, |k| sign(k) * direct.get(k));
        Self::finish(SymbolKind::Bessel { t }, resolution, direct, inverse)
    }

    pub fn gessel(t: f64) -> Result<Self> {
        Self::gessel_with_resolution(t, DEFAULT_RESOLUTION)
    }

    fn gessel_with_resolution(t: f64, resolution: usize) -> Result<Self> {
        check_t(t)?;
        let half = bessel_half_width(t, resolution);
        let i = bessel_i_table(half as usize, 2.0 * t);
        let direct = CoeffTable::from_fn(half, |k| Complex64::new(i[k.unsigned_abs() as usize], 0.0));
        let inverse = CoeffTable::from_fn(half, |k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * direct.get(k)
        });
        Self::finish(SymbolKind::Gessel { t }, resolution, direct, inverse)
    }

    pub fn laurent(coeffs: BTreeMap<i64, Complex64>) -> Result<Self> {
        Self::laurent_with_resolution(coeffs, DEFAULT_RESOLUTION)
    }

    /// `z^k`.
    pub fn monomial(k: i64) -> Result<Self> {
        Self::laurent([(k, Complex64::new(1.0, 0.0))].into_iter().collect())
    }

    fn laurent_with_resolution(mut coeffs: BTreeMap<i64, Complex64>, resolution: usize) -> Result<Self> {
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let kind = SymbolKind::Laurent(coeffs.clone());
        Self::check_nonvanishing(&kind, resolution)?;
        let (inverse, res) = resolved_table(resolution, &|z| 1.0 / eval_kind(&kind, z))?;
        let half = inverse.half_width();
        let max_deg = coeffs.keys().map(|k| k.abs()).max().unwrap_or(0);
        if max_deg > half {
            return Err(Error::InvalidParameter(format!(
                "Laurent degree {max_deg} exceeds resolution {res}"
            )));
        }
        let direct = CoeffTable::from_fn(half, |k| coeffs.get(&k).copied().unwrap_or_default());
        Self::finish(kind, res, direct, inverse)
    }

    pub fn product(factors: Vec<Symbol>) -> Result<Self> {
        Self::product_with_resolution(factors, DEFAULT_RESOLUTION)
    }

    fn product_with_resolution(factors: Vec<Symbol>, resolution: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let kind = SymbolKind::Product(factors);
        Self::check_nonvanishing(&kind, resolution)?;
        let (direct, r1) = resolved_table(resolution, &|z| eval_kind(&kind, z))?;
        let (inverse, r2) = resolved_table(resolution, &|z| 1.0 / eval_kind(&kind, z))?;
        let res = r1.max(r2);
        let (direct, inverse) = if r1 == r2 {
            (direct, inverse)
        } else {
            (
                resolved_table(res, &|z| eval_kind(&kind, z))?.0,
                resolved_table(res, &|z| 1.0 / eval_kind(&kind, z))?.0,
            )
        };
        Self::finish(kind, res, direct, inverse)
    }

    fn check_nonvanishing(kind: &SymbolKind, resolution: usize) -> Result<()> {
        let (node, min_abs) = (0..resolution)
            .map(|k| (k, eval_kind(kind, circle_node(k, resolution)).norm()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if min_abs.is_nan() || min_abs <= ZERO_TOL {
            return Err(Error::ZeroOnCircle { min_abs, node });
        }
        Ok(())
    }

    fn finish(kind: SymbolKind, resolution: usize, direct: CoeffTable, inverse: CoeffTable) -> Result<Self> {
        Self::check_nonvanishing(&kind, resolution)?;
        let (sup, inv_sup) = (0..resolution)
            .map(|k| eval_kind(&kind, circle_node(k, resolution)).norm())
            .fold((0.0f64, 0.0f64), |(s, i), a| (s.max(a), i.max(1.0 / a)));
        Ok(Symbol {
            kind,
            resolution,
            direct,
            inverse,
            sup,
            inv_sup,
        })
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn table(&self, which: Which) -> &CoeffTable {
        match which {
            Which::Direct => &self.direct,
            Which::Inverse => &self.inverse,
        }
    }

    /// `phi_j` or `(1/phi)_j`.
    pub fn fourier_coeff(&self, which: Which, j: i64) -> Result<Complex64> {
        if j.unsigned_abs() as usize > self.resolution / 2 {
            return Err(Error::IndexOutOfResolution {
                index: j,
                resolution: self.resolution,
            });
        }
        Ok(self.table(which).get(j))
    }

    /// `sup |phi|` on the working grid.
    pub fn sup_norm(&self) -> f64 {
        self.sup
    }

    /// `sup |1/phi|` on the working grid.
    pub fn inverse_sup_norm(&self) -> f64 {
        self.inv_sup
    }

    /// `|phi| == 1` on the circle (true for `bessel(t)`).
    pub fn is_unimodular(&self) -> bool {
        (self.sup - 1.0).abs() < 1e-12 && (self.inv_sup - 1.0).abs() < 1e-12
    }

    pub fn winding_number(&self) -> Result<WindingResult> {
        let mut n = self.resolution.max(64);
        loop {
            let values: Vec<Complex64> = (0..n).map(|k| self.eval(circle_node(k, n))).collect();
            let phase_increments: Vec<f64> = (0..n).map(|k| (values[(k + 1) % n] / values[k]).arg()).collect();
            let total: f64 = phase_increments.iter().sum();
            let turns = total / (2.0 * PI);
            let winding = turns.round() as i64;
            let confidence = (total - 2.0 * PI * winding as f64).abs();
            let max_step = phase_increments.iter().map(|p| p.abs()).fold(0.0, f64::max);
            if confidence < WINDING_DEFECT_LIMIT && max_step < PI / 2.0 {
                return Ok(WindingResult {
                    winding,
                    phase_increments,
                    confidence,
                    resolution: n,
                });
            }
            if n >= MAX_RESOLUTION {
                return Err(Error::UnreliableWinding {
                    confidence,
                    resolution: n,
                });
            }
            n *= 2;
        }
    }

    /// Smallest `J` such that
    /// `sum_{|l|>J} (|l|+1)(|phi_l| + |(1/phi)_l|) * max(|phi|_inf, |1/phi|_inf) < tol`.
    pub fn decay_bound(&self, tol: f64) -> Result<i64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
        }
        let half = self.direct.half_width().max(self.inverse.half_width());
        let scale = self.sup.max(self.inv_sup);
        let mut tail = 0.0;
        let mut j = half;
        // tail currently holds the sum over |l| > j
        while j >= 0 {
            let mut add = 0.0;
            for l in [j, -j] {
                add += (l.abs() as f64 + 1.0) * (self.direct.get(l).norm() + self.inverse.get(l).norm());
                if j == 0 {
                    break;
                }
            }
            if (tail + add) * scale >= tol {
                break;
            }
            tail += add;
            j -= 1;
        }
        let bound = j.max(0);
        if half > 8 && bound >= half - 1 {
            return Err(Error::NoConvergence(format!(
                "coefficient tail not below {tol:e} within resolution {}",
                self.resolution
            )));
        }
        Ok(bound)
    }
}

fn eval_kind(kind: &SymbolKind, z: Complex64) -> Complex64 {
    match kind {
        SymbolKind::Laurent(c) => c.iter().map(|(k, v)| v * z.powi(*k as i32)).sum(),
        SymbolKind::Bessel { t } => (*t * (z - 1.0 / z)).exp(),
        SymbolKind::Gessel { t } => (*t * (z + 1.0 / z)).exp(),
        SymbolKind::Product(f) => f.iter().map(|s| s.eval(z)).product(),
    }
}

fn log_derivative_kind(kind: &SymbolKind, z: Complex64) -> Complex64 {
    match kind {
        SymbolKind::Laurent(c) => {
            let d: Complex64 = c
                .iter()
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| v * (*k as f64) * z.powi(*k as i32 - 1))
                .sum();
            d / eval_kind(kind, z)
        }
        SymbolKind::Bessel { t } => *t * (1.0 + 1.0 / (z * z)),
        SymbolKind::Gessel { t } => *t * (1.0 - 1.0 / (z * z)),
        SymbolKind::Product(f) => f.iter().map(|s| s.log_derivative(z)).sum(),
    }
}

impl CircleFunction for Symbol {
    fn eval(&self, z: Complex64) -> Complex64 {
        eval_kind(&self.kind, z)
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        log_derivative_kind(&self.kind, z)
    }
}

/// `z -> phi(z^m)`, the circle symbol of the m-colored kernel.
#[derive(Debug, Clone, Copy)]
pub struct Dilated<'a> {
    pub symbol: &'a Symbol,
    pub m: u32,
}

impl CircleFunction for Dilated<'_> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.symbol.eval(z.powu(self.m))
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        let m = self.m as f64;
        m * z.powu(self.m - 1) * self.symbol.log_derivative(z.powu(self.m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn laurent(terms: &[(i64, f64)]) -> Symbol {
        Symbol::laurent(terms.iter().map(|&(k, v)| (k, c(v))).collect()).unwrap()
    }

    #[test]
    fn identity_symbol_coefficients() {
        let one = laurent(&[(0, 1.0)]);
        assert_eq!(one.fourier_coeff(Which::Direct, 0).unwrap(), c(1.0));
        for j in [-3, -1, 1, 5] {
            assert_eq!(one.fourier_coeff(Which::Direct, j).unwrap(), c(0.0));
            assert!(one.fourier_coeff(Which::Inverse, j).unwrap().norm() < 1e-15);
        }
        let b0 = Symbol::bessel(0.0).unwrap();
        assert_eq!(b0.fourier_coeff(Which::Direct, 0).unwrap(), c(1.0));
        assert_eq!(b0.fourier_coeff(Which::Direct, 2).unwrap(), c(0.0));
    }

    #[test]
    fn shifted_identity_is_valid() {
        let s = laurent(&[(0, 1.0), (1, 0.5)]);
        let min = (0..4096)
            .map(|k| s.eval(circle_node(k, 4096)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!((min - 0.5).abs() < 1e-12);
        // 1/(1+0.5z) = sum (-0.5)^j z^j
        for j in 0..10 {
            let want = (-0.5f64).powi(j as i32);
            assert!((s.fourier_coeff(Which::Inverse, j).unwrap() - c(want)).norm() < 1e-14);
        }
        assert!(s.fourier_coeff(Which::Inverse, -1).unwrap().norm() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Symbol::laurent(BTreeMap::new()), Err(Error::EmptyCoefficients));
        assert!(matches!(
            Symbol::laurent([(0, c(1.0)), (1, c(1.0))].into_iter().collect()),
            Err(Error::ZeroOnCircle { .. })
        ));
        assert!(matches!(Symbol::bessel(-1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(Symbol::product(vec![]), Err(Error::EmptyCoefficients)));
    }

    #[test]
    fn index_out_of_resolution() {
        let b = Symbol::bessel(1.0).unwrap();
        assert!(matches!(
            b.fourier_coeff(Which::Direct, 5000),
            Err(Error::IndexOutOfResolution { .. })
        ));
        assert_eq!(b.fourier_coeff(Which::Direct, 2048).unwrap(), c(0.0));
    }

    #[test]
    fn bessel_coefficients_match_series_and_fft() {
        let b = Symbol::bessel(0.5).unwrap();
        // J_1(1) from its power series
        let series: f64 = (0..30)
            .map(|m| {
                let fm: f64 = (1..=m).map(f64::from).product();
                let fm1 = fm * (m + 1) as f64;
                (-1.0f64).powi(m) * 0.5f64.powi(2 * m + 1) / (fm * fm1)
            })
            .sum();
        let j1 = b.fourier_coeff(Which::Direct, 1).unwrap();
        assert!((j1.re - series).abs() < 1e-15 && j1.im == 0.0);
        assert!((j1.re - 0.440_050_585_7).abs() < 1e-10);

        let b = Symbol::bessel(0.7).unwrap();
        let inv_fft = fft_coefficients(256, &|z| 1.0 / b.eval(z));
        for j in -20i64..=20 {
            let d = b.fourier_coeff(Which::Direct, j).unwrap();
            let i = b.fourier_coeff(Which::Inverse, j).unwrap();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((i - sign * d).norm() < 1e-16);
            let f = inv_fft[j.rem_euclid(256) as usize];
            assert!((i - f).norm() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn gessel_coefficients() {
        let g = Symbol::gessel(0.5).unwrap();
        assert!((g.fourier_coeff(Which::Direct, 0).unwrap().re - 1.266_065_877_752_008).abs() < 1e-13);
        assert!((g.fourier_coeff(Which::Direct, -1).unwrap().re - 0.565_159_103_992_485).abs() < 1e-13);
    }

    #[test]
    fn winding_examples() {
        assert_eq!(Symbol::monomial(3).unwrap().winding_number().unwrap().winding, 3);
        assert_eq!(Symbol::monomial(-2).unwrap().winding_number().unwrap().winding, -2);
        assert_eq!(Symbol::bessel(1.0).unwrap().winding_number().unwrap().winding, 0);
        let a = laurent(&[(0, 1.0), (1, 0.5)]);
        let b = laurent(&[(0, 1.0), (-1, 0.3)]);
        let p = Symbol::product(vec![a, b]).unwrap();
        let w = p.winding_number().unwrap();
        assert_eq!(w.winding, 0);
        assert!(w.confidence < 1e-9);
    }

    #[test]
    fn decay_bound_examples() {
        assert_eq!(laurent(&[(0, 1.0)]).decay_bound(1e-10).unwrap(), 0);
        let j = Symbol::bessel(1.0).unwrap().decay_bound(1e-12).unwrap();
        assert!(j <= 40 && j > 5, "J = {j}");
        // Banded symbol: J is at least the band edge and bounded by band + inverse tail width.
        let s = laurent(&[(-2, 0.2), (0, 1.0), (3, 0.1)]);
        let j = s.decay_bound(1e-10).unwrap();
        assert!(j >= 3);
        assert!(j < 200);
        assert!(matches!(s.decay_bound(0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn descriptor_round_trip_and_errors() {
        let d = SymbolDescriptor::from_json(r#"{"kind":"laurent","coeffs":{"-1":[0.3,0],"0":[1,0]}}"#).unwrap();
        let s = Symbol::from_descriptor(&d).unwrap();
        assert_eq!(s.fourier_coeff(Which::Direct, -1).unwrap(), c(0.3));
        assert_eq!(SymbolDescriptor::from_json(&d.to_json()).unwrap(), d);
        let p = SymbolDescriptor::from_json(
            r#"{"kind":"product","factors":[{"kind":"bessel","t":1.0},{"kind":"laurent","coeffs":{"1":[1,0]}}]}"#,
        )
        .unwrap();
        assert_eq!(
            Symbol::from_descriptor(&p).unwrap().winding_number().unwrap().winding,
            1
        );
        assert!(matches!(
            SymbolDescriptor::from_json(r#"{"kind":"bessel"}"#),
            Err(Error::Descriptor(_))
        ));
        assert!(matches!(
            SymbolDescriptor::from_json("{nope"),
            Err(Error::Descriptor(_))
        ));
        let bad = SymbolDescriptor::from_json(r#"{"kind":"laurent","coeffs":{"x":[1,0]}}"#).unwrap();
        assert!(matches!(Symbol::from_descriptor(&bad), Err(Error::Descriptor(_))));
    }

    #[test]
    fn dilated_log_derivative_matches_difference() {
        let b = Symbol::bessel(0.8).unwrap();
        let d = Dilated { symbol: &b, m: 3 };
        let z = Complex64::from_polar(1.0, 0.4);
        let h = 1e-6;
        let dz = Complex64::from_polar(h, 0.4 + PI / 2.0);
        let num = (d.eval(z + dz) - d.eval(z - dz)) / (2.0 * dz) / d.eval(z);
        assert!((num - d.log_derivative(z)).norm() < 1e-7);
    }
}
