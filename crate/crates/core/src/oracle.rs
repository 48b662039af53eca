//! Exact combinatorial ground truth: partitions, hook lengths, Plancherel and
//! Poissonized Plancherel probabilities, RSK, patience sorting, and the
//! colored-permutation statistic.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest size accepted by the enumerators.
pub const MAX_ENUM: usize = 40;
/// Largest size for exact rational Plancherel probabilities.
pub const MAX_EXACT: usize = 20;

/// A partition, parts nonincreasing and positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "parts {parts:?} are not nonincreasing"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Parse `"3,1,1"`; the empty string is the empty partition.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let parts = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidParameter(format!("part {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `lambda_j`, 1-based, zero past the last part.
    pub fn row(&self, j: usize) -> u32 {
        if j == 0 {
            panic!("rows are 1-based");
        }
        self.parts.get(j - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.row(1) as usize;
        let parts = (1..=width)
            .map(|c| self.parts.iter().filter(|&&p| p as usize >= c).count() as u32)
            .collect();
        Partition { parts }
    }

    fn hooks(&self) -> impl Iterator<Item = u64> + '_ {
        let conj = self.conjugate();
        self.parts.iter().enumerate().flat_map(move |(i, &p)| {
            let conj = conj.parts.clone();
            (0..p as usize).map(move |j| (p as usize - j - 1 + conj[j] as usize - i - 1 + 1) as u64)
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n > MAX_ENUM {
        return Err(Error::TooLarge(format!(
            "partition enumeration capped at N = {MAX_ENUM}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n as u32, n as u32, &mut cur, &mut out);
    Ok(out)
}

fn fill(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=remaining.min(max_part)).rev() {
        cur.push(p);
        fill(remaining - p, p, cur, out);
        cur.pop();
    }
}

/// Number of standard Young tableaux of shape `lambda` (hook length formula).
pub fn dim_syt(lambda: &Partition) -> BigUint {
    let mut num = factorial(lambda.size());
    let den: BigUint = lambda.hooks().map(BigUint::from).product();
    num /= den;
    num
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `d_lambda^2 / N!` in floating point through log hooks.
pub fn plancherel_weight_f64(lambda: &Partition) -> f64 {
    let ln_hooks: f64 = lambda.hooks().map(|h| (h as f64).ln()).sum();
    (ln_factorial(lambda.size()) - 2.0 * ln_hooks).exp()
}

/// Exact `sum_{lambda |- N, pred} d_lambda^2 / N!`.
pub fn plancherel_prob(n: usize, pred: &dyn Fn(&Partition) -> bool) -> Result<BigRational> {
    if n > MAX_EXACT {
        return Err(Error::TooLarge(format!(
            "exact Plancherel sums capped at N = {MAX_EXACT}, got {n}"
        )));
    }
    let mut num = BigUint::zero();
    for lam in enumerate_partitions(n)? {
        if pred(&lam) {
            let d = dim_syt(&lam);
            num += &d * &d;
        }
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(factorial(n))))
}

/// `Prob^Plan_N(pred)` as `f64`: exact rationals up to `MAX_EXACT`, log hooks beyond.
pub fn plancherel_prob_f64(n: usize, pred: &dyn Fn(&Partition) -> bool) -> Result<f64> {
    if n <= MAX_EXACT {
        return Ok(plancherel_prob(n, pred)?.to_f64().unwrap_or(f64::NAN));
    }
    Ok(enumerate_partitions(n)?
        .iter()
        .filter(|l| pred(l))
        .map(plancherel_weight_f64)
        .sum())
}

/// `e^{-t^2} t^{2N} / N!`.
pub fn poisson_weight(t: f64, n: usize) -> f64 {
    if t == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-t * t + 2.0 * n as f64 * t.ln() - ln_factorial(n)).exp()
}

/// Upper bound on `sum_{N > n_max} e^{-t^2} t^{2N}/N!`.
pub fn poisson_tail_bound(t: f64, n_max: usize) -> f64 {
    let first = poisson_weight(t, n_max + 1);
    let ratio = t * t / (n_max as f64 + 2.0);
    if ratio < 1.0 {
        first / (1.0 - ratio)
    } else {
        1.0
    }
}

/// `ceil(t^2 + 12 t + 30)` capped at `MAX_ENUM`.
pub fn default_n_max(t: f64) -> usize {
    ((t * t + 12.0 * t + 30.0).ceil() as usize).min(MAX_ENUM)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonSum {
    pub value: f64,
    pub tail_bound: f64,
}

/// Truncated Poisson mixture of Plancherel probabilities.
pub fn poissonized_prob(t: f64, pred: &dyn Fn(&Partition) -> bool, n_max: usize) -> Result<PoissonSum> {
    if n_max > MAX_ENUM {
        return Err(Error::TooLarge(format!(
            "Poisson truncation capped at {MAX_ENUM}, got {n_max}"
        )));
    }
    let mut value = 0.0;
    for n in 0..=n_max {
        let w = poisson_weight(t, n);
        if w == 0.0 {
            continue;
        }
        value += w * plancherel_prob_f64(n, pred)?;
    }
    Ok(PoissonSum {
        value,
        tail_bound: poisson_tail_bound(t, n_max),
    })
}

/// Poissonized expectation of `f` over the same truncated mixture.
pub fn poissonized_expectation(t: f64, f: &dyn Fn(&Partition) -> f64, n_max: usize) -> Result<f64> {
    if n_max > MAX_ENUM {
        return Err(Error::TooLarge(format!(
            "Poisson truncation capped at {MAX_ENUM}, got {n_max}"
        )));
    }
    let mut acc = 0.0;
    for n in 0..=n_max {
        let w = poisson_weight(t, n);
        if w == 0.0 {
            continue;
        }
        let inner: f64 = enumerate_partitions(n)?
            .iter()
            .map(|l| {
                let p = if n <= MAX_EXACT {
                    exact_weight(l)
                } else {
                    plancherel_weight_f64(l)
                };
                p * f(l)
            })
            .sum();
        acc += w * inner;
    }
    Ok(acc)
}

fn exact_weight(lambda: &Partition) -> f64 {
    let d = dim_syt(lambda);
    BigRational::new(BigInt::from(&d * &d), BigInt::from(factorial(lambda.size())))
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Shape of the RSK insertion tableau of a sequence of distinct values.
pub fn rsk_shape<T: Ord + Copy>(seq: &[T]) -> Partition {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for &x in seq {
        let mut bump = x;
        let mut placed = false;
        for row in rows.iter_mut() {
            let pos = row.partition_point(|&y| y < bump);
            if pos == row.len() {
                row.push(bump);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[pos], &mut bump);
        }
        if !placed {
            rows.push(vec![bump]);
        }
    }
    Partition {
        parts: rows.iter().map(|r| r.len() as u32).collect(),
    }
}

/// Longest increasing subsequence length by patience sorting.
pub fn lis_patience<T: Ord + Copy>(seq: &[T]) -> usize {
    let mut piles: Vec<T> = Vec::new();
    for &x in seq {
        let pos = piles.partition_point(|&y| y < x);
        if pos == piles.len() {
            piles.push(x);
        } else {
            piles[pos] = x;
        }
    }
    piles.len()
}

/// `q_{n,N} = Prob^Plan_N(lambda_k <= n)` exactly.
pub fn row_cdf_exact(n_size: usize, k: usize, n: u32) -> Result<BigRational> {
    plancherel_prob(n_size, &|l: &Partition| l.row(k) <= n)
}

/// An m-colored permutation: `values` is a permutation of `1..=len`, `colors[i] < m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredPermutation {
    pub values: Vec<u32>,
    pub colors: Vec<u32>,
    pub m: u32,
}

impl ColoredPermutation {
    pub fn new(values: Vec<u32>, colors: Vec<u32>, m: u32) -> Result<Self> {
        if values.len() != colors.len() {
            return Err(Error::LengthMismatch(format!(
                "{} values vs {} colors",
                values.len(),
                colors.len()
            )));
        }
        if m == 0 || colors.iter().any(|&c| c >= m) {
            return Err(Error::InvalidParameter(format!("colors must lie in 0..{m}")));
        }
        let mut sorted = values.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &v)| v as usize != i + 1) {
            return Err(Error::InvalidParameter(format!("{values:?} is not a permutation")));
        }
        Ok(ColoredPermutation { values, colors, m })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values of color `c` in positional order.
    pub fn color_subsequence(&self, c: u32) -> Vec<u32> {
        self.values
            .iter()
            .zip(&self.colors)
            .filter(|(_, &col)| col == c)
            .map(|(&v, _)| v)
            .collect()
    }

    /// RSK shape of each color class.
    pub fn color_shapes(&self) -> Vec<Partition> {
        (0..self.m).map(|c| rsk_shape(&self.color_subsequence(c))).collect()
    }

    /// Every m-colored permutation of length `n`.
    pub fn all(n: usize, m: u32) -> Vec<ColoredPermutation> {
        let mut out = Vec::new();
        for perm in permutations(n) {
            let total = (m as usize).pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let colors = (0..n)
                    .map(|_| {
                        let v = (c % m as usize) as u32;
                        c /= m as usize;
                        v
                    })
                    .collect();
                out.push(ColoredPermutation {
                    values: perm.clone(),
                    colors,
                    m,
                });
            }
        }
        out
    }
}

/// All permutations of `1..=n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn longest_decreasing(seq: &[u32]) -> usize {
    let rev: Vec<std::cmp::Reverse<u32>> = seq.iter().map(|&v| std::cmp::Reverse(v)).collect();
    lis_patience(&rev)
}

fn binom2(k: i64) -> i64 {
    k * (k + 1) / 2
}

/// `best[c][j]`: the most elements of color `c` covered by `j` increasing
/// subsequences, found by scanning every subset (a subset is such a union
/// exactly when it has no decreasing run longer than `j`).
fn coverage_by_subsets(seq: &[u32], max_j: usize) -> Vec<i64> {
    let n = seq.len();
    let mut best = vec![0i64; max_j + 1];
    for mask in 0u32..(1 << n) {
        let sub: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| seq[i]).collect();
        let need = longest_decreasing(&sub);
        for b in best.iter_mut().skip(need) {
            *b = (*b).max(sub.len() as i64);
        }
    }
    best
}

/// `l_k(pi)`, the maximum score over unions of `k` monochromatic increasing
/// subsequences, for `k = 0..=k_max`, by exhaustive search.
pub fn colored_scores_exhaustive(pi: &ColoredPermutation, k_max: usize) -> Result<Vec<i64>> {
    if pi.len() > 8 {
        return Err(Error::TooLarge(format!(
            "exhaustive colored search capped at length 8, got {}",
            pi.len()
        )));
    }
    let m = pi.m as i64;
    let coverage: Vec<Vec<i64>> = (0..pi.m)
        .map(|c| coverage_by_subsets(&pi.color_subsequence(c), k_max))
        .collect();
    let mut out = vec![0i64; k_max + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let mut best = i64::MIN;
        for_each_composition(k, pi.m as usize, &mut |ks| {
            let l: i64 = ks.iter().enumerate().map(|(c, &kc)| coverage[c][kc]).sum();
            let penalty: i64 = ks
                .iter()
                .enumerate()
                .map(|(i, &kc)| i as i64 * kc as i64 - m * binom2(kc as i64))
                .sum();
            best = best.max(m * l + binom2(k as i64) + penalty);
        });
        *slot = best;
    }
    Ok(out)
}

fn for_each_composition(k: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(left: usize, slot: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            f(cur);
            return;
        }
        for v in 0..=left {
            cur[slot] = v;
            rec(left - v, slot + 1, cur, f);
        }
    }
    let mut cur = vec![0; parts];
    rec(k, 0, &mut cur, f);
}

/// The numbers `m (lambda^(i)_j - j) + i` over colors `i` and rows `j = 1..=rows`,
/// sorted in decreasing order.
pub fn superimposed_points(shapes: &[Partition], rows: usize) -> Vec<i64> {
    let m = shapes.len() as i64;
    let mut pts: Vec<i64> = shapes
        .iter()
        .enumerate()
        .flat_map(|(i, lam)| (1..=rows).map(move |j| m * (lam.row(j) as i64 - j as i64) + i as i64))
        .collect();
    pts.sort_unstable_by(|a, b| b.cmp(a));
    pts
}

/// `lambda_k = k + (k-th largest of m (lambda^(i)_j - j) + i)`, for `k = 1..=k_max`.
pub fn colored_lambda_from_shapes(shapes: &[Partition], k_max: usize) -> Vec<i64> {
    let rows = shapes.iter().map(|s| s.len()).max().unwrap_or(0) + k_max + 1;
    let pts = superimposed_points(shapes, rows);
    (1..=k_max).map(|k| k as i64 + pts[k - 1]).collect()
}

pub fn colored_lambda_formula(pi: &ColoredPermutation, k_max: usize) -> Vec<i64> {
    colored_lambda_from_shapes(&pi.color_shapes(), k_max)
}

/// `lambda_k(pi)` for `k = 1..=k_max`, computed by exhaustive score search and
/// by the superposition formula; any mismatch is an error.
pub fn colored_lambda(pi: &ColoredPermutation, k_max: usize) -> Result<Vec<i64>> {
    let scores = colored_scores_exhaustive(pi, k_max)?;
    let formula = colored_lambda_formula(pi, k_max);
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let exhaustive = scores[k] - scores[k - 1];
        if exhaustive != formula[k - 1] {
            return Err(Error::Disagreement {
                k,
                exhaustive,
                formula: formula[k - 1],
            });
        }
        out.push(exhaustive);
    }
    Ok(out)
}

/// Smallest `n_max` whose Poisson tail bound is below `tol`, capped at `MAX_ENUM`.
pub fn n_max_for_tail(t: f64, tol: f64) -> usize {
    (0..=MAX_ENUM)
        .find(|&n| poisson_tail_bound(t, n) < tol)
        .unwrap_or(MAX_ENUM)
}

/// Largest product of per-color partition counts the colored oracle will visit.
pub const MAX_COLORED_STATES: usize = 20_000_000;

/// `m` independent Poissonized Plancherel partitions at `t`, superimposed; returns
/// the probability of `pred` on the superimposed partition (given as its first
/// `k_max` rows) and the total Poisson tail bound.
pub fn colored_poissonized_prob(
    t: f64,
    m: u32,
    k_max: usize,
    pred: &dyn Fn(&[i64]) -> bool,
    n_max: usize,
) -> Result<PoissonSum> {
    if m == 0 || m > 3 {
        return Err(Error::InvalidParameter(format!(
            "color count must be in 1..=3, got {m}"
        )));
    }
    let mut states: Vec<(Partition, f64)> = Vec::new();
    for n in 0..=n_max {
        let w = poisson_weight(t, n);
        for lam in enumerate_partitions(n)? {
            let p = if n <= MAX_EXACT {
                exact_weight(&lam)
            } else {
                plancherel_weight_f64(&lam)
            };
            states.push((lam, w * p));
        }
    }
    let total = states.len().checked_pow(m).unwrap_or(usize::MAX);
    if total > MAX_COLORED_STATES {
        return Err(Error::TooLarge(format!(
            "{total} colored states exceed {MAX_COLORED_STATES}"
        )));
    }
    let mut value = 0.0;
    let mut idx = vec![0usize; m as usize];
    loop {
        let weight: f64 = idx.iter().map(|&i| states[i].1).product();
        if weight > 0.0 {
            let shapes: Vec<Partition> = idx.iter().map(|&i| states[i].0.clone()).collect();
            if pred(&colored_lambda_from_shapes(&shapes, k_max)) {
                value += weight;
            }
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                let tail = 1.0 - (1.0 - poisson_tail_bound(t, n_max)).powi(m as i32);
                return Ok(PoissonSum {
                    value,
                    tail_bound: tail,
                });
            }
            idx[d] += 1;
            if idx[d] < states.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}
