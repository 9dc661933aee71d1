//! Two-segment copula difference process, its supremum, and the break scan.
//!
//! For a candidate split l of the N embedded rows, both segments are
//! re-ranked independently and their empirical copulas compared:
//!
//! ```text
//! psi(u) = (D_pre(u) - D_post(u)) * w(l, N)
//! ```
//!
//! The scan statistic is the maximum over the trimmed candidate range of
//! `sup_u |psi(u)|`, and the argmax is the break estimate. Both step
//! functions jump only at their per-axis pseudo-observation coordinates, so
//! for d = 2 the supremum is attained on the Cartesian grid of the pooled
//! jump coordinates and is computed exactly with two-dimensional prefix
//! counts (dominance counting). For d > 2 the supremum is taken over the
//! pooled pseudo-observation points plus the upper corner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{ecop_eval, pseudo_obs, LagMatrix, PseudoSample};
use crate::error::{Error, Result};
use crate::quarter::{index_to_quarter, Quarter};
use crate::rng::stream_rng;

/// Weight applied to the copula difference.
///
/// `RootN` uses `sqrt(l (N - l) / N)`; `AsPrinted` divides that by a further
/// `sqrt(N)`, giving `sqrt(l (N - l)) / N`. The two differ by the constant
/// factor `sqrt(N)` at every (l, u), so the break estimate is identical
/// under either choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    #[serde(rename = "root-N")]
    RootN,
    #[serde(rename = "as-printed")]
    AsPrinted,
}

impl Normalization {
    pub fn label(&self) -> &'static str {
        match self {
            Normalization::RootN => "root-N",
            Normalization::AsPrinted => "as-printed",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "root-N" | "root-n" => Ok(Normalization::RootN),
            "as-printed" => Ok(Normalization::AsPrinted),
            other => Err(format!("unknown normalization {other:?} (root-N, as-printed)")),
        }
    }
}

/// How `sup_u |psi(u)|` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupMode {
    /// Exact supremum over the Cartesian grid of pooled per-axis jump
    /// coordinates. d = 2 only.
    ExactGrid,
    /// Maximum over the pooled pseudo-observation points plus (1, …, 1).
    /// Any dimension; a lower bound on the exact supremum.
    PooledPoints,
}

impl SupMode {
    pub fn label(&self) -> &'static str {
        match self {
            SupMode::ExactGrid => "exact-grid",
            SupMode::PooledPoints => "pooled-points",
        }
    }
}

impl std::str::FromStr for SupMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact-grid" => Ok(SupMode::ExactGrid),
            "pooled-points" => Ok(SupMode::PooledPoints),
            other => Err(format!(
                "unknown sup mode {other:?} (exact-grid, pooled-points)"
            )),
        }
    }
}

/// Scan configuration: trimming fraction, embedding dimension, weight, and
/// supremum evaluation mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub beta: f64,
    pub d: usize,
    pub normalization: Normalization,
    pub sup_mode: SupMode,
}

impl ScanConfig {
    pub fn new(beta: f64, d: usize, normalization: Normalization, sup_mode: SupMode) -> Self {
        ScanConfig {
            beta,
            d,
            normalization,
            sup_mode,
        }
    }
}

/// Root-N weight `sqrt(l (N - l) / N)`.
fn root_weight(l: usize, n: usize) -> f64 {
    ((l * (n - l)) as f64 / n as f64).sqrt()
}

/// The as-printed value is the root-N value divided by `sqrt(N)`; applying
/// the normalization as a final scaling makes that relation hold bitwise.
fn apply_normalization(root_value: f64, n: usize, normalization: Normalization) -> f64 {
    match normalization {
        Normalization::RootN => root_value,
        Normalization::AsPrinted => root_value / (n as f64).sqrt(),
    }
}

/// Weighted copula difference at a single point.
pub fn psi_at(
    pre: &PseudoSample,
    post: &PseudoSample,
    u: &[f64],
    l: usize,
    n: usize,
    normalization: Normalization,
) -> Result<f64> {
    if l < 1 || l > n - 1 {
        return Err(Error::SplitOutOfRange { l, max: n - 1 });
    }
    if pre.m() != l {
        return Err(Error::SegmentSizeMismatch {
            expected: l,
            got: pre.m(),
        });
    }
    if post.m() != n - l {
        return Err(Error::SegmentSizeMismatch {
            expected: n - l,
            got: post.m(),
        });
    }
    let root_value = (ecop_eval(pre, u)? - ecop_eval(post, u)?) * root_weight(l, n);
    Ok(apply_normalization(root_value, n, normalization))
}

/// Sorted distinct values of coordinate `j` pooled over both segments.
fn pooled_axis(pre: &PseudoSample, post: &PseudoSample, j: usize) -> Vec<f64> {
    let mut axis: Vec<f64> = pre.column(j);
    axis.extend(post.column(j));
    axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
    axis.dedup();
    axis
}

/// Index of `v` in the sorted `axis`; `v` is guaranteed to be present
/// because axes are built from the very same coordinates.
fn axis_index(axis: &[f64], v: f64) -> usize {
    axis.partition_point(|&x| x < v)
}

/// Inclusive 2-D prefix counts of a sample bucketed onto the joint grid.
fn prefix_counts(sample: &PseudoSample, ax0: &[f64], ax1: &[f64]) -> Vec<u32> {
    let (n0, n1) = (ax0.len(), ax1.len());
    let mut grid = vec![0u32; n0 * n1];
    for i in 0..sample.m() {
        let a = axis_index(ax0, sample.coord(i, 0));
        let b = axis_index(ax1, sample.coord(i, 1));
        grid[a * n1 + b] += 1;
    }
    for a in 0..n0 {
        for b in 1..n1 {
            grid[a * n1 + b] += grid[a * n1 + b - 1];
        }
    }
    for a in 1..n0 {
        for b in 0..n1 {
            grid[a * n1 + b] += grid[(a - 1) * n1 + b];
        }
    }
    grid
}

/// Exact `sup_u |D_pre(u) - D_post(u)|` for d = 2 via dominance counting on
/// the pooled jump grid.
fn sup_abs_diff_exact_grid(pre: &PseudoSample, post: &PseudoSample) -> f64 {
    let ax0 = pooled_axis(pre, post, 0);
    let ax1 = pooled_axis(pre, post, 1);
    let pre_counts = prefix_counts(pre, &ax0, &ax1);
    let post_counts = prefix_counts(post, &ax0, &ax1);
    let m1 = pre.m() as f64;
    let m2 = post.m() as f64;
    let mut sup = 0.0f64;
    for (c1, c2) in pre_counts.iter().zip(&post_counts) {
        let diff = (*c1 as f64 / m1 - *c2 as f64 / m2).abs();
        if diff > sup {
            sup = diff;
        }
    }
    sup
}

/// `max |D_pre - D_post|` over the pooled pseudo-observation points plus
/// the upper corner.
fn sup_abs_diff_pooled(pre: &PseudoSample, post: &PseudoSample) -> f64 {
    let d = pre.d();
    let m1 = pre.m() as f64;
    let m2 = post.m() as f64;
    let mut sup = 0.0f64;
    let mut eval = |u: &[f64]| {
        let mut c1 = 0usize;
        for i in 0..pre.m() {
            if pre.point(i).iter().zip(u).all(|(x, b)| x <= b) {
                c1 += 1;
            }
        }
        let mut c2 = 0usize;
        for i in 0..post.m() {
            if post.point(i).iter().zip(u).all(|(x, b)| x <= b) {
                c2 += 1;
            }
        }
        let diff = (c1 as f64 / m1 - c2 as f64 / m2).abs();
        if diff > sup {
            sup = diff;
        }
    };
    for i in 0..pre.m() {
        eval(pre.point(i));
    }
    for i in 0..post.m() {
        eval(post.point(i));
    }
    eval(&vec![1.0; d]);
    sup
}

fn sup_abs_diff(pre: &PseudoSample, post: &PseudoSample, mode: SupMode) -> Result<f64> {
    if pre.d() != post.d() {
        return Err(Error::DimensionMismatch {
            expected: pre.d(),
            got: post.d(),
        });
    }
    match mode {
        SupMode::ExactGrid => {
            if pre.d() != 2 {
                return Err(Error::ExactGridDimension { d: pre.d() });
            }
            Ok(sup_abs_diff_exact_grid(pre, post))
        }
        SupMode::PooledPoints => Ok(sup_abs_diff_pooled(pre, post)),
    }
}

/// `sup_u |psi(u)|` for one candidate split.
pub fn sup_abs_psi(
    pre: &PseudoSample,
    post: &PseudoSample,
    l: usize,
    n: usize,
    config: &ScanConfig,
) -> Result<f64> {
    if l < 1 || l > n - 1 {
        return Err(Error::SplitOutOfRange { l, max: n - 1 });
    }
    if pre.m() != l {
        return Err(Error::SegmentSizeMismatch {
            expected: l,
            got: pre.m(),
        });
    }
    if post.m() != n - l {
        return Err(Error::SegmentSizeMismatch {
            expected: n - l,
            got: post.m(),
        });
    }
    let root_value = sup_abs_diff(pre, post, config.sup_mode)? * root_weight(l, n);
    Ok(apply_normalization(root_value, n, config.normalization))
}

/// Scan result: the per-candidate profile, its maximum, and the break
/// estimate on both the row and level timelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakScanResult {
    /// `(l, sup_abs_psi)` for every candidate split in the trimmed range.
    pub per_l: Vec<(usize, f64)>,
    /// Maximum of the profile.
    pub t_n: f64,
    /// Row index attaining the maximum (smallest on ties).
    pub l_hat: usize,
    /// `l_hat` translated to the 1-based level timeline.
    pub shift_observation: usize,
    /// Calendar quarter of `shift_observation`.
    pub date_hat: Quarter,
    /// Number of embedded rows.
    pub n_rows: usize,
    pub config: ScanConfig,
}

impl BreakScanResult {
    /// Two-column CSV of the scan profile, suitable for plotting.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("l,statistic\n");
        for (l, v) in &self.per_l {
            out.push_str(&format!("{l},{v}\n"));
        }
        out
    }
}

fn trimmed_range(n: usize, beta: f64) -> Result<(usize, usize)> {
    let lo = (beta * n as f64).floor() as usize;
    let hi = ((1.0 - beta) * n as f64).ceil() as usize;
    if lo < 1 || hi > n - 1 || lo > hi {
        return Err(Error::TrimmedRangeEmpty { n, beta });
    }
    Ok((lo, hi))
}

/// Scan all candidate splits in the trimmed range; candidates run in
/// parallel and the reduction is a deterministic max with smallest-l
/// tie-break, so results are identical regardless of thread count.
pub fn scan(rows: &LagMatrix, config: &ScanConfig) -> Result<BreakScanResult> {
    if !(config.beta > 0.0 && config.beta < 0.5) {
        return Err(Error::BadConfig(format!(
            "beta must lie in (0, 0.5), got {}",
            config.beta
        )));
    }
    if config.d != rows.d() {
        return Err(Error::DimensionMismatch {
            expected: rows.d(),
            got: config.d,
        });
    }
    if config.sup_mode == SupMode::ExactGrid && rows.d() != 2 {
        return Err(Error::ExactGridDimension { d: rows.d() });
    }
    let n = rows.n_rows();
    let (lo, hi) = trimmed_range(n, config.beta)?;
    let per_l: Vec<(usize, f64)> = (lo..=hi)
        .into_par_iter()
        .map(|l| {
            let pre = pseudo_obs(rows, 0..l).expect("nonempty prefix");
            let post = pseudo_obs(rows, l..n).expect("nonempty suffix");
            let root_value = sup_abs_diff(&pre, &post, config.sup_mode).expect("validated dims")
                * root_weight(l, n);
            (l, apply_normalization(root_value, n, config.normalization))
        })
        .collect();
    let (mut l_hat, mut t_n) = per_l[0];
    for &(l, v) in &per_l[1..] {
        if v > t_n {
            t_n = v;
            l_hat = l;
        }
    }
    let shift_observation = rows.row_base_index() + l_hat - 1;
    Ok(BreakScanResult {
        per_l,
        t_n,
        l_hat,
        shift_observation,
        date_hat: index_to_quarter(shift_observation, rows.level_base()),
        n_rows: n,
        config: *config,
    })
}

/// Permutation p-value for the scan maximum: whole rows are permuted, which
/// preserves the cross-lag dependence within a row but destroys the time
/// ordering. `p = (1 + #{permuted T >= observed}) / (n_perm + 1)`.
pub fn permutation_pvalue(
    rows: &LagMatrix,
    config: &ScanConfig,
    n_perm: usize,
    seed: u64,
) -> Result<f64> {
    if n_perm < 99 {
        return Err(Error::BadConfig(format!(
            "need at least 99 permutations, got {n_perm}"
        )));
    }
    let observed = scan(rows, config)?.t_n;
    let exceed: usize = (0..n_perm as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, rep);
            let mut indices: Vec<usize> = (0..rows.n_rows()).collect();
            use rand::seq::SliceRandom;
            indices.shuffle(&mut rng);
            let permuted = rows.permuted(&indices);
            let t = scan(&permuted, config).expect("same shape as observed").t_n;
            usize::from(t >= observed)
        })
        .sum();
    Ok((1 + exceed) as f64 / (n_perm + 1) as f64)
}
