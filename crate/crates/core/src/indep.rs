//! Copula independence test: per-subset Cramér–von Mises statistics of the
//! Möbius-decomposed empirical copula process, with Monte Carlo calibration
//! of the null.
//!
//! For a subset A of coordinates, the statistic is
//!
//! ```text
//! M_A = (1/n) Σ_i Σ_k Π_{j in A} k(U_ij, U_kj)
//! ```
//!
//! with the kernel `k(a, b) = ∫ (1(a<=u) - u)(1(b<=u) - u) du`. This equals
//! the integral of the squared Möbius interaction process for A, so it is
//! nonnegative and vanishes when the coordinates in A carry no joint
//! interaction beyond their lower-order margins. Under the null the
//! distribution of M_A depends only on (n, |A|), so null replicates are
//! shared across subsets of equal cardinality.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{embed, pseudo_obs, ranks, PseudoSample, TieRule};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::series::{quantile_type7, GrowthSeries};

/// Closed form of `∫₀¹ (1(a<=u) - u)(1(b<=u) - u) du` for a, b in (0,1).
pub fn cvm_kernel(a: f64, b: f64) -> f64 {
    (1.0 - a.max(b)) - (1.0 - a * a) / 2.0 - (1.0 - b * b) / 2.0 + 1.0 / 3.0
}

/// Set of variable indices, 1-based: 1 is the lag-0 coordinate, 2 the first
/// lag, and so on. Always sorted, distinct, with at least two members.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new(mut indices: Vec<usize>, d: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.len() < 2 {
            return Err(Error::SubsetTooSmall);
        }
        for &i in &indices {
            if i < 1 || i > d {
                return Err(Error::SubsetIndexOutOfRange { index: i, d });
            }
        }
        Ok(Subset(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn card(&self) -> usize {
        self.0.len()
    }

    /// All subsets of {1, …, d} with cardinality between 2 and `max_card`,
    /// ordered by cardinality then lexicographically.
    pub fn enumerate(d: usize, max_card: usize) -> Vec<Subset> {
        let mut out = Vec::new();
        for card in 2..=max_card.min(d) {
            let mut current = Vec::with_capacity(card);
            fn rec(start: usize, d: usize, card: usize, current: &mut Vec<usize>, out: &mut Vec<Subset>) {
                if current.len() == card {
                    out.push(Subset(current.clone()));
                    return;
                }
                for i in start..=d {
                    current.push(i);
                    rec(i + 1, d, card, current, out);
                    current.pop();
                }
            }
            rec(1, d, card, &mut current, &mut out);
        }
        out
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Symmetric kernel matrix of one coordinate, stored as the full n×n grid.
fn kernel_matrix(column: &[f64]) -> Vec<f64> {
    let n = column.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = cvm_kernel(column[i], column[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

/// M_A from precomputed kernel matrices, halving work via the symmetry of
/// the double sum.
fn mobius_from_kernels(kernels: &[&[f64]], n: usize) -> f64 {
    let mut diag = 0.0;
    let mut upper = 0.0;
    for i in 0..n {
        let mut prod = 1.0;
        for k in kernels {
            prod *= k[i * n + i];
        }
        diag += prod;
        for j in i + 1..n {
            let mut prod = 1.0;
            for k in kernels {
                prod *= k[i * n + j];
            }
            upper += prod;
        }
    }
    (diag + 2.0 * upper) / n as f64
}

/// Cramér–von Mises statistic of the Möbius interaction process for the
/// coordinates in `subset`, computed on full-sample pseudo-observations.
pub fn mobius_stat(p: &PseudoSample, subset: &Subset) -> Result<f64> {
    for &j in subset.indices() {
        if j > p.d() {
            return Err(Error::SubsetIndexOutOfRange { index: j, d: p.d() });
        }
    }
    let columns: Vec<Vec<f64>> = subset.indices().iter().map(|&j| p.column(j - 1)).collect();
    let kernels: Vec<Vec<f64>> = columns.iter().map(|c| kernel_matrix(c)).collect();
    let refs: Vec<&[f64]> = kernels.iter().map(|k| k.as_slice()).collect();
    Ok(mobius_from_kernels(&refs, p.m()))
}

/// Simulated null of M for every requested cardinality. The null statistic
/// is rank-based, so each replicate ranks its uniform draws exactly as the
/// observed statistic does.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullDistribution {
    pub n: usize,
    pub alpha: f64,
    pub n_sim: usize,
    pub seed: u64,
    /// Number of subsets calibrated together; critical values are
    /// simultaneous across the family.
    pub family_size: usize,
    /// Ascending null samples keyed by subset cardinality.
    samples: BTreeMap<usize, Vec<f64>>,
}

impl NullDistribution {
    /// Family-wise critical value for one cardinality: the empirical
    /// quantile at level `(1 - alpha)^(1/p)` with `p` the family size, so
    /// that under independence the chance that any of the p statistics
    /// crosses its critical value is about `alpha`. With a single subset
    /// this is the plain `(1 - alpha)` quantile.
    pub fn crit_value(&self, card: usize) -> f64 {
        let sample = &self.samples[&card];
        let level = (1.0 - self.alpha).powf(1.0 / self.family_size as f64);
        quantile_type7(sample, level)
    }

    /// `p = (1 + #{null >= observed}) / (n_sim + 1)`.
    pub fn p_value(&self, card: usize, observed: f64) -> f64 {
        let sample = &self.samples[&card];
        let below = sample.partition_point(|&x| x < observed);
        let exceed = sample.len() - below;
        (1 + exceed) as f64 / (self.n_sim + 1) as f64
    }

    pub fn sample(&self, card: usize) -> &[f64] {
        &self.samples[&card]
    }
}

/// One M replicate: n iid uniform points in (0,1)^card, ranked per column.
fn null_replicate(n: usize, card: usize, seed: u64, stream: u64) -> f64 {
    let mut rng = stream_rng(seed, stream);
    use rand::Rng;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(card);
    for _ in 0..card {
        let draws: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let rk = ranks(&draws, TieRule::Midrank);
        columns.push(rk.into_iter().map(|r| r / (n + 1) as f64).collect());
    }
    // direct double sum over the single subset {1..card}
    let mut diag = 0.0;
    let mut upper = 0.0;
    for i in 0..n {
        let mut prod = 1.0;
        for c in &columns {
            prod *= cvm_kernel(c[i], c[i]);
        }
        diag += prod;
        for j in i + 1..n {
            let mut prod = 1.0;
            for c in &columns {
                prod *= cvm_kernel(c[i], c[j]);
            }
            upper += prod;
        }
    }
    (diag + 2.0 * upper) / n as f64
}

/// Simulate the null for all cardinalities appearing in `subsets`.
/// Replicates run in parallel with per-replicate derived seeds, so the
/// result does not depend on scheduling.
pub fn simulate_null(
    n: usize,
    d: usize,
    subsets: &[Subset],
    n_sim: usize,
    alpha: f64,
    seed: u64,
) -> Result<NullDistribution> {
    if n_sim < 99 {
        return Err(Error::BadConfig(format!(
            "need at least 99 null replicates, got {n_sim}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadConfig(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let mut cards: Vec<usize> = Vec::new();
    for s in subsets {
        for &j in s.indices() {
            if j > d {
                return Err(Error::SubsetIndexOutOfRange { index: j, d });
            }
        }
        if !cards.contains(&s.card()) {
            cards.push(s.card());
        }
    }
    cards.sort_unstable();
    let mut samples = BTreeMap::new();
    for card in cards {
        let mut sample: Vec<f64> = (0..n_sim as u64)
            .into_par_iter()
            .map(|rep| null_replicate(n, card, seed, (card as u64) << 32 | rep))
            .collect();
        sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
        samples.insert(card, sample);
    }
    Ok(NullDistribution {
        n,
        alpha,
        n_sim,
        seed,
        family_size: subsets.len().max(1),
        samples,
    })
}

/// Statistic, Monte Carlo p-value, and critical value for one subset.
///
/// The p-value is the plain per-subset Monte Carlo p-value (never below
/// `1/(n_sim+1)`); the critical value is simultaneous across the report's
/// subset family, which is what a multi-bar dependogram display needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetStat {
    pub subset: Subset,
    pub statistic: f64,
    pub p_value: f64,
    pub crit_value: f64,
}

/// Full independence-test report over all subsets up to `max_card`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependogramReport {
    /// Number of embedded rows the statistics were computed on.
    pub n: usize,
    pub d: usize,
    pub max_card: usize,
    pub alpha: f64,
    pub n_sim: usize,
    pub seed: u64,
    pub rows: Vec<SubsetStat>,
}

impl DependogramReport {
    /// CSV with one row per subset: subset, statistic, pvalue, critvalue.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subset,statistic,pvalue,critvalue\n");
        for r in &self.rows {
            out.push_str(&format!(
                "\"{}\",{},{},{}\n",
                r.subset, r.statistic, r.p_value, r.crit_value
            ));
        }
        out
    }

    /// Plot-data CSV for rendering a dependogram bar chart externally.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("subset,statistic,critvalue\n");
        for r in &self.rows {
            out.push_str(&format!("\"{}\",{},{}\n", r.subset, r.statistic, r.crit_value));
        }
        out
    }
}

/// Run the independence test on the depth-d embedding of a growth series:
/// full-sample pseudo-observations, M_A for every subset with
/// `2 <= |A| <= max_card`, and Monte Carlo p-values / critical values.
pub fn indep_report(
    g: &GrowthSeries,
    d: usize,
    max_card: usize,
    alpha: f64,
    n_sim: usize,
    seed: u64,
) -> Result<DependogramReport> {
    if max_card < 2 || max_card > d {
        return Err(Error::BadConfig(format!(
            "max_card must lie in 2..=d (= {d}), got {max_card}"
        )));
    }
    let matrix = embed(g, d)?;
    let n = matrix.n_rows();
    let p = pseudo_obs(&matrix, 0..n)?;
    let subsets = Subset::enumerate(d, max_card);

    // Kernel matrices once per coordinate, shared by all subsets.
    let kernels: Vec<Vec<f64>> = (0..d).map(|j| kernel_matrix(&p.column(j))).collect();
    let null = simulate_null(n, d, &subsets, n_sim, alpha, seed)?;
    let rows = subsets
        .into_iter()
        .map(|subset| {
            let refs: Vec<&[f64]> = subset
                .indices()
                .iter()
                .map(|&j| kernels[j - 1].as_slice())
                .collect();
            let statistic = mobius_from_kernels(&refs, n);
            SubsetStat {
                p_value: null.p_value(subset.card(), statistic),
                crit_value: null.crit_value(subset.card()),
                subset,
                statistic,
            }
        })
        .collect();
    Ok(DependogramReport {
        n,
        d,
        max_card,
        alpha,
        n_sim,
        seed,
        rows,
    })
}
