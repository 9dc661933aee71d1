//! Structural-break detection for univariate time series based on the
//! empirical copula of lag-embedded observations.
//!
//! The pipeline: parse a calendar-anchored quarterly level series, transform
//! it to growth rates, embed the growth series into d-dimensional lag vectors,
//! and compare the rank-based empirical copulas of the two segments on either
//! side of each candidate break point. The candidate maximizing the weighted
//! sup-norm copula distance is the break estimate. Two companions are
//! provided: a Cramér–von Mises copula independence test (the nonlinear
//! analogue of a correlogram) and a linear structural-break benchmark built
//! on an OLS engine with full diagnostics.
//!
//! All randomized routines take explicit seeds and derive per-replicate
//! streams, so results are reproducible regardless of thread count.

pub mod az;
pub mod break_scan;
pub mod dist;
pub mod embedding;
mod error;
pub mod indep;
pub mod ols;
pub mod quarter;
pub mod rng;
pub mod series;
pub mod synthetic;

pub use az::{az_design, az_scan, AzResult, AzSpec};
pub use break_scan::{
    permutation_pvalue, psi_at, scan, sup_abs_psi, BreakScanResult, Normalization, ScanConfig,
    SupMode,
};
pub use embedding::{ecop_eval, embed, pseudo_obs, ranks, LagMatrix, PseudoSample, TieRule};
pub use error::{Error, Result};
pub use indep::{
    cvm_kernel, indep_report, mobius_stat, simulate_null, DependogramReport, NullDistribution,
    Subset, SubsetStat,
};
pub use ols::{ols, CoefficientRow, Design, OlsFit};
pub use quarter::{index_to_quarter, Quarter};
pub use series::{acf, descriptives, growth_rates, parse_csv, GrowthSeries, LagStats,
    MarginalTable, QuarterlySeries};
