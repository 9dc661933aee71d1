//! Linear structural-break benchmark: scan candidate break dates with
//! intercept and/or trend break dummies and pick the date minimizing the
//! t-statistic of the lagged dependent variable against unity.
//!
//! The regression for a candidate break at level-timeline index `l`:
//!
//! ```text
//! y_t = C [+ DU_l] + TR·t [+ DT_l] + φ·y_{t-1} + ε_t,   t = 3 … m
//! ```
//!
//! with `DU_l = 1(t > l)` and `DT_l = (t - l)·1(t > l)`. The scan statistic
//! is `t_φ = (φ̂ - 1) / se(φ̂)`, minimized (most negative) over candidates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::{ols, Design, OlsFit};
use crate::quarter::{index_to_quarter, Quarter};
use crate::series::GrowthSeries;

/// Which deterministic components may break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AzSpec {
    Intercept,
    Trend,
    Both,
}

impl AzSpec {
    pub fn label(&self) -> &'static str {
        match self {
            AzSpec::Intercept => "intercept",
            AzSpec::Trend => "trend",
            AzSpec::Both => "both",
        }
    }

    /// Table-style description of the specification.
    pub fn describe(&self) -> &'static str {
        match self {
            AzSpec::Intercept => "Intercept",
            AzSpec::Trend => "Trend",
            AzSpec::Both => "Intercept + Trend",
        }
    }
}

impl std::str::FromStr for AzSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "intercept" => Ok(AzSpec::Intercept),
            "trend" => Ok(AzSpec::Trend),
            "both" => Ok(AzSpec::Both),
            other => Err(format!("unknown spec {other:?} (intercept, trend, both)")),
        }
    }
}

/// Dependent vector and design matrix for one candidate break index `l`
/// (level timeline). The first usable growth observation is dropped because
/// it has no lagged value, so the sample is t = 3 … m with n = m - 2.
pub fn az_design(g: &GrowthSeries, spec: AzSpec, l: usize) -> Result<(Vec<f64>, Design)> {
    let n_growth = g.values.len();
    if n_growth < 12 {
        return Err(Error::TooShort {
            needed: 12,
            got: n_growth,
        });
    }
    let m = n_growth + 1; // number of level observations
    if l < 3 || l > m - 1 {
        return Err(Error::BreakOutOfRange { l, lo: 3, hi: m - 1 });
    }
    let n = m - 2;
    let y: Vec<f64> = g.values[1..].to_vec();
    let y_lag: Vec<f64> = g.values[..n_growth - 1].to_vec();
    let t_values: Vec<f64> = (3..=m).map(|t| t as f64).collect();
    let du: Vec<f64> = (3..=m).map(|t| if t > l { 1.0 } else { 0.0 }).collect();
    let dt: Vec<f64> = (3..=m)
        .map(|t| if t > l { (t - l) as f64 } else { 0.0 })
        .collect();
    debug_assert_eq!(y.len(), n);

    let (names, columns): (Vec<String>, Vec<Vec<f64>>) = match spec {
        AzSpec::Intercept => (
            vec!["C".into(), format!("DU{l}"), "TR".into(), "Y(-1)".into()],
            vec![vec![1.0; n], du, t_values, y_lag],
        ),
        AzSpec::Trend => (
            vec!["C".into(), "TR".into(), format!("DT{l}"), "Y(-1)".into()],
            vec![vec![1.0; n], t_values, dt, y_lag],
        ),
        AzSpec::Both => (
            vec![
                "C".into(),
                format!("DU{l}"),
                "TR".into(),
                format!("DT{l}"),
                "Y(-1)".into(),
            ],
            vec![vec![1.0; n], du, t_values, dt, y_lag],
        ),
    };
    Ok((y, Design::new(names, columns)?))
}

/// Break-scan result for one specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AzResult {
    pub spec: AzSpec,
    /// Level-timeline index of the chosen break.
    pub best_index: usize,
    pub best_date: Quarter,
    /// Minimum of `t_φ` over candidates.
    pub min_t: f64,
    pub fit_at_best: OlsFit,
    /// `(l, t_φ)` for every candidate.
    pub per_candidate: Vec<(usize, f64)>,
}

impl AzResult {
    /// Two-column CSV of the candidate profile.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("l,t_phi\n");
        for (l, t) in &self.per_candidate {
            out.push_str(&format!("{l},{t}\n"));
        }
        out
    }
}

fn t_phi(fit: &OlsFit) -> f64 {
    let row = fit.coef("Y(-1)").expect("lagged dependent always present");
    (row.coef - 1.0) / row.std_err
}

/// Scan all candidate break indices in the trimmed range. Candidates fit in
/// parallel; the reduction is a deterministic min with smallest-l tie-break.
pub fn az_scan(g: &GrowthSeries, spec: AzSpec, trim: f64) -> Result<AzResult> {
    if !(trim > 0.0 && trim < 0.5) {
        return Err(Error::BadConfig(format!(
            "trim must lie in (0, 0.5), got {trim}"
        )));
    }
    let n_growth = g.values.len();
    let m = n_growth + 1;
    let n = m - 2;
    let margin = ((trim * n as f64).floor() as usize).max(2);
    let lo = margin + 2;
    let hi = m - margin;
    if lo > hi {
        return Err(Error::TrimmedRangeEmpty { n, beta: trim });
    }
    let per_candidate: Vec<(usize, f64)> = (lo..=hi)
        .into_par_iter()
        .map(|l| {
            let (y, x) = az_design(g, spec, l)?;
            let fit = ols(&y, &x)?;
            Ok((l, t_phi(&fit)))
        })
        .collect::<Result<_>>()?;
    let (mut best_index, mut min_t) = per_candidate[0];
    for &(l, t) in &per_candidate[1..] {
        if t < min_t {
            min_t = t;
            best_index = l;
        }
    }
    let (y, x) = az_design(g, spec, best_index)?;
    let fit_at_best = ols(&y, &x)?;
    Ok(AzResult {
        spec,
        best_index,
        best_date: index_to_quarter(best_index, g.level_base()),
        min_t,
        fit_at_best,
        per_candidate,
    })
}
