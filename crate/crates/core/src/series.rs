//! Quarterly level series: CSV ingestion, growth rates, per-lag marginal
//! descriptives, and the sample autocorrelation function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quarter::Quarter;

/// A calendar-anchored level series (quarterly, contiguous).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarterlySeries {
    pub start: Quarter,
    pub values: Vec<f64>,
    pub label: String,
}

/// Quarter-over-quarter growth rates derived from a level series.
/// `start` is the quarter of the first growth observation, i.e. the second
/// level quarter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub start: Quarter,
    pub values: Vec<f64>,
}

impl GrowthSeries {
    /// First quarter of the underlying level series (one before `start`).
    pub fn level_base(&self) -> Quarter {
        self.start.prev()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Parse `date,value` CSV text into a level series.
///
/// Requires the exact header, `YYYYQn` dates, finite decimal values, and
/// contiguous ascending quarters. Error row numbers count data rows,
/// starting at 1 for the first row after the header.
pub fn parse_csv(text: &str) -> Result<QuarterlySeries> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let header = lines.next().unwrap_or("");
    if header.trim() != "date,value" {
        return Err(Error::BadHeader(header.to_string()));
    }

    let mut start: Option<Quarter> = None;
    let mut prev: Option<Quarter> = None;
    let mut values = Vec::new();
    let mut row = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        row += 1;
        let (date_text, value_text) = line.split_once(',').unwrap_or((line, ""));
        let quarter: Quarter = date_text.trim().parse().map_err(|_| Error::BadQuarter {
            row,
            text: date_text.to_string(),
        })?;
        let value: f64 = value_text.trim().parse().map_err(|_| Error::BadValue {
            row,
            text: value_text.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::BadValue {
                row,
                text: value_text.to_string(),
            });
        }
        match prev {
            None => start = Some(quarter),
            Some(p) => {
                let expected = p.next();
                if quarter != expected {
                    return Err(Error::NonContiguous {
                        row,
                        expected,
                        found: quarter,
                    });
                }
            }
        }
        prev = Some(quarter);
        values.push(value);
    }
    let start = start.ok_or(Error::EmptyBody)?;
    Ok(QuarterlySeries {
        start,
        values,
        label: "value".to_string(),
    })
}

/// Simple percentage changes: `values[i] = s.values[i+1] / s.values[i] - 1`.
pub fn growth_rates(s: &QuarterlySeries) -> Result<GrowthSeries> {
    if s.values.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: s.values.len(),
        });
    }
    for (i, &v) in s.values.iter().enumerate() {
        if v <= 0.0 {
            return Err(Error::NonPositiveLevel {
                index: i + 1,
                value: v,
            });
        }
    }
    let values = s.values.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
    Ok(GrowthSeries {
        start: s.start.next(),
        values,
    })
}

/// Six-number summary for one lagged copy of the series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagStats {
    pub lag: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
}

/// Per-lag marginal descriptives over the common support of the embedding
/// at depth `max_lag + 1`: every row summarizes the same number of
/// observations, shifted by its lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalTable {
    pub rows: Vec<LagStats>,
}

impl MarginalTable {
    /// CSV with lags as columns and statistics as rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Lag");
        for r in &self.rows {
            out.push(',');
            if r.lag == 0 {
                out.push('0');
            } else {
                out.push_str(&format!("-{}", r.lag));
            }
        }
        out.push('\n');
        let stats: [(&str, fn(&LagStats) -> f64); 6] = [
            ("Min.", |r| r.min),
            ("1st Qu.", |r| r.q1),
            ("Median", |r| r.median),
            ("Mean", |r| r.mean),
            ("3rd Qu.", |r| r.q3),
            ("Max.", |r| r.max),
        ];
        for (name, get) in stats {
            out.push_str(name);
            for r in &self.rows {
                out.push(',');
                out.push_str(&format!("{}", get(r)));
            }
            out.push('\n');
        }
        out
    }
}

/// Linear-interpolation sample quantile (the convention used by the default
/// summary routines of mainstream statistical software).
///
/// `sorted` must be ascending and nonempty.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Marginal descriptives for lags `0..=max_lag`.
pub fn descriptives(g: &GrowthSeries, max_lag: usize) -> Result<MarginalTable> {
    let n = g.values.len();
    if n < max_lag + 2 {
        return Err(Error::MaxLagTooLarge { max_lag, len: n });
    }
    let window = n - max_lag;
    let mut rows = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        // Lag-k column of the depth-(max_lag+1) embedding: the series
        // shifted back by k, restricted to the shared window.
        let slice = &g.values[max_lag - lag..n - lag];
        let mut sorted = slice.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mean = slice.iter().sum::<f64>() / window as f64;
        rows.push(LagStats {
            lag,
            min: sorted[0],
            q1: quantile_type7(&sorted, 0.25),
            median: quantile_type7(&sorted, 0.5),
            mean,
            q3: quantile_type7(&sorted, 0.75),
            max: sorted[window - 1],
        });
    }
    Ok(MarginalTable { rows })
}

/// Sample autocorrelations ρ̂(1), …, ρ̂(max_lag), centered by the sample
/// mean and normalized by the lag-0 autocovariance.
pub fn acf(g: &GrowthSeries, max_lag: usize) -> Result<Vec<f64>> {
    let n = g.values.len();
    if n <= max_lag {
        return Err(Error::MaxLagTooLarge { max_lag, len: n });
    }
    let y = &g.values;
    let mean = y.iter().sum::<f64>() / n as f64;
    let denom: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mut rho = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        let num: f64 = (k..n).map(|t| (y[t] - mean) * (y[t - k] - mean)).sum();
        rho.push(num / denom);
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_row_file() {
        let s = parse_csv("date,value\n1947Q1,243.1\n1947Q2,246.3").unwrap();
        assert_eq!(s.start, Quarter::new(1947, 1));
        assert_eq!(s.values, vec![243.1, 246.3]);
    }

    #[test]
    fn parse_accepts_261_contiguous_rows() {
        let mut text = String::from("date,value\n");
        let mut q = Quarter::new(1947, 1);
        for i in 0..261 {
            text.push_str(&format!("{q},{}\n", 100.0 + i as f64));
            q = q.next();
        }
        assert_eq!(q, Quarter::new(2012, 2));
        let s = parse_csv(&text).unwrap();
        assert_eq!(s.values.len(), 261);
    }

    #[test]
    fn parse_detects_gap_at_row_2() {
        let err = parse_csv("date,value\n1947Q1,1.0\n1947Q3,2.0").unwrap_err();
        match err {
            Error::NonContiguous { row, expected, found } => {
                assert_eq!(row, 2);
                assert_eq!(expected, Quarter::new(1947, 2));
                assert_eq!(found, Quarter::new(1947, 3));
            }
            other => panic!("expected NonContiguous, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicates_bad_dates_bad_values() {
        assert!(matches!(
            parse_csv("date,value\n1947Q1,1.0\n1947Q1,2.0").unwrap_err(),
            Error::NonContiguous { row: 2, .. }
        ));
        assert!(matches!(
            parse_csv("date,value\n1947-01,1.0").unwrap_err(),
            Error::BadQuarter { row: 1, .. }
        ));
        assert!(matches!(
            parse_csv("date,value\n1947Q1,abc").unwrap_err(),
            Error::BadValue { row: 1, .. }
        ));
        assert!(matches!(parse_csv("date,value\n").unwrap_err(), Error::EmptyBody));
        assert!(matches!(
            parse_csv("time,value\n1947Q1,1.0").unwrap_err(),
            Error::BadHeader(_)
        ));
    }

    #[test]
    fn growth_of_constant_series_is_zero() {
        let s = QuarterlySeries {
            start: Quarter::new(2000, 1),
            values: vec![100.0, 100.0, 100.0],
            label: "x".into(),
        };
        let g = growth_rates(&s).unwrap();
        assert_eq!(g.values, vec![0.0, 0.0]);
        assert_eq!(g.start, Quarter::new(2000, 2));
    }

    #[test]
    fn growth_two_point_arithmetic() {
        let s = QuarterlySeries {
            start: Quarter::new(2000, 1),
            values: vec![100.0, 102.0],
            label: "x".into(),
        };
        let g = growth_rates(&s).unwrap();
        assert_eq!(g.values.len(), 1);
        assert!((g.values[0] - 0.02).abs() < 1e-15);
    }

    #[test]
    fn growth_rejects_nonpositive_and_short() {
        let s = QuarterlySeries {
            start: Quarter::new(2000, 1),
            values: vec![100.0, -1.0],
            label: "x".into(),
        };
        assert!(matches!(
            growth_rates(&s).unwrap_err(),
            Error::NonPositiveLevel { index: 2, .. }
        ));
        let s = QuarterlySeries {
            start: Quarter::new(2000, 1),
            values: vec![100.0],
            label: "x".into(),
        };
        assert!(matches!(growth_rates(&s).unwrap_err(), Error::TooShort { .. }));
    }

    #[test]
    fn geometric_series_growth_is_constant() {
        let r = 1.013_f64;
        let mut values = vec![50.0];
        for _ in 0..40 {
            values.push(values.last().unwrap() * r);
        }
        let s = QuarterlySeries {
            start: Quarter::new(1980, 1),
            values,
            label: "x".into(),
        };
        let g = growth_rates(&s).unwrap();
        for v in &g.values {
            assert!((v - (r - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn descriptives_of_one_to_five() {
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values: vec![1.0, 2.0, 3.0, 4.0, 5.0],
        };
        let t = descriptives(&g, 0).unwrap();
        assert_eq!(t.rows.len(), 1);
        let r = &t.rows[0];
        assert_eq!((r.min, r.q1, r.median, r.mean, r.q3, r.max), (1.0, 2.0, 3.0, 3.0, 4.0, 5.0));
    }

    #[test]
    fn descriptives_of_constant_series() {
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values: vec![0.5; 20],
        };
        let t = descriptives(&g, 3).unwrap();
        for r in &t.rows {
            for v in [r.min, r.q1, r.median, r.mean, r.q3, r.max] {
                assert_eq!(v, 0.5);
            }
        }
    }

    #[test]
    fn descriptives_rows_match_direct_window_summary() {
        // Each lag row must equal the summary of the correspondingly
        // shifted window computed from scratch.
        let values: Vec<f64> = (0..30).map(|i| ((i * 37 % 17) as f64).sin()).collect();
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values,
        };
        let max_lag = 4;
        let t = descriptives(&g, max_lag).unwrap();
        let n = g.values.len();
        for (lag, row) in t.rows.iter().enumerate() {
            let slice = &g.values[max_lag - lag..n - lag];
            let mut sorted = slice.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mean = slice.iter().sum::<f64>() / slice.len() as f64;
            assert_eq!(row.min, sorted[0]);
            assert_eq!(row.q1, quantile_type7(&sorted, 0.25));
            assert_eq!(row.median, quantile_type7(&sorted, 0.5));
            assert!((row.mean - mean).abs() < 1e-15);
            assert_eq!(row.q3, quantile_type7(&sorted, 0.75));
            assert_eq!(row.max, sorted[slice.len() - 1]);
        }
    }

    #[test]
    fn descriptives_ordering_invariants() {
        let values: Vec<f64> = (0..50).map(|i| ((i as f64) * 0.7).cos()).collect();
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values,
        };
        let t = descriptives(&g, 9).unwrap();
        for r in &t.rows {
            assert!(r.min <= r.q1 && r.q1 <= r.median && r.median <= r.q3 && r.q3 <= r.max);
            assert!(r.mean >= r.min && r.mean <= r.max);
        }
    }

    #[test]
    fn descriptives_rejects_excessive_lag() {
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values: vec![1.0, 2.0, 3.0],
        };
        assert!(matches!(
            descriptives(&g, 2).unwrap_err(),
            Error::MaxLagTooLarge { .. }
        ));
    }

    #[test]
    fn acf_alternating_series_is_minus_one_at_lag_one() {
        let values: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values,
        };
        let rho = acf(&g, 2).unwrap();
        assert!((rho[0] + 0.99).abs() < 1e-12, "rho(1) = {}", rho[0]);
        assert!(rho[1] > 0.9);
    }

    #[test]
    fn acf_zero_variance_errors() {
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values: vec![1.0; 10],
        };
        assert!(matches!(acf(&g, 3).unwrap_err(), Error::ZeroVariance));
    }

    #[test]
    fn marginal_table_csv_layout() {
        let g = GrowthSeries {
            start: Quarter::new(2000, 1),
            values: (0..12).map(|i| i as f64).collect(),
        };
        let t = descriptives(&g, 2).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "Lag,0,-1,-2");
        assert!(lines.next().unwrap().starts_with("Min.,"));
        let names: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(names, vec!["Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max."]);
    }
}
