//! Lag embedding of a growth series and rank-based pseudo-observations.
//!
//! Row r of the embedding is `(y_{r+d-1}, y_{r+d-2}, …, y_r)` — lag 0 first.
//! Pseudo-observations rescale within-segment ranks into the open unit
//! interval by `rank / (m + 1)`, so every statistic built on them is exactly
//! invariant under strictly increasing transforms of the underlying series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quarter::Quarter;
use crate::series::GrowthSeries;

/// How tied values are ranked. Midranks keep rank statistics
/// permutation-symmetric when rounded data produce ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    Midrank,
}

/// N×d matrix of lag-embedded rows, anchored to the level timeline.
///
/// For matrices produced by [`embed`], column j+1 is column j shifted by one
/// row. Matrices produced by [`LagMatrix::from_rows`] or
/// [`LagMatrix::permuted`] are general row samples without that structure.
#[derive(Debug, Clone, PartialEq)]
pub struct LagMatrix {
    data: Vec<f64>,
    d: usize,
    n_rows: usize,
    /// Level-timeline index (1-based) of the lag-0 coordinate of row 1.
    row_base_index: usize,
    /// First quarter of the level timeline.
    level_base: Quarter,
}

impl LagMatrix {
    /// Build a matrix directly from rows. `row_base_index` defaults to
    /// `d + 1` and the calendar anchor to 1900Q1; synthetic and permuted
    /// inputs only need these for report formatting.
    pub fn from_rows(rows: Vec<Vec<f64>>, d: usize) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * d);
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(LagMatrix {
            data,
            d,
            n_rows,
            row_base_index: d + 1,
            level_base: Quarter::new(1900, 1),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.d..(r + 1) * self.d]
    }

    pub fn row_base_index(&self) -> usize {
        self.row_base_index
    }

    pub fn level_base(&self) -> Quarter {
        self.level_base
    }

    /// Copy with rows reordered by `indices` (must be a permutation of
    /// `0..n_rows`). Used by the permutation test.
    pub fn permuted(&self, indices: &[usize]) -> LagMatrix {
        assert_eq!(indices.len(), self.n_rows);
        let mut data = Vec::with_capacity(self.data.len());
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        LagMatrix {
            data,
            d: self.d,
            n_rows: self.n_rows,
            row_base_index: self.row_base_index,
            level_base: self.level_base,
        }
    }

    /// Debug dump: header `row,lag0,lag1,…` then one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for j in 0..self.d {
            out.push_str(&format!(",lag{j}"));
        }
        out.push('\n');
        for r in 0..self.n_rows {
            out.push_str(&format!("{}", r + 1));
            for v in self.row(r) {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Lag-embed a growth series at depth `d` (rows ordered lag 0 first).
pub fn embed(g: &GrowthSeries, d: usize) -> Result<LagMatrix> {
    if !(2..=10).contains(&d) {
        return Err(Error::DimensionOutOfRange { d });
    }
    let n = g.values.len();
    if n < d + 10 {
        return Err(Error::TooShort { needed: d + 10, got: n });
    }
    let n_rows = n - d + 1;
    let mut data = Vec::with_capacity(n_rows * d);
    for r in 0..n_rows {
        for j in 0..d {
            data.push(g.values[r + d - 1 - j]);
        }
    }
    Ok(LagMatrix {
        data,
        d,
        n_rows,
        // Row 1's lag-0 coordinate is growth observation d, which sits at
        // level-timeline index d + 1.
        row_base_index: d + 1,
        level_base: g.level_base(),
    })
}

/// Ranks of a column, 1-based; ties get the average of their positions.
pub fn ranks(column: &[f64], _tie_rule: TieRule) -> Vec<f64> {
    let m = column.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| column[a].partial_cmp(&column[b]).unwrap());
    let mut out = vec![0.0; m];
    let mut i = 0;
    while i < m {
        let mut j = i;
        while j + 1 < m && column[order[j + 1]] == column[order[i]] {
            j += 1;
        }
        // positions i+1 ..= j+1 share the midrank
        let midrank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            out[idx] = midrank;
        }
        i = j + 1;
    }
    out
}

/// Rank-scaled points in (0,1)^d for one segment of rows; ranks are computed
/// within the segment only.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSample {
    points: Vec<f64>,
    m: usize,
    d: usize,
    tie_rule: TieRule,
}

impl PseudoSample {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tie_rule(&self) -> TieRule {
        self.tie_rule
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    /// Coordinate j of point i.
    pub fn coord(&self, i: usize, j: usize) -> f64 {
        self.points[i * self.d + j]
    }

    /// All values of coordinate j.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.m).map(|i| self.coord(i, j)).collect()
    }
}

/// Pseudo-observations of a contiguous row range of the matrix.
pub fn pseudo_obs(m: &LagMatrix, rows: std::ops::Range<usize>) -> Result<PseudoSample> {
    if rows.is_empty() || rows.end > m.n_rows() {
        return Err(Error::SegmentSizeMismatch {
            expected: 1,
            got: 0,
        });
    }
    let seg = rows.len();
    let d = m.d();
    let mut points = vec![0.0; seg * d];
    let mut column = vec![0.0; seg];
    for j in 0..d {
        for (i, r) in rows.clone().enumerate() {
            column[i] = m.row(r)[j];
        }
        let rk = ranks(&column, TieRule::Midrank);
        let denom = (seg + 1) as f64;
        for i in 0..seg {
            points[i * d + j] = rk[i] / denom;
        }
    }
    Ok(PseudoSample {
        points,
        m: seg,
        d,
        tie_rule: TieRule::Midrank,
    })
}

/// Empirical copula of the sample at `u`: the fraction of points dominated
/// by `u` coordinate-wise.
pub fn ecop_eval(p: &PseudoSample, u: &[f64]) -> Result<f64> {
    if u.len() != p.d() {
        return Err(Error::DimensionMismatch {
            expected: p.d(),
            got: u.len(),
        });
    }
    let mut count = 0usize;
    for i in 0..p.m() {
        let point = p.point(i);
        if point.iter().zip(u).all(|(x, bound)| x <= bound) {
            count += 1;
        }
    }
    Ok(count as f64 / p.m() as f64)
}
