//! OLS engine with the diagnostics grid of standard econometric output:
//! coefficient table, fit statistics, information criteria, Durbin-Watson,
//! and the joint F test on the non-intercept slopes.
//!
//! Coefficients solve the normal equations through a Householder QR of the
//! design matrix; standard errors come from the inverse upper-triangular
//! factor, so no explicit `(X'X)^{-1}` is ever formed from squared data.

use serde::{Deserialize, Serialize};

use crate::dist::{f_survival, student_t_two_sided};
use crate::error::{Error, Result};

/// Named design matrix. The intercept, when wanted, is an explicit column.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n: usize,
}

impl Design {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        assert_eq!(names.len(), columns.len(), "one name per column");
        let n = columns.first().map_or(0, |c| c.len());
        for c in &columns {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
        }
        Ok(Design { names, columns, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }
}

/// One row of the coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub name: String,
    pub coef: f64,
    pub std_err: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

/// Complete fit: coefficient table plus the diagnostics grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub terms: Vec<CoefficientRow>,
    pub n_obs: usize,
    pub k: usize,
    pub r2: f64,
    pub adj_r2: f64,
    /// Standard error of the regression, `sqrt(ssr / (n - k))`.
    pub ser: f64,
    pub ssr: f64,
    /// Gaussian log-likelihood `-(n/2)(1 + ln 2π + ln(ssr/n))`.
    pub log_lik: f64,
    /// `(-2 log_lik + 2k) / n`.
    pub aic: f64,
    /// `(-2 log_lik + k ln n) / n`.
    pub sic: f64,
    /// Durbin-Watson statistic of the residuals in sample order.
    pub dw: f64,
    /// Joint F test of all non-intercept slopes; absent for an
    /// intercept-only fit.
    pub f_stat: Option<f64>,
    pub f_prob: Option<f64>,
    pub mean_dep: f64,
    pub sd_dep: f64,
}

impl OlsFit {
    pub fn coef(&self, name: &str) -> Option<&CoefficientRow> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// Text block in the layout of standard least-squares output: the
    /// coefficient table followed by the diagnostics grid.
    pub fn text_block(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<12}{:>14}{:>14}{:>14}{:>10}\n",
            "Variable", "Coefficient", "Std. Error", "t-Statistic", "Prob."
        ));
        for t in &self.terms {
            out.push_str(&format!(
                "{:<12}{:>14.6}{:>14.6}{:>14.6}{:>10.4}\n",
                t.name, t.coef, t.std_err, t.t_stat, t.p_value
            ));
        }
        let left: [(&str, f64); 6] = [
            ("R-squared", self.r2),
            ("Adjusted R-squared", self.adj_r2),
            ("S.E. of regression", self.ser),
            ("Sum squared resid", self.ssr),
            ("Log likelihood", self.log_lik),
            ("Durbin-Watson stat", self.dw),
        ];
        let right: [(&str, Option<f64>); 6] = [
            ("Mean dependent var", Some(self.mean_dep)),
            ("S.D. dependent var", Some(self.sd_dep)),
            ("Akaike info criterion", Some(self.aic)),
            ("Schwarz criterion", Some(self.sic)),
            ("F-statistic", self.f_stat),
            ("Prob(F-statistic)", self.f_prob),
        ];
        for ((lname, lval), (rname, rval)) in left.iter().zip(right.iter()) {
            let rtext = match rval {
                Some(v) => format!("{v:.6}"),
                None => "--".to_string(),
            };
            out.push_str(&format!("{lname:<22}{lval:>12.6}  {rname:<24}{rtext:>12}\n"));
        }
        out
    }
}

/// Householder QR of the column-major design; returns the packed upper
/// triangle R (k×k) and Q'y alongside.
fn householder_qr(columns: &mut [Vec<f64>], y: &mut [f64]) -> Result<Vec<f64>> {
    let n = y.len();
    let k = columns.len();
    let mut r: Vec<f64> = vec![0.0; k * k];
    for j in 0..k {
        // Householder vector for column j below row j
        let norm_sq: f64 = columns[j][j..].iter().map(|v| v * v).sum();
        let norm = norm_sq.sqrt();
        let max_diag = (0..=j).map(|i| {
            let idx = i * k + i;
            if i < j { r[idx].abs() } else { 0.0 }
        })
        .fold(norm, f64::max);
        if norm <= max_diag * 1e-13 || norm == 0.0 {
            return Err(Error::RankDeficient { column: j });
        }
        let alpha = if columns[j][j] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = columns[j][j..].to_vec();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if v_norm_sq > 0.0 {
            // apply H = I - 2 vv'/v'v to the remaining columns and to y
            for target in j..k {
                let dot: f64 = v
                    .iter()
                    .zip(&columns[target][j..])
                    .map(|(a, b)| a * b)
                    .sum();
                let scale = 2.0 * dot / v_norm_sq;
                for (i, vi) in v.iter().enumerate() {
                    columns[target][j + i] -= scale * vi;
                }
            }
            let dot: f64 = v.iter().zip(&y[j..]).map(|(a, b)| a * b).sum();
            let scale = 2.0 * dot / v_norm_sq;
            for (i, vi) in v.iter().enumerate() {
                y[j + i] -= scale * vi;
            }
        }
        for i in 0..=j {
            r[i * k + j] = columns[j][i];
        }
    }
    // guard against numerically collapsed diagonals
    let max_diag = (0..k).map(|i| r[i * k + i].abs()).fold(0.0f64, f64::max);
    for i in 0..k {
        if r[i * k + i].abs() <= max_diag * (n as f64).sqrt() * f64::EPSILON {
            return Err(Error::RankDeficient { column: i });
        }
    }
    Ok(r)
}

/// Solve R b = rhs for upper-triangular R (packed k×k).
fn back_substitute(r: &[f64], k: usize, rhs: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = rhs[i];
        for j in i + 1..k {
            acc -= r[i * k + j] * b[j];
        }
        b[i] = acc / r[i * k + i];
    }
    b
}

/// Inverse of upper-triangular R (packed k×k).
fn invert_upper(r: &[f64], k: usize) -> Vec<f64> {
    let mut inv = vec![0.0; k * k];
    for col in 0..k {
        let mut e = vec![0.0; k];
        e[col] = 1.0;
        let x = back_substitute(r, k, &e);
        for row in 0..k {
            inv[row * k + col] = x[row];
        }
    }
    inv
}

/// Fit ordinary least squares of `y` on the design columns.
///
/// Requires full column rank and `n > k`. `r2` is centered, which assumes
/// an intercept column is present.
pub fn ols(y: &[f64], x: &Design) -> Result<OlsFit> {
    let n = y.len();
    let k = x.k();
    if x.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.n() });
    }
    if n <= k {
        return Err(Error::NotEnoughObservations { n, k });
    }

    let mut work_columns: Vec<Vec<f64>> = (0..k).map(|j| x.column(j).to_vec()).collect();
    let mut qty = y.to_vec();
    let r = householder_qr(&mut work_columns, &mut qty)?;
    let beta = back_substitute(&r, k, &qty[..k]);

    // residuals from the original data
    let mut residuals = vec![0.0; n];
    for i in 0..n {
        let mut fitted = 0.0;
        for j in 0..k {
            fitted += x.column(j)[i] * beta[j];
        }
        residuals[i] = y[i] - fitted;
    }
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let mean_dep = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_dep).powi(2)).sum();
    let sd_dep = (tss / (n - 1) as f64).sqrt();

    let r2 = 1.0 - ssr / tss;
    let adj_r2 = 1.0 - (1.0 - r2) * (n - 1) as f64 / (n - k) as f64;
    let ser = (ssr / (n - k) as f64).sqrt();
    // ssr can be exactly zero for a perfect fit; clamp inside the log only
    let ssr_for_ll = ssr.max(f64::MIN_POSITIVE);
    let log_lik = -(n as f64 / 2.0)
        * (1.0 + (2.0 * std::f64::consts::PI).ln() + (ssr_for_ll / n as f64).ln());
    let aic = (-2.0 * log_lik + 2.0 * k as f64) / n as f64;
    let sic = (-2.0 * log_lik + k as f64 * (n as f64).ln()) / n as f64;

    let dw_num: f64 = residuals.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    let dw = if ssr > 0.0 { dw_num / ssr } else { 0.0 };

    // standard errors from (X'X)^{-1} = R^{-1} R^{-T}
    let r_inv = invert_upper(&r, k);
    let df = (n - k) as f64;
    let mut terms = Vec::with_capacity(k);
    for j in 0..k {
        let xtx_inv_jj: f64 = (0..k).map(|c| r_inv[j * k + c].powi(2)).sum();
        let std_err = ser * xtx_inv_jj.sqrt();
        let t_stat = if std_err > 0.0 { beta[j] / std_err } else { f64::INFINITY };
        terms.push(CoefficientRow {
            name: x.names()[j].clone(),
            coef: beta[j],
            std_err,
            t_stat,
            p_value: student_t_two_sided(t_stat, df),
        });
    }

    let (f_stat, f_prob) = if k >= 2 {
        let f = ((tss - ssr) / (k - 1) as f64) / (ssr / df).max(f64::MIN_POSITIVE);
        (Some(f), Some(f_survival(f, (k - 1) as f64, df)))
    } else {
        (None, None)
    };

    Ok(OlsFit {
        terms,
        n_obs: n,
        k,
        r2,
        adj_r2,
        ser,
        ssr,
        log_lik,
        aic,
        sic,
        dw,
        f_stat,
        f_prob,
        mean_dep,
        sd_dep,
    })
}
