//! Deterministic synthetic inputs for demos, calibration runs, and the
//! bundled example dataset.
//!
//! The bundled quarterly series is generated by [`gdp_like_series`]: a
//! two-regime growth process whose marginal level and spread mimic postwar
//! US quarterly GDP growth, with the serial dependence structure flipped
//! after level observation 140 (1981Q4) while the marginals stay put. It is
//! synthetic data, not a statistical agency series; see `data/README.md` in
//! the repository root.

use rand::Rng;

use crate::embedding::LagMatrix;
use crate::quarter::Quarter;
use crate::rng::stream_rng;
use crate::series::QuarterlySeries;

/// Standard normal draw (Box-Muller).
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Number of level observations produced by [`gdp_like_series`]:
/// 1947Q1 through 2012Q2.
pub const GDP_LIKE_LEVELS: usize = 262;

/// Level index (1-based) after which the dependence regime flips.
pub const GDP_LIKE_BREAK_INDEX: usize = 140;

/// Synthetic quarterly level series, 262 observations from 1947Q1.
///
/// Growth is AR(1) with mean 0.016: positively autocorrelated (φ = 0.5) up
/// to level observation 140, negatively autocorrelated (φ = -0.5) after.
/// The innovation scale keeps the marginal standard deviation near 0.011 in
/// both regimes, so the break lives in the dependence structure rather than
/// the marginals. Levels start at 100 and compound the growth rates.
pub fn gdp_like_series(seed: u64) -> QuarterlySeries {
    let mut rng = stream_rng(seed, 0);
    let mu = 0.016;
    let sd = 0.011;
    let phi = 0.5f64;
    let innovation_sd = sd * (1.0 - phi * phi).sqrt();

    let mut levels = Vec::with_capacity(GDP_LIKE_LEVELS);
    levels.push(100.0f64);
    let mut prev_centered = 0.0;
    for t in 2..=GDP_LIKE_LEVELS {
        let regime_phi = if t <= GDP_LIKE_BREAK_INDEX { phi } else { -phi };
        let centered = regime_phi * prev_centered + innovation_sd * gaussian(&mut rng);
        let growth = mu + centered;
        prev_centered = centered;
        let next = levels.last().unwrap() * (1.0 + growth);
        levels.push(next);
    }
    QuarterlySeries {
        start: Quarter::new(1947, 1),
        values: levels,
        label: "synthetic".to_string(),
    }
}

/// CSV text of a level series in the ingestion format.
pub fn series_to_csv(series: &QuarterlySeries) -> String {
    let mut out = String::from("date,value\n");
    let mut q = series.start;
    for v in &series.values {
        out.push_str(&format!("{q},{v:.6}\n"));
        q = q.next();
    }
    out
}

/// n×d matrix of iid uniform rows, for calibration runs and property tests.
pub fn uniform_matrix(n: usize, d: usize, seed: u64) -> LagMatrix {
    let mut rng = stream_rng(seed, 1);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random()).collect())
        .collect();
    LagMatrix::from_rows(rows, d).expect("consistent row widths")
}
