//! Independent oracles for the integration and acceptance suites.
//!
//! Everything here deliberately avoids the library's optimized paths:
//! copula values come from raw double loops, the supremum from a dense
//! mesh, the kernel from quadrature, and the Möbius statistic from a
//! lattice integral of the squared interaction process.

// each test binary uses its own subset of the oracles
#![allow(dead_code)]

use copbreak::{pseudo_obs, LagMatrix, PseudoSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_rows(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..d).map(|_| rng.random()).collect()).collect()
}

/// Segment pseudo-observations of a row split, as the scan builds them.
pub fn split_pseudo(rows: Vec<Vec<f64>>, l: usize) -> (PseudoSample, PseudoSample) {
    let d = rows[0].len();
    let n = rows.len();
    let m = LagMatrix::from_rows(rows, d).unwrap();
    (
        pseudo_obs(&m, 0..l).unwrap(),
        pseudo_obs(&m, l..n).unwrap(),
    )
}

fn count_dominated(p: &PseudoSample, u: &[f64]) -> usize {
    let mut count = 0;
    for i in 0..p.m() {
        if p.point(i).iter().zip(u).all(|(x, b)| x <= b) {
            count += 1;
        }
    }
    count
}

/// Brute-force `sup |psi|` under the root-N weight: maximum of the copula
/// difference over a dense uniform mesh refined at every jump coordinate of
/// both step functions, evaluated by direct counting.
pub fn dense_mesh_sup(pre: &PseudoSample, post: &PseudoSample, mesh_per_axis: usize) -> f64 {
    assert_eq!(pre.d(), 2);
    let l = pre.m();
    let n = l + post.m();
    let mut axes: Vec<Vec<f64>> = Vec::new();
    for j in 0..2 {
        let mut axis: Vec<f64> = (0..=mesh_per_axis)
            .map(|k| k as f64 / mesh_per_axis as f64)
            .collect();
        axis.extend(pre.column(j));
        axis.extend(post.column(j));
        axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
        axis.dedup();
        axes.push(axis);
    }
    let m1 = pre.m() as f64;
    let m2 = post.m() as f64;
    let mut sup = 0.0f64;
    for &x in &axes[0] {
        for &y in &axes[1] {
            let u = [x, y];
            let diff =
                (count_dominated(pre, &u) as f64 / m1 - count_dominated(post, &u) as f64 / m2).abs();
            if diff > sup {
                sup = diff;
            }
        }
    }
    sup * ((l * (n - l)) as f64 / n as f64).sqrt()
}

/// Midpoint quadrature of `(1(a<=u) - u)(1(b<=u) - u)` with panels aligned
/// to the two indicator break points, `total_panels` panels overall.
pub fn kernel_quadrature(a: f64, b: f64, total_panels: usize) -> f64 {
    let lo = a.min(b);
    let hi = a.max(b);
    let pieces = [(0.0, lo), (lo, hi), (hi, 1.0)];
    let mut acc = 0.0;
    for &(start, end) in &pieces {
        let len = end - start;
        if len <= 0.0 {
            continue;
        }
        let panels = ((len * total_panels as f64).ceil() as usize).max(1);
        let h = len / panels as f64;
        let mut piece = 0.0;
        for k in 0..panels {
            let u = start + (k as f64 + 0.5) * h;
            let fa = if a <= u { 1.0 - u } else { -u };
            let fb = if b <= u { 1.0 - u } else { -u };
            piece += fa * fb;
        }
        acc += piece * h;
    }
    acc
}

/// Cell edges of a `cells`-panel uniform lattice refined at the process's
/// jump coordinates, so no cell straddles a discontinuity.
fn refined_edges(cells: usize, jumps: &[f64]) -> Vec<f64> {
    let mut edges: Vec<f64> = (0..=cells).map(|k| k as f64 / cells as f64).collect();
    edges.extend_from_slice(jumps);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup();
    edges
}

/// Lattice integral of the squared Möbius interaction process for a pair of
/// coordinates: midpoint evaluation on a `cells`×`cells` lattice whose cells
/// are split at the jump coordinates. The integrand is smooth inside every
/// refined cell, which keeps the quadrature error well below the comparison
/// tolerances.
pub fn mobius_pair_lattice(p: &PseudoSample, j1: usize, j2: usize, cells: usize) -> f64 {
    let n = p.m();
    let scale = 1.0 / (n as f64).sqrt();
    let col1 = p.column(j1 - 1);
    let col2 = p.column(j2 - 1);
    let edges1 = refined_edges(cells, &col1);
    let edges2 = refined_edges(cells, &col2);
    let mut acc = 0.0;
    for w1 in edges1.windows(2) {
        let width1 = w1[1] - w1[0];
        let u1 = 0.5 * (w1[0] + w1[1]);
        for w2 in edges2.windows(2) {
            let width2 = w2[1] - w2[0];
            let u2 = 0.5 * (w2[0] + w2[1]);
            let mut g = 0.0;
            for i in 0..n {
                let f1 = if col1[i] <= u1 { 1.0 - u1 } else { -u1 };
                let f2 = if col2[i] <= u2 { 1.0 - u2 } else { -u2 };
                g += f1 * f2;
            }
            let g = g * scale;
            acc += g * g * width1 * width2;
        }
    }
    acc
}
