//! Exact t-SNE (all pairs, no tree approximation).
//!
//! Schedule: `iterations` steps of gradient descent with per-parameter
//! gains, momentum `0.5` switching to `0.8` at `momentum_switch`, P scaled by
//! `exaggeration` for the first `exaggeration_iterations` steps, learning
//! rate `learning_rate`. The initial layout is drawn from `N(0, 1e-4^2)`
//! with a ChaCha8 generator seeded by `seed`.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pca::{fit_pca, project};
use crate::error::{Error, Result};

const P_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub exaggeration: f64,
    pub exaggeration_iterations: usize,
    pub momentum: f64,
    pub final_momentum: f64,
    pub momentum_switch: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            exaggeration: 12.0,
            exaggeration_iterations: 250,
            momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch: 250,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMode {
    Tsne,
    /// Too few points for the perplexity; the layout is a PCA projection.
    PcaFallback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsneEmbedding {
    /// One row per input point, in input order.
    pub coordinates: Vec<[f64; 2]>,
    pub mode: EmbeddingMode,
    pub perplexity: f64,
    pub iterations: usize,
    pub seed: u64,
    /// KL divergence after the last iteration (0 for the fallback).
    pub kl_divergence: f64,
    /// KL divergence measured right after early exaggeration ended.
    pub kl_after_exaggeration: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsneProgress {
    pub iteration: usize,
    pub total: usize,
}

/// Conditional affinities `p_{j|i}` (row-major `N x N`, zero diagonal) and
/// the realized perplexity of every row.
pub fn calibrate_affinities<P: AsRef<[f64]> + Sync>(points: &[P], perplexity: f64) -> (Vec<f64>, Vec<f64>) {
    let n = points.len();
    let target = perplexity.ln();
    let rows: Vec<(Vec<f64>, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = points[i].as_ref();
            let d: Vec<f64> = (0..n)
                .map(|j| {
                    if j == i {
                        0.0
                    } else {
                        xi.iter().zip(points[j].as_ref()).map(|(a, b)| (a - b).powi(2)).sum()
                    }
                })
                .collect();
            let d_min = (0..n).filter(|&j| j != i).map(|j| d[j]).fold(f64::INFINITY, f64::min);
            let mut row = vec![0.0; n];
            // Entropy (natural log) of the row for precision beta.
            let entropy = |beta: f64, row: &mut [f64]| {
                let mut z = 0.0;
                let mut weighted = 0.0;
                for j in 0..n {
                    if j == i {
                        row[j] = 0.0;
                        continue;
                    }
                    let shifted = d[j] - d_min;
                    let w = (-beta * shifted).exp();
                    row[j] = w;
                    z += w;
                    weighted += w * shifted;
                }
                for v in row.iter_mut() {
                    *v /= z;
                }
                z.ln() + beta * weighted / z
            };
            let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
            let mut beta = 1.0;
            let mut h = entropy(beta, &mut row);
            for _ in 0..200 {
                if (h - target).abs() < 1e-10 {
                    break;
                }
                if h > target {
                    lo = beta;
                    beta = if hi.is_finite() { 0.5 * (beta + hi) } else { beta * 2.0 };
                } else {
                    hi = beta;
                    beta = 0.5 * (beta + lo);
                }
                h = entropy(beta, &mut row);
            }
            (row, h.exp())
        })
        .collect();
    let mut p = Vec::with_capacity(n * n);
    let mut realized = Vec::with_capacity(n);
    for (row, perp) in rows {
        p.extend(row);
        realized.push(perp);
    }
    (p, realized)
}

/// Symmetrized joint affinities: `(p_{j|i} + p_{i|j}) / 2N`, floored at
/// `1e-12` off the diagonal and renormalized to sum 1.
pub fn joint_affinities(conditional: &[f64], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = ((conditional[i * n + j] + conditional[j * n + i]) / (2.0 * n as f64)).max(P_FLOOR);
                p[i * n + j] = v;
                total += v;
            }
        }
    }
    p.iter_mut().for_each(|v| *v /= total);
    p
}

fn student_weights(y: &[[f64; 2]], w: &mut [f64]) -> f64 {
    let n = y.len();
    w.par_chunks_mut(n)
        .enumerate()
        .map(|(i, row)| {
            let mut s = 0.0;
            for (j, v) in row.iter_mut().enumerate() {
                *v = if i == j {
                    0.0
                } else {
                    1.0 / (1.0 + (y[i][0] - y[j][0]).powi(2) + (y[i][1] - y[j][1]).powi(2))
                };
                s += *v;
            }
            s
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .sum()
}

/// `KL(P || Q)` for the layout `y`.
pub fn kl_divergence(p: &[f64], y: &[[f64; 2]]) -> f64 {
    let n = y.len();
    let mut w = vec![0.0; n * n];
    let z = student_weights(y, &mut w);
    (0..n * n)
        .filter(|k| k / n != k % n && p[*k] > 0.0)
        .map(|k| p[k] * (p[k] / (w[k] / z).max(f64::MIN_POSITIVE)).ln())
        .sum()
}

/// Analytic gradient `4 sum_j (p_ij - q_ij) w_ij (y_i - y_j)` with `P`
/// scaled by `exaggeration`.
pub fn kl_gradient(p: &[f64], y: &[[f64; 2]], exaggeration: f64) -> Vec<[f64; 2]> {
    let n = y.len();
    let mut w = vec![0.0; n * n];
    let z = student_weights(y, &mut w);
    gradient_with(p, y, &w, z, exaggeration)
}

fn gradient_with(p: &[f64], y: &[[f64; 2]], w: &[f64], z: f64, exaggeration: f64) -> Vec<[f64; 2]> {
    let n = y.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut g = [0.0, 0.0];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let k = i * n + j;
                let f = (exaggeration * p[k] - w[k] / z) * w[k];
                g[0] += 4.0 * f * (y[i][0] - y[j][0]);
                g[1] += 4.0 * f * (y[i][1] - y[j][1]);
            }
            g
        })
        .collect()
}

/// Fits an embedding of `points`. `progress` is called every 50 iterations;
/// returning `ControlFlow::Break` cancels the fit.
pub fn fit_tsne<P: AsRef<[f64]> + Sync>(
    points: &[P],
    config: &TsneConfig,
    mut progress: Option<&mut dyn FnMut(TsneProgress) -> ControlFlow<()>>,
) -> Result<TsneEmbedding> {
    let n = points.len();
    if !(config.perplexity.is_finite() && config.perplexity > 0.0) {
        return Err(Error::contract("perplexity must be positive"));
    }
    if (n as f64) <= 3.0 * config.perplexity {
        return Ok(TsneEmbedding {
            coordinates: fallback_layout(points)?,
            mode: EmbeddingMode::PcaFallback,
            perplexity: config.perplexity,
            iterations: 0,
            seed: config.seed,
            kl_divergence: 0.0,
            kl_after_exaggeration: None,
        });
    }
    let (conditional, _) = calibrate_affinities(points, config.perplexity);
    let p = joint_affinities(&conditional, n);
    drop(conditional);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let normal = Normal::new(0.0, 1e-4).expect("valid");
    let mut y: Vec<[f64; 2]> = (0..n).map(|_| [normal.sample(&mut rng), normal.sample(&mut rng)]).collect();
    let mut update = vec![[0.0f64; 2]; n];
    let mut gains = vec![[1.0f64; 2]; n];
    let mut w = vec![0.0; n * n];
    let mut kl_after_exaggeration = None;

    for it in 0..config.iterations {
        if it == config.exaggeration_iterations && it > 0 {
            kl_after_exaggeration = Some(kl_divergence(&p, &y));
        }
        if it % 50 == 0 {
            if let Some(cb) = progress.as_mut() {
                if cb(TsneProgress { iteration: it, total: config.iterations }).is_break() {
                    return Err(Error::Cancelled);
                }
            }
        }
        let exaggeration = if it < config.exaggeration_iterations { config.exaggeration } else { 1.0 };
        let momentum = if it < config.momentum_switch { config.momentum } else { config.final_momentum };
        let z = student_weights(&y, &mut w);
        let grad = gradient_with(&p, &y, &w, z, exaggeration);
        for i in 0..n {
            for d in 0..2 {
                gains[i][d] = if (grad[i][d] > 0.0) != (update[i][d] > 0.0) {
                    gains[i][d] + 0.2
                } else {
                    (gains[i][d] * 0.8).max(0.01)
                };
                update[i][d] = momentum * update[i][d] - config.learning_rate * gains[i][d] * grad[i][d];
                y[i][d] += update[i][d];
            }
        }
        let mean = y.iter().fold([0.0, 0.0], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
        for v in &mut y {
            v[0] -= mean[0] / n as f64;
            v[1] -= mean[1] / n as f64;
        }
    }
    if config.iterations == config.exaggeration_iterations && config.iterations > 0 {
        kl_after_exaggeration = Some(kl_divergence(&p, &y));
    }
    if let Some(cb) = progress.as_mut() {
        let _ = cb(TsneProgress { iteration: config.iterations, total: config.iterations });
    }
    Ok(TsneEmbedding {
        kl_divergence: kl_divergence(&p, &y),
        coordinates: y,
        mode: EmbeddingMode::Tsne,
        perplexity: config.perplexity,
        iterations: config.iterations,
        seed: config.seed,
        kl_after_exaggeration,
    })
}

fn fallback_layout<P: AsRef<[f64]>>(points: &[P]) -> Result<Vec<[f64; 2]>> {
    match points.len() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![[0.0, 0.0]]),
        2 => {
            let d = points[0]
                .as_ref()
                .iter()
                .zip(points[1].as_ref())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            Ok(vec![[-d / 2.0, 0.0], [d / 2.0, 0.0]])
        }
        _ => project(&fit_pca(points)?, points),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        (0..n).map(|_| (0..dim).map(|_| normal.sample(&mut rng)).collect()).collect()
    }

    #[test]
    fn rows_hit_the_target_perplexity() {
        let pts = cloud(40, 5, 1);
        let (p, perp) = calibrate_affinities(&pts, 10.0);
        for (i, realized) in perp.iter().enumerate() {
            assert!((realized.ln() - 10f64.ln()).abs() < 1e-3, "row {i}: {realized}");
            let s: f64 = p[i * 40..(i + 1) * 40].iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let pts = cloud(10, 4, 2);
        let (c, _) = calibrate_affinities(&pts, 3.0);
        let p = joint_affinities(&c, 10);
        let y: Vec<[f64; 2]> = cloud(10, 2, 3).into_iter().map(|v| [v[0], v[1]]).collect();
        let g = kl_gradient(&p, &y, 1.0);
        let h = 1e-6;
        for i in 0..10 {
            for d in 0..2 {
                let mut plus = y.clone();
                plus[i][d] += h;
                let mut minus = y.clone();
                minus[i][d] -= h;
                let fd = (kl_divergence(&p, &plus) - kl_divergence(&p, &minus)) / (2.0 * h);
                let rel = (fd - g[i][d]).abs() / g[i][d].abs().max(1e-8);
                assert!(rel < 1e-4, "({i},{d}): fd {fd} vs {}", g[i][d]);
            }
        }
    }

    #[test]
    fn deterministic_and_kl_decreases() {
        let pts = cloud(50, 6, 4);
        let config = TsneConfig { perplexity: 10.0, iterations: 400, seed: 9, ..TsneConfig::default() };
        let a = fit_tsne(&pts, &config, None).unwrap();
        let b = fit_tsne(&pts, &config, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mode, EmbeddingMode::Tsne);
        assert!(a.kl_divergence <= a.kl_after_exaggeration.unwrap());
        assert!(a.coordinates.iter().flatten().all(|v| v.is_finite()));
    }

    #[test]
    fn falls_back_to_pca_for_small_inputs() {
        let pts = cloud(20, 3, 5);
        let e = fit_tsne(&pts, &TsneConfig::default(), None).unwrap();
        assert_eq!(e.mode, EmbeddingMode::PcaFallback);
        assert_eq!(e.coordinates.len(), 20);
    }

    #[test]
    fn cancellation() {
        let pts = cloud(40, 3, 6);
        let config = TsneConfig { perplexity: 5.0, ..TsneConfig::default() };
        let mut calls = 0;
        let mut cb = |p: TsneProgress| {
            calls += 1;
            if p.iteration >= 100 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        };
        assert!(matches!(fit_tsne(&pts, &config, Some(&mut cb)), Err(Error::Cancelled)));
        assert_eq!(calls, 3);
    }
}
