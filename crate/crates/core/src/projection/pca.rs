use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-component PCA basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Orthonormal; the first nonzero component of each axis is positive.
    pub axes: [Vec<f64>; 2],
    /// Share of the total variance along each axis.
    pub explained_variance: [f64; 2],
    /// All covariance eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Fewer than two non-negligible eigenvalues: the second axis is an
    /// arbitrary null-space direction.
    pub degenerate: bool,
}

/// Fits the top two principal axes of `points` (covariance normalized by
/// `1/N`).
pub fn fit_pca<P: AsRef<[f64]>>(points: &[P]) -> Result<PcaModel> {
    if points.len() < 3 {
        return Err(Error::contract(format!("pca needs at least 3 points, got {}", points.len())));
    }
    let m = points[0].as_ref().len();
    if m < 2 || points.iter().any(|p| p.as_ref().len() != m) {
        return Err(Error::contract("pca needs points of one common dimensionality >= 2"));
    }
    let n = points.len() as f64;
    let mut mean = vec![0.0; m];
    for p in points {
        for (acc, v) in mean.iter_mut().zip(p.as_ref()) {
            *acc += v / n;
        }
    }
    let mut cov = DMatrix::<f64>::zeros(m, m);
    for p in points {
        let c: Vec<f64> = p.as_ref().iter().zip(&mean).map(|(v, mu)| v - mu).collect();
        for i in 0..m {
            for j in i..m {
                cov[(i, j)] += c[i] * c[j] / n;
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            cov[(i, j)] = cov[(j, i)];
        }
    }
    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i].max(0.0)).collect();
    let axis = |k: usize| {
        let mut v: Vec<f64> = eigen.eigenvectors.column(order[k]).iter().copied().collect();
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        v
    };
    let total: f64 = eigenvalues.iter().sum();
    let tolerance = 1e-12 * eigenvalues[0].max(1e-300);
    let degenerate = eigenvalues.iter().filter(|&&l| l > tolerance).count() < 2;
    let explained_variance = if total > 0.0 {
        [eigenvalues[0] / total, eigenvalues[1] / total]
    } else {
        [0.0, 0.0]
    };
    Ok(PcaModel { mean, axes: [axis(0), axis(1)], explained_variance, eigenvalues, degenerate })
}

impl PcaModel {
    pub fn project_point(&self, p: &[f64]) -> Result<[f64; 2]> {
        if p.len() != self.mean.len() {
            return Err(Error::contract(format!(
                "point has {} components, model expects {}",
                p.len(),
                self.mean.len()
            )));
        }
        let dot = |axis: &[f64]| p.iter().zip(&self.mean).zip(axis).map(|((v, mu), a)| (v - mu) * a).sum();
        Ok([dot(&self.axes[0]), dot(&self.axes[1])])
    }
}

pub fn project<P: AsRef<[f64]>>(model: &PcaModel, points: &[P]) -> Result<Vec<[f64; 2]>> {
    points.iter().map(|p| model.project_point(p.as_ref())).collect()
}
