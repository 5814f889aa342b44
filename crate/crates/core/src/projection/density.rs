use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian kernel density estimate sampled on a regular grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub width: usize,
    pub height: usize,
    /// `[x_min, y_min, x_max, y_max]` of the grid; cell `(i, j)` is centred
    /// at `x_min + (i + 0.5) * (x_max - x_min) / width`.
    pub bounds: [f64; 4],
    pub bandwidth: f64,
    /// Row-major (`j * width + i`), maximum 1.
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        let [x0, y0, x1, y1] = self.bounds;
        [
            x0 + (i as f64 + 0.5) * (x1 - x0) / self.width as f64,
            y0 + (j as f64 + 0.5) * (y1 - y0) / self.height as f64,
        ]
    }
}

/// Scott's rule on the pooled standard deviation of both coordinates, with
/// a small floor for coincident points.
pub fn default_bandwidth(points: &[[f64; 2]]) -> f64 {
    let n = points.len().max(1) as f64;
    let sd = |k: usize| {
        let mean = points.iter().map(|p| p[k]).sum::<f64>() / n;
        (points.iter().map(|p| (p[k] - mean).powi(2)).sum::<f64>() / n).sqrt()
    };
    let sigma = 0.5 * (sd(0) + sd(1));
    (sigma * n.powf(-1.0 / 6.0)).max(1e-6)
}

/// KDE of `points` on a `resolution.0 x resolution.1` grid covering their
/// bounding box padded by three bandwidths.
pub fn density_grid(points: &[[f64; 2]], resolution: (usize, usize), bandwidth: Option<f64>) -> Result<DensityGrid> {
    if points.is_empty() {
        return Err(Error::contract("density grid needs at least one point"));
    }
    let (width, height) = resolution;
    if width == 0 || height == 0 {
        return Err(Error::contract("grid resolution must be positive"));
    }
    let h = bandwidth.unwrap_or_else(|| default_bandwidth(points));
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::contract("bandwidth must be positive"));
    }
    let mut bounds = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in points {
        bounds[0] = bounds[0].min(p[0]);
        bounds[1] = bounds[1].min(p[1]);
        bounds[2] = bounds[2].max(p[0]);
        bounds[3] = bounds[3].max(p[1]);
    }
    bounds[0] -= 3.0 * h;
    bounds[1] -= 3.0 * h;
    bounds[2] += 3.0 * h;
    bounds[3] += 3.0 * h;
    let mut grid = DensityGrid { width, height, bounds, bandwidth: h, values: vec![0.0; width * height] };
    let inv = 1.0 / (2.0 * h * h);
    for j in 0..height {
        for i in 0..width {
            let c = grid.cell_center(i, j);
            grid.values[j * width + i] = points
                .iter()
                .map(|p| (-((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)) * inv).exp())
                .sum();
        }
    }
    let max = grid.values.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        grid.values.iter_mut().for_each(|v| *v /= max);
    }
    Ok(grid)
}
