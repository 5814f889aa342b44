//! Hypervolume of the region dominated by a point set and bounded by a
//! reference point (minimization).
//!
//! Exact values come from a 2-D sweep, 3-D slicing along the last objective
//! over 2-D sweeps, and the same slicing applied recursively for more
//! objectives. [`hypervolume`] switches to Monte Carlo sampling for `m >= 4`,
//! where the recursive route is exponential in `m`.

use rand::Rng;

use crate::rng::StreamRng;

/// Samples drawn by the Monte Carlo fallback.
pub const MONTE_CARLO_SAMPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypervolumeEstimate {
    pub value: f64,
    /// Zero for exact computations.
    pub std_error: f64,
    pub exact: bool,
}

/// Hypervolume of `points` w.r.t. `reference`: exact for `m <= 3`, a
/// [`MONTE_CARLO_SAMPLES`]-sample estimate drawn from `rng` otherwise.
pub fn hypervolume<P: AsRef<[f64]>>(points: &[P], reference: &[f64], rng: &mut StreamRng) -> HypervolumeEstimate {
    if reference.len() <= 3 {
        HypervolumeEstimate { value: hypervolume_exact(points, reference), std_error: 0.0, exact: true }
    } else {
        hypervolume_monte_carlo(points, reference, MONTE_CARLO_SAMPLES, rng)
    }
}

/// Exact hypervolume for any number of objectives. Points that do not
/// strictly dominate the reference point contribute nothing.
pub fn hypervolume_exact<P: AsRef<[f64]>>(points: &[P], reference: &[f64]) -> f64 {
    let mut pts: Vec<&[f64]> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| p.len() == reference.len() && p.iter().zip(reference).all(|(x, r)| x < r))
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    match reference.len() {
        0 => 0.0,
        1 => reference[0] - pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => sweep_2d(&mut pts, reference),
        _ => slice(&mut pts, reference),
    }
}

fn sweep_2d(pts: &mut [&[f64]], reference: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = reference[1];
    for p in pts.iter() {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

/// Slices along the last objective: between consecutive levels the dominated
/// cross-section is the (m-1)-dimensional hypervolume of every point at or
/// below the level.
fn slice(pts: &mut [&[f64]], reference: &[f64]) -> f64 {
    let d = reference.len() - 1;
    pts.sort_by(|a, b| a[d].total_cmp(&b[d]));
    let sub_ref = &reference[..d];
    let mut volume = 0.0;
    let mut i = 0;
    while i < pts.len() {
        let level = pts[i][d];
        while i < pts.len() && pts[i][d] == level {
            i += 1;
        }
        let next = if i < pts.len() { pts[i][d] } else { reference[d] };
        if next > level {
            let mut section: Vec<&[f64]> = pts[..i].iter().map(|p| &p[..d]).collect();
            let area = if d == 2 { sweep_2d(&mut section, sub_ref) } else { slice(&mut section, sub_ref) };
            volume += area * (next - level);
        }
    }
    volume
}

/// Uniform sampling of the box spanned by the componentwise minimum of the
/// contributing points and the reference point.
pub fn hypervolume_monte_carlo<P: AsRef<[f64]>>(
    points: &[P],
    reference: &[f64],
    samples: usize,
    rng: &mut StreamRng,
) -> HypervolumeEstimate {
    let pts: Vec<&[f64]> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| p.len() == reference.len() && p.iter().zip(reference).all(|(x, r)| x < r))
        .collect();
    if pts.is_empty() || samples == 0 {
        return HypervolumeEstimate { value: 0.0, std_error: 0.0, exact: false };
    }
    let lower: Vec<f64> = (0..reference.len())
        .map(|j| pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let box_volume: f64 = lower.iter().zip(reference).map(|(l, r)| r - l).product();
    let mut sample = vec![0.0; reference.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (s, (l, r)) in sample.iter_mut().zip(lower.iter().zip(reference)) {
            *s = rng.random_range(*l..*r);
        }
        if pts.iter().any(|p| p.iter().zip(&sample).all(|(x, s)| x <= s)) {
            hits += 1;
        }
    }
    let fraction = hits as f64 / samples as f64;
    HypervolumeEstimate {
        value: fraction * box_volume,
        std_error: box_volume * (fraction * (1.0 - fraction) / samples as f64).sqrt(),
        exact: false,
    }
}
