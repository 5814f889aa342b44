use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::OperatorConfig;

/// Result of one SBX application to a mating pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SbxOutcome {
    pub offspring: [Vec<f64>; 2],
    /// Spread factor shared by every variable.
    pub beta: f64,
    /// Noise added to each offspring after recombination (zero vectors when
    /// the perturbation is disabled), before clamping.
    pub perturbations: [Vec<f64>; 2],
}

impl SbxOutcome {
    pub fn perturbation_magnitudes(&self) -> [f64; 2] {
        self.perturbations
            .each_ref()
            .map(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

/// Inverse-CDF draw of the SBX spread factor from a uniform `u` in `[0, 1)`.
pub fn sbx_spread_factor(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    }
}

/// `oa = ((1+b) xa + (1-b) xb) / 2`, `ob = ((1-b) xa + (1+b) xb) / 2`.
pub fn sbx_combine(xa: &[f64], xb: &[f64], beta: f64) -> (Vec<f64>, Vec<f64>) {
    xa.iter()
        .zip(xb)
        .map(|(a, b)| {
            (
                0.5 * ((1.0 + beta) * a + (1.0 - beta) * b),
                0.5 * ((1.0 - beta) * a + (1.0 + beta) * b),
            )
        })
        .unzip()
}

/// SBX with one spread factor per pair, optional Gaussian perturbation, and
/// clamping to `bounds`.
pub fn sbx_crossover<R: Rng + ?Sized>(
    xa: &[f64],
    xb: &[f64],
    bounds: &[(f64, f64)],
    config: &OperatorConfig,
    rng: &mut R,
) -> SbxOutcome {
    let beta = sbx_spread_factor(rng.random::<f64>(), config.sbx_distribution_index);
    let (oa, ob) = sbx_combine(xa, xb, beta);
    let mut offspring = [oa, ob];
    let mut perturbations = [vec![0.0; xa.len()], vec![0.0; xa.len()]];
    if config.sbx_perturbation_scale > 0.0 {
        let normal = Normal::new(0.0, config.sbx_perturbation_scale).expect("scale checked by OperatorConfig::check");
        for (child, noise) in offspring.iter_mut().zip(perturbations.iter_mut()) {
            for (x, e) in child.iter_mut().zip(noise.iter_mut()) {
                *e = normal.sample(rng);
                *x += *e;
            }
        }
    }
    for child in &mut offspring {
        clamp(child, bounds);
    }
    SbxOutcome { offspring, beta, perturbations }
}

fn clamp(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Bounded polynomial mutation. Returns the mutated vector and
/// `delta = x_mut - x`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    bounds: &[(f64, f64)],
    config: &OperatorConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let p = config.per_variable_probability(x.len());
    let eta = config.mutation_distribution_index;
    let power = 1.0 / (eta + 1.0);
    let mut y = x.to_vec();
    for (v, &(lo, hi)) in y.iter_mut().zip(bounds) {
        if rng.random::<f64>() >= p || hi <= lo {
            continue;
        }
        let width = hi - lo;
        let d1 = (*v - lo) / width;
        let d2 = (hi - *v) / width;
        let r: f64 = rng.random();
        let dq = if r < 0.5 {
            let val = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1).powf(eta + 1.0);
            val.powf(power) - 1.0
        } else {
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(power)
        };
        *v = (*v + dq * width).clamp(lo, hi);
    }
    let delta = y.iter().zip(x).map(|(a, b)| a - b).collect();
    (y, delta)
}
