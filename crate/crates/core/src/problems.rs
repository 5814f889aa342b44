//! Analytic benchmark problems (DTLZ1-3, ZDT1) with exact Pareto-front
//! reference sets.
//!
//! DTLZ problems use `k = n - m + 1` distance variables. The customary
//! settings are `k = 5` for DTLZ1 and `k = 10` for DTLZ2/3 (so `n = 12` for
//! three objectives); [`ProblemSpec::new`] accepts any `n >= m` for the
//! DTLZ family, e.g. the 10-variable, 3-objective DTLZ3.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DecisionVector, ObjectiveVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Zdt1,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Dtlz1 => "dtlz1",
            ProblemKind::Dtlz2 => "dtlz2",
            ProblemKind::Dtlz3 => "dtlz3",
            ProblemKind::Zdt1 => "zdt1",
        }
    }

    /// Conventional decision dimensionality for `m` objectives.
    pub fn default_n(self, m: usize) -> usize {
        match self {
            ProblemKind::Dtlz1 => m + 4,
            ProblemKind::Dtlz2 | ProblemKind::Dtlz3 => m + 9,
            ProblemKind::Zdt1 => 30,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dtlz1" => Ok(ProblemKind::Dtlz1),
            "dtlz2" => Ok(ProblemKind::Dtlz2),
            "dtlz3" => Ok(ProblemKind::Dtlz3),
            "zdt1" => Ok(ProblemKind::Zdt1),
            other => Err(Error::UnsupportedProblem(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: ProblemKind,
    pub n: usize,
    pub m: usize,
    pub bounds: Vec<(f64, f64)>,
}

impl ProblemSpec {
    pub fn new(name: ProblemKind, n: usize, m: usize) -> Result<Self> {
        match name {
            ProblemKind::Zdt1 if m != 2 => {
                return Err(Error::contract(format!("zdt1 has 2 objectives, got m = {m}")))
            }
            ProblemKind::Zdt1 if n < 2 => return Err(Error::contract("zdt1 needs n >= 2")),
            ProblemKind::Dtlz1 | ProblemKind::Dtlz2 | ProblemKind::Dtlz3 if m < 2 || n < m => {
                return Err(Error::contract(format!("{name} needs m >= 2 and n >= m, got n = {n}, m = {m}")))
            }
            _ => {}
        }
        Ok(Self { name, n, m, bounds: vec![(0.0, 1.0); n] })
    }

    pub fn with_default_n(name: ProblemKind, m: usize) -> Result<Self> {
        Self::new(name, name.default_n(m), m)
    }

    pub fn dtlz1(m: usize) -> Self {
        Self::with_default_n(ProblemKind::Dtlz1, m).expect("m >= 2")
    }

    pub fn dtlz2(m: usize) -> Self {
        Self::with_default_n(ProblemKind::Dtlz2, m).expect("m >= 2")
    }

    pub fn dtlz3(m: usize) -> Self {
        Self::with_default_n(ProblemKind::Dtlz3, m).expect("m >= 2")
    }

    pub fn zdt1() -> Self {
        Self::with_default_n(ProblemKind::Zdt1, 2).expect("valid")
    }

    /// Checks the structural invariants (used when loading foreign logs).
    pub fn check(&self) -> Result<()> {
        let fresh = Self::new(self.name, self.n, self.m)?;
        if self.bounds.len() != fresh.n {
            return Err(Error::contract("bounds length differs from n"));
        }
        if self.bounds.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
            return Err(Error::contract("bounds must be finite with lower < upper"));
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &DecisionVector) -> Result<ObjectiveVector> {
        if x.len() != self.n {
            return Err(Error::contract(format!("decision vector has length {}, expected {}", x.len(), self.n)));
        }
        for (j, (v, (lo, hi))) in x.iter().zip(&self.bounds).enumerate() {
            if !(*lo..=*hi).contains(v) {
                return Err(Error::contract(format!("variable {j} = {v} outside [{lo}, {hi}]")));
            }
        }
        Ok(ObjectiveVector(match self.name {
            ProblemKind::Dtlz1 => dtlz1(x, self.m),
            ProblemKind::Dtlz2 => dtlz_sphere(x, self.m, dtlz2_g(&x[self.m - 1..])),
            ProblemKind::Dtlz3 => dtlz_sphere(x, self.m, rastrigin_g(&x[self.m - 1..])),
            ProblemKind::Zdt1 => zdt1(x),
        }))
    }

    /// Points on the analytic Pareto front.
    ///
    /// For the DTLZ family `count_parameter` is the number of simplex-lattice
    /// divisions `H` (yielding `C(H + m - 1, m - 1)` points); for ZDT1 it is
    /// the number of evenly spaced points.
    pub fn sample_reference_set(&self, count_parameter: usize) -> Result<Vec<ObjectiveVector>> {
        match self.name {
            ProblemKind::Zdt1 => {
                if count_parameter < 2 {
                    return Err(Error::contract("zdt1 reference set needs at least 2 points"));
                }
                let last = (count_parameter - 1) as f64;
                Ok((0..count_parameter)
                    .map(|i| {
                        let f1 = i as f64 / last;
                        ObjectiveVector(vec![f1, 1.0 - f1.sqrt()])
                    })
                    .collect())
            }
            ProblemKind::Dtlz1 | ProblemKind::Dtlz2 | ProblemKind::Dtlz3 => {
                if count_parameter == 0 {
                    return Err(Error::contract("lattice needs at least one division"));
                }
                let weights = simplex_lattice(self.m, count_parameter);
                Ok(weights
                    .into_iter()
                    .map(|w| match self.name {
                        ProblemKind::Dtlz1 => ObjectiveVector(w.into_iter().map(|x| 0.5 * x).collect()),
                        _ => {
                            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                            ObjectiveVector(w.into_iter().map(|x| x / norm).collect())
                        }
                    })
                    .collect())
            }
        }
    }

    /// The default reference-set parameter: the smallest lattice giving at
    /// least 990 points (`H = 43` for three objectives), or 990 ZDT1 points.
    pub fn default_reference_parameter(&self) -> usize {
        const TARGET: usize = 990;
        match self.name {
            ProblemKind::Zdt1 => TARGET,
            _ => (1..)
                .find(|&h| binomial(h + self.m - 1, self.m - 1) >= TARGET)
                .expect("lattice size grows without bound"),
        }
    }

    pub fn default_reference_set(&self) -> Vec<ObjectiveVector> {
        self.sample_reference_set(self.default_reference_parameter())
            .expect("default parameter is valid")
    }

    /// `size` decision vectors drawn uniformly within the bounds.
    pub fn random_population<R: Rng + ?Sized>(&self, size: usize, rng: &mut R) -> Result<Vec<DecisionVector>> {
        if size == 0 {
            return Err(Error::contract("population size must be at least 1"));
        }
        Ok((0..size)
            .map(|_| {
                DecisionVector(
                    self.bounds
                        .iter()
                        .map(|&(lo, hi)| rng.random_range(lo..=hi))
                        .collect(),
                )
            })
            .collect())
    }
}

fn dtlz2_g(tail: &[f64]) -> f64 {
    tail.iter().map(|x| (x - 0.5).powi(2)).sum()
}

fn rastrigin_g(tail: &[f64]) -> f64 {
    let k = tail.len() as f64;
    let s: f64 = tail
        .iter()
        .map(|x| (x - 0.5).powi(2) - (20.0 * std::f64::consts::PI * (x - 0.5)).cos())
        .sum();
    100.0 * (k + s)
}

fn dtlz1(x: &[f64], m: usize) -> Vec<f64> {
    let g = rastrigin_g(&x[m - 1..]);
    (0..m)
        .map(|i| {
            let mut f = 0.5 * (1.0 + g);
            f *= x[..m - 1 - i].iter().product::<f64>();
            if i > 0 {
                f *= 1.0 - x[m - 1 - i];
            }
            f
        })
        .collect()
}

fn dtlz_sphere(x: &[f64], m: usize, g: f64) -> Vec<f64> {
    (0..m)
        .map(|i| {
            let mut f = 1.0 + g;
            f *= x[..m - 1 - i].iter().map(|v| (v * FRAC_PI_2).cos()).product::<f64>();
            if i > 0 {
                f *= (x[m - 1 - i] * FRAC_PI_2).sin();
            }
            f
        })
        .collect()
}

fn zdt1(x: &[f64]) -> Vec<f64> {
    let f1 = x[0];
    let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
    vec![f1, g * (1.0 - (f1 / g).sqrt())]
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All weight vectors with components in `{0, 1/h, ..., 1}` summing to one,
/// in lexicographically decreasing order of the leading components.
fn simplex_lattice(m: usize, h: usize) -> Vec<Vec<f64>> {
    fn recurse(remaining: usize, slots: usize, h: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.iter().map(|&c| c as f64 / h as f64).collect());
            prefix.pop();
            return;
        }
        for c in (0..=remaining).rev() {
            prefix.push(c);
            recurse(remaining - c, slots - 1, h, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(h + m - 1, m - 1));
    recurse(h, m, h, &mut Vec::with_capacity(m), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn dtlz2_centre_lies_on_the_sphere() {
        let p = ProblemSpec::new(ProblemKind::Dtlz2, 12, 3).unwrap();
        let f = p.evaluate(&DecisionVector(vec![0.5; 12])).unwrap();
        let c = std::f64::consts::FRAC_PI_4.cos();
        let s = std::f64::consts::FRAC_PI_4.sin();
        assert!(close(f[0], c * c) && close(f[0], 0.5));
        assert!(close(f[1], c * s) && close(f[1], 0.5));
        assert!(close(f[2], s) && close(f[2], 0.5f64.sqrt()));
    }

    #[test]
    fn dtlz2_norm_is_one_when_distance_variables_are_centred() {
        let p = ProblemSpec::dtlz2(3);
        for (a, b) in [(0.0, 0.0), (0.1, 0.9), (1.0, 0.3), (0.77, 1.0)] {
            let mut x = vec![0.5; p.n];
            x[0] = a;
            x[1] = b;
            let f = p.evaluate(&DecisionVector(x)).unwrap();
            let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zdt1_origin() {
        let f = ProblemSpec::zdt1().evaluate(&DecisionVector(vec![0.0; 30])).unwrap();
        assert_eq!(f.0, vec![0.0, 1.0]);
    }

    #[test]
    fn dtlz1_and_dtlz3_optimal_distance_variables_give_g_zero() {
        let p1 = ProblemSpec::dtlz1(3);
        let mut x = vec![0.5; p1.n];
        x[0] = 0.2;
        x[1] = 0.7;
        let f = p1.evaluate(&DecisionVector(x)).unwrap();
        assert!((f.iter().sum::<f64>() - 0.5).abs() < 1e-12);

        let p3 = ProblemSpec::new(ProblemKind::Dtlz3, 10, 3).unwrap();
        let mut x = vec![0.5; 10];
        x[0] = 0.3;
        let f = p3.evaluate(&DecisionVector(x)).unwrap();
        assert!((f.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_rejects_out_of_bounds_and_wrong_length() {
        let p = ProblemSpec::dtlz2(3);
        let mut x = vec![0.5; p.n];
        x[3] = 1.5;
        assert!(matches!(p.evaluate(&DecisionVector(x)), Err(Error::Contract(_))));
        assert!(p.evaluate(&DecisionVector(vec![0.5; 3])).is_err());
    }

    #[test]
    fn evaluate_is_bitwise_pure() {
        let p = ProblemSpec::dtlz3(3);
        let x = DecisionVector((0..p.n).map(|i| (i as f64 * 0.37).fract()).collect());
        let a = p.evaluate(&x).unwrap();
        let b = p.evaluate(&x).unwrap();
        assert!(a.iter().zip(b.iter()).all(|(u, v)| u.to_bits() == v.to_bits()));
    }

    #[test]
    fn dtlz1_lattice_h2() {
        let refs = ProblemSpec::dtlz1(3).sample_reference_set(2).unwrap();
        assert_eq!(refs.len(), 6);
        for p in &refs {
            assert!((p.iter().sum::<f64>() - 0.5).abs() < 1e-12);
        }
        assert!(refs.contains(&ObjectiveVector(vec![0.5, 0.0, 0.0])));
        assert!(refs.contains(&ObjectiveVector(vec![0.25, 0.25, 0.0])));
    }

    #[test]
    fn zdt1_three_points() {
        let refs = ProblemSpec::zdt1().sample_reference_set(3).unwrap();
        assert_eq!(refs[0].0, vec![0.0, 1.0]);
        assert_eq!(refs[1].0, vec![0.5, 1.0 - 0.5f64.sqrt()]);
        assert_eq!(refs[2].0, vec![1.0, 0.0]);
    }

    #[test]
    fn reference_points_lie_on_the_fronts() {
        for kind in [ProblemKind::Dtlz1, ProblemKind::Dtlz2, ProblemKind::Dtlz3] {
            for m in 2..=5 {
                let p = ProblemSpec::with_default_n(kind, m).unwrap();
                let refs = p.sample_reference_set(7).unwrap();
                assert_eq!(refs.len(), binomial(7 + m - 1, m - 1));
                for r in refs {
                    let err = match kind {
                        ProblemKind::Dtlz1 => r.iter().sum::<f64>() - 0.5,
                        _ => r.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0,
                    };
                    assert!(err.abs() < 1e-9);
                }
            }
        }
        for r in ProblemSpec::zdt1().sample_reference_set(101).unwrap() {
            assert!((r[1] - (1.0 - r[0].sqrt())).abs() < 1e-9);
        }
    }

    #[test]
    fn default_reference_set_has_990_points_for_three_objectives() {
        let p = ProblemSpec::dtlz2(3);
        assert_eq!(p.default_reference_parameter(), 43);
        assert_eq!(p.default_reference_set().len(), 990);
    }

    #[test]
    fn unsupported_names_are_rejected() {
        assert!(matches!("ddmop2".parse::<ProblemKind>(), Err(Error::UnsupportedProblem(_))));
        assert_eq!("DTLZ3".parse::<ProblemKind>().unwrap(), ProblemKind::Dtlz3);
    }

    #[test]
    fn random_population_is_seeded_and_in_bounds() {
        let p = ProblemSpec::dtlz2(3);
        assert!(p.random_population(0, &mut stream(1, Stream::Initialization)).is_err());
        let one = p.random_population(1, &mut stream(1, Stream::Initialization)).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].iter().all(|v| (0.0..=1.0).contains(v)));
        let a = p.random_population(20, &mut stream(9, Stream::Initialization)).unwrap();
        let b = p.random_population(20, &mut stream(9, Stream::Initialization)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_sampling_mean() {
        let p = ProblemSpec::new(ProblemKind::Zdt1, 2, 2).unwrap();
        let pop = p.random_population(10_000, &mut stream(3, Stream::Initialization)).unwrap();
        let mean = pop.iter().map(|x| x[0]).sum::<f64>() / pop.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
    }
}
