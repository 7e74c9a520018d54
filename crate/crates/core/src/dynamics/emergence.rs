use std::sync::Arc;

use serde::Serialize;

use super::empirical::{Binning, EmpiricalCloud};
use super::sampling::StartSampler;
use super::systems::{MapSystem, PhasePoint, SystemDescriptor};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::FiniteMetricSpace;
use crate::quantization::{lebesgue_1d_quantization, quantization_heuristic, CenterRegime, Certificate};
use crate::transport::{pairwise_distances, MeasureMetric};

/// Sampled empirical measures and their pairwise distances, reused across scales.
///
/// The sampled measures, each of mass `1/K`, stand in for the ergodic decomposition
/// of the reference measure; metric emergence at `eps` is estimated as the
/// quantization number of that meta-measure.
#[derive(Debug, Clone)]
pub struct EmergenceExperiment<P> {
    pub system: SystemDescriptor,
    pub sampler: String,
    pub seed: u64,
    pub metric: MeasureMetric,
    pub cloud: EmpiricalCloud<P>,
    pub distances: Vec<Vec<f64>>,
    meta: DiscreteMeasure,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmergenceEstimate {
    pub epsilon: f64,
    pub n: usize,
    pub sample_count: usize,
    pub bins: usize,
    pub seed: u64,
    pub metric: MeasureMetric,
    pub upper: usize,
    pub lower: usize,
    /// Sample indices of the witness measures with the share of samples each serves.
    pub witness: Vec<(usize, f64)>,
    /// Sample mean of `min_i d(e_n(x), mu_i)` and its standard error.
    pub mean_min_distance: f64,
    pub std_error: f64,
    pub regime: CenterRegime,
    pub certificate: Certificate,
}

impl<P: PhasePoint> EmergenceExperiment<P> {
    #[allow(clippy::too_many_arguments)]
    pub fn run<S, Z>(
        system: &S,
        sampler: &Z,
        samples: usize,
        n: usize,
        bins: usize,
        metric: MeasureMetric,
        seed: u64,
    ) -> Result<Self>
    where
        S: MapSystem<Point = P>,
        Z: StartSampler<P>,
    {
        if samples < 2 {
            return Err(Error::InvalidRange(format!("need at least 2 samples, got {samples}")));
        }
        let grid = Binning::new(bins)?;
        let starts = sampler.sample(samples, seed)?;
        let cloud = EmpiricalCloud::build(system, starts, n, &grid)?;
        let distances = pairwise_distances(&cloud.measures, metric)?;
        let meta_space = Arc::new(FiniteMetricSpace::from_matrix_unchecked(distances.clone())?);
        let meta = DiscreteMeasure::uniform_on_space(meta_space);
        Ok(Self {
            system: system.descriptor(),
            sampler: sampler.describe(),
            seed,
            metric,
            cloud,
            distances,
            meta,
        })
    }

    /// Uniform measure on the sampled empirical measures.
    pub fn meta_measure(&self) -> &DiscreteMeasure {
        &self.meta
    }

    pub fn estimate(&self, eps: f64) -> Result<EmergenceEstimate> {
        let q = quantization_heuristic(&self.meta, eps, self.metric, self.seed)?;
        let centres: Vec<usize> = q.witness.iter().map(|w| w.0).collect();
        let integrand: Vec<f64> = self
            .distances
            .iter()
            .map(|row| centres.iter().map(|&c| row[c]).fold(f64::INFINITY, f64::min))
            .collect();
        let k = integrand.len() as f64;
        let mean = integrand.iter().sum::<f64>() / k;
        let var = integrand.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        Ok(EmergenceEstimate {
            epsilon: eps,
            n: self.cloud.n,
            sample_count: self.cloud.measures.len(),
            bins: self.cloud.bins,
            seed: self.seed,
            metric: self.metric,
            upper: q.upper,
            lower: q.lower,
            witness: q.witness,
            mean_min_distance: mean,
            std_error: (var / k).sqrt(),
            regime: q.regime,
            certificate: q.certificate,
        })
    }
}

/// One-shot estimate of metric emergence at a single scale.
#[allow(clippy::too_many_arguments)]
pub fn metric_emergence_estimate<S, Z>(
    system: &S,
    sampler: &Z,
    samples: usize,
    eps: f64,
    n: usize,
    bins: usize,
    metric: MeasureMetric,
    seed: u64,
) -> Result<EmergenceEstimate>
where
    S: MapSystem,
    Z: StartSampler<S::Point>,
{
    EmergenceExperiment::run(system, sampler, samples, n, bins, metric, seed)?.estimate(eps)
}

/// `ceil(1 / (4 eps))`, the metric emergence of a twist map with respect to Lebesgue.
pub fn horizontal_emergence_exact(eps: f64) -> Result<u64> {
    lebesgue_1d_quantization(eps, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::sampling::{AnnulusLebesgue, InvariantCircle};
    use crate::dynamics::systems::{Omega, TwistMap};

    #[test]
    fn closed_form() {
        assert_eq!(horizontal_emergence_exact(0.05).unwrap(), 5);
        assert_eq!(horizontal_emergence_exact(0.25).unwrap(), 1);
        assert_eq!(horizontal_emergence_exact(0.1).unwrap(), 3);
    }

    #[test]
    fn rigid_rotation_on_one_circle_needs_one_measure() {
        let f = TwistMap::rigid(0.381_966_011_250_105_1);
        let exp = EmergenceExperiment::run(&f, &InvariantCircle { rho: 0.5 }, 30, 2000, 32, MeasureMetric::W1, 3).unwrap();
        for eps in [0.05, 0.1, 0.2] {
            let e = exp.estimate(eps).unwrap();
            assert_eq!((e.lower, e.upper), (1, 1));
        }
    }

    #[test]
    fn small_twist_brackets() {
        let f = TwistMap::new(Omega::Affine { a: 0.1, b: 1.0 }, 1.0).unwrap();
        let exp = EmergenceExperiment::run(&f, &AnnulusLebesgue, 60, 3000, 32, MeasureMetric::W1, 5).unwrap();
        let e = exp.estimate(0.2).unwrap();
        assert!(e.lower <= e.upper);
        assert!(e.upper.abs_diff(2) <= 1, "{}", e.upper);
        assert!(e.mean_min_distance <= 0.2 + 1e-9);
    }
}
