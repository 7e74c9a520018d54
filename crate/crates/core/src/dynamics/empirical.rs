use std::collections::BTreeMap;
use std::marker::PhantomData;
use std::sync::Arc;

use rayon::prelude::*;

use super::systems::{MapSystem, PhasePoint};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::FiniteMetricSpace;

/// A regular grid shared by every empirical measure of an experiment.
#[derive(Debug, Clone)]
pub struct Binning<P> {
    bins: usize,
    space: Arc<FiniteMetricSpace>,
    point: PhantomData<fn(&P)>,
}

impl<P: PhasePoint> Binning<P> {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidRange("bin count must be positive".into()));
        }
        Ok(Self {
            bins,
            space: Arc::new(P::bin_space(bins)?),
            point: PhantomData,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn cell(&self, x: &P) -> usize {
        x.bin(self.bins)
    }
}

/// `(1/n) sum_{i<n} delta_{f^i x}`, with each orbit point moved to its grid cell.
pub fn empirical_measure<S: MapSystem>(system: &S, x: &S::Point, n: usize, grid: &Binning<S::Point>) -> Result<DiscreteMeasure> {
    if n == 0 {
        return Err(Error::InvalidRange("orbit length must be positive".into()));
    }
    let mut visits: BTreeMap<usize, usize> = BTreeMap::new();
    let mut p = x.clone();
    for i in 0..n {
        *visits.entry(grid.cell(&p)).or_default() += 1;
        if i + 1 < n {
            p = system.apply(&p);
        }
    }
    let w = 1.0 / n as f64;
    DiscreteMeasure::normalized(
        grid.space().clone(),
        visits.into_iter().map(|(c, k)| (c, k as f64 * w)),
    )
}

/// Empirical measures of a batch of start points.
#[derive(Debug, Clone)]
pub struct EmpiricalCloud<P> {
    pub starts: Vec<P>,
    pub measures: Vec<DiscreteMeasure>,
    pub n: usize,
    pub bins: usize,
}

impl<P: PhasePoint> EmpiricalCloud<P> {
    pub fn build<S: MapSystem<Point = P>>(system: &S, starts: Vec<P>, n: usize, grid: &Binning<P>) -> Result<Self> {
        let measures = starts
            .par_iter()
            .map(|x| empirical_measure(system, x, n, grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            starts,
            measures,
            n,
            bins: grid.bins(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::systems::{AnnulusPoint, DoublingMap, DoublingPoint, TwistMap};

    #[test]
    fn fixed_point_gives_dirac() {
        let grid = Binning::new(16).unwrap();
        let mu = empirical_measure(&DoublingMap, &DoublingPoint::periodic(0, 1).unwrap(), 50, &grid).unwrap();
        assert_eq!(mu.atoms(), &[(0, 1.0)]);
    }

    #[test]
    fn period_two_orbit() {
        let grid = Binning::new(1024).unwrap();
        let mu = empirical_measure(&DoublingMap, &DoublingPoint::periodic(1, 2).unwrap(), 100, &grid).unwrap();
        assert_eq!(mu.len(), 2);
        assert!(mu.atoms().iter().all(|a| a.1 == 0.5));
    }

    #[test]
    fn orbit_length_bounds_support() {
        let grid = Binning::new(64).unwrap();
        let f = TwistMap::rigid(std::f64::consts::FRAC_1_PI);
        let mu = empirical_measure(&f, &AnnulusPoint::new(0.2, 0.4).unwrap(), 10, &grid).unwrap();
        assert!(mu.len() <= 10);
        assert!((mu.atoms().iter().map(|a| a.1).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
