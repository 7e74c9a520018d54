use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::FiniteMetricSpace;
use crate::transport::MeasureMetric;

pub const MAX_PERIOD: u32 = 20;

/// A periodic orbit of the doubling map: the points `2^j k / (2^p - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub period: u32,
    /// Smallest numerator among the orbit's rotations.
    pub word: u64,
    /// Indices into the shared circle space.
    pub points: Vec<usize>,
}

/// Uniform measures on all periodic orbits of the doubling map up to some period.
#[derive(Debug, Clone)]
pub struct PeriodicFamily {
    pub space: Arc<FiniteMetricSpace>,
    pub orbits: Vec<PeriodicOrbit>,
    pub measures: Vec<DiscreteMeasure>,
}

fn rotate(k: u64, p: u32) -> u64 {
    let mask = (1u64 << p) - 1;
    (k << 1 | k >> (p - 1)) & mask
}

pub fn doubling_periodic_measures(max_period: u32) -> Result<PeriodicFamily> {
    if max_period > MAX_PERIOD {
        return Err(Error::TooLarge {
            what: "period",
            got: max_period as usize,
            limit: MAX_PERIOD as usize,
        });
    }
    if max_period == 0 {
        return Err(Error::InvalidRange("period must be at least 1".into()));
    }
    let mut coords = Vec::new();
    let mut orbits = Vec::new();
    for p in 1..=max_period {
        let denom = ((1u64 << p) - 1) as f64;
        for k in 0..(1u64 << p) - 1 {
            // keep k when it is the least rotation and no shorter shift fixes it
            let rotations: Vec<u64> = std::iter::successors(Some(k), |&r| Some(rotate(r, p)))
                .take(p as usize)
                .collect();
            let primitive = rotations[1..].iter().all(|&r| r != k);
            if !primitive || rotations.iter().any(|&r| r < k) {
                continue;
            }
            let start = coords.len();
            coords.extend(rotations.iter().map(|&r| r as f64 / denom));
            orbits.push(PeriodicOrbit {
                period: p,
                word: k,
                points: (start..coords.len()).collect(),
            });
        }
    }
    let space = Arc::new(FiniteMetricSpace::circle(coords)?);
    let measures = orbits
        .iter()
        .map(|o| DiscreteMeasure::uniform(space.clone(), &o.points))
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodicFamily { space, orbits, measures })
}

/// Order in which the greedy packing visits the measures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingOrder {
    /// List order.
    #[default]
    Scan,
    /// Repeatedly the measure with fewest remaining conflicts.
    MinDegree,
}

#[derive(Debug, Clone, Serialize)]
pub struct Packing {
    pub epsilon: f64,
    pub count: usize,
    pub chosen: Vec<usize>,
}

/// Greedy subset of `measures` pairwise more than `2 eps` apart in `W_1`; a lower
/// bound for the topological emergence at `eps` restricted to the family.
pub fn topological_emergence_packing(measures: &[DiscreteMeasure], eps: f64, order: PackingOrder) -> Result<Packing> {
    if !(eps > 0.0) {
        return Err(Error::InvalidRange(format!("epsilon must be positive, got {eps}")));
    }
    let far = |a: &DiscreteMeasure, b: &DiscreteMeasure| -> Result<bool> { Ok(MeasureMetric::W1.distance(a, b)? > 2.0 * eps) };
    let chosen = match order {
        PackingOrder::Scan => {
            let mut chosen: Vec<usize> = Vec::new();
            for (i, m) in measures.iter().enumerate() {
                let mut ok = true;
                for &c in &chosen {
                    if !far(m, &measures[c])? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    chosen.push(i);
                }
            }
            chosen
        }
        PackingOrder::MinDegree => {
            let n = measures.len();
            let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); n];
            for i in 0..n {
                for j in i + 1..n {
                    if !far(&measures[i], &measures[j])? {
                        conflicts[i].push(j);
                        conflicts[j].push(i);
                    }
                }
            }
            let mut alive = vec![true; n];
            let mut degree: Vec<usize> = conflicts.iter().map(Vec::len).collect();
            let mut chosen = Vec::new();
            while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
                chosen.push(v);
                alive[v] = false;
                for &u in &conflicts[v] {
                    if alive[u] {
                        alive[u] = false;
                        for &w in &conflicts[u] {
                            degree[w] = degree[w].saturating_sub(1);
                        }
                    }
                }
            }
            chosen.sort_unstable();
            chosen
        }
    };
    Ok(Packing {
        epsilon: eps,
        count: chosen.len(),
        chosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_counts() {
        let fam = doubling_periodic_measures(4).unwrap();
        let per: Vec<usize> = (1..=4).map(|p| fam.orbits.iter().filter(|o| o.period == p).count()).collect();
        assert_eq!(per, vec![1, 1, 2, 3]);
        assert_eq!(fam.orbits.len(), 7);
        assert_eq!(fam.measures[0].atoms(), &[(0, 1.0)]);
        let two: Vec<f64> = fam.orbits[1].points.iter().map(|&i| fam.space.coords(i)[0]).collect();
        assert!((two[0] - 1.0 / 3.0).abs() < 1e-15 && (two[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!(doubling_periodic_measures(21).is_err());
    }

    #[test]
    fn packing_small_family() {
        let fam = doubling_periodic_measures(2).unwrap();
        for order in [PackingOrder::Scan, PackingOrder::MinDegree] {
            assert_eq!(topological_emergence_packing(&fam.measures, 0.1, order).unwrap().count, 2);
            assert_eq!(topological_emergence_packing(&fam.measures[..1], 0.1, order).unwrap().count, 1);
        }
    }
}
