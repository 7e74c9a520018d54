use std::sync::Arc;

use serde::Serialize;

use super::bounds::{cost_lower_bound, submeasure_bound, Certificate, Direction, Rule, Step};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::{greedy_separated_set, FiniteMetricSpace};

#[derive(Debug, Clone, Serialize)]
pub struct FatLayer {
    pub index: u32,
    /// `eps_i = 2^(-i^2)`.
    pub scale: f64,
    /// Greedy maximal `4 eps_i`-separated set.
    pub points: Vec<usize>,
    pub weight: f64,
    #[serde(skip)]
    pub measure: DiscreteMeasure,
}

#[derive(Debug, Clone, Serialize)]
pub struct FatMeasure {
    #[serde(skip)]
    pub measure: DiscreteMeasure,
    pub layers: Vec<FatLayer>,
    /// One bound per layer, at scale `2^(-i) eps_i`.
    pub bounds: Vec<Certificate>,
}

fn layer_scale(i: u32) -> f64 {
    2f64.powi(-((i * i) as i32))
}

/// `Q_{mu_i}(eps_i) >= ceil(n_i / 2)` for `mu_i` uniform on a `4 eps_i`-separated set.
fn layer_certificate(n: usize, eps: f64) -> Certificate {
    let m = n.div_ceil(2);
    if m <= 1 {
        return Certificate::trivial(eps);
    }
    let excluded = m - 1;
    let cost = cost_lower_bound(n, excluded, 4.0 * eps).expect("1 <= m < n");
    Certificate {
        direction: Direction::Lower,
        scale: eps,
        bound: m as u64,
        chain: vec![Step {
            rule: Rule::CostLemma,
            detail: format!("uniform on {n} points pairwise > {}: {excluded} points leave W1 >= {cost} > {eps}", 4.0 * eps),
        }],
    }
}

/// Layered measure `sum 2^(-i) mu_i` whose quantization numbers grow at every
/// available scale, together with its certified lower bounds.
pub fn fat_measure_build(space: Arc<FiniteMetricSpace>, depth: u32) -> Result<FatMeasure> {
    if depth == 0 {
        return Err(Error::InvalidRange("depth must be at least 1".into()));
    }
    let min_sep = space.min_separation();
    let available = (1..=depth).take_while(|&i| 4.0 * layer_scale(i) >= min_sep).count() as u32;
    if available < depth {
        return Err(Error::DepthExhausted {
            requested: depth as usize,
            available: available as usize,
        });
    }

    let mut layers = Vec::with_capacity(depth as usize);
    for i in 1..=depth {
        let scale = layer_scale(i);
        let points = greedy_separated_set(&space, 4.0 * scale);
        let measure = DiscreteMeasure::uniform(space.clone(), &points)?;
        let weight = if i == depth { 2f64.powi(-(i as i32) + 1) } else { 2f64.powi(-(i as i32)) };
        layers.push(FatLayer {
            index: i,
            scale,
            points,
            weight,
            measure,
        });
    }
    let parts: Vec<(f64, &DiscreteMeasure)> = layers.iter().map(|l| (l.weight, &l.measure)).collect();
    let measure = DiscreteMeasure::mixture(&parts)?;

    let bounds = layers
        .iter()
        .map(|l| {
            let inner = layer_certificate(l.points.len(), l.scale);
            submeasure_bound(&measure, &l.measure, 2f64.powi(-(l.index as i32)), &inner)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FatMeasure { measure, layers, bounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_depth_one() {
        let s = Arc::new(FiniteMetricSpace::line(&[0.0, 1.0]).unwrap());
        let fat = fat_measure_build(s, 1).unwrap();
        assert_eq!(fat.layers[0].points.len(), 1);
        assert_eq!(fat.bounds[0].bound, 1);
        assert_eq!(fat.bounds[0].scale, 0.25);
        assert_eq!(fat.measure.len(), 1);
    }

    #[test]
    fn depth_beyond_resolution() {
        let s = Arc::new(FiniteMetricSpace::line(&[0.0, 0.01]).unwrap());
        assert!(matches!(
            fat_measure_build(s, 3),
            Err(Error::DepthExhausted { requested: 3, available: 2 })
        ));
    }

    #[test]
    fn layers_are_separated_and_weighted() {
        let xs: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
        let s = Arc::new(FiniteMetricSpace::line(&xs).unwrap());
        let fat = fat_measure_build(s.clone(), 2).unwrap();
        let l = &fat.layers[1];
        for (a, &x) in l.points.iter().enumerate() {
            for &y in &l.points[a + 1..] {
                assert!(s.dist(x, y) > 4.0 * l.scale);
            }
        }
        assert_eq!(fat.bounds[1].bound as usize, l.points.len().div_ceil(2));
        let total: f64 = fat.layers.iter().map(|l| l.weight).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }
}
