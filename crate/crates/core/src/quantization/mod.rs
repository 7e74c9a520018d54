//! Quantization numbers of discrete measures.
//!
//! `Q_mu(eps)` is the least size of a set `F` with `∫ d(x, F)^q dmu <= eps^q`
//! (Wasserstein mode), or the least number of closed `eps`-balls carrying mass at
//! least `1 - eps` (Lévy–Prokhorov mode).

mod bounds;
mod fat;
mod lebesgue;
mod medoids;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::{metric_order_estimate, ExponentFit};
use crate::transport::MeasureMetric;

pub use bounds::{
    continuity_bound, cost_lemma_certificate, cost_lower_bound, lipschitz_pushforward_bound,
    separated_cells_bound, submeasure_bound, uniform_separated_bound, Certificate, Direction, Rule, Step,
};
pub use fat::{fat_measure_build, FatLayer, FatMeasure};
pub use lebesgue::{lebesgue_1d_quantization, optimal_1d_quantizer, Quantizer1d};

/// Support size accepted by the exhaustive search.
pub const EXACT_SUPPORT_LIMIT: usize = 16;
/// Candidate-set size accepted by the exhaustive search.
pub const EXACT_CANDIDATE_LIMIT: usize = 20;

const COST_TOL: f64 = 1e-12;

/// Where the centres of the upper bound were searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterRegime {
    /// Exhaustive over the whole ambient space: `upper` is the quantization number.
    Exact,
    /// Exhaustive over the support only.
    SupportExhaustive,
    /// Alternating refinement over the support.
    Heuristic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantizationResult {
    pub epsilon: f64,
    pub metric: MeasureMetric,
    pub upper: usize,
    pub lower: usize,
    /// Centres of the upper bound with the mass assigned to each.
    pub witness: Vec<(usize, f64)>,
    /// Cost of the witness: `∫ d(x, F)^q dmu` or the uncovered mass.
    pub witness_cost: f64,
    pub regime: CenterRegime,
    pub certificate: Certificate,
}

/// Cost target `eps^q` (Wasserstein) or the uncovered-mass allowance `eps` (LP).
fn budget(metric: MeasureMetric, eps: f64) -> f64 {
    match metric {
        MeasureMetric::Wasserstein { p } => eps.powf(p),
        MeasureMetric::LevyProkhorov => eps,
    }
}

#[inline]
pub(crate) fn within(cost: f64, budget: f64) -> bool {
    cost <= budget * (1.0 + COST_TOL) + f64::MIN_POSITIVE
}

/// Cost of a centre set and the mass assigned to each centre.
pub fn evaluate_centers(mu: &DiscreteMeasure, centers: &[usize], metric: MeasureMetric, eps: f64) -> (f64, Vec<(usize, f64)>) {
    let space = mu.space();
    let mut assigned = vec![0.0; centers.len()];
    let mut cost = 0.0;
    for &(x, w) in mu.atoms() {
        let (k, d) = centers
            .iter()
            .enumerate()
            .map(|(k, &c)| (k, space.dist(x, c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty centre set");
        assigned[k] += w;
        cost += match metric {
            MeasureMetric::Wasserstein { p } => w * d.powf(p),
            MeasureMetric::LevyProkhorov => {
                if d <= eps {
                    0.0
                } else {
                    w
                }
            }
        };
    }
    (cost, centers.iter().copied().zip(assigned).collect())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::InvalidRange(format!("epsilon must be positive, got {eps}")));
    }
    Ok(())
}

/// Exhaustive search in increasing cardinality; returns the size and the centres.
fn exhaustive(mu: &DiscreteMeasure, eps: f64, metric: MeasureMetric, candidates: &[usize]) -> Result<Vec<usize>> {
    if mu.len() > EXACT_SUPPORT_LIMIT {
        return Err(Error::TooLarge {
            what: "support",
            got: mu.len(),
            limit: EXACT_SUPPORT_LIMIT,
        });
    }
    if candidates.len() > EXACT_CANDIDATE_LIMIT {
        return Err(Error::TooLarge {
            what: "candidate set",
            got: candidates.len(),
            limit: EXACT_CANDIDATE_LIMIT,
        });
    }
    let space = mu.space();
    let target = budget(metric, eps);
    // per-candidate contribution of each atom
    let table: Vec<Vec<f64>> = candidates
        .iter()
        .map(|&c| {
            mu.atoms()
                .iter()
                .map(|&(x, w)| {
                    let d = space.dist(x, c);
                    match metric {
                        MeasureMetric::Wasserstein { p } => w * d.powf(p),
                        MeasureMetric::LevyProkhorov => {
                            if d <= eps {
                                0.0
                            } else {
                                w
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();
    let atoms = mu.len();
    for k in 1..=candidates.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let cost: f64 = (0..atoms)
                .map(|a| idx.iter().map(|&c| table[c][a]).fold(f64::INFINITY, f64::min))
                .sum();
            if within(cost, target) {
                return Ok(idx.iter().map(|&c| candidates[c]).collect());
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    Err(Error::InvalidInput("no candidate set reaches the cost target".into()))
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact `Q_mu(eps)` under `W_q` by exhaustive search over subsets of `candidates`
/// (default: the support).
pub fn quantization_exact(mu: &DiscreteMeasure, eps: f64, q: f64, candidates: Option<&[usize]>) -> Result<usize> {
    check_eps(eps)?;
    let support: Vec<usize> = mu.support().collect();
    let cands = candidates.unwrap_or(&support);
    Ok(exhaustive(mu, eps, MeasureMetric::Wasserstein { p: q }, cands)?.len())
}

/// Exact Lévy–Prokhorov quantization number: least number of closed `eps`-balls
/// centred at `candidates` carrying mass at least `1 - eps`.
pub fn quantization_exact_lp(mu: &DiscreteMeasure, eps: f64, candidates: Option<&[usize]>) -> Result<usize> {
    check_eps(eps)?;
    let support: Vec<usize> = mu.support().collect();
    let cands = candidates.unwrap_or(&support);
    Ok(exhaustive(mu, eps, MeasureMetric::LevyProkhorov, cands)?.len())
}

/// Best certified lower bound available without search.
pub fn analytic_lower_bound(mu: &DiscreteMeasure, eps: f64, metric: MeasureMetric) -> Certificate {
    let mut best = Certificate::trivial(eps);
    let mut consider = |c: Option<Certificate>| {
        if let Some(c) = c {
            if c.bound > best.bound {
                best = c;
            }
        }
    };
    match metric {
        MeasureMetric::Wasserstein { p } => {
            // W_q >= W_1, so a W_1 lower bound carries over
            consider(uniform_separated_bound(mu, eps));
            consider(separated_cells_bound(mu, eps, p));
        }
        MeasureMetric::LevyProkhorov => {}
    }
    best
}

/// Upper bound by search with a verified witness, lower bound from the analytic bounds.
///
/// Small supports are searched exhaustively; on a small ambient space the search runs
/// over every point and the result is exact. Deterministic given `seed`.
pub fn quantization_heuristic(mu: &DiscreteMeasure, eps: f64, metric: MeasureMetric, seed: u64) -> Result<QuantizationResult> {
    check_eps(eps)?;
    let space = mu.space();
    let target = budget(metric, eps);
    let mut certificate = analytic_lower_bound(mu, eps, metric);
    let (centers, regime) = if mu.len() <= EXACT_SUPPORT_LIMIT && space.len() <= EXACT_CANDIDATE_LIMIT {
        let all: Vec<usize> = (0..space.len()).collect();
        let c = exhaustive(mu, eps, metric, &all)?;
        certificate = Certificate {
            direction: Direction::Lower,
            scale: eps,
            bound: c.len() as u64,
            chain: vec![Step {
                rule: Rule::Exhaustive,
                detail: format!("every subset of the {}-point space searched", space.len()),
            }],
        };
        (c, CenterRegime::Exact)
    } else if mu.len() <= EXACT_SUPPORT_LIMIT {
        let support: Vec<usize> = mu.support().collect();
        (exhaustive(mu, eps, metric, &support)?, CenterRegime::SupportExhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = certificate.bound as usize;
        let c = match metric {
            MeasureMetric::Wasserstein { p } => medoids::search(mu, p, target, start, &mut rng),
            MeasureMetric::LevyProkhorov => medoids::greedy_ball_cover(mu, eps),
        };
        (c, CenterRegime::Heuristic)
    };
    let (cost, witness) = evaluate_centers(mu, &centers, metric, eps);
    debug_assert!(within(cost, target));
    let lower = (certificate.bound as usize).min(centers.len());
    Ok(QuantizationResult {
        epsilon: eps,
        metric,
        upper: centers.len(),
        lower,
        witness,
        witness_cost: cost,
        regime,
        certificate,
    })
}

/// Metric-order fit of `log log Q` against `-log eps`, using the upper bounds.
pub fn quantization_order_estimate(results: &[QuantizationResult]) -> Result<ExponentFit> {
    let counts: Vec<(f64, f64)> = results.iter().map(|r| (r.epsilon, r.upper as f64)).collect();
    metric_order_estimate(&counts)
}

/// Writes `epsilon,lower,upper,q` rows.
pub fn write_q_table<W: std::io::Write>(out: W, results: &[QuantizationResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epsilon", "lower", "upper", "q"])?;
    for r in results {
        let q = match r.metric {
            MeasureMetric::Wasserstein { p } => p.to_string(),
            MeasureMetric::LevyProkhorov => "lp".to_string(),
        };
        w.write_record([r.epsilon.to_string(), r.lower.to_string(), r.upper.to_string(), q])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::metric::FiniteMetricSpace;

    fn line(xs: &[f64]) -> Arc<FiniteMetricSpace> {
        Arc::new(FiniteMetricSpace::line(xs).unwrap())
    }

    #[test]
    fn dirac_needs_one() {
        let mu = DiscreteMeasure::dirac(line(&[0.0, 1.0]), 1).unwrap();
        assert_eq!(quantization_exact(&mu, 1e-6, 1.0, None).unwrap(), 1);
        let r = quantization_heuristic(&mu, 1e-6, MeasureMetric::W1, 0).unwrap();
        assert_eq!((r.lower, r.upper), (1, 1));
    }

    #[test]
    fn separated_four_points() {
        let mu = DiscreteMeasure::uniform_on_space(line(&[0.0, 0.4, 0.8, 1.2]));
        assert_eq!(quantization_exact(&mu, 0.01, 1.0, None).unwrap(), 4);
    }

    #[test]
    fn endpoints_at_half() {
        let mu = DiscreteMeasure::uniform_on_space(line(&[0.0, 1.0]));
        assert_eq!(quantization_exact(&mu, 0.5, 1.0, None).unwrap(), 1);
        assert_eq!(quantization_exact(&mu, 0.49, 1.0, None).unwrap(), 2);
    }

    #[test]
    fn lp_mode_covers_mass() {
        let s = line(&[0.0, 0.05, 1.0]);
        let mu = DiscreteMeasure::new(s, [(0, 0.45), (1, 0.45), (2, 0.1)]).unwrap();
        assert_eq!(quantization_exact_lp(&mu, 0.1, None).unwrap(), 1);
        assert_eq!(quantization_exact_lp(&mu, 0.04, None).unwrap(), 3);
    }

    #[test]
    fn heuristic_matches_exhaustive_on_small_spaces() {
        let xs: Vec<f64> = (0..12).map(|i| (i as f64 * 0.37).fract()).collect();
        let mu = DiscreteMeasure::uniform_on_space(line(&xs));
        for eps in [0.02, 0.05, 0.1, 0.2] {
            let exact = quantization_exact(&mu, eps, 1.0, None).unwrap();
            let r = quantization_heuristic(&mu, eps, MeasureMetric::W1, 1).unwrap();
            assert_eq!((r.lower, r.upper), (exact, exact));
        }
    }

    #[test]
    fn q_table_header() {
        let mu = DiscreteMeasure::uniform_on_space(line(&[0.0, 1.0]));
        let r = quantization_heuristic(&mu, 0.5, MeasureMetric::W1, 0).unwrap();
        let mut buf = Vec::new();
        write_q_table(&mut buf, &[r]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "epsilon,lower,upper,q\n0.5,1,1,1\n");
    }
}
