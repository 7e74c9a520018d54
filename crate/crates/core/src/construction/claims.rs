use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::coloring::ColoredBoxFamilies;
use super::params::ConstructionParams;
use super::pushforward::{circle_w1, pushforward_circle, PushforwardCircle};
use super::{ratio, ratio_string};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::FiniteMetricSpace;
use crate::quantization::{quantization_heuristic, Certificate, Direction, Rule, Step};
use crate::transport::MeasureMetric;

pub const DEFAULT_ROW_BUDGET: usize = 120;
/// Largest row count for which the refutation search runs.
pub const REFUTATION_ROWS: usize = 120;

/// Upper bound on `W_1` between circles in one row.
pub fn together_bound(p: &ConstructionParams) -> BigRational {
    p.box_height() + &p.eta * ratio(2, 1)
}

/// Lower bound on `W_1` between circles in different rows.
pub fn apart_bound(p: &ConstructionParams) -> BigRational {
    (ratio(1, 1) - &p.eta * ratio(3, 1)) / ratio(80 * p.n as i64, 1)
}

/// `eps` with `11 eps = (1 - 3 eta)/(320 n) - 1/(11 M) - 2 eta`.
pub fn construction_epsilon(p: &ConstructionParams) -> BigRational {
    (apart_bound(p) / ratio(4, 1) - together_bound(p)) / ratio(11, 1)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairDistance {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub rows_checked: Vec<usize>,
    /// Every row took part.
    pub exhaustive: bool,
    #[serde(serialize_with = "ratio_string")]
    pub together_bound: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub apart_bound: BigRational,
    /// Largest same-row distance and its row.
    pub together_max: PairDistance,
    /// Smallest cross-row distance and its rows.
    pub apart_min: Option<PairDistance>,
    pub together_slack: f64,
    pub apart_slack: Option<f64>,
    pub together_violations: usize,
    pub apart_violations: usize,
    pub holds: bool,
    /// Distances between the midpoint circles of `rows_checked`.
    #[serde(skip)]
    pub midpoint_distances: Vec<Vec<f64>>,
}

impl ClaimReport {
    pub fn ensure(&self) -> Result<()> {
        if self.together_violations > 0 {
            let t = self.together_max;
            return Err(Error::ClaimViolated {
                claim: "together",
                i: t.i,
                j: t.j,
                detail: format!("W1 = {} > {}", t.distance, self.together_bound),
            });
        }
        if let Some(a) = self.apart_min.filter(|_| self.apart_violations > 0) {
            return Err(Error::ClaimViolated {
                claim: "apart",
                i: a.i,
                j: a.j,
                detail: format!(
                    "W1 = {} < {} ({} violating pairs)",
                    a.distance, self.apart_bound, self.apart_violations
                ),
            });
        }
        Ok(())
    }
}

fn rows_to_check(colored: &ColoredBoxFamilies, budget: usize, seed: u64) -> Vec<usize> {
    let m = colored.rows();
    if m <= budget {
        return (0..m).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = colored.closest_rows;
    let mut rows: Vec<usize> = vec![a, b];
    rows.extend(sample(&mut rng, m, budget).into_iter().filter(|&r| r != a && r != b));
    rows.truncate(budget.max(2));
    rows.sort_unstable();
    rows
}

/// Exact `W_1` checks of both claims on circles at the midpoint and the quarter point
/// of each checked row. Rows are sampled when there are more than `budget`, always
/// keeping the pair of rows with the fewest colour differences.
pub fn verify_claims(colored: &ColoredBoxFamilies, budget: usize, seed: u64) -> Result<ClaimReport> {
    let p = &colored.families.params;
    let rows = rows_to_check(colored, budget, seed);
    let circle = |row: usize, t: BigRational| pushforward_circle(colored, &colored.families.row_height(row, &t));
    let mids: Vec<PushforwardCircle> = rows.iter().map(|&r| circle(r, ratio(1, 2))).collect::<Result<_>>()?;
    let quarters: Vec<PushforwardCircle> = rows.iter().map(|&r| circle(r, ratio(1, 4))).collect::<Result<_>>()?;

    let together_exact = together_bound(p);
    let apart_exact = apart_bound(p);
    let together = together_exact.to_f64().unwrap_or(f64::NAN);
    let apart = apart_exact.to_f64().unwrap_or(f64::NAN);

    let same: Vec<f64> = mids
        .par_iter()
        .zip(&quarters)
        .map(|(a, b)| circle_w1(a, b))
        .collect::<Result<_>>()?;
    let k = rows.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let cross: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| circle_w1(&mids[a], &mids[b]))
        .collect::<Result<_>>()?;

    let (worst_row, &worst_same) = same
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("at least one row");
    let together_max = PairDistance {
        i: rows[worst_row],
        j: rows[worst_row],
        distance: worst_same,
    };
    let apart_min = cross
        .iter()
        .zip(&pairs)
        .min_by(|x, y| x.0.total_cmp(y.0))
        .map(|(&d, &(a, b))| PairDistance {
            i: rows[a],
            j: rows[b],
            distance: d,
        });
    let together_violations = same.iter().filter(|&&d| !(d < together)).count();
    let apart_violations = cross.iter().filter(|&&d| !(d > apart)).count();

    let mut midpoint_distances = vec![vec![0.0; k]; k];
    for (&d, &(a, b)) in cross.iter().zip(&pairs) {
        midpoint_distances[a][b] = d;
        midpoint_distances[b][a] = d;
    }
    Ok(ClaimReport {
        exhaustive: k == colored.rows(),
        rows_checked: rows,
        together_slack: together - worst_same,
        apart_slack: apart_min.map(|a| a.distance - apart),
        together_bound: together_exact,
        apart_bound: apart_exact,
        together_max,
        apart_min,
        together_violations,
        apart_violations,
        holds: together_violations == 0 && apart_violations == 0,
        midpoint_distances,
    })
}

/// Outcome of the search for fewer centres than the certified bound.
#[derive(Debug, Clone, Serialize)]
pub struct RefutationCheck {
    /// Centres found by the search on the uniform measure over the checked circles.
    pub centers_found: usize,
    pub scale: f64,
    /// The search did not beat the certified bound.
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmergenceBound {
    #[serde(serialize_with = "ratio_string")]
    pub epsilon: BigRational,
    pub epsilon_f64: f64,
    pub bound: u64,
    pub certificate: Certificate,
    pub refutation: Option<RefutationCheck>,
}

/// `Q(eps) >= ceil(M/2)` for the decomposition of Lebesgue measure under the
/// conjugated flow, with `eps` exact.
pub fn emergence_lower_bound(colored: &ColoredBoxFamilies, claims: &ClaimReport, seed: u64) -> Result<EmergenceBound> {
    let p = &colored.families.params;
    let eps = construction_epsilon(p);
    if !eps.is_positive() {
        return Err(Error::NotCertified(format!(
            "11 eps = (1 - 3 eta)/(320 n) - 1/(11 M) - 2 eta = {} is not positive at n = {}, M = {}",
            eps.clone() * ratio(11, 1),
            p.n,
            p.rows
        )));
    }
    if let Err(e) = claims.ensure() {
        return Err(Error::NotCertified(format!("claims fail: {e}")));
    }
    let m = p.rows;
    let bound = m.div_ceil(2);
    let eps_f = eps.to_f64().unwrap_or(f64::NAN);
    let sep = claims.apart_bound.to_f64().unwrap_or(f64::NAN);
    let scope = if claims.exhaustive {
        "all".to_string()
    } else {
        format!("{} sampled", claims.rows_checked.len())
    };
    let chain = vec![
        Step {
            rule: Rule::ApartClaim,
            detail: format!(
                "circles in distinct rows are >= {sep} apart ({scope} rows checked, smallest {})",
                claims.apart_min.map_or(f64::NAN, |a| a.distance)
            ),
        },
        Step {
            rule: Rule::CostLemma,
            detail: format!(
                "uniform measure on one circle per row, {m} points {sep}-separated: every measure on {bound} points is more than {} away",
                sep / 4.0
            ),
        },
        Step {
            rule: Rule::TogetherClaim,
            detail: format!(
                "each row's circles lie within {} of its representative: Q({}) >= {bound} for the rows' decomposition",
                claims.together_bound,
                11.0 * eps_f
            ),
        },
        Step {
            rule: Rule::Submeasure,
            detail: format!("rows carry mass 1/11 of the full decomposition: Q({eps_f}) >= {bound}"),
        },
    ];
    let refutation = (claims.exhaustive && m as usize <= REFUTATION_ROWS)
        .then(|| refute(&claims.midpoint_distances, 11.0 * eps_f, seed))
        .transpose()?;
    if let Some(r) = refutation.as_ref().filter(|r| !r.consistent) {
        return Err(Error::NotCertified(format!(
            "{} centres reach scale {} on the sampled circles",
            r.centers_found, r.scale
        )));
    }
    Ok(EmergenceBound {
        epsilon_f64: eps_f,
        epsilon: eps,
        bound,
        certificate: Certificate {
            direction: Direction::Lower,
            scale: eps_f,
            bound,
            chain,
        },
        refutation,
    })
}

fn refute(distances: &[Vec<f64>], scale: f64, seed: u64) -> Result<RefutationCheck> {
    let space = Arc::new(FiniteMetricSpace::from_matrix_unchecked(distances.to_vec())?);
    let nu = DiscreteMeasure::uniform_on_space(space);
    let bound = distances.len().div_ceil(2);
    let found = quantization_heuristic(&nu, scale, MeasureMetric::Wasserstein { p: 1.0 }, seed)?;
    Ok(RefutationCheck {
        centers_found: found.upper,
        scale,
        consistent: found.upper >= bound,
    })
}
