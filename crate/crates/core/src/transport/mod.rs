//! Exact Wasserstein and Lévy–Prokhorov distances between discrete measures.

mod flow;
mod holder;
mod line;
mod oracle;
mod simplex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use flow::MaxFlow;

pub use holder::{check_holder_comparisons, HolderCheck, HolderReport};
pub use oracle::{levy_prokhorov_exhaustive, wasserstein_bruteforce};

/// Total integer mass used by the flow solvers.
const MASS_SCALE: i64 = 1 << 40;
/// Integer cost budget for the largest pair cost.
const COST_SCALE: f64 = 1e12;

/// Which distance metrizes the space of measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureMetric {
    Wasserstein { p: f64 },
    LevyProkhorov,
}

impl MeasureMetric {
    pub const W1: MeasureMetric = MeasureMetric::Wasserstein { p: 1.0 };

    pub fn distance(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
        match *self {
            MeasureMetric::Wasserstein { p } => wasserstein_distance(mu, nu, p),
            MeasureMetric::LevyProkhorov => levy_prokhorov(mu, nu),
        }
    }
}

impl std::fmt::Display for MeasureMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureMetric::Wasserstein { p } => write!(f, "W{p}"),
            MeasureMetric::LevyProkhorov => write!(f, "LP"),
        }
    }
}

/// A coupling, indexed by (source atom, target atom) in atom order.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub source: DiscreteMeasure,
    pub target: DiscreteMeasure,
    pub matrix: Vec<Vec<f64>>,
}

impl TransportPlan {
    /// Integral of `d^p` against the plan.
    pub fn cost(&self, p: f64) -> f64 {
        let space = self.source.space();
        let mut total = 0.0;
        for (row, &(x, _)) in self.matrix.iter().zip(self.source.atoms()) {
            for (&mass, &(y, _)) in row.iter().zip(self.target.atoms()) {
                if mass > 0.0 {
                    total += mass * space.dist(x, y).powf(p);
                }
            }
        }
        total
    }
}

fn check_pair(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<()> {
    if !mu.same_ambient(nu) {
        return Err(Error::DifferentAmbient);
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidRange(format!("p must be in [1, inf), got {p}")));
    }
    Ok(())
}

/// Integer masses summing to [`MASS_SCALE`], by largest remainder.
pub(crate) fn integer_masses(weights: impl Iterator<Item = f64>) -> Vec<i64> {
    let w: Vec<f64> = weights.collect();
    let total: f64 = w.iter().sum();
    let scaled: Vec<f64> = w.iter().map(|x| x / total * MASS_SCALE as f64).collect();
    let mut ints: Vec<i64> = scaled.iter().map(|x| x.floor() as i64).collect();
    let mut diff = MASS_SCALE - ints.iter().sum::<i64>();
    let mut order: Vec<usize> = (0..w.len()).collect();
    if diff > 0 {
        order.sort_by(|&a, &b| {
            let fa = scaled[a] - scaled[a].floor();
            let fb = scaled[b] - scaled[b].floor();
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        for &i in order.iter().cycle() {
            if diff == 0 {
                break;
            }
            ints[i] += 1;
            diff -= 1;
        }
    } else if diff < 0 {
        order.sort_by(|&a, &b| ints[b].cmp(&ints[a]).then(a.cmp(&b)));
        for &i in order.iter().cycle() {
            if diff == 0 {
                break;
            }
            if ints[i] > 0 {
                ints[i] -= 1;
                diff += 1;
            }
        }
    }
    ints
}

struct Solved {
    /// (source atom, target atom, mass)
    flows: Vec<(usize, usize, f64)>,
    cost: f64,
}

fn solve_pair(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Solved {
    let space = mu.space();
    let a = integer_masses(mu.atoms().iter().map(|x| x.1));
    let b = integer_masses(nu.atoms().iter().map(|x| x.1));
    let rows: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0).collect();
    let cols: Vec<usize> = (0..b.len()).filter(|&j| b[j] > 0).collect();
    let mut real = Vec::with_capacity(rows.len() * cols.len());
    for &i in &rows {
        let x = mu.atoms()[i].0;
        for &j in &cols {
            let d = space.dist(x, nu.atoms()[j].0);
            real.push(if p == 1.0 { d } else { d.powf(p) });
        }
    }
    let max_cost = real.iter().copied().fold(0.0f64, f64::max);
    let scale = COST_SCALE / max_cost.max(1.0);
    let cost: Vec<i64> = real.iter().map(|c| (c * scale).round() as i64).collect();
    let supply: Vec<i64> = rows.iter().map(|&i| a[i]).collect();
    let demand: Vec<i64> = cols.iter().map(|&j| b[j]).collect();
    let flow = simplex::solve(&simplex::Transport {
        supply: &supply,
        demand: &demand,
        cost: &cost,
    });
    let m = cols.len();
    let mut flows = Vec::new();
    let mut total = 0.0;
    for (k, &f) in flow.iter().enumerate() {
        if f > 0 {
            let mass = f as f64 / MASS_SCALE as f64;
            total += mass * real[k];
            flows.push((rows[k / m], cols[k % m], mass));
        }
    }
    Solved { flows, cost: total }
}

/// `W_p` distance together with an optimal plan.
pub fn wasserstein(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<(f64, TransportPlan)> {
    check_pair(mu, nu)?;
    check_p(p)?;
    let solved = solve_pair(mu, nu, p);
    let mut matrix = vec![vec![0.0; nu.len()]; mu.len()];
    for (i, j, mass) in solved.flows {
        matrix[i][j] += mass;
    }
    Ok((
        solved.cost.max(0.0).powf(1.0 / p),
        TransportPlan {
            source: mu.clone(),
            target: nu.clone(),
            matrix,
        },
    ))
}

/// `W_p` distance without materializing the plan.
pub fn wasserstein_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<f64> {
    check_pair(mu, nu)?;
    check_p(p)?;
    if p == 1.0 {
        if let Some(d) = line::one_dimensional_w1(mu, nu) {
            return Ok(d);
        }
    }
    Ok(solve_pair(mu, nu, p).cost.max(0.0).powf(1.0 / p))
}

/// Lévy–Prokhorov distance by a threshold scan over couplable mass.
///
/// For a threshold `t`, `m(t)` is the largest mass couplable along pairs at distance
/// at most `t`. The distance is `min_t max(t, 1 - m(t))` over `t` in `{0} ∪ {d(x, y)}`
/// and the gaps between consecutive thresholds; the infimum sits at a breakpoint.
pub fn levy_prokhorov(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    check_pair(mu, nu)?;
    let space = mu.space();
    let a = integer_masses(mu.atoms().iter().map(|x| x.1));
    let b = integer_masses(nu.atoms().iter().map(|x| x.1));
    let n = a.len();
    let m = b.len();
    let d: Vec<f64> = mu
        .support()
        .flat_map(|x| nu.support().map(move |y| space.dist(x, y)))
        .collect();
    let mut thresholds = d.clone();
    thresholds.push(0.0);
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let gap = |t: f64| -> f64 {
        let mut g = MaxFlow::new(n + m + 2);
        let (s, sink) = (n + m, n + m + 1);
        for (i, &ai) in a.iter().enumerate() {
            g.add_edge(s, i, ai);
        }
        for (j, &bj) in b.iter().enumerate() {
            g.add_edge(n + j, sink, bj);
        }
        for i in 0..n {
            for j in 0..m {
                if d[i * m + j] <= t {
                    g.add_edge(i, n + j, MASS_SCALE);
                }
            }
        }
        1.0 - g.run(s, sink) as f64 / MASS_SCALE as f64
    };

    // invariant: gap(lo) > t_lo and gap(hi) <= t_hi
    if gap(thresholds[0]) <= thresholds[0] {
        return Ok(thresholds[0]);
    }
    let (mut lo, mut hi) = (0usize, thresholds.len() - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if gap(thresholds[mid]) <= thresholds[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(thresholds[hi].min(gap(thresholds[lo])))
}

/// Symmetric matrix of pairwise distances, computed in parallel with a fixed layout.
pub fn pairwise_distances(measures: &[DiscreteMeasure], metric: MeasureMetric) -> Result<Vec<Vec<f64>>> {
    let n = measures.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| metric.distance(&measures[i], &measures[j]))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut out = vec![vec![0.0; n]; n];
    for (i, row) in rows.into_iter().enumerate() {
        for (k, d) in row.into_iter().enumerate() {
            out[i][i + 1 + k] = d;
            out[i + 1 + k][i] = d;
        }
    }
    Ok(out)
}

/// Writes a distance matrix as CSV with a header row and a leading name column.
pub fn write_distance_matrix_csv<W: std::io::Write>(out: W, names: &[String], matrix: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::new()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (name, row) in names.iter().zip(matrix) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(|d| d.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
