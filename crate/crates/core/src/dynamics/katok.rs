use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use super::sampling::StartSampler;
use super::systems::{orbit, MapSystem, PhasePoint};
use crate::error::{Error, Result};
use crate::metric::least_squares;

/// `d_n(x, y) = max_{i<n} d(f^i x, f^i y)`.
pub fn bowen_distance<S: MapSystem>(system: &S, x: &S::Point, y: &S::Point, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidRange("horizon must be positive".into()));
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    let mut best = a.distance(&b);
    for _ in 1..n {
        a = system.apply(&a);
        b = system.apply(&b);
        best = best.max(a.distance(&b));
    }
    Ok(best)
}

/// Balls needed at one horizon.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HorizonCount {
    pub horizon: usize,
    pub balls: usize,
    /// Enough samples per ball for the count to be trusted.
    pub admissible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KatokEstimate {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub samples: usize,
    pub seed: u64,
    pub counts: Vec<HorizonCount>,
    /// Slope of `log N(n')` over the admissible horizons.
    pub entropy: f64,
    /// `(1/n) log N(n)`.
    pub raw_rate: f64,
}

/// Samples per ball below which a horizon stops counting.
pub const MIN_SAMPLES_PER_BALL: usize = 8;

/// Neighbour lists in compressed rows: for each sample, the samples within `eps` at
/// time zero and the first time their orbits separate by more than `eps`.
struct BreakTimes {
    offsets: Vec<usize>,
    neighbours: Vec<u32>,
    breaks: Vec<u16>,
}

fn break_times<P: PhasePoint>(orbits: &[Vec<P>], eps: f64) -> BreakTimes {
    let k = orbits.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| orbits[a][0].angle().total_cmp(&orbits[b][0].angle()));
    let angles: Vec<f64> = order.iter().map(|&i| orbits[i][0].angle()).collect();
    let rows: Vec<Vec<(u32, u16)>> = (0..k)
        .into_par_iter()
        .map(|pos| {
            let i = order[pos];
            let mut row = Vec::new();
            // walk both ways around the circle while the angular offset stays within eps
            for dir in [1isize, -1] {
                for step in 1..k {
                    let q = (pos as isize + dir * step as isize).rem_euclid(k as isize) as usize;
                    if q == pos {
                        break;
                    }
                    let gap = (angles[q] - angles[pos]).abs();
                    if gap.min(1.0 - gap) > eps {
                        break;
                    }
                    let j = order[q];
                    let t = orbits[i]
                        .iter()
                        .zip(&orbits[j])
                        .position(|(a, b)| a.distance(b) > eps)
                        .unwrap_or(orbits[i].len());
                    if t > 0 {
                        row.push((j as u32, t as u16));
                    }
                }
            }
            row.sort_unstable();
            row.dedup_by_key(|e| e.0);
            row
        })
        .collect();
    let mut offsets = Vec::with_capacity(k + 1);
    offsets.push(0);
    let mut neighbours = Vec::new();
    let mut breaks = Vec::new();
    for row in rows {
        for (j, t) in row {
            neighbours.push(j);
            breaks.push(t);
        }
        offsets.push(neighbours.len());
    }
    BreakTimes {
        offsets,
        neighbours,
        breaks,
    }
}

/// Lazy greedy: balls centred at samples until `target` samples are covered.
fn greedy_cover(bt: &BreakTimes, horizon: usize, target: usize) -> usize {
    let k = bt.offsets.len() - 1;
    let ball = |i: usize| {
        (bt.offsets[i]..bt.offsets[i + 1])
            .filter(move |&e| bt.breaks[e] as usize >= horizon)
            .map(move |e| bt.neighbours[e] as usize)
            .chain(std::iter::once(i))
    };
    let mut covered = vec![false; k];
    let mut heap: BinaryHeap<(usize, std::cmp::Reverse<usize>)> =
        (0..k).map(|i| (ball(i).count(), std::cmp::Reverse(i))).collect();
    let mut count = 0;
    let mut balls = 0;
    while count < target {
        let Some((gain, std::cmp::Reverse(i))) = heap.pop() else { break };
        let fresh = ball(i).filter(|&j| !covered[j]).count();
        if fresh == 0 {
            continue;
        }
        if fresh < gain && heap.peek().is_some_and(|top| top.0 > fresh) {
            heap.push((fresh, std::cmp::Reverse(i)));
            continue;
        }
        for j in ball(i) {
            if !covered[j] {
                covered[j] = true;
                count += 1;
            }
        }
        balls += 1;
    }
    balls
}

/// Entropy from the growth of Bowen-ball covers of `(1 - delta)` of the samples.
///
/// For every horizon `n' <= n` the cover count `N(n')` is computed; the estimate is
/// the least-squares slope of `log N(n')` over horizons where each ball still holds at
/// least [`MIN_SAMPLES_PER_BALL`] samples on average.
#[allow(clippy::too_many_arguments)]
pub fn katok_entropy_estimate<S, Z>(
    system: &S,
    sampler: &Z,
    n: usize,
    eps: f64,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<KatokEstimate>
where
    S: MapSystem,
    Z: StartSampler<S::Point>,
{
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidRange(format!("delta must be in (0, 1), got {delta}")));
    }
    if samples < 100 {
        return Err(Error::InvalidRange(format!("need at least 100 samples, got {samples}")));
    }
    if n == 0 || n > u16::MAX as usize {
        return Err(Error::InvalidRange(format!("horizon {n} out of range")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidRange(format!("epsilon must be positive, got {eps}")));
    }
    let starts = sampler.sample(samples, seed)?;
    let orbits: Vec<Vec<S::Point>> = starts.par_iter().map(|x| orbit(system, x, n)).collect();
    let bt = break_times(&orbits, eps);
    let target = ((1.0 - delta) * samples as f64).ceil() as usize;
    let counts: Vec<HorizonCount> = (1..=n)
        .map(|h| {
            let balls = greedy_cover(&bt, h, target);
            HorizonCount {
                horizon: h,
                balls,
                admissible: balls * MIN_SAMPLES_PER_BALL <= samples,
            }
        })
        .collect();
    let usable: Vec<&HorizonCount> = counts.iter().filter(|c| c.admissible).collect();
    let entropy = if usable.len() >= 2 {
        let xs: Vec<f64> = usable.iter().map(|c| c.horizon as f64).collect();
        let ys: Vec<f64> = usable.iter().map(|c| (c.balls as f64).ln()).collect();
        least_squares(&xs, &ys).0
    } else {
        return Err(Error::DegenerateFit(format!(
            "only {} horizons keep {MIN_SAMPLES_PER_BALL} samples per ball",
            usable.len()
        )));
    };
    let raw_rate = (counts[n - 1].balls as f64).ln() / n as f64;
    Ok(KatokEstimate {
        n,
        epsilon: eps,
        delta,
        samples,
        seed,
        counts,
        entropy,
        raw_rate,
    })
}
