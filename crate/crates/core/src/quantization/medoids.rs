//! Alternating k-medoids over the support, used for upper bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::within;
use crate::measure::DiscreteMeasure;
use crate::metric::Geometry;

const RESTARTS: usize = 4;
const MAX_ROUNDS: usize = 40;
const EXACT_MEDOID: usize = 1500;
const SAMPLED_MEDOID: usize = 400;

struct Instance<'a> {
    mu: &'a DiscreteMeasure,
    q: f64,
    /// Coordinates when the ambient space is the real line.
    line: Option<Vec<f64>>,
}

impl Instance<'_> {
    #[inline]
    fn cost(&self, a: usize, b: usize) -> f64 {
        let d = match &self.line {
            Some(x) => (x[a] - x[b]).abs(),
            None => {
                let atoms = self.mu.atoms();
                self.mu.space().dist(atoms[a].0, atoms[b].0)
            }
        };
        if self.q == 1.0 {
            d
        } else {
            d.powf(self.q)
        }
    }

    fn weight(&self, a: usize) -> f64 {
        self.mu.atoms()[a].1
    }

    fn len(&self) -> usize {
        self.mu.len()
    }

    fn assign(&self, centers: &[usize]) -> (f64, Vec<usize>) {
        let mut total = 0.0;
        let owner = (0..self.len())
            .map(|a| {
                let (k, c) = centers
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (k, self.cost(a, c)))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .expect("centres");
                total += self.weight(a) * c;
                k
            })
            .collect();
        (total, owner)
    }

    fn cluster_cost(&self, cluster: &[usize], c: usize) -> f64 {
        cluster.iter().map(|&a| self.weight(a) * self.cost(a, c)).sum()
    }

    fn medoid(&self, cluster: &[usize], current: usize, rng: &mut ChaCha8Rng) -> usize {
        if let Some(x) = &self.line {
            // the cost is convex along the line, so binary-search its minimum
            let mut sorted = cluster.to_vec();
            sorted.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
            let (mut lo, mut hi) = (0usize, sorted.len() - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.cluster_cost(cluster, sorted[mid + 1]) < self.cluster_cost(cluster, sorted[mid]) {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            return sorted[lo];
        }
        let candidates: Vec<usize> = if cluster.len() <= EXACT_MEDOID {
            cluster.to_vec()
        } else {
            let mut c: Vec<usize> = (0..SAMPLED_MEDOID)
                .map(|_| cluster[rng.gen_range(0..cluster.len())])
                .collect();
            c.push(current);
            c
        };
        let mut best = (current, self.cluster_cost(cluster, current));
        for c in candidates {
            let v = self.cluster_cost(cluster, c);
            if v < best.1 {
                best = (c, v);
            }
        }
        best.0
    }

    /// Seeding proportional to mass times cost to the nearest chosen centre.
    fn seed(&self, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let n = self.len();
        let pick = |weights: &[f64], rng: &mut ChaCha8Rng| -> usize {
            let total: f64 = weights.iter().sum();
            if !(total > 0.0) {
                return rng.gen_range(0..weights.len());
            }
            let mut u = rng.gen::<f64>() * total;
            for (i, &w) in weights.iter().enumerate() {
                if u < w {
                    return i;
                }
                u -= w;
            }
            weights.len() - 1
        };
        let mass: Vec<f64> = (0..n).map(|a| self.weight(a)).collect();
        let mut centers = vec![pick(&mass, rng)];
        let mut near: Vec<f64> = (0..n).map(|a| self.cost(a, centers[0])).collect();
        while centers.len() < k {
            let w: Vec<f64> = (0..n).map(|a| mass[a] * near[a]).collect();
            let c = pick(&w, rng);
            centers.push(c);
            for (a, v) in near.iter_mut().enumerate() {
                *v = v.min(self.cost(a, c));
            }
        }
        centers
    }

    fn refine(&self, mut centers: Vec<usize>, rng: &mut ChaCha8Rng) -> (f64, Vec<usize>) {
        let k = centers.len();
        let (mut cost, mut owner) = self.assign(&centers);
        for _ in 0..MAX_ROUNDS {
            let mut clusters = vec![Vec::new(); k];
            for (a, &o) in owner.iter().enumerate() {
                clusters[o].push(a);
            }
            let next: Vec<usize> = clusters
                .iter()
                .zip(&centers)
                .map(|(cl, &c)| if cl.is_empty() { c } else { self.medoid(cl, c, rng) })
                .collect();
            let (next_cost, next_owner) = self.assign(&next);
            if next_cost >= cost {
                break;
            }
            centers = next;
            cost = next_cost;
            owner = next_owner;
        }
        (cost, centers)
    }

    fn attempt(&self, k: usize, target: f64, seed: u64) -> Option<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        (0..RESTARTS).find_map(|_| {
            let init = self.seed(k, &mut rng);
            let (cost, centers) = self.refine(init, &mut rng);
            within(cost, target).then_some(centers)
        })
    }
}

/// Smallest centre count the heuristic certifies, starting from `start`.
/// Returns the centres as ambient points.
pub(super) fn search(mu: &DiscreteMeasure, q: f64, target: f64, start: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let line = match mu.space().geometry() {
        Geometry::Euclidean { points } if points.first().is_some_and(|p| p.len() == 1) => {
            Some(mu.atoms().iter().map(|a| points[a.0][0]).collect())
        }
        _ => None,
    };
    let inst = Instance { mu, q, line };
    let n = inst.len();
    let seed: u64 = rng.gen();
    let to_points = |c: Vec<usize>| c.into_iter().map(|a| mu.atoms()[a].0).collect::<Vec<_>>();

    let mut failed = start.max(1) - 1;
    let mut k = start.max(1);
    let mut step = 1;
    let (mut found_k, mut found) = loop {
        if k >= n {
            break (n, (0..n).collect::<Vec<_>>());
        }
        if let Some(c) = inst.attempt(k, target, seed) {
            break (k, c);
        }
        failed = k;
        k += step;
        step *= 2;
    };
    // tighten inside the last gap
    let (mut lo, mut hi) = (failed, found_k);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        match inst.attempt(mid, target, seed) {
            Some(c) => {
                hi = mid;
                found_k = mid;
                found = c;
            }
            None => lo = mid,
        }
    }
    debug_assert_eq!(found.len(), found_k);
    to_points(found)
}

/// Greedy cover by closed `eps`-balls centred on the support until mass `1 - eps`.
pub(super) fn greedy_ball_cover(mu: &DiscreteMeasure, eps: f64) -> Vec<usize> {
    let space = mu.space();
    let atoms = mu.atoms();
    let n = atoms.len();
    let balls: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..n).filter(|&a| space.dist(atoms[a].0, atoms[c].0) <= eps).collect())
        .collect();
    let mut covered = vec![false; n];
    let mut mass = 0.0;
    let mut centers = Vec::new();
    while !within(1.0 - mass, eps) {
        let (c, gain) = (0..n)
            .map(|c| (c, balls[c].iter().filter(|&&a| !covered[a]).map(|&a| atoms[a].1).sum::<f64>()))
            .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)))
            .expect("support");
        if gain <= 0.0 {
            break;
        }
        for &a in &balls[c] {
            covered[a] = true;
        }
        mass += gain;
        centers.push(atoms[c].0);
    }
    centers
}
