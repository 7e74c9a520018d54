//! Brute-force references for the transport distances.

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

const TREE_LIMIT: usize = 5;
const ASSIGNMENT_LIMIT: usize = 8;
const EVENT_LIMIT: usize = 16;

/// `W_p` by enumerating every vertex of the coupling polytope (supports up to 5x5),
/// or every permutation for equal-size uniform measures (up to 8 atoms).
pub fn wasserstein_bruteforce(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<f64> {
    if !mu.same_ambient(nu) {
        return Err(Error::DifferentAmbient);
    }
    let space = mu.space();
    let cost: Vec<Vec<f64>> = mu
        .support()
        .map(|x| nu.support().map(|y| space.dist(x, y).powf(p)).collect())
        .collect();
    let (n, m) = (mu.len(), nu.len());
    let best = if n <= TREE_LIMIT && m <= TREE_LIMIT {
        let a: Vec<f64> = mu.atoms().iter().map(|x| x.1).collect();
        let b: Vec<f64> = nu.atoms().iter().map(|x| x.1).collect();
        vertex_minimum(&a, &b, &cost)
    } else if n == m && n <= ASSIGNMENT_LIMIT && mu.is_uniform() && nu.is_uniform() {
        assignment_minimum(&cost) / n as f64
    } else {
        return Err(Error::TooLarge {
            what: "support",
            got: n.max(m),
            limit: TREE_LIMIT,
        });
    };
    Ok(best.max(0.0).powf(1.0 / p))
}

fn vertex_minimum(a: &[f64], b: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (n, m) = (a.len(), b.len());
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(n + m - 1);
    let mut parent: Vec<usize> = (0..n + m).collect();
    enumerate_trees(&cells, 0, n, n + m - 1, &mut parent, &mut chosen, &mut |tree| {
        if let Some(c) = tree_cost(a, b, cost, tree) {
            best = best.min(c);
        }
    });
    best
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn enumerate_trees(
    cells: &[(usize, usize)],
    start: usize,
    n: usize,
    need: usize,
    parent: &mut Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if chosen.len() == need {
        visit(chosen);
        return;
    }
    if cells.len() - start < need - chosen.len() {
        return;
    }
    for k in start..cells.len() {
        if cells.len() - k < need - chosen.len() {
            return;
        }
        let (i, j) = cells[k];
        let (ri, rj) = (find(parent, i), find(parent, n + j));
        if ri == rj {
            continue;
        }
        let saved = parent.clone();
        parent[ri] = rj;
        chosen.push(cells[k]);
        enumerate_trees(cells, k + 1, n, need, parent, chosen, visit);
        chosen.pop();
        *parent = saved;
    }
}

/// Solves the tree's unique flow by peeling leaves; `None` if it is infeasible.
fn tree_cost(a: &[f64], b: &[f64], cost: &[Vec<f64>], tree: &[(usize, usize)]) -> Option<f64> {
    let n = a.len();
    let mut rest: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut degree = vec![0usize; rest.len()];
    for &(i, j) in tree {
        degree[i] += 1;
        degree[n + j] += 1;
    }
    let mut alive = vec![true; tree.len()];
    let mut total = 0.0;
    for _ in 0..tree.len() {
        let (e, leaf) = tree.iter().enumerate().find_map(|(e, &(i, j))| {
            if !alive[e] {
                None
            } else if degree[i] == 1 {
                Some((e, i))
            } else if degree[n + j] == 1 {
                Some((e, n + j))
            } else {
                None
            }
        })?;
        let (i, j) = tree[e];
        let other = if leaf == i { n + j } else { i };
        let x = rest[leaf];
        if x < -1e-12 {
            return None;
        }
        rest[leaf] = 0.0;
        rest[other] -= x;
        degree[i] -= 1;
        degree[n + j] -= 1;
        alive[e] = false;
        total += x * cost[i][j];
    }
    rest.iter().all(|r| r.abs() < 1e-9).then_some(total)
}

fn assignment_minimum(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let eval = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>();
    let mut best = eval(&perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(eval(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Lévy–Prokhorov by enumerating every event of the union of supports (up to 16 points).
pub fn levy_prokhorov_exhaustive(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    if !mu.same_ambient(nu) {
        return Err(Error::DifferentAmbient);
    }
    let space = mu.space();
    let mut union: Vec<usize> = mu.support().chain(nu.support()).collect();
    union.sort_unstable();
    union.dedup();
    let k = union.len();
    if k > EVENT_LIMIT {
        return Err(Error::TooLarge {
            what: "union of supports",
            got: k,
            limit: EVENT_LIMIT,
        });
    }
    let mu_w: Vec<f64> = union.iter().map(|&x| mu.mass_of(x)).collect();
    let nu_w: Vec<f64> = union.iter().map(|&x| nu.mass_of(x)).collect();
    let mut thresholds: Vec<f64> = mu
        .support()
        .flat_map(|x| nu.support().map(move |y| space.dist(x, y)))
        .collect();
    thresholds.push(0.0);
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let mass = |w: &[f64], set: u32| -> f64 {
        (0..k).filter(|&i| set >> i & 1 == 1).map(|i| w[i]).sum()
    };
    let mut best = f64::INFINITY;
    for &t in &thresholds {
        let near: Vec<u32> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| space.dist(union[i], union[j]) <= t)
                    .fold(0u32, |acc, j| acc | 1 << j)
            })
            .collect();
        let mut worst = 0.0f64;
        for set in 1u32..(1u32 << k) {
            let grown = (0..k)
                .filter(|&i| set >> i & 1 == 1)
                .fold(0u32, |acc, i| acc | near[i]);
            worst = worst
                .max(mass(&nu_w, set) - mass(&mu_w, grown))
                .max(mass(&mu_w, set) - mass(&nu_w, grown));
        }
        best = best.min(t.max(worst));
    }
    Ok(best)
}
