use serde::{Deserialize, Serialize};

use super::FiniteMetricSpace;
use crate::error::{Error, Result};

/// Largest space accepted by the exhaustive covering and packing routines.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Certified bracket `lower <= D(epsilon) <= upper` for the covering number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringBounds {
    pub epsilon: f64,
    pub lower: usize,
    pub upper: usize,
}

/// Greedy maximal subset with pairwise distances strictly greater than `eps`,
/// scanning points in index order.
pub fn greedy_separated_set(space: &FiniteMetricSpace, eps: f64) -> Vec<usize> {
    greedy_separated_subset(space, 0..space.len(), eps)
}

/// Greedy maximal `eps`-separated subset of `points`, taken in the given order.
pub fn greedy_separated_subset(
    space: &FiniteMetricSpace,
    points: impl IntoIterator<Item = usize>,
    eps: f64,
) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for p in points {
        if chosen.iter().all(|&c| space.dist(p, c) > eps) {
            chosen.push(p);
        }
    }
    chosen
}

/// Brackets the covering number by closed `eps`-balls.
///
/// A `2 eps`-separated set needs one ball per point, and a maximal `eps`-separated
/// set is an `eps`-net.
pub fn covering_bounds(space: &FiniteMetricSpace, eps: f64) -> Result<CoveringBounds> {
    if !(eps > 0.0) {
        return Err(Error::InvalidRange(format!("epsilon must be positive, got {eps}")));
    }
    Ok(CoveringBounds {
        epsilon: eps,
        lower: greedy_separated_set(space, 2.0 * eps).len(),
        upper: greedy_separated_set(space, eps).len(),
    })
}

fn ball_masks(space: &FiniteMetricSpace, eps: f64) -> Vec<u32> {
    (0..space.len())
        .map(|i| {
            (0..space.len())
                .filter(|&j| space.dist(i, j) <= eps)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect()
}

fn guard(space: &FiniteMetricSpace) -> Result<()> {
    if space.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "space",
            got: space.len(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// Least number of closed `eps`-balls centred in the space that cover it.
pub fn exact_covering_number(space: &FiniteMetricSpace, eps: f64) -> Result<usize> {
    guard(space)?;
    let n = space.len();
    let balls = ball_masks(space, eps);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for k in 1..=n {
        if covers_with(&balls, full, k, 0) {
            return Ok(k);
        }
    }
    Ok(n)
}

fn covers_with(balls: &[u32], full: u32, left: usize, acc: u32) -> bool {
    if acc == full {
        return true;
    }
    if left == 0 {
        return false;
    }
    let uncovered = (!acc & full).trailing_zeros() as usize;
    // some ball must contain the first uncovered point
    balls
        .iter()
        .any(|&b| b >> uncovered & 1 == 1 && covers_with(balls, full, left - 1, acc | b))
}

/// Largest subset with pairwise distances strictly greater than `eps`.
pub fn exact_packing_number(space: &FiniteMetricSpace, eps: f64) -> Result<usize> {
    guard(space)?;
    let n = space.len();
    let conflicts = ball_masks(space, eps);
    let all: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(max_independent(&conflicts, all))
}

fn max_independent(conflicts: &[u32], candidates: u32) -> usize {
    if candidates == 0 {
        return 0;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    let with = 1 + max_independent(conflicts, candidates & !conflicts[v]);
    if with > rest.count_ones() as usize {
        return with;
    }
    with.max(max_independent(conflicts, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_line(n: usize) -> FiniteMetricSpace {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        FiniteMetricSpace::line(&xs).unwrap()
    }

    #[test]
    fn closed_balls() {
        let s = FiniteMetricSpace::line(&[0.0, 1.0]).unwrap();
        assert_eq!(exact_covering_number(&s, 0.4).unwrap(), 2);
        assert_eq!(exact_covering_number(&s, 1.0).unwrap(), 1);
    }

    #[test]
    fn greedy_scan_order() {
        let s = FiniteMetricSpace::line(&[0.0, 0.3, 0.6, 0.9]).unwrap();
        assert_eq!(greedy_separated_set(&s, 0.25), vec![0, 1, 2, 3]);
        assert_eq!(greedy_separated_set(&s, 0.35), vec![0, 2]);
    }

    #[test]
    fn ten_points_bracket() {
        let s = grid_line(10);
        let b = covering_bounds(&s, 0.12).unwrap();
        let exact = exact_covering_number(&s, 0.12).unwrap();
        assert!(b.upper <= 5 && b.lower >= 3);
        assert!(b.lower <= exact && exact <= b.upper);
    }

    #[test]
    fn packing_is_strict() {
        let s = FiniteMetricSpace::line(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(exact_packing_number(&s, 0.5).unwrap(), 2);
        assert_eq!(exact_packing_number(&s, 0.49).unwrap(), 3);
    }

    #[test]
    fn rejects_large_spaces() {
        assert!(matches!(
            exact_covering_number(&grid_line(21), 0.1),
            Err(Error::TooLarge { .. })
        ));
    }
}
