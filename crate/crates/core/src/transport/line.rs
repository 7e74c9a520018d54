//! Closed forms for `W_1` on the line and on the circle.

use crate::measure::DiscreteMeasure;
use crate::metric::Geometry;

/// Signed cumulative difference `F_mu - F_nu` as (interval length, value) pieces
/// between consecutive support points, plus the sorted coordinate range.
fn cdf_gap(mu: &DiscreteMeasure, nu: &DiscreteMeasure, coord: impl Fn(usize) -> f64) -> (Vec<(f64, f64)>, f64, f64) {
    let mut events: Vec<(f64, f64)> = mu
        .atoms()
        .iter()
        .map(|&(x, w)| (coord(x), w))
        .chain(nu.atoms().iter().map(|&(y, w)| (coord(y), -w)))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pieces = Vec::with_capacity(events.len());
    let mut level = 0.0;
    for pair in events.windows(2) {
        level += pair[0].1;
        pieces.push((pair[1].0 - pair[0].0, level));
    }
    (pieces, events[0].0, events[events.len() - 1].0)
}

fn line_w1(mu: &DiscreteMeasure, nu: &DiscreteMeasure, coord: impl Fn(usize) -> f64) -> f64 {
    let (pieces, _, _) = cdf_gap(mu, nu, coord);
    pieces.iter().map(|(len, v)| len * v.abs()).sum()
}

/// On `R/Z` the cost is `min_c ∫ |F_mu - F_nu - c|`, minimized at a length-weighted
/// median of the gap.
fn circle_w1(mu: &DiscreteMeasure, nu: &DiscreteMeasure, coord: impl Fn(usize) -> f64) -> f64 {
    let (mut pieces, first, last) = cdf_gap(mu, nu, coord);
    pieces.push((1.0 - last + first, 0.0));
    let mut sorted = pieces.clone();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
    let half = sorted.iter().map(|p| p.0).sum::<f64>() / 2.0;
    let mut acc = 0.0;
    let mut median = sorted[sorted.len() - 1].1;
    for &(len, v) in &sorted {
        acc += len;
        if acc >= half {
            median = v;
            break;
        }
    }
    pieces.iter().map(|(len, v)| len * (v - median).abs()).sum()
}

/// `W_1` without a flow solve when the ambient space is one-dimensional.
pub(super) fn one_dimensional_w1(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Option<f64> {
    let space = mu.space();
    match space.geometry() {
        Geometry::Circle { points } => Some(circle_w1(mu, nu, |i| points[i])),
        Geometry::Euclidean { points } if points.first().is_some_and(|p| p.len() == 1) => {
            Some(line_w1(mu, nu, |i| points[i][0]))
        }
        _ => None,
    }
}
