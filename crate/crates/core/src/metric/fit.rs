use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares exponent of a count-vs-scale relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub scales: Vec<f64>,
    pub values: Vec<f64>,
    pub exponent: f64,
    pub residual: f64,
}

/// Slope of `log count` against `-log eps`.
pub fn dimension_estimate(counts: &[(f64, f64)]) -> Result<ExponentFit> {
    fit(counts, 1.0, |c| c.ln())
}

/// Slope of `log log count` against `-log eps`.
pub fn metric_order_estimate(counts: &[(f64, f64)]) -> Result<ExponentFit> {
    fit(counts, 2.0, |c| c.ln().ln())
}

fn fit(counts: &[(f64, f64)], min_count: f64, transform: impl Fn(f64) -> f64) -> Result<ExponentFit> {
    let mut sorted = counts.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    if let Some(&(e, c)) = sorted.iter().find(|(e, c)| !(*e > 0.0) || !(*c >= min_count)) {
        return Err(Error::DegenerateFit(format!(
            "need positive scales and counts >= {min_count}, got ({e}, {c})"
        )));
    }
    let mut distinct: Vec<f64> = sorted.iter().map(|p| p.0).collect();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 distinct scales, got {}",
            distinct.len()
        )));
    }
    let xs: Vec<f64> = sorted.iter().map(|p| -p.0.ln()).collect();
    let ys: Vec<f64> = sorted.iter().map(|p| transform(p.1)).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    Ok(ExponentFit {
        scales: sorted.iter().map(|p| p.0).collect(),
        values: sorted.iter().map(|p| p.1).collect(),
        exponent: slope,
        residual,
    })
}

/// Ordinary least squares `y = slope * x + intercept`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}
