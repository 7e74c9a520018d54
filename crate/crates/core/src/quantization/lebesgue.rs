use serde::Serialize;

use crate::error::{Error, Result};

/// `ceil(1 / (2 (q+1)^(1/q) eps))`, the quantization number of Lebesgue measure on
/// `[0, 1]` under `W_q`. Values within relative `1e-12` of an integer count as that
/// integer, so decimal inputs such as `0.05` land on the intended side.
pub fn lebesgue_1d_quantization(eps: f64, q: f64) -> Result<u64> {
    if !(eps > 0.0) || !(q >= 1.0) {
        return Err(Error::InvalidRange(format!("need eps > 0 and q >= 1, got eps={eps}, q={q}")));
    }
    let x = 1.0 / (2.0 * (q + 1.0).powf(1.0 / q) * eps);
    let r = x.round();
    let n = if (x - r).abs() <= 1e-12 * x.max(1.0) { r } else { x.ceil() };
    Ok(n.max(1.0) as u64)
}

/// Equal-weight atoms at the midpoints `(2j - 1)/(2N)` and their `W_q` distance to
/// Lebesgue measure.
#[derive(Debug, Clone, Serialize)]
pub struct Quantizer1d {
    pub points: Vec<f64>,
    pub weight: f64,
    pub distance: f64,
}

pub fn optimal_1d_quantizer(n: usize, q: f64) -> Quantizer1d {
    let nf = n as f64;
    Quantizer1d {
        points: (1..=n).map(|j| (2 * j - 1) as f64 / (2.0 * nf)).collect(),
        weight: 1.0 / nf,
        distance: 1.0 / (2.0 * (q + 1.0).powf(1.0 / q) * nf),
    }
}
