use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{ratio, ratio_string, run_construction, ConstructionRun};
use crate::error::{Error, Result};
use crate::metric::{metric_order_estimate, ExponentFit};
use crate::quantization::{Certificate, Rule, Step};

/// One construction per layer: `(n, row cap)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerSpec {
    pub n: u64,
    pub rows_cap: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OnionLayer {
    /// Layer `i` lives in `T x [2^-i, 2^-i+1]`.
    pub index: u32,
    pub n: u64,
    pub rows: u64,
    #[serde(serialize_with = "ratio_string")]
    pub layer_epsilon: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub epsilon: BigRational,
    pub epsilon_f64: f64,
    pub bound: u64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct OnionReport {
    pub layers: Vec<OnionLayer>,
    /// Bounds never decrease as the scale shrinks.
    pub monotone: bool,
    /// `log log Q` against `-log eps` over the layers, when at least three resolve.
    pub fit: Option<ExponentFit>,
    pub fit_note: Option<String>,
}

/// Places each layer's certified bound in the nested annulus: the layer map has
/// Lipschitz constant `2^i` and the layer carries mass `2^-i`, so the layer bound at
/// `eps` holds for the whole decomposition at `eps / 4^i`.
pub fn onion_chain(layers: &[LayerSpec], budget: usize, seed: u64) -> Result<OnionReport> {
    if layers.is_empty() {
        return Err(Error::InvalidRange("depth must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(layers.len());
    for (k, spec) in layers.iter().enumerate() {
        let index = k as u32 + 1;
        let run: ConstructionRun = run_construction(spec.n, spec.rows_cap, seed.wrapping_add(k as u64), budget)?;
        let certified = run.certified.ok_or_else(|| {
            Error::NotCertified(format!(
                "layer {index} (n = {}, M = {}): {}",
                spec.n,
                run.params.rows,
                run.failure.unwrap_or_default()
            ))
        })?;
        let scale = BigRational::from_integer(1.into()) / ratio(1i64 << index, 1);
        let after_map = &certified.epsilon * &scale;
        let epsilon = &after_map * &scale;
        let epsilon_f64 = epsilon.to_f64().unwrap_or(f64::NAN);
        let mut certificate = certified.certificate.clone();
        certificate.chain.push(Step {
            rule: Rule::LipschitzPushforward,
            detail: format!(
                "layer map is {}-Lipschitz: Q({}) >= {} for the layer's image",
                1u64 << index,
                after_map.to_f64().unwrap_or(f64::NAN),
                certified.bound
            ),
        });
        certificate.chain.push(Step {
            rule: Rule::Submeasure,
            detail: format!(
                "layer carries mass 2^-{index}: Q({epsilon_f64}) >= {}",
                certified.bound
            ),
        });
        certificate.scale = epsilon_f64;
        out.push(OnionLayer {
            index,
            n: spec.n,
            rows: run.params.rows,
            layer_epsilon: certified.epsilon,
            epsilon,
            epsilon_f64,
            bound: certified.bound,
            certificate,
        });
    }
    let mut by_scale: Vec<(f64, u64)> = out.iter().map(|l| (l.epsilon_f64, l.bound)).collect();
    by_scale.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = by_scale.windows(2).all(|w| w[0].1 <= w[1].1);
    let counts: Vec<(f64, f64)> = by_scale.iter().map(|&(e, b)| (e, b as f64)).collect();
    let (fit, fit_note) = match metric_order_estimate(&counts) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(OnionReport {
        layers: out,
        monotone,
        fit,
        fit_note,
    })
}
