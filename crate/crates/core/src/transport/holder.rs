use serde::Serialize;

use super::{levy_prokhorov, wasserstein_distance};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

const SLACK_TOL: f64 = 1e-9;

/// One inequality `lhs <= rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct HolderCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderReport {
    pub p: f64,
    pub q: f64,
    pub diam: f64,
    pub w_q: f64,
    pub w_p: f64,
    pub lp: f64,
    pub checks: Vec<HolderCheck>,
}

impl HolderReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates the comparisons between `W_q`, `W_p` and Lévy–Prokhorov:
///
/// * `W_q <= W_p`
/// * `W_p <= diam^(1 - q/p) W_q^(q/p)`
/// * `LP^(1 + 1/p) <= W_p`
/// * `W_p <= (1 + diam^p)^(1/p) LP^(1/p)`
pub fn check_holder_comparisons(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64, q: f64) -> Result<HolderReport> {
    if !(1.0 <= q && q <= p) {
        return Err(Error::InvalidRange(format!("need 1 <= q <= p, got q={q}, p={p}")));
    }
    let diam = mu.space().diam();
    let w_q = wasserstein_distance(mu, nu, q)?;
    let w_p = wasserstein_distance(mu, nu, p)?;
    let lp = levy_prokhorov(mu, nu)?;
    let check = |name, lhs: f64, rhs: f64| HolderCheck {
        name,
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: rhs - lhs >= -SLACK_TOL,
    };
    let checks = vec![
        check("w_q <= w_p", w_q, w_p),
        check(
            "w_p <= diam^(1-q/p) w_q^(q/p)",
            w_p,
            diam.powf(1.0 - q / p) * w_q.powf(q / p),
        ),
        check("lp^(1+1/p) <= w_p", lp.powf(1.0 + 1.0 / p), w_p),
        check(
            "w_p <= (1+diam^p)^(1/p) lp^(1/p)",
            w_p,
            (1.0 + diam.powf(p)).powf(1.0 / p) * lp.powf(1.0 / p),
        ),
    ];
    Ok(HolderReport {
        p,
        q,
        diam,
        w_q,
        w_p,
        lp,
        checks,
    })
}
