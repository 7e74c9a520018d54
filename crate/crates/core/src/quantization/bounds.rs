use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::greedy_separated_subset;
use crate::transport::wasserstein_distance;

const CHECK_TOL: f64 = 1e-12;

/// Which inference produced a step of a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Trivial,
    Exhaustive,
    CostLemma,
    SeparatedCells,
    Submeasure,
    LipschitzPushforward,
    Continuity,
    TogetherClaim,
    ApartClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    pub detail: String,
}

/// A bound on a quantization number together with the steps that justify it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub direction: Direction,
    pub scale: f64,
    pub bound: u64,
    pub chain: Vec<Step>,
}

impl Certificate {
    pub fn trivial(scale: f64) -> Self {
        Self {
            direction: Direction::Lower,
            scale,
            bound: 1,
            chain: vec![Step {
                rule: Rule::Trivial,
                detail: "a nonempty center set is required".into(),
            }],
        }
    }

    pub fn with_step(mut self, rule: Rule, detail: impl Into<String>) -> Self {
        self.chain.push(Step {
            rule,
            detail: detail.into(),
        });
        self
    }
}

/// `W_1(mu, nu) >= (n - m + 1)/n * eps/2` for `mu` uniform on `n` points pairwise at
/// least `eps` apart and `nu` supported on `m < n` points.
pub fn cost_lower_bound(n: usize, m: usize, eps: f64) -> Result<f64> {
    if m == 0 || m >= n {
        return Err(Error::InvalidRange(format!("need 1 <= m < n, got m={m}, n={n}")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidRange(format!("epsilon must be positive, got {eps}")));
    }
    Ok((n - m + 1) as f64 / n as f64 * eps / 2.0)
}

/// Lower bound from the cost lemma when `mu` is uniform: smallest `m` that the lemma
/// does not exclude at scale `eps`.
pub fn uniform_separated_bound(mu: &DiscreteMeasure, eps: f64) -> Option<Certificate> {
    if !mu.is_uniform() || mu.len() < 2 {
        return None;
    }
    let space = mu.space();
    let pts: Vec<usize> = mu.support().collect();
    let mut sep = f64::INFINITY;
    for (a, &x) in pts.iter().enumerate() {
        for &y in &pts[a + 1..] {
            sep = sep.min(space.dist(x, y));
        }
    }
    cost_lemma_certificate(pts.len(), sep, eps)
}

/// Certificate for a uniform measure on `n` points pairwise at least `sep` apart.
pub fn cost_lemma_certificate(n: usize, sep: f64, eps: f64) -> Option<Certificate> {
    if n < 2 || !(sep > 0.0) {
        return None;
    }
    // largest m < n whose cost exceeds eps
    let excluded = (1..n)
        .rev()
        .find(|&m| cost_lower_bound(n, m, sep).is_ok_and(|c| c > eps))?;
    Some(Certificate {
        direction: Direction::Lower,
        scale: eps,
        bound: excluded as u64 + 1,
        chain: vec![Step {
            rule: Rule::CostLemma,
            detail: format!(
                "uniform on {n} points with separation {sep}: any {excluded}-point measure is at W1 >= {} > {eps}",
                cost_lower_bound(n, excluded, sep).unwrap_or(0.0)
            ),
        }],
    })
}

/// Lower bound from well-separated cells.
///
/// Take centres `P` pairwise more than `2R` apart and cells `B(p, r)`, `r < R`. A
/// candidate set of `m` points comes within `R` of at most `m` centres, every other
/// cell sits at distance at least `R - r`, so the cost is at least the sum of the
/// `|P| - m` lightest cell masses times `(R - r)^q`.
pub fn separated_cells_bound(mu: &DiscreteMeasure, eps: f64, q: f64) -> Option<Certificate> {
    let space = mu.space();
    let target = eps.powf(q);
    let mut order: Vec<usize> = (0..mu.len()).collect();
    order.sort_by(|&a, &b| mu.atoms()[b].1.total_cmp(&mu.atoms()[a].1).then(a.cmp(&b)));
    let points: Vec<usize> = order.iter().map(|&k| mu.atoms()[k].0).collect();
    let diam = {
        let first = points[0];
        2.0 * points.iter().map(|&p| space.dist(first, p)).fold(0.0, f64::max)
    };
    let mut best: Option<Certificate> = None;
    let mut big_r = eps;
    while big_r <= diam {
        let centres = greedy_separated_subset(space, points.iter().copied(), 2.0 * big_r);
        if centres.len() >= 2 {
            for frac in [0.0, 0.25, 0.5, 0.75] {
                let r = big_r * frac;
                let reach = (big_r - r).powf(q);
                if !(reach > target) {
                    continue;
                }
                let mut masses: Vec<f64> = centres
                    .iter()
                    .map(|&c| {
                        mu.atoms()
                            .iter()
                            .filter(|a| space.dist(a.0, c) <= r)
                            .map(|a| a.1)
                            .sum()
                    })
                    .collect();
                masses.sort_by(f64::total_cmp);
                let s = centres.len();
                // largest m < s with cost(m) > target
                let mut prefix = 0.0;
                let mut excluded = 0;
                for (k, w) in masses.iter().enumerate() {
                    prefix += w;
                    let m = s - 1 - k;
                    if m >= 1 && prefix * reach > target {
                        excluded = m;
                        break;
                    }
                }
                if excluded >= 1 && best.as_ref().is_none_or(|b| b.bound < excluded as u64 + 1) {
                    best = Some(Certificate {
                        direction: Direction::Lower,
                        scale: eps,
                        bound: excluded as u64 + 1,
                        chain: vec![Step {
                            rule: Rule::SeparatedCells,
                            detail: format!(
                                "{s} centres pairwise > {}, cell radius {r}: {excluded} points leave cost >= {} > {target}",
                                2.0 * big_r,
                                masses[..s - excluded].iter().sum::<f64>() * reach
                            ),
                        }],
                    });
                }
            }
        }
        big_r *= 1.25;
    }
    best
}

/// `mu >= t mu1` atomwise gives `Q_mu(t eps) >= Q_mu1(eps)`.
pub fn submeasure_bound(
    mu: &DiscreteMeasure,
    mu1: &DiscreteMeasure,
    t: f64,
    inner: &Certificate,
) -> Result<Certificate> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidRange(format!("t must be in (0, 1], got {t}")));
    }
    if !mu.same_ambient(mu1) {
        return Err(Error::DifferentAmbient);
    }
    for &(p, w) in mu1.atoms() {
        let have = mu.mass_of(p);
        if have < t * w - CHECK_TOL {
            return Err(Error::NotSubmeasure {
                point: p,
                mass: have,
                required: t * w,
            });
        }
    }
    let mut out = inner.clone();
    out.scale = t * inner.scale;
    out.chain.push(Step {
        rule: Rule::Submeasure,
        detail: format!("mu >= {t} * mu1 atomwise: Q_mu({}) >= {}", out.scale, out.bound),
    });
    Ok(out)
}

/// A `kappa`-Lipschitz map gives `Q_mu(eps) >= Q_{f*mu}(kappa eps)`.
///
/// The Lipschitz constant is checked on every pair of support points. `inner` is the
/// bound for the image measure at scale `kappa * eps`.
pub fn lipschitz_pushforward_bound(
    mu: &DiscreteMeasure,
    image: &DiscreteMeasure,
    map: impl Fn(usize) -> usize,
    kappa: f64,
    inner: &Certificate,
) -> Result<Certificate> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidRange(format!("kappa must be positive, got {kappa}")));
    }
    let src = mu.space();
    let dst = image.space();
    let pts: Vec<usize> = mu.support().collect();
    for (k, &a) in pts.iter().enumerate() {
        for &b in &pts[k + 1..] {
            if dst.dist(map(a), map(b)) > kappa * src.dist(a, b) + CHECK_TOL {
                return Err(Error::LipschitzViolated { kappa, a, b });
            }
        }
    }
    let mut out = inner.clone();
    out.scale = inner.scale / kappa;
    out.chain.push(Step {
        rule: Rule::LipschitzPushforward,
        detail: format!("{kappa}-Lipschitz image: Q_mu({}) >= {}", out.scale, out.bound),
    });
    Ok(out)
}

/// `W_1(mu1, mu2) <= eps` gives `Q_mu2(2 eps) <= Q_mu1(eps)`.
pub fn continuity_bound(
    mu1: &DiscreteMeasure,
    mu2: &DiscreteMeasure,
    eps: f64,
    q_mu1: u64,
) -> Result<Certificate> {
    let d = wasserstein_distance(mu1, mu2, 1.0)?;
    if d > eps + CHECK_TOL {
        return Err(Error::DistanceTooLarge {
            distance: d,
            limit: eps,
        });
    }
    Ok(Certificate {
        direction: Direction::Upper,
        scale: 2.0 * eps,
        bound: q_mu1,
        chain: vec![Step {
            rule: Rule::Continuity,
            detail: format!("W1(mu1, mu2) = {d} <= {eps}: Q_mu2({}) <= Q_mu1({eps}) = {q_mu1}", 2.0 * eps),
        }],
    })
}
