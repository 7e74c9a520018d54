use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

fn choose(n: u64, k: u64) -> BigUint {
    binomial(BigUint::from(n), BigUint::from(k))
}

/// Number of balanced words reachable from a balanced word of length `n_bits` by
/// swapping at most `max_flips` ones with zeros: `sum_k C(N/2, k)^2`.
pub fn ball_cardinality(n_bits: u64, max_flips: u64) -> BigUint {
    let half = n_bits / 2;
    (0..=max_flips.min(half)).map(|k| choose(half, k).pow(2)).sum()
}

/// Number of balanced words of length `n_bits`.
pub fn balanced_count(n_bits: u64) -> BigUint {
    choose(n_bits, n_bits / 2)
}

/// Size guaranteed for a maximal code at distance `min_dist`:
/// `ceil(C(N, N/2) / ball(N, floor(min_dist/2)))`.
pub fn covering_size_bound(n_bits: u64, min_dist: u64) -> BigUint {
    let ball = ball_cardinality(n_bits, min_dist / 2);
    let total = balanced_count(n_bits);
    (total + &ball - 1u32) / ball
}

/// `(2N)^(-1/2) e^(pi N / 64)`.
pub fn code_size_closed_form(n_bits: u64) -> f64 {
    let n = n_bits as f64;
    (2.0 * n).powf(-0.5) * (std::f64::consts::PI * n / 64.0).exp()
}

/// `C(N, N/2) >= 2^N / sqrt(2N)`, checked as `C(N, N/2)^2 * 2N >= 4^N` in integers.
pub fn central_binomial_check(n_bits: u64) -> bool {
    balanced_count(n_bits).pow(2) * BigUint::from(2 * n_bits) >= BigUint::one() << (2 * n_bits)
}

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinCheck {
    pub n: u64,
    pub delta: f64,
    #[serde(serialize_with = "ratio_string")]
    pub exact_tail: BigRational,
    pub bound: f64,
    pub holds: bool,
}

fn ratio_string<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub const BERNSTEIN_LIMIT: u64 = 64;

/// Exact `P[H_n / n <= 1/2 - delta]` for a fair coin against `exp(-(pi/4) delta^2 n)`.
pub fn bernstein_check(n: u64, delta: f64) -> Result<BernsteinCheck> {
    if n == 0 || n > BERNSTEIN_LIMIT {
        return Err(Error::TooLarge {
            what: "trial count",
            got: n as usize,
            limit: BERNSTEIN_LIMIT as usize,
        });
    }
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::InvalidRange(format!("delta must be in [0, 1/2], got {delta}")));
    }
    let cut = n as f64 * (0.5 - delta);
    let kmax = (cut + 1e-9).floor();
    let hits: BigUint = if kmax < 0.0 {
        BigUint::zero()
    } else {
        (0..=kmax as u64).map(|k| choose(n, k)).sum()
    };
    let exact_tail = BigRational::new(hits.into(), (BigUint::one() << n).into());
    let bound = (-std::f64::consts::FRAC_PI_4 * delta * delta * n as f64).exp();
    let holds = exact_tail.to_f64().is_some_and(|t| t <= bound);
    Ok(BernsteinCheck {
        n,
        delta,
        exact_tail,
        bound,
        holds,
    })
}
