use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{ratio, ratio_string};
use crate::error::{Error, Result};

/// Numerology of one annulus construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionParams {
    pub n: u64,
    /// Number of colours, `32 n^2`.
    pub colors: u64,
    /// Number of U-rows `M`, a multiple of `n`.
    pub rows: u64,
    /// L-rows inside each G-square, `M / n`.
    pub rows_per_square: u64,
    #[serde(serialize_with = "ratio_string")]
    pub eta: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub kappa: BigRational,
    pub rows_cap: Option<u64>,
    /// Largest multiple of `n` below `(2N)^{-1/2} e^{pi N / 64}`.
    #[serde(serialize_with = "display_string")]
    pub paper_rows: BigUint,
    /// `ln` of the real bound `(2N)^{-1/2} e^{pi N / 64}`.
    pub log_paper_bound: f64,
}

fn display_string<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl ConstructionParams {
    /// `log M / n^2` for the uncapped row count; stays bounded away from 0 and infinity.
    pub fn magnitude_ratio(&self) -> f64 {
        self.log_paper_bound / (self.n * self.n) as f64
    }

    pub fn side(&self) -> BigRational {
        ratio(1, 10 * self.n as i64)
    }

    pub fn gap(&self) -> BigRational {
        ratio(1, 40 * self.n as i64)
    }

    /// Width `2 kappa / N` of L- and U-boxes.
    pub fn box_width(&self) -> BigRational {
        &self.kappa * ratio(2, self.colors as i64)
    }

    /// Height `1 / (11 M)` of L- and U-boxes.
    pub fn box_height(&self) -> BigRational {
        ratio(1, 11 * self.rows as i64)
    }

    /// Mass `2 kappa / N` carried by one box of a circle.
    pub fn atom_mass(&self) -> BigRational {
        self.box_width()
    }
}

pub fn derive_params(n: u64, rows_cap: Option<u64>) -> Result<ConstructionParams> {
    if n < 3 {
        return Err(Error::InvalidRange(format!("n must be at least 3, got {n}")));
    }
    let colors = 32 * n * n;
    let bound = paper_row_bound(colors);
    let paper_rows = &bound / n * n;
    let rows = match rows_cap {
        Some(cap) => {
            let capped = cap / n * n;
            if capped == 0 {
                return Err(Error::InvalidRange(format!("row cap {cap} is below n = {n}")));
            }
            match paper_rows.to_u64() {
                Some(p) => p.min(capped),
                None => capped,
            }
        }
        None => paper_rows
            .to_u64()
            .ok_or(Error::TooLarge {
                what: "uncapped row count",
                got: usize::MAX,
                limit: u64::MAX as usize,
            })?,
    };
    let eta = ratio(1, 1000 * n as i64);
    let kappa = BigRational::one() - &eta;
    let log_paper_bound = std::f64::consts::PI * colors as f64 / 64.0 - 0.5 * (2.0 * colors as f64).ln();
    let params = ConstructionParams {
        n,
        colors,
        rows,
        rows_per_square: rows / n,
        eta,
        kappa,
        rows_cap,
        paper_rows,
        log_paper_bound,
    };
    check_feasible(&params)?;
    Ok(params)
}

fn check_feasible(p: &ConstructionParams) -> Result<()> {
    let side = p.side();
    let across = p.box_width() * ratio(p.n as i64, 1);
    let up = p.box_height() * ratio(p.rows_per_square as i64, 1);
    if across >= side || up >= side {
        return Err(Error::GeometryInfeasible(format!(
            "an {} x {} block of boxes does not fit in a square of side {side}",
            p.n, p.rows_per_square
        )));
    }
    if p.gap() <= p.box_width() {
        return Err(Error::GeometryInfeasible("boxes are wider than the gaps between squares".into()));
    }
    Ok(())
}

/// `floor((2N)^{-1/2} e^{pi N / 64})` in fixed-point integer arithmetic.
pub fn paper_row_bound(colors: u64) -> BigUint {
    let x = std::f64::consts::PI * colors as f64 / 64.0;
    let halvings = (x.max(1.0).log2().ceil() as usize) + 1;
    let int_bits = (x * std::f64::consts::LOG2_E).ceil() as usize;
    let prec = int_bits + halvings + 128;
    let one = BigUint::one() << prec;

    let y = (machin_pi(prec) * colors / 64u32) >> halvings;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k = 1u32;
    while !term.is_zero() {
        term = ((term * &y) >> prec) / k;
        sum += &term;
        k += 1;
    }
    for _ in 0..halvings {
        sum = (&sum * &sum) >> prec;
    }
    let root = (BigUint::from(2 * colors) << (2 * prec)).sqrt();
    ((sum << prec) / root) >> prec
}

/// `pi * 2^prec` from Machin's formula.
fn machin_pi(prec: usize) -> BigUint {
    let guard = 32;
    let p = prec + guard;
    let pi = atan_inverse(5, p) * 16u32 - atan_inverse(239, p) * 4u32;
    pi >> guard
}

/// `atan(1/k) * 2^prec`.
fn atan_inverse(k: u32, prec: usize) -> BigUint {
    let k2 = BigUint::from(k) * k;
    let mut power = (BigUint::one() << prec) / k;
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        let t = &power / (2 * j + 1);
        if j.is_multiple_of(2) {
            plus += t;
        } else {
            minus += t;
        }
        power /= &k2;
        j += 1;
    }
    plus - minus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_n_numerology() {
        let p = derive_params(3, None).unwrap();
        assert_eq!(p.colors, 288);
        assert_eq!(p.eta, ratio(1, 3000));
        assert_eq!(p.kappa, ratio(2999, 3000));
        assert_eq!(p.rows % 3, 0);
        let capped = derive_params(3, Some(60)).unwrap();
        assert_eq!((capped.rows, capped.rows_per_square), (60, 20));
        assert_eq!(derive_params(4, Some(41)).unwrap().rows, 40);
        assert!(derive_params(2, None).is_err());
        assert!(derive_params(3, Some(2)).is_err());
    }

    #[test]
    fn bound_matches_floating_point() {
        for n in [3u64, 4] {
            let colors = 32 * n * n;
            let real = (std::f64::consts::PI * colors as f64 / 64.0).exp() / (2.0 * colors as f64).sqrt();
            let exact = paper_row_bound(colors).to_f64().unwrap();
            assert!(exact <= real && exact > real - 1.0, "n={n}: {exact} vs {real}");
            let rows = derive_params(n, None).unwrap().rows as f64;
            assert!(rows <= real && rows > real - n as f64);
        }
    }

    #[test]
    fn pi_digits() {
        let pi = machin_pi(200);
        let scaled: BigUint = (pi * BigUint::from(10u64).pow(40u32)) >> 200;
        assert_eq!(scaled.to_string(), "31415926535897932384626433832795028841971");
    }

    #[test]
    fn log_magnitude_is_quadratic() {
        for n in [5u64, 6, 8] {
            let p = derive_params(n, Some(n * 10)).unwrap();
            let digits = p.paper_rows.to_string().len() as f64;
            assert!((digits - p.log_paper_bound / std::f64::consts::LN_10).abs() < 1.5);
            assert!((p.magnitude_ratio() - std::f64::consts::PI / 2.0).abs() < 0.5);
        }
    }
}
