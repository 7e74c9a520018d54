//! Seeded low-discrepancy start points for reference measures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::systems::{AnnulusPoint, CirclePoint, DoublingPoint};
use crate::error::{Error, Result};

/// Reciprocal powers of the plastic number, the two-dimensional Kronecker rotation.
const R2: [f64; 2] = [0.754_877_666_246_692_8, 0.569_840_290_998_053_3];

/// `count` stratified points of `[0, 1)`, shifted by a seeded uniform offset.
pub fn stratified_unit(count: usize, seed: u64) -> Vec<f64> {
    let shift: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
    (0..count)
        .map(|i| ((i as f64 + 0.5) / count as f64 + shift).rem_euclid(1.0))
        .collect()
}

/// `count` points of `[0, 1)^2` from the Kronecker sequence with a seeded shift.
pub fn kronecker_square(count: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 2] = [rng.gen(), rng.gen()];
    (0..count)
        .map(|i| {
            let k = i as f64 + 1.0;
            [(shift[0] + k * R2[0]).rem_euclid(1.0), (shift[1] + k * R2[1]).rem_euclid(1.0)]
        })
        .collect()
}

/// Draws start points distributed like a reference measure.
pub trait StartSampler<P> {
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<P>>;
    fn describe(&self) -> String;
}

/// Lebesgue measure on the annulus.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnnulusLebesgue;

impl StartSampler<AnnulusPoint> for AnnulusLebesgue {
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<AnnulusPoint>> {
        kronecker_square(count, seed)
            .into_iter()
            .map(|[t, r]| AnnulusPoint::new(t, r))
            .collect()
    }

    fn describe(&self) -> String {
        "lebesgue on the annulus".into()
    }
}

/// Lebesgue measure on the circle at one height.
#[derive(Debug, Clone, Copy)]
pub struct InvariantCircle {
    pub rho: f64,
}

impl StartSampler<AnnulusPoint> for InvariantCircle {
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<AnnulusPoint>> {
        stratified_unit(count, seed)
            .into_iter()
            .map(|t| AnnulusPoint::new(t, self.rho))
            .collect()
    }

    fn describe(&self) -> String {
        format!("lebesgue on the circle at height {}", self.rho)
    }
}

/// Lebesgue measure on `R/Z`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircleLebesgue;

impl StartSampler<CirclePoint> for CircleLebesgue {
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<CirclePoint>> {
        Ok(stratified_unit(count, seed).into_iter().map(CirclePoint::new).collect())
    }

    fn describe(&self) -> String {
        "lebesgue on the circle".into()
    }
}

impl StartSampler<DoublingPoint> for CircleLebesgue {
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<DoublingPoint>> {
        if count == 0 {
            return Err(Error::InvalidRange("no samples requested".into()));
        }
        Ok(stratified_unit(count, seed)
            .into_iter()
            .enumerate()
            .map(|(i, x)| DoublingPoint::from_value(x, seed ^ (i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)))
            .collect())
    }

    fn describe(&self) -> String {
        "lebesgue on the circle".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratified_hits_every_cell() {
        let xs = stratified_unit(100, 9);
        let mut cells = [0usize; 100];
        for x in xs {
            cells[(x * 100.0) as usize % 100] += 1;
        }
        assert!(cells.iter().all(|&c| c == 1));
    }

    #[test]
    fn kronecker_fills_quadrants() {
        let pts = kronecker_square(4000, 1);
        for q in 0..4 {
            let n = pts
                .iter()
                .filter(|p| (p[0] >= 0.5) as usize + 2 * (p[1] >= 0.5) as usize == q)
                .count();
            assert!((n as i64 - 1000).abs() < 20, "{n}");
        }
    }
}
