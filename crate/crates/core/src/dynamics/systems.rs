use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{annulus_distance, circle_distance, FiniteMetricSpace};

/// A point of a phase space that can be compared and put on a regular grid.
pub trait PhasePoint: Clone + Send + Sync {
    fn distance(&self, other: &Self) -> f64;
    /// Circle coordinate in `[0, 1)`; distances dominate its circle offset.
    fn angle(&self) -> f64;
    /// Grid cell with `bins` cells per coordinate.
    fn bin(&self, bins: usize) -> usize;
    /// Centres of the grid cells, indexed like [`bin`](Self::bin).
    fn bin_space(bins: usize) -> Result<FiniteMetricSpace>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub name: String,
    pub parameters: Vec<(String, f64)>,
}

/// A deterministic self-map of a phase space.
pub trait MapSystem: Send + Sync {
    type Point: PhasePoint;
    fn apply(&self, x: &Self::Point) -> Self::Point;
    fn descriptor(&self) -> SystemDescriptor;
}

fn cell(x: f64, bins: usize) -> usize {
    ((x * bins as f64) as usize).min(bins - 1)
}

fn centre(k: usize, bins: usize) -> f64 {
    (k as f64 + 0.5) / bins as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPoint {
    theta: f64,
    rho: f64,
}

impl AnnulusPoint {
    pub fn new(theta: f64, rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidRange(format!("height {rho} outside [0, 1]")));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidRange(format!("angle {theta} is not finite")));
        }
        Ok(Self {
            theta: theta.rem_euclid(1.0),
            rho,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

impl PhasePoint for AnnulusPoint {
    fn distance(&self, other: &Self) -> f64 {
        annulus_distance([self.theta, self.rho], [other.theta, other.rho])
    }

    fn angle(&self) -> f64 {
        self.theta
    }

    fn bin(&self, bins: usize) -> usize {
        cell(self.rho, bins) * bins + cell(self.theta, bins)
    }

    fn bin_space(bins: usize) -> Result<FiniteMetricSpace> {
        let pts = (0..bins * bins).map(|k| [centre(k % bins, bins), centre(k / bins, bins)]).collect();
        FiniteMetricSpace::annulus(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(x: f64) -> Self {
        Self(x.rem_euclid(1.0))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl PhasePoint for CirclePoint {
    fn distance(&self, other: &Self) -> f64 {
        circle_distance(self.0, other.0)
    }

    fn angle(&self) -> f64 {
        self.0
    }

    fn bin(&self, bins: usize) -> usize {
        cell(self.0, bins)
    }

    fn bin_space(bins: usize) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::circle((0..bins).map(|k| centre(k, bins)).collect())
    }
}

/// Digits beyond the 64-bit window of a [`DoublingPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DigitTail {
    /// Repeats the `period` low bits of `digits`, most significant first; `phase` is
    /// the next digit to emit.
    Periodic { digits: u64, period: u32, phase: u32 },
    /// Seeded pseudo-random digits.
    Pseudo { state: u64 },
}

impl DigitTail {
    fn next(&mut self) -> u64 {
        match self {
            DigitTail::Periodic { digits, period, phase } => {
                let d = *digits >> (*period - 1 - *phase) & 1;
                *phase = (*phase + 1) % *period;
                d
            }
            DigitTail::Pseudo { state } => {
                *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
                let mut z = *state;
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
                (z ^ (z >> 31)) >> 63
            }
        }
    }
}

/// A point of `R/Z` as a window of 64 binary digits followed by a digit source, so
/// that doubling shifts in fresh digits instead of running out of precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingPoint {
    window: u64,
    tail: DigitTail,
}

impl DoublingPoint {
    /// `k / (2^p - 1)`, whose expansion repeats the `p`-bit word `k`.
    pub fn periodic(k: u64, period: u32) -> Result<Self> {
        if period == 0 || period > 63 || k >= (1 << period) - 1 {
            return Err(Error::InvalidRange(format!("need k < 2^p - 1 and 1 <= p <= 63, got k={k}, p={period}")));
        }
        let mut tail = DigitTail::Periodic {
            digits: k,
            period,
            phase: 0,
        };
        let mut window = 0;
        for _ in 0..64 {
            window = window << 1 | tail.next();
        }
        Ok(Self { window, tail })
    }

    /// `x` truncated to 64 digits, continued by seeded pseudo-random digits.
    pub fn from_value(x: f64, seed: u64) -> Self {
        let x = x.rem_euclid(1.0);
        Self {
            window: (x * 2f64.powi(64)) as u64,
            tail: DigitTail::Pseudo { state: seed },
        }
    }

    pub fn value(&self) -> f64 {
        self.window as f64 / 2f64.powi(64)
    }
}

impl PhasePoint for DoublingPoint {
    fn distance(&self, other: &Self) -> f64 {
        circle_distance(self.value(), other.value())
    }

    fn angle(&self) -> f64 {
        self.value()
    }

    fn bin(&self, bins: usize) -> usize {
        cell(self.value(), bins)
    }

    fn bin_space(bins: usize) -> Result<FiniteMetricSpace> {
        CirclePoint::bin_space(bins)
    }
}

/// Rotation number as a function of height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Omega {
    /// `a + b rho`
    Affine { a: f64, b: f64 },
    /// `a + b rho + c rho^2`
    Quadratic { a: f64, b: f64, c: f64 },
}

impl Omega {
    pub fn eval(&self, rho: f64) -> f64 {
        match *self {
            Omega::Affine { a, b } => a + b * rho,
            Omega::Quadratic { a, b, c } => a + rho * (b + c * rho),
        }
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        match *self {
            Omega::Affine { b, .. } => b,
            Omega::Quadratic { b, c, .. } => b + 2.0 * c * rho,
        }
    }

    /// `omega'` keeps one strict sign on a grid of `[0, 1]`.
    pub fn is_twist(&self) -> bool {
        let grid = (0..=1000).map(|k| self.derivative(k as f64 / 1000.0));
        let signs: Vec<f64> = grid.map(f64::signum).collect();
        signs.iter().all(|&s| s > 0.0) || signs.iter().all(|&s| s < 0.0)
    }

    /// Parses `affine:a,b` or `quadratic:a,b,c`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("omega {s:?} lacks a kind")))?;
        let v: Vec<f64> = args
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("omega {s:?}: {e}")))?;
        match (kind, v.as_slice()) {
            ("affine", &[a, b]) => Ok(Omega::Affine { a, b }),
            ("quadratic", &[a, b, c]) => Ok(Omega::Quadratic { a, b, c }),
            _ => Err(Error::InvalidInput(format!("unknown omega {s:?}"))),
        }
    }
}

/// `(theta, rho) -> (theta + omega(rho) t, rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistMap {
    omega: Omega,
    t: f64,
    rigid: bool,
}

impl TwistMap {
    pub fn new(omega: Omega, t: f64) -> Result<Self> {
        if !omega.is_twist() {
            return Err(Error::InvalidInput(format!("{omega:?} has a critical point in [0, 1]")));
        }
        Ok(Self { omega, t, rigid: false })
    }

    /// Every circle rotated by the same `alpha`.
    pub fn rigid(alpha: f64) -> Self {
        Self {
            omega: Omega::Affine { a: alpha, b: 0.0 },
            t: 1.0,
            rigid: true,
        }
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    pub fn time(&self) -> f64 {
        self.t
    }
}

impl MapSystem for TwistMap {
    type Point = AnnulusPoint;

    fn apply(&self, x: &AnnulusPoint) -> AnnulusPoint {
        AnnulusPoint {
            theta: (x.theta + self.omega.eval(x.rho) * self.t).rem_euclid(1.0),
            rho: x.rho,
        }
    }

    fn descriptor(&self) -> SystemDescriptor {
        let mut parameters = match self.omega {
            Omega::Affine { a, b } => vec![("omega_a".into(), a), ("omega_b".into(), b)],
            Omega::Quadratic { a, b, c } => {
                vec![("omega_a".into(), a), ("omega_b".into(), b), ("omega_c".into(), c)]
            }
        };
        parameters.push(("t".into(), self.t));
        SystemDescriptor {
            name: if self.rigid { "rigid_rotation" } else { "twist" }.into(),
            parameters,
        }
    }
}

/// `x -> x + alpha` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleRotation {
    pub alpha: f64,
}

impl MapSystem for CircleRotation {
    type Point = CirclePoint;

    fn apply(&self, x: &CirclePoint) -> CirclePoint {
        CirclePoint::new(x.0 + self.alpha)
    }

    fn descriptor(&self) -> SystemDescriptor {
        SystemDescriptor {
            name: "rotation".into(),
            parameters: vec![("alpha".into(), self.alpha)],
        }
    }
}

/// `x -> 2x mod 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoublingMap;

impl MapSystem for DoublingMap {
    type Point = DoublingPoint;

    fn apply(&self, x: &DoublingPoint) -> DoublingPoint {
        let mut tail = x.tail;
        DoublingPoint {
            window: x.window << 1 | tail.next(),
            tail,
        }
    }

    fn descriptor(&self) -> SystemDescriptor {
        SystemDescriptor {
            name: "doubling".into(),
            parameters: Vec::new(),
        }
    }
}

/// The first `n` points of the orbit of `x`.
pub fn orbit<S: MapSystem>(system: &S, x: &S::Point, n: usize) -> Vec<S::Point> {
    std::iter::successors(Some(x.clone()), |p| Some(system.apply(p))).take(n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_digits() {
        let third = DoublingPoint::periodic(1, 2).unwrap();
        assert!((third.value() - 1.0 / 3.0).abs() < 1e-15);
        let next = DoublingMap.apply(&third);
        assert!((next.value() - 2.0 / 3.0).abs() < 1e-15);
        let back = DoublingMap.apply(&next);
        assert_eq!(back, third);
        let p = DoublingPoint::periodic(5, 4).unwrap();
        let orbit = orbit(&DoublingMap, &p, 9);
        assert_eq!(orbit[0], orbit[4]);
        assert_eq!(orbit[4], orbit[8]);
    }

    #[test]
    fn doubling_does_not_collapse() {
        let x = DoublingPoint::from_value(0.123456789, 3);
        let far = orbit(&DoublingMap, &x, 500);
        assert!(far[400..].iter().any(|p| p.value() > 0.1));
    }

    #[test]
    fn twist_preserves_height() {
        let f = TwistMap::new(Omega::Affine { a: 0.1, b: 1.0 }, 1.0).unwrap();
        let x = AnnulusPoint::new(0.95, 0.3).unwrap();
        let y = f.apply(&x);
        assert_eq!(y.rho(), 0.3);
        assert!((y.theta() - 0.35).abs() < 1e-12);
        assert!(TwistMap::new(Omega::Quadratic { a: 0.0, b: -1.0, c: 1.0 }, 1.0).is_err());
        assert!(AnnulusPoint::new(0.0, 1.5).is_err());
    }

    #[test]
    fn omega_parsing() {
        assert_eq!(Omega::parse("affine:0.1,1.0").unwrap(), Omega::Affine { a: 0.1, b: 1.0 });
        assert!(Omega::parse("cubic:1").is_err());
    }

    #[test]
    fn bins_index_centres() {
        let s = AnnulusPoint::bin_space(4).unwrap();
        let x = AnnulusPoint::new(0.3, 0.9).unwrap();
        assert_eq!(s.coords(x.bin(4)), &[0.375, 0.875]);
    }
}
