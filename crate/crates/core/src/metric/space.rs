use std::io::Read;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

const AXIOM_TOL: f64 = 1e-12;
const EXHAUSTIVE_AXIOMS: usize = 64;

/// Distance on the unit circle `R/Z`.
#[inline]
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Distance on the annulus `R/Z x [0, 1]`: Euclidean in (circle offset, height offset).
#[inline]
pub fn annulus_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    circle_distance(a[0], b[0]).hypot(a[1] - b[1])
}

/// How distances are produced.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Euclidean { points: Vec<Vec<f64>> },
    Circle { points: Vec<f64> },
    Annulus { points: Vec<[f64; 2]> },
    Matrix { distances: Vec<Vec<f64>> },
}

/// A finite metric space with points indexed `0..len`.
///
/// Each space carries an identity; measures compare identities to decide whether
/// they share an ambient space. Clones keep the identity.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    id: u64,
    geometry: Geometry,
    flat: Vec<f64>,
    dim: usize,
    len: usize,
    diam: OnceLock<f64>,
}

impl FiniteMetricSpace {
    fn build(geometry: Geometry) -> Result<Self> {
        let (flat, dim, len) = match &geometry {
            Geometry::Euclidean { points } => {
                let dim = points.first().map_or(0, Vec::len);
                if points.iter().any(|p| p.len() != dim) {
                    return Err(Error::InvalidMetric("ragged coordinates".into()));
                }
                (points.concat(), dim, points.len())
            }
            Geometry::Circle { points } => (points.clone(), 1, points.len()),
            Geometry::Annulus { points } => {
                if points.iter().any(|p| !(0.0..=1.0).contains(&p[1])) {
                    return Err(Error::InvalidMetric("annulus height outside [0, 1]".into()));
                }
                (points.iter().flatten().copied().collect(), 2, points.len())
            }
            Geometry::Matrix { distances } => {
                let n = distances.len();
                if distances.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidMetric("distance matrix is not square".into()));
                }
                (distances.concat(), n, n)
            }
        };
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMetric("non-finite entry".into()));
        }
        if len == 0 {
            return Err(Error::InvalidMetric("empty space".into()));
        }
        Ok(Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            geometry,
            flat,
            dim,
            len,
            diam: OnceLock::new(),
        })
    }

    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(Geometry::Euclidean { points })
    }

    /// Points on the real line.
    pub fn line(xs: &[f64]) -> Result<Self> {
        Self::euclidean(xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn circle(points: Vec<f64>) -> Result<Self> {
        Self::build(Geometry::Circle {
            points: points.into_iter().map(|x| x.rem_euclid(1.0)).collect(),
        })
    }

    pub fn annulus(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::build(Geometry::Annulus {
            points: points.into_iter().map(|[t, r]| [t.rem_euclid(1.0), r]).collect(),
        })
    }

    /// A space given by its distance matrix. Metric axioms are checked.
    pub fn from_matrix(distances: Vec<Vec<f64>>) -> Result<Self> {
        let space = Self::build(Geometry::Matrix { distances })?;
        space.check_axioms(0)?;
        Ok(space)
    }

    /// Same as [`from_matrix`](Self::from_matrix) without the axiom check.
    pub fn from_matrix_unchecked(distances: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(Geometry::Matrix { distances })
    }

    pub fn from_geometry(geometry: Geometry) -> Result<Self> {
        let checked = matches!(geometry, Geometry::Matrix { .. });
        let space = Self::build(geometry)?;
        if checked {
            space.check_axioms(0)?;
        }
        Ok(space)
    }

    /// Reads a coordinates CSV (one point per row, optional header).
    pub fn from_coordinates_csv<R: Read>(reader: R) -> Result<Self> {
        Self::euclidean(read_numeric_rows(reader)?)
    }

    /// Reads a square distance-matrix CSV (optional header).
    pub fn from_matrix_csv<R: Read>(reader: R) -> Result<Self> {
        Self::from_matrix(read_numeric_rows(reader)?)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match self.geometry {
            Geometry::Euclidean { .. } => {
                let d = self.dim;
                if d == 1 {
                    return (self.flat[i] - self.flat[j]).abs();
                }
                let a = &self.flat[i * d..(i + 1) * d];
                let b = &self.flat[j * d..(j + 1) * d];
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            Geometry::Circle { .. } => circle_distance(self.flat[i], self.flat[j]),
            Geometry::Annulus { .. } => annulus_distance(
                [self.flat[2 * i], self.flat[2 * i + 1]],
                [self.flat[2 * j], self.flat[2 * j + 1]],
            ),
            Geometry::Matrix { .. } => self.flat[i * self.len + j],
        }
    }

    /// Coordinates of a point (empty for matrix spaces).
    pub fn coords(&self, i: usize) -> &[f64] {
        match self.geometry {
            Geometry::Matrix { .. } => &[],
            _ => &self.flat[i * self.dim..(i + 1) * self.dim],
        }
    }

    pub fn diam(&self) -> f64 {
        *self.diam.get_or_init(|| {
            let mut best = 0.0f64;
            for i in 0..self.len {
                for j in i + 1..self.len {
                    best = best.max(self.dist(i, j));
                }
            }
            best
        })
    }

    /// Smallest distance between distinct points (infinite for a single point).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len {
            for j in i + 1..self.len {
                best = best.min(self.dist(i, j));
            }
        }
        best
    }

    /// Checks symmetry, zero diagonal, nonnegativity and the triangle inequality.
    /// Exhaustive up to 64 points, otherwise on `10^5` seeded random triples.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.len;
        for i in 0..n {
            if self.dist(i, i).abs() > AXIOM_TOL {
                return Err(Error::InvalidMetric(format!("d({i}, {i}) != 0")));
            }
            for j in 0..n {
                let d = self.dist(i, j);
                if d < 0.0 {
                    return Err(Error::InvalidMetric(format!("d({i}, {j}) < 0")));
                }
                if (d - self.dist(j, i)).abs() > AXIOM_TOL {
                    return Err(Error::InvalidMetric(format!("d({i}, {j}) not symmetric")));
                }
            }
        }
        let triangle = |i: usize, j: usize, k: usize| -> Result<()> {
            if self.dist(i, k) > self.dist(i, j) + self.dist(j, k) + AXIOM_TOL {
                Err(Error::InvalidMetric(format!("triangle inequality fails at ({i}, {j}, {k})")))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_AXIOMS {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        triangle(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100_000 {
                triangle(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }
}

fn read_numeric_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if line == 0 => continue,
            Err(e) => return Err(Error::InvalidInput(format!("row {}: {e}", line + 1))),
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_wraps() {
        assert!((circle_distance(0.95, 0.05) - 0.1).abs() < 1e-15);
        assert_eq!(circle_distance(0.0, 0.5), 0.5);
    }

    #[test]
    fn annulus_combines_coordinates() {
        let d = annulus_distance([0.9, 0.2], [0.2, 0.6]);
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn csv_with_header() {
        let s = FiniteMetricSpace::from_coordinates_csv("x,y\n0,0\n3,4\n".as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.dist(0, 1), 5.0);
    }

    #[test]
    fn matrix_rejects_triangle_violation() {
        let d = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_matrix(d),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn clones_share_identity() {
        let a = FiniteMetricSpace::line(&[0.0, 1.0]).unwrap();
        let b = FiniteMetricSpace::line(&[0.0, 1.0]).unwrap();
        assert_eq!(a.id(), a.clone().id());
        assert_ne!(a.id(), b.id());
    }
}
