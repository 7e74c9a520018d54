//! Finitely supported probability measures.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Geometry};

const MASS_TOL: f64 = 1e-12;

/// A probability measure on a [`FiniteMetricSpace`], stored as atoms sorted by point.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    space: Arc<FiniteMetricSpace>,
    atoms: Vec<(usize, f64)>,
}

impl DiscreteMeasure {
    /// Merges duplicate points, drops zero weights and checks total mass.
    pub fn new(space: Arc<FiniteMetricSpace>, atoms: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let atoms = merge(&space, atoms)?;
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {total} != 1")));
        }
        Ok(Self { space, atoms })
    }

    /// Like [`new`](Self::new) but rescales the weights to total mass one.
    pub fn normalized(
        space: Arc<FiniteMetricSpace>,
        atoms: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let mut atoms = merge(&space, atoms)?;
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidMeasure("zero total mass".into()));
        }
        for a in &mut atoms {
            a.1 /= total;
        }
        Ok(Self { space, atoms })
    }

    pub fn dirac(space: Arc<FiniteMetricSpace>, point: usize) -> Result<Self> {
        Self::new(space, [(point, 1.0)])
    }

    pub fn uniform(space: Arc<FiniteMetricSpace>, points: &[usize]) -> Result<Self> {
        Self::normalized(space, points.iter().map(|&p| (p, 1.0)))
    }

    /// Uniform measure on every point of the space.
    pub fn uniform_on_space(space: Arc<FiniteMetricSpace>) -> Self {
        let n = space.len();
        let w = 1.0 / n as f64;
        Self {
            space,
            atoms: (0..n).map(|i| (i, w)).collect(),
        }
    }

    /// Convex combination `sum c_k mu_k`; coefficients must sum to one.
    pub fn mixture(parts: &[(f64, &DiscreteMeasure)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidMeasure("empty mixture".into()))?
            .1;
        if parts.iter().any(|(_, m)| !first.same_ambient(m)) {
            return Err(Error::DifferentAmbient);
        }
        let atoms = parts
            .iter()
            .flat_map(|(c, m)| m.atoms.iter().map(move |&(p, w)| (p, c * w)));
        Self::new(first.space.clone(), atoms)
    }

    /// Image under a point map into `target`.
    pub fn pushforward(&self, target: Arc<FiniteMetricSpace>, map: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(target, self.atoms.iter().map(|&(p, w)| (map(p), w)))
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn atoms(&self) -> &[(usize, f64)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.atoms.iter().map(|a| a.0)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass of a single point.
    pub fn mass_of(&self, point: usize) -> f64 {
        self.atoms
            .binary_search_by_key(&point, |a| a.0)
            .map_or(0.0, |i| self.atoms[i].1)
    }

    pub fn same_ambient(&self, other: &DiscreteMeasure) -> bool {
        self.space.id() == other.space.id()
    }

    /// True when all weights agree within `1e-12`.
    pub fn is_uniform(&self) -> bool {
        let w = 1.0 / self.atoms.len() as f64;
        self.atoms.iter().all(|a| (a.1 - w).abs() <= MASS_TOL)
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            space: SpaceJson::Inline(self.space.geometry().clone()),
            atoms: self.atoms.clone(),
        }
    }

    /// Builds a measure from its JSON form. A named space must be supplied in `named`.
    pub fn from_json(json: MeasureJson, named: Option<&Arc<FiniteMetricSpace>>) -> Result<Self> {
        let space = match json.space {
            SpaceJson::Inline(g) => Arc::new(FiniteMetricSpace::from_geometry(g)?),
            SpaceJson::Named(name) => named
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("space `{name}` not supplied")))?,
        };
        Self::new(space, json.atoms)
    }
}

fn merge(space: &FiniteMetricSpace, atoms: impl IntoIterator<Item = (usize, f64)>) -> Result<Vec<(usize, f64)>> {
    let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
    for (p, w) in atoms {
        if p >= space.len() {
            return Err(Error::InvalidMeasure(format!("point {p} outside the space")));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidMeasure(format!("weight {w} at point {p}")));
        }
        *merged.entry(p).or_insert(0.0) += w;
    }
    let atoms: Vec<(usize, f64)> = merged.into_iter().filter(|a| a.1 > 0.0).collect();
    if atoms.is_empty() {
        return Err(Error::InvalidMeasure("no atoms".into()));
    }
    Ok(atoms)
}

/// JSON form: `{ "space": <name or inline geometry>, "atoms": [[point, weight], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub space: SpaceJson,
    pub atoms: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceJson {
    Named(String),
    Inline(Geometry),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Arc<FiniteMetricSpace> {
        Arc::new(FiniteMetricSpace::line(xs).unwrap())
    }

    #[test]
    fn merges_and_drops() {
        let s = line(&[0.0, 1.0, 2.0]);
        let m = DiscreteMeasure::new(s, [(1, 0.25), (0, 0.5), (1, 0.25), (2, 0.0)]).unwrap();
        assert_eq!(m.atoms(), &[(0, 0.5), (1, 0.5)]);
    }

    #[test]
    fn rejects_bad_mass() {
        let s = line(&[0.0, 1.0]);
        assert!(DiscreteMeasure::new(s.clone(), [(0, 0.5)]).is_err());
        assert!(DiscreteMeasure::new(s, [(0, 1.5), (1, -0.5)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = line(&[0.0, 0.5]);
        let m = DiscreteMeasure::uniform(s, &[0, 1]).unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back = DiscreteMeasure::from_json(serde_json::from_str(&text).unwrap(), None).unwrap();
        assert_eq!(back.atoms(), m.atoms());
        assert_eq!(back.space().dist(0, 1), 0.5);
    }

    #[test]
    fn mixture_requires_shared_space() {
        let a = DiscreteMeasure::dirac(line(&[0.0]), 0).unwrap();
        let b = DiscreteMeasure::dirac(line(&[0.0]), 0).unwrap();
        assert!(matches!(
            DiscreteMeasure::mixture(&[(0.5, &a), (0.5, &b)]),
            Err(Error::DifferentAmbient)
        ));
    }
}
