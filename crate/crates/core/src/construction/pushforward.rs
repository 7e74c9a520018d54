use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::boxes::BoxFamilies;
use super::coloring::ColoredBoxFamilies;
use super::ratio_string;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::metric::FiniteMetricSpace;
use crate::transport::wasserstein_distance;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atom {
    #[serde(serialize_with = "ratio_string")]
    pub theta: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub rho: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub mass: BigRational,
    /// Colour of the originating U-box; `None` for the junk atom.
    pub color: Option<u32>,
}

impl Atom {
    fn point(&self) -> [f64; 2] {
        [
            self.theta.to_f64().unwrap_or(f64::NAN),
            self.rho.to_f64().unwrap_or(f64::NAN),
        ]
    }
}

/// Image of Lebesgue measure on the circle at height `rho` under the box translation.
///
/// The part of the circle inside a U-box is a horizontal segment; it is represented
/// by one atom at the midpoint of its translate.
#[derive(Debug, Clone, Serialize)]
pub struct PushforwardCircle {
    #[serde(serialize_with = "ratio_string")]
    pub rho: BigRational,
    pub row: usize,
    pub atoms: Vec<Atom>,
}

impl PushforwardCircle {
    pub fn total_mass(&self) -> BigRational {
        self.atoms.iter().map(|a| &a.mass).sum()
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.atoms.iter().map(Atom::point).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.mass.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

pub fn pushforward_circle(colored: &ColoredBoxFamilies, rho: &BigRational) -> Result<PushforwardCircle> {
    let fam = &colored.families;
    let row = fam.row_of(rho).ok_or_else(|| Error::RhoOutsideRows(rho.to_string()))?;
    let mass = fam.params.atom_mass();
    let mut atoms: Vec<Atom> = colored.row_colors[row]
        .iter()
        .zip(&colored.ranks[row])
        .enumerate()
        .map(|(k, (&color, &rank))| {
            let u = fam.u_box(row, k);
            let l = fam.l_box(color, rank);
            Atom {
                theta: l.centre_theta(),
                rho: &l.rho + (rho - &u.rho),
                mass: mass.clone(),
                color: Some(color),
            }
        })
        .collect();
    let (theta, height) = BoxFamilies::junk_point();
    atoms.push(Atom {
        theta,
        rho: height,
        mass: fam.params.eta.clone(),
        color: None,
    });
    Ok(PushforwardCircle {
        rho: rho.clone(),
        row,
        atoms,
    })
}

/// Exact `W_1` between two circles' measures on the annulus.
pub fn circle_w1(a: &PushforwardCircle, b: &PushforwardCircle) -> Result<f64> {
    if a.rho == b.rho && a.row == b.row {
        return Ok(0.0);
    }
    let mut points = a.points();
    points.extend(b.points());
    let space = Arc::new(FiniteMetricSpace::annulus(points)?);
    let k = a.atoms.len();
    let mu = DiscreteMeasure::new(space.clone(), a.weights().into_iter().enumerate())?;
    let nu = DiscreteMeasure::new(space, b.weights().into_iter().enumerate().map(|(i, w)| (k + i, w)))?;
    wasserstein_distance(&mu, &nu, 1.0)
}

/// Largest height offset between corresponding atoms of two circles.
pub fn max_height_shift(a: &PushforwardCircle, b: &PushforwardCircle) -> Option<BigRational> {
    if a.atoms.len() != b.atoms.len() {
        return None;
    }
    let mut worst = BigRational::zero();
    for (x, y) in a.atoms.iter().zip(&b.atoms) {
        if x.theta != y.theta || x.color != y.color {
            return None;
        }
        let d = (&x.rho - &y.rho).abs();
        if d > worst {
            worst = d;
        }
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::codes::{separated_code, CodeMode};
    use crate::construction::{build_families, color_families, derive_params, ratio};

    fn instance(n: u64, cap: u64) -> ColoredBoxFamilies {
        let p = derive_params(n, Some(cap)).unwrap();
        let code = separated_code(p.colors as usize, p.colors as usize / 4, Some(p.rows as usize), CodeMode::Randomized { max_rejections: 100 }, 3).unwrap();
        color_families(build_families(&p).unwrap(), &code).unwrap()
    }

    #[test]
    fn mass_is_exactly_one() {
        let c = instance(3, 30);
        let rho = c.families.row_height(7, &ratio(1, 2));
        let circle = pushforward_circle(&c, &rho).unwrap();
        assert_eq!(circle.atoms.len(), 145);
        assert_eq!(circle.total_mass(), BigRational::one());
        assert!((circle.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn atoms_land_in_their_colour() {
        let c = instance(3, 30);
        let f = &c.families;
        let circle = pushforward_circle(&c, &f.row_height(12, &ratio(1, 3))).unwrap();
        for a in circle.atoms.iter().filter(|a| a.color.is_some()) {
            let g = f.square(a.color.unwrap());
            assert!(g.theta <= a.theta && a.theta <= g.theta_end());
            assert!(g.rho <= a.rho && a.rho <= g.rho_end());
            assert!(a.rho <= ratio(1, 2));
        }
    }

    #[test]
    fn same_row_differs_only_in_height() {
        let c = instance(3, 30);
        let f = &c.families;
        let a = pushforward_circle(&c, &f.row_height(4, &ratio(1, 4))).unwrap();
        let b = pushforward_circle(&c, &f.row_height(4, &ratio(1, 2))).unwrap();
        let shift = max_height_shift(&a, &b).unwrap();
        assert!(shift <= f.params.box_height());
        assert_eq!(a.atoms.last(), b.atoms.last());
    }

    #[test]
    fn outside_rows_rejected() {
        let c = instance(3, 30);
        assert!(matches!(pushforward_circle(&c, &ratio(1, 4)), Err(Error::RhoOutsideRows(_))));
    }
}
