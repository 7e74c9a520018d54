use rayon::prelude::*;
use serde::Serialize;

use super::{BalancedCode, Word};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::transport::wasserstein_distance;

const TOL: f64 = 1e-9;

/// Measures `mu_f = (2/N) sum_i f(i) nu_i`, one per codeword `f`.
#[derive(Debug, Clone)]
pub struct ApartFamily {
    pub base: Vec<DiscreteMeasure>,
    pub epsilon: f64,
    pub words: Vec<Word>,
    pub members: Vec<DiscreteMeasure>,
    /// Distance the code guarantees between any two words.
    pub code_distance: usize,
}

fn support_gap(a: &DiscreteMeasure, b: &DiscreteMeasure) -> f64 {
    let space = a.space();
    a.support()
        .flat_map(|x| b.support().map(move |y| space.dist(x, y)))
        .fold(f64::INFINITY, f64::min)
}

pub fn apart_family(base: Vec<DiscreteMeasure>, epsilon: f64, code: &BalancedCode) -> Result<ApartFamily> {
    if base.len() != code.n_bits {
        return Err(Error::SizeMismatch(format!(
            "{} base measures for words of length {}",
            base.len(),
            code.n_bits
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidRange(format!("epsilon must be positive, got {epsilon}")));
    }
    if let Some(first) = base.first() {
        if base.iter().any(|b| !b.same_ambient(first)) {
            return Err(Error::DifferentAmbient);
        }
    }
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            if support_gap(&base[i], &base[j]) < epsilon - 1e-12 {
                return Err(Error::NotApart(i, j));
            }
        }
    }
    let share = 2.0 / code.n_bits as f64;
    let members = code
        .words
        .iter()
        .map(|w| {
            let parts: Vec<(f64, &DiscreteMeasure)> = w.ones().map(|i| (share, &base[i])).collect();
            DiscreteMeasure::mixture(&parts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApartFamily {
        base,
        epsilon,
        words: code.words.clone(),
        members,
        code_distance: code.min_dist,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub p: f64,
    pub pairs: usize,
    /// Smallest pairwise `W_p`, `None` for fewer than two members.
    pub min_distance: Option<f64>,
    /// `eps / 4^(1/p)` when the code distance is at least `N/4`.
    pub uniform_bound: Option<f64>,
    /// Pairs below `eps (Hamm(f, g) / N)^(1/p)`.
    pub violations: Vec<PairViolation>,
    pub holds: bool,
}

/// All pairwise `W_p` between members, each compared with the mass that must move at
/// least `eps`: `W_p^p >= eps^p Hamm(f, g) / N`.
pub fn verify_separation(family: &ApartFamily, p: f64) -> Result<SeparationReport> {
    let n = family.words.first().map_or(0, Word::len);
    let k = family.members.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let measured = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = wasserstein_distance(&family.members[i], &family.members[j], p)?;
            let hamm = family.words[i].distance_unchecked(&family.words[j]);
            let bound = family.epsilon * (hamm as f64 / n as f64).powf(1.0 / p);
            Ok((i, j, d, bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_distance = measured.iter().map(|m| m.2).reduce(f64::min);
    let uniform_bound = (4 * family.code_distance >= n).then(|| family.epsilon / 4f64.powf(1.0 / p));
    let violations: Vec<PairViolation> = measured
        .iter()
        .filter(|m| m.2 < m.3 - TOL)
        .map(|&(i, j, distance, bound)| PairViolation { i, j, distance, bound })
        .collect();
    let uniform_ok = match (uniform_bound, min_distance) {
        (Some(b), Some(d)) => d >= b - TOL,
        _ => true,
    };
    Ok(SeparationReport {
        p,
        pairs: pairs.len(),
        min_distance,
        uniform_bound,
        holds: violations.is_empty() && uniform_ok,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::codes::{separated_code, CodeMode};
    use crate::metric::FiniteMetricSpace;

    fn dirac_base(n: usize, gap: f64) -> Vec<DiscreteMeasure> {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * gap).collect();
        let s = Arc::new(FiniteMetricSpace::line(&xs).unwrap());
        (0..n).map(|i| DiscreteMeasure::dirac(s.clone(), i).unwrap()).collect()
    }

    #[test]
    fn two_words_give_the_base() {
        let base = dirac_base(2, 0.3);
        let code = BalancedCode {
            n_bits: 2,
            min_dist: 0,
            words: vec![Word::from_bits(&[1, 0]).unwrap(), Word::from_bits(&[0, 1]).unwrap()],
            maximal: false,
        };
        let fam = apart_family(base.clone(), 0.3, &code).unwrap();
        assert_eq!(fam.members[0].atoms(), base[0].atoms());
        assert_eq!(fam.members[1].atoms(), base[1].atoms());
    }

    #[test]
    fn members_are_balanced_mixtures() {
        let code = separated_code(8, 2, None, CodeMode::Exhaustive, 0).unwrap();
        let fam = apart_family(dirac_base(8, 0.1), 0.1, &code).unwrap();
        for m in &fam.members {
            assert_eq!(m.len(), 4);
            assert!(m.atoms().iter().all(|a| (a.1 - 0.25).abs() < 1e-15));
        }
        let rep = verify_separation(&fam, 1.0).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.uniform_bound, Some(0.025));
    }

    #[test]
    fn rejects_close_base() {
        let code = separated_code(4, 2, None, CodeMode::Exhaustive, 0).unwrap();
        assert!(matches!(apart_family(dirac_base(4, 0.1), 0.2, &code), Err(Error::NotApart(0, 1))));
        assert!(matches!(apart_family(dirac_base(3, 0.1), 0.1, &code), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn single_member_is_vacuous() {
        let code = separated_code(4, 2, Some(1), CodeMode::Exhaustive, 0).unwrap();
        let fam = apart_family(dirac_base(4, 1.0), 1.0, &code).unwrap();
        let rep = verify_separation(&fam, 2.0).unwrap();
        assert!(rep.holds && rep.min_distance.is_none());
    }
}
