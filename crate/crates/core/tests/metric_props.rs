use std::sync::Arc;

use emergence::metric::{covering_bounds, exact_covering_number, exact_packing_number, greedy_separated_set};
use emergence::transport::{check_holder_comparisons, wasserstein_distance};
use emergence::{DiscreteMeasure, FiniteMetricSpace};
use proptest::prelude::*;

fn space_strategy(min: usize, max: usize) -> impl Strategy<Value = Arc<FiniteMetricSpace>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), min..=max)
        .prop_map(|pts| Arc::new(FiniteMetricSpace::euclidean(pts).unwrap()))
}

fn scales(space: &FiniteMetricSpace) -> impl Iterator<Item = f64> {
    let diam = space.diam().max(1e-9);
    (1..=10).map(move |k| diam * k as f64 / 10.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn greedy_bracket_contains_exact(space in space_strategy(1, 12)) {
        for eps in scales(&space) {
            let b = covering_bounds(&space, eps).unwrap();
            let d = exact_covering_number(&space, eps).unwrap();
            prop_assert!(b.lower <= d && d <= b.upper, "{b:?} vs {d}");
        }
    }

    #[test]
    fn covering_between_packings(space in space_strategy(1, 8)) {
        for eps in scales(&space) {
            let d = exact_covering_number(&space, eps).unwrap();
            prop_assert!(exact_packing_number(&space, 2.0 * eps).unwrap() <= d);
            prop_assert!(d <= exact_packing_number(&space, eps).unwrap());
        }
    }

    #[test]
    fn greedy_set_is_separated_and_dense(space in space_strategy(1, 30), frac in 0.05f64..0.8) {
        let eps = space.diam().max(1e-9) * frac;
        let set = greedy_separated_set(&space, eps);
        for (a, &x) in set.iter().enumerate() {
            for &y in &set[a + 1..] {
                prop_assert!(space.dist(x, y) > eps);
            }
        }
        for p in 0..space.len() {
            prop_assert!(set.iter().any(|&c| space.dist(p, c) <= eps));
        }
    }

    #[test]
    fn holder_comparisons_hold(
        space in space_strategy(6, 6),
        wa in prop::collection::vec(0.0f64..1.0, 6),
        wb in prop::collection::vec(0.0f64..1.0, 6),
    ) {
        prop_assume!(wa.iter().sum::<f64>() > 0.1 && wb.iter().sum::<f64>() > 0.1);
        let mu = DiscreteMeasure::normalized(space.clone(), wa.into_iter().enumerate()).unwrap();
        let nu = DiscreteMeasure::normalized(space, wb.into_iter().enumerate()).unwrap();
        for (p, q) in [(2.0, 1.0), (3.0, 1.0), (3.0, 2.0)] {
            let rep = check_holder_comparisons(&mu, &nu, p, q).unwrap();
            prop_assert!(rep.passed(), "{rep:?}");
        }
    }
}

#[test]
fn dirac_isometry() {
    let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![(i * 3 % 7) as f64 / 7.0, (i * i % 5) as f64 / 5.0]).collect();
    let space = Arc::new(FiniteMetricSpace::euclidean(pts).unwrap());
    for x in 0..space.len() {
        for y in 0..space.len() {
            let a = DiscreteMeasure::dirac(space.clone(), x).unwrap();
            let b = DiscreteMeasure::dirac(space.clone(), y).unwrap();
            for p in [1.0, 2.0, 3.5] {
                assert!((wasserstein_distance(&a, &b, p).unwrap() - space.dist(x, y)).abs() <= 1e-12);
            }
        }
    }
}
