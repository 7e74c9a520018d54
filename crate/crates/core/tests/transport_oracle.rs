use std::sync::Arc;

use emergence::transport::{
    levy_prokhorov, levy_prokhorov_exhaustive, wasserstein, wasserstein_bruteforce, wasserstein_distance,
};
use emergence::{DiscreteMeasure, FiniteMetricSpace};
use proptest::prelude::*;

fn space_strategy(max: usize) -> impl Strategy<Value = Arc<FiniteMetricSpace>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 2..=max)
        .prop_map(|pts| Arc::new(FiniteMetricSpace::euclidean(pts).unwrap()))
}

fn measure_on(space: &Arc<FiniteMetricSpace>, weights: &[f64], max_atoms: usize) -> DiscreteMeasure {
    let atoms = weights
        .iter()
        .take(max_atoms.min(space.len()))
        .enumerate()
        .map(|(i, &w)| (i, w));
    DiscreteMeasure::normalized(space.clone(), atoms).unwrap()
}

fn reversed(space: &Arc<FiniteMetricSpace>, weights: &[f64], max_atoms: usize) -> DiscreteMeasure {
    let n = space.len();
    let atoms = weights
        .iter()
        .take(max_atoms.min(n))
        .enumerate()
        .map(|(i, &w)| (n - 1 - i, w));
    DiscreteMeasure::normalized(space.clone(), atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_matches_vertex_enumeration(
        space in space_strategy(9),
        wa in prop::collection::vec(0.01f64..1.0, 5),
        wb in prop::collection::vec(0.01f64..1.0, 5),
        p in prop::sample::select(vec![1.0, 2.0, 3.0]),
    ) {
        let mu = measure_on(&space, &wa, 5);
        let nu = reversed(&space, &wb, 5);
        let fast = wasserstein_distance(&mu, &nu, p).unwrap();
        let slow = wasserstein_bruteforce(&mu, &nu, p).unwrap();
        prop_assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
    }

    #[test]
    fn plan_marginals(
        space in space_strategy(12),
        wa in prop::collection::vec(0.01f64..1.0, 12),
        wb in prop::collection::vec(0.01f64..1.0, 12),
    ) {
        let mu = measure_on(&space, &wa, 12);
        let nu = reversed(&space, &wb, 12);
        let (d, plan) = wasserstein(&mu, &nu, 1.0).unwrap();
        for (row, &(_, w)) in plan.matrix.iter().zip(mu.atoms()) {
            prop_assert!((row.iter().sum::<f64>() - w).abs() < 1e-9);
        }
        for (j, &(_, w)) in nu.atoms().iter().enumerate() {
            let col: f64 = plan.matrix.iter().map(|r| r[j]).sum();
            prop_assert!((col - w).abs() < 1e-9);
        }
        prop_assert!((plan.cost(1.0) - d).abs() < 1e-9);
    }

    #[test]
    fn levy_prokhorov_matches_events(
        space in space_strategy(8),
        wa in prop::collection::vec(0.01f64..1.0, 5),
        wb in prop::collection::vec(0.01f64..1.0, 5),
    ) {
        let mu = measure_on(&space, &wa, 5);
        let nu = reversed(&space, &wb, 5);
        let fast = levy_prokhorov(&mu, &nu).unwrap();
        let slow = levy_prokhorov_exhaustive(&mu, &nu).unwrap();
        prop_assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
    }

    #[test]
    fn one_dimensional_closed_forms_match_flow(
        xs in prop::collection::vec(0.0f64..1.0, 2..14),
        wa in prop::collection::vec(0.01f64..1.0, 7),
        wb in prop::collection::vec(0.01f64..1.0, 7),
    ) {
        for space in [FiniteMetricSpace::line(&xs).unwrap(), FiniteMetricSpace::circle(xs.clone()).unwrap()] {
            let space = Arc::new(space);
            let mu = measure_on(&space, &wa, 7);
            let nu = reversed(&space, &wb, 7);
            let closed = wasserstein_distance(&mu, &nu, 1.0).unwrap();
            let (flow, _) = wasserstein(&mu, &nu, 1.0).unwrap();
            prop_assert!((closed - flow).abs() < 1e-9, "{closed} vs {flow}");
        }
    }
}

#[test]
fn uniform_assignment_sizes() {
    let pts: Vec<Vec<f64>> = (0..16).map(|i| vec![(i * 7 % 16) as f64 / 16.0, (i * 3 % 5) as f64]).collect();
    let s = Arc::new(FiniteMetricSpace::euclidean(pts).unwrap());
    let mu = DiscreteMeasure::uniform(s.clone(), &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
    let nu = DiscreteMeasure::uniform(s, &[8, 9, 10, 11, 12, 13, 14, 15]).unwrap();
    for p in [1.0, 2.0] {
        let fast = wasserstein_distance(&mu, &nu, p).unwrap();
        let slow = wasserstein_bruteforce(&mu, &nu, p).unwrap();
        assert!((fast - slow).abs() < 1e-9);
    }
}

#[test]
fn lp_between_two_and_three_points() {
    let s = Arc::new(FiniteMetricSpace::line(&[0.0, 1.0, 2.0]).unwrap());
    let mu = DiscreteMeasure::uniform(s.clone(), &[0, 1]).unwrap();
    let nu = DiscreteMeasure::uniform(s, &[0, 1, 2]).unwrap();
    let v = levy_prokhorov(&mu, &nu).unwrap();
    assert!(v > 0.0 && v < 1.0);
    assert!((v - levy_prokhorov_exhaustive(&mu, &nu).unwrap()).abs() < 1e-12);
}
