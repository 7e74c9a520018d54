use emergence::dynamics::{
    bowen_distance, doubling_periodic_measures, empirical_measure, orbit, topological_emergence_packing, AnnulusLebesgue,
    AnnulusPoint, Binning, CircleLebesgue, CirclePoint, DoublingMap, DoublingPoint, EmergenceExperiment, MapSystem, Omega,
    PackingOrder, TwistMap,
};
use emergence::transport::{wasserstein_distance, MeasureMetric};
use proptest::prelude::*;

fn twist() -> TwistMap {
    TwistMap::new(Omega::Affine { a: 0.1, b: 1.0 }, 1.0).unwrap()
}

fn rotation_gap<S: MapSystem>(system: &S, x: &S::Point, n: usize, k: usize, grid: &Binning<S::Point>) -> (f64, f64) {
    let shifted = orbit(system, x, k + 1).pop().unwrap();
    let a = empirical_measure(system, x, n, grid).unwrap();
    let b = empirical_measure(system, &shifted, n, grid).unwrap();
    let w = wasserstein_distance(&a, &b, 1.0).unwrap();
    (w, 2.0 * k as f64 / n as f64 * grid.space().diam())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn bowen_distances_nest(t0 in 0.0f64..1.0, r0 in 0.0f64..1.0, t1 in 0.0f64..1.0, r1 in 0.0f64..1.0, n in 1usize..30) {
        let f = twist();
        let (x, y) = (AnnulusPoint::new(t0, r0).unwrap(), AnnulusPoint::new(t1, r1).unwrap());
        prop_assert!(bowen_distance(&f, &x, &y, n).unwrap() <= bowen_distance(&f, &x, &y, n + 1).unwrap());
        let (u, v) = (DoublingPoint::from_value(t0, 1), DoublingPoint::from_value(t1, 2));
        prop_assert!(bowen_distance(&DoublingMap, &u, &v, n).unwrap() <= bowen_distance(&DoublingMap, &u, &v, n + 1).unwrap());
    }

    #[test]
    fn twist_preserves_height(t in 0.0f64..1.0, r in 0.0f64..1.0) {
        let x = AnnulusPoint::new(t, r).unwrap();
        for p in orbit(&twist(), &x, 20) {
            prop_assert_eq!(p.rho(), r);
        }
    }

    #[test]
    fn empirical_measures_shift_little(t in 0.0f64..1.0, r in 0.0f64..1.0, n in 20usize..400, k in 1usize..10) {
        let grid = Binning::<AnnulusPoint>::new(16).unwrap();
        let (w, bound) = rotation_gap(&twist(), &AnnulusPoint::new(t, r).unwrap(), n, k, &grid);
        prop_assert!(w <= bound + 1e-12, "{w} > {bound}");
        let grid = Binning::<DoublingPoint>::new(64).unwrap();
        let (w, bound) = rotation_gap(&DoublingMap, &DoublingPoint::from_value(t, 3), n, k, &grid);
        prop_assert!(w <= bound + 1e-12, "{w} > {bound}");
    }

    #[test]
    fn empirical_measures_are_probabilities(t in 0.0f64..1.0, n in 1usize..300) {
        let grid = Binning::<CirclePoint>::new(32).unwrap();
        let f = emergence::dynamics::CircleRotation { alpha: 0.2 };
        let e = empirical_measure(&f, &CirclePoint::new(t), n, &grid).unwrap();
        prop_assert!((e.atoms().iter().map(|a| a.1).sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(e.len() <= n.min(32));
    }
}

#[test]
fn twist_emergence_is_monotone_and_bracketed() {
    let exp = EmergenceExperiment::run(&twist(), &AnnulusLebesgue, 120, 2000, 64, MeasureMetric::W1, 7).unwrap();
    let table: Vec<_> = [0.04, 0.05, 0.1, 0.2].iter().map(|&e| exp.estimate(e).unwrap()).collect();
    for e in &table {
        assert!(e.lower <= e.upper);
    }
    assert!(table.windows(2).all(|w| w[0].upper >= w[1].upper), "{:?}", table.iter().map(|e| e.upper).collect::<Vec<_>>());
}

#[test]
fn metric_emergence_below_topological() {
    let exp = EmergenceExperiment::run(&DoublingMap, &CircleLebesgue, 80, 4000, 64, MeasureMetric::W1, 7).unwrap();
    let family = doubling_periodic_measures(10).unwrap();
    for eps in [0.2, 0.1, 0.05] {
        let metric = exp.estimate(eps).unwrap().upper;
        let packing = topological_emergence_packing(&family.measures, eps, PackingOrder::Scan).unwrap().count;
        assert_eq!(metric, 1, "eps={eps}");
        assert!(metric <= packing, "eps={eps}: {metric} > {packing}");
    }
}
