//! Metric emergence of an integrable twist map of the annulus, estimated from
//! orbit empirical measures and compared with ceil(1/(4 eps)).

use emergence::dynamics::{horizontal_emergence_exact, AnnulusLebesgue, EmergenceExperiment, Omega, TwistMap};
use emergence::transport::MeasureMetric;

fn main() -> emergence::Result<()> {
    let twist = TwistMap::new(Omega::Affine { a: 0.1, b: 1.0 }, 1.0)?;
    let experiment = EmergenceExperiment::run(&twist, &AnnulusLebesgue, 200, 5000, 64, MeasureMetric::W1, 7)?;
    println!("{:>6} {:>5} {:>5} {:>6} {:>10}", "eps", "lower", "upper", "exact", "mean dist");
    for eps in [0.2, 0.1, 0.05, 0.04] {
        let e = experiment.estimate(eps)?;
        println!(
            "{eps:>6} {:>5} {:>5} {:>6} {:>10.4}",
            e.lower,
            e.upper,
            horizontal_emergence_exact(eps)?,
            e.mean_min_distance
        );
    }
    Ok(())
}
