//! Quantization of Lebesgue measure on [0, 1]: the closed form, the midpoint
//! quantizer and the search on a discretization.

use std::sync::Arc;

use emergence::quantization::{lebesgue_1d_quantization, optimal_1d_quantizer, quantization_heuristic};
use emergence::transport::MeasureMetric;
use emergence::{DiscreteMeasure, FiniteMetricSpace};

fn main() -> emergence::Result<()> {
    let atoms = 4000;
    let xs: Vec<f64> = (0..atoms).map(|i| (i as f64 + 0.5) / atoms as f64).collect();
    let lebesgue = DiscreteMeasure::uniform_on_space(Arc::new(FiniteMetricSpace::line(&xs)?));

    println!("{:>9} {:>3} {:>7} {:>7} {:>9}", "eps", "q", "closed", "search", "certified");
    for q in [1.0, 2.0] {
        for k in 2..=6 {
            let eps = 2f64.powi(-k);
            let closed = lebesgue_1d_quantization(eps, q)?;
            let metric = MeasureMetric::Wasserstein { p: q };
            let found = quantization_heuristic(&lebesgue, eps, metric, 7)?;
            println!("{eps:>9.5} {q:>3} {closed:>7} {:>7} {:>9}", found.upper, found.lower);
        }
    }

    let quantizer = optimal_1d_quantizer(4, 1.0);
    println!("four midpoints {:?} are at W1 {}", quantizer.points, quantizer.distance);
    Ok(())
}
