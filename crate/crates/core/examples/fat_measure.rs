//! A layered measure on a planar grid whose certified quantization bounds outgrow
//! any fixed power of 1/eps.

use std::sync::Arc;

use emergence::quantization::{fat_measure_build, quantization_heuristic};
use emergence::transport::MeasureMetric;
use emergence::FiniteMetricSpace;

fn main() -> emergence::Result<()> {
    let side = 100;
    let pts: Vec<Vec<f64>> = (0..side * side)
        .map(|k| vec![((k % side) as f64 + 0.5) / side as f64, ((k / side) as f64 + 0.5) / side as f64])
        .collect();
    let fat = fat_measure_build(Arc::new(FiniteMetricSpace::euclidean(pts)?), 2)?;

    for (layer, cert) in fat.layers.iter().zip(&fat.bounds) {
        let upper = quantization_heuristic(&fat.measure, cert.scale, MeasureMetric::W1, 7)?.upper;
        println!(
            "layer {} (weight {}, {} points): {} <= Q({}) <= {upper}",
            layer.index,
            layer.weight,
            layer.points.len(),
            cert.bound,
            cert.scale
        );
        for step in &cert.chain {
            println!("    {:?}: {}", step.rule, step.detail);
        }
    }
    Ok(())
}
