//! Covering and packing numbers of a grid in the unit square, and the box-counting
//! exponent they imply.

use emergence::metric::{covering_bounds, dimension_estimate, exact_covering_number, exact_packing_number};
use emergence::FiniteMetricSpace;

fn main() -> emergence::Result<()> {
    let side = 40;
    let pts: Vec<Vec<f64>> = (0..side * side)
        .map(|k| vec![(k % side) as f64 / side as f64, (k / side) as f64 / side as f64])
        .collect();
    let grid = FiniteMetricSpace::euclidean(pts)?;

    let mut counts = Vec::new();
    println!("{:>8} {:>6} {:>6}", "eps", "lower", "upper");
    for k in 2..=5 {
        let eps = 2f64.powi(-k);
        let b = covering_bounds(&grid, eps)?;
        println!("{eps:>8.4} {:>6} {:>6}", b.lower, b.upper);
        counts.push((eps, b.upper as f64));
    }
    let fit = dimension_estimate(&counts)?;
    println!("dimension estimate {:.3} (residual {:.3})", fit.exponent, fit.residual);

    // small spaces admit the exact numbers
    let hexagon = FiniteMetricSpace::euclidean(
        (0..6)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 6.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
    )?;
    for eps in [0.5, 1.0, 1.5] {
        println!(
            "hexagon eps {eps}: D = {}, S = {}, S(2 eps) = {}",
            exact_covering_number(&hexagon, eps)?,
            exact_packing_number(&hexagon, eps)?,
            exact_packing_number(&hexagon, 2.0 * eps)?
        );
    }
    Ok(())
}
