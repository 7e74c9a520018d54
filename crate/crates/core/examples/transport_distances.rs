//! Wasserstein and Lévy–Prokhorov distances between measures on a small planar space,
//! with the brute-force oracle and the Hölder comparisons alongside.

use std::sync::Arc;

use emergence::transport::{
    check_holder_comparisons, levy_prokhorov, wasserstein, wasserstein_bruteforce, wasserstein_distance,
};
use emergence::{DiscreteMeasure, FiniteMetricSpace};

fn main() -> emergence::Result<()> {
    let space = Arc::new(FiniteMetricSpace::euclidean(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
        vec![0.5, 0.5],
    ])?);
    let mu = DiscreteMeasure::new(space.clone(), [(0, 0.5), (3, 0.5)])?;
    let nu = DiscreteMeasure::new(space.clone(), [(1, 0.25), (2, 0.25), (4, 0.5)])?;

    for p in [1.0, 2.0, 3.0] {
        println!(
            "W{p}: simplex {:.6}, vertex enumeration {:.6}",
            wasserstein_distance(&mu, &nu, p)?,
            wasserstein_bruteforce(&mu, &nu, p)?
        );
    }
    println!("Levy-Prokhorov {:.6}", levy_prokhorov(&mu, &nu)?);

    let (_, plan) = wasserstein(&mu, &nu, 1.0)?;
    println!("optimal W1 plan:");
    for row in &plan.matrix {
        println!("  {}", row.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" "));
    }

    let rep = check_holder_comparisons(&mu, &nu, 2.0, 1.0)?;
    for c in &rep.checks {
        println!("{:?}", c);
    }
    Ok(())
}
