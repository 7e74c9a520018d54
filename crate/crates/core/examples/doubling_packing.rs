//! Periodic-orbit measures of the doubling map and greedy packings of them in W1,
//! a lower bound for the topological emergence.

use emergence::dynamics::{doubling_periodic_measures, topological_emergence_packing, PackingOrder};

fn main() -> emergence::Result<()> {
    let family = doubling_periodic_measures(12)?;
    println!("{} periodic measures up to period 12", family.measures.len());
    for eps in [0.2, 0.1, 0.05, 0.025] {
        let scan = topological_emergence_packing(&family.measures, eps, PackingOrder::Scan)?;
        let greedy = topological_emergence_packing(&family.measures, eps, PackingOrder::MinDegree)?;
        println!(
            "eps {eps:>6}: scan {:>4}, min-degree {:>4}, eps log count {:.4}",
            scan.count,
            greedy.count,
            eps * (greedy.count as f64).ln()
        );
    }
    Ok(())
}
