//! Katok's covering-number entropy for the doubling map and an irrational rotation.

use emergence::dynamics::{katok_entropy_estimate, CircleLebesgue, CircleRotation, DoublingMap};

fn main() -> emergence::Result<()> {
    let doubling = katok_entropy_estimate(&DoublingMap, &CircleLebesgue, 12, 0.02, 0.1, 20_000, 7)?;
    println!("doubling map: {:.4} (log 2 = {:.4})", doubling.entropy, std::f64::consts::LN_2);
    for c in &doubling.counts {
        println!("  n = {:>2}: {:>6} balls{}", c.horizon, c.balls, if c.admissible { "" } else { " (undersampled)" });
    }
    let golden = CircleRotation {
        alpha: (3.0 - 5f64.sqrt()) / 2.0,
    };
    let rotation = katok_entropy_estimate(&golden, &CircleLebesgue, 12, 0.02, 0.1, 20_000, 7)?;
    println!("golden rotation: {:.4}", rotation.entropy);
    Ok(())
}
