//! Nested construction layers and the certified bounds they give for one measure at
//! ever smaller scales.

use emergence::construction::{onion_chain, LayerSpec};

fn main() -> emergence::Result<()> {
    let layers = [(3, 246), (4, 324), (5, 405)].map(|(n, cap)| LayerSpec {
        n,
        rows_cap: Some(cap),
    });
    let report = onion_chain(&layers, 30, 7)?;
    for l in &report.layers {
        println!(
            "layer {} (n = {}, M = {}): Q({:.3e}) >= {}",
            l.index, l.n, l.rows, l.epsilon_f64, l.bound
        );
    }
    println!("monotone: {}", report.monotone);
    match (&report.fit, &report.fit_note) {
        (Some(f), _) => println!("log log Q against -log eps: slope {:.4}", f.exponent),
        (None, Some(note)) => println!("{note}"),
        (None, None) => {}
    }
    Ok(())
}
