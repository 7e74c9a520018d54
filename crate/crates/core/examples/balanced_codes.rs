//! Balanced binary codes at Hamming distance N/4 and the measure families they
//! separate.

use std::sync::Arc;

use emergence::codes::{
    apart_family, bernstein_check, code_size_closed_form, covering_size_bound, separated_code, verify_separation,
    CodeMode,
};
use emergence::{DiscreteMeasure, FiniteMetricSpace};

fn main() -> emergence::Result<()> {
    for n in [8, 16, 24] {
        let code = separated_code(n, n / 4, None, CodeMode::Exhaustive, 0)?;
        println!(
            "N = {n}: {} words, ball bound {}, closed form {:.1}",
            code.len(),
            covering_size_bound(n as u64, n as u64 / 4),
            code_size_closed_form(n as u64)
        );
    }

    let code = separated_code(288, 72, Some(200), CodeMode::Randomized { max_rejections: 10_000 }, 7)?;
    println!("N = 288: {} random words, minimum distance {:?}", code.len(), code.minimum_distance());

    let n = 16;
    let eps = 0.1;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 * eps).collect();
    let line = Arc::new(FiniteMetricSpace::line(&xs)?);
    let base = (0..n).map(|i| DiscreteMeasure::dirac(line.clone(), i)).collect::<Result<Vec<_>, _>>()?;
    let family = apart_family(base, eps, &separated_code(n, n / 4, None, CodeMode::Exhaustive, 0)?)?;
    let rep = verify_separation(&family, 1.0)?;
    println!(
        "{} measures, minimum W1 {:?} against {:?}",
        family.members.len(),
        rep.min_distance,
        rep.uniform_bound
    );

    let tail = bernstein_check(64, 0.25)?;
    println!("P[H_64 <= 16] = {} <= {:.3e}: {}", tail.exact_tail, tail.bound, tail.holds);
    Ok(())
}
