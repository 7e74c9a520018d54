//! The annulus construction at a small row count: box families, colouring, the two
//! distance claims and the certified quantization bound.

use emergence::construction::{derive_params, run_construction, DEFAULT_ROW_BUDGET};

fn main() -> emergence::Result<()> {
    let params = derive_params(3, None)?;
    println!(
        "n = 3: {} colours, row count without a cap {} (log {:.1})",
        params.colors, params.paper_rows, params.log_paper_bound
    );

    for cap in [60, 246] {
        let run = run_construction(3, Some(cap), 7, DEFAULT_ROW_BUDGET)?;
        let c = &run.claims;
        println!("M = {}: rows differ in >= {} colours", run.params.rows, run.min_color_difference);
        println!(
            "  together {:.3e} <= {}, apart {:.3e} >= {} over {} rows",
            c.together_max.distance,
            c.together_bound,
            c.apart_min.map_or(f64::NAN, |a| a.distance),
            c.apart_bound,
            c.rows_checked.len()
        );
        match (&run.certified, &run.failure) {
            (Some(b), _) => println!("  Q({}) >= {}", b.epsilon, b.bound),
            (None, Some(why)) => println!("  {why}"),
            (None, None) => {}
        }
    }
    Ok(())
}
