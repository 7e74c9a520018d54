use emergence::construction::{run_construction, DEFAULT_ROW_BUDGET};

#[test]
fn claims_hold_with_slack_at_small_caps() {
    for (n, cap) in [(3, 30), (3, 60), (4, 30), (4, 60)] {
        let run = run_construction(n, Some(cap), 7, DEFAULT_ROW_BUDGET).unwrap();
        assert!(run.claims.exhaustive, "n={n} M={cap}");
        assert!(run.claims.holds, "n={n} M={cap}: {:?}", run.claims);
        assert!(run.claims.together_slack > 0.0);
        assert!(run.claims.apart_slack.is_some_and(|s| s > 0.0));
        assert!(run.colored.matching_is_ordered());
    }
}

#[test]
fn certified_bound_is_half_the_rows() {
    for (n, cap) in [(3, 246), (4, 324)] {
        let run = run_construction(n, Some(cap), 7, 24).unwrap();
        let bound = run.certified.expect("certified");
        assert!(bound.epsilon_f64 > 0.0);
        assert_eq!(bound.bound, run.params.rows / 2);
    }
}
