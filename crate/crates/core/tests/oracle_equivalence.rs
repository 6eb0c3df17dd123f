mod common;

use common::*;
use natplan::constraints::verify;
use natplan::domain::{Problem, Task};
use natplan::generator::{generate, GenParams};
use natplan::solver::{max_meetable, solve, SolveOptions};
use proptest::prelude::*;

fn agrees(p: &Problem) -> Result<(), TestCaseError> {
    let opts = SolveOptions::default();
    let out = solve(p, &opts);
    prop_assert_eq!(out.is_satisfiable(), oracle_satisfiable(p, opts.step.get()));
    if let Some(plan) = out.plan() {
        let report = verify(p, plan).unwrap();
        prop_assert!(report.is_correct(), "{:?}", report.violations);
    }
    if let Problem::Meeting(mp) = p {
        prop_assert_eq!(max_meetable(mp), meeting_max(mp));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_oracle(seed in any::<u64>(), t in 0usize..3) {
        if let Some(p) = oracle_instance(Task::ALL[t], seed) {
            agrees(&p)?;
        }
    }
}

#[test]
fn largest_trip_instances() {
    for seed in 0..20 {
        let params = GenParams { cities: 6, edge_density: 1.0, events: 3, ..GenParams::with_seed(seed) };
        let (p, _) = generate(Task::Trip, &params).unwrap();
        let Problem::Trip(tp) = &p else { unreachable!() };
        // Complete flight graph: every ordering is valid unless events rule it out.
        assert!(!trip_orderings(tp).is_empty());
        agrees(&p).unwrap();
    }
}

#[test]
fn largest_meeting_instances() {
    for seed in 0..10 {
        let params = GenParams { friends: 8, locations: 9, ..GenParams::with_seed(seed) };
        let (p, witness) = generate(Task::Meeting, &params).unwrap();
        agrees(&p).unwrap();
        let Problem::Meeting(mp) = &p else { unreachable!() };
        let natplan::domain::Plan::Meeting(w) = witness else { unreachable!() };
        assert!(max_meetable(mp) >= w.len());
    }
}
