mod common;

use common::*;
use natplan::constraints::{compile, verify, verify_with, ConstraintKind, PreferenceMode, VerifyOptions};
use natplan::domain::{Problem, Task, Weekday};
use natplan::generator::render;
use natplan::parser::{detect_task, extract_plan, parse_problem};
use natplan::solver::{solve, SolveOptions};

#[test]
fn appendices_parse_cleanly() {
    for task in Task::ALL {
        let text = read_fixture(&format!("appendix_{task}.txt"));
        assert_eq!(detect_task(&text), Some(task));
        let parsed = parse_problem(task, &text).unwrap();
        assert!(parsed.diagnostics.warnings.is_empty(), "{task}: {:?}", parsed.diagnostics.warnings);
    }
}

#[test]
fn calendar_appendix_contents() {
    let Problem::Calendar(p) = appendix(Task::Calendar) else { panic!() };
    assert_eq!(p.participants(), ["James", "John"].map(String::from));
    assert_eq!(p.allowed_days(), [Weekday::Monday]);
    assert_eq!(p.duration_minutes(), 60);
    assert!(p.preferences().is_empty());
    assert_eq!(p.blocks_for("John").len(), 4);
}

#[test]
fn trip_appendix_contents() {
    let Problem::Trip(p) = appendix(Task::Trip) else { panic!() };
    assert_eq!(p.total_days(), 7);
    assert_eq!(p.cities().collect::<Vec<_>>(), ["Madrid", "Dublin", "Tallinn"]);
    assert_eq!(p.flights().len(), 2);
    assert_eq!(p.events().len(), 1);
}

#[test]
fn meeting_appendix_contents() {
    let Problem::Meeting(p) = appendix(Task::Meeting) else { panic!() };
    assert_eq!(p.start_location(), "Sunset District");
    assert_eq!(p.start_time().to_string(), "09:00");
    assert_eq!(p.travel_minutes().len(), 12);
    assert_eq!(p.friend("Rebecca").unwrap().min_duration_minutes, 105);
}

#[test]
fn constraint_ids_are_unique() {
    for task in Task::ALL {
        let set = compile(&appendix(task));
        let mut ids: Vec<_> = set.iter().map(|c| c.id.clone()).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n, "{task}");
    }
}

#[test]
fn meeting_set_has_one_derived_constraint() {
    let set = compile(&appendix(Task::Meeting));
    assert_eq!(set.iter().filter(|c| c.kind.is_derived()).count(), 1);
    assert!(set.iter().any(|c| matches!(c.kind, ConstraintKind::MaximalCount { .. })));
    assert_eq!(set.len(), set.complexity() + 1);
}

#[test]
fn preference_is_hard_by_default_and_soft_on_request() {
    let text = read_fixture("appendix_calendar.txt").replace(
        "Find a time",
        "John would like to avoid more meetings on Monday after 13:00. Find a time",
    );
    let p = parse_problem(Task::Calendar, &text).unwrap().problem;
    let Problem::Calendar(cp) = &p else { panic!() };
    assert_eq!(cp.preferences().len(), 1);
    let gold = extract_plan(
        r#"{"start": {"day": "Monday", "time": "13:30"}, "end": {"day": "Monday", "time": "14:30"}}"#,
        Task::Calendar,
    )
    .unwrap();
    let hard = verify(&p, &gold).unwrap();
    assert!(hard.violations.iter().all(|v| v.constraint_id.starts_with("preference/John/")));
    assert!(!hard.is_correct());
    let soft = verify_with(&p, &gold, &VerifyOptions { preferences: PreferenceMode::TieBreak }).unwrap();
    assert!(soft.is_correct());

    assert!(!solve(&p, &SolveOptions::default()).is_satisfiable());
    assert!(!calendar_satisfiable(cp, 30));
    let soft_opts = SolveOptions { preferences: PreferenceMode::TieBreak, ..SolveOptions::default() };
    assert_eq!(solve(&p, &soft_opts).plan(), Some(&gold));
}

#[test]
fn rendered_appendix_reparses() {
    for task in Task::ALL {
        let p = appendix(task);
        let again = parse_problem(task, &render(&p)).unwrap().problem;
        assert_eq!(again, p, "{task}");
    }
}
