//! Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
//! any criterion fails.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use common::*;
use natplan::constraints::{assign_buckets, complexity, verify};
use natplan::domain::{Plan, Problem, Task};
use natplan::harness::{
    detect_hardcoding, evaluate_record, CannedRunner, Category, EvalConfig, EvalRecord, Method, ProblemRef,
    RunStatus, RunnerResponse,
};
use natplan::parser::extract_plan;
use natplan::solver::{max_meetable, solve, SolveOptions};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn plan(task: Task, json: &str) -> Plan {
    extract_plan(json, task).expect("test plan parses")
}

fn calendar_golden() -> Check {
    let t = Instant::now();
    let p = appendix(Task::Calendar);
    let out = solve(&p, &SolveOptions::default());
    let elapsed = t.elapsed();
    let gold = plan(
        Task::Calendar,
        r#"{"start": {"day": "Monday", "time": "13:30"}, "end": {"day": "Monday", "time": "14:30"}}"#,
    );
    ensure(out.plan() == Some(&gold), || format!("solver returned {:?}", out.status))?;
    ensure(verify(&p, &gold).unwrap().is_correct(), || "gold plan rejected".into())?;
    let bad = plan(
        Task::Calendar,
        r#"{"start": {"day": "Monday", "time": "13:00"}, "end": {"day": "Monday", "time": "14:00"}}"#,
    );
    let report = verify(&p, &bad).unwrap();
    ensure(!report.is_correct() && report.violates("busy/John/Monday/12:30-13:30"), || {
        format!("13:00 plan gave {:?}", report.violations)
    })?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))
}

fn trip_golden() -> Check {
    let p = appendix(Task::Trip);
    let out = solve(&p, &SolveOptions::default());
    let gold = plan(
        Task::Trip,
        r#"{"itinerary": [{"day_range": "Day 1-4", "place": "Madrid"},
            {"day_range": "Day 4-6", "place": "Dublin"},
            {"day_range": "Day 6-7", "place": "Tallinn"}]}"#,
    );
    ensure(out.plan() == Some(&gold), || format!("solver returned {:?}", out.status))?;
    ensure(verify(&p, &gold).unwrap().is_correct(), || "gold plan rejected".into())?;
    let Problem::Trip(tp) = &p else { unreachable!() };
    let orderings = trip_orderings(tp);
    ensure(orderings.len() == 1, || format!("oracle found {} valid orderings of 6", orderings.len()))
}

fn meeting_golden() -> Check {
    let t = Instant::now();
    let p = appendix(Task::Meeting);
    let Problem::Meeting(mp) = &p else { unreachable!() };
    let best = max_meetable(mp);
    let oracle = meeting_max(mp);
    ensure(best == 3 && oracle == 3, || format!("solver {best}, oracle {oracle}"))?;
    let out = solve(&p, &SolveOptions::default());
    let plan = out.plan().ok_or("no plan")?;
    let report = verify(&p, plan).unwrap();
    ensure(report.is_correct(), || format!("solver plan rejected: {:?}", report.violations))?;
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))
}

fn oracle_equivalence() -> Check {
    const N: usize = 500;
    let opts = SolveOptions::default();
    for task in Task::ALL {
        let mut sat = 0;
        for (i, p) in oracle_instances(task, N).iter().enumerate() {
            let out = solve(p, &opts);
            let expected = oracle_satisfiable(p, opts.step.get());
            ensure(out.is_satisfiable() == expected, || {
                format!("{task} #{i}: solver {:?}, oracle sat={expected}", out.status)
            })?;
            if let Some(plan) = out.plan() {
                sat += 1;
                let report = verify(p, plan).unwrap();
                ensure(report.is_correct(), || format!("{task} #{i}: {:?}", report.violations))?;
            }
            if let Problem::Meeting(mp) = p {
                let (a, b) = (max_meetable(mp), meeting_max(mp));
                ensure(a == b, || format!("meeting #{i}: solver {a}, oracle {b}"))?;
            }
        }
        if task != Task::Meeting {
            ensure(sat > 0 && sat < N, || format!("{task}: {sat}/{N} satisfiable, mix is degenerate"))?;
        }
    }
    Ok(())
}

fn mutation_suite() -> Check {
    let cases = mutations(80);
    ensure(cases.len() >= 200, || format!("only {} mutations", cases.len()))?;
    for (i, (p, witness, id)) in cases.iter().enumerate() {
        let report = verify(p, witness).unwrap();
        ensure(report.violates(id), || format!("mutation #{i} ({id}) not detected: {:?}", report.violations))?;
    }
    Ok(())
}

fn taxonomy() -> Check {
    let cases = taxonomy_cases();
    ensure(cases.len() == 12, || format!("{} fixtures", cases.len()))?;
    let mut runner = CannedRunner::new();
    for (id, _, _, resp, _) in &cases {
        runner = runner.with(format!("# {id}"), resp.clone());
    }
    let config = EvalConfig::default();
    for (id, task, problem, _, expected) in &cases {
        let record = EvalRecord {
            id: id.to_string(),
            task: *task,
            method: Method::NativeCode,
            model_name: "fixture".into(),
            output_text: format!("# {id}"),
            reasoning_token_count: None,
            problem_ref: ProblemRef::Path("unused".into()),
        };
        let outcome = evaluate_record(&record, problem, &runner, &config).map_err(|e| e.to_string())?;
        ensure(outcome.category == *expected, || format!("{id}: got {:?}", outcome.category))?;
    }
    ensure(runner.calls() == 12, || format!("runner called {} times", runner.calls()))
}

/// Twelve runner fixtures, three per outcome category.
fn taxonomy_cases() -> Vec<(&'static str, Task, Problem, RunnerResponse, Category)> {
    let cal = appendix(Task::Calendar);
    let trip = appendix(Task::Trip);
    let meet = appendix(Task::Meeting);
    let meet_gold = solve(&meet, &SolveOptions::default()).plan().unwrap().to_answer_json().to_string();
    let ok = RunnerResponse::ok;
    vec![
        ("syntax_error", Task::Calendar, cal.clone(), RunnerResponse::failed(RunStatus::SyntaxError, "SyntaxError: invalid syntax"), Category::Error),
        ("runtime_error", Task::Trip, trip.clone(), RunnerResponse::failed(RunStatus::RuntimeError, "ZeroDivisionError: division by zero"), Category::Error),
        ("timeout", Task::Meeting, meet.clone(), RunnerResponse::failed(RunStatus::Timeout, ""), Category::Error),
        ("refusal", Task::Calendar, cal.clone(), ok("I cannot find a time that works for everyone."), Category::NoPlan),
        ("missing_json", Task::Trip, trip.clone(), ok("Madrid first, then Dublin, then Tallinn."), Category::NoPlan),
        ("truncated", Task::Meeting, meet.clone(), ok(r#"{"itinerary": [{"action": "meet", "location": "#), Category::NoPlan),
        ("busy_slot", Task::Calendar, cal.clone(), ok(r#"{"start": {"day": "Monday", "time": "13:00"}, "end": {"day": "Monday", "time": "14:00"}}"#), Category::WrongPlan),
        ("no_flight", Task::Trip, trip.clone(), ok(r#"{"itinerary": [{"day_range": "Day 1-4", "place": "Madrid"}, {"day_range": "Day 4-5", "place": "Tallinn"}, {"day_range": "Day 5-7", "place": "Dublin"}]}"#), Category::WrongPlan),
        ("too_short", Task::Meeting, meet.clone(), ok(r#"{"itinerary": [{"action": "meet", "location": "North Beach", "person": "Melissa", "start_time": "09:30", "end_time": "09:45"}]}"#), Category::WrongPlan),
        ("calendar_gold", Task::Calendar, cal, ok(r#"{"start": {"day": "Monday", "time": "13:30"}, "end": {"day": "Monday", "time": "14:30"}}"#), Category::Correct),
        ("trip_gold", Task::Trip, trip, ok(r#"{"itinerary": [{"day_range": "Day 1-4", "place": "Madrid"}, {"day_range": "Day 4-6", "place": "Dublin"}, {"day_range": "Day 6-7", "place": "Tallinn"}]}"#), Category::Correct),
        ("meeting_gold", Task::Meeting, meet, RunnerResponse::ok(meet_gold), Category::Correct),
    ]
}

fn complexity_buckets() -> Check {
    let got: Vec<usize> = Task::ALL.iter().map(|t| complexity(&appendix(*t))).collect();
    ensure(got == vec![7, 7, 19], || format!("appendix complexities {got:?}"))?;
    let synthetic: Vec<usize> = (0..100).map(|i| (i * 37) % 23).collect();
    let buckets = assign_buckets(&synthetic, 5).map_err(|e| e.to_string())?;
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for b in buckets {
        *sizes.entry(b).or_default() += 1;
    }
    ensure((0..5).all(|b| sizes.get(&b) == Some(&20)), || format!("bucket sizes {sizes:?}"))
}

fn hardcode() -> Check {
    let trip_gold = solve(&appendix(Task::Trip), &SolveOptions::default()).plan().cloned().ok_or("no trip plan")?;
    let v = detect_hardcoding(&read_fixture("fig7_hardcoded.py"), &trip_gold);
    ensure(v.suspected, || format!("literal itinerary not flagged: {v:?}"))?;
    let cal_plan = plan(
        Task::Calendar,
        r#"{"start": {"day": "Monday", "time": "10:00"}, "end": {"day": "Monday", "time": "11:00"}}"#,
    );
    for src in ["fig6_native.py", "fig6_z3.py"] {
        let v = detect_hardcoding(&read_fixture(src), &cal_plan);
        ensure(!v.suspected, || format!("{src} flagged: {v:?}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("calendar appendix golden", calendar_golden),
        ("trip appendix golden", trip_golden),
        ("meeting appendix golden", meeting_golden),
        ("solver agrees with exhaustive oracles", oracle_equivalence),
        ("witness mutations are detected", mutation_suite),
        ("outcome taxonomy fixtures", taxonomy),
        ("complexity counts and quintiles", complexity_buckets),
        ("hardcoding detector", hardcode),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Ok(()) => println!("PASS {name} ({:.2}s)", t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
