//! Accuracy tables per (model, task, method), overall and per complexity
//! quintile.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{Category, EvalRecord, HarnessError, Method, Outcome, OutcomeRecord};
use crate::constraints::assign_buckets;
use crate::domain::Task;

pub const BUCKETS: usize = 5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub error: usize,
    pub no_plan: usize,
    pub wrong_plan: usize,
    pub correct: usize,
}

impl Histogram {
    fn add(&mut self, c: Category) {
        match c {
            Category::Error => self.error += 1,
            Category::NoPlan => self.no_plan += 1,
            Category::WrongPlan => self.wrong_plan += 1,
            Category::Correct => self.correct += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.error + self.no_plan + self.wrong_plan + self.correct
    }

    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.correct as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketRow {
    pub bucket: usize,
    pub min_complexity: usize,
    pub max_complexity: usize,
    pub histogram: Histogram,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub model_name: String,
    pub task: Task,
    pub method: Method,
    pub histogram: Histogram,
    pub accuracy: f64,
    pub buckets: Vec<BucketRow>,
    /// Mean over the records that report a count.
    pub mean_reasoning_tokens: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub groups: Vec<GroupReport>,
}

/// Builds a report from evaluated records and their complexities.
pub fn aggregate(
    outcomes: &[(EvalRecord, Outcome)],
    complexities: &HashMap<String, usize>,
) -> Result<Report, HarnessError> {
    let rows = outcomes
        .iter()
        .map(|(r, o)| {
            let complexity = *complexities
                .get(&r.id)
                .ok_or_else(|| HarnessError::MissingComplexity(r.id.clone()))?;
            Ok(OutcomeRecord {
                id: r.id.clone(),
                model_name: r.model_name.clone(),
                task: r.task,
                method: r.method,
                complexity,
                reasoning_token_count: r.reasoning_token_count,
                outcome: o.clone(),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(aggregate_outcomes(&rows))
}

/// Builds a report from an outcome dump.
pub fn aggregate_outcomes(rows: &[OutcomeRecord]) -> Report {
    let mut groups: BTreeMap<(String, Task, Method), Vec<&OutcomeRecord>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.model_name.clone(), r.task, r.method)).or_default().push(r);
    }
    let groups = groups
        .into_iter()
        .map(|((model_name, task, method), mut members)| {
            // Sorting by id as well keeps bucket membership independent of
            // input order when complexities tie.
            members.sort_by(|a, b| (a.complexity, &a.id).cmp(&(b.complexity, &b.id)));
            let mut histogram = Histogram::default();
            for m in &members {
                histogram.add(m.outcome.category);
            }
            let complexities: Vec<usize> = members.iter().map(|m| m.complexity).collect();
            let assignment = assign_buckets(&complexities, BUCKETS).expect("group is nonempty");
            let mut buckets: BTreeMap<usize, BucketRow> = BTreeMap::new();
            for (m, b) in members.iter().zip(assignment) {
                let row = buckets.entry(b).or_insert(BucketRow {
                    bucket: b,
                    min_complexity: m.complexity,
                    max_complexity: m.complexity,
                    histogram: Histogram::default(),
                    accuracy: 0.0,
                });
                row.min_complexity = row.min_complexity.min(m.complexity);
                row.max_complexity = row.max_complexity.max(m.complexity);
                row.histogram.add(m.outcome.category);
            }
            let buckets = buckets
                .into_values()
                .map(|mut b| {
                    b.accuracy = b.histogram.accuracy();
                    b
                })
                .collect();
            let counts: Vec<u64> = members.iter().filter_map(|m| m.reasoning_token_count).collect();
            let mean_reasoning_tokens =
                (!counts.is_empty()).then(|| counts.iter().sum::<u64>() as f64 / counts.len() as f64);
            GroupReport {
                model_name,
                task,
                method,
                accuracy: histogram.accuracy(),
                histogram,
                buckets,
                mean_reasoning_tokens,
            }
        })
        .collect();
    Report { groups }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    model: &'a str,
    task: &'a str,
    method: &'a str,
    bucket: usize,
    min_complexity: usize,
    max_complexity: usize,
    records: usize,
    accuracy: f64,
    error: usize,
    no_plan: usize,
    wrong_plan: usize,
    correct: usize,
    mean_reasoning_tokens: Option<f64>,
}

impl Report {
    /// One row per model, task, method and complexity bucket.
    pub fn write_csv(&self, out: impl Write) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for g in &self.groups {
            for b in &g.buckets {
                w.serialize(CsvRow {
                    model: &g.model_name,
                    task: g.task.as_str(),
                    method: g.method.as_str(),
                    bucket: b.bucket + 1,
                    min_complexity: b.min_complexity,
                    max_complexity: b.max_complexity,
                    records: b.histogram.total(),
                    accuracy: b.accuracy,
                    error: b.histogram.error,
                    no_plan: b.histogram.no_plan,
                    wrong_plan: b.histogram.wrong_plan,
                    correct: b.histogram.correct,
                    mean_reasoning_tokens: g.mean_reasoning_tokens,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from(
            "| model | task | method | n | accuracy | error | no plan | wrong plan | correct | Q1 | Q2 | Q3 | Q4 | Q5 | mean reasoning tokens |\n\
             |---|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n",
        );
        for g in &self.groups {
            let h = g.histogram;
            let _ = write!(
                s,
                "| {} | {} | {} | {} | {:.1}% | {} | {} | {} | {} |",
                g.model_name,
                g.task,
                g.method.as_str(),
                h.total(),
                100.0 * g.accuracy,
                h.error,
                h.no_plan,
                h.wrong_plan,
                h.correct
            );
            for q in 0..BUCKETS {
                match g.buckets.iter().find(|b| b.bucket == q) {
                    Some(b) => {
                        let _ = write!(s, " {:.0}% |", 100.0 * b.accuracy);
                    }
                    None => s.push_str(" - |"),
                }
            }
            match g.mean_reasoning_tokens {
                Some(m) => {
                    let _ = writeln!(s, " {m:.1} |");
                }
                None => s.push_str(" - |\n"),
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(id: usize, complexity: usize, category: Category, tokens: Option<u64>) -> OutcomeRecord {
        OutcomeRecord {
            id: format!("r{id:03}"),
            model_name: "m".into(),
            task: Task::Calendar,
            method: Method::Plan,
            complexity,
            reasoning_token_count: tokens,
            outcome: Outcome { category, violations: vec![], diagnostic: None, hardcode: None },
        }
    }

    #[test]
    fn accuracy_and_tokens() {
        let rows = vec![
            row(0, 3, Category::Correct, Some(1929)),
            row(1, 4, Category::Correct, Some(1930)),
            row(2, 5, Category::WrongPlan, None),
            row(3, 6, Category::NoPlan, None),
        ];
        let r = aggregate_outcomes(&rows);
        assert_eq!(r.groups.len(), 1);
        assert_eq!(r.groups[0].accuracy, 0.5);
        assert_eq!(r.groups[0].mean_reasoning_tokens, Some(1929.5));
    }

    #[test]
    fn ten_complexities_make_five_pairs() {
        let rows: Vec<_> = (0..10).map(|i| row(i, i + 1, Category::Correct, None)).collect();
        let r = aggregate_outcomes(&rows);
        let sizes: Vec<usize> = r.groups[0].buckets.iter().map(|b| b.histogram.total()).collect();
        assert_eq!(sizes, vec![2; 5]);
    }

    #[test]
    fn csv_and_markdown_shapes() {
        let rows: Vec<_> = (0..10).map(|i| row(i, i, Category::Correct, None)).collect();
        let r = aggregate_outcomes(&rows);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("model,task,method,bucket,"));
        assert_eq!(r.to_markdown().lines().count(), 3);
    }

    #[test]
    fn missing_complexity() {
        let rec = EvalRecord {
            id: "x".into(),
            task: Task::Trip,
            method: Method::Plan,
            model_name: "m".into(),
            output_text: String::new(),
            reasoning_token_count: None,
            problem_ref: super::super::ProblemRef::Path("p.json".into()),
        };
        let o = Outcome { category: Category::NoPlan, violations: vec![], diagnostic: None, hardcode: None };
        assert!(matches!(
            aggregate(&[(rec, o)], &HashMap::new()),
            Err(HarnessError::MissingComplexity(_))
        ));
    }

    proptest! {
        #[test]
        fn order_does_not_matter(
            specs in prop::collection::vec((0usize..30, 0usize..4), 1..60),
            seed in any::<u64>(),
        ) {
            let rows: Vec<_> = specs
                .iter()
                .enumerate()
                .map(|(i, (c, k))| row(i, *c, Category::ALL[*k], None))
                .collect();
            let mut shuffled = rows.clone();
            use rand::{seq::SliceRandom, SeedableRng};
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = aggregate_outcomes(&rows);
            let b = aggregate_outcomes(&shuffled);
            prop_assert_eq!(&a, &b);
            let sizes: Vec<usize> = a.groups[0].buckets.iter().map(|b| b.histogram.total()).collect();
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            prop_assert_eq!(a.groups[0].histogram.total(), rows.len());
        }
    }
}
