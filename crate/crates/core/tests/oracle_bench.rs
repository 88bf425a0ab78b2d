use std::collections::HashSet;

use nandevo::bench::{emit_csv, run_experiment, EntrySpec, ExperimentSpec, CSV_HEADER};
use nandevo::oracle::{count_solutions, minimal_gates, DEFAULT_BUDGET};
use nandevo::{run_evolution, Gate, InputSource, NandGenome, Preset, TruthTable};

/// Appends an output-preserving double inverter.
fn pad_with_double_inverter(g: &NandGenome) -> NandGenome {
    let last = g.num_gates() - 1;
    let mut gates = g.gates().to_vec();
    gates.push(Gate::new(InputSource::Gate(last), InputSource::Gate(last)));
    gates.push(Gate::new(
        InputSource::Gate(last + 1),
        InputSource::Gate(last + 1),
    ));
    NandGenome::new(g.num_inputs(), gates).unwrap()
}

#[test]
fn padding_keeps_targets_solvable() {
    for preset in Preset::ALL {
        let target = preset.table();
        let min = minimal_gates(&target, 6, DEFAULT_BUDGET).unwrap();
        let g = min.minimal_gates.unwrap();
        let witness = min.witness.unwrap();
        assert_eq!(witness.truth_table().unwrap(), target);
        assert_eq!(
            pad_with_double_inverter(&witness).truth_table().unwrap(),
            target
        );
        if g < 6 {
            let next = count_solutions(&target, g + 1, DEFAULT_BUDGET).unwrap();
            assert!(next.raw > 0, "{preset:?} unsolvable at {} gates", g + 1);
            assert!(next.canonical >= min.canonical_count);
        }
    }
}

#[test]
fn minimal_counts_are_all_live() {
    // At the minimum no solution can carry a dead gate.
    for preset in Preset::EXPERIMENT {
        let min = minimal_gates(&preset.table(), 6, DEFAULT_BUDGET).unwrap();
        assert_eq!(min.raw_count, min.canonical_count, "{preset:?}");
        assert!(min.raw_count >= 2, "{preset:?}");
    }
}

#[test]
fn parity_of_three_needs_more_than_two_gates() {
    let parity = TruthTable::from_bits("01101001").unwrap();
    let r = minimal_gates(&parity, 2, DEFAULT_BUDGET).unwrap();
    assert!(!r.is_found());
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert!(v["minimal_gates"].is_null());
    assert_eq!(v["status"], "none up to budget");
}

fn small_spec(base_seed: u64) -> ExperimentSpec {
    let mut spec = ExperimentSpec::paper_defaults(base_seed, 10, 10);
    spec.entries.truncate(4);
    spec
}

#[test]
fn paper_default_csv_shape() {
    let report = run_experiment(&ExperimentSpec::paper_defaults(42, 10, 10)).unwrap();
    assert_eq!(report.entries.len(), 5);
    let csv = emit_csv(&report);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.iter().filter(|l| l.starts_with("run,")).count(), 50);
    assert_eq!(
        lines.iter().filter(|l| l.starts_with("summary,")).count(),
        5
    );
    assert_eq!(lines.len(), 56);
    assert!(!csv.contains('\r'));
    let columns = CSV_HEADER.split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == columns));
}

#[test]
fn summary_rows_recompute_from_run_rows() {
    let report = run_experiment(&small_spec(3)).unwrap();
    let csv = emit_csv(&report);
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let mut solved_gens: Vec<f64> = Vec::new();
    let mut exhausted = 0usize;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[0] == "run" {
            assert!(f[col("mean")].is_empty() && f[col("solve_count")].is_empty());
            if f[col("solved")] == "1" {
                solved_gens.push(f[col("generations")].parse().unwrap());
                assert!(!f[col("distinct_key")].is_empty());
            } else {
                exhausted += 1;
            }
        } else {
            assert_eq!(f[0], "summary");
            assert!(f[col("distinct_key")].is_empty());
            let n = solved_gens.len() as f64;
            let mean = solved_gens.iter().sum::<f64>() / n;
            let parsed_mean: f64 = f[col("mean")].parse().unwrap();
            assert!((parsed_mean - mean).abs() < 1e-9);
            let min = solved_gens.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = solved_gens.iter().cloned().fold(0.0, f64::max);
            assert_eq!(f[col("min")].parse::<f64>().unwrap(), min);
            assert_eq!(f[col("max")].parse::<f64>().unwrap(), max);
            let var = solved_gens.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!((f[col("stddev")].parse::<f64>().unwrap() - var.sqrt()).abs() < 1e-9);
            let mut sorted = solved_gens.clone();
            sorted.sort_by(f64::total_cmp);
            let mid = sorted.len() / 2;
            let median = if sorted.len().is_multiple_of(2) {
                (sorted[mid - 1] + sorted[mid]) / 2.0
            } else {
                sorted[mid]
            };
            assert_eq!(f[col("median")].parse::<f64>().unwrap(), median);
            assert_eq!(
                f[col("solve_count")].parse::<usize>().unwrap(),
                solved_gens.len()
            );
            assert_eq!(
                f[col("exhausted_count")].parse::<usize>().unwrap(),
                exhausted
            );
            solved_gens.clear();
            exhausted = 0;
        }
    }
}

#[test]
fn entry_order_does_not_change_runs() {
    let spec = small_spec(11);
    let mut reversed = spec.clone();
    reversed.entries.reverse();
    let a = run_experiment(&spec).unwrap();
    let b = run_experiment(&reversed).unwrap();
    for (x, y) in a.entries.iter().zip(b.entries.iter().rev()) {
        assert_eq!(x.runs, y.runs);
        assert_eq!(x.summary, y.summary);
    }
}

#[test]
fn csv_is_byte_identical_across_invocations() {
    let spec = small_spec(5);
    assert_eq!(
        emit_csv(&run_experiment(&spec).unwrap()),
        emit_csv(&run_experiment(&spec).unwrap())
    );
}

#[test]
fn distinct_keys_belong_to_real_solutions() {
    let report = run_experiment(&small_spec(8)).unwrap();
    for e in &report.entries {
        let mut keys = HashSet::new();
        for row in e.runs.iter().filter(|r| r.solved) {
            let g = row.solution.as_ref().unwrap();
            assert_eq!(g.truth_table().unwrap(), *e.spec.target.table());
            assert_eq!(row.key.as_ref().unwrap(), &g.canonical_key());
            keys.insert(row.key.clone().unwrap());
        }
        assert_eq!(keys.len(), e.summary.distinct_solution_count);
        assert!(e.summary.distinct_solution_count <= e.summary.solve_count);
    }
}

#[test]
fn single_run_report_mirrors_the_run() {
    let mut entry = EntrySpec::new(Preset::Xor, 4);
    entry.runs = 1;
    entry.base_seed = 17;
    let report = run_experiment(&ExperimentSpec {
        entries: vec![entry.clone()],
    })
    .unwrap();
    let outcome = run_evolution(&entry.config_for(0), entry.target.table()).unwrap();
    let e = &report.entries[0];
    assert_eq!(e.runs[0].solution.as_ref(), outcome.solution());
    assert_eq!(e.runs[0].generations, outcome.generations());
    let g = outcome.generations() as f64;
    assert_eq!(
        (e.summary.mean, e.summary.median, e.summary.stddev),
        (Some(g), Some(g), Some(0.0))
    );
    assert_eq!(
        (e.summary.min, e.summary.max),
        (Some(outcome.generations()), Some(outcome.generations()))
    );
}

#[test]
fn spec_files_with_thirty_runs() {
    let spec = ExperimentSpec::from_json(
        r#"{"entries":[{"target":"tt:0110","num_gates":4,"runs":30,"base_seed":9},
                       {"target":"and","num_gates":2,"runs":30,"population_size":12}]}"#,
    )
    .unwrap();
    let report = run_experiment(&spec).unwrap();
    assert!(report.entries.iter().all(|e| e.runs.len() == 30));
    let csv = emit_csv(&report);
    assert_eq!(
        csv.lines()
            .filter(|l| l.starts_with("run,tt:0110,"))
            .count(),
        30
    );
}
