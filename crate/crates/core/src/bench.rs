//! Batches of seeded GA runs with aggregate statistics.
//!
//! An [`ExperimentSpec`] lists entries (target, circuit size, GA settings,
//! number of runs). Run `i` of an entry uses seed `base_seed + i`, so a run's
//! outcome depends only on its own entry, never on scheduling or on the other
//! entries. Runs execute on the rayon pool and are reassembled in order.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{run_evolution, GaConfig};
use crate::netlist::{NandGenome, Preset, Target};

pub const DEFAULT_RUNS: usize = 10;

fn default_population() -> usize {
    10
}

fn default_mutation() -> f64 {
    0.10
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

fn default_max_generations() -> u64 {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub target: Target,
    pub num_gates: usize,
    #[serde(default = "default_population")]
    pub population_size: usize,
    #[serde(default = "default_mutation")]
    pub mutation_rate: f64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_max_generations")]
    pub max_generations: u64,
}

impl EntrySpec {
    pub fn new(target: impl Into<Target>, num_gates: usize) -> Self {
        Self {
            target: target.into(),
            num_gates,
            population_size: default_population(),
            mutation_rate: default_mutation(),
            runs: default_runs(),
            base_seed: 0,
            max_generations: default_max_generations(),
        }
    }

    pub fn seed_for(&self, run_index: usize) -> u64 {
        self.base_seed.wrapping_add(run_index as u64)
    }

    pub fn config_for(&self, run_index: usize) -> GaConfig {
        GaConfig {
            population_size: self.population_size,
            num_gates: self.num_gates,
            mutation_rate: self.mutation_rate,
            max_generations: self.max_generations,
            seed: self.seed_for(run_index),
            trace: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        self.config_for(0).validate()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub entries: Vec<EntrySpec>,
}

impl ExperimentSpec {
    /// The five reference targets at their minimal gate counts.
    pub fn paper_defaults(base_seed: u64, runs: usize, population_size: usize) -> Self {
        let entries = Preset::EXPERIMENT
            .iter()
            .map(|&p| EntrySpec {
                runs,
                base_seed,
                population_size,
                ..EntrySpec::new(p, p.minimal_gates())
            })
            .collect();
        Self { entries }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub run_index: usize,
    pub seed: u64,
    pub solved: bool,
    /// Solution generation, or generations run when exhausted.
    pub generations: u64,
    pub solution: Option<NandGenome>,
    /// Canonical key of the solution.
    pub key: Option<Vec<u8>>,
}

/// Statistics over an entry's solved runs; the generation statistics are
/// `None` when no run solved.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub solve_count: usize,
    pub exhausted_count: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub stddev: Option<f64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    pub distinct_solution_count: usize,
}

impl Summary {
    pub fn from_rows(rows: &[RunRow]) -> Self {
        let mut solved: Vec<u64> = rows
            .iter()
            .filter(|r| r.solved)
            .map(|r| r.generations)
            .collect();
        solved.sort_unstable();
        let mut keys: Vec<&[u8]> = rows.iter().filter_map(|r| r.key.as_deref()).collect();
        keys.sort_unstable();
        keys.dedup();
        let n = solved.len();
        let (mean, median, stddev) = if n == 0 {
            (None, None, None)
        } else {
            let mean = solved.iter().map(|&g| g as f64).sum::<f64>() / n as f64;
            let median = if !n.is_multiple_of(2) {
                solved[n / 2] as f64
            } else {
                (solved[n / 2 - 1] as f64 + solved[n / 2] as f64) / 2.0
            };
            let stddev = if n < 2 {
                0.0
            } else {
                let ss: f64 = solved.iter().map(|&g| (g as f64 - mean).powi(2)).sum();
                (ss / (n - 1) as f64).sqrt()
            };
            (Some(mean), Some(median), Some(stddev))
        };
        Summary {
            solve_count: n,
            exhausted_count: rows.len() - n,
            mean,
            median,
            stddev,
            min: solved.first().copied(),
            max: solved.last().copied(),
            distinct_solution_count: keys.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryReport {
    pub spec: EntrySpec,
    pub runs: Vec<RunRow>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentReport {
    pub entries: Vec<EntryReport>,
}

fn run_one(entry: &EntrySpec, run_index: usize) -> Result<RunRow> {
    let outcome = run_evolution(&entry.config_for(run_index), entry.target.table())?;
    let solution = outcome.solution().cloned();
    Ok(RunRow {
        run_index,
        seed: entry.seed_for(run_index),
        solved: outcome.is_solved(),
        generations: outcome.generations(),
        key: solution.as_ref().map(NandGenome::canonical_key),
        solution,
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    for (i, entry) in spec.entries.iter().enumerate() {
        entry.validate().map_err(|e| Error::Entry {
            entry: i,
            source: Box::new(e),
        })?;
    }
    let jobs: Vec<(usize, usize)> = spec
        .entries
        .iter()
        .enumerate()
        .flat_map(|(e, entry)| (0..entry.runs).map(move |r| (e, r)))
        .collect();
    let rows: Vec<RunRow> = jobs
        .par_iter()
        .map(|&(e, r)| {
            run_one(&spec.entries[e], r).map_err(|err| Error::Entry {
                entry: e,
                source: Box::new(err),
            })
        })
        .collect::<Result<_>>()?;
    let mut rows = rows.into_iter();
    let entries = spec
        .entries
        .iter()
        .map(|entry| {
            let runs: Vec<RunRow> = rows.by_ref().take(entry.runs).collect();
            EntryReport {
                spec: entry.clone(),
                summary: Summary::from_rows(&runs),
                runs,
            }
        })
        .collect();
    Ok(ExperimentReport { entries })
}

pub const CSV_HEADER: &str = "kind,target,num_gates,population_size,mutation_rate,seed,run_index,solved,generations,distinct_key,mean,median,stddev,min,max,solve_count,exhausted_count";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn hex(bytes: &[u8]) -> String {
    bytes
        .iter()
        .fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// One `run` row per run followed by one `summary` row per entry. Summary
/// rows carry the entry's base seed and leave the per-run columns empty.
pub fn emit_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for entry in &report.entries {
        let s = &entry.spec;
        let prefix = format!(
            "{},{},{},{}",
            s.target, s.num_gates, s.population_size, s.mutation_rate
        );
        for row in &entry.runs {
            let _ = writeln!(
                out,
                "run,{prefix},{},{},{},{},{},,,,,,,",
                row.seed,
                row.run_index,
                u8::from(row.solved),
                row.generations,
                row.key.as_deref().map(hex).unwrap_or_default(),
            );
        }
        let sum = &entry.summary;
        let _ = writeln!(
            out,
            "summary,{prefix},{},,,,,{},{},{},{},{},{},{}",
            s.base_seed,
            opt(sum.mean),
            opt(sum.median),
            opt(sum.stddev),
            opt(sum.min),
            opt(sum.max),
            sum.solve_count,
            sum.exhausted_count,
        );
    }
    out
}

fn entry_label(spec: &EntrySpec) -> String {
    format!(
        "{} G={} pop={}",
        spec.target, spec.num_gates, spec.population_size
    )
}

/// Tab-separated bar-chart data: label, mean, stddev per entry.
pub fn emit_plot_table(report: &ExperimentReport) -> String {
    let mut out = String::from("label\tmean\tstddev\n");
    for entry in &report.entries {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            entry_label(&entry.spec),
            opt(entry.summary.mean),
            opt(entry.summary.stddev)
        );
    }
    out
}

/// Bar chart of mean generations per entry with ±1 stddev whiskers.
pub fn emit_svg(report: &ExperimentReport) -> String {
    const BAR: f64 = 60.0;
    const GAP: f64 = 30.0;
    const LEFT: f64 = 60.0;
    const TOP: f64 = 30.0;
    const PLOT_H: f64 = 300.0;
    let n = report.entries.len();
    let width = LEFT + GAP + n as f64 * (BAR + GAP);
    let height = TOP + PLOT_H + 60.0;
    let peak = report
        .entries
        .iter()
        .map(|e| e.summary.mean.unwrap_or(0.0) + e.summary.stddev.unwrap_or(0.0))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let y = |v: f64| TOP + PLOT_H - v / peak * PLOT_H;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" text-anchor="middle">Mean generations to solution</text>"#,
        width / 2.0
    );
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>"#,
        TOP + PLOT_H
    );
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{0}" x2="{width}" y2="{0}" stroke="black"/>"#,
        TOP + PLOT_H
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        LEFT - 4.0,
        TOP + 4.0,
        peak.round()
    );
    for (i, entry) in report.entries.iter().enumerate() {
        let x = LEFT + GAP + i as f64 * (BAR + GAP);
        let mean = entry.summary.mean.unwrap_or(0.0);
        let sd = entry.summary.stddev.unwrap_or(0.0);
        let top = y(mean);
        let _ = writeln!(
            out,
            r##"<rect x="{x}" y="{top}" width="{BAR}" height="{}" fill="#4a7ab5"><title>{}: {mean}</title></rect>"##,
            TOP + PLOT_H - top,
            entry_label(&entry.spec)
        );
        let cx = x + BAR / 2.0;
        let _ = writeln!(
            out,
            r#"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="black"/>"#,
            y(mean + sd),
            y((mean - sd).max(0.0))
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="{}" text-anchor="middle">{}</text>"#,
            TOP + PLOT_H + 18.0,
            entry.spec.target
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="{}" text-anchor="middle">G={} pop={}</text>"#,
            TOP + PLOT_H + 34.0,
            entry.spec.num_gates,
            entry.spec.population_size
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Human-readable per-entry summary, including distinct solution counts.
pub fn summary_table(report: &ExperimentReport) -> String {
    let mut out = format!(
        "{:<14} {:>5} {:>5} {:>7} {:>10} {:>10} {:>6} {:>9} {:>8}\n",
        "target", "gates", "pop", "solved", "mean", "median", "min", "max", "distinct"
    );
    for e in &report.entries {
        let s = &e.summary;
        let fmt1 = |v: Option<f64>| v.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<14} {:>5} {:>5} {:>7} {:>10} {:>10} {:>6} {:>9} {:>8}",
            e.spec.target.to_string(),
            e.spec.num_gates,
            e.spec.population_size,
            format!("{}/{}", s.solve_count, e.runs.len()),
            fmt1(s.mean),
            fmt1(s.median),
            opt(s.min),
            opt(s.max),
            s.distinct_solution_count
        );
    }
    out
}
