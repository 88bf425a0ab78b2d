//! `nandevo` command-line driver.
//!
//! Exit codes: 0 success, 2 evolution exhausted, 3 search budget exceeded,
//! 64 usage, 65 malformed data, 66 unreadable input, 74 output write failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use nandevo::bench::{self, ExperimentSpec};
use nandevo::evolve::{run_evolution, trace_csv, GaConfig, RunStatus};
use nandevo::oracle::{self, DEFAULT_BUDGET};
use nandevo::{Error, NandGenome, Target};

#[derive(Parser)]
#[command(
    name = "nandevo",
    version,
    about = "Evolve NAND-gate circuits for a truth table"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one circuit for a target function.
    Evolve(EvolveArgs),
    /// Run a batch of seeded evolutions and write CSV statistics.
    Bench(BenchArgs),
    /// Find the smallest circuit for a target by exhaustive search.
    Oracle(OracleArgs),
    /// Print the truth table of a netlist file.
    Show(ShowArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// and|or|nor|xor|xnor|nand, or tt:BITS with row i = output for inputs
    /// given by the bits of i (input 0 least significant), e.g. AND = tt:0001
    #[arg(long)]
    target: String,
    /// Expected circuit arity; defaults to the arity implied by the target.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
    inputs: Option<u64>,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Gates per circuit; defaults to the minimal count for named targets.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    gates: Option<u64>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
    pop: u64,
    #[arg(long, default_value_t = 0.10, value_parser = parse_rate)]
    mutation: f64,
    #[arg(long = "max-gen", default_value_t = 100_000)]
    max_gen: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the solution netlist here instead of stdout.
    #[arg(long = "export-json", visible_alias = "out")]
    export_json: Option<PathBuf>,
    #[arg(long = "export-dot")]
    export_dot: Option<PathBuf>,
    /// Write per-generation best/mean fitness CSV to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["spec", "paper_defaults"]))]
struct BenchArgs {
    /// JSON experiment spec: {"entries": [{"target": "xor", "num_gates": 4, ...}]}
    #[arg(long)]
    spec: Option<PathBuf>,
    /// AND/OR/NOR/XOR/XNOR at 2/3/4/4/5 gates, population 10, 10 runs.
    #[arg(long = "paper-defaults")]
    paper_defaults: bool,
    /// Base seed; overrides every entry's base_seed when given.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    runs: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pop: Option<u64>,
    #[arg(long, value_parser = parse_rate)]
    mutation: Option<f64>,
    #[arg(long = "max-gen")]
    max_gen: Option<u64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bar chart of mean generations per entry.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Tab-separated label/mean/stddev table.
    #[arg(long = "plot-table")]
    plot_table: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long = "max-gates", default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    max_gates: u64,
}

#[derive(Args)]
struct ShowArgs {
    #[arg(long)]
    netlist: PathBuf,
    /// Also print the Graphviz rendering.
    #[arg(long)]
    dot: bool,
    #[arg(long = "export-dot")]
    export_dot: Option<PathBuf>,
}

fn parse_rate(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not a probability in [0, 1]"))
    }
}

enum Failure {
    Exhausted,
    Budget(String),
    Usage(String),
    Data(String),
    Unreadable(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Exhausted => 2,
            Failure::Budget(_) => 3,
            Failure::Usage(_) => 64,
            Failure::Data(_) => 65,
            Failure::Unreadable(_) => 66,
            Failure::Io(_) => 74,
        }
    }
}

fn data(err: Error) -> Failure {
    Failure::Data(err.to_string())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Unreadable(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_stdout(contents: &str) -> Result<(), Failure> {
    io::stdout()
        .write_all(contents.as_bytes())
        .map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn resolve_target(args: &TargetArgs) -> Result<Target, Failure> {
    let target: Target = args.target.parse().map_err(data)?;
    if let Some(n) = args.inputs {
        let actual = target.table().num_inputs();
        if n as usize != actual {
            return Err(Failure::Data(format!(
                "--inputs {n} does not match target {} with {actual} inputs",
                target
            )));
        }
    }
    Ok(target)
}

fn cmd_evolve(args: EvolveArgs) -> Result<(), Failure> {
    let target = resolve_target(&args.target)?;
    let num_gates = match (args.gates, target.preset()) {
        (Some(g), _) => g as usize,
        (None, Some(p)) => p.minimal_gates(),
        (None, None) => {
            return Err(Failure::Usage("--gates is required for tt: targets".into()));
        }
    };
    let config = GaConfig {
        population_size: args.pop as usize,
        num_gates,
        mutation_rate: args.mutation,
        max_generations: args.max_gen,
        seed: args.seed,
        trace: args.trace,
    };
    let outcome = run_evolution(&config, target.table()).map_err(data)?;
    if args.trace {
        eprint!("{}", trace_csv(&outcome.trace));
    }
    match &outcome.status {
        RunStatus::Solved { genome, generation } => {
            eprintln!(
                "solved {target} ({}) at generation {generation} with {num_gates} gates",
                target.table()
            );
            let json = format!("{}\n", genome.to_json());
            match &args.export_json {
                Some(path) => write_output(path, &json)?,
                None => write_stdout(&json)?,
            }
            if let Some(path) = &args.export_dot {
                write_output(path, &genome.to_dot())?;
            }
            Ok(())
        }
        RunStatus::Exhausted {
            best,
            generations_run,
        } => {
            eprintln!(
                "exhausted after {generations_run} generations; best fitness {} ({:.4})",
                best.fitness,
                best.fitness.as_f64()
            );
            Err(Failure::Exhausted)
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = read_input(path)?;
            ExperimentSpec::from_json(&text)
                .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?
        }
        None => ExperimentSpec::paper_defaults(0, bench::DEFAULT_RUNS, 10),
    };
    for entry in &mut spec.entries {
        if let Some(seed) = args.seed {
            entry.base_seed = seed;
        }
        if let Some(runs) = args.runs {
            entry.runs = runs as usize;
        }
        if let Some(pop) = args.pop {
            entry.population_size = pop as usize;
        }
        if let Some(rate) = args.mutation {
            entry.mutation_rate = rate;
        }
        if let Some(max_gen) = args.max_gen {
            entry.max_generations = max_gen;
        }
    }
    let report = bench::run_experiment(&spec).map_err(data)?;
    let csv = bench::emit_csv(&report);
    match &args.out {
        Some(path) => write_output(path, &csv)?,
        None => write_stdout(&csv)?,
    }
    if let Some(path) = &args.svg {
        write_output(path, &bench::emit_svg(&report))?;
    }
    if let Some(path) = &args.plot_table {
        write_output(path, &bench::emit_plot_table(&report))?;
    }
    eprint!("{}", bench::summary_table(&report));
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Failure> {
    let target = resolve_target(&args.target)?;
    let result = oracle::minimal_gates(target.table(), args.max_gates as usize, DEFAULT_BUDGET)
        .map_err(|e| match e {
            Error::Capacity(msg) => Failure::Budget(msg),
            other => data(other),
        })?;
    if !result.is_found() {
        eprintln!(
            "none up to budget: no circuit with at most {} gates realizes {target}",
            args.max_gates
        );
    }
    write_stdout(&format!("{}\n", result.to_json()))
}

fn cmd_show(args: ShowArgs) -> Result<(), Failure> {
    let text = read_input(&args.netlist)?;
    let genome = NandGenome::from_json(&text)
        .map_err(|e| Failure::Data(format!("{}: {e}", args.netlist.display())))?;
    let table = genome.truth_table().map_err(data)?;
    let mut out = format!("{table}\n");
    if args.dot {
        out.push_str(&genome.to_dot());
    }
    write_stdout(&out)?;
    if let Some(path) = &args.export_dot {
        write_output(path, &genome.to_dot())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let result = match cli.command {
        Command::Evolve(args) => cmd_evolve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Show(args) => cmd_show(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Exhausted => {}
                Failure::Usage(msg) => {
                    eprintln!("error: {msg}\n\nUsage: nandevo <evolve|bench|oracle|show> [OPTIONS]")
                }
                Failure::Budget(msg)
                | Failure::Data(msg)
                | Failure::Unreadable(msg)
                | Failure::Io(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
