//! Evolve feed-forward NAND circuits that realize a target truth table.
//!
//! - [`netlist`]: the circuit model, evaluation, pruning, JSON/DOT formats.
//! - [`evolve`]: the genetic algorithm.
//! - [`oracle`]: exhaustive enumeration for minimal circuits and solution counts.
//! - [`bench`]: seeded experiment batches and their CSV/SVG reports.

pub mod bench;
pub mod error;
pub mod evolve;
pub mod netlist;
pub mod oracle;

pub use error::{Error, Result};
pub use evolve::{run_evolution, GaConfig, Individual, RunOutcome, RunStatus};
pub use netlist::{Fitness, Gate, InputSource, NandGenome, Preset, Target, TruthTable};
pub use oracle::{minimal_gates, MinimalityResult};
