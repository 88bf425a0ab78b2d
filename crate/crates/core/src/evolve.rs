//! Generational genetic algorithm over fixed-size NAND genomes.
//!
//! Each generation every member is scored against the target truth table.
//! Members that get no row right are culled, and the survivors form a
//! breeding pool in which every member is equally likely to be picked as a
//! parent. Each child gene is copied from the first parent, copied from the
//! second parent, or resampled from the full allele space for its position,
//! with probabilities `split`, `split` and `mutation_rate`
//! (`2 * split + mutation_rate == 1`). Children replace the whole population,
//! and the run stops as soon as any member reproduces the target exactly.
//!
//! All randomness comes from one ChaCha8 stream seeded from
//! [`GaConfig::seed`], consumed in a fixed order: initial genes in gene
//! order, then per generation and per child the two parent draws followed by
//! that child's gene draws.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netlist::{allele_count, Fitness, Gate, InputSource, NandGenome, TruthTable};

pub type GaRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> GaRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub num_gates: usize,
    /// Per-gene probability of resampling; each parent gets half the rest.
    pub mutation_rate: f64,
    pub max_generations: u64,
    pub seed: u64,
    /// Record best/mean fitness for every generation.
    pub trace: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 10,
            num_gates: 2,
            mutation_rate: 0.10,
            max_generations: 100_000,
            seed: 0,
            trace: false,
        }
    }
}

impl GaConfig {
    /// Probability mass of inheriting a gene from one particular parent.
    pub fn crossover_split(&self) -> f64 {
        (1.0 - self.mutation_rate) / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        if self.num_gates == 0 {
            return Err(Error::Config("gate count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Config(format!(
                "mutation rate must lie in [0, 1], got {}",
                self.mutation_rate
            )));
        }
        Ok(())
    }
}

/// A genome with its fitness against the run's target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub genome: NandGenome,
    pub fitness: Fitness,
}

impl Individual {
    pub fn evaluate(genome: NandGenome, target: &TruthTable) -> Result<Self> {
        let fitness = genome.fitness(target)?;
        Ok(Self { genome, fitness })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub generation: u64,
    pub best: Fitness,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Solved {
        genome: NandGenome,
        generation: u64,
    },
    Exhausted {
        best: Individual,
        generations_run: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    /// Empty unless [`GaConfig::trace`] was set.
    pub trace: Vec<TraceRow>,
}

impl RunOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self.status, RunStatus::Solved { .. })
    }

    pub fn solution(&self) -> Option<&NandGenome> {
        match &self.status {
            RunStatus::Solved { genome, .. } => Some(genome),
            RunStatus::Exhausted { .. } => None,
        }
    }

    /// Generation of the solution, or the number of generations run.
    pub fn generations(&self) -> u64 {
        match self.status {
            RunStatus::Solved { generation, .. } => generation,
            RunStatus::Exhausted {
                generations_run, ..
            } => generations_run,
        }
    }
}

/// Renders a fitness trace as `generation,best_fitness,mean_fitness` CSV.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut out = String::from("generation,best_fitness,mean_fitness\n");
    for row in trace {
        let _ = writeln!(out, "{},{},{}", row.generation, row.best.as_f64(), row.mean);
    }
    out
}

/// Hooks into a run, for instrumentation and tests.
pub trait Observer {
    /// Called once per evaluated generation, before the termination check.
    fn generation(&mut self, _generation: u64, _population: &[Individual]) {}
    /// Called for every pair of parents picked from the breeding pool.
    fn mating(&mut self, _a: &Individual, _b: &Individual) {}
    /// Called when the whole population had zero fitness and was redrawn.
    fn reseeded(&mut self) {}
}

impl Observer for () {}

fn random_source<R: Rng + ?Sized>(rng: &mut R, num_inputs: usize, gate: usize) -> InputSource {
    InputSource::from_code(rng.gen_range(0..allele_count(num_inputs, gate)), num_inputs)
}

/// Draws every gene uniformly from its position's allele space.
pub fn random_genome<R: Rng + ?Sized>(
    rng: &mut R,
    num_inputs: usize,
    num_gates: usize,
) -> NandGenome {
    assert!(
        num_inputs >= 1 && num_gates >= 1,
        "genome needs inputs and gates"
    );
    let gates = (0..num_gates)
        .map(|i| {
            let a = random_source(rng, num_inputs, i);
            let b = random_source(rng, num_inputs, i);
            Gate::new(a, b)
        })
        .collect();
    NandGenome::new(num_inputs, gates).expect("sampled genes respect feed-forward order")
}

/// Gene-wise recombination with mutation.
pub fn breed<R: Rng + ?Sized>(
    parent_a: &NandGenome,
    parent_b: &NandGenome,
    mutation_rate: f64,
    rng: &mut R,
) -> Result<NandGenome> {
    if parent_a.num_inputs() != parent_b.num_inputs() {
        return Err(Error::Arity {
            expected: parent_a.num_inputs(),
            found: parent_b.num_inputs(),
        });
    }
    if parent_a.num_gates() != parent_b.num_gates() {
        return Err(Error::Arity {
            expected: parent_a.num_gates(),
            found: parent_b.num_gates(),
        });
    }
    let split = (1.0 - mutation_rate) / 2.0;
    let num_inputs = parent_a.num_inputs();
    let mut pick = |i: usize, from_a: InputSource, from_b: InputSource| {
        let u: f64 = rng.gen();
        if u < split {
            from_a
        } else if u < 2.0 * split {
            from_b
        } else {
            random_source(rng, num_inputs, i)
        }
    };
    let gates = parent_a
        .gates()
        .iter()
        .zip(parent_b.gates())
        .enumerate()
        .map(|(i, (ga, gb))| {
            let a = pick(i, ga.a, gb.a);
            let b = pick(i, ga.b, gb.b);
            Gate::new(a, b)
        })
        .collect();
    Ok(NandGenome::new(num_inputs, gates).expect("inherited and mutated genes stay feed-forward"))
}

fn random_population<R: Rng + ?Sized>(
    rng: &mut R,
    target: &TruthTable,
    config: &GaConfig,
) -> Vec<Individual> {
    (0..config.population_size)
        .map(|_| random_genome(rng, target.num_inputs(), config.num_gates))
        .map(|g| Individual::evaluate(g, target).expect("genome arity matches target"))
        .collect()
}

/// Produces the next generation from an evaluated, unsolved population.
pub fn step_generation<R: Rng + ?Sized>(
    population: &[Individual],
    target: &TruthTable,
    rng: &mut R,
    config: &GaConfig,
) -> Vec<Individual> {
    step_generation_observed(population, target, rng, config, &mut ())
}

pub fn step_generation_observed<R: Rng + ?Sized>(
    population: &[Individual],
    target: &TruthTable,
    rng: &mut R,
    config: &GaConfig,
    observer: &mut dyn Observer,
) -> Vec<Individual> {
    let pool: Vec<&Individual> = population.iter().filter(|m| !m.fitness.is_zero()).collect();
    if pool.is_empty() {
        observer.reseeded();
        return random_population(rng, target, config);
    }
    (0..config.population_size)
        .map(|_| {
            let a = pool[rng.gen_range(0..pool.len())];
            let b = pool[rng.gen_range(0..pool.len())];
            observer.mating(a, b);
            let child = breed(&a.genome, &b.genome, config.mutation_rate, rng)
                .expect("population members share one shape");
            Individual::evaluate(child, target).expect("genome arity matches target")
        })
        .collect()
}

pub fn run_evolution(config: &GaConfig, target: &TruthTable) -> Result<RunOutcome> {
    run_evolution_observed(config, target, &mut ())
}

pub fn run_evolution_observed(
    config: &GaConfig,
    target: &TruthTable,
    observer: &mut dyn Observer,
) -> Result<RunOutcome> {
    config.validate()?;
    let mut rng = seeded_rng(config.seed);
    let mut population = random_population(&mut rng, target, config);
    let mut trace = Vec::new();
    let mut best: Option<Individual> = None;
    let mut generation = 0u64;
    loop {
        observer.generation(generation, &population);
        if config.trace {
            let best_here = population
                .iter()
                .map(|m| m.fitness)
                .max()
                .expect("non-empty");
            let mean = population.iter().map(|m| m.fitness.as_f64()).sum::<f64>()
                / population.len() as f64;
            trace.push(TraceRow {
                generation,
                best: best_here,
                mean,
            });
        }
        if let Some(winner) = population.iter().find(|m| m.fitness.is_perfect()) {
            return Ok(RunOutcome {
                status: RunStatus::Solved {
                    genome: winner.genome.clone(),
                    generation,
                },
                trace,
            });
        }
        for member in &population {
            if best.as_ref().is_none_or(|b| member.fitness > b.fitness) {
                best = Some(member.clone());
            }
        }
        if generation >= config.max_generations {
            return Ok(RunOutcome {
                status: RunStatus::Exhausted {
                    best: best.expect("population is never empty"),
                    generations_run: generation,
                },
                trace,
            });
        }
        population = step_generation_observed(&population, target, &mut rng, config, observer);
        generation += 1;
    }
}
