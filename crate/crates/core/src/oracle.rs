//! Exhaustive search over every feed-forward genome of a given size.
//!
//! Genomes are ordered lexicographically by their allele codes, gate 0 pin a
//! most significant. The search fixes gates one at a time and keeps each
//! gate's output column, so a leaf costs a single NAND over the table words.
//! Work is split by the wiring of the first few gates and run on the rayon
//! pool; per-prefix results are merged in enumeration order, so results do
//! not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netlist::truth_table::{input_column_word, tail_mask, word_count};
use crate::netlist::{allele_count, NandGenome, TruthTable, MAX_INPUTS};

/// Largest number of genomes a single search level may visit.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Number of distinct genomes with `num_gates` gates: the product over
/// gates of the squared allele count. `None` on overflow.
pub fn genome_space_size(num_inputs: usize, num_gates: usize) -> Option<u128> {
    (0..num_gates).try_fold(1u128, |acc, i| {
        let choices = allele_count(num_inputs, i) as u128;
        acc.checked_mul(choices * choices)
    })
}

fn check_budget(num_inputs: usize, num_gates: usize, budget: u128) -> Result<u128> {
    if num_inputs == 0 || num_gates == 0 {
        return Err(Error::Config(
            "enumeration needs at least one input and one gate".into(),
        ));
    }
    match genome_space_size(num_inputs, num_gates) {
        Some(size) if size <= budget => Ok(size),
        size => Err(Error::Capacity(format!(
            "{} genomes with {num_inputs} inputs and {num_gates} gates exceeds the budget of {budget}",
            size.map_or_else(|| "more than 2^128".to_string(), |s| s.to_string())
        ))),
    }
}

/// Every genome of one shape, in lexicographic gene order.
#[derive(Debug, Clone)]
pub struct Genomes {
    num_inputs: usize,
    codes: Vec<usize>,
    remaining: u128,
}

impl Iterator for Genomes {
    type Item = NandGenome;

    fn next(&mut self) -> Option<NandGenome> {
        if self.remaining == 0 {
            return None;
        }
        let genome = NandGenome::from_codes_unchecked(self.num_inputs, &self.codes);
        self.remaining -= 1;
        // odometer step, last gene fastest
        for pos in (0..self.codes.len()).rev() {
            self.codes[pos] += 1;
            if self.codes[pos] < allele_count(self.num_inputs, pos / 2) {
                break;
            }
            self.codes[pos] = 0;
        }
        Some(genome)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match usize::try_from(self.remaining) {
            Ok(n) => (n, Some(n)),
            Err(_) => (usize::MAX, None),
        }
    }
}

/// Streams all genomes of the given shape, refusing shapes larger than
/// `budget`.
pub fn enumerate_genomes(num_inputs: usize, num_gates: usize, budget: u128) -> Result<Genomes> {
    let remaining = check_budget(num_inputs, num_gates, budget)?;
    Ok(Genomes {
        num_inputs,
        codes: vec![0; 2 * num_gates],
        remaining,
    })
}

/// Tallies for one gate count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct LevelStats {
    /// Genomes realizing the target.
    raw: u64,
    /// Realizing genomes in which every gate feeds the output.
    live: u64,
    /// First realizing genome in enumeration order, as allele codes.
    first: Option<Vec<usize>>,
}

impl LevelStats {
    fn absorb(&mut self, other: LevelStats) {
        self.raw += other.raw;
        self.live += other.live;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

struct LevelSearch<'a> {
    num_inputs: usize,
    num_gates: usize,
    words: usize,
    target: &'a TruthTable,
    /// Signal columns: externals first, then gates, `words` each.
    signals: Vec<u64>,
    codes: Vec<usize>,
    stats: LevelStats,
}

impl<'a> LevelSearch<'a> {
    fn new(target: &'a TruthTable, num_gates: usize) -> Self {
        let num_inputs = target.num_inputs();
        let words = word_count(num_inputs);
        let mut signals = vec![0u64; (num_inputs + num_gates) * words];
        let mask = tail_mask(num_inputs);
        for k in 0..num_inputs {
            for w in 0..words {
                let mut v = input_column_word(k, w);
                if w + 1 == words {
                    v &= mask;
                }
                signals[k * words + w] = v;
            }
        }
        Self {
            num_inputs,
            num_gates,
            words,
            target,
            signals,
            codes: vec![0; 2 * num_gates],
            stats: LevelStats::default(),
        }
    }

    fn wire(&mut self, gate: usize, a: usize, b: usize) {
        self.codes[2 * gate] = a;
        self.codes[2 * gate + 1] = b;
        let words = self.words;
        let mask = tail_mask(self.num_inputs);
        let out = (self.num_inputs + gate) * words;
        for w in 0..words {
            let mut v = !(self.signals[a * words + w] & self.signals[b * words + w]);
            if w + 1 == words {
                v &= mask;
            }
            self.signals[out + w] = v;
        }
    }

    fn search_from(&mut self, gate: usize) {
        if gate == self.num_gates {
            self.leaf();
            return;
        }
        let choices = allele_count(self.num_inputs, gate);
        for a in 0..choices {
            for b in 0..choices {
                self.wire(gate, a, b);
                self.search_from(gate + 1);
            }
        }
    }

    fn leaf(&mut self) {
        let out = (self.num_inputs + self.num_gates - 1) * self.words;
        if self.signals[out..out + self.words] != *self.target.words() {
            return;
        }
        self.stats.raw += 1;
        if all_gates_live(self.num_inputs, &self.codes) {
            self.stats.live += 1;
        }
        if self.stats.first.is_none() {
            self.stats.first = Some(self.codes.clone());
        }
    }
}

fn all_gates_live(num_inputs: usize, codes: &[usize]) -> bool {
    let num_gates = codes.len() / 2;
    let mut live = vec![false; num_gates];
    live[num_gates - 1] = true;
    for i in (0..num_gates).rev() {
        if !live[i] {
            return false;
        }
        for &c in &codes[2 * i..2 * i + 2] {
            if c >= num_inputs {
                live[c - num_inputs] = true;
            }
        }
    }
    true
}

/// Prefix depth so that there are enough independent subtrees to share out.
fn split_depth(num_inputs: usize, num_gates: usize) -> usize {
    let mut tasks = 1usize;
    for depth in 0..num_gates {
        if tasks >= 64 {
            return depth;
        }
        let c = allele_count(num_inputs, depth);
        tasks = tasks.saturating_mul(c * c);
    }
    num_gates
}

fn scan_level(target: &TruthTable, num_gates: usize) -> LevelStats {
    let num_inputs = target.num_inputs();
    let depth = split_depth(num_inputs, num_gates);
    let prefixes: Vec<Vec<usize>> = enumerate_genomes(num_inputs, depth, u128::MAX)
        .expect("prefix shape is non-empty")
        .map(|g| g.codes())
        .collect();
    let parts: Vec<LevelStats> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut search = LevelSearch::new(target, num_gates);
            for (gate, pair) in prefix.chunks_exact(2).enumerate() {
                search.wire(gate, pair[0], pair[1]);
            }
            search.search_from(prefix.len() / 2);
            search.stats
        })
        .collect();
    let mut total = LevelStats::default();
    for part in parts {
        total.absorb(part);
    }
    total
}

/// Solution tallies at one gate count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolutionCount {
    /// Genomes with exactly this many gates that realize the target.
    pub raw: u64,
    /// Distinct canonical keys among them.
    pub canonical: u64,
}

/// Counts the genomes of exactly `num_gates` gates realizing `target`.
///
/// The canonical count uses the fact that the pruned forms reachable at `G`
/// gates are exactly the fully live circuits of `L <= G` gates realizing the
/// target (any of them can be padded with dead gates at the front), so no
/// key set has to be held in memory.
pub fn count_solutions(
    target: &TruthTable,
    num_gates: usize,
    budget: u128,
) -> Result<SolutionCount> {
    check_arity(target)?;
    check_budget(target.num_inputs(), num_gates, budget)?;
    let mut canonical = 0;
    let mut raw = 0;
    for g in 1..=num_gates {
        let stats = scan_level(target, g);
        canonical += stats.live;
        raw = stats.raw;
    }
    Ok(SolutionCount { raw, canonical })
}

fn check_arity(target: &TruthTable) -> Result<()> {
    if target.num_inputs() > MAX_INPUTS {
        return Err(Error::Capacity(format!("arity above {MAX_INPUTS}")));
    }
    Ok(())
}

/// Smallest realization of a target found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityResult {
    pub target: TruthTable,
    pub max_gates: usize,
    /// `None` when nothing up to `max_gates` realizes the target.
    pub minimal_gates: Option<usize>,
    /// First realizing genome in enumeration order at `minimal_gates`.
    pub witness: Option<NandGenome>,
    pub raw_count: u64,
    pub canonical_count: u64,
}

#[derive(Serialize)]
struct MinimalityReport<'a> {
    target: String,
    status: &'static str,
    max_gates: usize,
    minimal_gates: Option<usize>,
    witness: Option<&'a NandGenome>,
    raw_count: u64,
    canonical_count: u64,
}

impl MinimalityResult {
    pub fn is_found(&self) -> bool {
        self.minimal_gates.is_some()
    }

    /// JSON form; the witness is embedded in netlist format. `status` is
    /// `"found"` or `"none up to budget"`.
    pub fn to_json(&self) -> String {
        let report = MinimalityReport {
            target: self.target.to_bits(),
            status: if self.is_found() {
                "found"
            } else {
                "none up to budget"
            },
            max_gates: self.max_gates,
            minimal_gates: self.minimal_gates,
            witness: self.witness.as_ref(),
            raw_count: self.raw_count,
            canonical_count: self.canonical_count,
        };
        serde_json::to_string_pretty(&report).expect("report serialization is infallible")
    }
}

/// Searches gate counts `1..=max_gates` in order and stops at the first that
/// realizes `target`. A level whose genome space exceeds `budget` is a
/// capacity error, but only if the search actually reaches it.
pub fn minimal_gates(
    target: &TruthTable,
    max_gates: usize,
    budget: u128,
) -> Result<MinimalityResult> {
    check_arity(target)?;
    let mut canonical = 0;
    for g in 1..=max_gates {
        check_budget(target.num_inputs(), g, budget)?;
        let stats = scan_level(target, g);
        canonical += stats.live;
        if let Some(codes) = stats.first {
            return Ok(MinimalityResult {
                target: target.clone(),
                max_gates,
                minimal_gates: Some(g),
                witness: Some(NandGenome::from_codes_unchecked(
                    target.num_inputs(),
                    &codes,
                )),
                raw_count: stats.raw,
                canonical_count: canonical,
            });
        }
    }
    Ok(MinimalityResult {
        target: target.clone(),
        max_gates,
        minimal_gates: None,
        witness: None,
        raw_count: 0,
        canonical_count: 0,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::netlist::{Gate, InputSource, Preset};

    /// Reference tallies: walk the public genome stream and evaluate each
    /// genome through the netlist simulator.
    fn brute_force(target: &TruthTable, g: usize) -> (u64, u64, Option<NandGenome>) {
        let mut raw = 0;
        let mut keys = HashSet::new();
        let mut first = None;
        for genome in enumerate_genomes(target.num_inputs(), g, DEFAULT_BUDGET).unwrap() {
            if genome.truth_table().unwrap() == *target {
                raw += 1;
                keys.insert(genome.canonical_key());
                first.get_or_insert(genome);
            }
        }
        (raw, keys.len() as u64, first)
    }

    #[test]
    fn closed_form_sizes() {
        assert_eq!(genome_space_size(2, 1), Some(4));
        assert_eq!(genome_space_size(2, 2), Some(36));
        assert_eq!(genome_space_size(2, 3), Some(576));
        assert_eq!(genome_space_size(2, 5), Some(518_400));
        assert_eq!(genome_space_size(2, 6), Some(25_401_600));
        assert_eq!(genome_space_size(1000, 40), None);
    }

    #[test]
    fn stream_lengths_match_closed_form() {
        for g in 1..=5 {
            let expected = genome_space_size(2, g).unwrap() as usize;
            assert_eq!(
                enumerate_genomes(2, g, DEFAULT_BUDGET).unwrap().count(),
                expected
            );
        }
        assert_eq!(
            enumerate_genomes(3, 2, DEFAULT_BUDGET).unwrap().count(),
            9 * 16
        );
    }

    #[test]
    fn stream_is_lexicographic_and_unique() {
        let all: Vec<Vec<usize>> = enumerate_genomes(2, 3, DEFAULT_BUDGET)
            .unwrap()
            .map(|g| g.codes())
            .collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], vec![0; 6]);
        assert_eq!(all.last().unwrap(), &vec![1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn over_budget_is_refused() {
        assert!(matches!(
            enumerate_genomes(2, 7, DEFAULT_BUDGET),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            enumerate_genomes(2, 3, 575),
            Err(Error::Capacity(_))
        ));
        assert!(enumerate_genomes(2, 3, 576).is_ok());
    }

    #[test]
    fn single_gate_counts() {
        let nand = count_solutions(&Preset::Nand.table(), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(nand.raw, 2);
        let and = count_solutions(&Preset::And.table(), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(and.raw, 0);
    }

    #[test]
    fn two_gate_and_includes_inverter_form() {
        let count = count_solutions(&Preset::And.table(), 2, DEFAULT_BUDGET).unwrap();
        assert!(count.raw > 0);
        let and = NandGenome::new(
            2,
            vec![
                Gate::new(InputSource::External(0), InputSource::External(1)),
                Gate::new(InputSource::Gate(0), InputSource::Gate(0)),
            ],
        )
        .unwrap();
        let found: Vec<_> = enumerate_genomes(2, 2, DEFAULT_BUDGET)
            .unwrap()
            .filter(|g| g.truth_table().unwrap() == Preset::And.table())
            .collect();
        assert!(found.contains(&and));
        assert_eq!(found.len() as u64, count.raw);
    }

    #[test]
    fn fast_search_agrees_with_brute_force() {
        let mut targets: Vec<TruthTable> = Preset::ALL.iter().map(|p| p.table()).collect();
        targets.push(TruthTable::from_bits("0101").unwrap());
        targets.push(TruthTable::from_bits("1111").unwrap());
        for target in &targets {
            for g in 1..=4 {
                let (raw, canonical, first) = brute_force(target, g);
                let count = count_solutions(target, g, DEFAULT_BUDGET).unwrap();
                assert_eq!(
                    (count.raw, count.canonical),
                    (raw, canonical),
                    "{target} at G={g}"
                );
                let stats = scan_level(target, g);
                let first_codes = first.map(|f| f.codes());
                assert_eq!(stats.first, first_codes, "{target} at G={g}");
            }
        }
    }

    #[test]
    fn three_input_search_agrees_with_brute_force() {
        let majority = TruthTable::from_fn(3, |r| r.count_ones() >= 2).unwrap();
        for g in 1..=3 {
            let (raw, canonical, _) = brute_force(&majority, g);
            let count = count_solutions(&majority, g, DEFAULT_BUDGET).unwrap();
            assert_eq!((count.raw, count.canonical), (raw, canonical));
        }
    }

    #[test]
    fn minimal_gate_counts_small_targets() {
        let nand = minimal_gates(&Preset::Nand.table(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(nand.minimal_gates, Some(1));
        assert_eq!(nand.raw_count, 2);
        let and = minimal_gates(&Preset::And.table(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(and.minimal_gates, Some(2));
        let w = and.witness.unwrap();
        assert_eq!(w.num_gates(), 2);
        assert_eq!(w.truth_table().unwrap(), Preset::And.table());
    }

    #[test]
    fn three_input_parity_not_within_two_gates() {
        let parity = TruthTable::from_bits("01101001").unwrap();
        let result = minimal_gates(&parity, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(result.minimal_gates, None);
        assert!(result.witness.is_none());
        assert!(result
            .to_json()
            .contains("\"status\": \"none up to budget\""));
    }

    #[test]
    fn search_past_budget_is_capacity_error() {
        let xnor = Preset::Xnor.table();
        assert!(matches!(
            minimal_gates(&xnor, 5, 10_000),
            Err(Error::Capacity(_))
        ));
        // found before the over-budget level is reached
        assert!(minimal_gates(&Preset::And.table(), 9, 200).is_ok());
    }

    #[test]
    fn liveness_check() {
        // AND with a dead leading gate
        assert!(!all_gates_live(2, &[0, 0, 0, 1, 3, 3]));
        assert!(all_gates_live(2, &[0, 1, 2, 2]));
    }

    #[test]
    fn report_json_embeds_witness() {
        let and = minimal_gates(&Preset::And.table(), 3, DEFAULT_BUDGET).unwrap();
        let v: serde_json::Value = serde_json::from_str(&and.to_json()).unwrap();
        assert_eq!(v["minimal_gates"], 2);
        assert_eq!(v["target"], "0001");
        let witness: NandGenome = serde_json::from_value(v["witness"].clone()).unwrap();
        assert_eq!(witness, and.witness.unwrap());
    }
}
