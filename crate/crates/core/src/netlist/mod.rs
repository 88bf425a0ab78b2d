//! Feed-forward NAND netlists.
//!
//! A [`NandGenome`] is an ordered list of two-input NAND gates. Each gate
//! input (a *gene*) is an [`InputSource`]: either an external circuit input
//! or the output of a strictly earlier gate, so every genome is acyclic by
//! construction. The circuit output is the output of the last gate.

mod format;
pub(crate) mod truth_table;

use std::fmt;

pub use truth_table::{Fitness, Preset, Target, TruthTable, MAX_INPUTS};

use crate::error::{Error, Pin, Result};
use truth_table::{input_column_word, word_count};

/// Where a gate input is wired from.
///
/// The derived ordering (all external inputs, then gates by index) is the
/// allele order used for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputSource {
    External(usize),
    Gate(usize),
}

impl InputSource {
    /// Dense allele code: externals occupy `0..num_inputs`, gate `j` is
    /// `num_inputs + j`.
    pub fn code(self, num_inputs: usize) -> usize {
        match self {
            InputSource::External(k) => k,
            InputSource::Gate(j) => num_inputs + j,
        }
    }

    pub fn from_code(code: usize, num_inputs: usize) -> Self {
        if code < num_inputs {
            InputSource::External(code)
        } else {
            InputSource::Gate(code - num_inputs)
        }
    }

    fn check(self, num_inputs: usize, gate: usize, pin: Pin) -> Result<()> {
        match self {
            InputSource::External(k) if k >= num_inputs => Err(Error::Structure {
                gate,
                pin,
                reason: format!("external input {k} out of range (circuit has {num_inputs})"),
            }),
            InputSource::Gate(j) if j >= gate => Err(Error::Structure {
                gate,
                pin,
                reason: format!("references gate {j}; only gates below {gate} are allowed"),
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for InputSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSource::External(k) => write!(f, "x{k}"),
            InputSource::Gate(j) => write!(f, "g{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gate {
    pub a: InputSource,
    pub b: InputSource,
}

impl Gate {
    pub fn new(a: InputSource, b: InputSource) -> Self {
        Self { a, b }
    }

    pub fn pins(&self) -> [InputSource; 2] {
        [self.a, self.b]
    }
}

/// Number of alleles available to either input of gate `gate`.
pub fn allele_count(num_inputs: usize, gate: usize) -> usize {
    num_inputs + gate
}

/// A validated feed-forward NAND circuit; the heritable individual of the GA.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NandGenome {
    num_inputs: usize,
    gates: Vec<Gate>,
}

impl NandGenome {
    pub fn new(num_inputs: usize, gates: Vec<Gate>) -> Result<Self> {
        if num_inputs == 0 {
            return Err(Error::Empty("input"));
        }
        if gates.is_empty() {
            return Err(Error::Empty("gate"));
        }
        for (i, gate) in gates.iter().enumerate() {
            gate.a.check(num_inputs, i, Pin::A)?;
            gate.b.check(num_inputs, i, Pin::B)?;
        }
        Ok(Self { num_inputs, gates })
    }

    /// Builds a genome from dense allele codes, two per gate, without
    /// validation. Callers guarantee `codes[2i], codes[2i+1] < num_inputs + i`.
    pub(crate) fn from_codes_unchecked(num_inputs: usize, codes: &[usize]) -> Self {
        debug_assert!(codes.len().is_multiple_of(2) && !codes.is_empty());
        let gates = codes
            .chunks_exact(2)
            .enumerate()
            .map(|(i, pair)| {
                debug_assert!(pair.iter().all(|&c| c < allele_count(num_inputs, i)));
                Gate::new(
                    InputSource::from_code(pair[0], num_inputs),
                    InputSource::from_code(pair[1], num_inputs),
                )
            })
            .collect();
        Self { num_inputs, gates }
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Genes in order: gate 0 pin a, gate 0 pin b, gate 1 pin a, ...
    pub fn genes(&self) -> impl Iterator<Item = InputSource> + '_ {
        self.gates.iter().flat_map(|g| g.pins())
    }

    pub fn gene_count(&self) -> usize {
        2 * self.gates.len()
    }

    pub fn codes(&self) -> Vec<usize> {
        self.genes().map(|s| s.code(self.num_inputs)).collect()
    }

    /// Output of the last gate for a single input assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool> {
        if assignment.len() != self.num_inputs {
            return Err(Error::Arity {
                expected: self.num_inputs,
                found: assignment.len(),
            });
        }
        let mut outputs = Vec::with_capacity(self.gates.len());
        let resolve = |src: InputSource, outputs: &[bool]| match src {
            InputSource::External(k) => assignment[k],
            InputSource::Gate(j) => outputs[j],
        };
        for gate in &self.gates {
            let value = !(resolve(gate.a, &outputs) && resolve(gate.b, &outputs));
            outputs.push(value);
        }
        Ok(*outputs.last().expect("genome has at least one gate"))
    }

    /// Evaluates every row at once, 64 rows per machine word.
    pub fn truth_table(&self) -> Result<TruthTable> {
        if self.num_inputs > MAX_INPUTS {
            return Err(Error::Capacity(format!(
                "{} inputs exceeds the truth-table limit of {MAX_INPUTS}",
                self.num_inputs
            )));
        }
        let words = word_count(self.num_inputs);
        let mut gate_words = vec![0u64; words * self.gates.len()];
        for w in 0..words {
            for (i, gate) in self.gates.iter().enumerate() {
                let fetch = |src: InputSource, gw: &[u64]| match src {
                    InputSource::External(k) => input_column_word(k, w),
                    InputSource::Gate(j) => gw[j * words + w],
                };
                let value = !(fetch(gate.a, &gate_words) & fetch(gate.b, &gate_words));
                gate_words[i * words + w] = value;
            }
        }
        let last = self.gates.len() - 1;
        Ok(TruthTable::from_words(
            self.num_inputs,
            gate_words[last * words..].to_vec(),
        ))
    }

    /// Fraction of `target`'s rows this circuit reproduces.
    pub fn fitness(&self, target: &TruthTable) -> Result<Fitness> {
        if target.num_inputs() != self.num_inputs {
            return Err(Error::Arity {
                expected: self.num_inputs,
                found: target.num_inputs(),
            });
        }
        let correct = self.truth_table()?.agreement(target)?;
        Ok(Fitness::new(correct as u32, target.num_rows() as u32))
    }

    /// Which gates lie on some backward path from the output gate.
    pub fn live_gates(&self) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        *live.last_mut().expect("genome has at least one gate") = true;
        for i in (0..self.gates.len()).rev() {
            if !live[i] {
                continue;
            }
            for src in self.gates[i].pins() {
                if let InputSource::Gate(j) = src {
                    live[j] = true;
                }
            }
        }
        live
    }

    /// Drops gates that cannot influence the output and renumbers the rest,
    /// keeping their relative order.
    pub fn prune_dead_gates(&self) -> NandGenome {
        let live = self.live_gates();
        let mut remap = vec![usize::MAX; self.gates.len()];
        let mut next = 0;
        for (i, &is_live) in live.iter().enumerate() {
            if is_live {
                remap[i] = next;
                next += 1;
            }
        }
        let rewire = |src: InputSource| match src {
            InputSource::Gate(j) => InputSource::Gate(remap[j]),
            ext => ext,
        };
        let gates = self
            .gates
            .iter()
            .zip(&live)
            .filter(|(_, &is_live)| is_live)
            .map(|(g, _)| Gate::new(rewire(g.a), rewire(g.b)))
            .collect();
        NandGenome {
            num_inputs: self.num_inputs,
            gates,
        }
    }

    /// Structural identity of the pruned circuit.
    ///
    /// Layout: LEB128 varints of the input count, the live gate count, then
    /// every gene's allele code in gene order. Two genomes share a key iff
    /// their pruned forms are identical; functionally equivalent circuits
    /// with different wiring get different keys.
    pub fn canonical_key(&self) -> Vec<u8> {
        let pruned = self.prune_dead_gates();
        let mut key = Vec::with_capacity(2 + pruned.gene_count());
        push_varint(&mut key, pruned.num_inputs);
        push_varint(&mut key, pruned.num_gates());
        for code in pruned.codes() {
            push_varint(&mut key, code);
        }
        key
    }
}

fn push_varint(out: &mut Vec<u8>, mut value: usize) {
    loop {
        let byte = (value & 0x7f) as u8;
        value >>= 7;
        if value == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

impl fmt::Debug for NandGenome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NandGenome(n={}; ", self.num_inputs)?;
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{})", g.a, g.b)?;
        }
        f.write_str(")")
    }
}
