//! JSON and Graphviz DOT renderings of a netlist.
//!
//! JSON layout:
//!
//! ```json
//! {"inputs":2,"gates":[[{"type":"external","index":0},{"type":"external","index":1}],
//!                      [{"type":"gate","index":0},{"type":"gate","index":0}]]}
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Gate, InputSource, NandGenome};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetlist {
    inputs: usize,
    gates: Vec<[RawSource; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawSource {
    External { index: usize },
    Gate { index: usize },
}

impl From<InputSource> for RawSource {
    fn from(src: InputSource) -> Self {
        match src {
            InputSource::External(index) => RawSource::External { index },
            InputSource::Gate(index) => RawSource::Gate { index },
        }
    }
}

impl From<RawSource> for InputSource {
    fn from(src: RawSource) -> Self {
        match src {
            RawSource::External { index } => InputSource::External(index),
            RawSource::Gate { index } => InputSource::Gate(index),
        }
    }
}

impl From<&NandGenome> for RawNetlist {
    fn from(g: &NandGenome) -> Self {
        RawNetlist {
            inputs: g.num_inputs,
            gates: g
                .gates
                .iter()
                .map(|gate| [gate.a.into(), gate.b.into()])
                .collect(),
        }
    }
}

impl TryFrom<RawNetlist> for NandGenome {
    type Error = Error;

    fn try_from(raw: RawNetlist) -> Result<Self> {
        let gates = raw
            .gates
            .into_iter()
            .map(|[a, b]| Gate::new(a.into(), b.into()))
            .collect();
        NandGenome::new(raw.inputs, gates)
    }
}

impl Serialize for NandGenome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawNetlist::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NandGenome {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawNetlist::deserialize(deserializer)?;
        NandGenome::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl NandGenome {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawNetlist::from(self)).expect("netlist serialization is infallible")
    }

    /// Parses the JSON netlist format. Syntax and type errors carry a
    /// line/column; wiring errors name the offending gate and pin.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawNetlist = serde_json::from_str(text)?;
        NandGenome::try_from(raw)
    }

    /// Graphviz rendering: `x<k>` input nodes, `g<j>` gate nodes, one edge per
    /// gene, and the output gate drawn with a double border and
    /// `class="output"`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph nand {\n  rankdir=LR;\n");
        for k in 0..self.num_inputs {
            let _ = writeln!(out, "  x{k} [shape=circle, label=\"x{k}\"];");
        }
        let last = self.gates.len() - 1;
        for j in 0..self.gates.len() {
            if j == last {
                let _ = writeln!(
                    out,
                    "  g{j} [shape=box, label=\"g{j} NAND\", peripheries=2, class=\"output\"];"
                );
            } else {
                let _ = writeln!(out, "  g{j} [shape=box, label=\"g{j} NAND\"];");
            }
        }
        for (j, gate) in self.gates.iter().enumerate() {
            for src in gate.pins() {
                let _ = writeln!(out, "  {src} -> g{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}
