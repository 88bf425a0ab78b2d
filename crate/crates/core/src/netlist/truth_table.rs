use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest arity for which truth tables are materialized (2^16 rows).
pub const MAX_INPUTS: usize = 16;

/// Column patterns for inputs 0..6 within a single 64-row word.
const LOW_INPUT_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

pub(crate) fn word_count(num_inputs: usize) -> usize {
    (1usize << num_inputs).div_ceil(64)
}

/// Mask of the rows that exist in the last word.
pub(crate) fn tail_mask(num_inputs: usize) -> u64 {
    let rows = 1usize << num_inputs;
    if rows >= 64 {
        !0
    } else {
        (1u64 << rows) - 1
    }
}

/// Word `word` of the column of external input `input`, i.e. bit `b` is set
/// iff bit `input` of row `64 * word + b` is set.
pub(crate) fn input_column_word(input: usize, word: usize) -> u64 {
    if input < 6 {
        LOW_INPUT_PATTERNS[input]
    } else if (word >> (input - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

/// A single-output Boolean function of `num_inputs` variables.
///
/// Row `i` holds the output for the assignment where external input `k`
/// takes the value of bit `k` of `i`; input 0 is the least significant bit.
/// The textual form lists rows in increasing index order, so AND is `"0001"`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_inputs: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(num_inputs: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_arity(num_inputs)?;
        let mut words = vec![0u64; word_count(num_inputs)];
        for row in 0..1usize << num_inputs {
            if f(row) {
                words[row / 64] |= 1 << (row % 64);
            }
        }
        Ok(Self { num_inputs, words })
    }

    /// Parses a row-ordered bit string such as `"0110"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let len = bits.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::TruthTable(format!(
                "length {len} is not a power of two >= 2"
            )));
        }
        let num_inputs = len.trailing_zeros() as usize;
        check_arity(num_inputs)?;
        let bytes = bits.as_bytes();
        if let Some(pos) = bytes.iter().position(|b| *b != b'0' && *b != b'1') {
            return Err(Error::TruthTable(format!(
                "unexpected character {:?} at position {pos}",
                bits[pos..].chars().next().unwrap()
            )));
        }
        Self::from_fn(num_inputs, |row| bytes[row] == b'1')
    }

    pub(crate) fn from_words(num_inputs: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(num_inputs));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(num_inputs);
        }
        Self { num_inputs, words }
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_rows(&self) -> usize {
        1 << self.num_inputs
    }

    pub fn get(&self, row: usize) -> bool {
        assert!(row < self.num_rows(), "row {row} out of range");
        (self.words[row / 64] >> (row % 64)) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Number of rows on which `self` and `other` agree.
    pub fn agreement(&self, other: &TruthTable) -> Result<usize> {
        if self.num_inputs != other.num_inputs {
            return Err(Error::Arity {
                expected: self.num_inputs,
                found: other.num_inputs,
            });
        }
        let differing: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        Ok(self.num_rows() - differing as usize)
    }

    pub fn to_bits(&self) -> String {
        (0..self.num_rows())
            .map(|row| if self.get(row) { '1' } else { '0' })
            .collect()
    }
}

fn check_arity(num_inputs: usize) -> Result<()> {
    if num_inputs == 0 {
        return Err(Error::TruthTable("need at least one input".into()));
    }
    if num_inputs > MAX_INPUTS {
        return Err(Error::Capacity(format!(
            "{num_inputs} inputs exceeds the truth-table limit of {MAX_INPUTS}"
        )));
    }
    Ok(())
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bits())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({})", self.to_bits())
    }
}

/// Fraction of truth-table rows a circuit gets right, kept as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fitness {
    correct: u32,
    rows: u32,
}

impl Fitness {
    pub fn new(correct: u32, rows: u32) -> Self {
        assert!(
            rows > 0 && correct <= rows,
            "fitness {correct}/{rows} out of range"
        );
        Self { correct, rows }
    }

    pub fn correct(&self) -> u32 {
        self.correct
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn is_perfect(&self) -> bool {
        self.correct == self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.correct == 0
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.correct) / f64::from(self.rows)
    }
}

impl Ord for Fitness {
    fn cmp(&self, other: &Self) -> Ordering {
        (u64::from(self.correct) * u64::from(other.rows))
            .cmp(&(u64::from(other.correct) * u64::from(self.rows)))
    }
}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.correct, self.rows)
    }
}

/// The named two-input functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    And,
    Or,
    Nor,
    Xor,
    Xnor,
    Nand,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::And,
        Preset::Or,
        Preset::Nor,
        Preset::Xor,
        Preset::Xnor,
        Preset::Nand,
    ];

    /// The five functions evolved in the reference experiments, in report order.
    pub const EXPERIMENT: [Preset; 5] = [
        Preset::And,
        Preset::Or,
        Preset::Nor,
        Preset::Xor,
        Preset::Xnor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::And => "and",
            Preset::Or => "or",
            Preset::Nor => "nor",
            Preset::Xor => "xor",
            Preset::Xnor => "xnor",
            Preset::Nand => "nand",
        }
    }

    pub fn bits(self) -> &'static str {
        match self {
            Preset::And => "0001",
            Preset::Or => "0111",
            Preset::Nor => "1000",
            Preset::Xor => "0110",
            Preset::Xnor => "1001",
            Preset::Nand => "1110",
        }
    }

    pub fn table(self) -> TruthTable {
        TruthTable::from_bits(self.bits()).expect("preset tables are well-formed")
    }

    /// Minimal NAND gate count under the last-gate-output convention.
    pub fn minimal_gates(self) -> usize {
        match self {
            Preset::Nand => 1,
            Preset::And => 2,
            Preset::Or => 3,
            Preset::Nor | Preset::Xor => 4,
            Preset::Xnor => 5,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Target(s.to_string()))
    }
}

/// A target function together with the label it is reported under.
///
/// Parses from a preset name (`xor`) or a literal table (`tt:0110`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Target {
    label: String,
    table: TruthTable,
}

impl Target {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn preset(&self) -> Option<Preset> {
        self.label.parse().ok()
    }
}

impl From<Preset> for Target {
    fn from(preset: Preset) -> Self {
        Target {
            label: preset.name().to_string(),
            table: preset.table(),
        }
    }
}

impl From<TruthTable> for Target {
    fn from(table: TruthTable) -> Self {
        Target {
            label: format!("tt:{table}"),
            table,
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("tt:") {
            Some(bits) => Ok(TruthTable::from_bits(bits)?.into()),
            None => Ok(s.parse::<Preset>()?.into()),
        }
    }
}

impl TryFrom<String> for Target {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Target> for String {
    fn from(t: Target) -> String {
        t.label
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}
