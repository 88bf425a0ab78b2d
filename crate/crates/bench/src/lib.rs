//! Fixtures shared by the criterion benches.

use nandevo::{Gate, InputSource, NandGenome};

/// Four-gate XOR: NAND, two half-selects, NAND of those.
pub fn xor_circuit() -> NandGenome {
    use InputSource::{External as X, Gate as G};
    NandGenome::new(
        2,
        vec![
            Gate::new(X(0), X(1)),
            Gate::new(X(0), G(0)),
            Gate::new(X(1), G(0)),
            Gate::new(G(1), G(2)),
        ],
    )
    .expect("valid wiring")
}

/// A 12-input chain, wide enough to exercise multi-word evaluation.
pub fn wide_chain(num_gates: usize) -> NandGenome {
    let gates = (0..num_gates)
        .map(|i| {
            let a = if i == 0 {
                InputSource::External(0)
            } else {
                InputSource::Gate(i - 1)
            };
            Gate::new(a, InputSource::External(i % 12))
        })
        .collect();
    NandGenome::new(12, gates).expect("valid wiring")
}
