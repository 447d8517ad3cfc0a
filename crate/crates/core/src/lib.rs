//! Synthesis of linear reversible (CNOT-only) circuits.
//!
//! An `n`-wire CNOT circuit computes an invertible `n x n` matrix over GF(2),
//! and every such matrix factors into elementary row additions, one per gate.
//! This crate provides:
//!
//! - [`gf2`]: packed bit matrices, row operations, rank, random invertible
//!   matrices and the size of GL(n, 2).
//! - [`circuit`]: gate lists, their matrices and a plain-text format.
//! - [`synth`]: partitioned-elimination synthesis (`O(n^2 / log n)` gates), a
//!   Gaussian-elimination baseline, gate-count bounds and verification.
//! - [`bench`](mod@bench): a paired, seeded benchmark of both synthesizers with CSV output.
//! - [`cli`]: the `linrev` command-line tool.
//!
//! ```
//! use linrev::{BitMatrix, SynthOptions, cnot_synth_pmh, verify};
//!
//! let a = BitMatrix::random_invertible(16, 7).unwrap();
//! let (circuit, report) = cnot_synth_pmh(&a, &SynthOptions::default()).unwrap();
//! assert!(verify(&a, &circuit).unwrap());
//! assert_eq!(circuit.len(), report.gate_count_total());
//! ```

pub mod bench;
pub mod circuit;
pub mod cli;
pub mod gf2;
pub mod synth;

pub use circuit::{Circuit, CircuitError, CnotGate};
pub use gf2::{count_linear_reversible, BitMatrix, Gf2Error};
pub use synth::{
    cnot_synth_pmh, default_section_size, gaussian_synth, lower_bound_gates, lwr_cnot_synth,
    upper_bound_row_ops, verify, RowOp, SynthError, SynthOptions, SynthReport,
};
