//! CNOT synthesis by row reduction.
//!
//! Both synthesizers run the same two-pass scheme. A lower pass row-reduces
//! `A` to an upper-triangular `U`, the transpose `U^T` is reduced to the
//! identity by a second lower pass, and the two operation lists are stitched
//! into one circuit:
//!
//! ```text
//! L_p ... L_1 A = U,   F_q ... F_1 U^T = I
//! A = L_1 ... L_p F_q^T ... F_1^T
//! ```
//!
//! Transposing an elementary matrix swaps its source and destination rows, so
//! the circuit in application order is `swap(F_1), ..., swap(F_q), L_p, ..., L_1`.
//!
//! The partitioned synthesizer splits the columns into sections of width `m`
//! and, before clearing a section column by column, cancels repeated sub-row
//! patterns below the diagonal with one row addition each. This leaves fewer
//! than `2^m` distinct nonzero sub-rows to clear, which is where the saving
//! over plain Gaussian elimination comes from.

mod bounds;

pub use bounds::{
    default_section_size, lower_bound_gates, lower_bound_gates_ceil, upper_bound_row_ops,
};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CnotGate};
use crate::gf2::BitMatrix;

/// Largest accepted section width; the pattern table has `2^m` slots.
pub const MAX_SECTION_WIDTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("matrix is singular: no pivot for column {column}")]
    Singular { column: usize },
    #[error("dimension mismatch: matrix has {matrix} rows, circuit has {circuit} wires")]
    DimensionMismatch { matrix: usize, circuit: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Row addition `row[dst] ^= row[src]`; as a gate, `src` is the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowOp {
    pub src: usize,
    pub dst: usize,
}

impl RowOp {
    pub fn new(src: usize, dst: usize) -> Self {
        Self { src, dst }
    }

    fn gate(self) -> CnotGate {
        CnotGate::new(self.src, self.dst).expect("row ops use distinct rows")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounts {
    /// Duplicate sub-row removal.
    pub a: usize,
    /// Pivot placement on the diagonal.
    pub b: usize,
    /// Clearing below the diagonal.
    pub c: usize,
}

impl StepCounts {
    pub fn total(&self) -> usize {
        self.a + self.b + self.c
    }
}

/// Result of one lower-triangularizing pass.
#[derive(Debug, Clone)]
pub struct LowerSynthesis {
    /// Upper triangular with unit diagonal.
    pub reduced: BitMatrix,
    /// Row operations in the order they were applied.
    pub ops: Vec<RowOp>,
    pub counts: StepCounts,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthOptions {
    /// Section width; `None` picks [`default_section_size`].
    pub m: Option<usize>,
}

impl SynthOptions {
    pub fn with_m(m: usize) -> Self {
        Self { m: Some(m) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthReport {
    pub n: usize,
    /// Section width actually used; 0 for the Gaussian baseline.
    pub m_used: usize,
    /// Set when the requested width was outside `[1, min(n, MAX_SECTION_WIDTH)]`.
    pub m_requested: Option<usize>,
    pub lower: StepCounts,
    pub upper: StepCounts,
}

#[derive(Serialize)]
struct ReportLine {
    n: usize,
    m: usize,
    total: usize,
    step_a: usize,
    step_b: usize,
    step_c: usize,
}

impl SynthReport {
    pub fn gate_count_total(&self) -> usize {
        self.lower.total() + self.upper.total()
    }

    pub fn gates_step_a(&self) -> usize {
        self.lower.a + self.upper.a
    }

    pub fn gates_step_b(&self) -> usize {
        self.lower.b + self.upper.b
    }

    pub fn gates_step_c(&self) -> usize {
        self.lower.c + self.upper.c
    }

    /// One-line JSON summary with keys `n, m, total, step_a, step_b, step_c`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&ReportLine {
            n: self.n,
            m: self.m_used,
            total: self.gate_count_total(),
            step_a: self.gates_step_a(),
            step_b: self.gates_step_b(),
            step_c: self.gates_step_c(),
        })
        .expect("plain struct serializes")
    }

    /// Human-readable note when the section width was clamped.
    pub fn note(&self) -> Option<String> {
        self.m_requested
            .map(|req| format!("section width {req} clamped to {}", self.m_used))
    }
}

/// Reduces `a` to upper-triangular form with the partitioned elimination.
///
/// Columns are processed in sections of `m` (the last may be narrower). In
/// each section, rows from the section's first diagonal row downward are
/// scanned top to bottom and every repeat of a nonzero sub-row pattern gets
/// the first row holding that pattern added to it. The section is then
/// cleared column by column: a zero diagonal is fixed by adding the first
/// lower row with a one there, and the diagonal row is added to every lower
/// row still holding a one.
pub fn lwr_cnot_synth(a: &BitMatrix, m: usize) -> Result<LowerSynthesis, SynthError> {
    let n = a.n();
    if m == 0 || m > MAX_SECTION_WIDTH {
        return Err(SynthError::Domain(format!(
            "section width {m} outside [1, {MAX_SECTION_WIDTH}]"
        )));
    }
    lower_pass(a, m.min(n), true)
}

const NO_ROW: u32 = u32::MAX;

fn lower_pass(a: &BitMatrix, width: usize, dedup: bool) -> Result<LowerSynthesis, SynthError> {
    let n = a.n();
    let mut work = a.clone();
    let mut ops = Vec::new();
    let mut counts = StepCounts::default();
    // first row holding each sub-row pattern, NO_ROW if unseen
    let mut first_row: Vec<u32> = if dedup {
        vec![NO_ROW; 1 << width]
    } else {
        Vec::new()
    };

    for sec_start in (0..n).step_by(width) {
        let sec_width = width.min(n - sec_start);

        if dedup {
            first_row.fill(NO_ROW);
            for row in sec_start..n {
                let pattern = work.sub_row(row, sec_start, sec_width) as usize;
                if pattern == 0 {
                    continue;
                }
                match first_row[pattern] {
                    NO_ROW => first_row[pattern] = row as u32,
                    keeper => {
                        let keeper = keeper as usize;
                        work.xor_row(keeper, row);
                        ops.push(RowOp::new(keeper, row));
                        counts.a += 1;
                    }
                }
            }
        }

        for col in sec_start..sec_start + sec_width {
            if !work.get(col, col) {
                let pivot = (col + 1..n)
                    .find(|&r| work.get(r, col))
                    .ok_or(SynthError::Singular { column: col })?;
                work.xor_row(pivot, col);
                ops.push(RowOp::new(pivot, col));
                counts.b += 1;
            }
            for row in col + 1..n {
                if work.get(row, col) {
                    work.xor_row(col, row);
                    ops.push(RowOp::new(col, row));
                    counts.c += 1;
                }
            }
        }
    }

    Ok(LowerSynthesis {
        reduced: work,
        ops,
        counts,
    })
}

/// Both passes of a synthesis, before assembly into a circuit.
#[derive(Debug, Clone)]
pub struct TwoPassTrace {
    pub lower: LowerSynthesis,
    /// Pass over the transpose of `lower.reduced`.
    pub upper: LowerSynthesis,
    pub m_used: usize,
}

impl TwoPassTrace {
    /// `[swap(F_1) .. swap(F_q), L_p .. L_1]` in application order.
    pub fn circuit(&self, n: usize) -> Circuit {
        let gates = self
            .upper
            .ops
            .iter()
            .map(|op| op.gate().swapped())
            .chain(self.lower.ops.iter().rev().map(|op| op.gate()))
            .collect();
        Circuit::new(n, gates).expect("row ops stay within the matrix")
    }
}

fn two_pass(a: &BitMatrix, width: usize, dedup: bool) -> Result<TwoPassTrace, SynthError> {
    let lower = lower_pass(a, width, dedup)?;
    let upper = lower_pass(&lower.reduced.transpose(), width, dedup)?;
    debug_assert_eq!(upper.reduced, BitMatrix::identity(a.n()).unwrap());
    Ok(TwoPassTrace {
        lower,
        upper,
        m_used: if dedup { width } else { 0 },
    })
}

/// Clamps a requested width to `[1, min(n, MAX_SECTION_WIDTH)]`.
fn resolve_width(n: usize, options: &SynthOptions) -> (usize, Option<usize>) {
    let requested = options.m.unwrap_or_else(|| default_section_size(n));
    let used = requested.clamp(1, n.min(MAX_SECTION_WIDTH));
    (used, (used != requested).then_some(requested))
}

/// Runs both passes of the partitioned synthesis and keeps the row-op trace.
pub fn pmh_trace(a: &BitMatrix, options: &SynthOptions) -> Result<TwoPassTrace, SynthError> {
    let (width, _) = resolve_width(a.n(), options);
    two_pass(a, width, true)
}

/// Partitioned-elimination CNOT synthesis. The returned circuit evaluates to
/// `a` exactly.
pub fn cnot_synth_pmh(
    a: &BitMatrix,
    options: &SynthOptions,
) -> Result<(Circuit, SynthReport), SynthError> {
    let n = a.n();
    let (width, m_requested) = resolve_width(n, options);
    let trace = two_pass(a, width, true)?;
    let report = SynthReport {
        n,
        m_used: width,
        m_requested,
        lower: trace.lower.counts,
        upper: trace.upper.counts,
    };
    Ok((trace.circuit(n), report))
}

/// Gaussian-elimination baseline: the same two-pass scheme with pivot
/// placement and clearing only. Uses at most `n^2` gates.
pub fn gaussian_synth(a: &BitMatrix) -> Result<(Circuit, SynthReport), SynthError> {
    let n = a.n();
    let trace = two_pass(a, n, false)?;
    let report = SynthReport {
        n,
        m_used: 0,
        m_requested: None,
        lower: trace.lower.counts,
        upper: trace.upper.counts,
    };
    Ok((trace.circuit(n), report))
}

/// True iff `circuit` computes exactly `a`.
pub fn verify(a: &BitMatrix, circuit: &Circuit) -> Result<bool, SynthError> {
    if a.n() != circuit.n() {
        return Err(SynthError::DimensionMismatch {
            matrix: a.n(),
            circuit: circuit.n(),
        });
    }
    Ok(circuit.eval_matrix() == *a)
}
