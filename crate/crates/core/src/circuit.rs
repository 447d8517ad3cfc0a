//! CNOT circuits: gate lists in application order and their matrices.
//!
//! A gate `(control, target)` XORs wire `control` into wire `target`. Its
//! matrix is the elementary matrix with bit `(target, control)` set, so a
//! circuit `g1, g2, ..., gk` evaluates to `E_k * ... * E_2 * E_1`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gf2::{BitMatrix, Gf2Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate control and target must differ (both {0})")]
    SameWire(usize),
    #[error("wire {wire} out of range for a {n}-wire circuit")]
    WireOutOfRange { wire: usize, n: usize },
    #[error("circuit needs at least one wire")]
    NoWires,
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CnotGate {
    control: usize,
    target: usize,
}

impl CnotGate {
    pub fn new(control: usize, target: usize) -> Result<Self, CircuitError> {
        if control == target {
            return Err(CircuitError::SameWire(control));
        }
        Ok(Self { control, target })
    }

    pub fn control(&self) -> usize {
        self.control
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Same wires with the roles exchanged.
    pub fn swapped(self) -> Self {
        Self {
            control: self.target,
            target: self.control,
        }
    }

    pub fn matrix(&self, n: usize) -> Result<BitMatrix, Gf2Error> {
        BitMatrix::elementary(n, self.control, self.target)
    }
}

/// An immutable CNOT circuit on `n` wires.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    gates: Vec<CnotGate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<CnotGate>) -> Result<Self, CircuitError> {
        if n == 0 {
            return Err(CircuitError::NoWires);
        }
        for g in &gates {
            for wire in [g.control, g.target] {
                if wire >= n {
                    return Err(CircuitError::WireOutOfRange { wire, n });
                }
            }
        }
        Ok(Self { n, gates })
    }

    pub fn empty(n: usize) -> Result<Self, CircuitError> {
        Self::new(n, Vec::new())
    }

    /// Builds a circuit from `(control, target)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, CircuitError> {
        let gates = pairs
            .iter()
            .map(|&(c, t)| CnotGate::new(c, t))
            .collect::<Result<_, _>>()?;
        Self::new(n, gates)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CnotGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.gates.iter().map(|g| (g.control, g.target)).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Circuit) -> Result<Circuit, CircuitError> {
        if self.n != next.n {
            return Err(CircuitError::LengthMismatch {
                expected: self.n,
                got: next.n,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&next.gates);
        Ok(Circuit { n: self.n, gates })
    }

    pub fn apply_to_vector(&self, x: &[bool]) -> Result<Vec<bool>, CircuitError> {
        if x.len() != self.n {
            return Err(CircuitError::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut out = x.to_vec();
        for g in &self.gates {
            out[g.target] ^= out[g.control];
        }
        Ok(out)
    }

    /// The linear map computed by the circuit.
    pub fn eval_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::identity(self.n).expect("circuit has at least one wire");
        for g in &self.gates {
            m.xor_row(g.control, g.target);
        }
        m
    }

    pub fn reverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    pub fn swap_control_target(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().map(|g| g.swapped()).collect(),
        }
    }

    /// Every CNOT is its own inverse, so the inverse is the reversed list.
    pub fn inverse(&self) -> Circuit {
        self.reverse()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("wires {}\n", self.n);
        for g in &self.gates {
            let _ = writeln!(out, "cnot {} {}", g.control, g.target);
        }
        out
    }

    /// Parses the circuit text format. `#` lines and blank lines are skipped;
    /// line numbers in errors are 1-based.
    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        let err = |line: usize, msg: String| CircuitError::Parse { line, msg };
        let mut n: Option<usize> = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (n, fields.as_slice()) {
                (None, ["wires", count]) => {
                    let count: usize = count
                        .parse()
                        .map_err(|_| err(line_no, format!("bad wire count {count:?}")))?;
                    if count == 0 {
                        return Err(err(line_no, "wire count must be positive".into()));
                    }
                    n = Some(count);
                }
                (None, _) => return Err(err(line_no, "expected header \"wires <n>\"".into())),
                (Some(wires), ["cnot", c, t]) => {
                    let parse_wire = |s: &str| -> Result<usize, CircuitError> {
                        let w: usize = s
                            .parse()
                            .map_err(|_| err(line_no, format!("bad wire index {s:?}")))?;
                        if w >= wires {
                            return Err(err(
                                line_no,
                                format!("wire {w} out of range for {wires} wires"),
                            ));
                        }
                        Ok(w)
                    };
                    let (c, t) = (parse_wire(c)?, parse_wire(t)?);
                    if c == t {
                        return Err(err(line_no, format!("control and target are both {c}")));
                    }
                    gates.push(CnotGate {
                        control: c,
                        target: t,
                    });
                }
                (Some(_), _) => return Err(err(line_no, format!("malformed gate line {line:?}"))),
            }
        }
        let n = n.ok_or_else(|| err(1, "missing header \"wires <n>\"".into()))?;
        Circuit::new(n, gates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_two() -> Circuit {
        // G1..G6 in application order
        Circuit::from_pairs(4, &[(0, 1), (2, 3), (1, 2), (2, 1), (1, 0), (2, 3)]).unwrap()
    }

    #[test]
    fn gate_rejects_same_wire() {
        assert_eq!(CnotGate::new(2, 2), Err(CircuitError::SameWire(2)));
        assert_eq!(
            Circuit::from_pairs(2, &[(0, 2)]),
            Err(CircuitError::WireOutOfRange { wire: 2, n: 2 })
        );
    }

    #[test]
    fn vector_semantics_follow_truth_table() {
        let empty = Circuit::empty(3).unwrap();
        assert_eq!(
            empty.apply_to_vector(&[true, false, true]).unwrap(),
            vec![true, false, true]
        );
        let cx = Circuit::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(
            cx.apply_to_vector(&[true, false]).unwrap(),
            vec![true, true]
        );
        assert_eq!(
            cx.apply_to_vector(&[false, true]).unwrap(),
            vec![false, true]
        );
        assert_eq!(
            cx.apply_to_vector(&[true, true]).unwrap(),
            vec![true, false]
        );
        assert!(matches!(
            cx.apply_to_vector(&[true]),
            Err(CircuitError::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn eval_small_cases() {
        assert_eq!(
            Circuit::empty(4).unwrap().eval_matrix(),
            BitMatrix::identity(4).unwrap()
        );
        let cx = Circuit::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(cx.eval_matrix().to_text(), "10\n11\n");
    }

    #[test]
    fn eval_figure_two() {
        assert_eq!(
            figure_two().eval_matrix().to_text(),
            "1010\n0010\n1110\n1101\n"
        );
    }

    #[test]
    fn eval_matches_product_of_elementary_matrices() {
        let c = figure_two();
        let n = c.n();
        let product = c
            .gates()
            .iter()
            .fold(BitMatrix::identity(n).unwrap(), |acc, g| {
                g.matrix(n).unwrap().multiply(&acc).unwrap()
            });
        assert_eq!(product, c.eval_matrix());
    }

    #[test]
    fn transforms() {
        let single = Circuit::from_pairs(3, &[(0, 2)]).unwrap();
        assert_eq!(single.reverse(), single);
        let c = figure_two();
        assert_eq!(c.inverse().inverse(), c);
        assert_eq!(c.swap_control_target().len(), c.len());
        assert_eq!(
            c.reverse().swap_control_target().eval_matrix(),
            c.eval_matrix().transpose()
        );
        assert_eq!(
            c.inverse()
                .eval_matrix()
                .multiply(&c.eval_matrix())
                .unwrap(),
            BitMatrix::identity(4).unwrap()
        );
    }

    #[test]
    fn text_format() {
        let c = Circuit::parse("wires 2\ncnot 0 1\n").unwrap();
        assert_eq!(c.pairs(), vec![(0, 1)]);
        assert_eq!(c.n(), 2);
        assert_eq!(Circuit::empty(4).unwrap().to_text(), "wires 4\n");
        let commented = "# generated\nwires 3\n\ncnot 2 0\n# end\ncnot 0 1";
        assert_eq!(
            Circuit::parse(commented).unwrap().pairs(),
            vec![(2, 0), (0, 1)]
        );
        let c = figure_two();
        assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("cnot 0 1\n", 1),
            ("wires x\n", 1),
            ("wires 0\n", 1),
            ("wires 2\ncnot 0 2\n", 2),
            ("wires 2\ncnot 1 1\n", 2),
            ("wires 3\ncnot 0 1\ntoffoli 0 1 2\n", 3),
            ("wires 3\ncnot 0\n", 2),
            ("wires 3\nwires 3\n", 2),
            ("# only a comment\n", 1),
        ];
        for (text, line) in cases {
            match Circuit::parse(text) {
                Err(CircuitError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
