//! Gate-count bounds and the default section width.

use super::SynthError;

/// Counting lower bound on the worst-case CNOT count for `n` wires:
/// `(n^2 - n) / log2(n^2 - n + 1)`.
pub fn lower_bound_gates(n: usize) -> Result<f64, SynthError> {
    if n < 2 {
        return Err(SynthError::Domain(format!(
            "lower bound needs at least 2 wires, got {n}"
        )));
    }
    let pairs = (n * n - n) as f64;
    Ok(pairs / (pairs + 1.0).log2())
}

/// Smallest integer gate count the lower bound permits.
pub fn lower_bound_gates_ceil(n: usize) -> Result<u64, SynthError> {
    lower_bound_gates(n).map(|b| b.ceil() as u64)
}

/// Worst-case row operations of the partitioned elimination with section
/// width `m`: `(n + m) * s + n + 2 * s * m * (2^m + m)` with `s = ceil(n / m)`.
pub fn upper_bound_row_ops(n: usize, m: usize) -> Result<u128, SynthError> {
    if m == 0 || m > n {
        return Err(SynthError::Domain(format!(
            "section width {m} outside [1, {n}]"
        )));
    }
    let overflow = || SynthError::Domain(format!("bound overflows for n={n}, m={m}"));
    let (n, m) = (n as u128, m as u128);
    let sections = n.div_ceil(m);
    let pow = 1u128
        .checked_shl(m as u32)
        .filter(|_| m < 128)
        .ok_or_else(overflow)?;
    let step_a = (n + m) * sections;
    let step_c = (2 * sections)
        .checked_mul(m)
        .and_then(|x| x.checked_mul(pow + m))
        .ok_or_else(overflow)?;
    step_a
        .checked_add(n)
        .and_then(|x| x.checked_add(step_c))
        .ok_or_else(overflow)
}

/// `max(1, round(log2(n) / 2))`, rounding halves up.
pub fn default_section_size(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let half_log = (n as f64).log2() / 2.0;
    ((half_log + 0.5).floor() as usize).max(1)
}
