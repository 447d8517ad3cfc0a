//! Paired gate-count benchmark: partitioned elimination vs. Gaussian
//! elimination on seeded random invertible matrices.
//!
//! Trial `t` at size `n` always uses `random_invertible(n, trial_seed(seed, n, t))`,
//! so gate counts depend only on the config, never on thread scheduling.

use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitMatrix;
use crate::synth::{
    cnot_synth_pmh, default_section_size, gaussian_synth, verify, SynthError, SynthOptions,
};

pub const CSV_HEADER: [&str; 8] = [
    "n",
    "m",
    "trials",
    "seed",
    "mean_gates_pmh",
    "mean_gates_gauss",
    "mean_nanos_pmh",
    "mean_nanos_gauss",
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark config: {0}")]
    InvalidConfig(String),
    #[error(
        "{method} synthesis failed for n={n}, trial {trial}, matrix seed {seed:#018x}: {source}"
    )]
    Synth {
        method: &'static str,
        n: usize,
        trial: usize,
        seed: u64,
        source: SynthError,
    },
    #[error("{method} circuit does not match its matrix: n={n}, trial {trial}, matrix seed {seed:#018x}")]
    VerifyFailed {
        method: &'static str,
        n: usize,
        trial: usize,
        seed: u64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Fixed section width for every size; `None` uses [`default_section_size`].
    pub m_override: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![4, 8, 16, 32, 64, 128],
            trials: 100,
            seed: 1,
            m_override: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() {
            return Err(BenchError::InvalidConfig("no sizes given".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(BenchError::InvalidConfig(format!("size {n} is below 2")));
        }
        if self.trials == 0 {
            return Err(BenchError::InvalidConfig(
                "trials must be at least 1".into(),
            ));
        }
        if self.m_override == Some(0) {
            return Err(BenchError::InvalidConfig("m must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean_gates_pmh: f64,
    pub mean_gates_gauss: f64,
    pub mean_nanos_pmh: f64,
    pub mean_nanos_gauss: f64,
}

impl BenchRecord {
    pub fn gauss_to_pmh_ratio(&self) -> f64 {
        self.mean_gates_gauss / self.mean_gates_pmh
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Matrix seed for trial `trial` at size `n`.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ n as u64) ^ trial as u64)
}

struct TrialOutcome {
    gates_pmh: usize,
    gates_gauss: usize,
    nanos_pmh: u128,
    nanos_gauss: u128,
}

fn run_trial(n: usize, m: usize, trial: usize, master: u64) -> Result<TrialOutcome, BenchError> {
    let seed = trial_seed(master, n, trial);
    let a = BitMatrix::random_invertible(n, seed).expect("sizes are validated");
    let fail = |method, source| BenchError::Synth {
        method,
        n,
        trial,
        seed,
        source,
    };
    let check = |method, ok: Result<bool, SynthError>| match ok {
        Ok(true) => Ok(()),
        Ok(false) => Err(BenchError::VerifyFailed {
            method,
            n,
            trial,
            seed,
        }),
        Err(e) => Err(fail(method, e)),
    };

    let start = Instant::now();
    let (pmh, _) = cnot_synth_pmh(&a, &SynthOptions::with_m(m)).map_err(|e| fail("pmh", e))?;
    let nanos_pmh = start.elapsed().as_nanos();
    check("pmh", verify(&a, &pmh))?;

    let start = Instant::now();
    let (gauss, _) = gaussian_synth(&a).map_err(|e| fail("gauss", e))?;
    let nanos_gauss = start.elapsed().as_nanos();
    check("gauss", verify(&a, &gauss))?;

    Ok(TrialOutcome {
        gates_pmh: pmh.len(),
        gates_gauss: gauss.len(),
        nanos_pmh,
        nanos_gauss,
    })
}

/// Runs every trial for every size, verifying each circuit before it is
/// counted. Records come back in the order of `config.sizes`.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    config.validate()?;
    config
        .sizes
        .iter()
        .map(|&n| {
            let m = config
                .m_override
                .unwrap_or_else(|| default_section_size(n))
                .min(n);
            let outcomes = (0..config.trials)
                .into_par_iter()
                .map(|t| run_trial(n, m, t, config.seed))
                .collect::<Result<Vec<_>, _>>()?;
            let count = outcomes.len() as f64;
            let mean =
                |f: &dyn Fn(&TrialOutcome) -> f64| outcomes.iter().map(f).sum::<f64>() / count;
            Ok(BenchRecord {
                n,
                m,
                trials: config.trials,
                seed: config.seed,
                mean_gates_pmh: mean(&|o| o.gates_pmh as f64),
                mean_gates_gauss: mean(&|o| o.gates_gauss as f64),
                mean_nanos_pmh: mean(&|o| o.nanos_pmh as f64),
                mean_nanos_gauss: mean(&|o| o.nanos_gauss as f64),
            })
        })
        .collect()
}

/// Formats a real with 6 significant digits, `%g` style: trailing zeros are
/// dropped and exponent notation is used outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    // exponent after rounding, so 999999.7 becomes 1e6
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(records: &[BenchRecord], sink: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
            format_sig6(r.mean_gates_pmh),
            format_sig6(r.mean_gates_gauss),
            format_sig6(r.mean_nanos_pmh),
            format_sig6(r.mean_nanos_gauss),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is ascii")
}

/// Reads records back from benchmark CSV.
pub fn read_csv<R: Read>(source: R) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rdr = csv::Reader::from_reader(source);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(BenchError::InvalidConfig(format!(
            "unexpected csv header {header:?}"
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(BenchError::from))
        .collect()
}

/// Fixed-width table with the Gaussian/partitioned gate ratio, for terminals.
pub fn summarize(records: &[BenchRecord]) -> String {
    let mut out = format!(
        "{:>6} {:>3} {:>12} {:>12} {:>7}\n",
        "n", "m", "pmh_gates", "gauss_gates", "ratio"
    );
    for r in records {
        out.push_str(&format!(
            "{:>6} {:>3} {:>12.2} {:>12.2} {:>7.3}\n",
            r.n,
            r.m,
            r.mean_gates_pmh,
            r.mean_gates_gauss,
            r.gauss_to_pmh_ratio()
        ));
    }
    out
}
