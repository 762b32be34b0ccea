//! Empirical checks of the random coset code ensemble.
//!
//! Over the draw of `(G, q)`, each codeword is uniform on GF(p)^n and the
//! codewords of two distinct messages are independent. These routines sample
//! (or fully enumerate) the ensemble and run chi-square tests against those
//! uniform laws.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LinearCode;
use crate::error::{Error, Result};
use crate::field::{FieldMatrix, FieldSpec};
use crate::rng;
use crate::stats::{chi_square_uniform, ChiSquareResult};

/// Significance level for every sub-check.
pub const SIGNIFICANCE: f64 = 0.01;

/// Smallest sample count accepted in sampled modes.
pub const MIN_SAMPLES: u64 = 1000;

/// Full-codeword tests are only run when the table has at most this many
/// cells and at least five expected hits per cell.
const MAX_TABLE_CELLS: u64 = 1 << 16;

/// Enumeration limit for exhaustive mode, in codes.
const MAX_ENUMERATED_CODES: u64 = 1 << 20;

/// Joint counts of `(x1[0], x2[0])` for two fixed messages over random codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointCounts {
    field: FieldSpec,
    counts: Vec<u64>,
    samples: u64,
}

impl JointCounts {
    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn count(&self, a: u32, b: u32) -> u64 {
        self.counts[(a * self.field.order() + b) as usize]
    }

    pub fn frequency(&self, a: u32, b: u32) -> f64 {
        self.count(a, b) as f64 / self.samples as f64
    }

    pub fn chi_square(&self) -> ChiSquareResult {
        chi_square_uniform(&self.counts)
    }
}

/// Samples `samples` codes and tallies the first symbols of the codewords of
/// `s1` and `s2`.
pub fn ensemble_pair_stats<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    field: FieldSpec,
    s1: &[u32],
    s2: &[u32],
    samples: u64,
    rng: &mut R,
) -> Result<JointCounts> {
    if s1.len() != k || s2.len() != k {
        return Err(Error::DimensionMismatch {
            context: "message length",
            expected: k,
            found: if s1.len() != k { s1.len() } else { s2.len() },
        });
    }
    let p = field.order();
    let mut counts = vec![0u64; (p * p) as usize];
    for _ in 0..samples {
        let code = LinearCode::sample(k, n, field, rng)?;
        let a = code.encode_raw(s1)[0];
        let b = code.encode_raw(s2)[0];
        counts[(a * p + b) as usize] += 1;
    }
    Ok(JointCounts {
        field,
        counts,
        samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeCheckMode {
    /// Random `(G, q)` draws.
    Sampled,
    /// Every `(G, q)` exactly once; the statistics are then exact.
    Exhaustive,
    /// Random `G` with `q = 0`. The ensemble is no longer uniform, which the
    /// zero-message check must catch.
    Adversarial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub cells: u64,
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeCheckReport {
    pub field_order: u32,
    pub k: usize,
    pub n: usize,
    pub mode: CodeCheckMode,
    pub samples: u64,
    pub seed: u64,
    pub significance: f64,
    pub checks: Vec<SubCheck>,
    pub skipped: Vec<String>,
    pub pass: bool,
}

struct Tally {
    name: &'static str,
    counts: Vec<u64>,
}

impl Tally {
    fn new(name: &'static str, cells: u64) -> Self {
        Tally {
            name,
            counts: vec![0; cells as usize],
        }
    }

    fn finish(self) -> SubCheck {
        let r = chi_square_uniform(&self.counts);
        SubCheck {
            name: self.name.to_string(),
            cells: self.counts.len() as u64,
            statistic: r.statistic,
            dof: r.dof,
            p_value: r.p_value,
            pass: r.p_value >= SIGNIFICANCE,
        }
    }
}

fn index(word: &[u32], p: u32) -> u64 {
    word.iter().fold(0u64, |acc, &v| acc * u64::from(p) + u64::from(v))
}

fn power(p: u32, e: usize) -> Option<u64> {
    u64::from(p).checked_pow(u32::try_from(e).ok()?)
}

/// Runs the ensemble uniformity checks.
///
/// * `first_symbol_zero_message`: `x[0]` for `s = 0`.
/// * `first_symbol_random_message`: `x[0]` for a fresh nonzero `s` per code.
/// * `first_symbols_pair`: `(x1[0], x2[0])` for two fixed distinct messages,
///   the first nonzero.
/// * `codeword_fixed_message` and `codeword_pair`: the same on whole
///   codewords, when the table is small enough to fill.
pub fn run_codecheck(
    k: usize,
    n: usize,
    field: FieldSpec,
    samples: u64,
    seed: u64,
    mode: CodeCheckMode,
) -> Result<CodeCheckReport> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "code dimensions must satisfy 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let p = field.order();
    let mut rng = rng::stream(seed, 0, rng::purpose::CODEBOOK);
    let mut message_rng = rng::stream(seed, 0, rng::purpose::MESSAGES);

    let codes_total = power(p, n * (k + 1)).filter(|&c| c <= MAX_ENUMERATED_CODES);
    let samples = match mode {
        CodeCheckMode::Exhaustive => codes_total.ok_or_else(|| {
            Error::invalid(format!(
                "exhaustive mode needs p^(n(k+1)) <= {MAX_ENUMERATED_CODES} codes"
            ))
        })?,
        _ if samples < MIN_SAMPLES => {
            return Err(Error::invalid(format!(
                "at least {MIN_SAMPLES} samples are required, got {samples}"
            )))
        }
        _ => samples,
    };

    let random_nonzero = |rng: &mut dyn rand::RngCore| -> Vec<u32> {
        loop {
            let s: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            if s.iter().any(|&v| v != 0) {
                return s;
            }
        }
    };
    let s1 = random_nonzero(&mut message_rng);
    let s2 = loop {
        let s: Vec<u32> = (0..k).map(|_| message_rng.gen_range(0..p)).collect();
        if s != s1 {
            break s;
        }
    };
    let zero = vec![0u32; k];
    let nonzero_messages: Vec<Vec<u32>> = if mode == CodeCheckMode::Exhaustive {
        (1..power(p, k).expect("k small in exhaustive mode"))
            .map(|mut idx| {
                let mut s = vec![0u32; k];
                for slot in s.iter_mut().rev() {
                    *slot = (idx % u64::from(p)) as u32;
                    idx /= u64::from(p);
                }
                s
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut skipped = Vec::new();
    let fits = |cells: Option<u64>| {
        cells.filter(|&c| c <= MAX_TABLE_CELLS && (mode == CodeCheckMode::Exhaustive || samples >= 5 * c))
    };
    let word_cells = fits(power(p, n));
    let pair_cells = fits(power(p, 2 * n));
    if word_cells.is_none() {
        skipped.push("codeword_fixed_message".to_string());
    }
    if pair_cells.is_none() {
        skipped.push("codeword_pair".to_string());
    }

    let mut zero_msg = Tally::new("first_symbol_zero_message", u64::from(p));
    let mut random_msg = Tally::new("first_symbol_random_message", u64::from(p));
    let mut pair = Tally::new("first_symbols_pair", u64::from(p * p));
    let mut word = word_cells.map(|c| Tally::new("codeword_fixed_message", c));
    let mut word_pair = pair_cells.map(|c| Tally::new("codeword_pair", c));

    let mut tally = |code: &LinearCode, rng: &mut dyn rand::RngCore| {
        zero_msg.counts[code.encode_raw(&zero)[0] as usize] += 1;
        if mode == CodeCheckMode::Exhaustive {
            for s in &nonzero_messages {
                random_msg.counts[code.encode_raw(s)[0] as usize] += 1;
            }
        } else {
            let s = random_nonzero(rng);
            random_msg.counts[code.encode_raw(&s)[0] as usize] += 1;
        }
        let x1 = code.encode_raw(&s1);
        let x2 = code.encode_raw(&s2);
        pair.counts[(x1[0] * p + x2[0]) as usize] += 1;
        if let Some(t) = word.as_mut() {
            t.counts[index(&x1, p) as usize] += 1;
        }
        if let Some(t) = word_pair.as_mut() {
            let idx = index(&x1, p) * power(p, n).expect("fits") + index(&x2, p);
            t.counts[idx as usize] += 1;
        }
    };

    match mode {
        CodeCheckMode::Exhaustive => {
            let len = n * (k + 1);
            let mut entries = vec![0u32; len];
            for _ in 0..samples {
                let g = FieldMatrix::from_raw(field, k, n, entries[..k * n].to_vec());
                let code = LinearCode::new(g, &field.lift(&entries[k * n..]))?;
                tally(&code, &mut message_rng);
                for e in entries.iter_mut().rev() {
                    *e += 1;
                    if *e < p {
                        break;
                    }
                    *e = 0;
                }
            }
        }
        CodeCheckMode::Sampled | CodeCheckMode::Adversarial => {
            for _ in 0..samples {
                let mut code = LinearCode::sample(k, n, field, &mut rng)?;
                if mode == CodeCheckMode::Adversarial {
                    code = code.with_offset(&vec![field.zero(); n])?;
                }
                tally(&code, &mut message_rng);
            }
        }
    }

    let mut checks = vec![zero_msg.finish(), random_msg.finish(), pair.finish()];
    checks.extend(word.map(Tally::finish));
    checks.extend(word_pair.map(Tally::finish));
    let pass = checks.iter().all(|c| c.pass);
    Ok(CodeCheckReport {
        field_order: p,
        k,
        n,
        mode,
        samples,
        seed,
        significance: SIGNIFICANCE,
        checks,
        skipped,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pair_frequencies_are_near_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = FieldSpec::binary();
        let stats = ensemble_pair_stats(3, 5, f, &[1, 0, 1], &[0, 1, 1], 20_000, &mut rng).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((stats.frequency(a, b) - 0.25).abs() < 0.02);
            }
        }
        assert!(stats.chi_square().p_value >= SIGNIFICANCE);
        assert!(ensemble_pair_stats(3, 5, f, &[1, 0], &[0, 1, 1], 10, &mut rng).is_err());
    }

    #[test]
    fn exhaustive_mode_is_exactly_uniform() {
        for (p, k, n) in [(2u32, 1usize, 1usize), (2, 2, 3), (3, 1, 2)] {
            let f = FieldSpec::new(p).unwrap();
            let report = run_codecheck(k, n, f, 0, 0, CodeCheckMode::Exhaustive).unwrap();
            assert!(report.pass);
            for c in &report.checks {
                assert!(c.statistic.abs() < 1e-9, "{c:?}");
            }
        }
    }

    #[test]
    fn sampled_mode_passes_and_adversarial_mode_is_flagged() {
        let f = FieldSpec::new(3).unwrap();
        let report = run_codecheck(2, 4, f, 20_000, 5, CodeCheckMode::Sampled).unwrap();
        assert!(report.pass, "{report:?}");
        let report = run_codecheck(2, 4, f, 20_000, 5, CodeCheckMode::Adversarial).unwrap();
        assert!(!report.pass);
        let zero = report.checks.iter().find(|c| c.name == "first_symbol_zero_message").unwrap();
        assert!(!zero.pass);
    }

    #[test]
    fn rejects_small_sample_counts() {
        assert!(run_codecheck(2, 4, FieldSpec::binary(), 999, 0, CodeCheckMode::Sampled).is_err());
        assert!(run_codecheck(3, 2, FieldSpec::binary(), 5000, 0, CodeCheckMode::Sampled).is_err());
    }
}
