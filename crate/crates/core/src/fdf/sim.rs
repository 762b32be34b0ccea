//! Trials and Monte Carlo summaries.
//!
//! A trial draws a fresh codebook, fresh messages and fresh noise, each from
//! its own stream keyed by `(seed, trial)`, so a trial's outcome does not
//! depend on which worker runs it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    build_schedule, derive_code_dims, final_decode, random_messages, relay_downlink_encode, split_rates, uplink_phase,
    user_decode_downlink, BlockKind, CodeBook, CodeDims, Feasibility, FunctionWord, RateSplit, SubBlockSchedule,
};
use crate::channel::{downlink, MwrcParams};
use crate::code::DecoderConfig;
use crate::error::{Error, Result};
use crate::regions::RateTuple;
use crate::rng::{purpose, stream};
use crate::stats::{wilson_interval, Interval, Z_95};

#[derive(Clone, Debug)]
pub struct SimulationSetup {
    pub params: MwrcParams,
    pub rates: RateTuple,
    pub split: RateSplit,
    pub schedule: SubBlockSchedule,
    pub dims: CodeDims,
    pub decoder: DecoderConfig,
}

impl SimulationSetup {
    /// Splits the rates, schedules the blocks and sizes the codes. An
    /// infeasible verdict is not an error here; see [`Self::feasibility`].
    pub fn new(
        params: MwrcParams,
        rates: RateTuple,
        n_base: usize,
        safety_margin: f64,
        decoder: DecoderConfig,
    ) -> Result<Self> {
        if rates.len() != params.num_users() {
            return Err(Error::Config(format!(
                "{} rates given for {} users",
                rates.len(),
                params.num_users()
            )));
        }
        let split = split_rates(&rates)?;
        let schedule = build_schedule(&split, n_base)?;
        let dims = derive_code_dims(&schedule, &params, safety_margin)?;
        Ok(SimulationSetup {
            params,
            rates,
            split,
            schedule,
            dims,
            decoder,
        })
    }

    pub fn feasibility(&self) -> &Feasibility {
        &self.dims.verdict
    }
}

/// Where a user's exchange first went wrong.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Failure {
    /// The relay's function word was wrong.
    Uplink,
    /// The relay was right but the user decoded a different word.
    Downlink,
    /// Both decodes were right but a message map could not be inverted.
    Inversion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UserOutcome {
    /// `None` when every other user's message was recovered exactly.
    pub failure: Option<Failure>,
    /// The downlink decode failed or disagreed with what the relay sent,
    /// outside the user's own `B` symbols.
    pub downlink_error: bool,
}

impl UserOutcome {
    pub fn success(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub users: Vec<UserOutcome>,
    /// Per schedule block: the relay's row differs from the true one or
    /// the decode failed.
    pub relay_block_errors: Vec<bool>,
}

impl TrialOutcome {
    pub fn relay_correct(&self) -> bool {
        !self.relay_block_errors.iter().any(|&e| e)
    }
}

fn block_rows(word: &FunctionWord) -> impl Iterator<Item = &Vec<crate::field::FieldElem>> {
    word.pair_sums.iter().chain(word.singles.iter().map(|(_, r)| r))
}

/// One uplink block followed by one downlink block. Feasibility is not
/// checked, so over-capacity configurations can be simulated too.
pub fn run_trial(setup: &SimulationSetup, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let SimulationSetup {
        params,
        schedule,
        dims,
        decoder,
        ..
    } = setup;
    let field = params.field();
    let book = CodeBook::sample(schedule, dims, field, &mut stream(seed, trial, purpose::CODEBOOK))?;
    let messages = random_messages(schedule, &mut stream(seed, trial, purpose::MESSAGES));
    let truth = FunctionWord::from_messages(&messages, dims, field)?;

    let up = uplink_phase(
        &messages,
        &book,
        schedule,
        dims,
        params,
        decoder,
        &mut stream(seed, trial, purpose::UPLINK_NOISE),
    )?;
    let relay_block_errors: Vec<bool> = block_rows(&up.word)
        .zip(block_rows(&truth))
        .zip(&up.decode_failed)
        .map(|((got, want), &failed)| failed || got != want)
        .collect();
    let relay_correct = up.word == truth;

    let x0 = relay_downlink_encode(&up.word, book.downlink())?;
    let mut users = Vec::with_capacity(messages.len());
    for (i, own) in messages.iter().enumerate() {
        let mut rng = stream(seed, trial, purpose::DOWNLINK_NOISE + i as u64);
        let y = downlink(&x0, i, params, &mut rng)?;
        let u_hat = user_decode_downlink(
            &y,
            i,
            truth.single(i),
            book.downlink(),
            dims,
            params.downlink_noise(i),
            decoder,
        )?;
        let downlink_error = u_hat.as_ref().is_none_or(|u| !u.agrees_except_own(&up.word, i));
        let recovered = match &u_hat {
            Some(u) => matches!(final_decode(u, i, own, schedule, dims, field)?, Ok(m) if m == messages),
            None => false,
        };
        let failure = if recovered {
            None
        } else if !relay_correct {
            Some(Failure::Uplink)
        } else if downlink_error {
            Some(Failure::Downlink)
        } else {
            Some(Failure::Inversion)
        };
        users.push(UserOutcome {
            failure,
            downlink_error,
        });
    }
    Ok(TrialOutcome {
        users,
        relay_block_errors,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UserSummary {
    /// 1-based.
    pub user: usize,
    pub failures: u64,
    pub error_rate: f64,
    pub interval: Interval,
    pub uplink_caused: u64,
    pub downlink_caused: u64,
    pub inversion_caused: u64,
    pub downlink_errors: u64,
    pub downlink_error_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    /// `"pair 1-2"` or `"single 2"`, users 1-based.
    pub block: String,
    pub start: usize,
    pub len: usize,
    pub errors: u64,
    pub error_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub seed: u64,
    pub n: usize,
    pub k_a: usize,
    pub k_b: Vec<usize>,
    pub m_u: usize,
    pub users: Vec<UserSummary>,
    pub relay_blocks: Vec<BlockSummary>,
    /// Errors over all (trial, non-empty block) pairs.
    pub relay_block_error_rate: f64,
    pub relay_word_errors: u64,
    pub relay_word_error_rate: f64,
}

fn block_label(kind: BlockKind) -> String {
    match kind {
        BlockKind::Pairwise { t } => format!("pair {}-{}", t + 1, t + 2),
        BlockKind::Single { user } => format!("single {}", user + 1),
    }
}

fn rate(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

/// Runs trials `0..trials` under `seed`. `threads = None` uses the global
/// rayon pool. The summary is identical for any thread count.
pub fn monte_carlo(
    setup: &SimulationSetup,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let run = || {
        (0..trials)
            .into_par_iter()
            .map(|t| run_trial(setup, seed, t))
            .collect::<Result<Vec<_>>>()
    };
    let outcomes = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };

    let num_users = setup.params.num_users();
    let mut users: Vec<UserSummary> = (0..num_users)
        .map(|i| UserSummary {
            user: i + 1,
            failures: 0,
            error_rate: 0.0,
            interval: Interval { lower: 0.0, upper: 0.0 },
            uplink_caused: 0,
            downlink_caused: 0,
            inversion_caused: 0,
            downlink_errors: 0,
            downlink_error_rate: 0.0,
        })
        .collect();
    let mut block_errors = vec![0u64; setup.schedule.blocks.len()];
    let mut word_errors = 0;
    for outcome in &outcomes {
        for (summary, user) in users.iter_mut().zip(&outcome.users) {
            match user.failure {
                Some(Failure::Uplink) => summary.uplink_caused += 1,
                Some(Failure::Downlink) => summary.downlink_caused += 1,
                Some(Failure::Inversion) => summary.inversion_caused += 1,
                None => {}
            }
            summary.downlink_errors += u64::from(user.downlink_error);
        }
        for (count, &e) in block_errors.iter_mut().zip(&outcome.relay_block_errors) {
            *count += u64::from(e);
        }
        word_errors += u64::from(!outcome.relay_correct());
    }
    for s in &mut users {
        s.failures = s.uplink_caused + s.downlink_caused + s.inversion_caused;
        s.error_rate = rate(s.failures, trials);
        s.interval = wilson_interval(s.failures, trials, Z_95);
        s.downlink_error_rate = rate(s.downlink_errors, trials);
    }
    let relay_blocks: Vec<BlockSummary> = setup
        .schedule
        .blocks
        .iter()
        .zip(&block_errors)
        .map(|(b, &errors)| BlockSummary {
            block: block_label(b.kind),
            start: b.start,
            len: b.len,
            errors,
            error_rate: rate(errors, trials),
        })
        .collect();
    let live: Vec<&BlockSummary> = relay_blocks.iter().filter(|b| b.len > 0).collect();
    let relay_block_error_rate = rate(
        live.iter().map(|b| b.errors).sum(),
        trials * live.len() as u64,
    );
    Ok(MonteCarloSummary {
        trials,
        seed,
        n: setup.schedule.n,
        k_a: setup.dims.k_a,
        k_b: setup.dims.k_b.clone(),
        m_u: setup.dims.m_u,
        users,
        relay_blocks,
        relay_block_error_rate,
        relay_word_errors: word_errors,
        relay_word_error_rate: rate(word_errors, trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::NoisePmf;
    use crate::field::FieldSpec;

    fn setup(params: MwrcParams, rates: &str, n_base: usize) -> SimulationSetup {
        SimulationSetup::new(params, rates.parse().unwrap(), n_base, 0.1, DecoderConfig::default()).unwrap()
    }

    #[test]
    fn noiseless_trials_always_succeed() {
        // Redundant codes, so that every generator is full rank except with
        // negligible probability.
        for (field, rates, n_base) in [
            (FieldSpec::binary(), "1/5,1/5", 20),
            (FieldSpec::binary(), "1/20,1/10,3/20", 160),
            (FieldSpec::new(3).unwrap(), "1/10,1/10,1/5,1/10", 80),
        ] {
            let users = rates.split(',').count();
            let s = setup(MwrcParams::noiseless(users, field).unwrap(), rates, n_base);
            for trial in 0..100 {
                let out = run_trial(&s, 1, trial).unwrap();
                assert!(out.relay_correct());
                assert!(out.users.iter().all(|u| u.success() && !u.downlink_error), "{rates} trial {trial}");
            }
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_and_accounts_for_every_failure() {
        let params = MwrcParams::binary(0.1, &[0.1, 0.05, 0.02]).unwrap();
        let s = setup(params, "1/10,1/5,1/5", 20);
        let a = monte_carlo(&s, 60, 7, Some(1)).unwrap();
        let b = monte_carlo(&s, 60, 7, Some(2)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, monte_carlo(&s, 60, 8, None).unwrap());
        for u in &a.users {
            assert_eq!(u.failures, u.uplink_caused + u.downlink_caused + u.inversion_caused);
            assert!(u.interval.lower <= u.error_rate && u.error_rate <= u.interval.upper);
        }
        assert!(a.relay_word_errors as f64 >= a.relay_blocks.iter().map(|b| b.errors).max().unwrap() as f64);
    }

    #[test]
    fn dead_uplink_fails_almost_always() {
        let field = FieldSpec::binary();
        let params = MwrcParams::new(2, field, NoisePmf::uniform(field), vec![NoisePmf::noiseless(field); 2]).unwrap();
        let s = setup(params, "1/2,1/2", 20);
        assert!(!s.feasibility().feasible);
        let summary = monte_carlo(&s, 40, 3, None).unwrap();
        for u in &summary.users {
            assert!(u.error_rate > 0.9, "{u:?}");
            assert_eq!(u.failures, u.uplink_caused);
        }
    }

    #[test]
    fn mismatched_rate_count_is_a_config_error() {
        let params = MwrcParams::noiseless(3, FieldSpec::binary()).unwrap();
        let r = SimulationSetup::new(params, "1/2,1/2".parse().unwrap(), 10, 0.1, DecoderConfig::default());
        assert!(matches!(r, Err(Error::Config(_))));
        assert!(monte_carlo(&setup(MwrcParams::noiseless(2, FieldSpec::binary()).unwrap(), "1/2,1/2", 4), 0, 0, None).is_err());
    }
}
