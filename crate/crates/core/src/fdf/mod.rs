//! Functional-decode-forward with rate splitting and side-information
//! decoding on the downlink.
//!
//! Each message `W_i` of `n R_i` bits splits into `A_i` (`n R_min` bits) and
//! `B_i` (`n R_i'` bits, `R_i' = R_i - R_min`). The uplink is divided into
//! `L - 1` pairwise sub-blocks, in which users `t` and `t + 1` send
//! codewords of a shared code and the relay decodes the sum
//! `s(A_t) + s(A_{t+1})` directly, and one single-user sub-block for each
//! user with `R_d' > 0`, in which the relay decodes `s(B_d)`. The relay then
//! re-encodes all of it as one downlink codeword; every user decodes that
//! word, fixing the symbols it already knows, and unwinds the pairwise sums
//! using its own message.
//!
//! Users are indexed from 0 throughout this module.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::regions::RateTuple;

mod codebook;
mod relay;
mod schedule;
mod sim;
mod user;

pub use codebook::{random_messages, CodeBook, FunctionWord, UserMessage};
pub use relay::{relay_downlink_encode, uplink_phase, user_uplink_input, UplinkResult};
pub use schedule::{build_schedule, derive_code_dims, BlockKind, CodeDims, Feasibility, SubBlock, SubBlockSchedule};
pub use sim::{
    monte_carlo, run_trial, BlockSummary, Failure, MonteCarloSummary, SimulationSetup, TrialOutcome, UserOutcome,
    UserSummary,
};
pub use user::{final_decode, user_decode_downlink, InversionFailure};

/// `R_i = R_min + R_i'`, with `D` the users whose excess `R_i'` is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateSplit {
    r_min: BigRational,
    r_prime: Vec<BigRational>,
    d_set: Vec<usize>,
}

impl RateSplit {
    pub fn num_users(&self) -> usize {
        self.r_prime.len()
    }

    pub fn r_min(&self) -> &BigRational {
        &self.r_min
    }

    pub fn r_prime(&self) -> &[BigRational] {
        &self.r_prime
    }

    /// Users with a single-user sub-block, ascending.
    pub fn d_set(&self) -> &[usize] {
        &self.d_set
    }

    /// `R_min^c = (L - 1) R_min + sum_d R_d'`.
    pub fn min_complement(&self) -> BigRational {
        let excess = self.r_prime.iter().fold(BigRational::zero(), |acc, r| acc + r);
        &self.r_min * BigRational::from_integer((self.num_users() as i64 - 1).into()) + excess
    }
}

pub fn split_rates(rates: &RateTuple) -> Result<RateSplit> {
    let positive = rates.rates().iter().filter(|r| r.is_positive()).count();
    if positive < 2 {
        return Err(Error::Config(format!(
            "at least two users need a positive rate for an exchange, got {rates}"
        )));
    }
    let r_min = rates.min();
    let r_prime: Vec<BigRational> = rates.rates().iter().map(|r| r - &r_min).collect();
    let d_set = r_prime
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_positive())
        .map(|(i, _)| i)
        .collect();
    Ok(RateSplit { r_min, r_prime, d_set })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::parse_rate;

    fn q(s: &str) -> BigRational {
        parse_rate(s).unwrap()
    }

    #[test]
    fn split_examples() {
        let s = split_rates(&"3/10,3/10,3/10".parse().unwrap()).unwrap();
        assert_eq!(s.r_min(), &q("3/10"));
        assert!(s.r_prime().iter().all(Zero::is_zero));
        assert!(s.d_set().is_empty());

        let s = split_rates(&"1/5,1/2".parse().unwrap()).unwrap();
        assert_eq!(s.r_min(), &q("1/5"));
        assert_eq!(s.r_prime(), &[q("0"), q("3/10")]);
        assert_eq!(s.d_set(), &[1]);
        assert_eq!(s.min_complement(), q("1/2"));

        let s = split_rates(&"1/10,1/5,2/5".parse().unwrap()).unwrap();
        assert_eq!(s.r_prime(), &[q("0"), q("1/10"), q("3/10")]);
        assert_eq!(s.d_set(), &[1, 2]);
        assert_eq!(s.min_complement(), q("3/5"));
    }

    #[test]
    fn degenerate_rates_are_rejected() {
        assert!(split_rates(&"0,1/2".parse().unwrap()).is_err());
        assert!(split_rates(&"0,0,0".parse().unwrap()).is_err());
        let s = split_rates(&"0,1/5,1/2".parse().unwrap()).unwrap();
        assert!(s.r_min().is_zero());
        assert_eq!(s.d_set(), &[1, 2]);
    }

    #[test]
    fn split_invariants_on_random_tuples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..500 {
            let l = rng.gen_range(2..6);
            let rates: Vec<String> = (0..l).map(|_| format!("{}/{}", rng.gen_range(1..20), rng.gen_range(1..30))).collect();
            let t = RateTuple::parse(&rates).unwrap();
            let s = split_rates(&t).unwrap();
            assert!(s.d_set().len() < l);
            assert!(s.r_prime().iter().any(Zero::is_zero));
            for (i, r) in t.rates().iter().enumerate() {
                assert_eq!(&(s.r_min() + &s.r_prime()[i]), r);
                assert!(!s.r_prime()[i].is_negative());
            }
            assert_eq!(s.min_complement(), t.min_complement());
        }
    }
}
