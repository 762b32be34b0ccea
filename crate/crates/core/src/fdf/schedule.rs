//! Sub-block scheduling and code dimensions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::RateSplit;
use crate::channel::MwrcParams;
use crate::code::symbols_needed;
use crate::error::{Error, Result};

/// Largest `n` the scheduler will produce.
const MAX_BLOCK_LENGTH: u64 = u32::MAX as u64;

/// Serialized with 1-based user numbers: `{"kind": "pairwise", "users": [1, 2]}`
/// or `{"kind": "single", "user": 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BlockKindRepr", try_from = "BlockKindRepr")]
pub enum BlockKind {
    /// Users `t` and `t + 1` transmit; the relay decodes their sum.
    Pairwise { t: usize },
    /// Only `user` transmits its `B` part.
    Single { user: usize },
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BlockKindRepr {
    Pairwise { users: [usize; 2] },
    Single { user: usize },
}

impl From<BlockKind> for BlockKindRepr {
    fn from(k: BlockKind) -> Self {
        match k {
            BlockKind::Pairwise { t } => BlockKindRepr::Pairwise { users: [t + 1, t + 2] },
            BlockKind::Single { user } => BlockKindRepr::Single { user: user + 1 },
        }
    }
}

impl TryFrom<BlockKindRepr> for BlockKind {
    type Error = String;

    fn try_from(r: BlockKindRepr) -> std::result::Result<Self, String> {
        match r {
            BlockKindRepr::Pairwise { users: [a, b] } if a >= 1 && b == a + 1 => Ok(BlockKind::Pairwise { t: a - 1 }),
            BlockKindRepr::Single { user } if user >= 1 => Ok(BlockKind::Single { user: user - 1 }),
            BlockKindRepr::Pairwise { users } => Err(format!("pairwise users must be consecutive, got {users:?}")),
            BlockKindRepr::Single { .. } => Err("users are numbered from 1".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubBlock {
    #[serde(flatten)]
    pub kind: BlockKind,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubBlockSchedule {
    pub n: usize,
    pub blocks: Vec<SubBlock>,
    /// `n R_min`, the length of every `A_i` in bits.
    pub a_bits: u64,
    /// `n R_i'` per user (0 outside `D`).
    pub b_bits: Vec<u64>,
}

impl SubBlockSchedule {
    pub fn num_users(&self) -> usize {
        self.b_bits.len()
    }

    pub fn pairwise(&self) -> impl Iterator<Item = &SubBlock> {
        self.blocks.iter().filter(|b| matches!(b.kind, BlockKind::Pairwise { .. }))
    }

    pub fn singles(&self) -> impl Iterator<Item = &SubBlock> {
        self.blocks.iter().filter(|b| matches!(b.kind, BlockKind::Single { .. }))
    }

    /// Bits per user message, `n R_i`.
    pub fn message_bits(&self, user: usize) -> u64 {
        self.a_bits + self.b_bits[user]
    }
}

fn to_usize(r: &BigRational) -> usize {
    debug_assert!(r.is_integer());
    r.to_integer().to_usize().expect("length fits in usize")
}

/// Picks the smallest multiple of `n_base` for which every sub-block length
/// `n R_min / R_min^c`, `n R_d' / R_min^c` and every message length
/// `n R_min`, `n R_d'` in bits is an integer, and lays the blocks out:
/// pairwise blocks `t = 0..L-1` first, then single blocks by user.
pub fn build_schedule(split: &RateSplit, n_base: usize) -> Result<SubBlockSchedule> {
    if n_base == 0 {
        return Err(Error::Config("n_base must be positive".into()));
    }
    let total = split.min_complement();
    if total.is_zero() {
        return Err(Error::Config("R_min^c is zero; there is nothing to exchange".into()));
    }
    let mut fractions = vec![split.r_min() / &total, split.r_min().clone()];
    for &d in split.d_set() {
        fractions.push(&split.r_prime()[d] / &total);
        fractions.push(split.r_prime()[d].clone());
    }
    let n = fractions
        .iter()
        .fold(BigInt::from(n_base), |acc, f| acc.lcm(f.denom()));
    let n_big = BigRational::from_integer(n.clone());
    let n = n
        .to_u64()
        .filter(|&v| v <= MAX_BLOCK_LENGTH)
        .ok_or_else(|| Error::Config(format!("the rates need a block length of {n}, above {MAX_BLOCK_LENGTH}")))?
        as usize;

    let pair_len = to_usize(&(&n_big * split.r_min() / &total));
    let mut blocks = Vec::new();
    let mut start = 0;
    for t in 0..split.num_users() - 1 {
        blocks.push(SubBlock {
            kind: BlockKind::Pairwise { t },
            start,
            len: pair_len,
        });
        start += pair_len;
    }
    let mut b_bits = vec![0u64; split.num_users()];
    for &d in split.d_set() {
        let len = to_usize(&(&n_big * &split.r_prime()[d] / &total));
        blocks.push(SubBlock {
            kind: BlockKind::Single { user: d },
            start,
            len,
        });
        start += len;
        b_bits[d] = to_usize(&(&n_big * &split.r_prime()[d])) as u64;
    }
    debug_assert_eq!(start, n);
    Ok(SubBlockSchedule {
        n,
        blocks,
        a_bits: to_usize(&(&n_big * split.r_min())) as u64,
        b_bits,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// One line per violated condition.
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeDims {
    /// Symbols per `s(A_i)`.
    pub k_a: usize,
    /// Symbols per `s(B_i)` (0 outside `D`).
    pub k_b: Vec<usize>,
    /// Downlink message length `(L - 1) k_A + sum_d k_B,d`.
    pub m_u: usize,
    pub verdict: Feasibility,
}

impl CodeDims {
    pub fn is_feasible(&self) -> bool {
        self.verdict.feasible
    }
}

/// Smallest dimensions that carry the message bits injectively, and whether
/// every code runs at most `(1 - safety_margin)` of its link capacity:
///
/// * uplink, per sub-block: `k log2 p / len`,
/// * downlink to user `i`: `(m_U - k_B,i) log2 p / n`, the rate left once
///   the user's own symbols are fixed.
pub fn derive_code_dims(
    schedule: &SubBlockSchedule,
    params: &MwrcParams,
    safety_margin: f64,
) -> Result<CodeDims> {
    if !(0.0..1.0).contains(&safety_margin) {
        return Err(Error::Config(format!("safety_margin {safety_margin} outside [0, 1)")));
    }
    if params.num_users() != schedule.num_users() {
        return Err(Error::DimensionMismatch {
            context: "users in schedule vs channel",
            expected: params.num_users(),
            found: schedule.num_users(),
        });
    }
    let field = params.field();
    let log_p = field.log2_order();
    let scale = 1.0 - safety_margin;
    let k_a = symbols_needed(field, schedule.a_bits);
    let k_b: Vec<usize> = schedule.b_bits.iter().map(|&b| symbols_needed(field, b)).collect();
    let m_u = (schedule.num_users() - 1) * k_a + k_b.iter().sum::<usize>();

    let mut reasons = Vec::new();
    let uplink_cap = params.uplink_capacity();
    for block in &schedule.blocks {
        let (label, k) = match block.kind {
            BlockKind::Pairwise { t } => (format!("pairwise block {}", t + 1), k_a),
            BlockKind::Single { user } => (format!("single block of user {}", user + 1), k_b[user]),
        };
        if k == 0 {
            continue;
        }
        if k > block.len {
            reasons.push(format!("{label}: {k} symbols do not fit in {} channel uses", block.len));
            continue;
        }
        let rate = k as f64 * log_p / block.len as f64;
        if rate > scale * uplink_cap {
            reasons.push(format!(
                "{label}: code rate {rate:.6} exceeds {scale} x uplink capacity {uplink_cap:.6}"
            ));
        }
    }
    if m_u > schedule.n {
        reasons.push(format!(
            "downlink: {m_u} symbols do not fit in {} channel uses",
            schedule.n
        ));
    } else {
        for user in 0..schedule.num_users() {
            let cap = params.downlink_capacity(user);
            let rate = (m_u - k_b[user]) as f64 * log_p / schedule.n as f64;
            if rate > scale * cap {
                reasons.push(format!(
                    "downlink to user {}: effective rate {rate:.6} exceeds {scale} x capacity {cap:.6}",
                    user + 1
                ));
            }
        }
    }
    Ok(CodeDims {
        k_a,
        k_b,
        m_u,
        verdict: Feasibility {
            feasible: reasons.is_empty(),
            reasons,
        },
    })
}

/// `true` when `x` is a whole number.
#[cfg(test)]
fn is_integral(x: &BigRational) -> bool {
    use num_traits::One;
    x.denom().is_one()
}
