use num_bigint::{BigUint, RandBigInt};
use rand::Rng;

use super::{CodeDims, SubBlockSchedule};
use crate::code::{message_to_symbols, LinearCode};
use crate::error::{Error, Result};
use crate::field::{vec_add, FieldElem, FieldSpec};

/// `W_i = (A_i, B_i)` as integers of `n R_min` and `n R_i'` bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UserMessage {
    pub a: BigUint,
    pub b: BigUint,
}

/// Uniform messages for every user, drawn `A` then `B`, user by user.
pub fn random_messages<R: Rng + ?Sized>(schedule: &SubBlockSchedule, rng: &mut R) -> Vec<UserMessage> {
    schedule
        .b_bits
        .iter()
        .map(|&b_bits| UserMessage {
            a: rng.gen_biguint(schedule.a_bits),
            b: rng.gen_biguint(b_bits),
        })
        .collect()
}

/// Codes for one block pair. Sampled in a fixed order: `G_A`, the offsets
/// `q_A,i` for every user, each `(G_B,d, q_B,d)` by ascending `d`, and
/// finally the downlink code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeBook {
    field: FieldSpec,
    code_a: Option<LinearCode>,
    offsets_a: Vec<Vec<FieldElem>>,
    codes_b: Vec<Option<LinearCode>>,
    downlink: LinearCode,
}

impl CodeBook {
    pub fn sample<R: Rng + ?Sized>(
        schedule: &SubBlockSchedule,
        dims: &CodeDims,
        field: FieldSpec,
        rng: &mut R,
    ) -> Result<Self> {
        let users = schedule.num_users();
        let pair_len = schedule.pairwise().next().map_or(0, |b| b.len);
        let (code_a, offsets_a) = if dims.k_a == 0 {
            (None, vec![Vec::new(); users])
        } else {
            let shared = LinearCode::sample(dims.k_a, pair_len, field, rng)?;
            let offsets: Vec<Vec<FieldElem>> = (0..users)
                .map(|_| (0..pair_len).map(|_| field.random(rng)).collect())
                .collect();
            (Some(shared), offsets)
        };
        let mut codes_b = vec![None; users];
        for block in schedule.singles() {
            if let super::BlockKind::Single { user } = block.kind {
                codes_b[user] = Some(LinearCode::sample(dims.k_b[user], block.len, field, rng)?);
            }
        }
        let downlink = LinearCode::sample(dims.m_u, schedule.n, field, rng)?;
        Ok(CodeBook {
            field,
            code_a,
            offsets_a,
            codes_b,
            downlink,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// `(G_A, q_A,user)`, or `None` when `R_min = 0`.
    pub fn user_code_a(&self, user: usize) -> Option<LinearCode> {
        self.code_a
            .as_ref()
            .map(|c| c.with_offset(&self.offsets_a[user]).expect("offset length matches"))
    }

    /// `(G_A, q_A,t + q_A,t+1)`: the code whose codewords are the noiseless
    /// sums of what users `t` and `t + 1` send.
    pub fn pair_code(&self, t: usize) -> Option<LinearCode> {
        self.code_a.as_ref().map(|c| {
            let q = vec_add(&self.offsets_a[t], &self.offsets_a[t + 1]).expect("same length");
            c.with_offset(&q).expect("offset length matches")
        })
    }

    pub fn code_b(&self, user: usize) -> Option<&LinearCode> {
        self.codes_b[user].as_ref()
    }

    pub fn downlink(&self) -> &LinearCode {
        &self.downlink
    }
}

/// What the relay forwards: the `L - 1` pairwise sums `s(A_t) + s(A_{t+1})`
/// and `s(B_d)` for every `d` in `D`.
///
/// Concatenated as pair sums by `t`, then singles by `d`, both ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionWord {
    pub pair_sums: Vec<Vec<FieldElem>>,
    pub singles: Vec<(usize, Vec<FieldElem>)>,
}

impl FunctionWord {
    /// The word the relay should decode for these messages.
    pub fn from_messages(messages: &[UserMessage], dims: &CodeDims, field: FieldSpec) -> Result<Self> {
        let a_rows = messages
            .iter()
            .map(|m| message_to_symbols(&m.a, dims.k_a, field))
            .collect::<Result<Vec<_>>>()?;
        let pair_sums = a_rows
            .windows(2)
            .map(|w| vec_add(&w[0], &w[1]))
            .collect::<Result<Vec<_>>>()?;
        let singles = dims
            .d_set()
            .map(|d| Ok((d, message_to_symbols(&messages[d].b, dims.k_b[d], field)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FunctionWord { pair_sums, singles })
    }

    pub fn concat(&self) -> Vec<FieldElem> {
        self.pair_sums
            .iter()
            .flatten()
            .chain(self.singles.iter().flat_map(|(_, row)| row))
            .copied()
            .collect()
    }

    pub fn from_concat(symbols: &[FieldElem], dims: &CodeDims) -> Result<Self> {
        if symbols.len() != dims.m_u {
            return Err(Error::DimensionMismatch {
                context: "function word length",
                expected: dims.m_u,
                found: symbols.len(),
            });
        }
        let users = dims.k_b.len();
        let pair_sums = (0..users - 1)
            .map(|t| symbols[t * dims.k_a..(t + 1) * dims.k_a].to_vec())
            .collect();
        let singles = dims
            .d_set()
            .map(|d| {
                let start = dims.single_offset(d).expect("d in D");
                (d, symbols[start..start + dims.k_b[d]].to_vec())
            })
            .collect();
        Ok(FunctionWord { pair_sums, singles })
    }

    /// `s(B_user)` if the user has a single block.
    pub fn single(&self, user: usize) -> Option<&[FieldElem]> {
        self.singles.iter().find(|(d, _)| *d == user).map(|(_, row)| row.as_slice())
    }

    /// Equality ignoring `s(B_user)`, which that user knows already.
    pub fn agrees_except_own(&self, other: &FunctionWord, user: usize) -> bool {
        self.pair_sums == other.pair_sums
            && self
                .singles
                .iter()
                .zip(&other.singles)
                .all(|((d, a), (e, b))| d == e && (*d == user || a == b))
    }
}

impl CodeDims {
    /// Users with a single block, ascending.
    pub fn d_set(&self) -> impl Iterator<Item = usize> + '_ {
        self.k_b.iter().enumerate().filter(|(_, &k)| k > 0).map(|(d, _)| d)
    }

    /// Position of `s(B_user)` inside the concatenated function word.
    pub fn single_offset(&self, user: usize) -> Option<usize> {
        if self.k_b[user] == 0 {
            return None;
        }
        let before: usize = self.k_b[..user].iter().sum();
        Some((self.k_b.len() - 1) * self.k_a + before)
    }
}
