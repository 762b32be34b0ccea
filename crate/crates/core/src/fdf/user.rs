use num_bigint::BigUint;

use super::{CodeDims, FunctionWord, SubBlockSchedule, UserMessage};
use crate::code::{
    message_to_symbols, ml_decode_restricted, symbols_to_message, CandidateRestriction, DecodeOutcome, DecoderConfig,
    LinearCode,
};
use crate::entropy::NoisePmf;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

/// Downlink decoding at `user`. When the user has a single block its own
/// `s(B_user)` is pinned in the candidate set. `None` means the decoder
/// found no candidate of positive likelihood.
pub fn user_decode_downlink(
    y: &[FieldElem],
    user: usize,
    own_b: Option<&[FieldElem]>,
    downlink: &LinearCode,
    dims: &CodeDims,
    noise: &NoisePmf,
    decoder: &DecoderConfig,
) -> Result<Option<FunctionWord>> {
    let restriction = match (dims.single_offset(user), own_b) {
        (Some(start), Some(row)) => {
            if row.len() != dims.k_b[user] {
                return Err(Error::DimensionMismatch {
                    context: "own B row",
                    expected: dims.k_b[user],
                    found: row.len(),
                });
            }
            CandidateRestriction::from_block(start, row)
        }
        (None, None) => CandidateRestriction::none(),
        (Some(_), None) => return Err(Error::invalid(format!("user {} has a B part but none was given", user + 1))),
        (None, Some(_)) => return Err(Error::invalid(format!("user {} has no B part", user + 1))),
    };
    let outcome = ml_decode_restricted(downlink, y, noise, &restriction, decoder)
        .map_err(|e| e.in_context(format!("downlink decode at user {}", user + 1)))?;
    match outcome {
        DecodeOutcome::Decoded(s) => Ok(Some(FunctionWord::from_concat(&s, dims)?)),
        DecodeOutcome::Failure => Ok(None),
    }
}

/// A recovered row lies outside the image of the message map, so it cannot
/// be a message. Only happens after a channel decoding error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InversionFailure {
    /// The user whose message could not be inverted.
    pub user: usize,
}

fn sub_via_neg(a: &[FieldElem], b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    a.iter().zip(b).map(|(&x, &y)| x.add(y.neg())).collect()
}

/// Recovers every message from the function word and the user's own message.
///
/// `s(A_j)` follows from `s(A_{j-1,j}) - s(A_{j-1})` for `j > user` and from
/// `s(A_{j,j+1}) - s(A_{j+1})` for `j < user`. The returned vector holds one
/// message per user, with the user's own message at its own index.
pub fn final_decode(
    u_hat: &FunctionWord,
    user: usize,
    own: &UserMessage,
    schedule: &SubBlockSchedule,
    dims: &CodeDims,
    field: FieldSpec,
) -> Result<std::result::Result<Vec<UserMessage>, InversionFailure>> {
    let users = schedule.num_users();
    if user >= users || u_hat.pair_sums.len() != users - 1 {
        return Err(Error::invalid(format!("final decode for user {} of {users}", user + 1)));
    }
    let mut a_rows: Vec<Vec<FieldElem>> = vec![Vec::new(); users];
    a_rows[user] = message_to_symbols(&own.a, dims.k_a, field)?;
    for j in user + 1..users {
        a_rows[j] = sub_via_neg(&u_hat.pair_sums[j - 1], &a_rows[j - 1])?;
    }
    for j in (0..user).rev() {
        a_rows[j] = sub_via_neg(&u_hat.pair_sums[j], &a_rows[j + 1])?;
    }

    let mut out = Vec::with_capacity(users);
    for (j, row) in a_rows.iter().enumerate() {
        if j == user {
            out.push(own.clone());
            continue;
        }
        let a = symbols_to_message(row, schedule.a_bits);
        let b = match u_hat.single(j) {
            Some(row) => symbols_to_message(row, schedule.b_bits[j]),
            None => Some(BigUint::default()),
        };
        match (a, b) {
            (Some(a), Some(b)) => out.push(UserMessage { a, b }),
            _ => return Ok(Err(InversionFailure { user: j })),
        }
    }
    Ok(Ok(out))
}
