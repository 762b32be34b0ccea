use rand::Rng;

use super::{BlockKind, CodeBook, CodeDims, FunctionWord, SubBlockSchedule, UserMessage};
use crate::channel::{uplink, MwrcParams};
use crate::code::{message_to_symbols, ml_decode, DecodeOutcome, DecoderConfig, LinearCode};
use crate::error::{Error, Result};
use crate::field::FieldElem;

/// Everything user `user` sends over the `n` uplink uses: its `A` codeword in
/// the (up to two) pairwise blocks it takes part in, its `B` codeword in its
/// own single block, and zeros elsewhere. Depends on nothing but the user's
/// own message.
pub fn user_uplink_input(
    user: usize,
    message: &UserMessage,
    book: &CodeBook,
    schedule: &SubBlockSchedule,
    dims: &CodeDims,
) -> Result<Vec<FieldElem>> {
    let field = book.field();
    let mut x = vec![field.zero(); schedule.n];
    for block in &schedule.blocks {
        let word = match block.kind {
            BlockKind::Pairwise { t } if t == user || t + 1 == user => match book.user_code_a(user) {
                Some(code) => code.encode(&message_to_symbols(&message.a, dims.k_a, field)?)?,
                None => continue,
            },
            BlockKind::Single { user: d } if d == user => {
                let code = book.code_b(d).ok_or_else(|| Error::invalid("single block without a code"))?;
                code.encode(&message_to_symbols(&message.b, dims.k_b[d], field)?)?
            }
            _ => continue,
        };
        x[block.start..block.start + block.len].copy_from_slice(&word);
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UplinkResult {
    /// The relay's estimate of `U`. Rows whose decode failed are all-zero.
    pub word: FunctionWord,
    /// Per schedule block: the decoder found no candidate of positive
    /// likelihood.
    pub decode_failed: Vec<bool>,
}

fn decode_block(
    code: &LinearCode,
    y: &[FieldElem],
    params: &MwrcParams,
    decoder: &DecoderConfig,
    what: String,
) -> Result<(Vec<FieldElem>, bool)> {
    match ml_decode(code, y, params.uplink_noise(), decoder).map_err(|e| e.in_context(what))? {
        DecodeOutcome::Decoded(s) => Ok((s, false)),
        DecodeOutcome::Failure => Ok((vec![code.field().zero(); code.k()], true)),
    }
}

/// One uplink block: every user transmits, the channel adds the inputs and
/// noise, and the relay decodes each sub-block on its own.
#[allow(clippy::too_many_arguments)]
pub fn uplink_phase<R: Rng + ?Sized>(
    messages: &[UserMessage],
    book: &CodeBook,
    schedule: &SubBlockSchedule,
    dims: &CodeDims,
    params: &MwrcParams,
    decoder: &DecoderConfig,
    rng: &mut R,
) -> Result<UplinkResult> {
    if messages.len() != schedule.num_users() {
        return Err(Error::DimensionMismatch {
            context: "messages (one per user)",
            expected: schedule.num_users(),
            found: messages.len(),
        });
    }
    let inputs = messages
        .iter()
        .enumerate()
        .map(|(i, m)| user_uplink_input(i, m, book, schedule, dims))
        .collect::<Result<Vec<_>>>()?;
    let y0 = uplink(&inputs, params, rng)?;

    let mut pair_sums = Vec::new();
    let mut singles = Vec::new();
    let mut decode_failed = Vec::with_capacity(schedule.blocks.len());
    for block in &schedule.blocks {
        let y = &y0[block.start..block.start + block.len];
        match block.kind {
            BlockKind::Pairwise { t } => {
                let (row, failed) = match book.pair_code(t) {
                    Some(code) => decode_block(&code, y, params, decoder, format!("relay, pairwise block {}", t + 1))?,
                    None => (Vec::new(), false),
                };
                pair_sums.push(row);
                decode_failed.push(failed);
            }
            BlockKind::Single { user } => {
                let code = book.code_b(user).ok_or_else(|| Error::invalid("single block without a code"))?;
                let (row, failed) =
                    decode_block(code, y, params, decoder, format!("relay, single block of user {}", user + 1))?;
                singles.push((user, row));
                decode_failed.push(failed);
            }
        }
    }
    Ok(UplinkResult {
        word: FunctionWord { pair_sums, singles },
        decode_failed,
    })
}

/// The relay's downlink codeword for `u`.
pub fn relay_downlink_encode(u: &FunctionWord, downlink: &LinearCode) -> Result<Vec<FieldElem>> {
    downlink.encode(&u.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdf::{build_schedule, derive_code_dims, random_messages, split_rates};
    use crate::field::FieldSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scenario(rates: &str, n_base: usize, params: &MwrcParams) -> (SubBlockSchedule, CodeDims) {
        let s = build_schedule(&split_rates(&rates.parse().unwrap()).unwrap(), n_base).unwrap();
        let d = derive_code_dims(&s, params, 0.1).unwrap();
        (s, d)
    }

    #[test]
    fn noiseless_uplink_recovers_the_function_word() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (field, rates, n_base) in [
            (FieldSpec::binary(), "1/5,1/2", 80),
            (FieldSpec::binary(), "3/10,3/10,3/10", 80),
            (FieldSpec::new(3).unwrap(), "1/10,1/5,2/5", 120),
            (FieldSpec::new(5).unwrap(), "1/4,1/4,1/4,1/2", 80),
        ] {
            let users = rates.split(',').count();
            let params = MwrcParams::noiseless(users, field).unwrap();
            // Enough redundancy that a rank-deficient draw is negligible.
            let (s, d) = scenario(rates, n_base, &params);
            for _ in 0..30 {
                let book = CodeBook::sample(&s, &d, field, &mut rng).unwrap();
                let msgs = random_messages(&s, &mut rng);
                let out = uplink_phase(&msgs, &book, &s, &d, &params, &DecoderConfig::default(), &mut rng).unwrap();
                assert!(out.decode_failed.iter().all(|f| !f));
                assert_eq!(out.word, FunctionWord::from_messages(&msgs, &d, field).unwrap());
            }
        }
    }

    #[test]
    fn equal_pair_cancels_in_gf2() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let params = MwrcParams::noiseless(2, FieldSpec::binary()).unwrap();
        let (s, d) = scenario("1/2,1/2", 20, &params);
        for _ in 0..10 {
            let book = CodeBook::sample(&s, &d, params.field(), &mut rng).unwrap();
            let m = random_messages(&s, &mut rng).remove(0);
            let out = uplink_phase(&[m.clone(), m], &book, &s, &d, &params, &DecoderConfig::default(), &mut rng).unwrap();
            assert!(out.word.pair_sums[0].iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn idle_users_send_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let params = MwrcParams::noiseless(3, FieldSpec::binary()).unwrap();
        let (s, d) = scenario("1/10,1/5,2/5", 10, &params);
        let book = CodeBook::sample(&s, &d, params.field(), &mut rng).unwrap();
        let msgs = random_messages(&s, &mut rng);
        let x0 = user_uplink_input(0, &msgs[0], &book, &s, &d).unwrap();
        // User 1 takes part in pairwise block 1 only.
        let first = s.blocks[0];
        assert!(x0[first.start + first.len..].iter().all(|e| e.is_zero()));
        let x2 = user_uplink_input(2, &msgs[2], &book, &s, &d).unwrap();
        assert!(x2[..s.blocks[1].start].iter().all(|e| e.is_zero()));
        let single1 = s.blocks[2];
        assert_eq!(single1.kind, BlockKind::Single { user: 1 });
        assert!(x2[single1.start..single1.start + single1.len].iter().all(|e| e.is_zero()));
    }

    #[test]
    fn downlink_encode_of_zero_word_is_the_offset() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let params = MwrcParams::noiseless(2, FieldSpec::binary()).unwrap();
        let (s, d) = scenario("1/5,1/2", 20, &params);
        let book = CodeBook::sample(&s, &d, params.field(), &mut rng).unwrap();
        let zero = FunctionWord::from_concat(&vec![params.field().zero(); d.m_u], &d).unwrap();
        assert_eq!(relay_downlink_encode(&zero, book.downlink()).unwrap(), book.downlink().offset());
        assert_eq!(book.downlink().n(), 20);
    }
}
