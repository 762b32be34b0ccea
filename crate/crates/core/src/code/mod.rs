//! Random coset linear codes `x = s G + q` over GF(p).
//!
//! Every entry of `G` (k×n) and of the offset row `q` is drawn independently
//! and uniformly. Decoding is exact maximum likelihood, see [`decode`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldMatrix, FieldSpec};

pub mod decode;
pub mod ensemble;
pub mod mapping;
pub(crate) mod systematic;

pub use decode::{
    ml_decode, ml_decode_restricted, CandidateRestriction, DecodeOutcome, DecoderConfig,
    SearchStrategy, DEFAULT_CANDIDATE_BUDGET,
};
pub use mapping::{message_to_symbols, symbols_needed, symbols_to_message};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: FieldMatrix,
    offset: Vec<u32>,
}

impl LinearCode {
    pub fn new(generator: FieldMatrix, offset: &[FieldElem]) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if k == 0 || k > n {
            return Err(Error::invalid(format!(
                "code dimensions must satisfy 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        if offset.len() != n {
            return Err(Error::DimensionMismatch {
                context: "offset row length",
                expected: n,
                found: offset.len(),
            });
        }
        let offset = generator.field().lower(offset)?;
        Ok(LinearCode { generator, offset })
    }

    /// Draws `G` row by row, then `q`, uniformly over the field.
    pub fn sample<R: Rng + ?Sized>(k: usize, n: usize, field: FieldSpec, rng: &mut R) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::invalid(format!(
                "code dimensions must satisfy 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        let generator = FieldMatrix::random(field, k, n, rng);
        let offset = (0..n).map(|_| rng.gen_range(0..field.order())).collect();
        Ok(LinearCode { generator, offset })
    }

    pub fn field(&self) -> FieldSpec {
        self.generator.field()
    }

    /// Message length in symbols.
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// Block length in symbols.
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn offset(&self) -> Vec<FieldElem> {
        self.field().lift(&self.offset)
    }

    pub(crate) fn offset_raw(&self) -> &[u32] {
        &self.offset
    }

    /// Same generator, different offset row.
    pub fn with_offset(&self, offset: &[FieldElem]) -> Result<LinearCode> {
        LinearCode::new(self.generator.clone(), offset)
    }

    /// `(s G) + q`.
    pub fn encode(&self, s: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if s.len() != self.k() {
            return Err(Error::DimensionMismatch {
                context: "message length",
                expected: self.k(),
                found: s.len(),
            });
        }
        let raw = self.field().lower(s)?;
        Ok(self.field().lift(&self.encode_raw(&raw)))
    }

    pub(crate) fn encode_raw(&self, s: &[u32]) -> Vec<u32> {
        let mut x = self.generator.left_mul_raw(s);
        let f = self.field();
        for (a, &q) in x.iter_mut().zip(&self.offset) {
            *a = f.add_raw(*a, q);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{vec_add, vec_matmul, vec_sub};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn sample_validates_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = FieldSpec::binary();
        assert!(LinearCode::sample(5, 4, f, &mut rng).is_err());
        assert!(LinearCode::sample(0, 4, f, &mut rng).is_err());
        let c = LinearCode::sample(4, 4, f, &mut rng).unwrap();
        assert_eq!((c.k(), c.n()), (4, 4));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let f = FieldSpec::new(5).unwrap();
        let a = LinearCode::sample(3, 7, f, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = LinearCode::sample(3, 7, f, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generator_entries_are_uniform() {
        let f = FieldSpec::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let draws = 10_000;
        let mut counts = [0u64; 5];
        for _ in 0..draws {
            let c = LinearCode::sample(2, 3, f, &mut rng).unwrap();
            counts[c.generator().get(0, 0).value() as usize] += 1;
        }
        let expected = draws as f64 / 5.0;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let critical = ChiSquared::new(4.0).unwrap().inverse_cdf(0.99);
        assert!(stat < critical, "chi2 {stat} >= {critical}");
    }

    #[test]
    fn single_symbol_binary_codes_are_equiprobable() {
        let f = FieldSpec::binary();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut counts = [0u32; 4];
        let draws = 40_000;
        for _ in 0..draws {
            let c = LinearCode::sample(1, 1, f, &mut rng).unwrap();
            let idx = c.generator().get(0, 0).value() * 2 + c.offset()[0].value();
            counts[idx as usize] += 1;
        }
        for c in counts {
            let frac = f64::from(c) / f64::from(draws);
            assert!((frac - 0.25).abs() < 3.0 * (0.25f64 * 0.75 / f64::from(draws)).sqrt());
        }
    }

    #[test]
    fn encode_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = FieldSpec::new(3).unwrap();
        let code = LinearCode::sample(4, 9, f, &mut rng).unwrap();
        assert_eq!(code.encode(&[f.zero(); 4]).unwrap(), code.offset());
        assert!(code.encode(&[f.zero(); 3]).is_err());
        for _ in 0..20 {
            let s1: Vec<_> = (0..4).map(|_| f.random(&mut rng)).collect();
            let s2: Vec<_> = (0..4).map(|_| f.random(&mut rng)).collect();
            let diff = vec_sub(&code.encode(&s1).unwrap(), &code.encode(&s2).unwrap()).unwrap();
            let expected = vec_matmul(&vec_sub(&s1, &s2).unwrap(), code.generator()).unwrap();
            assert_eq!(diff, expected);

            // naive oracle
            let x = code.encode(&s1).unwrap();
            for t in 0..9 {
                let mut acc = code.offset()[t].value();
                for i in 0..4 {
                    acc += s1[i].value() * code.generator().get(i, t).value();
                }
                assert_eq!(x[t].value(), acc % 3);
            }
        }
    }

    #[test]
    fn sum_of_codewords_is_a_codeword_of_the_summed_offsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2u32, 3, 7] {
            let f = FieldSpec::new(p).unwrap();
            let a = LinearCode::sample(3, 8, f, &mut rng).unwrap();
            let q_b: Vec<_> = (0..8).map(|_| f.random(&mut rng)).collect();
            let b = a.with_offset(&q_b).unwrap();
            let effective = a.with_offset(&vec_add(&a.offset(), &q_b).unwrap()).unwrap();
            for _ in 0..20 {
                let s1: Vec<_> = (0..3).map(|_| f.random(&mut rng)).collect();
                let s2: Vec<_> = (0..3).map(|_| f.random(&mut rng)).collect();
                let sum = vec_add(&a.encode(&s1).unwrap(), &b.encode(&s2).unwrap()).unwrap();
                let direct = effective.encode(&vec_add(&s1, &s2).unwrap()).unwrap();
                assert_eq!(sum, direct);
            }
        }
    }
}
