//! Noise distributions over GF(p) and entropy terms.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

/// Deviation from unit mass that is silently renormalized.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// Probability mass function of a noise symbol over GF(p).
#[derive(Clone, Debug)]
pub struct NoisePmf {
    field: FieldSpec,
    probs: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

impl PartialEq for NoisePmf {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.probs == other.probs
    }
}

impl NoisePmf {
    /// Builds a pmf from one probability per field element (index = residue).
    ///
    /// Sums within [`RENORMALIZE_TOLERANCE`] of one are renormalized; anything
    /// further off is rejected.
    pub fn new(field: FieldSpec, probs: Vec<f64>) -> Result<Self> {
        let p = field.order() as usize;
        if probs.len() != p {
            return Err(Error::InvalidPmf(format!(
                "expected {p} probabilities for {field}, got {}",
                probs.len()
            )));
        }
        if let Some((i, &bad)) = probs
            .iter()
            .enumerate()
            .find(|(_, &x)| !x.is_finite() || x < 0.0)
        {
            return Err(Error::InvalidPmf(format!(
                "probability of symbol {i} is {bad}; entries must be finite and non-negative"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::InvalidPmf(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let probs: Vec<f64> = probs.into_iter().map(|x| x / total).collect();
        let sampler = WeightedIndex::new(&probs)
            .map_err(|e| Error::InvalidPmf(e.to_string()))?;
        Ok(NoisePmf {
            field,
            probs,
            sampler,
        })
    }

    /// Binary noise with flip probability `rho` over GF(2).
    pub fn binary(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidPmf(format!("flip probability {rho} outside [0, 1]")));
        }
        NoisePmf::new(FieldSpec::binary(), vec![1.0 - rho, rho])
    }

    pub fn point_mass(field: FieldSpec, symbol: u32) -> Result<Self> {
        field.elem(symbol)?;
        let mut probs = vec![0.0; field.order() as usize];
        probs[symbol as usize] = 1.0;
        NoisePmf::new(field, probs)
    }

    pub fn noiseless(field: FieldSpec) -> Self {
        NoisePmf::point_mass(field, 0).expect("zero is always an element")
    }

    pub fn uniform(field: FieldSpec) -> Self {
        let p = field.order() as usize;
        NoisePmf::new(field, vec![1.0 / p as f64; p]).expect("uniform pmf is valid")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, symbol: u32) -> f64 {
        self.probs[symbol as usize]
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let v = self.sampler.sample(rng) as u32;
        self.field.elem(v).expect("sampler index is a residue")
    }

    pub(crate) fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.sampler.sample(rng) as u32
    }
}

/// `-sum p log2 p` over the strictly positive entries.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `H(alpha) = -alpha log2 alpha - (1-alpha) log2 (1-alpha)`.
pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "binary entropy argument {alpha} outside [0, 1]"
        )));
    }
    Ok(entropy_bits(&[alpha, 1.0 - alpha]))
}

/// Binary convolution `a(1-b) + (1-a)b`: the flip probability of two cascaded
/// binary symmetric channels.
pub fn binary_convolution(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + (1.0 - a) * b
}

/// Capacity `log2 p - H(N)` of a point-to-point adder channel, in bits per use.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LinkCapacity(f64);

impl LinkCapacity {
    pub fn bits_per_use(self) -> f64 {
        self.0
    }
}

pub fn link_capacity(field: FieldSpec, pmf: &NoisePmf) -> Result<LinkCapacity> {
    field.check(pmf.field())?;
    let log_p = field.log2_order();
    Ok(LinkCapacity((log_p - pmf.entropy_bits()).clamp(0.0, log_p)))
}
