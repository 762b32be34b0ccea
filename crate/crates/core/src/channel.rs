//! The L-user finite field adder multi-way relay channel.
//!
//! Uplink: `Y0 = X1 + ... + XL + N0`. Downlink to user `i`: `Yi = X0 + Ni`.
//! Noise is drawn fresh for every channel use. Users are indexed from 0 here;
//! reports label them from 1.

use rand::Rng;

use crate::entropy::{link_capacity, NoisePmf};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct MwrcParams {
    num_users: usize,
    field: FieldSpec,
    uplink_noise: NoisePmf,
    downlink_noise: Vec<NoisePmf>,
}

impl MwrcParams {
    pub fn new(
        num_users: usize,
        field: FieldSpec,
        uplink_noise: NoisePmf,
        downlink_noise: Vec<NoisePmf>,
    ) -> Result<Self> {
        if num_users < 2 {
            return Err(Error::Config(format!(
                "an MWRC needs at least 2 users, got {num_users}"
            )));
        }
        if downlink_noise.len() != num_users {
            return Err(Error::DimensionMismatch {
                context: "downlink noise pmfs",
                expected: num_users,
                found: downlink_noise.len(),
            });
        }
        field.check(uplink_noise.field())?;
        for pmf in &downlink_noise {
            field.check(pmf.field())?;
        }
        Ok(MwrcParams {
            num_users,
            field,
            uplink_noise,
            downlink_noise,
        })
    }

    /// Same noise on every downlink.
    pub fn symmetric(
        num_users: usize,
        field: FieldSpec,
        uplink_noise: NoisePmf,
        downlink_noise: NoisePmf,
    ) -> Result<Self> {
        MwrcParams::new(
            num_users,
            field,
            uplink_noise,
            vec![downlink_noise; num_users],
        )
    }

    pub fn noiseless(num_users: usize, field: FieldSpec) -> Result<Self> {
        let pmf = NoisePmf::noiseless(field);
        MwrcParams::symmetric(num_users, field, pmf.clone(), pmf)
    }

    /// Binary channel with flip probabilities `rho0` (uplink) and `rho[i]`
    /// (downlink to user i).
    pub fn binary(rho0: f64, rho: &[f64]) -> Result<Self> {
        let down = rho
            .iter()
            .map(|&r| NoisePmf::binary(r))
            .collect::<Result<Vec<_>>>()?;
        MwrcParams::new(rho.len(), FieldSpec::binary(), NoisePmf::binary(rho0)?, down)
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn uplink_noise(&self) -> &NoisePmf {
        &self.uplink_noise
    }

    pub fn downlink_noise(&self, user: usize) -> &NoisePmf {
        &self.downlink_noise[user]
    }

    pub fn downlink_noises(&self) -> &[NoisePmf] {
        &self.downlink_noise
    }

    /// `log2 p - H(N0)`.
    pub fn uplink_capacity(&self) -> f64 {
        link_capacity(self.field, &self.uplink_noise)
            .expect("validated at construction")
            .bits_per_use()
    }

    /// `log2 p - H(Ni)`.
    pub fn downlink_capacity(&self, user: usize) -> f64 {
        link_capacity(self.field, &self.downlink_noise[user])
            .expect("validated at construction")
            .bits_per_use()
    }

    fn check_user(&self, user: usize) -> Result<()> {
        if user >= self.num_users {
            return Err(Error::invalid(format!(
                "user index {user} out of range for {} users",
                self.num_users
            )));
        }
        Ok(())
    }
}

/// One block of uplink channel uses: per-position field sum of every user's
/// symbol plus fresh uplink noise.
pub fn uplink<R: Rng + ?Sized>(
    inputs: &[Vec<FieldElem>],
    params: &MwrcParams,
    rng: &mut R,
) -> Result<Vec<FieldElem>> {
    if inputs.len() != params.num_users {
        return Err(Error::DimensionMismatch {
            context: "uplink inputs (one per user)",
            expected: params.num_users,
            found: inputs.len(),
        });
    }
    let n = inputs[0].len();
    let field = params.field;
    let mut sum = vec![0u32; n];
    for x in inputs {
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                context: "uplink input length",
                expected: n,
                found: x.len(),
            });
        }
        for (acc, sym) in sum.iter_mut().zip(x) {
            field.check(sym.field())?;
            *acc = field.add_raw(*acc, sym.value());
        }
    }
    for acc in sum.iter_mut() {
        *acc = field.add_raw(*acc, params.uplink_noise.sample_raw(rng));
    }
    Ok(field.lift(&sum))
}

/// One block of downlink uses towards `user`: relay symbols plus that user's
/// noise.
pub fn downlink<R: Rng + ?Sized>(
    relay_input: &[FieldElem],
    user: usize,
    params: &MwrcParams,
    rng: &mut R,
) -> Result<Vec<FieldElem>> {
    params.check_user(user)?;
    let field = params.field;
    let noise = &params.downlink_noise[user];
    relay_input
        .iter()
        .map(|x| {
            field.check(x.field())?;
            field.elem(field.add_raw(x.value(), noise.sample_raw(rng)))
        })
        .collect()
}
