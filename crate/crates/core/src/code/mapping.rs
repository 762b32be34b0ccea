//! Injective maps between `b`-bit message integers and rows of GF(p) symbols.
//!
//! A message integer is written in base p, most significant digit first, and
//! left-padded with zeros. Lexicographic order on rows therefore matches
//! numeric order on messages.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

/// Smallest `k` with `p^k >= 2^bits`.
pub fn symbols_needed(field: FieldSpec, bits: u64) -> usize {
    if bits == 0 {
        return 0;
    }
    let target = BigUint::one() << bits;
    let p = BigUint::from(field.order());
    let mut k = ((bits as f64) / field.log2_order()).floor() as usize;
    k = k.saturating_sub(1);
    let mut power = p.pow(k as u32);
    while power < target {
        power *= &p;
        k += 1;
    }
    k
}

pub fn message_to_symbols(value: &BigUint, k: usize, field: FieldSpec) -> Result<Vec<FieldElem>> {
    let p = BigUint::from(field.order());
    let mut digits = vec![0u32; k];
    let mut rest = value.clone();
    for slot in digits.iter_mut().rev() {
        if rest.is_zero() {
            break;
        }
        let (q, r) = rest.div_rem(&p);
        *slot = r.to_u32().expect("residue below p");
        rest = q;
    }
    if !rest.is_zero() {
        return Err(Error::invalid(format!(
            "message {value} does not fit in {k} symbols of {field}"
        )));
    }
    Ok(field.lift(&digits))
}

/// Inverse of [`message_to_symbols`]; `None` when the row encodes an integer
/// of more than `bits` bits, i.e. lies outside the image of the map.
pub fn symbols_to_message(row: &[FieldElem], bits: u64) -> Option<BigUint> {
    let mut value = BigUint::zero();
    for e in row {
        value = value * e.field().order() + e.value();
    }
    if value.bits() > bits {
        None
    } else {
        Some(value)
    }
}
