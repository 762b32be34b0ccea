//! Prime field arithmetic GF(p).
//!
//! Elements carry the field they belong to, so mixing elements of different
//! fields is reported as an error instead of being silently reduced. Matrices
//! and the decoders work on raw `u32` residues for speed; [`FieldSpec`] exposes
//! the raw helpers they need.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order. Residues stay below this bound, so a sum of
/// two residues fits in `u32` and a product fits in `u64`.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

const _: () = assert!((MAX_FIELD_ORDER as u64 - 1) * 2 <= u32::MAX as u64);
const _: () = assert!((MAX_FIELD_ORDER as u128 - 1) * (MAX_FIELD_ORDER as u128 - 1) <= u64::MAX as u128);

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    order: u32,
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        FieldSpec::new(order)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.order
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)
    }
}

impl FieldSpec {
    pub fn new(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidField {
                order: order.into(),
                reason: "order must be at least 2",
            });
        }
        if order > MAX_FIELD_ORDER {
            return Err(Error::InvalidField {
                order: order.into(),
                reason: "order exceeds the supported ceiling of 65536",
            });
        }
        if !is_prime(order) {
            return Err(Error::InvalidField {
                order: order.into(),
                reason: "order must be prime",
            });
        }
        Ok(FieldSpec { order })
    }

    /// GF(2).
    pub fn binary() -> Self {
        FieldSpec { order: 2 }
    }

    pub fn order(self) -> u32 {
        self.order
    }

    /// `log2 |F|`, the capacity of a noiseless link in bits per use.
    pub fn log2_order(self) -> f64 {
        f64::from(self.order).log2()
    }

    pub fn elem(self, value: u32) -> Result<FieldElem> {
        if value >= self.order {
            return Err(Error::ValueOutOfRange {
                value: value.into(),
                order: self.order,
            });
        }
        Ok(FieldElem { value, field: self })
    }

    pub fn zero(self) -> FieldElem {
        FieldElem { value: 0, field: self }
    }

    pub fn one(self) -> FieldElem {
        FieldElem { value: 1, field: self }
    }

    pub fn elements(self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(move |value| FieldElem { value, field: self })
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElem {
        FieldElem {
            value: rng.gen_range(0..self.order),
            field: self,
        }
    }

    /// Converts raw residues to elements. Values must already be reduced.
    pub fn lift(self, raw: &[u32]) -> Vec<FieldElem> {
        raw.iter()
            .map(|&value| {
                debug_assert!(value < self.order);
                FieldElem { value, field: self }
            })
            .collect()
    }

    /// Extracts raw residues, checking that every element belongs to this field.
    pub fn lower(self, elems: &[FieldElem]) -> Result<Vec<u32>> {
        elems
            .iter()
            .map(|e| {
                self.check(e.field)?;
                Ok(e.value)
            })
            .collect()
    }

    pub(crate) fn check(self, other: FieldSpec) -> Result<()> {
        if self != other {
            return Err(Error::FieldMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn add_raw(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }

    #[inline]
    pub fn neg_raw(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.order - a
        }
    }

    #[inline]
    pub fn sub_raw(self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.order)) as u32
    }

    /// `acc += scale * row`, elementwise.
    pub fn axpy_raw(self, acc: &mut [u32], scale: u32, row: &[u32]) {
        debug_assert_eq!(acc.len(), row.len());
        match scale {
            0 => {}
            1 => {
                for (a, &r) in acc.iter_mut().zip(row) {
                    *a = self.add_raw(*a, r);
                }
            }
            _ => {
                for (a, &r) in acc.iter_mut().zip(row) {
                    *a = self.add_raw(*a, self.mul_raw(scale, r));
                }
            }
        }
    }

    /// Multiplicative inverse of a non-zero residue (Fermat).
    pub fn inv_raw(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut base = u64::from(a);
        let m = u64::from(self.order);
        let mut exp = self.order - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as u32)
    }
}

/// An element of a prime field, tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    value: u32,
    field: FieldSpec,
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElem {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: FieldElem) -> Result<FieldElem> {
        self.field.check(other.field)?;
        Ok(FieldElem {
            value: self.field.add_raw(self.value, other.value),
            field: self.field,
        })
    }

    pub fn neg(self) -> FieldElem {
        FieldElem {
            value: self.field.neg_raw(self.value),
            field: self.field,
        }
    }

    pub fn sub(self, other: FieldElem) -> Result<FieldElem> {
        self.add(other.neg())
    }

    pub fn mul(self, other: FieldElem) -> Result<FieldElem> {
        self.field.check(other.field)?;
        Ok(FieldElem {
            value: self.field.mul_raw(self.value, other.value),
            field: self.field,
        })
    }

    pub fn inv(self) -> Option<FieldElem> {
        self.field.inv_raw(self.value).map(|value| FieldElem {
            value,
            field: self.field,
        })
    }
}

/// Elementwise sum of two equal-length vectors.
pub fn vec_add(a: &[FieldElem], b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            context: "vector addition",
            expected: a.len(),
            found: b.len(),
        });
    }
    a.iter().zip(b).map(|(&x, &y)| x.add(y)).collect()
}

/// Elementwise difference `a - b`.
pub fn vec_sub(a: &[FieldElem], b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            context: "vector subtraction",
            expected: a.len(),
            found: b.len(),
        });
    }
    a.iter().zip(b).map(|(&x, &y)| x.sub(y)).collect()
}

/// A dense row-major matrix over GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols)
            .map(|_| rng.gen_range(0..field.order()))
            .collect();
        FieldMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<FieldElem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(field.lower(row)?);
        }
        Ok(FieldMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(field: FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FieldMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> FieldElem {
        FieldElem {
            value: self.data[row * self.cols + col],
            field: self.field,
        }
    }

    pub fn row_raw(&self, row: usize) -> &[u32] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row(&self, row: usize) -> Vec<FieldElem> {
        self.field.lift(self.row_raw(row))
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row_raw(r));
        }
        FieldMatrix {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Row-vector times matrix on raw residues.
    pub(crate) fn left_mul_raw(&self, s: &[u32]) -> Vec<u32> {
        debug_assert_eq!(s.len(), self.rows);
        let mut out = vec![0u32; self.cols];
        for (r, &coef) in s.iter().enumerate() {
            self.field.axpy_raw(&mut out, coef, self.row_raw(r));
        }
        out
    }

    /// Rank over GF(p).
    pub fn rank(&self) -> usize {
        crate::code::systematic::rank(self)
    }
}

/// Row vector `s` (length k) times the k×n matrix `g`.
pub fn vec_matmul(s: &[FieldElem], g: &FieldMatrix) -> Result<Vec<FieldElem>> {
    if s.len() != g.rows() {
        return Err(Error::DimensionMismatch {
            context: "vector-matrix product",
            expected: g.rows(),
            found: s.len(),
        });
    }
    let raw = g.field().lower(s)?;
    Ok(g.field().lift(&g.left_mul_raw(&raw)))
}
