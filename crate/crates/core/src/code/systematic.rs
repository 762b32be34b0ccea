//! Row reduction of a generator matrix into systematic form.
//!
//! Reducing `[G | I]` to reduced row echelon form gives `E G = R`. The first
//! `r = rank G` rows of `R` form a systematic generator `M` of the row space
//! (identity on the pivot columns, the information set); the matching rows of
//! `E` map a codeword back to a message, and the remaining rows of `E` span
//! the left kernel of `G`.

use crate::field::{FieldMatrix, FieldSpec};

/// In-place Gauss-Jordan elimination, pivoting only in the first `pivot_cols`
/// columns. Returns the pivot column of each leading row.
fn rref(field: FieldSpec, rows: &mut [Vec<u32>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..pivot_cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, found);
        let inv = field.inv_raw(rows[next][col]).expect("pivot is non-zero");
        if inv != 1 {
            for v in rows[next].iter_mut() {
                *v = field.mul_raw(*v, inv);
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row[col] != 0 {
                let scale = field.neg_raw(row[col]);
                field.axpy_raw(row, scale, &pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

pub(crate) fn rank(g: &FieldMatrix) -> usize {
    let mut rows: Vec<Vec<u32>> = (0..g.rows()).map(|r| g.row_raw(r).to_vec()).collect();
    rref(g.field(), &mut rows, g.cols()).len()
}

#[derive(Clone, Debug)]
pub(crate) struct SystematicForm {
    pub field: FieldSpec,
    pub k: usize,
    /// Pivot (information) columns; `info[j]` is where row `j` of `M` has its 1.
    pub info: Vec<usize>,
    /// Remaining columns in ascending order.
    pub parity: Vec<usize>,
    /// `M` restricted to the parity columns, one row per information symbol.
    pub parity_rows: Vec<Vec<u32>>,
    recover: Vec<Vec<u32>>,
    kernel: Vec<(usize, Vec<u32>)>,
}

impl SystematicForm {
    pub fn new(g: &FieldMatrix) -> Self {
        let field = g.field();
        let (k, n) = (g.rows(), g.cols());
        let mut rows: Vec<Vec<u32>> = (0..k)
            .map(|r| {
                let mut row = g.row_raw(r).to_vec();
                row.extend((0..k).map(|c| u32::from(c == r)));
                row
            })
            .collect();
        let info = rref(field, &mut rows, n);
        let r = info.len();
        let mut is_info = vec![false; n];
        for &c in &info {
            is_info[c] = true;
        }
        let parity: Vec<usize> = (0..n).filter(|&c| !is_info[c]).collect();
        let parity_rows = rows[..r]
            .iter()
            .map(|row| parity.iter().map(|&c| row[c]).collect())
            .collect();
        let recover = rows[..r].iter().map(|row| row[n..].to_vec()).collect();

        let mut kernel_rows: Vec<Vec<u32>> = rows[r..].iter().map(|row| row[n..].to_vec()).collect();
        let kernel_pivots = rref(field, &mut kernel_rows, k);
        let kernel = kernel_pivots.into_iter().zip(kernel_rows).collect();

        SystematicForm {
            field,
            k,
            info,
            parity,
            parity_rows,
            recover,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.info.len()
    }

    /// The lexicographically smallest message whose codeword (without offset)
    /// takes the values `info_values` on the information set.
    pub fn message_for(&self, info_values: &[u32]) -> Vec<u32> {
        debug_assert_eq!(info_values.len(), self.rank());
        let mut s = vec![0u32; self.k];
        for (&v, row) in info_values.iter().zip(&self.recover) {
            self.field.axpy_raw(&mut s, v, row);
        }
        // Kernel rows are fully reduced, so clearing each pivot leaves the
        // others untouched and the result is the minimum of the coset.
        for (pivot, row) in &self.kernel {
            let coef = s[*pivot];
            if coef != 0 {
                self.field.axpy_raw(&mut s, self.field.neg_raw(coef), row);
            }
        }
        s
    }
}
