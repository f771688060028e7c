//! Binary activity mask over the stacked user/item embedding table.

use crate::bitset::ParamSet;
use crate::error::{Error, Result};

/// The single source of truth for which embedding parameters are active.
///
/// Rows `[0, m)` cover the user table, rows `[m, m+n)` the item table. The
/// nonzero count is maintained incrementally (split per table) and must always
/// agree with a full recount.
#[derive(Clone)]
pub struct MaskMatrix {
    bits: ParamSet,
    user_rows: usize,
    nnz_user: usize,
    nnz_item: usize,
}

impl MaskMatrix {
    pub fn zeros(num_users: usize, num_items: usize, dim: usize) -> Self {
        MaskMatrix {
            bits: ParamSet::new(num_users + num_items, dim),
            user_rows: num_users,
            nnz_user: 0,
            nnz_item: 0,
        }
    }

    pub fn from_bits(bits: ParamSet, user_rows: usize) -> Self {
        assert!(user_rows <= bits.rows());
        let nnz_user = bits.count_ones_in_rows(0, user_rows);
        let nnz_item = bits.count_ones_in_rows(user_rows, bits.rows());
        MaskMatrix {
            bits,
            user_rows,
            nnz_user,
            nnz_item,
        }
    }

    pub fn num_users(&self) -> usize {
        self.user_rows
    }

    pub fn num_items(&self) -> usize {
        self.bits.rows() - self.user_rows
    }

    pub fn dim(&self) -> usize {
        self.bits.cols()
    }

    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn total_slots(&self) -> usize {
        self.bits.rows() * self.bits.cols()
    }

    /// Number of active parameters a mask of this shape should hold at
    /// density `d`.
    pub fn target_count(num_users: usize, num_items: usize, dim: usize, density: f64) -> usize {
        (density * ((num_users + num_items) * dim) as f64).round() as usize
    }

    pub fn nnz(&self) -> usize {
        self.nnz_user + self.nnz_item
    }

    pub fn nnz_user(&self) -> usize {
        self.nnz_user
    }

    pub fn nnz_item(&self) -> usize {
        self.nnz_item
    }

    /// Fraction of active parameters.
    pub fn density(&self) -> f64 {
        self.nnz() as f64 / self.total_slots() as f64
    }

    #[inline]
    pub fn is_active(&self, row: usize, col: usize) -> bool {
        self.bits.get(row, col)
    }

    pub fn insert(&mut self, row: usize, col: usize) -> bool {
        let newly = self.bits.insert(row, col);
        if newly {
            if row < self.user_rows {
                self.nnz_user += 1;
            } else {
                self.nnz_item += 1;
            }
        }
        newly
    }

    pub fn remove(&mut self, row: usize, col: usize) -> bool {
        let removed = self.bits.remove(row, col);
        if removed {
            if row < self.user_rows {
                self.nnz_user -= 1;
            } else {
                self.nnz_item -= 1;
            }
        }
        removed
    }

    /// Replaces the mask with a planned active set, e.g. `(A \ P) ∪ G`.
    pub fn set_from(&mut self, plan_active: &ParamSet) -> Result<()> {
        if !self.bits.same_shape(plan_active) {
            return Err(Error::Dimension(format!(
                "mask is {:?}, plan is {:?}",
                self.bits.shape(),
                plan_active.shape()
            )));
        }
        self.bits = plan_active.clone();
        self.nnz_user = self.bits.count_ones_in_rows(0, self.user_rows);
        self.nnz_item = self.bits.count_ones_in_rows(self.user_rows, self.bits.rows());
        Ok(())
    }

    /// Full popcount, for checking the incremental counters.
    pub fn recount(&self) -> (usize, usize) {
        (
            self.bits.count_ones_in_rows(0, self.user_rows),
            self.bits.count_ones_in_rows(self.user_rows, self.bits.rows()),
        )
    }

    pub fn bits(&self) -> &ParamSet {
        &self.bits
    }

    pub fn row_nnz(&self, row: usize) -> usize {
        self.bits.row_count_ones(row)
    }
}

impl std::fmt::Debug for MaskMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MaskMatrix({}u+{}i x {}, nnz {})",
            self.num_users(),
            self.num_items(),
            self.dim(),
            self.nnz()
        )
    }
}
