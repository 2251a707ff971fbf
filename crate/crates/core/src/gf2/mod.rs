//! Bit-packed linear algebra over the two-element field.
//!
//! Vectors pack 64 coordinates per word; matrices are row-major lists of
//! vectors. Elimination uses word-parallel XOR and picks the lowest set bit
//! of each row as its pivot, so every basis produced here is in reduced
//! row-echelon form with respect to increasing coordinate index.

mod basis;
mod enumerate;
mod matrix;
mod vector;

pub use basis::{Basis, Echelon};
pub use enumerate::{enumerate_by_weight, WeightEnumerator};
pub use matrix::GF2Matrix;
pub use vector::GF2Vector;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}
