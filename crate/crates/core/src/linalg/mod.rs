//! Exact linear algebra over the integers, the rationals and the two-element field.

mod f2;
mod homology;
mod snf;
mod sparse;

pub use f2::{rank_mod2, rank_of_rows};
pub use homology::{homology, uct_consistent, DegreeHomology, GradedMatrices, HomologyReport, Ring};
pub use snf::{smith_normal_form, SmithForm};
pub use sparse::SparseIntegerMatrix;
