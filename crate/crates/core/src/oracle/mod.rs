//! Independent routes to the same volumes.

mod character;
mod partitions;

pub use character::{
    beta_limit, character_from_weights, contour_residue, iterated_contour, k_theory_volume, CharacterFunction,
    ContourTerm, Exponents, PolePolicy,
};
pub use partitions::{arm, leg, partition_sum_su, partition_tuples, partitions, tangent_weights, Partition};

use crate::algebra::AlgebraError;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("term of beta order {order} does not balance dimension {dim}")]
    Unbalanced { order: i64, dim: i64 },
}
