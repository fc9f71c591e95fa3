//! Exact rational linear algebra: sparse vectors and matrices, fraction-free
//! elimination, graded vector spaces, chain complexes and their homology.

mod complex;
mod elim;
mod error;
mod graded;
mod rational;
mod sparse;

pub use complex::{
    betti_numbers, homology, homology_clamped, induced_map_on_homology, verify_chain_map,
    ChainComplex, ChainMapCheck, HomologyDegree, HomologyReport, InducedDegree, InducedMap,
};
pub use elim::{independent_in_order, kernel, kernel_basis, kernel_with_free_columns, rank, solve, span_rank, RowEchelon};
pub use error::{DegreeRange, LinError};
pub use graded::{GradedLinearMap, GradedVectorSpace, SignRule};
pub use rational::Rational;
pub use sparse::{SparseMatrix, SparseVec};
