//! Free graded Lie algebras over ℚ with a differential, embedded in the
//! tensor algebra, together with per-degree bases, morphisms and checkers
//! for the graded sign laws.
//!
//! Conventions: homological grading, `d` of degree −1, Koszul signs
//! `(−1)^{|x||y|}`, bracket `[x,y] = xy − (−1)^{|x||y|}yx`.

mod algebra;
mod basis;
mod cover;
mod element;
mod error;
mod generators;
mod morphism;
mod ops;
mod structure;
pub mod tensor;

pub use algebra::{format_combination, FreeGradedLie};
pub use cover::{differential_matrix, underlying_complex, ConnectiveCover};
pub use basis::{pbw_dimensions, LeadCollector};
pub use element::LieElement;
pub use error::LieError;
pub use generators::{Generator, GeneratorSet};
pub use morphism::{verify_morphism, LieMorphism, MorphismCheck};
pub use ops::{indecomposables, lcs_stage, truncate, LcsStage};
pub use structure::{
    check_antisymmetry, check_d_squared, check_dg_lie_laws, check_jacobi, check_leibniz,
    DgLieAlgebra, LawCheck,
};
pub use tensor::{TensorPoly, Word};

/// `[x, y]` inside `l`, failing above the cutoff.
pub fn bracket(l: &FreeGradedLie, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
    l.bracket(x, y)
}

pub fn apply_d(l: &FreeGradedLie, x: &LieElement) -> Result<LieElement, LieError> {
    l.apply_d(x)
}

pub fn lie_basis(l: &FreeGradedLie, n: i64) -> Result<Vec<LieElement>, LieError> {
    l.lie_basis(n)
}
