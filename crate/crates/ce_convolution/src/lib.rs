//! Chevalley–Eilenberg coalgebras of free dg Lie algebras, the universal
//! twisting morphism, and convolution dg Lie algebras `Hom(C̄(L_A), L_X)`
//! truncated to words of bounded degree.

mod coalgebra;
mod coderivation;
mod convolution;
mod error;
mod indec;
mod twisting;
pub mod word;

pub use coalgebra::{build_ce, CECoalgebra, Tensor2, WordId};
pub use convolution::{
    build_convolution, pushforward_tau, tau_from_inclusion, ConvolutionDgLie, WordValues,
};
pub use coderivation::Coderivation;
pub use error::CeError;
pub use indec::{indecomposables_comparison, IndecVerdict};
pub use twisting::{universal_twisting, TwistingMorphism};
