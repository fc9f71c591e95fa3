//! Outer actions of dg Lie algebras, (twisted) semidirect products, and the
//! relative model `Der(L_X)⟨1⟩ ⋉_{τ_*} Hom^τ(C̄L_A, L_X)⟨0⟩` of a free
//! extension `L_A → L_X`, with its comparison maps to relative derivations
//! and f-derivations.

mod action;
mod adjoint;
mod error;
mod induced;
mod model;
mod product;

pub use action::{
    check_outer_axioms, derivation_action, inner_action, ActFn, AxiomReport, DerCover, LinearImages, OuterAction,
    XiFn,
};
pub use adjoint::{action_to_morphism, check_lie_map, morphism_to_action, AdjointSemidirect, DgLieMap};
pub use error::ActionError;
pub use induced::{derivation_hom_action, induced_hom_action};
pub use model::{
    build_relative_model, check_cone_homotopy, s_pi_star, zeta, HomCover, ModelProduct, QuasiIsoVerdict,
    RelativeModel,
};
pub use product::{pin_bracket_variant, BracketVariant, TwistedSemidirect, VariantPin, YaExponent};
