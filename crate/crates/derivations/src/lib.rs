//! Chain complexes of derivations of free graded Lie algebras: all
//! derivations, relative ones for a free extension, those vanishing on
//! chosen elements, and derivations along a morphism, with the restriction
//! sequence relating them.

mod builders;
mod complex;
mod error;
mod ses;

pub use builders::{adjoint, build_der, build_f_der, build_rel_der, build_vanishing_der};
pub use complex::{Derivation, DerivationComplex, DerivationKind, Slot};
pub use error::DerError;
pub use ses::{restriction_ses, DegreeExactness, RestrictionSes};
