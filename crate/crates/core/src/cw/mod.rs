//! Reduced CW-complexes described by combinatorial attaching data, and
//! Kan's loop group construction on them.

pub mod builders;
mod complex;
mod gamma;

pub use complex::{
    validate_identity, ComplexFile, IdentitySequence, IdentityTerm, IdentityTermFile,
    ReducedCWComplex,
};
pub use gamma::{
    determinant, gamma_basis, gamma_basis_rank, intersection_form, is_nondegenerate, GammaSymbol,
    GammaWord,
};
