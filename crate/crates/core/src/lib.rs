//! Kan loop groups of reduced CW-complexes and the cosimplicial
//! representation spaces `Hom(K, G)` they induce.
//!
//! The crate is organized bottom-up:
//!
//! * [`word`]: reduced words over degeneracy-indexed free generators.
//! * [`simplicial`]: faces, degeneracies, monotone-map actions, the Moore
//!   complex and normalized integral homology of a free simplicial group.
//! * [`cw`]: reduced CW-complexes, Kan's construction and the fixtures
//!   (surfaces, spheres, 3-dimensional spines, 4-complexes).
//! * [`lie`]: U(1), SU(2), SO(3) word maps, geodesics, `π₁` classes.
//! * [`realization`]: sampled points of the cut-down realization, the
//!   cosimplicial action, bundle-type classification and the map `τ`.
//! * [`flow`]: discrete path energy and its gradient descent.

pub mod cw;
pub mod error;
pub mod flow;
pub mod lie;
pub mod realization;
pub mod simplicial;
pub mod word;

pub use cw::{GammaWord, IdentitySequence, ReducedCWComplex};
pub use error::{Error, Result};
pub use lie::{GroupElement, GroupKind, GroupSpec};
pub use simplicial::{FreeSimplicialGroup, HomologyGroup, MonotoneMap};
pub use word::{Alphabet, Cell, GenRef, GroupValue, Letter, Word};
