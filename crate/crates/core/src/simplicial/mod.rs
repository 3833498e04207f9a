//! Free simplicial groups with a CW-basis: faces, degeneracies, the action of
//! monotone maps, the Moore complex and normalized integral homology.

mod group;
mod homology;
mod monotone;

pub use group::FreeSimplicialGroup;
pub(crate) use group::decreasing_subsets;
pub use homology::{HomologyGroup, IntMatrix, NormalizedComplex};
pub use monotone::MonotoneMap;
