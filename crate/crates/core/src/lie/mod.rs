//! Numerical backends: U(1), SU(2) and SO(3) as 2×2 complex matrices, word
//! maps, geodesics and `π₁` classification of sampled loops.

mod group;
mod paths;
mod perm;

pub use group::{quaternion_units, GroupElement, GroupKind, GroupSpec, MatrixJson, RENORMALIZE_EVERY};
pub use paths::{SampledPath, MAX_STEP_ANGLE};
pub use perm::Perm;
