//! Sampled points of the geometric realization of `Hom(K, G)`.

mod classify;
mod grid;
mod point;
mod primitive;
mod tau;

pub use classify::{canonical_path, classify_component, surface_relator, PathStrategy};
pub use grid::SimplexGrid;
pub use point::{
    Condition, ConditionReport, DegreeSamples, RealizationFile, RealizationPoint, Realizer,
    ValidationReport,
};
pub use primitive::{
    evaluate, primitive_decompose, primitive_recompose, pushforward, HomPoint, PrimitiveBlock,
    PrimitiveCoords,
};
pub use tau::{boundary_deviation, eta_maps, tau};
