//! The topological type of a surface point: the class in `π₁(G)` of the loop
//! obtained by closing `φ` with a canonical path `ψ` from `e` to `r(w)`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupSpec, SampledPath};

/// How the paths `u_j` from `e` to `w_j` are sampled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStrategy {
    /// `u_j(t) = exp(t log w_j)`.
    #[default]
    Geodesic,
    /// The same geodesic at double speed, then constant at `w_j`.
    GeodesicThenConstant,
}

impl FromStr for PathStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geodesic" => Ok(PathStrategy::Geodesic),
            "geodesic-then-constant" => Ok(PathStrategy::GeodesicThenConstant),
            _ => Err(Error::InvalidConfig(format!("unknown path strategy '{s}'"))),
        }
    }
}

/// Surface relator `Π [w_{2j-1}, w_{2j}]` evaluated in `G`.
pub fn surface_relator(w: &[GroupElement]) -> Result<GroupElement> {
    if !w.len().is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "surface holonomies come in pairs, got {}",
            w.len()
        )));
    }
    Ok(w.chunks(2).fold(GroupElement::identity(), |acc, p| {
        acc.mul(&p[0])
            .mul(&p[1])
            .mul(&p[0].adjoint())
            .mul(&p[1].adjoint())
    }))
}

/// `ψ(t) = Π [u_{2j-1}(t), u_{2j}(t)]` on `m + 1` samples.
pub fn canonical_path(
    w: &[GroupElement],
    m: usize,
    strategy: PathStrategy,
    spec: &GroupSpec,
) -> Result<SampledPath> {
    let logs: Vec<[f64; 3]> = w.iter().map(|g| spec.log(g)).collect();
    (0..=m)
        .map(|k| {
            let t = k as f64 / m as f64;
            let s = match strategy {
                PathStrategy::Geodesic => t,
                PathStrategy::GeodesicThenConstant => (2.0 * t).min(1.0),
            };
            let u: Vec<GroupElement> = logs
                .iter()
                .zip(w)
                .map(|(v, g)| {
                    if s == 1.0 {
                        *g
                    } else {
                        spec.exp([s * v[0], s * v[1], s * v[2]])
                    }
                })
                .collect();
            surface_relator(&u)
        })
        .collect()
}

/// Class of `ψ⁻¹ + φ` in `π₁(G)`.
///
/// The closed loop is based at `r(w)`; it is translated by `r(w)⁻¹` so that
/// the class is read off at the identity.
pub fn classify_component(
    w: &[GroupElement],
    phi: &[GroupElement],
    spec: &GroupSpec,
    strategy: PathStrategy,
) -> Result<i64> {
    let target = surface_relator(w)?;
    let (start, end) = match (phi.first(), phi.last()) {
        (Some(s), Some(e)) if phi.len() >= 2 => (s, e),
        _ => return Err(Error::GridMismatch("path needs at least two samples".into())),
    };
    let d0 = spec.distance(&GroupElement::identity(), start);
    let d1 = spec.distance(&target, end);
    if d0.max(d1) > spec.tol {
        return Err(Error::EndpointMismatch(d0.max(d1)));
    }
    let m = phi.len() - 1;
    let psi = canonical_path(w, m, strategy, spec)?;
    let mut closed: SampledPath = psi.into_iter().rev().collect();
    closed.extend_from_slice(&phi[1..]);
    let based = spec.translate(&target.adjoint(), &closed);
    spec.loop_class(&based)
}
