//! The map `τ` sending a loop of maps `Δ_1 -> G^ℓ` to a map `Δ_2 -> G` through
//! the two codegeneracies `η^0, η^1: Δ_2 -> Δ_1`.

use crate::cw::GammaWord;
use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupSpec};
use crate::realization::SimplexGrid;
use crate::word::Cell;

/// `η^0(t_0, t_1, t_2) = (t_0 + t_1, t_2)` and `η^1(t_0, t_1, t_2) = (t_0, t_1 + t_2)`
/// on integer barycentric coordinates.
pub fn eta_maps(p: [u32; 3]) -> ([u32; 2], [u32; 2]) {
    ([p[0] + p[1], p[2]], [p[0], p[1] + p[2]])
}

/// `τ(φ_1)(p) = r(φ_1(η^0 p), φ_1(η^1 p))` on the grid of `Δ_2`, where
/// `s0 x_j` takes the `j`-th value of `φ_1(η^0 p)` and `s1 x_j` that of
/// `φ_1(η^1 p)`. `phi1[k]` is the sample at `t_1 = k/m`.
pub fn tau(phi1: &[Vec<GroupElement>], r: &GammaWord, spec: &GroupSpec) -> Result<Vec<GroupElement>> {
    if phi1.len() < 2 {
        return Err(Error::GridMismatch("φ_1 needs at least two samples".into()));
    }
    let rank = phi1[0].len();
    if phi1.iter().any(|s| s.len() != rank) || r.rank_needed() > rank {
        return Err(Error::GridMismatch(format!(
            "φ_1 has {rank} components, word needs {}",
            r.rank_needed()
        )));
    }
    let spheres: Vec<Cell> = (1..=rank).map(|j| Cell::new(format!("x{j}"), 2)).collect();
    let word = r.expand(&spheres)?;
    let grid = SimplexGrid::new(2, (phi1.len() - 1) as u32);
    grid.points()
        .map(|p| {
            let (a, b) = eta_maps([p[0], p[1], p[2]]);
            spec.eval_word(&word, |g| {
                let j = spheres.iter().position(|c| c == g.cell())?;
                match g.prefix() {
                    [0] => Some(phi1[a[1] as usize][j]),
                    [1] => Some(phi1[b[1] as usize][j]),
                    _ => None,
                }
            })
        })
        .collect()
}

/// Largest distance from `e` over samples on the boundary of `Δ_2`.
pub fn boundary_deviation(values: &[GroupElement], m: u32, spec: &GroupSpec) -> Result<f64> {
    let grid = SimplexGrid::new(2, m);
    if grid.len() != values.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid of {}",
            values.len(),
            grid.len()
        )));
    }
    let e = GroupElement::identity();
    Ok((0..grid.len())
        .filter(|&i| (0..3).any(|j| grid.on_face(i, j)))
        .map(|i| spec.distance(&e, &values[i]))
        .fold(0.0, f64::max))
}
