use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::simplicial::MonotoneMap;

/// Lattice points of `Δ_q` at resolution `m`: integer barycentric coordinates
/// `(k_0, ..., k_q)` with `Σ k_j = m`, i.e. `t_j = k_j / m`.
///
/// Points are ordered lexicographically in the independent coordinates
/// `(k_1, ..., k_q)`; on `Δ_1` the index of a point is `k_1`.
#[derive(Clone, Debug)]
pub struct SimplexGrid {
    degree: usize,
    m: u32,
    points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SimplexGrid {
    pub fn new(degree: usize, m: u32) -> Self {
        fn rec(q: usize, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if acc.len() == q {
                let mut p = Vec::with_capacity(q + 1);
                p.push(left);
                p.extend_from_slice(acc);
                out.push(p);
                return;
            }
            for k in 0..=left {
                acc.push(k);
                rec(q, left - k, acc, out);
                acc.pop();
            }
        }
        let mut points = Vec::new();
        rec(degree, m, &mut Vec::new(), &mut points);
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        SimplexGrid {
            degree,
            m,
            points,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn resolution(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Barycentric integer coordinates of point `i`.
    pub fn point(&self, i: usize) -> &[u32] {
        &self.points[i]
    }

    pub fn points(&self) -> impl Iterator<Item = &[u32]> {
        self.points.iter().map(Vec::as_slice)
    }

    pub fn index_of(&self, bary: &[u32]) -> Option<usize> {
        self.index.get(bary).copied()
    }

    /// Independent coordinates `(t_1, ..., t_q)`.
    pub fn coordinates(&self, i: usize) -> Vec<f64> {
        self.points[i][1..]
            .iter()
            .map(|&k| k as f64 / self.m as f64)
            .collect()
    }

    /// Whether point `i` lies on the `j`-th face (`t_j = 0`).
    pub fn on_face(&self, i: usize, j: usize) -> bool {
        self.points[i][j] == 0
    }

    /// Image of point `i` under the affine map of `θ`, as an index into `target`.
    pub fn push(&self, theta: &MonotoneMap, i: usize, target: &SimplexGrid) -> Result<usize> {
        if theta.source() != self.degree || theta.target() != target.degree || target.m != self.m {
            return Err(Error::GridMismatch(format!(
                "{theta:?} from Δ{}(m={}) to Δ{}(m={})",
                self.degree, self.m, target.degree, target.m
            )));
        }
        let image = theta.push_barycentric(&self.points[i]);
        Ok(target.index_of(&image).expect("affine images of lattice points are lattice points"))
    }
}
