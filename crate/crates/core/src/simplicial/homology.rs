//! Normalized (abelianized) Moore complex and its integral homology.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::simplicial::FreeSimplicialGroup;
use crate::word::{Cell, GenRef};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Nonzero diagonal entries of the Smith normal form, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<i64> {
        smith_diagonal(self.clone())
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

fn smith_diagonal(mut m: IntMatrix) -> Vec<i64> {
    let (rows, cols) = (m.rows, m.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                let v = m[(i, j)].abs();
                if v != 0 && pivot.is_none_or(|(_, _, best)| v < best) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        swap_rows(&mut m, t, pi);
        swap_cols(&mut m, t, pj);
        loop {
            let p = m[(t, t)];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[(i, t)] / p;
                if q != 0 {
                    for j in t..cols {
                        m[(i, j)] -= q * m[(t, j)];
                    }
                }
                if m[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[(t, j)] / p;
                if q != 0 {
                    for i in t..rows {
                        m[(i, j)] -= q * m[(i, t)];
                    }
                }
                if m[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // Move a smaller remainder into the pivot position and retry.
                let mut best = (t, t, m[(t, t)].abs());
                for i in t + 1..rows {
                    let v = m[(i, t)].abs();
                    if v != 0 && v < best.2 {
                        best = (i, t, v);
                    }
                }
                for j in t + 1..cols {
                    let v = m[(t, j)].abs();
                    if v != 0 && v < best.2 {
                        best = (t, j, v);
                    }
                }
                swap_rows(&mut m, t, best.0);
                swap_cols(&mut m, t, best.1);
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let p = m[(t, t)];
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[(i, j)] % p != 0);
            match offender {
                Some((i, _)) => {
                    for j in t..cols {
                        m[(t, j)] += m[(i, j)];
                    }
                }
                None => break,
            }
        }
        diag.push(m[(t, t)].abs());
        t += 1;
    }
    diag
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        m.data.swap(i * m.cols + a, i * m.cols + b);
    }
}

/// One homology group `Z^betti ⊕ ⊕ Z/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<i64>,
}

/// Chain groups free on the nondegenerate generators, with the alternating
/// face sum as differential and degenerate letters projected away.
#[derive(Clone, Debug)]
pub struct NormalizedComplex {
    bases: Vec<Vec<Cell>>,
    /// `differentials[k]: C_k -> C_{k-1}` (rows indexed by `bases[k-1]`);
    /// `differentials[0]` is the zero map to the trivial group.
    differentials: Vec<IntMatrix>,
}

impl NormalizedComplex {
    pub fn basis(&self, k: usize) -> &[Cell] {
        self.bases.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn differential(&self, k: usize) -> Option<&IntMatrix> {
        self.differentials.get(k)
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 2
    }

    pub fn homology(&self, n: usize) -> HomologyGroup {
        let dim = self.basis(n).len();
        let out_rank = if n == 0 {
            0
        } else {
            self.differentials[n].rank()
        };
        let incoming = self.differentials[n + 1].invariant_factors();
        HomologyGroup {
            degree: n,
            betti: dim - out_rank - incoming.len(),
            torsion: incoming.into_iter().filter(|&t| t > 1).collect(),
        }
    }

    pub fn homology_all(&self) -> Vec<HomologyGroup> {
        (0..=self.max_degree()).map(|n| self.homology(n)).collect()
    }
}

impl FreeSimplicialGroup {
    /// Abelianized normalized chain complex through `max_degree` (plus the
    /// differential leaving `max_degree + 1`, so every listed degree has
    /// complete homology).
    pub fn normalized_complex(&self, max_degree: usize) -> Result<NormalizedComplex> {
        let bases: Vec<Vec<Cell>> = (0..=max_degree + 1).map(|k| self.basis(k).to_vec()).collect();
        let mut differentials = vec![IntMatrix::zeros(0, bases[0].len())];
        for k in 1..=max_degree + 1 {
            let mut d = IntMatrix::zeros(bases[k - 1].len(), bases[k].len());
            for (col, cell) in bases[k].iter().enumerate() {
                let x = crate::word::Word::generator(GenRef::base(cell.clone()));
                for j in 0..=k {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    for (g, e) in self.face(j, &x)?.exponent_vector() {
                        if g.is_degenerate() {
                            continue;
                        }
                        let row = bases[k - 1]
                            .iter()
                            .position(|c| c == g.cell())
                            .expect("faces land on generators of the group");
                        d[(row, col)] += sign * e;
                    }
                }
            }
            differentials.push(d);
        }
        Ok(NormalizedComplex {
            bases,
            differentials,
        })
    }

    pub fn homology(&self, max_degree: usize) -> Result<Vec<HomologyGroup>> {
        Ok(self.normalized_complex(max_degree)?.homology_all())
    }
}
