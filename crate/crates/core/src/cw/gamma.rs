//! Words in the basis `v_j`, `w_{i,j}` of the second Moore homology of the
//! Kan group of a wedge of 2-spheres, and the quadratic form they induce.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::IntMatrix;
use crate::word::{Cell, GenRef, Word};

/// `v_j = [s0 x_j, s1 x_j]` or `w_{i,j} = s0 x_i · v_j · (s0 x_i)^-1` (`i < j`), 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GammaSymbol {
    V(usize),
    W(usize, usize),
}

impl GammaSymbol {
    fn max_index(self) -> usize {
        match self {
            GammaSymbol::V(j) => j,
            GammaSymbol::W(_, j) => j,
        }
    }

    /// The symbol as an element of `K_2`, given the 2-cells `x_1, ..., x_l`.
    pub fn expand(self, spheres: &[Cell]) -> Result<Word> {
        let cell = |j: usize| -> Result<Cell> {
            spheres
                .get(j.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::Parse {
                    input: self.to_string(),
                    reason: format!("no 2-cell with index {j}"),
                })
        };
        let s = |c: &Cell, i: usize| -> Result<Word> {
            Ok(Word::generator(GenRef::base(c.clone()).degenerate(i)?))
        };
        let v = |j: usize| -> Result<Word> {
            let x = cell(j)?;
            Word::commutator(&s(&x, 0)?, &s(&x, 1)?)
        };
        match self {
            GammaSymbol::V(j) => v(j),
            GammaSymbol::W(i, j) => v(j)?.conjugate_by(&s(&cell(i)?, 0)?),
        }
    }
}

impl fmt::Display for GammaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSymbol::V(j) => write!(f, "v{j}"),
            GammaSymbol::W(i, j) => write!(f, "w{i}_{j}"),
        }
    }
}

/// A word in the symbols `v_j`, `w_{i,j}`, stored freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GammaWord {
    letters: Vec<(GammaSymbol, bool)>,
}

impl GammaWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (GammaSymbol, bool)>) -> Self {
        let mut out: Vec<(GammaSymbol, bool)> = Vec::new();
        for (s, inv) in letters {
            if out.last().is_some_and(|&(t, i)| t == s && i != inv) {
                out.pop();
            } else {
                out.push((s, inv));
            }
        }
        GammaWord { letters: out }
    }

    pub fn symbol(s: GammaSymbol) -> Self {
        GammaWord {
            letters: vec![(s, false)],
        }
    }

    pub fn letters(&self) -> &[(GammaSymbol, bool)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest sphere index referenced.
    pub fn rank_needed(&self) -> usize {
        self.letters.iter().map(|(s, _)| s.max_index()).max().unwrap_or(0)
    }

    pub fn exponent_sum(&self, s: GammaSymbol) -> i64 {
        self.letters
            .iter()
            .filter(|(t, _)| *t == s)
            .map(|&(_, inv)| if inv { -1 } else { 1 })
            .sum()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            input: text.to_string(),
            reason,
        };
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "1" {
            return Ok(GammaWord::identity());
        }
        let mut letters = Vec::new();
        for token in t.split('*') {
            let token: String = token.chars().filter(|c| !c.is_whitespace()).collect();
            let (body, power) = match token.split_once('^') {
                Some((b, p)) => (
                    b.to_string(),
                    p.parse::<i64>().map_err(|_| err(format!("bad exponent `{p}`")))?,
                ),
                None => (token.clone(), 1),
            };
            if body == "e" {
                continue;
            }
            let idx = |s: &str| -> Result<usize> {
                s.parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| err(format!("bad index in `{body}`")))
            };
            let sym = if let Some(rest) = body.strip_prefix('v') {
                GammaSymbol::V(idx(rest)?)
            } else if let Some(rest) = body.strip_prefix('w') {
                let (i, j) = rest
                    .split_once('_')
                    .ok_or_else(|| err(format!("expected w<i>_<j>, found `{body}`")))?;
                let (i, j) = (idx(i)?, idx(j)?);
                if i >= j {
                    return Err(err(format!("`{body}` needs i < j")));
                }
                GammaSymbol::W(i, j)
            } else {
                return Err(err(format!("unknown symbol `{body}`")));
            };
            for _ in 0..power.unsigned_abs() {
                letters.push((sym, power < 0));
            }
        }
        Ok(GammaWord::from_letters(letters))
    }

    /// The word in `K_2` obtained by expanding every symbol.
    pub fn expand(&self, spheres: &[Cell]) -> Result<Word> {
        let mut out = Word::identity(2);
        for &(s, inv) in &self.letters {
            let w = s.expand(spheres)?;
            out = out.multiply(&if inv { w.invert() } else { w })?;
        }
        Ok(out)
    }
}

impl fmt::Display for GammaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(s, inv)| if *inv { format!("{s}^-1") } else { s.to_string() })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// The basis `v_1, ..., v_l, w_{i,j} (i < j)`.
pub fn gamma_basis(rank: usize) -> Vec<GammaSymbol> {
    let mut out: Vec<GammaSymbol> = (1..=rank).map(GammaSymbol::V).collect();
    for i in 1..=rank {
        for j in i + 1..=rank {
            out.push(GammaSymbol::W(i, j));
        }
    }
    out
}

/// Rank of the basis list after mapping `v_j -> a_j⊗a_j` and
/// `w_{i,j} -> a_i⊗a_j + a_j⊗a_i` into `Z^l ⊗ Z^l`.
pub fn gamma_basis_rank(rank: usize) -> usize {
    let basis = gamma_basis(rank);
    let mut m = IntMatrix::zeros(rank * rank, basis.len());
    for (col, s) in basis.iter().enumerate() {
        match *s {
            GammaSymbol::V(j) => m[((j - 1) * rank + (j - 1), col)] += 1,
            GammaSymbol::W(i, j) => {
                m[((i - 1) * rank + (j - 1), col)] += 1;
                m[((j - 1) * rank + (i - 1), col)] += 1;
            }
        }
    }
    m.rank()
}

/// Symmetric intersection matrix: `Q_jj` is the exponent sum of `v_j`,
/// `Q_ij = Q_ji` the exponent sum of `w_{i,j}`.
pub fn intersection_form(word: &GammaWord, rank: usize) -> Result<IntMatrix> {
    if word.rank_needed() > rank {
        return Err(Error::Parse {
            input: word.to_string(),
            reason: format!("symbol index exceeds rank {rank}"),
        });
    }
    let mut q = IntMatrix::zeros(rank, rank);
    for &(s, inv) in word.letters() {
        let e = if inv { -1 } else { 1 };
        match s {
            GammaSymbol::V(j) => q[(j - 1, j - 1)] += e,
            GammaSymbol::W(i, j) => {
                q[(i - 1, j - 1)] += e;
                q[(j - 1, i - 1)] += e;
            }
        }
    }
    Ok(q)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> i128 {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn is_nondegenerate(form: &IntMatrix) -> bool {
    determinant(form) != 0
}
