use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::simplicial::MonotoneMap;
use crate::word::{Alphabet, Cell, GenRef, Letter, Word};

/// A free simplicial group presented by a CW-basis: nondegenerate generators
/// per degree, each of positive degree carrying its attaching element (its
/// last face). All other faces of a basis generator are trivial, and the
/// degeneracies of the basis are adjoined freely.
#[derive(Clone, Debug)]
pub struct FreeSimplicialGroup {
    nondegen: Vec<Vec<Cell>>,
    attach: BTreeMap<Cell, Word>,
}

impl FreeSimplicialGroup {
    /// Assembles and validates a group from `(generator, attaching word)` pairs.
    /// Degree-0 generators carry no attaching word.
    pub fn new(generators: Vec<(Cell, Option<Word>)>) -> Result<Self> {
        let mut sorted = generators;
        sorted.sort_by_key(|(c, _)| c.degree());
        let mut group = FreeSimplicialGroup {
            nondegen: Vec::new(),
            attach: BTreeMap::new(),
        };
        for (cell, attach) in sorted {
            let q = cell.degree();
            if group.contains(&cell) || group.nondegen.iter().flatten().any(|c| c.name() == cell.name()) {
                return Err(Error::InvalidAttaching {
                    cell: cell.name().into(),
                    reason: "duplicate generator".into(),
                });
            }
            let attach = match (q, attach) {
                (0, None) => None,
                (0, Some(w)) if w.is_identity() => None,
                (0, Some(_)) => {
                    return Err(Error::InvalidAttaching {
                        cell: cell.name().into(),
                        reason: "degree-0 generators have no attaching element".into(),
                    })
                }
                (_, None) => Some(Word::identity(q - 1)),
                (_, Some(w)) => Some(w),
            };
            if let Some(w) = &attach {
                group.check_attaching(&cell, w)?;
            }
            while group.nondegen.len() <= q {
                group.nondegen.push(Vec::new());
            }
            group.nondegen[q].push(cell.clone());
            if let Some(w) = attach {
                group.attach.insert(cell, w);
            }
        }
        if group.nondegen.is_empty() {
            group.nondegen.push(Vec::new());
        }
        Ok(group)
    }

    fn check_attaching(&self, cell: &Cell, w: &Word) -> Result<()> {
        let bad = |reason: String| Error::InvalidAttaching {
            cell: cell.name().into(),
            reason,
        };
        if w.degree() + 1 != cell.degree() {
            return Err(bad(format!(
                "attaching word has degree {}, expected {}",
                w.degree(),
                cell.degree() - 1
            )));
        }
        for g in w.generators() {
            if !self.contains(g.cell()) {
                return Err(bad(format!("unknown generator `{g}`")));
            }
        }
        // The attaching element is a cycle: every face of it is trivial.
        if w.degree() >= 1 {
            for j in 0..=w.degree() {
                let f = self.face(j, w).map_err(|e| bad(e.to_string()))?;
                if !f.is_identity() {
                    return Err(bad(format!("face {j} of the attaching element is {f}")));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.nondegen
            .get(cell.degree())
            .is_some_and(|cs| cs.contains(cell))
    }

    /// Highest degree carrying a nondegenerate generator.
    pub fn top_degree(&self) -> usize {
        self.nondegen
            .iter()
            .rposition(|cs| !cs.is_empty())
            .unwrap_or(0)
    }

    /// Nondegenerate generators `X_q`.
    pub fn basis(&self, q: usize) -> &[Cell] {
        self.nondegen.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.nondegen.iter().flatten()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.cells().cloned().collect()
    }

    /// The attaching element `d_q x` of a generator of degree `q >= 1`.
    pub fn attaching(&self, cell: &Cell) -> Option<&Word> {
        self.attach.get(cell)
    }

    pub fn parse_word(&self, text: &str, degree: usize) -> Result<Word> {
        Word::parse(text, degree, &self.alphabet())
    }

    /// `d_i` on a single free generator, pushed through its degeneracy prefix
    /// with the simplicial identities.
    pub fn face_generator(&self, i: usize, g: &GenRef) -> Result<Word> {
        let degree = g.degree();
        if degree == 0 || i > degree {
            return Err(Error::IndexOutOfRange { index: i, degree });
        }
        let Some((&j, rest)) = g.prefix().split_first() else {
            if !self.contains(g.cell()) {
                return Err(Error::UnboundGenerator(g.to_string()));
            }
            return Ok(if i < degree {
                Word::identity(degree - 1)
            } else {
                self.attach[g.cell()].clone()
            });
        };
        let inner = GenRef::from_canonical(g.cell().clone(), rest.to_vec())?;
        if i < j {
            self.face_generator(i, &inner)?.degeneracy(j - 1)
        } else if i == j || i == j + 1 {
            Ok(Word::generator(inner))
        } else {
            self.face_generator(i - 1, &inner)?.degeneracy(j)
        }
    }

    /// `d_i: K_q -> K_{q-1}`.
    pub fn face(&self, i: usize, w: &Word) -> Result<Word> {
        let q = w.degree();
        if q == 0 || i > q {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: q,
            });
        }
        let mut letters: Vec<Letter> = Vec::new();
        for l in w.letters() {
            let img = self.face_generator(i, &l.gen)?;
            if l.inverse {
                letters.extend(img.invert().letters().iter().cloned());
            } else {
                letters.extend(img.letters().iter().cloned());
            }
        }
        Word::reduce(q - 1, letters)
    }

    /// `s_i: K_q -> K_{q+1}`.
    pub fn degeneracy(&self, i: usize, w: &Word) -> Result<Word> {
        w.degeneracy(i)
    }

    /// All free generators of `K_q`: each basis element of degree `r <= q`
    /// under every canonical degeneracy prefix of length `q - r`.
    pub fn enumerate_generators(&self, q: usize) -> Vec<GenRef> {
        let mut out = Vec::new();
        for r in (0..=q.min(self.nondegen.len().saturating_sub(1))).rev() {
            let prefixes = decreasing_subsets(q, q - r);
            for cell in self.basis(r) {
                for p in &prefixes {
                    out.push(
                        GenRef::from_canonical(cell.clone(), p.clone())
                            .expect("enumerated prefixes are canonical"),
                    );
                }
            }
        }
        out
    }

    /// The contravariant action `K(θ): K_j -> K_i` of `θ: [i] -> [j]`.
    pub fn apply_monotone(&self, theta: &MonotoneMap, w: &Word) -> Result<Word> {
        if w.degree() != theta.target() {
            return Err(Error::DegreeMismatch {
                expected: theta.target(),
                found: w.degree(),
            });
        }
        let (missed, repeats) = theta.factor();
        let mut out = w.clone();
        for f in missed {
            out = self.face(f, &out)?;
        }
        for s in repeats {
            out = out.degeneracy(s)?;
        }
        Ok(out)
    }

    /// Membership in `M_q = ∩_{j<q} ker d_j`.
    pub fn moore_member(&self, w: &Word) -> Result<bool> {
        Ok(self.first_nontrivial_face(w)?.is_none())
    }

    fn first_nontrivial_face(&self, w: &Word) -> Result<Option<usize>> {
        let q = w.degree();
        if q == 0 {
            return Err(Error::IndexOutOfRange { index: 0, degree: 0 });
        }
        for j in 0..q {
            if !self.face(j, w)?.is_identity() {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// The Moore differential: the last face, restricted to `M_q`.
    pub fn moore_boundary(&self, w: &Word) -> Result<Word> {
        if let Some(face) = self.first_nontrivial_face(w)? {
            return Err(Error::NotMooreMember { face });
        }
        self.face(w.degree(), w)
    }
}

/// Strictly decreasing `k`-subsets of `{0, ..., n-1}`.
pub(crate) fn decreasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        let upper = acc.last().copied().unwrap_or(n);
        let need = k - acc.len();
        for j in (0..upper).rev() {
            if j + 1 < need {
                break;
            }
            acc.push(j);
            rec(n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}
