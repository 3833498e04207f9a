use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cw::GammaWord;
use crate::error::{Error, Result};
use crate::simplicial::{FreeSimplicialGroup, IntMatrix};
use crate::word::{Alphabet, Cell, GenRef, Letter, Word};

/// One factor `z r_j^ε z^-1` of an identity among relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityTerm {
    pub conjugator: Word,
    pub relator: Cell,
    pub inverse: bool,
}

/// A product `Π z_k r_{j_k}^{ε_k} z_k^-1` over relators of a 2-complex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IdentitySequence {
    pub terms: Vec<IdentityTerm>,
}

impl IdentitySequence {
    /// The word in the 1-cell generators obtained by substituting each
    /// relator's attaching word.
    pub fn substituted(&self, relators: &BTreeMap<Cell, Word>) -> Result<Word> {
        let mut out = Word::identity(0);
        for t in &self.terms {
            let w = relators
                .get(&t.relator)
                .ok_or_else(|| Error::UnboundGenerator(t.relator.name().into()))?;
            let w = if t.inverse { w.invert() } else { w.clone() };
            out = out.multiply(&w.conjugate_by(&t.conjugator)?)?;
        }
        Ok(out)
    }

    /// The attaching element `Π (s0 z_k) r_{j_k}^{ε_k} (s0 z_k)^-1` in `K_1`.
    pub fn attaching_word(&self) -> Result<Word> {
        let mut out = Word::identity(1);
        for t in &self.terms {
            let r = GenRef::base(t.relator.clone());
            let letter = if t.inverse { Letter::neg(r) } else { Letter::pos(r) };
            let core = Word::reduce(1, [letter])?;
            out = out.multiply(&core.conjugate_by(&t.conjugator.degeneracy(0)?)?)?;
        }
        Ok(out)
    }

    /// Signed count of occurrences of `relator`.
    pub fn relator_exponent(&self, relator: &Cell) -> i64 {
        self.terms
            .iter()
            .filter(|t| &t.relator == relator)
            .map(|t| if t.inverse { -1 } else { 1 })
            .sum()
    }
}

/// True iff substituting the relator words turns the sequence into the
/// trivial word of the free group.
pub fn validate_identity(relators: &BTreeMap<Cell, Word>, identity: &IdentitySequence) -> bool {
    identity
        .substituted(relators)
        .is_ok_and(|w| w.is_identity())
}

/// A reduced CW-complex: one implicit 0-cell plus combinatorial attaching data.
#[derive(Clone, Debug, Default)]
pub struct ReducedCWComplex {
    cells: BTreeMap<usize, Vec<Cell>>,
    attach2: BTreeMap<Cell, Word>,
    attach3: BTreeMap<Cell, IdentitySequence>,
    attach4: BTreeMap<Cell, GammaWord>,
    general: BTreeMap<Cell, Word>,
}

impl ReducedCWComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_cell(&mut self, name: &str, dim: usize) -> Result<Cell> {
        if dim == 0 {
            return Err(Error::InvalidComplex(
                "a reduced complex has exactly one (implicit) 0-cell".into(),
            ));
        }
        if name == "e" || self.cell(name).is_some() {
            return Err(Error::InvalidComplex(format!("duplicate or reserved cell name `{name}`")));
        }
        let c = Cell::new(name, dim);
        self.cells.entry(dim).or_default().push(c.clone());
        Ok(c)
    }

    pub fn cell(&self, name: &str) -> Option<&Cell> {
        self.cells.values().flatten().find(|c| c.name() == name)
    }

    fn require(&self, name: &str, dim: usize) -> Result<Cell> {
        self.cell(name)
            .filter(|c| c.dim() == dim)
            .cloned()
            .ok_or_else(|| Error::InvalidComplex(format!("no {dim}-cell named `{name}`")))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.cells.values().flatten().cloned().collect()
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[Cell] {
        self.cells.get(&dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn top_dim(&self) -> usize {
        self.cells.keys().copied().max().unwrap_or(0)
    }

    /// Attaches a 2-cell along a word in the 1-cells.
    pub fn set_attach2(&mut self, cell: &str, word: &str) -> Result<()> {
        let c = self.require(cell, 2)?;
        let w = Word::parse(word, 0, &self.alphabet())?;
        self.attach2.insert(c, w);
        Ok(())
    }

    pub fn set_attach3(&mut self, cell: &str, identity: IdentitySequence) -> Result<()> {
        let c = self.require(cell, 3)?;
        self.attach3.insert(c, identity);
        Ok(())
    }

    /// Parses `(conjugator, relator, sign)` triples into an identity sequence.
    pub fn identity_from_terms(&self, terms: &[(&str, &str, i32)]) -> Result<IdentitySequence> {
        let alpha = self.alphabet();
        let terms = terms
            .iter()
            .map(|&(z, r, sign)| {
                if sign != 1 && sign != -1 {
                    return Err(Error::InvalidComplex(format!("sign must be ±1, found {sign}")));
                }
                Ok(IdentityTerm {
                    conjugator: Word::parse(z, 0, &alpha)?,
                    relator: self.require(r, 2)?,
                    inverse: sign < 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IdentitySequence { terms })
    }

    pub fn set_attach4(&mut self, cell: &str, word: GammaWord) -> Result<()> {
        let c = self.require(cell, 4)?;
        self.attach4.insert(c, word);
        Ok(())
    }

    /// Raw attaching word of a `(q+1)`-cell, living in degree `q - 1`.
    pub fn set_general_attach(&mut self, cell: &str, word: &str) -> Result<()> {
        let c = self
            .cell(cell)
            .cloned()
            .ok_or_else(|| Error::InvalidComplex(format!("no cell named `{cell}`")))?;
        if c.dim() < 2 {
            return Err(Error::InvalidComplex(format!("1-cell `{cell}` has no attaching word")));
        }
        let w = Word::parse(word, c.dim() - 2, &self.alphabet())?;
        self.general.insert(c, w);
        Ok(())
    }

    pub fn relators(&self) -> &BTreeMap<Cell, Word> {
        &self.attach2
    }

    pub fn identities(&self) -> &BTreeMap<Cell, IdentitySequence> {
        &self.attach3
    }

    pub fn gamma_words(&self) -> &BTreeMap<Cell, GammaWord> {
        &self.attach4
    }

    /// Relator words for every 2-cell, trivial where none was given.
    pub fn relator_words(&self) -> BTreeMap<Cell, Word> {
        self.cells_of_dim(2)
            .iter()
            .map(|c| {
                let w = self
                    .attach2
                    .get(c)
                    .or_else(|| self.general.get(c))
                    .cloned()
                    .unwrap_or_else(|| Word::identity(0));
                (c.clone(), w)
            })
            .collect()
    }

    /// The attaching element of each cell as a word in the Kan group.
    pub fn attaching_element(&self, cell: &Cell) -> Result<Option<Word>> {
        let bad = |reason: String| Error::InvalidAttaching {
            cell: cell.name().into(),
            reason,
        };
        if cell.dim() == 1 {
            return Ok(None);
        }
        let given = [
            self.attach2.contains_key(cell),
            self.attach3.contains_key(cell),
            self.attach4.contains_key(cell),
            self.general.contains_key(cell),
        ];
        if given.iter().filter(|&&b| b).count() > 1 {
            return Err(bad("more than one attaching datum".into()));
        }
        if let Some(w) = self.attach2.get(cell) {
            return Ok(Some(w.clone()));
        }
        if let Some(i) = self.attach3.get(cell) {
            if !validate_identity(&self.relator_words(), i) {
                let residue = i
                    .substituted(&self.relator_words())
                    .map(|w| w.to_string())
                    .unwrap_or_else(|e| e.to_string());
                return Err(bad(format!(
                    "not an identity among relations (substitution gives {residue})"
                )));
            }
            return Ok(Some(i.attaching_word()?));
        }
        if let Some(g) = self.attach4.get(cell) {
            return Ok(Some(g.expand(self.cells_of_dim(2)).map_err(|e| bad(e.to_string()))?));
        }
        if let Some(w) = self.general.get(cell) {
            return Ok(Some(w.clone()));
        }
        Ok(Some(Word::identity(cell.dim() - 2)))
    }

    /// Kan's construction: one free generator of degree `d - 1` per `d`-cell.
    pub fn kan_group(&self) -> Result<FreeSimplicialGroup> {
        let mut gens = Vec::new();
        for c in self.cells.values().flatten() {
            gens.push((c.clone(), self.attaching_element(c)?));
        }
        FreeSimplicialGroup::new(gens)
    }

    /// Reduced cellular boundary `∂_d: C_d -> C_{d-1}` (rows: `(d-1)`-cells).
    /// Computed directly from abelianized attaching data.
    pub fn cellular_boundary(&self, dim: usize) -> Result<IntMatrix> {
        let rows = if dim <= 1 { 0 } else { self.cells_of_dim(dim - 1).len() };
        let cols = self.cells_of_dim(dim);
        let mut m = IntMatrix::zeros(rows, cols.len());
        if dim <= 1 {
            return Ok(m);
        }
        let lower = self.cells_of_dim(dim - 1);
        for (col, c) in cols.iter().enumerate() {
            if let Some(i) = self.attach3.get(c) {
                for (row, r) in lower.iter().enumerate() {
                    m[(row, col)] = i.relator_exponent(r);
                }
            } else if self.attach4.contains_key(c) {
                // Γ-words are commutators: no cellular boundary.
            } else if let Some(w) = self.attach2.get(c).or_else(|| self.general.get(c)) {
                for (g, e) in w.exponent_vector() {
                    if !g.is_degenerate() {
                        if let Some(row) = lower.iter().position(|l| l == g.cell()) {
                            m[(row, col)] += e;
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// Serializable form using the textual word syntax.
    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            name: None,
            cells: self
                .cells
                .iter()
                .map(|(d, cs)| (d.to_string(), cs.iter().map(|c| c.name().to_string()).collect()))
                .collect(),
            attach2: self
                .attach2
                .iter()
                .map(|(c, w)| (c.name().to_string(), w.to_string()))
                .collect(),
            attach3: self
                .attach3
                .iter()
                .map(|(c, i)| {
                    let terms = i
                        .terms
                        .iter()
                        .map(|t| IdentityTermFile {
                            z: t.conjugator.to_string(),
                            relator: t.relator.name().to_string(),
                            sign: if t.inverse { -1 } else { 1 },
                        })
                        .collect();
                    (c.name().to_string(), terms)
                })
                .collect(),
            attach4: self
                .attach4
                .iter()
                .map(|(c, g)| (c.name().to_string(), g.to_string()))
                .collect(),
            general_attach: self
                .general
                .iter()
                .map(|(c, w)| (c.name().to_string(), w.to_string()))
                .collect(),
        }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        let mut y = ReducedCWComplex::new();
        let mut dims: Vec<(usize, &Vec<String>)> = file
            .cells
            .iter()
            .map(|(d, names)| {
                d.parse::<usize>()
                    .map(|d| (d, names))
                    .map_err(|_| Error::InvalidComplex(format!("bad dimension key `{d}`")))
            })
            .collect::<Result<_>>()?;
        dims.sort_by_key(|(d, _)| *d);
        for (d, names) in dims {
            for n in names {
                y.add_cell(n, d)?;
            }
        }
        for (c, w) in &file.attach2 {
            y.set_attach2(c, w)?;
        }
        for (c, terms) in &file.attach3 {
            let t: Vec<(&str, &str, i32)> = terms
                .iter()
                .map(|t| (t.z.as_str(), t.relator.as_str(), t.sign))
                .collect();
            let i = y.identity_from_terms(&t)?;
            y.set_attach3(c, i)?;
        }
        for (c, g) in &file.attach4 {
            y.set_attach4(c, GammaWord::parse(g)?)?;
        }
        for (c, w) in &file.general_attach {
            y.set_general_attach(c, w)?;
        }
        Ok(y)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidComplex(format!("complex.json: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("complex serializes")
    }
}

/// On-disk `complex.json` layout.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub cells: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub attach2: BTreeMap<String, String>,
    #[serde(default)]
    pub attach3: BTreeMap<String, Vec<IdentityTermFile>>,
    #[serde(default)]
    pub attach4: BTreeMap<String, String>,
    #[serde(default)]
    pub general_attach: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityTermFile {
    pub z: String,
    pub relator: String,
    pub sign: i32,
}
