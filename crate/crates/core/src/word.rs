//! Free-group words over degeneracy-indexed generators.
//!
//! A generator of the free group `K_q` is a cell of `K`-degree `r <= q`
//! together with a canonical degeneracy prefix `s_{j_a} ... s_{j_1}`
//! (`j_a > ... > j_1`, stored outermost first). Words are kept freely
//! reduced at all times, so structural equality is group equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A cell of a reduced CW-complex, used as the base of a free generator.
///
/// A cell of dimension `d >= 1` yields a generator of `K`-degree `d - 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    name: Arc<str>,
    dim: usize,
}

impl Cell {
    pub fn new(name: impl AsRef<str>, dim: usize) -> Self {
        assert!(dim >= 1, "cells carrying generators have dimension >= 1");
        Cell {
            name: Arc::from(name.as_ref()),
            dim,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Cell dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Simplicial degree of the nondegenerate generator carried by this cell.
    pub fn degree(&self) -> usize {
        self.dim - 1
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A free generator `s_{j_a} ... s_{j_1} x` of some `K_q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenRef {
    base: Cell,
    /// Strictly decreasing, outermost degeneracy first.
    prefix: Vec<usize>,
}

impl GenRef {
    /// The nondegenerate generator carried by `base`.
    pub fn base(base: Cell) -> Self {
        GenRef {
            base,
            prefix: Vec::new(),
        }
    }

    /// Builds `s_{ops[0]} s_{ops[1]} ... base`, normalizing the prefix with
    /// `s_i s_j = s_{j+1} s_i` for `i <= j`.
    pub fn with_degeneracies(base: Cell, ops: &[usize]) -> Result<Self> {
        let mut g = GenRef::base(base);
        for &i in ops.iter().rev() {
            g = g.degenerate(i)?;
        }
        Ok(g)
    }

    /// Builds a generator from an already canonical prefix.
    pub fn from_canonical(base: Cell, prefix: Vec<usize>) -> Result<Self> {
        let degree = base.degree() + prefix.len();
        if prefix.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parse {
                input: format!("{prefix:?}"),
                reason: "degeneracy prefix must be strictly decreasing".into(),
            });
        }
        if let Some(&top) = prefix.first() {
            if top >= degree {
                return Err(Error::IndexOutOfRange {
                    index: top,
                    degree: degree - 1,
                });
            }
        }
        Ok(GenRef { base, prefix })
    }

    pub fn cell(&self) -> &Cell {
        &self.base
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn degree(&self) -> usize {
        self.base.degree() + self.prefix.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.prefix.is_empty()
    }

    /// `s_i` applied to this generator, in canonical form.
    pub fn degenerate(&self, i: usize) -> Result<Self> {
        let degree = self.degree();
        if i > degree {
            return Err(Error::IndexOutOfRange { index: i, degree });
        }
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        let mut inserted = false;
        for &j in &self.prefix {
            if j >= i {
                prefix.push(j + 1);
            } else {
                if !inserted {
                    prefix.push(i);
                    inserted = true;
                }
                prefix.push(j);
            }
        }
        if !inserted {
            prefix.push(i);
        }
        Ok(GenRef {
            base: self.base.clone(),
            prefix,
        })
    }
}

impl fmt::Debug for GenRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GenRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in &self.prefix {
            write!(f, "s{j}.")?;
        }
        f.write_str(self.base.name())
    }
}

/// A generator raised to `+1` or `-1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: GenRef,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: GenRef) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: GenRef) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(&self) -> Self {
        Letter {
            gen: self.gen.clone(),
            inverse: !self.inverse,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.inverse != other.inverse && self.gen == other.gen
    }
}

/// A freely reduced word in `K_q`. The empty word is the neutral element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    degree: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(degree: usize) -> Self {
        Word {
            degree,
            letters: Vec::new(),
        }
    }

    pub fn generator(gen: GenRef) -> Self {
        Word {
            degree: gen.degree(),
            letters: vec![Letter::pos(gen)],
        }
    }

    /// Reduces a raw letter sequence. All letters must live in `degree`.
    pub fn reduce(degree: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for letter in letters {
            if letter.gen.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: letter.gen.degree(),
                });
            }
            push_reduced(&mut out, letter);
        }
        Ok(Word {
            degree,
            letters: out,
        })
    }

    /// Like [`Word::reduce`] but infers the degree from the first letter.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        let degree = letters.first().map(|l| l.gen.degree()).unwrap_or(0);
        Word::reduce(degree, letters)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_degree(&self, other: &Word) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_degree(other)?;
        let mut letters = self.letters.clone();
        for l in &other.letters {
            push_reduced(&mut letters, l.clone());
        }
        Ok(Word {
            degree: self.degree,
            letters,
        })
    }

    pub fn invert(&self) -> Word {
        Word {
            degree: self.degree,
            letters: self.letters.iter().rev().map(Letter::inverted).collect(),
        }
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
        a.multiply(b)?.multiply(&a.invert())?.multiply(&b.invert())
    }

    pub fn conjugate_by(&self, g: &Word) -> Result<Word> {
        g.multiply(self)?.multiply(&g.invert())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity(self.degree);
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base).expect("same degree");
        }
        out
    }

    /// Product of a sequence of words living in `degree`.
    pub fn product<'a>(degree: usize, words: impl IntoIterator<Item = &'a Word>) -> Result<Word> {
        let mut acc = Word::identity(degree);
        for w in words {
            acc = acc.multiply(w)?;
        }
        Ok(acc)
    }

    /// `s_i` applied letterwise.
    pub fn degeneracy(&self, i: usize) -> Result<Word> {
        if i > self.degree {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: self.degree,
            });
        }
        let letters = self
            .letters
            .iter()
            .map(|l| {
                Ok(Letter {
                    gen: l.gen.degenerate(i)?,
                    inverse: l.inverse,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        // s_i is injective on generators, so the image stays reduced.
        Ok(Word {
            degree: self.degree + 1,
            letters,
        })
    }

    /// Evaluates the word in any group-like target, failing on the first
    /// generator without an image.
    pub fn substitute<T, F>(&self, identity: T, mut image: F) -> Result<T>
    where
        T: GroupValue,
        F: FnMut(&GenRef) -> Option<T>,
    {
        let mut acc = identity;
        for l in &self.letters {
            let v = image(&l.gen).ok_or_else(|| Error::UnboundGenerator(l.gen.to_string()))?;
            acc = if l.inverse {
                acc.compose(&v.inverse())
            } else {
                acc.compose(&v)
            };
        }
        Ok(acc)
    }

    /// Substitution into words of a (possibly different) degree.
    pub fn substitute_words<F>(&self, target_degree: usize, mut image: F) -> Result<Word>
    where
        F: FnMut(&GenRef) -> Option<Word>,
    {
        let mut letters = Vec::new();
        for l in &self.letters {
            let v = image(&l.gen).ok_or_else(|| Error::UnboundGenerator(l.gen.to_string()))?;
            if v.degree != target_degree {
                return Err(Error::DegreeMismatch {
                    expected: target_degree,
                    found: v.degree,
                });
            }
            if l.inverse {
                for x in v.letters.iter().rev() {
                    push_reduced(&mut letters, x.inverted());
                }
            } else {
                for x in v.letters {
                    push_reduced(&mut letters, x);
                }
            }
        }
        Ok(Word {
            degree: target_degree,
            letters,
        })
    }

    /// Abelianization: signed letter counts per generator. Zero entries are dropped.
    pub fn exponent_vector(&self) -> BTreeMap<GenRef, i64> {
        let mut out = BTreeMap::new();
        for l in &self.letters {
            *out.entry(l.gen.clone()).or_insert(0) += l.exponent();
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Every generator occurring in the word.
    pub fn generators(&self) -> impl Iterator<Item = &GenRef> {
        self.letters.iter().map(|l| &l.gen)
    }

    /// Parses the textual syntax `x1*s1.s0.y^-1*z^3`; `e` (or an empty
    /// string) is the neutral element of `degree`.
    pub fn parse(text: &str, degree: usize, alphabet: &Alphabet) -> Result<Word> {
        let trimmed = text.trim();
        let err = |reason: String| Error::Parse {
            input: text.to_string(),
            reason,
        };
        if trimmed.is_empty() || trimmed == "e" || trimmed == "1" {
            return Ok(Word::identity(degree));
        }
        let mut letters = Vec::new();
        for token in trimmed.split('*') {
            let token: String = token.chars().filter(|c| !c.is_whitespace()).collect();
            if token.is_empty() {
                return Err(err("empty factor".into()));
            }
            let (body, power) = match token.split_once('^') {
                Some((b, p)) => {
                    let p: i64 = p.parse().map_err(|_| err(format!("bad exponent `{p}`")))?;
                    (b.to_string(), p)
                }
                None => (token.clone(), 1),
            };
            if body == "e" {
                continue;
            }
            let mut parts: Vec<&str> = body.split('.').collect();
            let name = parts.pop().expect("split yields at least one part");
            let cell = alphabet
                .get(name)
                .ok_or_else(|| err(format!("unknown generator `{name}`")))?;
            let mut ops = Vec::with_capacity(parts.len());
            for p in parts {
                let idx = p
                    .strip_prefix('s')
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err(format!("bad degeneracy `{p}`")))?;
                ops.push(idx);
            }
            let gen = GenRef::with_degeneracies(cell.clone(), &ops)
                .map_err(|e| err(e.to_string()))?;
            let letter = if power < 0 {
                Letter::neg(gen)
            } else {
                Letter::pos(gen)
            };
            for _ in 0..power.unsigned_abs() {
                letters.push(letter.clone());
            }
        }
        Word::reduce(degree, letters).map_err(|e| err(e.to_string()))
    }
}

fn push_reduced(out: &mut Vec<Letter>, letter: Letter) {
    if out.last().is_some_and(|last| last.cancels(&letter)) {
        out.pop();
    } else {
        out.push(letter);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {}", self.degree, self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == *l {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Name lookup used by the word parser.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    cells: BTreeMap<String, Cell>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, cell: Cell) {
        self.cells.insert(cell.name().to_string(), cell);
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.cells.get(name)
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }
}

impl FromIterator<Cell> for Alphabet {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        let mut a = Alphabet::new();
        for c in iter {
            a.insert(c);
        }
        a
    }
}

/// Minimal group interface used by [`Word::substitute`].
pub trait GroupValue: Clone {
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl GroupValue for Word {
    fn compose(&self, other: &Self) -> Self {
        self.multiply(other).expect("substitution targets share a degree")
    }

    fn inverse(&self) -> Self {
        self.invert()
    }
}

/// The integers under addition, i.e. the abelianization of a cyclic group.
impl GroupValue for i64 {
    fn compose(&self, other: &Self) -> Self {
        self + other
    }

    fn inverse(&self) -> Self {
        -self
    }
}
