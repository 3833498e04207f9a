use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly increasing map `[source] -> [target]` of finite ordinals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonotoneMap {
    target: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::MalformedMonotone("empty source".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::MalformedMonotone(format!(
                "{values:?} is not weakly increasing"
            )));
        }
        if values.iter().any(|&v| v > target) {
            return Err(Error::MalformedMonotone(format!(
                "{values:?} leaves [{target}]"
            )));
        }
        Ok(MonotoneMap { target, values })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap {
            target: n,
            values: (0..=n).collect(),
        }
    }

    /// The coface `[n-1] -> [n]` missing `j`.
    pub fn coface(j: usize, n: usize) -> Result<Self> {
        if n == 0 || j > n {
            return Err(Error::MalformedMonotone(format!("coface {j} into [{n}]")));
        }
        let values = (0..n).map(|a| if a < j { a } else { a + 1 }).collect();
        Ok(MonotoneMap { target: n, values })
    }

    /// The codegeneracy `[n+1] -> [n]` hitting `j` twice.
    pub fn codegeneracy(j: usize, n: usize) -> Result<Self> {
        if j > n {
            return Err(Error::MalformedMonotone(format!(
                "codegeneracy {j} onto [{n}]"
            )));
        }
        let values = (0..=n + 1).map(|a| if a <= j { a } else { a - 1 }).collect();
        Ok(MonotoneMap { target: n, values })
    }

    /// The surjection `[q] -> [q - prefix.len()]` whose simplicial operator is
    /// the degeneracy string `s_{prefix[0]} ... s_{prefix[last]}`.
    pub fn from_degeneracy_prefix(q: usize, prefix: &[usize]) -> Result<Self> {
        if prefix.len() > q || prefix.iter().any(|&j| j >= q) {
            return Err(Error::MalformedMonotone(format!(
                "prefix {prefix:?} in degree {q}"
            )));
        }
        let values = (0..=q)
            .map(|a| a - prefix.iter().filter(|&&j| j < a).count())
            .collect();
        MonotoneMap::new(q - prefix.len(), values)
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if other.target != self.source() {
            return Err(Error::MalformedMonotone(format!(
                "cannot compose [{}] -> [{}] after [{}] -> [{}]",
                self.source(),
                self.target,
                other.source(),
                other.target
            )));
        }
        Ok(MonotoneMap {
            target: self.target,
            values: other.values.iter().map(|&v| self.values[v]).collect(),
        })
    }

    /// Epi-mono factorization data: the target values missed (descending)
    /// and the source positions `a` with `θ(a) = θ(a+1)` (ascending).
    ///
    /// The induced simplicial operator is `s_{j_t} ... s_{j_1} d_{i_1} ... d_{i_s}`:
    /// faces in the returned order first, then degeneracies in the returned order.
    pub fn factor(&self) -> (Vec<usize>, Vec<usize>) {
        let mut missed: Vec<usize> = (0..=self.target)
            .filter(|v| !self.values.contains(v))
            .collect();
        missed.reverse();
        let repeats = (0..self.source())
            .filter(|&a| self.values[a] == self.values[a + 1])
            .collect();
        (missed, repeats)
    }

    pub fn is_surjective(&self) -> bool {
        self.factor().0.is_empty()
    }

    /// Affine action on barycentric coordinates `Δ_source -> Δ_target`.
    pub fn push_barycentric<T>(&self, point: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::AddAssign,
    {
        assert_eq!(point.len(), self.values.len(), "barycentric arity");
        let mut out = vec![T::default(); self.target + 1];
        for (a, &v) in self.values.iter().enumerate() {
            out[v] += point[a];
        }
        out
    }
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]->[{}] {:?}",
            self.source(),
            self.target,
            self.values
        )
    }
}
