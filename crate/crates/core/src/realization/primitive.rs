//! Points of `Hom(K_q, G)` as values on free generators, their regrouping
//! into primitive blocks, and the cosimplicial action of monotone maps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::simplicial::{decreasing_subsets, FreeSimplicialGroup, MonotoneMap};
use crate::word::{GenRef, GroupValue, Word};

/// A homomorphism out of `K_q`, given by its values on the free generators.
pub type HomPoint<T> = BTreeMap<GenRef, T>;

/// The block of primitive coordinates indexed by one surjection `[q] -> [k]`
/// (equivalently one canonical degeneracy prefix): values on `X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveBlock<T> {
    pub target_degree: usize,
    pub prefix: Vec<usize>,
    pub values: Vec<T>,
}

/// Coordinates in `P_0 × P_1^{C(q,1)} × ... × P_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveCoords<T> {
    pub degree: usize,
    pub blocks: Vec<PrimitiveBlock<T>>,
}

/// Splits a hom point by degeneracy prefix.
pub fn primitive_decompose<T: Clone>(
    k: &FreeSimplicialGroup,
    q: usize,
    phi: &HomPoint<T>,
) -> Result<PrimitiveCoords<T>> {
    let mut blocks = Vec::new();
    for r in 0..=q {
        let basis = k.basis(r);
        for prefix in decreasing_subsets(q, q - r) {
            let values = basis
                .iter()
                .map(|c| {
                    let g = GenRef::from_canonical(c.clone(), prefix.clone())?;
                    phi.get(&g)
                        .cloned()
                        .ok_or_else(|| Error::UnboundGenerator(g.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(PrimitiveBlock {
                target_degree: r,
                prefix,
                values,
            });
        }
    }
    Ok(PrimitiveCoords { degree: q, blocks })
}

/// Inverse of [`primitive_decompose`].
pub fn primitive_recompose<T: Clone>(
    k: &FreeSimplicialGroup,
    coords: &PrimitiveCoords<T>,
) -> Result<HomPoint<T>> {
    let mut out = BTreeMap::new();
    for block in &coords.blocks {
        let basis = k.basis(block.target_degree);
        if basis.len() != block.values.len() || block.prefix.len() + block.target_degree != coords.degree {
            return Err(Error::GridMismatch(format!(
                "block {:?} does not fit degree {}",
                block.prefix, coords.degree
            )));
        }
        for (c, v) in basis.iter().zip(&block.values) {
            let g = GenRef::from_canonical(c.clone(), block.prefix.clone())?;
            out.insert(g, v.clone());
        }
    }
    Ok(out)
}

/// `φ ∘ K(θ)`: a hom out of `K_source(θ)` pulled to one out of `K_target(θ)`.
pub fn pushforward<T: GroupValue>(
    k: &FreeSimplicialGroup,
    theta: &MonotoneMap,
    phi: &HomPoint<T>,
    identity: &T,
) -> Result<HomPoint<T>> {
    let mut out = BTreeMap::new();
    for g in k.enumerate_generators(theta.target()) {
        let image = k.apply_monotone(theta, &Word::generator(g.clone()))?;
        let v = image.substitute(identity.clone(), |h| phi.get(h).cloned())?;
        out.insert(g, v);
    }
    Ok(out)
}

/// Evaluates `w` under `φ`.
pub fn evaluate<T: GroupValue>(w: &Word, phi: &HomPoint<T>, identity: &T) -> Result<T> {
    w.substitute(identity.clone(), |h| phi.get(h).cloned())
}
