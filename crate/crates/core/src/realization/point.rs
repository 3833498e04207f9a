//! Sampled points of the cut-down realization: sequences `ψ_q: Δ_q -> G^{X_q}`
//! that are trivial on every face but the last and whose last face is
//! determined by the lower degrees through the attaching elements.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupKind, GroupSpec, MatrixJson};
use crate::realization::{HomPoint, SimplexGrid};
use crate::simplicial::{FreeSimplicialGroup, MonotoneMap};
use crate::word::GenRef;

/// `psi[q][grid index][generator index in X_q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationPoint {
    m: u32,
    psi: Vec<Vec<Vec<GroupElement>>>,
}

impl RealizationPoint {
    pub fn resolution(&self) -> u32 {
        self.m
    }

    pub fn degrees(&self) -> usize {
        self.psi.len()
    }

    pub fn samples(&self, q: usize) -> &[Vec<GroupElement>] {
        &self.psi[q]
    }

    /// Mutable access to one sample; used to build perturbed points.
    pub fn sample_mut(&mut self, q: usize, index: usize, generator: usize) -> &mut GroupElement {
        &mut self.psi[q][index][generator]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Every sample is a group element.
    Membership,
    /// `ψ_q` is trivial on the faces `t_j = 0`, `j < q`.
    TrivialFaces,
    /// `ψ_q ∘ ε^q` agrees with the attaching elements evaluated on `φ_{q-1}`.
    LastFace,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Membership => "membership",
            Condition::TrivialFaces => "trivial_faces",
            Condition::LastFace => "last_face",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub degree: usize,
    pub condition: Condition,
    pub samples: usize,
    pub max_violation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tol: f64,
    pub pass: bool,
    pub max_violation: f64,
    pub conditions: Vec<ConditionReport>,
}

/// Grids and evaluation machinery for the realization of `Hom(K, G)`,
/// truncated at the top degree of `K`.
pub struct Realizer<'a> {
    k: &'a FreeSimplicialGroup,
    spec: GroupSpec,
    grids: Vec<SimplexGrid>,
}

impl<'a> Realizer<'a> {
    pub fn new(k: &'a FreeSimplicialGroup, spec: GroupSpec, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("grid resolution must be positive".into()));
        }
        let grids = (0..=k.top_degree()).map(|q| SimplexGrid::new(q, m)).collect();
        Ok(Realizer { k, spec, grids })
    }

    pub fn group(&self) -> &FreeSimplicialGroup {
        self.k
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn resolution(&self) -> u32 {
        self.grids[0].resolution()
    }

    pub fn top_degree(&self) -> usize {
        self.grids.len() - 1
    }

    pub fn grid(&self, q: usize) -> &SimplexGrid {
        &self.grids[q]
    }

    /// Wraps raw samples after checking their shape.
    pub fn from_parts(&self, psi: Vec<Vec<Vec<GroupElement>>>) -> Result<RealizationPoint> {
        if psi.len() != self.grids.len() {
            return Err(Error::GridMismatch(format!(
                "{} degrees given, {} expected",
                psi.len(),
                self.grids.len()
            )));
        }
        for (q, samples) in psi.iter().enumerate() {
            if samples.len() != self.grids[q].len() {
                return Err(Error::GridMismatch(format!(
                    "degree {q}: {} samples, grid has {}",
                    samples.len(),
                    self.grids[q].len()
                )));
            }
            let n = self.k.basis(q).len();
            if let Some(bad) = samples.iter().position(|s| s.len() != n) {
                return Err(Error::GridMismatch(format!(
                    "degree {q}, sample {bad}: expected {n} generators"
                )));
            }
        }
        Ok(RealizationPoint {
            m: self.resolution(),
            psi,
        })
    }

    /// Value of the degree-`q` hom at grid point `index` on a free generator,
    /// read off the primitive samples through the generator's surjection.
    pub fn hom_value(
        &self,
        point: &RealizationPoint,
        q: usize,
        index: usize,
        g: &GenRef,
    ) -> Result<GroupElement> {
        self.hom_value_partial(&point.psi, q, index, g)
    }

    fn hom_value_partial(
        &self,
        psi: &[Vec<Vec<GroupElement>>],
        q: usize,
        index: usize,
        g: &GenRef,
    ) -> Result<GroupElement> {
        let r = g.cell().degree();
        let pos = self
            .k
            .basis(r)
            .iter()
            .position(|c| c == g.cell())
            .ok_or_else(|| Error::UnboundGenerator(g.to_string()))?;
        let alpha = MonotoneMap::from_degeneracy_prefix(q, g.prefix())?;
        let j = self.grids[q].push(&alpha, index, &self.grids[r])?;
        psi.get(r)
            .and_then(|s| s.get(j))
            .and_then(|s| s.get(pos))
            .copied()
            .ok_or_else(|| Error::GridMismatch(format!("no sample for {g} at degree {r}")))
    }

    /// The full hom `φ_q(p)` on every free generator of `K_q`.
    pub fn hom_at(&self, point: &RealizationPoint, q: usize, index: usize) -> Result<HomPoint<GroupElement>> {
        self.k
            .enumerate_generators(q)
            .into_iter()
            .map(|g| Ok((g.clone(), self.hom_value(point, q, index, &g)?)))
            .collect()
    }

    /// `ψ_q ∘ ε^q` as forced by `φ_{q-1}`: each attaching element of `X_q`
    /// evaluated at every grid point of `Δ_{q-1}`.
    pub fn coface_last(&self, point: &RealizationPoint, q: usize) -> Result<Vec<Vec<GroupElement>>> {
        self.coface_last_partial(&point.psi, q)
    }

    fn coface_last_partial(
        &self,
        psi: &[Vec<Vec<GroupElement>>],
        q: usize,
    ) -> Result<Vec<Vec<GroupElement>>> {
        if q == 0 || q > self.top_degree() {
            return Err(Error::IndexOutOfRange {
                index: q,
                degree: self.top_degree(),
            });
        }
        let basis = self.k.basis(q);
        (0..self.grids[q - 1].len())
            .map(|idx| {
                basis
                    .iter()
                    .map(|x| {
                        let attach = self.k.attaching(x).expect("positive degree generators attach");
                        let mut err = None;
                        let v = self.spec.eval_word(attach, |g| {
                            match self.hom_value_partial(psi, q - 1, idx, g) {
                                Ok(v) => Some(v),
                                Err(e) => {
                                    err = Some(e);
                                    None
                                }
                            }
                        });
                        match err {
                            Some(e) => Err(e),
                            None => v,
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    }

    /// Checks every sample against the face conditions.
    pub fn validate(&self, point: &RealizationPoint) -> Result<ValidationReport> {
        if point.m != self.resolution() {
            return Err(Error::GridMismatch(format!(
                "point sampled at m = {}, grid has m = {}",
                point.m,
                self.resolution()
            )));
        }
        self.from_parts(point.psi.clone())?;
        let tol = self.spec.tol;
        let e = GroupElement::identity();
        let mut conditions = Vec::new();
        let mut membership = 0.0f64;
        let mut count = 0;
        for samples in &point.psi {
            for g in samples.iter().flatten() {
                membership = membership.max(self.spec.drift(g));
                count += 1;
            }
        }
        conditions.push(ConditionReport {
            degree: 0,
            condition: Condition::Membership,
            samples: count,
            max_violation: membership,
            pass: membership <= 10.0 * tol,
        });
        for q in 1..=self.top_degree() {
            if self.k.basis(q).is_empty() {
                continue;
            }
            let grid = &self.grids[q];
            let mut trivial = (0usize, 0.0f64);
            for idx in 0..grid.len() {
                if (0..q).any(|j| grid.on_face(idx, j)) {
                    for g in &point.psi[q][idx] {
                        trivial.0 += 1;
                        trivial.1 = trivial.1.max(self.spec.distance(&e, g));
                    }
                }
            }
            conditions.push(ConditionReport {
                degree: q,
                condition: Condition::TrivialFaces,
                samples: trivial.0,
                max_violation: trivial.1,
                pass: trivial.1 <= tol,
            });
            let forced = self.coface_last(point, q)?;
            let last = MonotoneMap::coface(q, q)?;
            let mut lf = (0usize, 0.0f64);
            for (idx, want) in forced.iter().enumerate() {
                let j = self.grids[q - 1].push(&last, idx, grid)?;
                for (a, b) in want.iter().zip(&point.psi[q][j]) {
                    lf.0 += 1;
                    lf.1 = lf.1.max(self.spec.distance(a, b));
                }
            }
            conditions.push(ConditionReport {
                degree: q,
                condition: Condition::LastFace,
                samples: lf.0,
                max_violation: lf.1,
                pass: lf.1 <= tol,
            });
        }
        let max_violation = conditions
            .iter()
            .filter(|c| c.condition != Condition::Membership)
            .map(|c| c.max_violation)
            .fold(0.0, f64::max);
        Ok(ValidationReport {
            tol,
            pass: conditions.iter().all(|c| c.pass),
            max_violation,
            conditions,
        })
    }

    /// Completes degree-0 data to a full point, degree by degree.
    ///
    /// Degree `q` is filled by running from `e` (on face `q-1`) to the forced
    /// last-face value along the geodesic, pulled back through `η^{q-1}`;
    /// `wiggle > 0` adds an interior bump that vanishes on every face.
    pub fn extend<R: Rng + ?Sized>(
        &self,
        mut psi: Vec<Vec<Vec<GroupElement>>>,
        wiggle: f64,
        rng: &mut R,
    ) -> Result<RealizationPoint> {
        if psi.is_empty() {
            psi.push(vec![Vec::new()]);
        }
        if psi[0].len() != 1 || psi[0][0].len() != self.k.basis(0).len() {
            return Err(Error::GridMismatch("degree-0 data has the wrong shape".into()));
        }
        for q in psi.len()..=self.top_degree() {
            let layer = self.extend_degree(&psi, q, wiggle, rng)?;
            psi.push(layer);
        }
        self.from_parts(psi)
    }

    fn extend_degree<R: Rng + ?Sized>(
        &self,
        psi: &[Vec<Vec<GroupElement>>],
        q: usize,
        wiggle: f64,
        rng: &mut R,
    ) -> Result<Vec<Vec<GroupElement>>> {
        let n = self.k.basis(q).len();
        let grid = &self.grids[q];
        if n == 0 {
            return Ok(vec![Vec::new(); grid.len()]);
        }
        let forced = self.coface_last_partial(psi, q)?;
        let collapse = MonotoneMap::codegeneracy(q - 1, q - 1)?;
        let directions: Vec<[f64; 3]> = (0..n)
            .map(|_| self.spec.random_algebra(rng, 1.0))
            .collect();
        let m = grid.resolution() as f64;
        let mut layer = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let p = grid.point(idx);
            let below = grid.push(&collapse, idx, &self.grids[q - 1])?;
            let (a, b) = (p[q - 1], p[q]);
            let s = if a + b == 0 { 1.0 } else { a as f64 / (a + b) as f64 };
            let bump = wiggle
                * p.iter()
                    .map(|&k| (q + 1) as f64 * k as f64 / m)
                    .product::<f64>();
            let values = forced[below]
                .iter()
                .zip(&directions)
                .map(|(target, dir)| {
                    let base = if s == 1.0 {
                        *target
                    } else {
                        let v = self.spec.log(target);
                        self.spec.exp([s * v[0], s * v[1], s * v[2]])
                    };
                    if bump == 0.0 {
                        base
                    } else {
                        base.mul(&self.spec.exp([bump * dir[0], bump * dir[1], bump * dir[2]]))
                    }
                })
                .collect();
            layer.push(values);
        }
        Ok(layer)
    }

    /// A point with Haar-random degree-0 data.
    pub fn random_point<R: Rng + ?Sized>(&self, wiggle: f64, rng: &mut R) -> Result<RealizationPoint> {
        let psi0: Vec<GroupElement> = (0..self.k.basis(0).len()).map(|_| self.spec.random(rng)).collect();
        self.extend(vec![vec![psi0]], wiggle, rng)
    }

    /// The surface point `(w, φ)` with `φ` a path from `e` to `r(w)` sampled at
    /// `t = k/m`. Since `ψ_1` is trivial at `t_1 = 1` and forced on the last
    /// face `t_1 = 0`, it is `φ` run backwards.
    pub fn surface_point(&self, w: &[GroupElement], phi: &[GroupElement]) -> Result<RealizationPoint> {
        if self.top_degree() != 1 {
            return Err(Error::GridMismatch("surface points need a group of top degree 1".into()));
        }
        let m = self.resolution() as usize;
        if phi.len() != m + 1 {
            return Err(Error::GridMismatch(format!("path has {} samples, expected {}", phi.len(), m + 1)));
        }
        let psi1 = (0..=m).map(|k| vec![phi[m - k]]).collect();
        self.from_parts(vec![vec![w.to_vec()], psi1])
    }

    /// The path `φ` of a surface point (inverse of [`Realizer::surface_point`]).
    pub fn surface_path(&self, point: &RealizationPoint) -> Vec<GroupElement> {
        point.psi[1].iter().rev().map(|s| s[0]).collect()
    }

    pub fn to_file(&self, point: &RealizationPoint) -> RealizationFile {
        RealizationFile {
            group: self.spec.kind,
            m: point.m,
            degrees: point
                .psi
                .iter()
                .enumerate()
                .map(|(q, samples)| DegreeSamples {
                    degree: q,
                    generators: self.k.basis(q).iter().map(|c| c.name().to_string()).collect(),
                    samples: samples
                        .iter()
                        .map(|s| s.iter().map(|g| self.spec.to_matrix_json(g)).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(&self, file: &RealizationFile) -> Result<RealizationPoint> {
        if file.group != self.spec.kind && !(file.group == GroupKind::Su2 && self.spec.kind == GroupKind::So3) {
            return Err(Error::InvalidConfig(format!(
                "point is over {}, expected {}",
                file.group, self.spec.kind
            )));
        }
        if file.m != self.resolution() {
            return Err(Error::GridMismatch(format!("file has m = {}, expected {}", file.m, self.resolution())));
        }
        let mut psi = Vec::new();
        for (q, d) in file.degrees.iter().enumerate() {
            let names: Vec<&str> = self.k.basis(q).iter().map(|c| c.name()).collect();
            if d.degree != q || d.generators.iter().map(String::as_str).ne(names.iter().copied()) {
                return Err(Error::GridMismatch(format!("degree {q}: generator list mismatch")));
            }
            let layer = d
                .samples
                .iter()
                .map(|s| s.iter().map(|mj| self.spec.from_matrix_json(mj)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            psi.push(layer);
        }
        self.from_parts(psi)
    }
}

/// JSON layout of a realization point: per degree, row-major grid arrays of
/// matrices, one per generator of `X_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationFile {
    pub group: GroupKind,
    pub m: u32,
    pub degrees: Vec<DegreeSamples>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSamples {
    pub degree: usize,
    pub generators: Vec<String>,
    pub samples: Vec<Vec<MatrixJson>>,
}
