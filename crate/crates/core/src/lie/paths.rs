//! Sampled paths in the group: geodesics and fundamental-group classes of loops.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupKind, GroupSpec};

/// Samples `path[k]` at `t = k / m`, `m + 1` samples in total.
pub type SampledPath = Vec<GroupElement>;

/// Largest admissible angle between adjacent samples.
pub const MAX_STEP_ANGLE: f64 = PI / 2.0;

impl GroupSpec {
    /// `t ↦ exp(t log g)` on `m + 1` samples.
    pub fn geodesic_path(&self, g: &GroupElement, m: usize) -> SampledPath {
        let v = self.log(g);
        let mut path: SampledPath = (0..=m)
            .map(|k| {
                let t = k as f64 / m as f64;
                self.exp([t * v[0], t * v[1], t * v[2]])
            })
            .collect();
        // The endpoint is the target itself, not its exp-log round trip.
        if let Some(last) = path.last_mut() {
            if self.kind != GroupKind::So3 {
                *last = *g;
            }
        }
        path
    }

    /// Angle of the step `a⁻¹ b`, modulo the centre for SO(3).
    fn step_angle(&self, a: &GroupElement, b: &GroupElement) -> f64 {
        let d = self.log_norm(&a.adjoint().mul(b));
        match self.kind {
            GroupKind::So3 => d.min(PI - d),
            _ => d,
        }
    }

    /// Rejects paths whose adjacent samples are too far apart to be joined
    /// unambiguously.
    pub fn check_steps(&self, path: &[GroupElement]) -> Result<()> {
        for (k, w) in path.windows(2).enumerate() {
            let angle = self.step_angle(&w[0], &w[1]);
            if angle >= MAX_STEP_ANGLE {
                return Err(Error::StepTooCoarse { index: k, angle });
            }
        }
        Ok(())
    }

    /// Class in `π₁(G)` of a closed sampled loop at the identity: the winding
    /// number for U(1), `0` for SU(2), and `0`/`1` for SO(3) (endpoint of the
    /// continuous SU(2) lift).
    pub fn loop_class(&self, samples: &[GroupElement]) -> Result<i64> {
        let (first, last) = match (samples.first(), samples.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::LoopNotClosed(f64::INFINITY)),
        };
        for end in [first, last] {
            let d = self.distance(&GroupElement::identity(), end);
            if d > self.tol {
                return Err(Error::LoopNotClosed(d));
            }
        }
        self.check_steps(samples)?;
        match self.kind {
            GroupKind::Su2 => Ok(0),
            GroupKind::U1 => {
                let total: f64 = samples
                    .windows(2)
                    .map(|w| (w[0].phase().conj() * w[1].phase()).arg())
                    .sum();
                Ok((total / (2.0 * PI)).round() as i64)
            }
            GroupKind::So3 => {
                let mut cur = *first;
                if cur.quaternion()[0] < 0.0 {
                    cur = cur.neg();
                }
                for next in &samples[1..] {
                    let overlap = quat_dot(&cur, next);
                    cur = if overlap >= 0.0 { *next } else { next.neg() };
                }
                Ok(if cur.quaternion()[0] < 0.0 { 1 } else { 0 })
            }
        }
    }

    /// Left translation of every sample by `g`.
    pub fn translate(&self, g: &GroupElement, path: &[GroupElement]) -> SampledPath {
        path.iter().map(|p| g.mul(p)).collect()
    }

    /// Pointwise product of two paths on the same grid.
    pub fn pointwise_product(&self, a: &[GroupElement], b: &[GroupElement]) -> Result<SampledPath> {
        if a.len() != b.len() {
            return Err(Error::GridMismatch(format!("{} vs {} samples", a.len(), b.len())));
        }
        Ok(a.iter().zip(b).map(|(x, y)| x.mul(y)).collect())
    }
}

fn quat_dot(a: &GroupElement, b: &GroupElement) -> f64 {
    let (p, q) = (a.quaternion(), b.quaternion());
    p.iter().zip(q.iter()).map(|(x, y)| x * y).sum()
}
