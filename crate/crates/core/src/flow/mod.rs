//! Discrete path energy on the surface fibre and its gradient descent.
//!
//! A path `φ` from `e` to `r(w)` is sampled at `t = k/m`. Its energy is
//! `E(φ) = m Σ |log(φ_k⁻¹ φ_{k+1})|²`, the Riemann sum of `∫ |φ⁻¹φ'|² dt`.
//! Descent moves interior samples by right multiplication `φ_k ← φ_k exp(-h d_k)`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupSpec, SampledPath};
use crate::realization::{classify_component, surface_relator, PathStrategy};

/// Left-trivialized algebra coordinates (only the first is used for U(1)).
type Coords = [f64; 3];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowMode {
    /// Holonomies `w` stay fixed; only the interior of `φ` moves.
    #[default]
    FixHolonomies,
    /// `w` moves as well, with the endpoint kept at `r(w)`.
    Joint,
}

impl FromStr for FlowMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fix-holonomies" => Ok(FlowMode::FixHolonomies),
            "joint" => Ok(FlowMode::Joint),
            _ => Err(Error::InvalidConfig(format!("unknown flow mode '{s}'"))),
        }
    }
}

/// Metric in which the gradient is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preconditioner {
    /// Plain gradient on interior samples.
    None,
    /// Gradient for the discrete `H¹` metric: the plain gradient divided by
    /// the Dirichlet Laplacian `2m · tridiag(-1, 2, -1)`.
    #[default]
    Sobolev,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub steps: usize,
    pub step_size: f64,
    pub m: usize,
    pub mode: FlowMode,
    pub stop_grad_norm: f64,
    pub preconditioner: Preconditioner,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            steps: 5000,
            step_size: 1.0,
            m: 64,
            mode: FlowMode::FixHolonomies,
            stop_grad_norm: 1e-9,
            preconditioner: Preconditioner::Sobolev,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "step size must be positive, got {}",
                self.step_size
            )));
        }
        if self.m < 8 {
            return Err(Error::InvalidConfig(format!("grid must have m >= 8, got {}", self.m)));
        }
        if self.stop_grad_norm.is_nan() || self.stop_grad_norm < 0.0 {
            return Err(Error::InvalidConfig("stop_grad_norm must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub path: SampledPath,
    pub holonomies: Vec<GroupElement>,
    pub trace: Vec<TracePoint>,
    pub converged: bool,
    /// No step size passed the line search; the energy is flat to rounding.
    pub stalled: bool,
    pub class_before: i64,
    pub class_after: i64,
    /// The class agreed with `class_before` after every accepted step.
    pub class_conserved: bool,
}

impl FlowResult {
    pub fn final_energy(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.energy)
    }

    pub fn grad_norm(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.grad_norm)
    }
}

/// `m Σ |log(φ_k⁻¹ φ_{k+1})|²` with `m = φ.len() - 1`.
pub fn energy(phi: &[GroupElement], spec: &GroupSpec) -> Result<f64> {
    if phi.len() < 2 {
        return Err(Error::GridMismatch("path needs at least two samples".into()));
    }
    spec.check_steps(phi)?;
    let m = (phi.len() - 1) as f64;
    Ok(m * phi
        .windows(2)
        .map(|w| spec.distance(&w[0], &w[1]).powi(2))
        .sum::<f64>())
}

/// Gradient of the energy at the interior samples, in left-trivialized
/// coordinates: `G_k = 2m (log(φ_{k-1}⁻¹ φ_k) + log(φ_{k+1}⁻¹ φ_k))`.
pub fn gradient(phi: &[GroupElement], spec: &GroupSpec) -> Vec<[f64; 3]> {
    let m = (phi.len() - 1) as f64;
    (1..phi.len() - 1)
        .map(|k| {
            let a = spec.log(&phi[k - 1].adjoint().mul(&phi[k]));
            let b = spec.log(&phi[k + 1].adjoint().mul(&phi[k]));
            std::array::from_fn(|i| 2.0 * m * (a[i] + b[i]))
        })
        .collect()
}

fn norm(g: &[[f64; 3]]) -> f64 {
    g.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `2m · tridiag(-1, 2, -1) d = g` componentwise (Thomas algorithm).
fn sobolev_direction(g: &[[f64; 3]], m: f64) -> Vec<[f64; 3]> {
    let n = g.len();
    let mut c = vec![0.0; n];
    let mut d = vec![[0.0; 3]; n];
    for k in 0..n {
        let denom = 2.0 + if k > 0 { c[k - 1] } else { 0.0 };
        c[k] = -1.0 / denom;
        for i in 0..3 {
            let prev = if k > 0 { d[k - 1][i] } else { 0.0 };
            d[k][i] = (g[k][i] + prev) / denom;
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        let next = d[k + 1];
        for (x, y) in d[k].iter_mut().zip(next) {
            *x -= c[k] * y;
        }
    }
    for v in &mut d {
        for x in v.iter_mut() {
            *x /= 2.0 * m;
        }
    }
    d
}

fn step_path(phi: &[GroupElement], dir: &[[f64; 3]], h: f64, spec: &GroupSpec) -> SampledPath {
    let mut out = phi.to_vec();
    for (k, d) in dir.iter().enumerate() {
        let moved = phi[k + 1].mul(&spec.exp([-h * d[0], -h * d[1], -h * d[2]]));
        out[k + 1] = spec.renormalize(&moved);
    }
    out
}

/// Energy as a function of the holonomies, with the endpoint pinned to `r(w)`.
fn joint_energy(w: &[GroupElement], phi: &[GroupElement], spec: &GroupSpec) -> Result<f64> {
    let mut p = phi.to_vec();
    *p.last_mut().expect("non-empty path") = surface_relator(w)?;
    energy(&p, spec)
}

/// Central-difference gradient of [`joint_energy`] in left-trivialized
/// coordinates of each holonomy.
fn holonomy_gradient(w: &[GroupElement], phi: &[GroupElement], spec: &GroupSpec) -> Result<Vec<[f64; 3]>> {
    const H: f64 = 1e-6;
    let dim = spec.algebra_dim();
    let mut out = vec![[0.0; 3]; w.len()];
    for j in 0..w.len() {
        for i in 0..dim {
            let mut e = [0.0; 3];
            e[i] = H;
            let mut plus = w.to_vec();
            plus[j] = w[j].mul(&spec.exp(e));
            e[i] = -H;
            let mut minus = w.to_vec();
            minus[j] = w[j].mul(&spec.exp(e));
            out[j][i] = (joint_energy(&plus, phi, spec)? - joint_energy(&minus, phi, spec)?) / (2.0 * H);
        }
    }
    Ok(out)
}

/// Path gradient and, in joint mode, holonomy gradient.
fn full_gradient(
    w: &[GroupElement],
    phi: &[GroupElement],
    mode: FlowMode,
    spec: &GroupSpec,
) -> Result<(Vec<Coords>, Vec<Coords>)> {
    let wg = match mode {
        FlowMode::FixHolonomies => Vec::new(),
        FlowMode::Joint => holonomy_gradient(w, phi, spec)?,
    };
    Ok((gradient(phi, spec), wg))
}

/// Gradient descent on the path energy with endpoints pinned to `e` and `r(w)`.
///
/// Each step tries `h = step_size` and halves it until the energy decreases
/// (or, within rounding of the current energy, the gradient shrinks) and all
/// steps stay below the injectivity bound; a step that
/// cannot be accepted after 40 halvings ends the run. Running out of steps
/// is reported through `converged = false`, not as an error.
pub fn descend(
    w: &[GroupElement],
    phi0: &[GroupElement],
    cfg: &FlowConfig,
    spec: &GroupSpec,
) -> Result<FlowResult> {
    cfg.validate()?;
    if phi0.len() != cfg.m + 1 {
        return Err(Error::GridMismatch(format!(
            "path has {} samples, grid needs {}",
            phi0.len(),
            cfg.m + 1
        )));
    }
    let class_before = classify_component(w, phi0, spec, PathStrategy::Geodesic)?;
    let mut w = w.to_vec();
    let mut phi = phi0.to_vec();
    let mut e = energy(&phi, spec)?;
    let m = cfg.m as f64;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut stalled = false;
    let mut class_conserved = true;
    let mut class_after = class_before;

    for step in 0..=cfg.steps {
        let (g, wg) = full_gradient(&w, &phi, cfg.mode, spec)?;
        let grad_norm = (norm(&g).powi(2) + norm(&wg).powi(2)).sqrt();
        trace.push(TracePoint {
            step,
            energy: e,
            grad_norm,
        });
        if grad_norm < cfg.stop_grad_norm {
            converged = true;
            break;
        }
        if step == cfg.steps {
            break;
        }
        let dir = match cfg.preconditioner {
            Preconditioner::None => g,
            Preconditioner::Sobolev => sobolev_direction(&g, m),
        };
        let wdir: Vec<[f64; 3]> = wg
            .iter()
            .map(|v| std::array::from_fn(|i| v[i] / (2.0 * m)))
            .collect();
        let mut h = cfg.step_size;
        let mut accepted = None;
        for _ in 0..40 {
            let mut cand = step_path(&phi, &dir, h, spec);
            let cand_w: Vec<GroupElement> = w
                .iter()
                .zip(&wdir)
                .map(|(x, d)| spec.renormalize(&x.mul(&spec.exp([-h * d[0], -h * d[1], -h * d[2]]))))
                .collect();
            let cand_w = if cfg.mode == FlowMode::Joint {
                *cand.last_mut().expect("non-empty path") = surface_relator(&cand_w)?;
                cand_w
            } else {
                w.clone()
            };
            if let Ok(ce) = energy(&cand, spec) {
                // Near the minimum the energy stops changing in floating point;
                // there a smaller gradient decides.
                let accept = ce < e
                    || (ce <= e && {
                        let (cg, cwg) = full_gradient(&cand_w, &cand, cfg.mode, spec)?;
                        (norm(&cg).powi(2) + norm(&cwg).powi(2)).sqrt() < grad_norm
                    });
                if accept {
                    accepted = Some((cand, cand_w, ce));
                    break;
                }
            }
            h *= 0.5;
        }
        let Some((cand, cand_w, ce)) = accepted else {
            stalled = true;
            break;
        };
        phi = cand;
        w = cand_w;
        e = ce;
        class_after = classify_component(&w, &phi, spec, PathStrategy::Geodesic)?;
        class_conserved &= class_after == class_before;
    }

    if let Some(last) = trace.last_mut() {
        last.energy = e;
    }
    Ok(FlowResult {
        path: phi,
        holonomies: w,
        trace,
        converged,
        stalled,
        class_before,
        class_after,
        class_conserved,
    })
}

/// Energy trace as CSV with header `step,energy,grad_norm`.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("step,energy,grad_norm\n");
    for t in trace {
        let _ = writeln!(out, "{},{:.17e},{:.17e}", t.step, t.energy, t.grad_norm);
    }
    out
}
