use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{GenRef, GroupValue, Word};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Multiplications between re-unitarizations in [`GroupSpec::eval_word`].
pub const RENORMALIZE_EVERY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    U1,
    Su2,
    So3,
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u1" => Ok(GroupKind::U1),
            "su2" => Ok(GroupKind::Su2),
            "so3" => Ok(GroupKind::So3),
            other => Err(Error::InvalidConfig(format!("unknown group `{other}`"))),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::U1 => "u1",
            GroupKind::Su2 => "su2",
            GroupKind::So3 => "so3",
        })
    }
}

/// An element of U(1), SU(2), or SO(3) (stored as an SU(2) lift).
///
/// U(1) elements are embedded as `diag(z, 1)`, so the same 2×2 product serves
/// all three groups.
#[derive(Clone, Copy, PartialEq)]
pub struct GroupElement {
    m: [[Complex64; 2]; 2],
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn u1(angle: f64) -> Self {
        GroupElement {
            m: [[Complex64::from_polar(1.0, angle), ZERO], [ZERO, ONE]],
        }
    }

    /// `a·1 + i(b σ1 + c σ2 + d σ3)`; the quaternion need not be normalized.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let [a, b, c, d] = q;
        GroupElement {
            m: [
                [Complex64::new(a, d), Complex64::new(c, b)],
                [Complex64::new(-c, b), Complex64::new(a, -d)],
            ],
        }
    }

    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Self {
        GroupElement { m }
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    /// Quaternion coordinates of a 2×2 element (least-squares for drifted input).
    pub fn quaternion(&self) -> [f64; 4] {
        let m = &self.m;
        [
            (m[0][0].re + m[1][1].re) / 2.0,
            (m[0][1].im + m[1][0].im) / 2.0,
            (m[0][1].re - m[1][0].re) / 2.0,
            (m[0][0].im - m[1][1].im) / 2.0,
        ]
    }

    pub fn phase(&self) -> Complex64 {
        self.m[0][0]
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let a = &self.m;
        let b = &other.m;
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        GroupElement { m: out }
    }

    /// Conjugate transpose, which is the inverse on unitary matrices.
    pub fn adjoint(&self) -> GroupElement {
        let m = &self.m;
        GroupElement {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn neg(&self) -> GroupElement {
        let m = &self.m;
        GroupElement {
            m: [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]],
        }
    }

    /// Frobenius distance between matrices.
    pub fn frobenius_distance(&self, other: &GroupElement) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (self.m[i][j] - other.m[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.m;
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl GroupValue for GroupElement {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        self.adjoint()
    }
}

/// Matrix JSON form: rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

/// Which group, and the tolerance used for every equality decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub tol: f64,
}

impl GroupSpec {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(kind: GroupKind) -> Self {
        GroupSpec {
            kind,
            tol: Self::DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Real dimension of the Lie algebra.
    pub fn algebra_dim(&self) -> usize {
        match self.kind {
            GroupKind::U1 => 1,
            _ => 3,
        }
    }

    /// Exponential of an algebra vector. For U(1) only `v[0]` is used (the
    /// angle); for SU(2)/SO(3), `v` is `θ n` with `exp = cos θ + i sin θ (n·σ)`.
    pub fn exp(&self, v: [f64; 3]) -> GroupElement {
        match self.kind {
            GroupKind::U1 => GroupElement::u1(v[0]),
            _ => {
                let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if theta < 1e-300 {
                    return GroupElement::identity();
                }
                let s = theta.sin() / theta;
                GroupElement::from_quaternion([theta.cos(), s * v[0], s * v[1], s * v[2]])
            }
        }
    }

    /// Principal logarithm. At `-1` in SU(2) the k-axis is chosen. For SO(3)
    /// the lift closer to `+1` is used.
    pub fn log(&self, g: &GroupElement) -> [f64; 3] {
        match self.kind {
            GroupKind::U1 => [g.phase().arg(), 0.0, 0.0],
            GroupKind::Su2 | GroupKind::So3 => {
                let mut q = g.quaternion();
                if self.kind == GroupKind::So3 && q[0] < 0.0 {
                    q = [-q[0], -q[1], -q[2], -q[3]];
                }
                let vn = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
                let theta = vn.atan2(q[0]);
                if vn < 1e-300 {
                    return if q[0] < 0.0 {
                        [0.0, 0.0, std::f64::consts::PI]
                    } else {
                        [0.0; 3]
                    };
                }
                let s = theta / vn;
                [s * q[1], s * q[2], s * q[3]]
            }
        }
    }

    /// Bi-invariant norm of `log g`: the U(1) angle, or the SU(2) half-angle
    /// (Frobenius norm of the algebra element divided by √2).
    pub fn log_norm(&self, g: &GroupElement) -> f64 {
        let v = self.log(g);
        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
    }

    /// Geodesic distance `|log(a⁻¹ b)|`.
    pub fn distance(&self, a: &GroupElement, b: &GroupElement) -> f64 {
        self.log_norm(&a.adjoint().mul(b))
    }

    pub fn approx_eq(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.distance(a, b) <= self.tol
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        self.distance(&GroupElement::identity(), g) <= self.tol
    }

    /// Deviation from the group: unitarity, determinant, and shape defects.
    pub fn drift(&self, g: &GroupElement) -> f64 {
        let m = g.matrix();
        match self.kind {
            GroupKind::U1 => {
                let off = m[0][1].norm() + m[1][0].norm() + (m[1][1] - ONE).norm();
                (m[0][0].norm() - 1.0).abs() + off
            }
            _ => {
                let p = g.mul(&g.adjoint());
                let unit = p.frobenius_distance(&GroupElement::identity());
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let special = m[1][1] - m[0][0].conj();
                let special2 = m[1][0] + m[0][1].conj();
                unit + (det - ONE).norm() + special.norm() + special2.norm()
            }
        }
    }

    /// Nearest group element (polar projection).
    pub fn renormalize(&self, g: &GroupElement) -> GroupElement {
        match self.kind {
            GroupKind::U1 => {
                let z = g.phase();
                let n = z.norm();
                if n < 1e-300 {
                    GroupElement::identity()
                } else {
                    GroupElement::u1(z.arg())
                }
            }
            _ => {
                let q = g.quaternion();
                let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n < 1e-300 {
                    GroupElement::identity()
                } else {
                    GroupElement::from_quaternion([q[0] / n, q[1] / n, q[2] / n, q[3] / n])
                }
            }
        }
    }

    /// Checks group membership within the tolerance.
    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        let d = self.drift(g);
        if d > 10.0 * self.tol {
            return Err(Error::Renormalization {
                drift: d,
                limit: 10.0 * self.tol,
            });
        }
        Ok(())
    }

    /// Homomorphic evaluation of a word, re-unitarizing every
    /// [`RENORMALIZE_EVERY`] multiplications.
    pub fn eval_word<F>(&self, w: &Word, mut assignment: F) -> Result<GroupElement>
    where
        F: FnMut(&GenRef) -> Option<GroupElement>,
    {
        let mut acc = GroupElement::identity();
        for (k, l) in w.letters().iter().enumerate() {
            let g = assignment(&l.gen).ok_or_else(|| Error::UnboundGenerator(l.gen.to_string()))?;
            acc = acc.mul(&if l.inverse { g.adjoint() } else { g });
            if (k + 1) % RENORMALIZE_EVERY == 0 {
                self.validate(&acc)?;
                acc = self.renormalize(&acc);
            }
        }
        self.validate(&acc)?;
        Ok(acc)
    }

    /// Haar-random element (uniform angle for U(1), uniform unit quaternion otherwise).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match self.kind {
            GroupKind::U1 => GroupElement::u1(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)),
            _ => loop {
                let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-3 && n <= 1.0 {
                    break GroupElement::from_quaternion([q[0] / n, q[1] / n, q[2] / n, q[3] / n]);
                }
            },
        }
    }

    /// Random algebra vector with entries in `[-scale, scale]`.
    pub fn random_algebra<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> [f64; 3] {
        let mut v = [0.0; 3];
        for x in v.iter_mut().take(self.algebra_dim()) {
            *x = rng.gen_range(-scale..=scale);
        }
        v
    }

    pub fn to_matrix_json(&self, g: &GroupElement) -> MatrixJson {
        let pair = |z: Complex64| [z.re, z.im];
        match self.kind {
            GroupKind::U1 => vec![vec![pair(g.phase())]],
            _ => g.m.iter().map(|row| row.iter().map(|&z| pair(z)).collect()).collect(),
        }
    }

    pub fn from_matrix_json(&self, m: &MatrixJson) -> Result<GroupElement> {
        let c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        let shape: Vec<usize> = m.iter().map(Vec::len).collect();
        let g = match (self.kind, shape.as_slice()) {
            (GroupKind::U1, [1]) => GroupElement {
                m: [[c(m[0][0]), ZERO], [ZERO, ONE]],
            },
            (GroupKind::Su2 | GroupKind::So3, [2, 2]) => GroupElement {
                m: [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]],
            },
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "matrix of shape {shape:?} does not fit {}",
                    self.kind
                )))
            }
        };
        self.validate(&g)?;
        Ok(g)
    }
}

/// The quaternion units `i, j, k` as elements of SU(2).
pub fn quaternion_units() -> [GroupElement; 3] {
    [
        GroupElement::from_quaternion([0.0, 1.0, 0.0, 0.0]),
        GroupElement::from_quaternion([0.0, 0.0, 1.0, 0.0]),
        GroupElement::from_quaternion([0.0, 0.0, 0.0, 1.0]),
    ]
}
