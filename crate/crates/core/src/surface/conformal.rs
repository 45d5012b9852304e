//! Möbius transformations of R³ as explicit factor lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;

/// One factor of a conformal map of R³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mobius {
    Translation([f64; 3]),
    Dilation(f64),
    /// Orthogonal 3×3 matrix, rows first.
    Rotation([[f64; 3]; 3]),
    /// Unit-radius inversion `x ↦ (x − c)/|x − c|² + c`.
    Inversion([f64; 3]),
}

impl Mobius {
    fn validate(&self) -> Result<()> {
        match *self {
            Mobius::Translation(v) | Mobius::Inversion(v) => {
                if v.iter().all(|x| x.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::NonInvertible(format!("non-finite vector {v:?}")))
                }
            }
            Mobius::Dilation(s) => {
                if s > 0.0 && s.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonInvertible(format!("dilation factor {s} must be positive")))
                }
            }
            Mobius::Rotation(r) => {
                let mut defect: f64 = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        let d: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        defect = defect.max((d - want).abs());
                    }
                }
                if defect <= 1e-10 {
                    Ok(())
                } else {
                    Err(Error::NonInvertible(format!("matrix not orthogonal (defect {defect:e})")))
                }
            }
        }
    }

    pub fn inverse(&self) -> Mobius {
        match *self {
            Mobius::Translation(v) => Mobius::Translation([-v[0], -v[1], -v[2]]),
            Mobius::Dilation(s) => Mobius::Dilation(1.0 / s),
            Mobius::Rotation(r) => {
                let mut t = [[0.0; 3]; 3];
                for (i, row) in t.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = r[j][i];
                    }
                }
                Mobius::Rotation(t)
            }
            Mobius::Inversion(c) => Mobius::Inversion(c),
        }
    }
}

/// Composition of Möbius factors, applied left to right.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConformalMap3 {
    factors: Vec<Mobius>,
}

/// Relative distance below which a point counts as hitting an inversion center.
const COLLISION_TOL: f64 = 1e-13;

impl ConformalMap3 {
    pub fn new(factors: Vec<Mobius>) -> Result<Self> {
        for f in &factors {
            f.validate()?;
        }
        Ok(ConformalMap3 { factors })
    }

    pub fn identity() -> Self {
        ConformalMap3 { factors: Vec::new() }
    }

    pub fn single(f: Mobius) -> Result<Self> {
        Self::new(vec![f])
    }

    pub fn factors(&self) -> &[Mobius] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// `later ∘ self`: first apply `self`, then `later`.
    pub fn then(&self, later: &ConformalMap3) -> ConformalMap3 {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&later.factors);
        ConformalMap3 { factors }
    }

    pub fn inverse(&self) -> ConformalMap3 {
        ConformalMap3 { factors: self.factors.iter().rev().map(Mobius::inverse).collect() }
    }

    pub fn inversion_centers(&self) -> Vec<[f64; 3]> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                Mobius::Inversion(c) => Some(*c),
                _ => None,
            })
            .collect()
    }

    /// Image of a point; `None` if it hits an inversion center.
    pub fn apply_point(&self, x: [f64; 3]) -> Option<[f64; 3]> {
        let mut p = x;
        for f in &self.factors {
            p = match *f {
                Mobius::Translation(v) => [p[0] + v[0], p[1] + v[1], p[2] + v[2]],
                Mobius::Dilation(s) => [s * p[0], s * p[1], s * p[2]],
                Mobius::Rotation(r) => {
                    let mut q = [0.0; 3];
                    for (i, qi) in q.iter_mut().enumerate() {
                        *qi = r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2];
                    }
                    q
                }
                Mobius::Inversion(c) => {
                    let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
                    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                    let scale = 1.0 + c.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if d2.sqrt() <= COLLISION_TOL * scale {
                        return None;
                    }
                    [d[0] / d2 + c[0], d[1] / d2 + c[1], d[2] / d2 + c[2]]
                }
            };
        }
        Some(p)
    }

    /// Applies the map to jets of a point; `point` is only used in the error.
    pub fn apply_jets<T: Real>(&self, x: &[Jet2<T>; 3], point: [f64; 2]) -> Result<[Jet2<T>; 3]> {
        let mut p = *x;
        for f in &self.factors {
            p = match *f {
                Mobius::Translation(v) => {
                    [p[0].add_const(T::c(v[0])), p[1].add_const(T::c(v[1])), p[2].add_const(T::c(v[2]))]
                }
                Mobius::Dilation(s) => {
                    let s = T::c(s);
                    [p[0].scale(s), p[1].scale(s), p[2].scale(s)]
                }
                Mobius::Rotation(r) => {
                    let row = |i: usize| {
                        p[0].scale(T::c(r[i][0])) + p[1].scale(T::c(r[i][1])) + p[2].scale(T::c(r[i][2]))
                    };
                    [row(0), row(1), row(2)]
                }
                Mobius::Inversion(c) => {
                    let d = [
                        p[0].add_const(T::c(-c[0])),
                        p[1].add_const(T::c(-c[1])),
                        p[2].add_const(T::c(-c[2])),
                    ];
                    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                    let scale = 1.0 + c.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if d2.value().sqrt().f64() <= COLLISION_TOL * scale {
                        return Err(Error::InversionCollision { point, center: c });
                    }
                    let inv = d2.recip_unchecked();
                    [
                        (d[0] * inv).add_const(T::c(c[0])),
                        (d[1] * inv).add_const(T::c(c[1])),
                        (d[2] * inv).add_const(T::c(c[2])),
                    ]
                }
            };
        }
        Ok(p)
    }
}

/// Rotation matrix about a unit axis by `angle` (Rodrigues).
pub fn axis_rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}
