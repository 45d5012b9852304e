//! Surfaces in S³ ⊂ R⁴ and the stereographic maps between S³ and R³.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use super::{zoo, Domain2, Evaluator, ImmersionChart};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum S3Surface {
    /// Equatorial great sphere `y₄ = 0`.
    GreatSphere,
    /// Latitude sphere `y₄ = h`.
    SmallSphere { h: f64 },
    /// `(cos u, sin u, cos v, sin v)/√2`.
    CliffordTorus,
    /// Clifford torus rotated by `angle` in the `(y₂, y₄)` plane.
    TiltedClifford { angle: f64 },
}

impl S3Surface {
    pub fn zoo() -> Vec<S3Surface> {
        vec![
            S3Surface::GreatSphere,
            S3Surface::SmallSphere { h: 0.5 },
            S3Surface::CliffordTorus,
            S3Surface::TiltedClifford { angle: 0.3 },
        ]
    }

    pub fn domain(&self) -> Domain2 {
        match self {
            S3Surface::GreatSphere | S3Surface::SmallSphere { .. } => Domain2::cylinder(-zoo::SPHERE_T, zoo::SPHERE_T),
            S3Surface::CliffordTorus | S3Surface::TiltedClifford { .. } => Domain2::flat_torus(2.0 * PI, 2.0 * PI),
        }
    }

    pub fn label(&self) -> String {
        match self {
            S3Surface::GreatSphere => "great-sphere".into(),
            S3Surface::SmallSphere { h } => format!("small-sphere({h})"),
            S3Surface::CliffordTorus => "clifford-torus".into(),
            S3Surface::TiltedClifford { angle } => format!("tilted-clifford({angle})"),
        }
    }

    pub fn eval<T: Real>(&self, x: &Jet2<T>, y: &Jet2<T>) -> Result<[Jet2<T>; 4]> {
        Ok(match *self {
            S3Surface::GreatSphere => {
                let s = zoo::sphere(x, y);
                [s[0], s[1], s[2], Jet2::zero(x.order())]
            }
            S3Surface::SmallSphere { h } => {
                if !(h.abs() < 1.0) {
                    return Err(Error::InvalidParams { surface: "small-sphere".into(), reason: "needs |h| < 1".into() });
                }
                let r = T::c((1.0 - h * h).sqrt());
                let s = zoo::sphere(x, y);
                [s[0].scale(r), s[1].scale(r), s[2].scale(r), Jet2::constant(T::c(h), x.order())]
            }
            S3Surface::CliffordTorus => clifford(x, y),
            S3Surface::TiltedClifford { angle } => {
                let c = clifford(x, y);
                let (s, co) = (T::c(angle.sin()), T::c(angle.cos()));
                [c[0], c[1].scale(co) - c[3].scale(s), c[2], c[1].scale(s) + c[3].scale(co)]
            }
        })
    }

    /// R³ chart of `π∘Ψ`.
    pub fn projected_chart(&self) -> ImmersionChart {
        ImmersionChart::new(format!("stereo({})", self.label()), self.domain(), Evaluator::Stereographic(*self))
            .with_conformal(true)
    }
}

fn clifford<T: Real>(u: &Jet2<T>, v: &Jet2<T>) -> [Jet2<T>; 4] {
    let s = T::c(FRAC_1_SQRT_2);
    [u.cos().scale(s), u.sin().scale(s), v.cos().scale(s), v.sin().scale(s)]
}

/// `π(y) = (y₁, y₂, y₃)/(1 − y₄)`, projection from the north pole `(0,0,0,1)`.
pub fn stereographic_projection<T: Real>(y: &[Jet2<T>; 4]) -> Result<[Jet2<T>; 3]> {
    let d = y[3].scale(-T::one()).add_const(T::one());
    if d.value().abs() <= T::c(1e-300) {
        return Err(Error::NorthPole);
    }
    let inv = d.recip()?;
    Ok([y[0] * inv, y[1] * inv, y[2] * inv])
}

/// `ω(x) = (2x, |x|² − 1)/(|x|² + 1)`, inverse of [`stereographic_projection`].
pub fn inverse_stereographic<T: Real>(x: &[Jet2<T>; 3]) -> [Jet2<T>; 4] {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let inv = r2.add_const(T::one()).recip_unchecked();
    let two = T::c(2.0);
    [(x[0] * inv).scale(two), (x[1] * inv).scale(two), (x[2] * inv).scale(two), r2.add_const(-T::one()) * inv]
}

pub fn stereographic_point(y: [f64; 4]) -> Result<[f64; 3]> {
    let d = 1.0 - y[3];
    if d.abs() <= 1e-300 {
        return Err(Error::NorthPole);
    }
    Ok([y[0] / d, y[1] / d, y[2] / d])
}

pub fn inverse_stereographic_point(x: [f64; 3]) -> [f64; 4] {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let d = r2 + 1.0;
    [2.0 * x[0] / d, 2.0 * x[1] / d, 2.0 * x[2] / d, (r2 - 1.0) / d]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_of_origin_is_south_pole() {
        assert_eq!(inverse_stereographic_point([0.0; 3]), [0.0, 0.0, 0.0, -1.0]);
        assert_eq!(stereographic_point([0.0, 0.0, 0.0, 1.0]), Err(Error::NorthPole));
    }

    #[test]
    fn s3_zoo_lies_on_unit_sphere() {
        for s in S3Surface::zoo() {
            let x = Jet2::<f64>::var_x(0.7, 0);
            let y = Jet2::<f64>::var_y(2.1, 0);
            let p = s.eval(&x, &y).unwrap();
            let n: f64 = p.iter().map(|c| c.value() * c.value()).sum();
            assert!((n - 1.0).abs() < 1e-15, "{s:?}");
        }
    }
}
