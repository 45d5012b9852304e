//! Compactly supported test fields `w: domain → R³` for variations of Φ.
//!
//! The profile is the degree-6 polynomial `b(u) = (1 − u²)³` on `|u| < 1`, which is C² across
//! the edge of its support.

use serde::Serialize;

use super::{CylinderEnd, ImmersionChart};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldDirection {
    Constant([f64; 3]),
    /// The Gauss map of the chart being varied.
    Normal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestField {
    Zero,
    /// `b((x − cx)/ρx)·b((y − cy)/ρy)` times a direction.
    Bump { center: [f64; 2], radius: [f64; 2], direction: FieldDirection },
    /// `b(|x|/ρ)` in the disk coordinate of a puncture; its support contains the puncture.
    RadialBump { puncture: usize, rho: f64, direction: FieldDirection },
    Combination(Vec<(f64, TestField)>),
}

fn profile<T: Real>(u: &Jet2<T>) -> Jet2<T> {
    let v = (*u * *u).scale(-T::one()).add_const(T::one());
    v * v * v
}

fn wrap(d: f64, period: f64) -> f64 {
    let mut d = d % period;
    if d > 0.5 * period {
        d -= period;
    } else if d <= -0.5 * period {
        d += period;
    }
    d
}

/// Unit normal jets of a chart at `pt`, of the given order.
pub fn normal_jets<T: Real>(chart: &ImmersionChart, pt: [f64; 2], order: usize) -> Result<[Jet2<T>; 3]> {
    let phi = chart.eval::<T>(pt, order + 1)?;
    let d = |i: usize| -> Result<[Jet2<T>; 3]> {
        let f = |c: &Jet2<T>| if i == 0 { c.dx() } else { c.dy() };
        Ok([f(&phi[0])?, f(&phi[1])?, f(&phi[2])?])
    };
    let (a, b) = (d(0)?, d(1)?);
    let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt().map_err(|_| Error::DegenerateChart { point: pt })?;
    let s = len.recip()?.scale(T::c(chart.orientation));
    Ok([n[0] * s, n[1] * s, n[2] * s])
}

impl TestField {
    pub fn bump(center: [f64; 2], radius: [f64; 2], direction: FieldDirection) -> Self {
        TestField::Bump { center, radius, direction }
    }

    fn directed<T: Real>(
        amp: Jet2<T>,
        direction: &FieldDirection,
        chart: &ImmersionChart,
        pt: [f64; 2],
        order: usize,
    ) -> Result<[Jet2<T>; 3]> {
        Ok(match direction {
            FieldDirection::Constant(v) => [amp.scale(T::c(v[0])), amp.scale(T::c(v[1])), amp.scale(T::c(v[2]))],
            FieldDirection::Normal => {
                let n = normal_jets::<T>(chart, pt, order)?;
                [amp * n[0], amp * n[1], amp * n[2]]
            }
        })
    }

    /// Jets of `w` at `pt`.
    pub fn eval<T: Real>(&self, chart: &ImmersionChart, pt: [f64; 2], order: usize) -> Result<[Jet2<T>; 3]> {
        let zero = || [Jet2::zero(order), Jet2::zero(order), Jet2::zero(order)];
        match self {
            TestField::Zero => Ok(zero()),
            TestField::Bump { center, radius, direction } => {
                let per = chart.domain.periodic();
                let (xr, yr) = (chart.domain.x_range(), chart.domain.y_range());
                let mut dx = pt[0] - center[0];
                let mut dy = pt[1] - center[1];
                if per[0] {
                    dx = wrap(dx, xr[1] - xr[0]);
                }
                if per[1] {
                    dy = wrap(dy, yr[1] - yr[0]);
                }
                let (u0, v0) = (dx / radius[0], dy / radius[1]);
                if u0.abs() >= 1.0 || v0.abs() >= 1.0 {
                    return Ok(zero());
                }
                let u = Jet2::var_x(T::c(dx), order).scale(T::c(1.0 / radius[0]));
                let v = Jet2::var_y(T::c(dy), order).scale(T::c(1.0 / radius[1]));
                Self::directed(profile(&u) * profile(&v), direction, chart, pt, order)
            }
            TestField::RadialBump { puncture, rho, direction } => {
                let p = chart.puncture(*puncture)?;
                let r = p.radius_of(pt);
                if r >= *rho {
                    return Ok(zero());
                }
                let s = match p.end {
                    CylinderEnd::Upper => -2.0,
                    CylinderEnd::Lower => 2.0,
                };
                let r2 = Jet2::var_x(T::c(pt[0]), order).scale(T::c(s)).exp().scale(T::c(1.0 / (rho * rho)));
                let v = r2.scale(-T::one()).add_const(T::one());
                Self::directed(v * v * v, direction, chart, pt, order)
            }
            TestField::Combination(parts) => {
                let mut acc = zero();
                for (c, f) in parts {
                    let w = f.eval::<T>(chart, pt, order)?;
                    for i in 0..3 {
                        acc[i] += w[i].scale(T::c(*c));
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Bounding box `[x-range, y-range]` of the support in chart coordinates.
    pub fn support(&self, chart: &ImmersionChart) -> Result<[[f64; 2]; 2]> {
        let per = chart.domain.periodic();
        let (xr, yr) = (chart.domain.x_range(), chart.domain.y_range());
        match self {
            TestField::Zero => Ok([[xr[0], xr[0]], [yr[0], yr[0]]]),
            TestField::Bump { center, radius, .. } => {
                let bx = [center[0] - radius[0], center[0] + radius[0]];
                let by = [center[1] - radius[1], center[1] + radius[1]];
                let inside = |b: [f64; 2], r: [f64; 2], periodic: bool| {
                    if periodic {
                        b[1] - b[0] < r[1] - r[0]
                    } else {
                        b[0] > r[0] && b[1] < r[1]
                    }
                };
                if !(radius[0] > 0.0 && radius[1] > 0.0) || !inside(bx, xr, per[0]) || !inside(by, yr, per[1]) {
                    return Err(Error::SupportTouchesBoundary);
                }
                Ok([bx, by])
            }
            TestField::RadialBump { puncture, rho, .. } => {
                let p = chart.puncture(*puncture)?;
                if !(*rho > chart.r_min) || *rho > p.radius {
                    return Err(Error::SupportTouchesBoundary);
                }
                let t = p.t_of_radius(*rho);
                let bx = match p.end {
                    CylinderEnd::Upper => [t, xr[1]],
                    CylinderEnd::Lower => [xr[0], t],
                };
                if !(bx[0] >= xr[0] && bx[1] <= xr[1] && bx[0] < bx[1]) {
                    return Err(Error::SupportTouchesBoundary);
                }
                Ok([bx, yr])
            }
            TestField::Combination(parts) => {
                let mut b: Option<[[f64; 2]; 2]> = None;
                for (_, f) in parts {
                    if matches!(f, TestField::Zero) {
                        continue;
                    }
                    let s = f.support(chart)?;
                    b = Some(match b {
                        None => s,
                        Some(o) => [
                            [o[0][0].min(s[0][0]), o[0][1].max(s[0][1])],
                            [o[1][0].min(s[1][0]), o[1][1].max(s[1][1])],
                        ],
                    });
                }
                Ok(b.unwrap_or([[xr[0], xr[0]], [yr[0], yr[0]]]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::zoo;

    #[test]
    fn bump_profile_is_c2_at_edge() {
        let c = zoo("ellipsoid", &[1.0, 1.0, 2.0]).unwrap();
        let f = TestField::bump([0.0, 1.0], [0.5, 0.5], FieldDirection::Constant([0.0, 0.0, 1.0]));
        let w = f.eval::<f64>(&c, [0.5 - 1e-6, 1.0], 2).unwrap();
        assert!(w[2].value().abs() < 1e-15);
        assert!(w[2].derivative(1, 0).abs() < 1e-9);
        assert!(w[2].derivative(2, 0).abs() < 1e-3);
        let w = f.eval::<f64>(&c, [0.0, 1.0], 2).unwrap();
        assert_eq!(w[2].value(), 1.0);
    }

    #[test]
    fn support_checks() {
        let c = zoo("ellipsoid", &[1.0, 1.0, 2.0]).unwrap();
        let xr = c.domain.x_range();
        let f = TestField::bump([xr[1] - 0.1, 0.0], [0.5, 0.5], FieldDirection::Normal);
        assert_eq!(f.support(&c), Err(Error::SupportTouchesBoundary));
        let ic = zoo("inverted-catenoid", &[]).unwrap();
        let r = TestField::RadialBump { puncture: 0, rho: 0.1, direction: FieldDirection::Normal };
        let s = r.support(&ic).unwrap();
        assert!((s[0][0] - 0.1f64.ln().abs()).abs() < 1e-12);
    }

    #[test]
    fn normal_field_is_unit() {
        let c = zoo("sphere", &[]).unwrap();
        let n = normal_jets::<f64>(&c, [0.3, 0.2], 2).unwrap();
        let p = c.point([0.3, 0.2]).unwrap();
        for i in 0..3 {
            assert!((n[i].value() - p[i]).abs() < 1e-14);
        }
    }
}
