//! Parametrized surfaces: domains, charts, punctures and their evaluators.

pub mod conformal;
pub mod dsl;
pub mod field;
pub mod s3;
pub mod zoo;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;

pub use conformal::{ConformalMap3, Mobius};
pub use dsl::{parse_immersion, ImmersionExpr};
pub use field::{FieldDirection, TestField};
pub use s3::S3Surface;
pub use zoo::{zoo, ZooSurface};

/// Default exclusion radius around punctures.
pub const DEFAULT_R_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainKind {
    /// `[x0, x1] × [y0, y1]`, no periodicity.
    Rectangle { x: [f64; 2], y: [f64; 2] },
    /// `[0, px) × [0, py)` with both axes periodic.
    FlatTorus { px: f64, py: f64 },
    /// `[t_min, t_max] × S¹`, angle periodic.
    Cylinder { t_min: f64, t_max: f64 },
    /// Cylinder coordinates of a punctured disk, `(t, φ) ↦ e^{−t+iφ}` with `0 ≤ t_min`.
    PuncturedDisk { t_min: f64, t_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain2 {
    pub kind: DomainKind,
}

impl Domain2 {
    pub fn rectangle(x: [f64; 2], y: [f64; 2]) -> Self {
        Domain2 { kind: DomainKind::Rectangle { x, y } }
    }
    pub fn flat_torus(px: f64, py: f64) -> Self {
        Domain2 { kind: DomainKind::FlatTorus { px, py } }
    }
    pub fn cylinder(t_min: f64, t_max: f64) -> Self {
        Domain2 { kind: DomainKind::Cylinder { t_min, t_max } }
    }
    pub fn punctured_disk(t_min: f64, t_max: f64) -> Result<Self> {
        if t_min < 0.0 || t_min >= t_max {
            return Err(Error::Config(format!("punctured disk needs 0 ≤ t_min < t_max, got [{t_min}, {t_max}]")));
        }
        Ok(Domain2 { kind: DomainKind::PuncturedDisk { t_min, t_max } })
    }

    pub fn periodic(&self) -> [bool; 2] {
        match self.kind {
            DomainKind::Rectangle { .. } => [false, false],
            DomainKind::FlatTorus { .. } => [true, true],
            DomainKind::Cylinder { .. } | DomainKind::PuncturedDisk { .. } => [false, true],
        }
    }

    pub fn x_range(&self) -> [f64; 2] {
        match self.kind {
            DomainKind::Rectangle { x, .. } => x,
            DomainKind::FlatTorus { px, .. } => [0.0, px],
            DomainKind::Cylinder { t_min, t_max } | DomainKind::PuncturedDisk { t_min, t_max } => [t_min, t_max],
        }
    }

    pub fn y_range(&self) -> [f64; 2] {
        match self.kind {
            DomainKind::Rectangle { y, .. } => y,
            DomainKind::FlatTorus { py, .. } => [0.0, py],
            DomainKind::Cylinder { .. } | DomainKind::PuncturedDisk { .. } => [0.0, 2.0 * PI],
        }
    }

    pub fn is_cylindrical(&self) -> bool {
        matches!(self.kind, DomainKind::Cylinder { .. } | DomainKind::PuncturedDisk { .. })
    }

    pub fn contains(&self, pt: [f64; 2]) -> bool {
        let per = self.periodic();
        let (xr, yr) = (self.x_range(), self.y_range());
        (per[0] || (pt[0] >= xr[0] && pt[0] <= xr[1])) && (per[1] || (pt[1] >= yr[0] && pt[1] <= yr[1]))
    }

    /// Restricts the first axis of a cylinder-type domain.
    pub fn with_x_range(&self, x: [f64; 2]) -> Self {
        match self.kind {
            DomainKind::Rectangle { y, .. } => Domain2::rectangle(x, y),
            DomainKind::FlatTorus { .. } => *self,
            DomainKind::Cylinder { .. } => Domain2::cylinder(x[0], x[1]),
            DomainKind::PuncturedDisk { .. } => Domain2 { kind: DomainKind::PuncturedDisk { t_min: x[0], t_max: x[1] } },
        }
    }
}

/// Which end of the cylinder a puncture sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CylinderEnd {
    /// `t → t_max`, disk coordinate `x = e^{−t+iφ}`.
    Upper,
    /// `t → t_min`, disk coordinate `x = e^{t−iφ}`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PunctureKind {
    /// Finite image point (branch point or regular point).
    Branch,
    /// The image escapes to infinity (planar or catenoidal end).
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Puncture {
    pub end: CylinderEnd,
    pub kind: PunctureKind,
    /// Declared branch order with `|Φ − p| ∼ |x|^{1+θ}`.
    pub theta: Option<u32>,
    /// Image point for `Branch` punctures.
    pub image: Option<[f64; 3]>,
    /// Radius of the disk neighbourhood in the disk coordinate.
    pub radius: f64,
}

impl Puncture {
    pub fn end_at(end: CylinderEnd) -> Self {
        Puncture { end, kind: PunctureKind::End, theta: None, image: None, radius: 1.0 }
    }

    pub fn branch_at(end: CylinderEnd, image: [f64; 3], theta: Option<u32>) -> Self {
        Puncture { end, kind: PunctureKind::Branch, theta, image: Some(image), radius: 1.0 }
    }

    /// Disk radius `|x|` of a domain point.
    pub fn radius_of(&self, pt: [f64; 2]) -> f64 {
        match self.end {
            CylinderEnd::Upper => (-pt[0]).exp(),
            CylinderEnd::Lower => pt[0].exp(),
        }
    }

    /// Domain point of the disk coordinate `r·e^{iα}`.
    pub fn point_at(&self, r: f64, alpha: f64) -> [f64; 2] {
        match self.end {
            CylinderEnd::Upper => [-r.ln(), alpha],
            CylinderEnd::Lower => [r.ln(), -alpha],
        }
    }

    /// Cylinder coordinate `t` corresponding to disk radius `r`.
    pub fn t_of_radius(&self, r: f64) -> f64 {
        self.point_at(r, 0.0)[0]
    }
}

/// Analytic map from domain points to jets of the three components of Φ.
#[derive(Debug, Clone)]
pub enum Evaluator {
    Sphere,
    /// Spheroid `(a, a, c)` in conformal coordinates.
    Spheroid { a: f64, c: f64 },
    /// `(a sech t cos φ, b sech t sin φ, −c tanh t)`, not conformal unless a = b = c.
    Ellipsoid { a: f64, b: f64, c: f64 },
    Catenoid,
    Enneper,
    /// Torus of revolution in conformal flat coordinates.
    Torus { big_r: f64, small_r: f64 },
    Expr(Arc<ImmersionExpr>),
    Conformal { map: ConformalMap3, inner: Arc<Evaluator> },
    /// `p ↦ inner(scale ⊙ p + offset)`.
    Reparam { scale: [f64; 2], offset: [f64; 2], inner: Arc<Evaluator> },
    /// Stereographic image `π∘Ψ` of an S³ surface.
    Stereographic(S3Surface),
    /// `Φ + t·w` for a test field `w` of the base chart.
    Perturbed { base: Arc<ImmersionChart>, field: Arc<TestField>, t: f64 },
}

impl Evaluator {
    pub fn eval<T: Real>(&self, pt: [f64; 2], order: usize) -> Result<[Jet2<T>; 3]> {
        let x = Jet2::var_x(T::c(pt[0]), order);
        let y = Jet2::var_y(T::c(pt[1]), order);
        match self {
            Evaluator::Sphere => Ok(zoo::sphere(&x, &y)),
            Evaluator::Spheroid { a, c } => zoo::spheroid(*a, *c, &x, &y),
            Evaluator::Ellipsoid { a, b, c } => Ok(zoo::ellipsoid(*a, *b, *c, &x, &y)),
            Evaluator::Catenoid => Ok(zoo::catenoid(&x, &y)),
            Evaluator::Enneper => Ok(zoo::enneper(&x, &y)),
            Evaluator::Torus { big_r, small_r } => zoo::torus(*big_r, *small_r, &x, &y),
            Evaluator::Expr(e) => e.eval(&x, &y),
            Evaluator::Conformal { map, inner } => {
                let p = inner.eval::<T>(pt, order)?;
                map.apply_jets(&p, pt)
            }
            Evaluator::Reparam { scale, offset, inner } => {
                let q = [scale[0] * pt[0] + offset[0], scale[1] * pt[1] + offset[1]];
                let p = inner.eval::<T>(q, order)?;
                let (sx, sy) = (T::c(scale[0]), T::c(scale[1]));
                Ok([p[0].scale_axes(sx, sy), p[1].scale_axes(sx, sy), p[2].scale_axes(sx, sy)])
            }
            Evaluator::Stereographic(s) => {
                let psi = s.eval(&x, &y)?;
                s3::stereographic_projection(&psi)
            }
            Evaluator::Perturbed { base, field, t } => {
                let p = base.evaluator.eval::<T>(pt, order)?;
                let w = field.eval::<T>(base, pt, order)?;
                let t = T::c(*t);
                Ok([p[0] + w[0].scale(t), p[1] + w[1].scale(t), p[2] + w[2].scale(t)])
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ImmersionChart {
    pub label: String,
    pub domain: Domain2,
    pub evaluator: Evaluator,
    /// +1 keeps the Gauss map `∂_xΦ × ∂_yΦ / |·|`, −1 flips it.
    pub orientation: f64,
    pub punctures: Vec<Puncture>,
    pub r_min: f64,
    /// Coordinates are conformal by construction.
    pub conformal: bool,
}

impl ImmersionChart {
    pub fn new(label: impl Into<String>, domain: Domain2, evaluator: Evaluator) -> Self {
        ImmersionChart {
            label: label.into(),
            domain,
            evaluator,
            orientation: 1.0,
            punctures: Vec::new(),
            r_min: DEFAULT_R_MIN,
            conformal: false,
        }
    }

    pub fn with_punctures(mut self, p: Vec<Puncture>) -> Self {
        self.punctures = p;
        self
    }

    pub fn with_conformal(mut self, c: bool) -> Self {
        self.conformal = c;
        self
    }

    pub fn with_orientation(mut self, o: f64) -> Self {
        self.orientation = o.signum();
        self
    }

    /// Sets `r_min` and trims cylinder ends carrying punctures accordingly.
    pub fn with_r_min(mut self, r_min: f64) -> Self {
        self.r_min = r_min;
        let mut xr = self.domain.x_range();
        let tmax = -r_min.ln();
        for p in &self.punctures {
            match p.end {
                CylinderEnd::Upper => xr[1] = xr[1].min(tmax),
                CylinderEnd::Lower => xr[0] = xr[0].max(-tmax),
            }
        }
        self.domain = self.domain.with_x_range(xr);
        self
    }

    pub fn puncture(&self, i: usize) -> Result<&Puncture> {
        self.punctures.get(i).ok_or(Error::NoSuchPuncture(i))
    }

    /// Rejects points within `r_min` of a puncture.
    pub fn check_point(&self, pt: [f64; 2]) -> Result<()> {
        for p in &self.punctures {
            let r = p.radius_of(pt);
            if r < self.r_min * (1.0 - 1e-12) {
                return Err(Error::PunctureProximity { point: pt, r });
            }
        }
        Ok(())
    }

    /// Jets of Φ at `pt`.
    pub fn eval<T: Real>(&self, pt: [f64; 2], order: usize) -> Result<[Jet2<T>; 3]> {
        if order > crate::jet::MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        self.check_point(pt)?;
        let p = self.evaluator.eval::<T>(pt, order)?;
        if !p.iter().all(|c| c.is_finite()) {
            return Err(Error::Blowup { point: pt });
        }
        Ok(p)
    }

    pub fn point(&self, pt: [f64; 2]) -> Result<[f64; 3]> {
        let p = self.eval::<f64>(pt, 0)?;
        Ok([p[0].value(), p[1].value(), p[2].value()])
    }

    /// Chart of `p ↦ Φ(p / s)`, the coordinate change `z ↦ s·z`.
    pub fn rescaled(&self, s: f64) -> Result<ImmersionChart> {
        if !self.punctures.is_empty() || !(s > 0.0) {
            return Err(Error::Config("rescaling needs a positive factor and a chart without punctures".into()));
        }
        let kind = match self.domain.kind {
            DomainKind::Rectangle { x, y } => DomainKind::Rectangle { x: [s * x[0], s * x[1]], y: [s * y[0], s * y[1]] },
            DomainKind::FlatTorus { px, py } => DomainKind::FlatTorus { px: s * px, py: s * py },
            _ => return Err(Error::Config("rescaling applies to rectangle and flat-torus domains".into())),
        };
        Ok(ImmersionChart {
            label: format!("{}(z/{s})", self.label),
            domain: Domain2 { kind },
            evaluator: Evaluator::Reparam { scale: [1.0 / s, 1.0 / s], offset: [0.0, 0.0], inner: Arc::new(self.evaluator.clone()) },
            ..self.clone()
        })
    }

    /// Chart of `Φ + t·w`.
    pub fn perturbed(&self, field: &TestField, t: f64) -> ImmersionChart {
        ImmersionChart {
            label: format!("{}+{t}w", self.label),
            evaluator: Evaluator::Perturbed { base: Arc::new(self.clone()), field: Arc::new(field.clone()), t },
            conformal: false,
            ..self.clone()
        }
    }

    /// Minimum of `|∂_xΦ × ∂_yΦ|` on an `nx × ny` grid, skipping disk radii below `r_away`.
    pub fn min_area_element(&self, nx: usize, ny: usize, r_away: f64) -> Result<f64> {
        let (xr, yr) = (self.domain.x_range(), self.domain.y_range());
        let per = self.domain.periodic();
        let mut m = f64::INFINITY;
        for i in 0..nx {
            let fx = if per[0] { i as f64 / nx as f64 } else { (i as f64 + 0.5) / nx as f64 };
            let x = xr[0] + fx * (xr[1] - xr[0]);
            for j in 0..ny {
                let fy = if per[1] { j as f64 / ny as f64 } else { (j as f64 + 0.5) / ny as f64 };
                let pt = [x, yr[0] + fy * (yr[1] - yr[0])];
                if self.punctures.iter().any(|p| p.radius_of(pt) < r_away) {
                    continue;
                }
                let p = self.eval::<f64>(pt, 1)?;
                let d: [[f64; 3]; 2] = [
                    [p[0].coeff(1, 0), p[1].coeff(1, 0), p[2].coeff(1, 0)],
                    [p[0].coeff(0, 1), p[1].coeff(0, 1), p[2].coeff(0, 1)],
                ];
                let c = cross(d[0], d[1]);
                m = m.min(norm(c));
            }
        }
        Ok(m)
    }
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Chart of `Θ∘Φ` with punctures recomputed.
pub fn apply_conformal(theta: &ConformalMap3, phi: &ImmersionChart) -> Result<ImmersionChart> {
    if theta.is_identity() {
        return Ok(phi.clone());
    }
    // coarse collision scan; evaluation also rejects collisions pointwise
    let (xr, yr) = (phi.domain.x_range(), phi.domain.y_range());
    let n = 32;
    for i in 0..=n {
        let x = xr[0] + (xr[1] - xr[0]) * i as f64 / n as f64;
        for j in 0..n {
            let pt = [x, yr[0] + (yr[1] - yr[0]) * j as f64 / n as f64];
            if phi.check_point(pt).is_err() {
                continue;
            }
            let p = phi.point(pt)?;
            if theta.apply_point(p).is_none() {
                let center = theta.inversion_centers().into_iter().next().unwrap_or_default();
                return Err(Error::InversionCollision { point: pt, center });
            }
        }
    }
    let punctures = phi.punctures.iter().map(|p| map_puncture(theta, p)).collect();
    Ok(ImmersionChart {
        label: format!("mobius({})", phi.label),
        evaluator: Evaluator::Conformal { map: theta.clone(), inner: Arc::new(phi.evaluator.clone()) },
        punctures,
        ..phi.clone()
    })
}

fn map_puncture(theta: &ConformalMap3, p: &Puncture) -> Puncture {
    let mut out = *p;
    for f in theta.factors() {
        let single = ConformalMap3::single(*f).expect("validated factor");
        match (*f, out.kind, out.image) {
            (Mobius::Inversion(c), PunctureKind::End, _) => {
                out.kind = PunctureKind::Branch;
                out.image = Some(c);
            }
            (Mobius::Inversion(c), PunctureKind::Branch, Some(q)) => {
                let d = norm([q[0] - c[0], q[1] - c[1], q[2] - c[2]]);
                if d <= 1e-12 * (1.0 + norm(c)) {
                    out.kind = PunctureKind::End;
                    out.image = None;
                } else {
                    out.image = single.apply_point(q);
                }
            }
            (_, PunctureKind::Branch, Some(q)) => out.image = single.apply_point(q),
            _ => {}
        }
    }
    out
}

/// Blow-up charts `Φ_k(z) = Φ(r_k / z)` on `C ∖ B₁`, in cylinder coordinates `z = e^{s+iψ}`.
pub fn blowup_sequence(phi: &ImmersionChart, puncture: usize, radii: &[f64]) -> Result<Vec<ImmersionChart>> {
    let p = *phi.puncture(puncture)?;
    let xr = phi.domain.x_range();
    radii
        .iter()
        .map(|&rk| {
            let t0 = p.t_of_radius(rk);
            let inside = match p.end {
                CylinderEnd::Upper => t0 >= xr[0] && t0 < xr[1] && rk < p.radius,
                CylinderEnd::Lower => t0 <= xr[1] && t0 > xr[0] && rk < p.radius,
            };
            if !(rk > 0.0) || !inside || rk <= phi.r_min {
                return Err(Error::RadiusOutOfDomain(rk));
            }
            let (scale, offset, len) = match p.end {
                CylinderEnd::Upper => ([1.0, -1.0], [t0, 0.0], xr[1] - t0),
                CylinderEnd::Lower => ([-1.0, 1.0], [t0, 0.0], t0 - xr[0]),
            };
            let mut punct = p;
            punct.end = CylinderEnd::Upper;
            punct.radius = 1.0;
            Ok(ImmersionChart {
                label: format!("{}@r={rk:e}", phi.label),
                domain: Domain2::cylinder(0.0, len),
                evaluator: Evaluator::Reparam { scale, offset, inner: Arc::new(phi.evaluator.clone()) },
                orientation: phi.orientation * scale[0] * scale[1],
                punctures: vec![punct],
                r_min: phi.r_min / rk,
                conformal: phi.conformal,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn puncture_coordinates_round_trip() {
        for end in [CylinderEnd::Upper, CylinderEnd::Lower] {
            let p = Puncture::end_at(end);
            let pt = p.point_at(0.01, 0.3);
            assert!((p.radius_of(pt) - 0.01).abs() < 1e-15);
        }
    }

    #[test]
    fn r_min_refusal() {
        let c = zoo("inverted-catenoid", &[]).unwrap();
        assert!(matches!(c.eval::<f64>([14.0, 0.0], 2), Err(Error::PunctureProximity { .. })));
        assert!(c.eval::<f64>([13.0, 0.0], 2).is_ok());
    }

    #[test]
    fn identity_map_is_identity() {
        let s = zoo("catenoid", &[]).unwrap();
        let t = apply_conformal(&ConformalMap3::identity(), &s).unwrap();
        let a = s.eval::<f64>([0.3, 1.0], 4).unwrap();
        let b = t.eval::<f64>([0.3, 1.0], 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inversion_turns_ends_into_branch_points() {
        let c = zoo("catenoid", &[]).unwrap();
        let inv = ConformalMap3::single(Mobius::Inversion([0.0; 3])).unwrap();
        let ic = apply_conformal(&inv, &c).unwrap();
        assert!(ic.punctures.iter().all(|p| p.kind == PunctureKind::Branch && p.image == Some([0.0; 3])));
        let back = apply_conformal(&inv, &ic).unwrap();
        assert!(back.punctures.iter().all(|p| p.kind == PunctureKind::End));
        let z = zoo("inverted-catenoid", &[]).unwrap();
        for pt in [[1.0, 0.2], [-5.0, 3.0], [12.0, 6.0]] {
            let a = ic.point(pt).unwrap();
            let b = z.point(pt).unwrap();
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() <= 1e-15 * norm(b).max(1e-300));
            }
        }
    }

    #[test]
    fn collision_is_rejected() {
        let s = zoo("sphere", &[]).unwrap();
        let p = s.point([0.0, 0.0]).unwrap();
        let inv = ConformalMap3::single(Mobius::Inversion(p)).unwrap();
        assert!(matches!(apply_conformal(&inv, &s), Err(Error::InversionCollision { .. })));
    }

    #[test]
    fn blowup_matches_original() {
        let c = zoo("inverted-catenoid", &[]).unwrap();
        let b = blowup_sequence(&c, 0, &[1e-2]).unwrap();
        let p = c.puncture(0).unwrap();
        // Φ_k at z = e^{s+iψ} equals Φ at x = r_k / z
        let (s, psi) = (0.7, 0.4);
        let a = b[0].point([s, psi]).unwrap();
        let x = p.point_at(1e-2 * (-s as f64).exp(), -psi);
        let q = c.point(x).unwrap();
        for i in 0..3 {
            assert!((a[i] - q[i]).abs() < 1e-15);
        }
        assert!(blowup_sequence(&c, 0, &[2.0]).is_err());
        assert!(blowup_sequence(&c, 0, &[1e-7]).is_err());
    }
}
