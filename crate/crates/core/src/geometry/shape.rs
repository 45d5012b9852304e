use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;
use crate::surface::ImmersionChart;

/// Relative anisotropy below which a metric counts as conformal.
pub const CONFORMAL_TOL: f64 = 1e-8;

/// Local geometry of an immersion at a point, as jets.
///
/// Symmetric 2×2 quantities are stored as `[11, 12, 22]`. First-order data (`g`, `n`, `λ`)
/// have order `K − 1`; second-order data (`A`, `H`, `Å`, curvatures) have order `K − 2`.
#[derive(Debug, Clone)]
pub struct ShapeData<T: Real = f64> {
    pub point: [f64; 2],
    pub phi: [Jet2<T>; 3],
    /// `[∂_xΦ, ∂_yΦ]`.
    pub dphi: [[Jet2<T>; 3]; 2],
    pub g: [Jet2<T>; 3],
    pub det_g: Jet2<T>,
    pub g_inv: [Jet2<T>; 3],
    pub normal: [Jet2<T>; 3],
    pub a: [Jet2<T>; 3],
    pub h: Jet2<T>,
    pub a_circ: [Jet2<T>; 3],
    /// `|Å|²_g`.
    pub a_circ_norm2: Jet2<T>,
    /// `|A|²_g`.
    pub a_norm2: Jet2<T>,
    pub gauss: Jet2<T>,
    /// `g = e^{2λ} δ`, present only on conformal points.
    pub lambda: Option<Jet2<T>>,
    pub anisotropy: f64,
}

fn dot<T: Real>(a: &[Jet2<T>; 3], b: &[Jet2<T>; 3]) -> Jet2<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross_jet<T: Real>(a: &[Jet2<T>; 3], b: &[Jet2<T>; 3]) -> [Jet2<T>; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn d3<T: Real>(v: &[Jet2<T>; 3], axis: usize) -> Result<[Jet2<T>; 3]> {
    let f = |c: &Jet2<T>| if axis == 0 { c.dx() } else { c.dy() };
    Ok([f(&v[0])?, f(&v[1])?, f(&v[2])?])
}

/// `|S|²_g = tr(g⁻¹ S g⁻¹ S)` for symmetric `S`.
pub(crate) fn norm2_g<T: Real>(gi: &[Jet2<T>; 3], s: &[Jet2<T>; 3]) -> Jet2<T> {
    let b11 = gi[0] * s[0] + gi[1] * s[1];
    let b12 = gi[0] * s[1] + gi[1] * s[2];
    let b21 = gi[1] * s[0] + gi[2] * s[1];
    let b22 = gi[1] * s[1] + gi[2] * s[2];
    b11 * b11 + (b12 * b21).scale(T::c(2.0)) + b22 * b22
}

/// Fundamental forms and curvatures at `pt` from jets of order `order ≥ 2`.
pub fn shape_at<T: Real>(chart: &ImmersionChart, pt: [f64; 2], order: usize) -> Result<ShapeData<T>> {
    if order < 2 {
        return Err(Error::InsufficientOrder { needed: 2, got: order });
    }
    let phi = chart.eval::<T>(pt, order)?;
    let dphi = [d3(&phi, 0)?, d3(&phi, 1)?];
    let g = [dot(&dphi[0], &dphi[0]), dot(&dphi[0], &dphi[1]), dot(&dphi[1], &dphi[1])];
    let det_g = g[0] * g[2] - g[1] * g[1];
    let (g11, g22, g12) = (g[0].value().f64(), g[2].value().f64(), g[1].value().f64());
    let detv = det_g.value().f64();
    if !(detv > 1e-14 * g11 * g22) || !detv.is_finite() || detv < f64::MIN_POSITIVE {
        return Err(Error::DegenerateMetric { point: pt, det: detv });
    }
    let inv_det = det_g.recip()?;
    let g_inv = [g[2] * inv_det, -(g[1] * inv_det), g[0] * inv_det];
    let nn = cross_jet(&dphi[0], &dphi[1]);
    let len = dot(&nn, &nn).sqrt()?;
    let s = len.recip()?.scale(T::c(chart.orientation));
    let normal = [nn[0] * s, nn[1] * s, nn[2] * s];
    let dxx = d3(&dphi[0], 0)?;
    let dxy = d3(&dphi[0], 1)?;
    let dyy = d3(&dphi[1], 1)?;
    let a = [dot(&dxx, &normal), dot(&dxy, &normal), dot(&dyy, &normal)];
    let h = (g_inv[0] * a[0] + (g_inv[1] * a[1]).scale(T::c(2.0)) + g_inv[2] * a[2]).scale(T::c(0.5));
    let a_circ = [a[0] - h * g[0], a[1] - h * g[1], a[2] - h * g[2]];
    let a_circ_norm2 = norm2_g(&g_inv, &a_circ);
    let a_norm2 = norm2_g(&g_inv, &a);
    let gauss = (a[0] * a[2] - a[1] * a[1]) * inv_det;
    let anisotropy = ((g11 - g22).powi(2) + 4.0 * g12 * g12).sqrt() / (g11 + g22);
    let lambda = if anisotropy < CONFORMAL_TOL {
        Some((g[0] + g[2]).scale(T::c(0.5)).ln()?.scale(T::c(0.5)))
    } else {
        None
    };
    Ok(ShapeData { point: pt, phi, dphi, g, det_g, g_inv, normal, a, h, a_circ, a_circ_norm2, a_norm2, gauss, lambda, anisotropy })
}

impl<T: Real> ShapeData<T> {
    /// `√det g`.
    pub fn area_element(&self) -> Result<Jet2<T>> {
        self.det_g.sqrt()
    }

    /// `∇n` as `[∂_x n, ∂_y n]`.
    pub fn dnormal(&self) -> Result<[[Jet2<T>; 3]; 2]> {
        Ok([d3(&self.normal, 0)?, d3(&self.normal, 1)?])
    }

    /// Principal curvatures at the base point, ascending.
    pub fn principal_curvatures(&self) -> [f64; 2] {
        let h = self.h.value().f64();
        let k = self.gauss.value().f64();
        let disc = (h * h - k).max(0.0).sqrt();
        [h - disc, h + disc]
    }

    /// Laplace–Beltrami of `H` in divergence form, `(1/√g) ∂_i(√g g^{ij} ∂_j H)`; order `K − 4`.
    pub fn laplace_beltrami_h(&self) -> Result<Jet2<T>> {
        let sg = self.area_element()?;
        let (hx, hy) = (self.h.dx()?, self.h.dy()?);
        let f1 = sg * (self.g_inv[0] * hx + self.g_inv[1] * hy);
        let f2 = sg * (self.g_inv[1] * hx + self.g_inv[2] * hy);
        Ok((f1.dx()? + f2.dy()?) * sg.recip()?)
    }

    /// Mixed tensor `Å_i^j = Å_ik g^{kj}` as `[[1_1, 1_2], [2_1, 2_2]]`.
    pub fn a_circ_mixed(&self) -> [[Jet2<T>; 2]; 2] {
        let (a, gi) = (&self.a_circ, &self.g_inv);
        [
            [a[0] * gi[0] + a[1] * gi[1], a[0] * gi[1] + a[1] * gi[2]],
            [a[1] * gi[0] + a[2] * gi[1], a[1] * gi[1] + a[2] * gi[2]],
        ]
    }
}

/// Compact, serializable summary of the base-point values.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeSummary {
    pub point: [f64; 2],
    pub h: f64,
    pub gauss: f64,
    pub a_circ_norm2: f64,
    pub area_element: f64,
    pub lambda: Option<f64>,
}

impl<T: Real> From<&ShapeData<T>> for ShapeSummary {
    fn from(s: &ShapeData<T>) -> Self {
        ShapeSummary {
            point: s.point,
            h: s.h.value().f64(),
            gauss: s.gauss.value().f64(),
            a_circ_norm2: s.a_circ_norm2.value().f64(),
            area_element: s.det_g.value().f64().sqrt(),
            lambda: s.lambda.as_ref().map(|l| l.value().f64()),
        }
    }
}
