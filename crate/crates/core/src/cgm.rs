//! The conformal Gauss map `Y: Σ → S^{3,1} ⊂ R^{4,1}` in the R³ and S³ models.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::shape::{norm2_g, shape_at, ShapeData};
use crate::jet::{ComplexJet2, Jet2};
use crate::minkowski::{eta_inner, eta_inner_cjet, euclid_norm2_cjet, lorentz_from_conformal, LorentzMatrix, LorentzVec};
use crate::real::Real;
use crate::surface::{apply_conformal, ConformalMap3, ImmersionChart, S3Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    R3,
    S3,
}

/// `Y` as five jets at a domain point.
#[derive(Debug, Clone)]
pub struct CgmSample<T: Real = f64> {
    pub model: Model,
    pub location: [f64; 2],
    pub y: [Jet2<T>; 5],
    /// Mean curvature of the underlying immersion.
    pub h: Jet2<T>,
}

impl<T: Real> CgmSample<T> {
    /// `Y₅ − Y₄`.
    pub fn h_from_y(&self) -> T {
        self.y[4].value() - self.y[3].value()
    }

    pub fn value(&self) -> [f64; 5] {
        self.y.map(|c| c.value().f64())
    }

    pub fn order(&self) -> usize {
        self.y[0].order()
    }
}

fn dot3<T: Real>(a: &[Jet2<T>; 3], b: &[Jet2<T>; 3]) -> Jet2<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `(Φ, (|Φ|² − 1)/2, (|Φ|² + 1)/2)`, the null lift of Φ.
fn null_lift<T: Real>(phi: &[Jet2<T>; 3]) -> [Jet2<T>; 5] {
    let r2 = dot3(phi, phi);
    let half = T::c(0.5);
    [phi[0], phi[1], phi[2], r2.add_const(-T::one()).scale(half), r2.add_const(T::one()).scale(half)]
}

/// The two terms `H·(Φ, …)` and `(n, ⟨n,Φ⟩, ⟨n,Φ⟩)` whose sum is `Y`.
pub fn cgm_parts<T: Real>(s: &ShapeData<T>) -> ([Jet2<T>; 5], [Jet2<T>; 5]) {
    let k = s.h.order();
    let phi = s.phi.map(|c| c.truncate(k));
    let n = s.normal.map(|c| c.truncate(k));
    let lift = null_lift(&phi).map(|c| s.h * c);
    let np = dot3(&n, &phi);
    (lift, [n[0], n[1], n[2], np, np])
}

/// `Y` from already computed shape data; jets have order `K − 2`.
pub fn cgm_from_shape<T: Real>(s: &ShapeData<T>) -> CgmSample<T> {
    let (a, b) = cgm_parts(s);
    let mut y = a;
    for i in 0..5 {
        y[i] = a[i] + b[i];
    }
    CgmSample { model: Model::R3, location: s.point, y, h: s.h }
}

/// Conformal Gauss map of an immersion in R³ from jets of order `order`.
pub fn cgm_r3<T: Real>(chart: &ImmersionChart, pt: [f64; 2], order: usize) -> Result<CgmSample<T>> {
    Ok(cgm_from_shape(&shape_at::<T>(chart, pt, order)?))
}

/// `[∂_xY, ∂_yY]`.
pub fn grad_cgm<T: Real>(s: &CgmSample<T>) -> Result<[[Jet2<T>; 5]; 2]> {
    if s.order() < 1 {
        return Err(Error::InsufficientOrder { needed: 1, got: 0 });
    }
    let d = |axis: usize| -> Result<[Jet2<T>; 5]> {
        let mut out = [Jet2::zero(0); 5];
        for i in 0..5 {
            out[i] = if axis == 0 { s.y[i].dx()? } else { s.y[i].dy()? };
        }
        Ok(out)
    };
    Ok([d(0)?, d(1)?])
}

/// Base-point values of `∇Y = (∇H)(Φ, …) − Å(∇Φ, ⟨Φ,∇Φ⟩, ⟨Φ,∇Φ⟩)`, the index raised with `g`.
pub fn grad_cgm_closed_form<T: Real>(s: &ShapeData<T>) -> Result<[[f64; 5]; 2]> {
    let hx = [s.h.dx()?.value().f64(), s.h.dy()?.value().f64()];
    let phi = s.phi.map(|c| c.value().f64());
    let r2 = phi.iter().map(|v| v * v).sum::<f64>();
    let lift = [phi[0], phi[1], phi[2], 0.5 * (r2 - 1.0), 0.5 * (r2 + 1.0)];
    let dphi: [[f64; 3]; 2] = [s.dphi[0].map(|c| c.value().f64()), s.dphi[1].map(|c| c.value().f64())];
    let dl = |j: usize| -> [f64; 5] {
        let p = phi[0] * dphi[j][0] + phi[1] * dphi[j][1] + phi[2] * dphi[j][2];
        [dphi[j][0], dphi[j][1], dphi[j][2], p, p]
    };
    let dls = [dl(0), dl(1)];
    let mixed = s.a_circ_mixed();
    let mut out = [[0.0; 5]; 2];
    for i in 0..2 {
        for c in 0..5 {
            let mut v = hx[i] * lift[c];
            for j in 0..2 {
                v -= mixed[i][j].value().f64() * dls[j][c];
            }
            out[i][c] = v;
        }
    }
    Ok(out)
}

/// `Y_z = ½(Y_x − iY_y)` as complex jets.
pub fn dz_cgm<T: Real>(s: &CgmSample<T>) -> Result<[ComplexJet2<T>; 5]> {
    dz5(&s.y.map(ComplexJet2::from_real))
}

/// Residuals of the identities that hold for every immersion, relative to natural scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CgmIdentities {
    pub location: [f64; 2],
    /// `||Y|²_η − 1| / max(1, |Y|²_ξ)`.
    pub unit_norm: f64,
    /// `max_i |⟨Y, ∂_iY⟩_η| / (|Y|_ξ D_i)` with `D_i` the derivative scale.
    pub orthogonality: f64,
    /// `|H − (Y₅ − Y₄)| / max(1, |Y|_ξ)`.
    pub h_from_y: f64,
    /// `max_ij |(Y*η)_ij − ½|Å|²g_ij| / (D_i D_j)`.
    pub pullback: f64,
    /// `|⟨Y_z, Y_z⟩_η| / D_z²`, conformal charts only.
    pub null_dz: Option<f64>,
    /// `|⟨Y_zz, Y_z⟩_η| / (D_zz D_z)`, conformal charts only.
    pub null_dzz: Option<f64>,
    /// `max_i |∂_iY − (closed form)_i|_ξ / D_i`.
    pub gradient_forms: f64,
}

impl CgmIdentities {
    pub fn worst(&self) -> f64 {
        [self.unit_norm, self.orthogonality, self.h_from_y, self.pullback, self.gradient_forms]
            .into_iter()
            .chain(self.null_dz)
            .chain(self.null_dzz)
            .fold(0.0, f64::max)
    }
}

fn rel(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num.abs() / den
    } else {
        num.abs()
    }
}

fn enorm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn dz5<T: Real>(v: &[ComplexJet2<T>; 5]) -> Result<[ComplexJet2<T>; 5]> {
    let mut out = *v;
    for (o, c) in out.iter_mut().zip(v) {
        *o = c.dz()?;
    }
    Ok(out)
}

fn real5(v: &[Jet2; 5]) -> [ComplexJet2; 5] {
    v.map(ComplexJet2::from_real)
}

fn grad_values(v: &[Jet2; 5]) -> Result<[[f64; 5]; 2]> {
    let mut out = [[0.0; 5]; 2];
    for k in 0..5 {
        out[0][k] = v[k].dx()?.value();
        out[1][k] = v[k].dy()?.value();
    }
    Ok(out)
}

fn cnorm(v: &[ComplexJet2; 5]) -> f64 {
    euclid_norm2_cjet(v).sqrt()
}

/// All pointwise identities of the R³-model conformal Gauss map at `pt` (jets of order 5).
///
/// Derivative identities are measured against `|∂(H·(Φ,…))|_ξ + |∂(n,…)|_ξ`, the size of the two terms
/// that cancel when `Y` is constant.
pub fn cgm_identities(chart: &ImmersionChart, pt: [f64; 2]) -> Result<CgmIdentities> {
    let s = shape_at::<f64>(chart, pt, 5)?;
    let (pa, pb) = cgm_parts(&s);
    let sample = cgm_from_shape(&s);
    let y = sample.value();
    let yn = enorm(&y);
    let unit_norm = rel(eta_inner(&y, &y) - 1.0, (yn * yn).max(1.0));
    let gv = grad_values(&sample.y)?;
    let (ga, gb) = (grad_values(&pa)?, grad_values(&pb)?);
    let phi = s.phi.map(|c| c.value());
    let floor = yn / (1.0 + enorm(&phi));
    let dphi: [f64; 2] = std::array::from_fn(|i| enorm(&s.dphi[i].map(|c| c.value())));
    // a constant `Y` (planes, round spheres) is measured against the chart speed
    let dscale = [
        (enorm(&ga[0]) + enorm(&gb[0])).max(floor * dphi[0]),
        (enorm(&ga[1]) + enorm(&gb[1])).max(floor * dphi[1]),
    ];
    let mut orthogonality: f64 = 0.0;
    for i in 0..2 {
        orthogonality = orthogonality.max(rel(eta_inner(&y, &gv[i]), yn * dscale[i]));
    }
    let h_from_y = rel(s.h.value() - sample.h_from_y(), yn.max(1.0));
    let half_ac = 0.5 * s.a_circ_norm2.value();
    let g = s.g.map(|c| c.value());
    let mut pullback: f64 = 0.0;
    for (i, j, gij) in [(0, 0, g[0]), (0, 1, g[1]), (1, 1, g[2])] {
        pullback = pullback.max(rel(eta_inner(&gv[i], &gv[j]) - half_ac * gij, dscale[i] * dscale[j]));
    }
    let closed = grad_cgm_closed_form(&s)?;
    let mut gradient_forms: f64 = 0.0;
    for i in 0..2 {
        let d: [f64; 5] = std::array::from_fn(|c| gv[i][c] - closed[i][c]);
        gradient_forms = gradient_forms.max(rel(enorm(&d), dscale[i]));
    }
    let (null_dz, null_dzz) = if s.lambda.is_some() {
        let (ca, cb) = (dz5(&real5(&pa))?, dz5(&real5(&pb))?);
        let yz = dz5(&real5(&sample.y))?;
        let yzz = dz5(&yz)?;
        let zscale = (cnorm(&ca) + cnorm(&cb)).max(0.5 * floor * (dphi[0] + dphi[1]));
        let zzscale = (cnorm(&dz5(&ca)?) + cnorm(&dz5(&cb)?)).max(zscale);
        let k = yzz[0].order();
        let yz_t = yz.map(|c| ComplexJet2 { re: c.re.truncate(k), im: c.im.truncate(k) });
        let p = eta_inner_cjet(&yz, &yz).abs_value();
        let q = eta_inner_cjet(&yzz, &yz_t).abs_value();
        (Some(rel(p, zscale * zscale)), Some(rel(q, zzscale * zscale)))
    } else {
        (None, None)
    };
    Ok(CgmIdentities { location: pt, unit_norm, orthogonality, h_from_y, pullback, null_dz, null_dzz, gradient_forms })
}

/// An immersion `Ψ` into `S³ ⊂ R⁴` with its unit normal `N` tangent to `S³`.
#[derive(Debug, Clone)]
pub struct S3Chart<T: Real = f64> {
    pub location: [f64; 2],
    pub psi: [Jet2<T>; 4],
    pub dpsi: [[Jet2<T>; 4]; 2],
    pub normal: [Jet2<T>; 4],
    pub g: [Jet2<T>; 3],
    pub g_inv: [Jet2<T>; 3],
    pub a: [Jet2<T>; 3],
    pub h: Jet2<T>,
    pub a_circ: [Jet2<T>; 3],
}

fn dot4<T: Real>(a: &[Jet2<T>; 4], b: &[Jet2<T>; 4]) -> Jet2<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn det3<T: Real>(m: [[Jet2<T>; 3]; 3]) -> Jet2<T> {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Normal of `span(a, b, c)` in R⁴ with `det[a, b, c, N] > 0`.
fn cross4<T: Real>(a: &[Jet2<T>; 4], b: &[Jet2<T>; 4], c: &[Jet2<T>; 4]) -> [Jet2<T>; 4] {
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        det3([
            [a[cols[0]], a[cols[1]], a[cols[2]]],
            [b[cols[0]], b[cols[1]], b[cols[2]]],
            [c[cols[0]], c[cols[1]], c[cols[2]]],
        ])
    };
    [minor(0).scale(-T::one()), minor(1), minor(2).scale(-T::one()), minor(3)]
}

fn d4<T: Real>(v: &[Jet2<T>; 4], axis: usize) -> Result<[Jet2<T>; 4]> {
    let f = |c: &Jet2<T>| if axis == 0 { c.dx() } else { c.dy() };
    Ok([f(&v[0])?, f(&v[1])?, f(&v[2])?, f(&v[3])?])
}

impl<T: Real> S3Chart<T> {
    /// Geometry of `Ψ` at `pt` from jets of order `order ≥ 2`; derived fields have order `K − 2`.
    pub fn at(surface: &S3Surface, pt: [f64; 2], order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InsufficientOrder { needed: 2, got: order });
        }
        let x = Jet2::var_x(T::c(pt[0]), order);
        let y = Jet2::var_y(T::c(pt[1]), order);
        let psi = surface.eval(&x, &y)?;
        let dpsi = [d4(&psi, 0)?, d4(&psi, 1)?];
        let g = [dot4(&dpsi[0], &dpsi[0]), dot4(&dpsi[0], &dpsi[1]), dot4(&dpsi[1], &dpsi[1])];
        let det = g[0] * g[2] - g[1] * g[1];
        if !(det.value().f64() > 1e-14 * g[0].value().f64() * g[2].value().f64()) {
            return Err(Error::DegenerateChart { point: pt });
        }
        let inv = det.recip()?;
        let g_inv = [g[2] * inv, -(g[1] * inv), g[0] * inv];
        let nn = cross4(&psi, &dpsi[0], &dpsi[1]);
        let len = dot4(&nn, &nn).sqrt()?.recip()?;
        let normal = nn.map(|c| c * len);
        let dxx = d4(&dpsi[0], 0)?;
        let dxy = d4(&dpsi[0], 1)?;
        let dyy = d4(&dpsi[1], 1)?;
        let a = [dot4(&dxx, &normal), dot4(&dxy, &normal), dot4(&dyy, &normal)];
        let h = (g_inv[0] * a[0] + (g_inv[1] * a[1]).scale(T::c(2.0)) + g_inv[2] * a[2]).scale(T::c(0.5));
        let a_circ = [a[0] - h * g[0], a[1] - h * g[1], a[2] - h * g[2]];
        Ok(S3Chart { location: pt, psi, dpsi, normal, g, g_inv, a, h, a_circ })
    }

    /// `|Å_Ψ|²` with indices raised by `Ψ*ξ`.
    pub fn a_circ_norm2(&self) -> Jet2<T> {
        norm2_g(&self.g_inv, &self.a_circ)
    }
}

/// `Y = H_Ψ(Ψ, 1) + (N_Ψ, 0)`.
pub fn cgm_s3<T: Real>(surface: &S3Surface, pt: [f64; 2], order: usize) -> Result<CgmSample<T>> {
    let c = S3Chart::<T>::at(surface, pt, order)?;
    Ok(cgm_from_s3(&c))
}

pub fn cgm_from_s3<T: Real>(c: &S3Chart<T>) -> CgmSample<T> {
    let k = c.h.order();
    let psi = c.psi.map(|v| v.truncate(k));
    let n = c.normal.map(|v| v.truncate(k));
    let mut y = [Jet2::zero(k); 5];
    for i in 0..4 {
        y[i] = c.h * psi[i] + n[i];
    }
    y[4] = c.h;
    CgmSample { model: Model::S3, location: c.location, y, h: c.h }
}

/// Base-point values of `∇Y = (∇H_Ψ)(Ψ, 1) − Å_Ψ(∇Ψ, 0)`.
pub fn grad_cgm_s3_closed_form<T: Real>(c: &S3Chart<T>) -> Result<[[f64; 5]; 2]> {
    let hx = [c.h.dx()?.value().f64(), c.h.dy()?.value().f64()];
    let (a, gi) = (&c.a_circ, &c.g_inv);
    let mixed = [
        [a[0] * gi[0] + a[1] * gi[1], a[0] * gi[1] + a[1] * gi[2]],
        [a[1] * gi[0] + a[2] * gi[1], a[1] * gi[1] + a[2] * gi[2]],
    ];
    let mut out = [[0.0; 5]; 2];
    for i in 0..2 {
        for comp in 0..4 {
            let mut v = hx[i] * c.psi[comp].value().f64();
            for j in 0..2 {
                v -= mixed[i][j].value().f64() * c.dpsi[j][comp].value().f64();
            }
            out[i][comp] = v;
        }
        out[i][4] = hx[i];
    }
    Ok(out)
}

/// `max |Y_R³(π∘Ψ) − Y_S³(Ψ)|_ξ` over the sample points together with the S³ identity residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelComparison {
    pub max_deviation: f64,
    /// Worst of `||Ψ| − 1|`, `|⟨Ψ, N⟩|`, `||N| − 1|`.
    pub s3_invariants: f64,
    /// Jet derivative of the S³-model `Y` against its closed form, relative to `|∇Y|_ξ`.
    pub gradient_forms: f64,
    pub unit_norm: f64,
}

pub fn compare_models(surface: &S3Surface, points: &[[f64; 2]]) -> Result<ModelComparison> {
    let chart = surface.projected_chart();
    let rows = points
        .par_iter()
        .map(|&pt| -> Result<[f64; 4]> {
            let r = cgm_r3::<f64>(&chart, pt, 3)?.value();
            let c = S3Chart::<f64>::at(surface, pt, 3)?;
            let s = cgm_from_s3(&c);
            let v = s.value();
            let dev = (0..5).map(|i| (r[i] - v[i]).powi(2)).sum::<f64>().sqrt() / enorm(&r).max(1.0);
            let psi = c.psi.map(|j| j.value());
            let n = c.normal.map(|j| j.value());
            let inv = [
                (psi.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs(),
                (0..4).map(|i| psi[i] * n[i]).sum::<f64>().abs(),
                (n.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs(),
            ];
            let closed = grad_cgm_s3_closed_form(&c)?;
            let grad = grad_cgm(&s)?;
            let gv = [grad[0].map(|j| j.value()), grad[1].map(|j| j.value())];
            let h = c.h.value();
            let dh = [c.h.dx()?.value(), c.h.dy()?.value()];
            let mut gf: f64 = 0.0;
            for i in 0..2 {
                let dpsi: [f64; 4] = std::array::from_fn(|k| c.dpsi[i][k].value());
                let dn: [f64; 4] = std::array::from_fn(|k| if i == 0 { c.normal[k].dx() } else { c.normal[k].dy() }.map(|j| j.value()).unwrap_or(0.0));
                // the two terms of Y that cancel when it is constant
                let scale = (h.abs() * enorm(&dpsi) + dh[i].abs() * 2f64.sqrt() + enorm(&dn)).max(enorm(&dpsi));
                let d: [f64; 5] = std::array::from_fn(|k| gv[i][k] - closed[i][k]);
                gf = gf.max(rel(enorm(&d), scale));
            }
            let un = rel(eta_inner(&v, &v) - 1.0, enorm(&v).powi(2).max(1.0));
            Ok([dev, inv.into_iter().fold(0.0, f64::max), gf, un])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = [0.0f64; 4];
    for r in rows {
        for k in 0..4 {
            m[k] = m[k].max(r[k]);
        }
    }
    Ok(ModelComparison { max_deviation: m[0], s3_invariants: m[1], gradient_forms: m[2], unit_norm: m[3] })
}

/// Worst relative deviation of `CGM(Θ∘Φ)` from `M_Θ·CGM(Φ)` over the points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correspondence {
    pub max_relative: f64,
    pub worst_point: [f64; 2],
    /// `max |MᵀηM − η|`.
    pub lorentz_defect: f64,
}

pub fn lorentz_correspondence(chart: &ImmersionChart, theta: &ConformalMap3, points: &[[f64; 2]]) -> Result<Correspondence> {
    let m = lorentz_from_conformal(theta)?;
    let mapped = apply_conformal(theta, chart)?;
    let rows = points
        .par_iter()
        .map(|&pt| -> Result<(f64, [f64; 2])> {
            let y0 = cgm_r3::<f64>(chart, pt, 2)?.value();
            let y1 = cgm_r3::<f64>(&mapped, pt, 2)?.value();
            let my = m.apply(&LorentzVec(y0)).0;
            let d: [f64; 5] = std::array::from_fn(|k| y1[k] - my[k]);
            Ok((rel(enorm(&d), enorm(&y1).max(1.0)), pt))
        })
        .collect::<Result<Vec<_>>>()?;
    let (max_relative, worst_point) = rows.into_iter().fold((0.0, [0.0; 2]), |a, b| if b.0 > a.0 { b } else { a });
    Ok(Correspondence { max_relative, worst_point, lorentz_defect: m.lorentz_defect() })
}

/// Oscillation `sup |MY(x) − MY(y)|_ξ` of a sample cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Oscillation {
    /// Exact diameter of the transformed cloud.
    pub diameter: f64,
    /// Diagonal of the per-component envelope, an upper bound within a factor `√5`.
    pub envelope: f64,
}

pub fn oscillation(samples: &[[f64; 5]], m: &LorentzMatrix) -> Result<Oscillation> {
    if samples.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let ys: Vec<[f64; 5]> = samples.iter().map(|y| m.apply(&LorentzVec(*y)).0).collect();
    let diameter = ys
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            ys[i + 1..].iter().fold(0.0f64, |acc, b| acc.max((0..5).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>()))
        })
        .reduce(|| 0.0, f64::max)
        .sqrt();
    let mut lo = [f64::INFINITY; 5];
    let mut hi = [f64::NEG_INFINITY; 5];
    for y in &ys {
        for k in 0..5 {
            lo[k] = lo[k].min(y[k]);
            hi[k] = hi[k].max(y[k]);
        }
    }
    let envelope = (0..5).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt();
    Ok(Oscillation { diameter, envelope })
}

/// Values of `Y` on the annulus `s ≤ |x| ≤ s₁` around a puncture, `nr × nphi` samples.
pub fn annulus_samples(chart: &ImmersionChart, puncture: usize, s: f64, s1: f64, nr: usize, nphi: usize) -> Result<Vec<[f64; 5]>> {
    let p = *chart.puncture(puncture)?;
    if !(s >= chart.r_min && s < s1 && s1 <= p.radius) {
        return Err(Error::AnnulusOutOfRange(s));
    }
    let pts: Vec<[f64; 2]> = (0..nr)
        .flat_map(|i| {
            let r = s * (s1 / s).powf(i as f64 / (nr - 1).max(1) as f64);
            (0..nphi).map(move |j| p.point_at(r, std::f64::consts::TAU * j as f64 / nphi as f64))
        })
        .collect();
    pts.par_iter().map(|&pt| Ok(cgm_r3::<f64>(chart, pt, 2)?.value())).collect()
}
