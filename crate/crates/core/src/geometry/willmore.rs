use serde::Serialize;

use super::energy::box_energies;
use super::quadrature::{integrate, Rule1D};
use super::shape::{cross_jet, shape_at};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::surface::{ImmersionChart, TestField};

/// Pointwise Willmore residual `Δ_g H + |Å|²_g H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WillmoreResidual {
    pub point: [f64; 2],
    pub residual: f64,
    /// `|residual| / max(|Δ_g H|, |Å|² |H|, |A|³_g)`.
    pub normalized: f64,
}

/// Residual of the Willmore equation at `pt` from order-4 jets.
pub fn willmore_residual(chart: &ImmersionChart, pt: [f64; 2]) -> Result<WillmoreResidual> {
    willmore_residual_order(chart, pt, 4)
}

pub fn willmore_residual_order(chart: &ImmersionChart, pt: [f64; 2], order: usize) -> Result<WillmoreResidual> {
    if order < 4 {
        return Err(Error::InsufficientOrder { needed: 4, got: order });
    }
    let s = shape_at::<f64>(chart, pt, order)?;
    let lap = s.laplace_beltrami_h()?.value();
    let h = s.h.value();
    let ac2 = s.a_circ_norm2.value();
    let residual = lap + ac2 * h;
    let scale = lap.abs().max(ac2 * h.abs()).max(s.a_norm2.value().powf(1.5));
    let normalized = if scale > 0.0 { residual.abs() / scale } else { residual.abs() };
    Ok(WillmoreResidual { point: pt, residual, normalized })
}

/// Constant relating the weak form to `d/dt W(Φ + t w)`.
///
/// With `H` the mean of the principal curvatures and `H⃗ = H n`,
/// `d/dt W = −½ ∫ [H⃗·(Δw − 3 div π_n∇w) − (∇⊥n × H⃗)·∇w] dx` in a conformal chart, all operators flat.
pub const WEAK_FORM_FACTOR: f64 = -0.5;
/// Sign of the `∇⊥n × H⃗` term in the same normalization.
pub const WEAK_FORM_CROSS_SIGN: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakFormPairing {
    /// `δW(Φ)·w`, normalized to equal the first variation of W.
    pub value: f64,
    /// `∫ H⃗·(Δw − 3 div π_n∇w) dx`.
    pub bulk: f64,
    /// `∫ (∇⊥n × H⃗)·∇w dx`.
    pub cross: f64,
    /// The same two integrands taken against `dvol_g` instead of `dx`.
    pub bulk_dvol: f64,
    pub cross_dvol: f64,
    /// Difference against the half-resolution rule.
    pub error: f64,
    pub support: [[f64; 2]; 2],
}

impl WeakFormPairing {
    /// The literal combination with `dvol_g` as measure.
    pub fn literal_dvol(&self) -> f64 {
        WEAK_FORM_FACTOR * (self.bulk_dvol + WEAK_FORM_CROSS_SIGN * self.cross_dvol)
    }
}

fn pairing_integrands(chart: &ImmersionChart, field: &TestField, pt: [f64; 2]) -> Result<[f64; 4]> {
    let w = field.eval::<f64>(chart, pt, 2)?;
    if w.iter().all(|c| c.coeffs().iter().all(|v| *v == 0.0)) {
        return Ok([0.0; 4]);
    }
    let s = shape_at::<f64>(chart, pt, 3)?;
    if s.anisotropy > 1e-6 {
        return Err(Error::NonConformal { point: pt, anisotropy: s.anisotropy });
    }
    let n1: [Jet2; 3] = s.normal.map(|c| c.truncate(1));
    let h = s.h.value();
    let hv = n1.map(|c| h * c.value());
    let dw = [w.map(|c| c.dx().expect("order 2")), w.map(|c| c.dy().expect("order 2"))];
    let mut div_p = 0.0;
    for (i, dwi) in dw.iter().enumerate() {
        let proj = n1[0] * dwi[0] + n1[1] * dwi[1] + n1[2] * dwi[2];
        for k in 0..3 {
            let p = proj * n1[k];
            let d = if i == 0 { p.dx()? } else { p.dy()? };
            div_p += hv[k] * d.value();
        }
    }
    let mut bulk = -3.0 * div_p;
    for k in 0..3 {
        bulk += hv[k] * w[k].laplacian_flat()?.value();
    }
    let dn = s.dnormal()?;
    let dn0 = [dn[0].map(|c| c.truncate(0)), dn[1].map(|c| c.truncate(0))];
    let perp = [dn0[1].map(|c| -c), dn0[0]];
    let hj = hv.map(|v| Jet2::constant(v, 0));
    let mut cross = 0.0;
    for i in 0..2 {
        let c = cross_jet(&perp[i], &hj);
        for k in 0..3 {
            cross += c[k].value() * dw[i][k].value();
        }
    }
    let dv = s.det_g.value().sqrt();
    Ok([bulk, cross, bulk * dv, cross * dv])
}

fn pairing_on(chart: &ImmersionChart, field: &TestField, bx: [[f64; 2]; 2], cells: [usize; 2]) -> Result<[f64; 4]> {
    let rx = Rule1D::gauss_legendre(bx[0][0], bx[0][1], cells[0]);
    let ry = Rule1D::gauss_legendre(bx[1][0], bx[1][1], cells[1]);
    Ok(integrate(&rx, &ry, |pt| pairing_integrands(chart, field, pt))?.value)
}

/// Default Gauss–Legendre cells per axis over the support box.
pub const PAIRING_CELLS: [usize; 2] = [8, 8];

/// `δW(Φ)·w` integrated over the support box of `w`.
pub fn weak_form_pairing(chart: &ImmersionChart, field: &TestField) -> Result<WeakFormPairing> {
    let bx = field.support(chart)?;
    weak_form_pairing_on(chart, field, bx, PAIRING_CELLS)
}

/// Pairing over an explicit box, which must contain the support of `w`.
pub fn weak_form_pairing_on(
    chart: &ImmersionChart,
    field: &TestField,
    bx: [[f64; 2]; 2],
    cells: [usize; 2],
) -> Result<WeakFormPairing> {
    if bx[0][1] <= bx[0][0] || bx[1][1] <= bx[1][0] {
        return Ok(WeakFormPairing { value: 0.0, bulk: 0.0, cross: 0.0, bulk_dvol: 0.0, cross_dvol: 0.0, error: 0.0, support: bx });
    }
    let v = pairing_on(chart, field, bx, cells)?;
    let c = pairing_on(chart, field, bx, [(cells[0] / 2).max(1), (cells[1] / 2).max(1)])?;
    let combine = |v: &[f64; 4]| WEAK_FORM_FACTOR * (v[0] + WEAK_FORM_CROSS_SIGN * v[1]);
    let value = combine(&v);
    Ok(WeakFormPairing {
        value,
        bulk: v[0],
        cross: v[1],
        bulk_dvol: v[2],
        cross_dvol: v[3],
        error: (value - combine(&c)).abs(),
        support: bx,
    })
}

/// Richardson-extrapolated central difference of `t ↦ W(Φ + t w)` restricted to the support box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdDerivative {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
}

pub fn fd_willmore_derivative(chart: &ImmersionChart, field: &TestField, cells: [usize; 2]) -> Result<FdDerivative> {
    let bx = field.support(chart)?;
    let w_at = |t: f64| -> Result<f64> { Ok(box_energies(&chart.perturbed(field, t), bx, cells)?.w) };
    let central = |h: f64| -> Result<f64> { Ok((w_at(h)? - w_at(-h)?) / (2.0 * h)) };
    let coarse = central(1e-3)?;
    let fine = central(1e-4)?;
    Ok(FdDerivative { coarse, fine, extrapolated: (100.0 * fine - coarse) / 99.0 })
}

/// `‖w‖_{C²}`: max over a sample grid of the support of all derivatives up to order two.
pub fn c2_norm(chart: &ImmersionChart, field: &TestField, n: usize) -> Result<f64> {
    let bx = field.support(chart)?;
    let mut m: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let pt = [
                bx[0][0] + (bx[0][1] - bx[0][0]) * i as f64 / n as f64,
                bx[1][0] + (bx[1][1] - bx[1][0]) * j as f64 / n as f64,
            ];
            if chart.check_point(pt).is_err() {
                continue;
            }
            for c in field.eval::<f64>(chart, pt, 2)? {
                for a in 0..=2 {
                    for b in 0..=(2 - a) {
                        m = m.max(c.derivative(a, b).abs());
                    }
                }
            }
        }
    }
    Ok(m)
}
