//! Ball-restricted integrals and the monotonicity inequality.
//!
//! Each line `y = const` of the parameter grid is cut at the roots of `|Φ − x₀| − R`; the pieces inside
//! the ball are integrated with Gauss–Legendre, so the indicator never enters a quadrature rule.

use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::{domain_rules, GridSpec, Rule1D, GL_NODES};
use super::shape::shape_at;
use crate::error::{Error, Result};
use crate::surface::ImmersionChart;

/// Largest admissible fraction of the ball area lying in root-bracketing intervals.
pub const MAX_BOUNDARY_FRACTION: f64 = 0.05;

/// Sub-samples per bracket in the single adaptive subdivision step.
const SUBDIVISION: usize = 32;

/// Integrals over `M ∩ B(x₀, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallIntegrals {
    pub radius: f64,
    pub area: f64,
    /// `∫ H² dvol_g`.
    pub h2: f64,
    /// `∫ ⟨x − x₀, H⃗⟩ dvol_g`.
    pub x_dot_h: f64,
    /// Area of the root-bracketing intervals relative to `area`.
    pub boundary_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub x0: [f64; 3],
    pub t: f64,
    pub big_t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub inner: BallIntegrals,
    pub outer: BallIntegrals,
}

fn dist(chart: &ImmersionChart, x0: [f64; 3], pt: [f64; 2]) -> Result<f64> {
    let p = chart.point(pt)?;
    Ok(((p[0] - x0[0]).powi(2) + (p[1] - x0[1]).powi(2) + (p[2] - x0[2]).powi(2)).sqrt())
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn densities(chart: &ImmersionChart, x0: [f64; 3], pt: [f64; 2]) -> Result<[f64; 3]> {
    let s = shape_at::<f64>(chart, pt, 2)?;
    let dv = s.det_g.value().sqrt();
    let h = s.h.value();
    let mut xh = 0.0;
    for k in 0..3 {
        xh += (s.phi[k].value() - x0[k]) * h * s.normal[k].value();
    }
    let v = [dv, h * h * dv, xh * dv];
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::Blowup { point: pt });
    }
    Ok(v)
}

/// Integrates over `{x : |Φ(x, y) − x₀| < R}` along one line; returns the three integrals and the bracket area.
fn line_integrals(chart: &ImmersionChart, x0: [f64; 3], radius: f64, edges: &[f64], y: f64) -> Result<([f64; 3], f64)> {
    let d = |x: f64| -> Result<f64> { Ok(dist(chart, x0, [x, y])? - radius) };
    let gl = Rule1D::gauss_legendre(0.0, 1.0, 1);
    let mut acc = [0.0; 3];
    let mut bracket_area = 0.0;
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        let mut xs = vec![a];
        xs.extend(gl.nodes.iter().map(|u| a + (b - a) * u));
        xs.push(b);
        let ds = xs.iter().map(|&x| d(x)).collect::<Result<Vec<_>>>()?;
        let mut cuts = vec![a];
        for k in 0..xs.len() - 1 {
            if (ds[k] < 0.0) == (ds[k + 1] < 0.0) {
                continue;
            }
            // one level of subdivision narrows the bracket before bisection
            let (mut lo, mut hi, mut flo) = (xs[k], xs[k + 1], ds[k]);
            let h = (hi - lo) / SUBDIVISION as f64;
            let mut prev = (lo, flo);
            for s in 1..=SUBDIVISION {
                let x = if s == SUBDIVISION { xs[k + 1] } else { xs[k] + h * s as f64 };
                let fx = if s == SUBDIVISION { ds[k + 1] } else { d(x)? };
                if (fx < 0.0) != (prev.1 < 0.0) {
                    lo = prev.0;
                    flo = prev.1;
                    hi = x;
                    break;
                }
                prev = (x, fx);
            }
            let mid = 0.5 * (lo + hi);
            bracket_area += densities(chart, x0, [mid, y])?[0] * (hi - lo);
            cuts.push(bisect(d, lo, hi, flo)?);
        }
        cuts.push(b);
        for piece in cuts.windows(2) {
            let (p, q) = (piece[0], piece[1]);
            if q <= p || d(0.5 * (p + q))? >= 0.0 {
                continue;
            }
            for (u, w) in gl.nodes.iter().zip(&gl.weights) {
                let v = densities(chart, x0, [p + (q - p) * u, y])?;
                for k in 0..3 {
                    acc[k] += w * (q - p) * v[k];
                }
            }
        }
    }
    Ok((acc, bracket_area))
}

/// Area, `∫H²` and `∫⟨x − x₀, H⃗⟩` over the part of the surface inside `B(x₀, R)`.
pub fn ball_integrals(chart: &ImmersionChart, x0: [f64; 3], radius: f64, grid: GridSpec) -> Result<BallIntegrals> {
    if !(radius > 0.0) {
        return Err(Error::Config(format!("ball radius must be positive, got {radius}")));
    }
    let (_, ry) = domain_rules(&chart.domain, grid);
    let xr = chart.domain.x_range();
    let cells = (grid.nx / GL_NODES).max(1);
    let edges: Vec<f64> = (0..=cells).map(|i| xr[0] + (xr[1] - xr[0]) * i as f64 / cells as f64).collect();
    let rows = ry
        .nodes
        .par_iter()
        .zip(ry.weights.par_iter())
        .map(|(&y, &wy)| {
            let (v, b) = line_integrals(chart, x0, radius, &edges, y)?;
            Ok((v.map(|c| c * wy), b * wy))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = [0.0; 3];
    let mut bracket = 0.0;
    for (v, b) in rows {
        for k in 0..3 {
            acc[k] += v[k];
        }
        bracket += b;
    }
    let boundary_fraction = if acc[0] > 0.0 { bracket / acc[0] } else if bracket > 0.0 { f64::INFINITY } else { 0.0 };
    if boundary_fraction > MAX_BOUNDARY_FRACTION {
        return Err(Error::GridTooCoarse { fraction: boundary_fraction });
    }
    Ok(BallIntegrals { radius, area: acc[0], h2: acc[1], x_dot_h: acc[2], boundary_fraction })
}

/// Both sides of the monotonicity inequality for `0 < t < T`.
pub fn monotonicity_check(chart: &ImmersionChart, x0: [f64; 3], t: f64, big_t: f64, grid: GridSpec) -> Result<MonotonicityReport> {
    if !(t > 0.0 && t < big_t) {
        return Err(Error::RadiusOrder { t, big_t });
    }
    let inner = ball_integrals(chart, x0, t, grid)?;
    let outer = ball_integrals(chart, x0, big_t, grid)?;
    Ok(assemble(x0, inner, outer))
}

/// Combines precomputed ball integrals into a report.
pub fn assemble(x0: [f64; 3], inner: BallIntegrals, outer: BallIntegrals) -> MonotonicityReport {
    let (t, big_t) = (inner.radius, outer.radius);
    let a_outer = outer.area / (big_t * big_t);
    let a_inner = inner.area / (t * t);
    let shell = -0.25 * (outer.h2 - inner.h2);
    let x_outer = -outer.x_dot_h / (big_t * big_t);
    let x_inner = inner.x_dot_h / (t * t);
    let lhs = a_outer - a_inner;
    let rhs = shell + x_outer + x_inner;
    let scale = [a_outer, a_inner, shell, x_outer, x_inner].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = 1e-6 * scale.max(1e-12);
    MonotonicityReport { x0, t, big_t, lhs, rhs, tolerance, holds: lhs >= rhs - tolerance, inner, outer }
}
