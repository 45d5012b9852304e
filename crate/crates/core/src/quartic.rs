//! Bryant's quartic `q = ⟨Y_zz, Y_zz⟩_η` and diagnostics near punctures.
//!
//! Chart coordinates are `w = x + iy`. Near a puncture the disk coordinate `z = r e^{iα}` is the
//! conjugate of `e^{∓w}`, so `q_disk(z) = conj(q_w) / z⁴`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cgm::cgm_parts;
use crate::error::{Error, Result};
use crate::geometry::shape::shape_at;
use crate::jet::ComplexJet2;
use crate::minkowski::{eta_inner_cjet, euclid_norm2_cjet};
use crate::real::{Extended, Precision, Real};
use crate::surface::{CylinderEnd, ImmersionChart, Puncture};

/// Largest metric anisotropy for which `(dz)⁴` coefficients are meaningful.
pub const ANISOTROPY_TOL: f64 = 1e-6;
/// Absolute floor in the holomorphicity normalization.
pub const Q_FLOOR: f64 = 1e-14;
/// `|q| / q_scale` at or below this counts as rounding level.
pub const VACUOUS_TOL: f64 = 1e-8;
/// Angular samples per circle; the doubled count is the refinement check.
pub const ANGLES: usize = 256;
/// Below this disk radius fits switch to extended precision.
pub const EXTENDED_BELOW: f64 = 1e-3;
/// A fitted slope is meaningful only below this RMS log-residual.
pub const FIT_RESIDUAL_MAX: f64 = 0.1;

/// `q`, `∂_z̄q` and their scales at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticSample {
    /// Chart point.
    pub point: [f64; 2],
    /// Coordinate the coefficient refers to: the chart point, or the disk coordinate of a puncture.
    pub z: [f64; 2],
    pub q: [f64; 2],
    pub dzbar_q: [f64; 2],
    /// `(|∂²_zz(H·(Φ, …))|_ξ + |∂²_zz(n, …)|_ξ)²`, the size of the terms whose pairing is `q`.
    pub q_scale: f64,
    /// The matching size of the terms in `∂_z̄q = 2⟨Y_zz, Y_zzz̄⟩_η`.
    pub dzbar_scale: f64,
    /// `|z|⁴|q|`, `|z|²|q|`, `|z||q|`.
    pub weighted: [f64; 3],
}

impl QuarticSample {
    pub fn abs_q(&self) -> f64 {
        self.q[0].hypot(self.q[1])
    }

    pub fn arg_q(&self) -> f64 {
        self.q[1].atan2(self.q[0])
    }

    pub fn abs_dzbar_q(&self) -> f64 {
        self.dzbar_q[0].hypot(self.dzbar_q[1])
    }

    /// `|q| / q_scale`, independent of the coordinate.
    pub fn relative(&self) -> f64 {
        if self.q_scale > 0.0 {
            self.abs_q() / self.q_scale
        } else {
            self.abs_q()
        }
    }

    /// `|∂_z̄q| / max(|q|, dzbar_scale, floor)`.
    pub fn holomorphicity_residual(&self) -> f64 {
        self.abs_dzbar_q() / self.abs_q().max(self.dzbar_scale).max(Q_FLOOR)
    }
}

/// Chart-coordinate pieces at the base point; `parts_*` hold the two terms of `Y` separately.
struct RawQuartic {
    q: Complex64,
    dzbar_q: Complex64,
    parts_z: [[Complex64; 5]; 2],
    parts_zz: [[Complex64; 5]; 2],
    parts_zzbar: [f64; 2],
}

fn cvalues<T: Real>(v: &[ComplexJet2<T>; 5]) -> [Complex64; 5] {
    v.map(|c| {
        let (a, b) = c.value();
        Complex64::new(a.f64(), b.f64())
    })
}

fn dz5<T: Real>(v: &[ComplexJet2<T>; 5]) -> Result<[ComplexJet2<T>; 5]> {
    let mut out = *v;
    for (o, c) in out.iter_mut().zip(v) {
        *o = c.dz()?;
    }
    Ok(out)
}

fn dzbar5<T: Real>(v: &[ComplexJet2<T>; 5]) -> Result<[ComplexJet2<T>; 5]> {
    let mut out = *v;
    for (o, c) in out.iter_mut().zip(v) {
        *o = c.dzbar()?;
    }
    Ok(out)
}

fn raw_quartic<T: Real>(chart: &ImmersionChart, pt: [f64; 2], order: usize) -> Result<RawQuartic> {
    if order < 5 {
        return Err(Error::InsufficientOrder { needed: 5, got: order });
    }
    let s = shape_at::<T>(chart, pt, order)?;
    if s.anisotropy > ANISOTROPY_TOL {
        return Err(Error::NonConformal { point: pt, anisotropy: s.anisotropy });
    }
    let (a, b) = cgm_parts(&s);
    let (a, b) = (a.map(ComplexJet2::from_real), b.map(ComplexJet2::from_real));
    let (az, bz) = (dz5(&a)?, dz5(&b)?);
    let (azz, bzz) = (dz5(&az)?, dz5(&bz)?);
    let yzz: [ComplexJet2<T>; 5] = std::array::from_fn(|k| ComplexJet2 { re: azz[k].re + bzz[k].re, im: azz[k].im + bzz[k].im });
    let q = eta_inner_cjet(&yzz, &yzz);
    let dq = q.dzbar()?;
    let (qr, qi) = q.value();
    let (dr, di) = dq.value();
    Ok(RawQuartic {
        q: Complex64::new(qr.f64(), qi.f64()),
        dzbar_q: Complex64::new(dr.f64(), di.f64()),
        parts_z: [cvalues(&az), cvalues(&bz)],
        parts_zz: [cvalues(&azz), cvalues(&bzz)],
        parts_zzbar: [euclid_norm2_cjet(&dzbar5(&azz)?).f64().sqrt(), euclid_norm2_cjet(&dzbar5(&bzz)?).f64().sqrt()],
    })
}

fn raw_at(chart: &ImmersionChart, pt: [f64; 2], order: usize, precision: Precision) -> Result<RawQuartic> {
    match precision {
        Precision::Double => raw_quartic::<f64>(chart, pt, order),
        Precision::Extended => raw_quartic::<Extended>(chart, pt, order),
    }
}

fn norm(v: &[Complex64; 5]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn weights(z: Complex64, q: Complex64) -> [f64; 3] {
    let (r, a) = (z.norm(), q.norm());
    [r.powi(4) * a, r * r * a, r * a]
}

/// Quartic coefficient in the chart coordinate at `pt`, from order-5 jets.
pub fn quartic_at(chart: &ImmersionChart, pt: [f64; 2]) -> Result<QuarticSample> {
    quartic_at_order(chart, pt, 5, Precision::Double)
}

pub fn quartic_at_order(chart: &ImmersionChart, pt: [f64; 2], order: usize, precision: Precision) -> Result<QuarticSample> {
    let r = raw_at(chart, pt, order, precision)?;
    let z = Complex64::new(pt[0], pt[1]);
    let n = norm(&r.parts_zz[0]) + norm(&r.parts_zz[1]);
    Ok(QuarticSample {
        point: pt,
        z: [pt[0], pt[1]],
        q: [r.q.re, r.q.im],
        dzbar_q: [r.dzbar_q.re, r.dzbar_q.im],
        q_scale: n * n,
        dzbar_scale: 2.0 * n * (r.parts_zzbar[0] + r.parts_zzbar[1]),
        weighted: weights(z, r.q),
    })
}

/// Quartic coefficient in the disk coordinate `z = r e^{iα}` of a puncture.
pub fn quartic_in_disk(chart: &ImmersionChart, puncture: &Puncture, r: f64, alpha: f64, precision: Precision) -> Result<QuarticSample> {
    let pt = puncture.point_at(r, alpha);
    let raw = raw_at(chart, pt, 5, precision)?;
    let z = Complex64::from_polar(r, alpha);
    // ζ = conj z is holomorphic in w with w = ∓ln ζ
    let sign = match puncture.end {
        CylinderEnd::Upper => -1.0,
        CylinderEnd::Lower => 1.0,
    };
    let z4 = z.powi(4);
    let q = raw.q.conj() / z4;
    let dzbar_q = raw.dzbar_q.conj() * sign / (z4 * z.conj());
    // Y_ζζ = (Y_ww − sign·Y_w) / ζ², term by term
    let part = |i: usize| -> f64 {
        let v: [Complex64; 5] = std::array::from_fn(|k| raw.parts_zz[i][k] - raw.parts_z[i][k] * sign);
        norm(&v)
    };
    let n = (part(0) + part(1)) / (r * r);
    let zzbar = (raw.parts_zzbar[0] + raw.parts_zzbar[1]) / r.powi(3);
    Ok(QuarticSample {
        point: pt,
        z: [z.re, z.im],
        q: [q.re, q.im],
        dzbar_q: [dzbar_q.re, dzbar_q.im],
        q_scale: n * n,
        dzbar_scale: 2.0 * n * zzbar,
        weighted: weights(z, q),
    })
}

/// Normalized `∂_z̄q` residual over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct HolomorphicityScan {
    pub max_residual: f64,
    pub worst_point: [f64; 2],
    /// Largest `|q| / q_scale`.
    pub max_relative_q: f64,
    pub samples: Vec<QuarticSample>,
}

/// Scan of the whole domain at cell centres of an `nx × ny` grid.
pub fn holomorphicity_scan(chart: &ImmersionChart, nx: usize, ny: usize) -> Result<HolomorphicityScan> {
    let xr = chart.domain.x_range();
    let yr = chart.domain.y_range();
    holomorphicity_scan_on(chart, [xr, yr], nx, ny)
}

/// Scan of the box `[x-range, y-range]`.
pub fn holomorphicity_scan_on(chart: &ImmersionChart, bx: [[f64; 2]; 2], nx: usize, ny: usize) -> Result<HolomorphicityScan> {
    if nx == 0 || ny == 0 {
        return Err(Error::EmptyRegion);
    }
    let pts: Vec<[f64; 2]> = (0..nx)
        .flat_map(|i| {
            (0..ny).map(move |j| {
                [
                    bx[0][0] + (bx[0][1] - bx[0][0]) * (i as f64 + 0.5) / nx as f64,
                    bx[1][0] + (bx[1][1] - bx[1][0]) * (j as f64 + 0.5) / ny as f64,
                ]
            })
        })
        .collect();
    let samples = pts.par_iter().map(|&pt| quartic_at(chart, pt)).collect::<Result<Vec<_>>>()?;
    let mut max_residual: f64 = 0.0;
    let mut worst_point = pts[0];
    let mut max_relative_q: f64 = 0.0;
    for s in &samples {
        let v = s.holomorphicity_residual();
        if v > max_residual {
            max_residual = v;
            worst_point = s.point;
        }
        max_relative_q = max_relative_q.max(s.relative());
    }
    Ok(HolomorphicityScan { max_residual, worst_point, max_relative_q, samples })
}

/// Fourth-order central differences of `q` at `pt`, combined into `∂_z̄q`.
pub fn fd_dzbar_q(chart: &ImmersionChart, pt: [f64; 2], h: f64) -> Result<[f64; 2]> {
    let q = |dx: f64, dy: f64| -> Result<Complex64> {
        let s = quartic_at(chart, [pt[0] + dx, pt[1] + dy])?;
        Ok(Complex64::new(s.q[0], s.q[1]))
    };
    let d = |ex: f64, ey: f64| -> Result<Complex64> {
        Ok((q(-2.0 * h * ex, -2.0 * h * ey)? - q(2.0 * h * ex, 2.0 * h * ey)? + (q(h * ex, h * ey)? - q(-h * ex, -h * ey)?) * 8.0)
            / (12.0 * h))
    };
    let v = (d(1.0, 0.0)? + d(0.0, 1.0)? * Complex64::i()) * 0.5;
    Ok([v.re, v.im])
}

/// Least-squares power law `values ∼ C·r^slope`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    /// Smallest and largest radius used.
    pub window: [f64; 2],
}

impl ExponentFit {
    pub fn is_meaningful(&self) -> bool {
        self.residual < FIT_RESIDUAL_MAX
    }
}

/// Fits `log v = slope·log r + c` over all pairs.
pub fn fit_power_law(radii: &[f64], values: &[f64]) -> Result<ExponentFit> {
    if radii.len() != values.len() {
        return Err(Error::Config(format!("{} radii but {} values", radii.len(), values.len())));
    }
    if radii.len() < 2 {
        return Err(Error::Config("a fit needs at least two radii".into()));
    }
    if values.iter().any(|v| !(*v > 0.0)) || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::DegenerateFit);
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (slope, intercept, residual) = least_squares(&xs, &ys);
    let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().cloned().fold(0.0, f64::max);
    Ok(ExponentFit { radii: radii.to_vec(), values: values.to_vec(), slope, intercept, residual, window: [lo, hi] })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Sup over a circle of a sampled magnitude, with the doubled-angle check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleSup {
    pub radius: f64,
    pub sup: f64,
    /// Largest `|q| / q_scale` on the circle, when the quantity is a quartic.
    pub relative: f64,
    /// Relative change of the sup when the angle count doubles.
    pub doubling_change: f64,
    pub precision: Precision,
}

fn circle_sup(n: usize, f: &(dyn Fn(f64) -> Result<(f64, f64)> + Sync)) -> Result<(f64, f64)> {
    let vals = (0..n)
        .into_par_iter()
        .map(|k| f(std::f64::consts::TAU * k as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(vals.into_iter().fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1.max(b.1))))
}

/// `sup_α` of `f(α) = (value, relative)` with 256 angles, refined to 512 when they disagree by more than 1%.
pub fn sup_on_circle(radius: f64, precision: Precision, f: &(dyn Fn(f64) -> Result<(f64, f64)> + Sync)) -> Result<CircleSup> {
    let (a, ra) = circle_sup(ANGLES, f)?;
    let (b, rb) = circle_sup(2 * ANGLES, f)?;
    let doubling_change = if b > 0.0 { (b - a).abs() / b } else { 0.0 };
    Ok(CircleSup { radius, sup: b, relative: ra.max(rb), doubling_change, precision })
}

fn precision_for(radius: f64, requested: Precision) -> Precision {
    if radius < EXTENDED_BELOW {
        Precision::Extended
    } else {
        requested
    }
}

/// Largest disagreement between double and extended `|q|` at one angle, relative to `q_scale`.
fn cancellation_loss(chart: &ImmersionChart, p: &Puncture, r: f64) -> Result<f64> {
    let a = quartic_in_disk(chart, p, r, 0.3, Precision::Double)?;
    let b = quartic_in_disk(chart, p, r, 0.3, Precision::Extended)?;
    let d = (a.q[0] - b.q[0]).hypot(a.q[1] - b.q[1]);
    Ok(if b.q_scale > 0.0 { d / b.q_scale } else { d })
}

/// Outcome of fitting `sup_{|z|=r} |q|` against `r`.
#[derive(Debug, Clone, Serialize)]
pub struct PoleOrderReport {
    pub circles: Vec<CircleSup>,
    /// `None` when `q` is at rounding level on every circle.
    pub fit: Option<ExponentFit>,
    pub vacuous: bool,
    /// Slope at least `−0.1`: `q` bounded at the puncture.
    pub bounded: bool,
    /// Slope at least `−2.1`: pole order at most two.
    pub within_generic_bound: bool,
    /// Radii dropped from the window because double precision lost more than `1e-6` there.
    pub excluded: Vec<f64>,
}

/// Pole order of `q` at a puncture from sup-over-circle magnitudes.
pub fn pole_order_fit(chart: &ImmersionChart, puncture: usize, radii: &[f64], precision: Precision) -> Result<PoleOrderReport> {
    let p = *chart.puncture(puncture)?;
    check_radii(chart, &p, radii)?;
    let circles = radii
        .iter()
        .map(|&r| {
            let prec = precision_for(r, precision);
            sup_on_circle(r, prec, &|a| {
                let s = quartic_in_disk(chart, &p, r, a, prec)?;
                Ok((s.abs_q(), s.relative()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if circles.iter().all(|c| c.relative <= VACUOUS_TOL) {
        return Ok(PoleOrderReport {
            circles,
            fit: None,
            vacuous: true,
            bounded: true,
            within_generic_bound: true,
            excluded: vec![],
        });
    }
    let mut idx: Vec<usize> = (0..radii.len()).collect();
    idx.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    let mut excluded = vec![];
    let lossy = idx.iter().any(|&i| circles[i].precision == Precision::Double && cancellation_loss(chart, &p, radii[i]).map(|l| l > 1e-6).unwrap_or(true));
    if lossy && idx.len() > 4 {
        excluded = idx[..2].iter().map(|&i| radii[i]).collect();
        idx.drain(..2);
    }
    let rs: Vec<f64> = idx.iter().map(|&i| radii[i]).collect();
    let vs: Vec<f64> = idx.iter().map(|&i| circles[i].sup).collect();
    let fit = fit_power_law(&rs, &vs)?;
    Ok(PoleOrderReport {
        bounded: fit.slope >= -0.1,
        within_generic_bound: fit.slope >= -2.1,
        fit: Some(fit),
        circles,
        vacuous: false,
        excluded,
    })
}

fn check_radii(chart: &ImmersionChart, p: &Puncture, radii: &[f64]) -> Result<()> {
    let xr = chart.domain.x_range();
    for &r in radii {
        let t = p.t_of_radius(r);
        if !(r > chart.r_min) || r > p.radius || t < xr[0] || t > xr[1] {
            return Err(Error::RadiusOutOfDomain(r));
        }
    }
    Ok(())
}

/// `|H| ≈ a·ln r + b`, used when the power-law slope is flat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogFit {
    pub a: f64,
    pub b: f64,
    /// RMS residual relative to the mean of `|H|`.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchExponents {
    /// Slope of `sup|Φ − p|`, equal to `1 + θ`.
    pub phi_fit: ExponentFit,
    /// Slope of `sup|∇Φ|` in the disk coordinate, equal to `θ`.
    pub grad_fit: ExponentFit,
    pub theta_phi: f64,
    pub theta_grad: f64,
    /// `|θ_phi − θ_grad|`.
    pub disagreement: f64,
    pub consistent: bool,
    /// Slope of `sup|H|`, equal to `−α`.
    pub h_fit: ExponentFit,
    pub alpha: f64,
    /// Filled when `|slope| < 0.05`, or when the logarithmic model fits better than the power law.
    pub h_log: Option<LogFit>,
}

impl BranchExponents {
    /// Branch order estimate from the two fits.
    pub fn theta(&self) -> f64 {
        0.5 * (self.theta_phi + self.theta_grad)
    }
}

fn branch_magnitudes<T: Real>(chart: &ImmersionChart, p: &Puncture, image: [f64; 3], r: f64, alpha: f64) -> Result<[f64; 3]> {
    let pt = p.point_at(r, alpha);
    let s = shape_at::<T>(chart, pt, 2)?;
    let d: f64 = (0..3).map(|k| (s.phi[k].value().f64() - image[k]).powi(2)).sum::<f64>().sqrt();
    let g = s.g.map(|c| c.value().f64());
    // |∇_z Φ| in the disk coordinate: |dw/dz| = 1/r
    let grad = (0.5 * (g[0] + g[2])).sqrt() / r;
    Ok([d, grad, s.h.value().f64().abs()])
}

/// Exponents θ (from `|Φ − p|` and `|∇Φ|`) and α (from `|H|`) at a branch puncture.
pub fn branch_exponents(chart: &ImmersionChart, puncture: usize, radii: &[f64], precision: Precision) -> Result<BranchExponents> {
    let p = *chart.puncture(puncture)?;
    let image = p.image.ok_or_else(|| Error::Config(format!("puncture {puncture} has no image point")))?;
    check_radii(chart, &p, radii)?;
    let sups = radii
        .iter()
        .map(|&r| {
            let prec = precision_for(r, precision);
            let vals = (0..ANGLES)
                .into_par_iter()
                .map(|k| {
                    let a = std::f64::consts::TAU * k as f64 / ANGLES as f64;
                    match prec {
                        Precision::Double => branch_magnitudes::<f64>(chart, &p, image, r, a),
                        Precision::Extended => branch_magnitudes::<Extended>(chart, &p, image, r, a),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(vals.into_iter().fold([0.0f64; 3], |m, v| [m[0].max(v[0]), m[1].max(v[1]), m[2].max(v[2])]))
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |k: usize| sups.iter().map(|s| s[k]).collect::<Vec<f64>>();
    let phi_fit = fit_power_law(radii, &col(0))?;
    let grad_fit = fit_power_law(radii, &col(1))?;
    let h_fit = fit_power_law(radii, &col(2))?;
    let theta_phi = phi_fit.slope - 1.0;
    let theta_grad = grad_fit.slope;
    let disagreement = (theta_phi - theta_grad).abs();
    let h_log = {
        let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let hs = col(2);
        let (a, b, res) = least_squares(&xs, &hs);
        let mean = hs.iter().sum::<f64>() / hs.len() as f64;
        let fit = LogFit { a, b, residual: if mean > 0.0 { res / mean } else { res } };
        (h_fit.slope.abs() < 0.05 || fit.residual < h_fit.residual).then_some(fit)
    };
    Ok(BranchExponents {
        alpha: -h_fit.slope,
        phi_fit,
        grad_fit,
        theta_phi,
        theta_grad,
        disagreement,
        consistent: disagreement <= 0.05,
        h_fit,
        h_log,
    })
}

/// One row of the scaling table: `|z_k|·sup_{B_{2|z_k|}∖B_{|z_k|/2}} |q|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub radius: f64,
    pub sup_q: f64,
    pub weighted: f64,
    /// Largest `|q| / q_scale` over the annulus.
    pub relative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// `q` at rounding level on every annulus.
    pub vacuous: bool,
    pub strictly_decreasing: bool,
    /// Slope of `log weighted` against `log r`; positive means decay.
    pub decay_slope: Option<f64>,
    /// Vacuous, or strictly decreasing with decay slope above `0.1`.
    pub o1_verdict: bool,
}

/// Radial samples per annulus.
const ANNULUS_RADII: usize = 9;

/// Scaling table from a sampler `(r, α) ↦ (|q|, relative)` in a disk coordinate.
pub fn scaling_table(radii: &[f64], sampler: &(dyn Fn(f64, f64) -> Result<(f64, f64)> + Sync)) -> Result<ScalingTable> {
    if radii.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let rows = radii
        .iter()
        .map(|&rk| {
            let mut sup: f64 = 0.0;
            let mut rel: f64 = 0.0;
            for i in 0..ANNULUS_RADII {
                let r = 0.5 * rk * 4f64.powf(i as f64 / (ANNULUS_RADII - 1) as f64);
                let (a, b) = circle_sup(ANGLES, &|al| sampler(r, al))?;
                sup = sup.max(a);
                rel = rel.max(b);
            }
            Ok(ScalingRow { radius: rk, sup_q: sup, weighted: rk * sup, relative: rel })
        })
        .collect::<Result<Vec<_>>>()?;
    let vacuous = rows.iter().all(|r| r.relative <= VACUOUS_TOL);
    let mut by_r = rows.clone();
    by_r.sort_by(|a, b| b.radius.total_cmp(&a.radius));
    let strictly_decreasing = by_r.windows(2).all(|w| w[1].weighted < w[0].weighted);
    let decay_slope = if by_r.len() >= 2 && by_r.iter().all(|r| r.weighted > 0.0) {
        let xs: Vec<f64> = by_r.iter().map(|r| r.radius.ln()).collect();
        let ys: Vec<f64> = by_r.iter().map(|r| r.weighted.ln()).collect();
        Some(least_squares(&xs, &ys).0)
    } else {
        None
    };
    let o1_verdict = vacuous || (strictly_decreasing && decay_slope.map(|s| s > 0.1).unwrap_or(true));
    Ok(ScalingTable { rows, vacuous, strictly_decreasing, decay_slope, o1_verdict })
}

/// Scaling table of the computed quartic at a puncture.
pub fn scaling_estimate(chart: &ImmersionChart, puncture: usize, radii: &[f64]) -> Result<ScalingTable> {
    let p = *chart.puncture(puncture)?;
    let probe: Vec<f64> = radii.iter().flat_map(|&r| [0.5 * r, 2.0 * r]).collect();
    check_radii(chart, &p, &probe)?;
    scaling_table(radii, &|r, a| {
        let s = quartic_in_disk(chart, &p, r, a, Precision::Double)?;
        Ok((s.abs_q(), s.relative()))
    })
}

/// Control with an injected coefficient `q = c·z^{−order}` and `q_scale = |q|`.
pub fn synthetic_pole_table(order: i32, c: f64, radii: &[f64]) -> Result<ScalingTable> {
    scaling_table(radii, &|r, a| {
        let q = Complex64::from_polar(r, a).powi(-order) * c;
        Ok((q.norm(), q.norm()))
    })
}
