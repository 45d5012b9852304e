use serde::Serialize;

use super::quadrature::{domain_rules, integrate, GridSpec, Rule1D, GL_NODES};
use super::shape::shape_at;
use crate::error::{Error, Result};
use crate::surface::ImmersionChart;

/// The five curvature integrals of an immersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyValues {
    /// `∫ H² dvol_g`.
    pub w: f64,
    /// `∫ |Å|²_g dvol_g`.
    pub e: f64,
    /// `∫ |A|²_g dvol_g`.
    pub total_a: f64,
    pub area: f64,
    /// `∫ K dvol_g`.
    pub gauss_int: f64,
}

impl EnergyValues {
    fn from_array(v: [f64; 5]) -> Self {
        EnergyValues { w: v[0], e: v[1], total_a: v[2], area: v[3], gauss_int: v[4] }
    }

    fn to_array(self) -> [f64; 5] {
        [self.w, self.e, self.total_a, self.area, self.gauss_int]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub surface: String,
    pub grid: GridSpec,
    pub values: EnergyValues,
    /// `max(|Q(grid) − Q(grid/2)|, rounding floor)` per quantity.
    pub error: EnergyValues,
    pub coarse: EnergyValues,
}

impl EnergyReport {
    /// `|totalA − (E + 2W)|`, which vanishes pointwise in exact arithmetic.
    pub fn split_defect(&self) -> f64 {
        (self.values.total_a - self.values.e - 2.0 * self.values.w).abs()
    }
}

fn densities(chart: &ImmersionChart, pt: [f64; 2]) -> Result<[f64; 5]> {
    let s = shape_at::<f64>(chart, pt, 2)?;
    let dv = s.det_g.value().sqrt();
    let h = s.h.value();
    Ok([h * h * dv, s.a_circ_norm2.value() * dv, s.a_norm2.value() * dv, dv, s.gauss.value() * dv])
}

fn integrate_rules(chart: &ImmersionChart, rx: &Rule1D, ry: &Rule1D) -> Result<([f64; 5], [f64; 5])> {
    let i = integrate(rx, ry, |pt| densities(chart, pt))?;
    Ok((i.value, i.floor()))
}

/// Curvature integrals on `grid`, with the half-resolution grid as error estimate.
pub fn energies(chart: &ImmersionChart, grid: GridSpec) -> Result<EnergyReport> {
    let (rx, ry) = domain_rules(&chart.domain, grid);
    let (v, floor) = integrate_rules(chart, &rx, &ry)?;
    let (cx, cy) = domain_rules(&chart.domain, grid.halved());
    let (c, _) = integrate_rules(chart, &cx, &cy)?;
    let mut err = [0.0; 5];
    for k in 0..5 {
        err[k] = (v[k] - c[k]).abs().max(floor[k]);
    }
    Ok(EnergyReport {
        surface: chart.label.clone(),
        grid,
        values: EnergyValues::from_array(v),
        error: EnergyValues::from_array(err),
        coarse: EnergyValues::from_array(c),
    })
}

/// Curvature integrals over a sub-box `[x-range, y-range]` with Gauss–Legendre on both axes.
pub fn box_energies(chart: &ImmersionChart, bx: [[f64; 2]; 2], cells: [usize; 2]) -> Result<EnergyValues> {
    let rx = Rule1D::gauss_legendre(bx[0][0], bx[0][1], cells[0]);
    let ry = Rule1D::gauss_legendre(bx[1][0], bx[1][1], cells[1]);
    Ok(EnergyValues::from_array(integrate_rules(chart, &rx, &ry)?.0))
}

/// `∫_{B_{2ρ} ∖ B_ρ} |A|²_g dvol_g` in the disk coordinate of a puncture.
pub fn annulus_energy(chart: &ImmersionChart, puncture: usize, rho: f64, grid: GridSpec) -> Result<f64> {
    let p = chart.puncture(puncture)?;
    let xr = chart.domain.x_range();
    if !(rho >= chart.r_min) || 2.0 * rho > p.radius {
        return Err(Error::AnnulusOutOfRange(rho));
    }
    let (a, b) = (p.t_of_radius(2.0 * rho), p.t_of_radius(rho));
    let (lo, hi) = (a.min(b), a.max(b));
    let eps = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    if lo < xr[0] - eps || hi > xr[1] + eps {
        return Err(Error::AnnulusOutOfRange(rho));
    }
    let (lo, hi) = (lo.max(xr[0]), hi.min(xr[1]));
    let rx = Rule1D::gauss_legendre(lo, hi, (grid.nx / GL_NODES).max(1));
    let yr = chart.domain.y_range();
    let ry = Rule1D::for_axis(yr, chart.domain.periodic()[1], grid.ny);
    let i = integrate(&rx, &ry, |pt| Ok([densities(chart, pt)?[2]]))?;
    Ok(i.value[0])
}

/// Dyadic annulus energies at `ρ_j = ρ₀·2^{−j}`, `j = 0..levels`.
pub fn dyadic_annulus_energies(
    chart: &ImmersionChart,
    puncture: usize,
    rho0: f64,
    levels: usize,
    grid: GridSpec,
) -> Result<Vec<(f64, f64)>> {
    (0..levels)
        .map(|j| {
            let rho = rho0 * 0.5f64.powi(j as i32);
            Ok((rho, annulus_energy(chart, puncture, rho, grid)?))
        })
        .collect()
}

impl EnergyValues {
    pub fn max_abs_diff(&self, o: &EnergyValues) -> f64 {
        let (a, b) = (self.to_array(), o.to_array());
        (0..5).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
    }
}
