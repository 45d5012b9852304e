//! Named suites over one surface, producing versioned JSON reports and optional CSV tables.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cgm::{annulus_samples, cgm_identities, oscillation};
use crate::error::{Error, Result};
use crate::geometry::energy::{dyadic_annulus_energies, energies};
use crate::geometry::monotonicity::{assemble, ball_integrals};
use crate::geometry::shape::shape_at;
use crate::geometry::willmore::{c2_norm, fd_willmore_derivative, weak_form_pairing, willmore_residual_order};
use crate::geometry::GridSpec;
use crate::minkowski::LorentzMatrix;
use crate::quartic::{branch_exponents, holomorphicity_scan_on, pole_order_fit, scaling_estimate, VACUOUS_TOL};
use crate::real::Precision;
use crate::surface::{parse_immersion, Domain2, Evaluator, FieldDirection, ImmersionChart, PunctureKind, TestField, ZooSurface};

pub const SCHEMA: &str = "willmore-lab/1";

/// Tolerances attached to suite checks.
pub mod tol {
    pub const IDENTITY: f64 = 1e-8;
    pub const ENERGY_ABS: f64 = 1e-8;
    pub const RESIDUAL_WILLMORE: f64 = 1e-6;
    pub const RESIDUAL_NON_WILLMORE: f64 = 1e-2;
    pub const WEAK_VS_FD: f64 = 1e-2;
    pub const WEAK_WILLMORE: f64 = 1e-4;
    pub const HOLOMORPHIC: f64 = 1e-6;
    pub const THETA: f64 = 0.05;
    pub const ANNULUS_DECAY: f64 = 1e-3;
    pub const OSC_GROWTH: f64 = 10.0;
    pub const MIN_ORDER: f64 = 2.0;
}

/// Disk radius kept between samples and any puncture.
pub const PUNCTURE_MARGIN: f64 = 1e-2;
/// Largest `|t|` sampled on cylinder domains, away from the coordinate poles.
pub const CYLINDER_BAND: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Energies,
    Willmore,
    Quartic,
    Branch,
    Monotonicity,
    Convergence,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Identities,
        Suite::Energies,
        Suite::Willmore,
        Suite::Quartic,
        Suite::Branch,
        Suite::Monotonicity,
        Suite::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Energies => "energies",
            Suite::Willmore => "willmore",
            Suite::Quartic => "quartic",
            Suite::Branch => "branch",
            Suite::Monotonicity => "monotonicity",
            Suite::Convergence => "convergence",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceSpec {
    /// `name` or `name(p1,…)`.
    Zoo(String),
    /// DSL source with its parameter domain.
    Dsl { source: String, path: Option<PathBuf>, domain: String },
}

/// `r0:ratio:count` radius list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiiSpec {
    pub r0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl RadiiSpec {
    pub fn radii(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.r0 * self.ratio.powi(k as i32)).collect()
    }
}

impl FromStr for RadiiSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!("radii `{s}` is not of the form r0:ratio:count")));
        }
        let f = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad number `{v}` in radii")));
        let r = RadiiSpec {
            r0: f(parts[0])?,
            ratio: f(parts[1])?,
            count: parts[2].trim().parse().map_err(|_| Error::Config(format!("bad count `{}` in radii", parts[2])))?,
        };
        if !(r.r0 > 0.0 && r.ratio > 0.0 && r.ratio.is_finite() && r.r0.is_finite()) || r.count < 2 {
            return Err(Error::Config(format!("radii `{s}` needs r0 > 0, ratio > 0 and count ≥ 2")));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub surface: SurfaceSpec,
    pub grid: GridSpec,
    pub jet_order: usize,
    pub precision: Precision,
    pub radii: Option<RadiiSpec>,
    pub suite: Suite,
    /// Refinement levels of the convergence suite.
    pub levels: usize,
    /// Include wall-clock timings (breaks byte-identical output).
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(surface: SurfaceSpec, suite: Suite) -> Self {
        SuiteConfig {
            surface,
            grid: GridSpec::new(256, 64),
            jet_order: 5,
            precision: Precision::Double,
            radii: None,
            suite,
            levels: 3,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.nx < 8 || self.grid.ny < 8 {
            return Err(Error::Config(format!("grid counts must be at least 8 per axis, got {}x{}", self.grid.nx, self.grid.ny)));
        }
        if !(2..=6).contains(&self.jet_order) {
            return Err(Error::Config(format!("jet order must lie in [2, 6], got {}", self.jet_order)));
        }
        let needed = match self.suite {
            Suite::Willmore => 4,
            Suite::Quartic => 5,
            _ => 2,
        };
        if self.jet_order < needed {
            return Err(Error::Config(format!("suite {} needs jet order at least {needed}", self.suite.name())));
        }
        if self.suite == Suite::Convergence && self.levels < 3 {
            return Err(Error::Config(format!("convergence needs at least 3 refinement levels, got {}", self.levels)));
        }
        Ok(())
    }

    pub fn chart(&self) -> Result<(ImmersionChart, Option<ZooSurface>)> {
        match &self.surface {
            SurfaceSpec::Zoo(s) => {
                let z = ZooSurface::from_str(s)?;
                Ok((z.chart()?, Some(z)))
            }
            SurfaceSpec::Dsl { source, path, domain } => {
                let expr = parse_immersion(source)?;
                let label = path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "dsl".into());
                Ok((ImmersionChart::new(label, parse_domain(domain)?, Evaluator::Expr(Arc::new(expr))), None))
            }
        }
    }
}

/// Parses `cylinder:T0:T1`, `disk:T0:T1`, `torus:PX:PY` or `rect:X0:X1:Y0:Y1`.
pub fn parse_domain(s: &str) -> Result<Domain2> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts[1..]
        .iter()
        .map(|v| {
            let v = v.trim();
            let (neg, body) = v.strip_prefix('-').map(|b| (true, b)).unwrap_or((false, v));
            let x = match body {
                "pi" => std::f64::consts::PI,
                "2pi" | "tau" => std::f64::consts::TAU,
                b => b.parse::<f64>().map_err(|_| Error::Config(format!("bad number `{v}` in domain")))?,
            };
            Ok(if neg { -x } else { x })
        })
        .collect::<Result<Vec<f64>>>()?;
    let want = |n: usize| -> Result<()> {
        if nums.len() == n && nums.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Config(format!("domain `{s}` needs {n} finite numbers")))
        }
    };
    let ordered = |a: f64, b: f64| -> Result<()> {
        if a < b {
            Ok(())
        } else {
            Err(Error::Config(format!("domain `{s}` has an empty range")))
        }
    };
    match parts[0] {
        "cylinder" => {
            want(2)?;
            ordered(nums[0], nums[1])?;
            Ok(Domain2::cylinder(nums[0], nums[1]))
        }
        "disk" => {
            want(2)?;
            ordered(nums[0], nums[1])?;
            Domain2::punctured_disk(nums[0], nums[1])
        }
        "torus" => {
            want(2)?;
            ordered(0.0, nums[0].min(nums[1]))?;
            Ok(Domain2::flat_torus(nums[0], nums[1]))
        }
        "rect" => {
            want(4)?;
            ordered(nums[0], nums[1])?;
            ordered(nums[2], nums[3])?;
            Ok(Domain2::rectangle([nums[0], nums[1]], [nums[2], nums[3]]))
        }
        other => Err(Error::Config(format!("unknown domain kind `{other}`"))),
    }
}

/// One pass/fail line with the tolerance it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, relation: "<=", tolerance, pass: value <= tolerance }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, relation: ">=", tolerance, pass: value >= tolerance }
    }

    /// A boolean property, recorded as `1 >= 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, relation: ">=", tolerance: 1.0, pass: ok }
    }
}

/// Numeric table written as CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub config: SuiteConfig,
    pub surface: String,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    /// Numerical failure that stopped the suite; checks up to that point are kept.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.aborted.is_none() && self.checks.iter().all(|c| c.pass)
    }

    /// 0 all pass, 1 some check fails, 3 numerical abort.
    pub fn exit_code(&self) -> i32 {
        if self.aborted.is_some() {
            3
        } else if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.to_string(), serde_json::to_value(v).expect("value serializes"));
    }
}

/// Whether an error stems from the configuration rather than the numerics.
pub fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::UnknownSurface(_)
            | Error::InvalidParams { .. }
            | Error::Syntax { .. }
            | Error::UnboundVariable { .. }
            | Error::Arity { .. }
            | Error::Io(_)
            | Error::NoSuchPuncture(_)
            | Error::RadiusOutOfDomain(_)
            | Error::OrderTooLarge(_)
    )
}

/// Runs the configured suite. Configuration problems are returned as errors; numerical
/// failures end the suite early and are recorded in `aborted`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let (chart, zoo) = cfg.chart()?;
    let start = Instant::now();
    let mut report = Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        surface: chart.label.clone(),
        checks: vec![],
        values: BTreeMap::new(),
        table: None,
        aborted: None,
        elapsed_seconds: None,
    };
    let outcome = match cfg.suite {
        Suite::Identities => identities_suite(cfg, &chart, &mut report),
        Suite::Energies => energies_suite(cfg, &chart, zoo.as_ref(), &mut report),
        Suite::Willmore => willmore_suite(cfg, &chart, zoo.as_ref(), &mut report),
        Suite::Quartic => quartic_suite(cfg, &chart, zoo.as_ref(), &mut report),
        Suite::Branch => branch_suite(cfg, &chart, &mut report),
        Suite::Monotonicity => monotonicity_suite(cfg, &chart, &mut report),
        Suite::Convergence => convergence_suite(cfg, &chart, zoo.as_ref(), &mut report),
    };
    if let Err(e) = outcome {
        if is_config_error(&e) {
            return Err(e);
        }
        report.aborted = Some(e.to_string());
    }
    if cfg.timings {
        report.elapsed_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Convergence table over `levels` successive doublings of the configured grid.
pub fn convergence_table(cfg: &SuiteConfig, levels: usize) -> Result<Report> {
    let mut c = cfg.clone();
    c.suite = Suite::Convergence;
    c.levels = levels;
    run_suite(&c)
}

/// Parameter box kept away from punctures (disk radius ≥ `r_away`) and from the poles of cylinder charts.
pub fn sample_box(chart: &ImmersionChart, r_away: f64) -> [[f64; 2]; 2] {
    let mut xr = chart.domain.x_range();
    if chart.domain.is_cylindrical() {
        xr = [xr[0].max(-CYLINDER_BAND), xr[1].min(CYLINDER_BAND)];
    }
    for p in &chart.punctures {
        let t = p.t_of_radius(r_away);
        match p.end {
            crate::surface::CylinderEnd::Upper => xr[1] = xr[1].min(t),
            crate::surface::CylinderEnd::Lower => xr[0] = xr[0].max(t),
        }
    }
    [xr, chart.domain.y_range()]
}

/// `n` quasi-random points of a box (additive recurrence, deterministic).
pub fn box_points(bx: [[f64; 2]; 2], n: usize) -> Vec<[f64; 2]> {
    const A: [f64; 2] = [0.754_877_666_246_692_7, 0.569_840_290_998_053_3];
    (0..n)
        .map(|i| {
            let u = (0.5 + A[0] * (i + 1) as f64).fract();
            let v = (0.5 + A[1] * (i + 1) as f64).fract();
            [bx[0][0] + (bx[0][1] - bx[0][0]) * u, bx[1][0] + (bx[1][1] - bx[1][0]) * v]
        })
        .collect()
}

fn grid_points(bx: [[f64; 2]; 2], nx: usize, ny: usize) -> Vec<[f64; 2]> {
    (0..nx)
        .flat_map(|i| {
            (0..ny).map(move |j| {
                [
                    bx[0][0] + (bx[0][1] - bx[0][0]) * (i as f64 + 0.5) / nx as f64,
                    bx[1][0] + (bx[1][1] - bx[1][0]) * (j as f64 + 0.5) / ny as f64,
                ]
            })
        })
        .collect()
}

const IDENTITY_POINTS: usize = 500;

fn identities_suite(_cfg: &SuiteConfig, chart: &ImmersionChart, report: &mut Report) -> Result<()> {
    let pts = box_points(sample_box(chart, PUNCTURE_MARGIN), IDENTITY_POINTS);
    let mut table = Table::new(&["x", "y", "unit_norm", "orthogonality", "h_from_y", "pullback", "null_dz", "null_dzz", "gradient_forms"]);
    let mut worst = [0.0f64; 7];
    for pt in pts {
        let r = cgm_identities(chart, pt)?;
        let v = [
            r.unit_norm,
            r.orthogonality,
            r.h_from_y,
            r.pullback,
            r.null_dz.unwrap_or(0.0),
            r.null_dzz.unwrap_or(0.0),
            r.gradient_forms,
        ];
        for k in 0..7 {
            worst[k] = worst[k].max(v[k]);
        }
        let mut row = vec![pt[0], pt[1]];
        row.extend(v);
        table.rows.push(row);
    }
    for (k, name) in ["unit_norm", "orthogonality", "h_from_y", "pullback", "null_dz", "null_dzz", "gradient_forms"].iter().enumerate() {
        report.checks.push(Check::at_most(*name, worst[k], tol::IDENTITY));
    }
    report.value("points", IDENTITY_POINTS);
    report.table = Some(table);
    Ok(())
}

fn energies_suite(cfg: &SuiteConfig, chart: &ImmersionChart, zoo: Option<&ZooSurface>, report: &mut Report) -> Result<()> {
    let e = energies(chart, cfg.grid)?;
    report.value("energies", e.values);
    report.value("error", e.error);
    report.value("split_defect", e.split_defect());
    let mut table = Table::new(&["nx", "ny", "w", "e", "total_a", "area", "gauss_int", "w_error"]);
    let v = e.values;
    table.rows.push(vec![cfg.grid.nx as f64, cfg.grid.ny as f64, v.w, v.e, v.total_a, v.area, v.gauss_int, e.error.w]);
    report.table = Some(table);
    report.checks.push(Check::at_most("split_defect", e.split_defect(), 1e-8 * v.total_a.abs().max(1.0)));
    if let Some(z) = zoo {
        if let Some(w) = z.willmore_energy() {
            report.value("w_exact", w);
            report.checks.push(Check::at_most("w_vs_exact", (v.w - w).abs(), tol::ENERGY_ABS.max(10.0 * e.error.w)));
        }
        if let Some(chi) = z.euler_characteristic() {
            let gb = 2.0 * std::f64::consts::PI * chi as f64;
            report.checks.push(Check::at_most("gauss_bonnet", (v.gauss_int - gb).abs(), tol::ENERGY_ABS.max(10.0 * e.error.gauss_int)));
        }
    }
    Ok(())
}

fn willmore_suite(cfg: &SuiteConfig, chart: &ImmersionChart, zoo: Option<&ZooSurface>, report: &mut Report) -> Result<()> {
    let bx = sample_box(chart, PUNCTURE_MARGIN);
    let n = (cfg.grid.nx / 4).clamp(8, 64);
    let m = (cfg.grid.ny / 2).clamp(8, 64);
    let mut table = Table::new(&["x", "y", "residual", "normalized"]);
    let mut worst: f64 = 0.0;
    for pt in grid_points(bx, n, m) {
        let r = willmore_residual_order(chart, pt, cfg.jet_order)?;
        worst = worst.max(r.normalized);
        table.rows.push(vec![pt[0], pt[1], r.residual, r.normalized]);
    }
    report.value("max_normalized_residual", worst);
    report.table = Some(table);
    let known = zoo.map(|z| z.is_willmore());
    match known {
        Some(true) => report.checks.push(Check::at_most("residual", worst, tol::RESIDUAL_WILLMORE)),
        Some(false) => report.checks.push(Check::at_least("residual_detects_non_willmore", worst, tol::RESIDUAL_NON_WILLMORE)),
        None => {}
    }
    let centre = [0.5 * (bx[0][0] + bx[0][1]), 0.5 * (bx[1][0] + bx[1][1])];
    let conformal = shape_at::<f64>(chart, centre, 2)?.anisotropy <= 1e-6;
    if !conformal {
        report.value("weak_form", "skipped: chart is not conformal");
        return Ok(());
    }
    let rad = [0.2 * (bx[0][1] - bx[0][0]).min(4.0), 0.2 * (bx[1][1] - bx[1][0]).min(4.0)];
    let field = TestField::bump(centre, rad, FieldDirection::Normal);
    let pairing = weak_form_pairing(chart, &field)?;
    report.value("weak_form", pairing);
    if known == Some(true) {
        let c2 = c2_norm(chart, &field, 32)?;
        report.value("c2_norm", c2);
        report.checks.push(Check::at_most("weak_form_over_c2", pairing.value.abs() / c2, tol::WEAK_WILLMORE));
    } else {
        let fd = fd_willmore_derivative(chart, &field, [4, 4])?;
        let c2 = c2_norm(chart, &field, 32)?;
        report.value("fd_derivative", fd);
        report.value("c2_norm", c2);
        // a critical surface has both sides at the level of the difference noise
        let rel = (pairing.value - fd.extrapolated).abs() / fd.extrapolated.abs().max(FD_FLOOR * c2);
        report.checks.push(Check::at_most("weak_form_vs_fd", rel, tol::WEAK_VS_FD));
    }
    Ok(())
}

/// Relative size, against `‖w‖_{C²}`, below which a first variation counts as zero.
const FD_FLOOR: f64 = 1e-6;

/// Whether the quartic of a zoo surface vanishes identically (round spheres and conformal images of minimal surfaces).
fn quartic_vanishes(z: &ZooSurface) -> bool {
    matches!(
        z,
        ZooSurface::Sphere | ZooSurface::Catenoid | ZooSurface::Enneper | ZooSurface::InvertedCatenoid | ZooSurface::InvertedEnneper
    ) || matches!(z, ZooSurface::Ellipsoid { a, b, c } if a == b && b == c)
}

fn default_radii(cfg: &SuiteConfig) -> Vec<f64> {
    cfg.radii.map(|r| r.radii()).unwrap_or_else(|| (0..8).map(|k| 1e-2 * 0.5f64.powi(k)).collect())
}

fn quartic_suite(cfg: &SuiteConfig, chart: &ImmersionChart, zoo: Option<&ZooSurface>, report: &mut Report) -> Result<()> {
    let bx = sample_box(chart, PUNCTURE_MARGIN);
    let scan = holomorphicity_scan_on(chart, bx, cfg.grid.nx, cfg.grid.ny)?;
    report.value("max_holomorphicity_residual", scan.max_residual);
    report.value("worst_point", scan.worst_point);
    report.value("max_relative_q", scan.max_relative_q);
    let mut table = Table::new(&["z_re", "z_im", "abs_q", "arg_q", "abs_dzbar_q", "z4_q", "z2_q", "z1_q", "relative_q"]);
    for s in &scan.samples {
        table.rows.push(vec![s.z[0], s.z[1], s.abs_q(), s.arg_q(), s.abs_dzbar_q(), s.weighted[0], s.weighted[1], s.weighted[2], s.relative()]);
    }
    report.table = Some(table);
    if zoo.map(|z| z.is_willmore()).unwrap_or(false) {
        report.checks.push(Check::at_most("holomorphicity", scan.max_residual, tol::HOLOMORPHIC));
    }
    if zoo.map(quartic_vanishes).unwrap_or(false) {
        report.checks.push(Check::at_most("q_rounding_level", scan.max_relative_q, VACUOUS_TOL));
    }
    let radii = default_radii(cfg);
    for (i, p) in chart.punctures.iter().enumerate() {
        if p.kind != PunctureKind::Branch {
            continue;
        }
        let fit = pole_order_fit(chart, i, &radii, cfg.precision)?;
        report.checks.push(Check::holds(format!("puncture{i}_pole_order_at_most_two"), fit.within_generic_bound));
        if zoo.map(|z| z.is_willmore()).unwrap_or(false) {
            report.checks.push(Check::holds(format!("puncture{i}_q_bounded"), fit.bounded));
        }
        report.value(&format!("puncture{i}_pole_order"), fit);
    }
    Ok(())
}

/// Outermost dyadic annulus, as a fraction of the puncture disk radius.
pub const SWEEP_OUTER: f64 = 0.25;
/// Outer radius of the oscillation annuli, as a fraction of the puncture disk radius.
pub const OSC_OUTER: f64 = 0.5;

/// Number of halvings from `rho0` that stay above `r_min`.
pub fn dyadic_levels(rho0: f64, r_min: f64) -> usize {
    ((rho0 / r_min).log2().floor().max(0.0) as usize) + 1
}

fn branch_suite(cfg: &SuiteConfig, chart: &ImmersionChart, report: &mut Report) -> Result<()> {
    let radii = default_radii(cfg);
    let mut table = Table::new(&["puncture", "radius", "sup_q", "r_sup_q", "relative_q"]);
    let mut any = false;
    for (i, p) in chart.punctures.iter().enumerate() {
        if p.kind != PunctureKind::Branch {
            continue;
        }
        any = true;
        let b = branch_exponents(chart, i, &radii, cfg.precision)?;
        if let Some(theta) = p.theta {
            report.checks.push(Check::at_most(format!("puncture{i}_theta"), (b.theta() - theta as f64).abs(), tol::THETA));
        }
        report.checks.push(Check::holds(format!("puncture{i}_theta_fits_consistent"), b.consistent));
        report.value(&format!("puncture{i}_exponents"), &b);

        let sc = scaling_estimate(chart, i, &radii[..radii.len().min(6)])?;
        for r in &sc.rows {
            table.rows.push(vec![i as f64, r.radius, r.sup_q, r.weighted, r.relative]);
        }
        report.checks.push(Check::holds(format!("puncture{i}_scaling_o1"), sc.o1_verdict));
        report.value(&format!("puncture{i}_scaling"), &sc);

        let rho0 = SWEEP_OUTER * p.radius;
        let dy = dyadic_annulus_energies(chart, i, rho0, dyadic_levels(rho0, chart.r_min), cfg.grid)?;
        let decreasing = dy.windows(2).all(|w| w[1].1 < w[0].1);
        let ratio = dy.last().map(|l| l.1).unwrap_or(0.0) / dy[0].1;
        report.checks.push(Check::holds(format!("puncture{i}_annulus_energy_decreasing"), decreasing));
        report.checks.push(Check::at_most(format!("puncture{i}_annulus_energy_ratio"), ratio, tol::ANNULUS_DECAY));
        report.value(&format!("puncture{i}_annulus_energies"), &dy);

        let osc = oscillation_sweep(chart, i, OSC_OUTER * p.radius)?;
        let increasing = osc.windows(2).all(|w| w[1].1 > w[0].1);
        let growth = osc.last().map(|l| l.1).unwrap_or(0.0) / osc[0].1;
        report.checks.push(Check::holds(format!("puncture{i}_oscillation_increasing"), increasing));
        report.checks.push(Check::at_least(format!("puncture{i}_oscillation_growth"), growth, tol::OSC_GROWTH));
        report.value(&format!("puncture{i}_oscillation"), &osc);
    }
    if !any {
        return Err(Error::Config("branch suite needs a chart with a branch puncture".into()));
    }
    report.table = Some(table);
    Ok(())
}

/// `(s, osc_{B_{s₁}∖B_s} Y)` for `s = s₁·2^{−j}`, `j ≥ 1`, down to the chart's `r_min`.
pub fn oscillation_sweep(chart: &ImmersionChart, puncture: usize, s1: f64) -> Result<Vec<(f64, f64)>> {
    let mut out = vec![];
    let mut s = 0.5 * s1;
    while s >= chart.r_min {
        let ys = annulus_samples(chart, puncture, s, s1, 24, 32)?;
        out.push((s, oscillation(&ys, &LorentzMatrix::identity())?.diameter));
        s *= 0.5;
    }
    if out.len() < 2 {
        return Err(Error::AnnulusOutOfRange(s1));
    }
    Ok(out)
}

/// Rows of the line rule per unit of ball radius, measured in space along `y`.
const ROWS_PER_RADIUS: f64 = 16.0;

/// Centre of the monotonicity balls and the grid used around it.
///
/// Puncture images and the end cap of a cylindrical chart give balls bounded by whole `y`-circles;
/// any other centre needs enough `y` rows to resolve the smallest ball.
fn monotonicity_centre(chart: &ImmersionChart, grid: GridSpec, t_min: f64) -> Result<([f64; 3], GridSpec)> {
    if let Some(p) = chart.punctures.iter().find_map(|p| p.image) {
        return Ok((p, grid));
    }
    let yr = chart.domain.y_range();
    if chart.domain.is_cylindrical() {
        let x = chart.domain.x_range()[1];
        return Ok((chart.point([x, yr[0]])?, grid));
    }
    let bx = sample_box(chart, PUNCTURE_MARGIN);
    let c = [0.5 * (bx[0][0] + bx[0][1]), 0.5 * (bx[1][0] + bx[1][1])];
    let j = chart.eval::<f64>(c, 1)?;
    let speed = j.iter().map(|v| v.dy().map(|d| d.value().powi(2)).unwrap_or(0.0)).sum::<f64>().sqrt();
    let rows = (ROWS_PER_RADIUS * speed * (yr[1] - yr[0]) / t_min).ceil() as usize;
    Ok((chart.point(c)?, GridSpec::new(grid.nx, grid.ny.max(rows))))
}

fn monotonicity_suite(cfg: &SuiteConfig, chart: &ImmersionChart, report: &mut Report) -> Result<()> {
    let radii: Vec<f64> = cfg.radii.map(|r| r.radii()).unwrap_or_else(|| (1..=10).map(|k| 0.1 * k as f64).collect());
    let t_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let (x0, grid) = monotonicity_centre(chart, cfg.grid, t_min)?;
    report.value("grid", grid);
    let mut sorted = radii.clone();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let balls = sorted.iter().map(|&r| ball_integrals(chart, x0, r, grid)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["t", "big_t", "lhs", "rhs", "tolerance", "holds"]);
    let mut all = true;
    let mut worst = f64::INFINITY;
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            let r = assemble(x0, balls[i], balls[j]);
            all &= r.holds;
            worst = worst.min(r.lhs - r.rhs + r.tolerance);
            table.rows.push(vec![r.t, r.big_t, r.lhs, r.rhs, r.tolerance, if r.holds { 1.0 } else { 0.0 }]);
        }
    }
    report.value("x0", x0);
    report.value("balls", &balls);
    report.value("min_margin", worst);
    report.checks.push(Check::holds("monotonicity_all_pairs", all));
    report.table = Some(table);
    Ok(())
}

/// Relative error below which a level counts as converged to the rounding and truncation floor.
pub const SATURATION: f64 = 1e-9;

/// Observed orders from three successive values with refinement ratio 2.
fn observed_order(errors: &[f64], floor: f64) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| if w[1] > floor && w[0] > floor { Some((w[0] / w[1]).log2()) } else { None })
        .collect()
}

fn convergence_suite(cfg: &SuiteConfig, chart: &ImmersionChart, zoo: Option<&ZooSurface>, report: &mut Report) -> Result<()> {
    let mut grids = vec![cfg.grid];
    for _ in 1..cfg.levels {
        let g = grids.last().expect("nonempty").doubled();
        grids.push(g);
    }
    let reports = grids.iter().map(|&g| energies(chart, g)).collect::<Result<Vec<_>>>()?;
    let ws: Vec<f64> = reports.iter().map(|r| r.values.w).collect();
    let exact = zoo.and_then(|z| z.willmore_energy());
    let floor = SATURATION * ws.last().map(|w| w.abs()).unwrap_or(1.0).max(1.0);
    let errors: Vec<f64> = match exact {
        Some(w) => ws.iter().map(|v| (v - w).abs()).collect(),
        None => ws.windows(2).map(|p| (p[1] - p[0]).abs()).collect(),
    };
    let orders = observed_order(&errors, floor);
    let mut table = Table::new(&["level", "nx", "ny", "w", "error"]);
    for (k, (g, w)) in grids.iter().zip(&ws).enumerate() {
        table.rows.push(vec![k as f64, g.nx as f64, g.ny as f64, *w, errors.get(k).copied().unwrap_or(f64::NAN)]);
    }
    report.table = Some(table);
    report.value("w", &ws);
    report.value("errors", &errors);
    report.value("observed_orders", &orders);
    report.value("error_reference", if exact.is_some() { "exact" } else { "successive differences" });
    let measured: Vec<f64> = orders.iter().flatten().copied().collect();
    if measured.is_empty() {
        report.value("saturated", true);
        report.checks.push(Check::at_most("saturated_error", errors.iter().cloned().fold(0.0, f64::max), floor));
    } else {
        let min = measured.iter().cloned().fold(f64::INFINITY, f64::min);
        report.checks.push(Check::at_least("observed_order", min, tol::MIN_ORDER));
    }
    Ok(())
}

/// Config echo and checks only, for quick inspection.
pub fn summary(report: &Report) -> Value {
    json!({
        "surface": report.surface,
        "suite": report.config.suite.name(),
        "pass": report.all_pass(),
        "checks": report.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observed_order_skips_saturated_levels() {
        let o = observed_order(&[1e-2, 2.5e-3, 1e-12], 1e-10);
        assert!((o[0].unwrap() - 2.0).abs() < 1e-12);
        assert!(o[1].is_none());
    }

    #[test]
    fn dyadic_level_count() {
        assert_eq!(dyadic_levels(0.25, 1e-6), 18);
        assert_eq!(dyadic_levels(1e-6, 1e-6), 1);
    }

    #[test]
    fn box_points_stay_inside() {
        let bx = [[-1.0, 2.0], [0.0, 0.5]];
        let pts = box_points(bx, 200);
        assert_eq!(pts.len(), 200);
        assert!(pts.iter().all(|p| p[0] >= -1.0 && p[0] <= 2.0 && p[1] >= 0.0 && p[1] <= 0.5));
        assert_eq!(pts, box_points(bx, 200));
    }

    #[test]
    fn sample_box_avoids_punctures_and_poles() {
        let c = ZooSurface::InvertedCatenoid.chart().unwrap();
        let bx = sample_box(&c, 1e-2);
        assert!((bx[0][1] - 1e-2f64.ln().abs()).abs() < 1e-12 && (bx[0][0] + 1e-2f64.ln().abs()).abs() < 1e-12);
        let s = ZooSurface::Sphere.chart().unwrap();
        assert_eq!(sample_box(&s, 1e-2)[0], [-CYLINDER_BAND, CYLINDER_BAND]);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("all".parse::<Suite>().is_err());
    }

    #[test]
    fn exit_codes() {
        let mut r = Report {
            schema: SCHEMA,
            tool_version: "0",
            config: SuiteConfig::new(SurfaceSpec::Zoo("sphere".into()), Suite::Energies),
            surface: "sphere".into(),
            checks: vec![Check::at_most("a", 1.0, 2.0)],
            values: BTreeMap::new(),
            table: None,
            aborted: None,
            elapsed_seconds: None,
        };
        assert_eq!(r.exit_code(), 0);
        r.checks.push(Check::at_least("b", 1.0, 2.0));
        assert_eq!(r.exit_code(), 1);
        r.aborted = Some("blow-up".into());
        assert_eq!(r.exit_code(), 3);
    }
}
