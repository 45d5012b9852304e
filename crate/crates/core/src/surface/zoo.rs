//! Built-in analytic surfaces.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use super::{
    apply_conformal, ConformalMap3, CylinderEnd, Domain2, Evaluator, ImmersionChart, Mobius, Puncture,
    DEFAULT_R_MIN,
};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;

/// Half-length of the cylinder used for closed spheres; caps beyond it carry area ~ e^{−2T}.
pub const SPHERE_T: f64 = 13.815510557964274;

/// Inversion center used for the inverted Enneper surface.
pub const ENNEPER_CENTER: [f64; 3] = [0.0, 0.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ZooSurface {
    Sphere,
    Ellipsoid { a: f64, b: f64, c: f64 },
    Catenoid,
    Enneper,
    InvertedCatenoid,
    InvertedEnneper,
    CliffordTorusProjected,
    TorusOfRevolution { big_r: f64, small_r: f64 },
}

impl ZooSurface {
    pub const NAMES: [&'static str; 8] = [
        "sphere",
        "ellipsoid",
        "catenoid",
        "enneper",
        "inverted-catenoid",
        "inverted-enneper",
        "clifford-torus-projected",
        "torus-of-revolution",
    ];

    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidParams { surface: name.to_string(), reason: reason.to_string() };
        let none = |s: ZooSurface| if params.is_empty() { Ok(s) } else { Err(bad("takes no parameters")) };
        match name {
            "sphere" => none(ZooSurface::Sphere),
            "catenoid" => none(ZooSurface::Catenoid),
            "enneper" => none(ZooSurface::Enneper),
            "inverted-catenoid" => none(ZooSurface::InvertedCatenoid),
            "inverted-enneper" => none(ZooSurface::InvertedEnneper),
            "clifford-torus-projected" => none(ZooSurface::CliffordTorusProjected),
            "ellipsoid" => {
                let p = if params.is_empty() { &[1.0, 1.0, 2.0][..] } else { params };
                if p.len() != 3 {
                    return Err(bad("expects three semi-axes a, b, c"));
                }
                if p.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                    return Err(bad("semi-axes must be positive"));
                }
                Ok(ZooSurface::Ellipsoid { a: p[0], b: p[1], c: p[2] })
            }
            "torus-of-revolution" => {
                let p = if params.is_empty() { &[2.0, 1.0][..] } else { params };
                if p.len() != 2 {
                    return Err(bad("expects radii R, r"));
                }
                if !(p[1] > 0.0) || !(p[0] > p[1]) || !p[0].is_finite() {
                    return Err(bad("radii must satisfy R > r > 0"));
                }
                Ok(ZooSurface::TorusOfRevolution { big_r: p[0], small_r: p[1] })
            }
            other => Err(Error::UnknownSurface(other.to_string())),
        }
    }

    pub fn chart(&self) -> Result<ImmersionChart> {
        let tmax = -DEFAULT_R_MIN.ln();
        Ok(match *self {
            ZooSurface::Sphere => {
                ImmersionChart::new("sphere", Domain2::cylinder(-SPHERE_T, SPHERE_T), Evaluator::Sphere).with_conformal(true)
            }
            ZooSurface::Ellipsoid { a, b, c } => {
                let label = format!("ellipsoid({a},{b},{c})");
                if a == b {
                    let s = spheroid_s(a, c, SPHERE_T);
                    ImmersionChart::new(label, Domain2::cylinder(-s, s), Evaluator::Spheroid { a, c }).with_conformal(true)
                } else {
                    ImmersionChart::new(label, Domain2::cylinder(-SPHERE_T, SPHERE_T), Evaluator::Ellipsoid { a, b, c })
                }
            }
            ZooSurface::Catenoid => ImmersionChart::new("catenoid", Domain2::cylinder(-tmax, tmax), Evaluator::Catenoid)
                .with_conformal(true)
                .with_punctures(vec![
                    Puncture { theta: Some(0), ..Puncture::end_at(CylinderEnd::Upper) },
                    Puncture { theta: Some(0), ..Puncture::end_at(CylinderEnd::Lower) },
                ]),
            ZooSurface::Enneper => ImmersionChart::new("enneper", Domain2::cylinder(-tmax, tmax), Evaluator::Enneper)
                .with_conformal(true)
                .with_punctures(vec![Puncture { theta: Some(2), ..Puncture::end_at(CylinderEnd::Upper) }]),
            ZooSurface::InvertedCatenoid => {
                let inv = ConformalMap3::single(Mobius::Inversion([0.0; 3]))?;
                let mut c = apply_conformal(&inv, &ZooSurface::Catenoid.chart()?)?;
                c.label = "inverted-catenoid".into();
                c
            }
            ZooSurface::InvertedEnneper => {
                let inv = ConformalMap3::single(Mobius::Inversion(ENNEPER_CENTER))?;
                let mut c = apply_conformal(&inv, &ZooSurface::Enneper.chart()?)?;
                c.label = "inverted-enneper".into();
                c
            }
            ZooSurface::CliffordTorusProjected => {
                let mut c = torus_chart(2f64.sqrt(), 1.0);
                c.label = "clifford-torus-projected".into();
                c
            }
            ZooSurface::TorusOfRevolution { big_r, small_r } => torus_chart(big_r, small_r),
        })
    }

    /// Known Willmore energy, if any.
    pub fn willmore_energy(&self) -> Option<f64> {
        match *self {
            ZooSurface::Sphere => Some(4.0 * PI),
            ZooSurface::Catenoid | ZooSurface::Enneper => Some(0.0),
            ZooSurface::InvertedCatenoid => Some(8.0 * PI),
            ZooSurface::InvertedEnneper => Some(12.0 * PI),
            ZooSurface::CliffordTorusProjected => Some(2.0 * PI * PI),
            ZooSurface::TorusOfRevolution { big_r, small_r } => {
                let q = big_r / small_r;
                Some(PI * PI * q * q / (q * q - 1.0).sqrt())
            }
            ZooSurface::Ellipsoid { a, b, c } if a == b && b == c => Some(4.0 * PI),
            ZooSurface::Ellipsoid { .. } => None,
        }
    }

    /// Euler characteristic of the closed surfaces.
    pub fn euler_characteristic(&self) -> Option<i32> {
        match self {
            ZooSurface::Sphere | ZooSurface::Ellipsoid { .. } => Some(2),
            ZooSurface::CliffordTorusProjected | ZooSurface::TorusOfRevolution { .. } => Some(0),
            _ => None,
        }
    }

    /// Whether the surface is Willmore (a sphere, torus of revolution ratio √2, or an inverted minimal surface).
    pub fn is_willmore(&self) -> bool {
        match *self {
            ZooSurface::Sphere
            | ZooSurface::Catenoid
            | ZooSurface::Enneper
            | ZooSurface::InvertedCatenoid
            | ZooSurface::InvertedEnneper
            | ZooSurface::CliffordTorusProjected => true,
            ZooSurface::Ellipsoid { a, b, c } => a == b && b == c,
            ZooSurface::TorusOfRevolution { big_r, small_r } => (big_r / small_r - 2f64.sqrt()).abs() < 1e-14,
        }
    }
}

impl FromStr for ZooSurface {
    type Err = Error;
    /// Parses `name` or `name(p1,p2,...)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            None => ZooSurface::from_name(s, &[]),
            Some(i) => {
                let name = s[..i].trim();
                let rest = s[i + 1..].strip_suffix(')').ok_or_else(|| Error::InvalidParams {
                    surface: name.to_string(),
                    reason: "missing closing parenthesis".into(),
                })?;
                let params = rest
                    .split(',')
                    .map(|v| {
                        v.trim().parse::<f64>().map_err(|_| Error::InvalidParams {
                            surface: name.to_string(),
                            reason: format!("cannot parse `{}`", v.trim()),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ZooSurface::from_name(name, &params)
            }
        }
    }
}

/// Chart of a zoo surface by name.
pub fn zoo(name: &str, params: &[f64]) -> Result<ImmersionChart> {
    ZooSurface::from_name(name, params)?.chart()
}

fn torus_chart(big_r: f64, small_r: f64) -> ImmersionChart {
    let c = (big_r * big_r - small_r * small_r).sqrt();
    ImmersionChart::new(
        format!("torus-of-revolution({big_r},{small_r})"),
        Domain2::flat_torus(2.0 * PI, 2.0 * PI * small_r / c),
        Evaluator::Torus { big_r, small_r },
    )
    .with_conformal(true)
}

/// Unit sphere, `σ(e^{−t+iφ}) = (sech t cos φ, sech t sin φ, −tanh t)`.
pub fn sphere<T: Real>(t: &Jet2<T>, p: &Jet2<T>) -> [Jet2<T>; 3] {
    let s = t.sech();
    [s * p.cos(), s * p.sin(), -t.tanh()]
}

pub fn ellipsoid<T: Real>(a: f64, b: f64, c: f64, t: &Jet2<T>, p: &Jet2<T>) -> [Jet2<T>; 3] {
    let s = t.sech();
    [(s * p.cos()).scale(T::c(a)), (s * p.sin()).scale(T::c(b)), -t.tanh().scale(T::c(c))]
}

/// Conformal coordinate `S(τ)` of the spheroid chart, `S' = sqrt(tanh²τ + k² sech²τ)`, `S(0) = 0`.
pub fn spheroid_s<T: Real>(a: f64, c: f64, tau: T) -> T {
    if tau < T::zero() {
        return -spheroid_s(a, c, -tau);
    }
    let k = T::c(c / a);
    let m = k * k - T::one();
    let u = tau.tanh();
    let q = (k * k - m * u * u).sqrt();
    let w = u / q;
    // atanh(w) rewritten to stay accurate as u → 1
    let two = T::c(2.0);
    let atanh_w = (T::one() + w).ln() - k.ln() + tau + (T::one() + (-two * tau).exp()).ln() - two.ln() + q.ln();
    let second = if m > T::zero() {
        m.sqrt() * (m.sqrt() * u / k).asin()
    } else if m < T::zero() {
        let mu = -m;
        -mu.sqrt() * (mu.sqrt() * u / k).asinh()
    } else {
        T::zero()
    };
    atanh_w + second
}

fn spheroid_ds<T: Real>(k: T, tau: T) -> T {
    let (th, sh) = (tau.tanh(), T::one() / tau.cosh());
    (th * th + k * k * sh * sh).sqrt()
}

/// Inverse of [`spheroid_s`] by safeguarded Newton iteration.
pub fn spheroid_tau<T: Real>(a: f64, c: f64, s: T) -> T {
    let k = T::c(c / a);
    let mut tau = s / k.max(T::one());
    let eps = T::epsilon();
    for _ in 0..200 {
        let f = spheroid_s(a, c, tau) - s;
        let step = f / spheroid_ds(k, tau);
        tau = tau - step;
        if step.abs() <= T::c(4.0) * eps * (T::one() + tau.abs()) {
            break;
        }
    }
    tau
}

/// Spheroid `(a sech τ cos φ, a sech τ sin φ, −c tanh τ)` with `τ = τ(s)` making the chart conformal.
pub fn spheroid<T: Real>(a: f64, c: f64, s: &Jet2<T>, p: &Jet2<T>) -> crate::Result<[Jet2<T>; 3]> {
    let k = T::c(c / a);
    let order = s.order();
    let tau0 = spheroid_tau(a, c, s.value());
    // Picard iteration for dτ/ds = 1/S'(τ); each pass fixes one more Taylor order
    let mut tau = Jet2::constant(tau0, order);
    for _ in 0..order {
        let th = tau.tanh();
        let sh = tau.sech();
        let ds = (th * th + sh * sh.scale(k * k)).sqrt()?;
        let g = ds.recip()?.truncate(order.saturating_sub(1));
        tau = g.integrate_x()?.add_const(tau0);
    }
    let sh = tau.sech();
    Ok([(sh * p.cos()).scale(T::c(a)), (sh * p.sin()).scale(T::c(a)), -tau.tanh().scale(T::c(c))])
}

pub fn catenoid<T: Real>(t: &Jet2<T>, p: &Jet2<T>) -> [Jet2<T>; 3] {
    let ch = t.cosh();
    [ch * p.cos(), ch * p.sin(), *t]
}

/// Enneper surface at `z = u + iv = e^{t−iφ}`.
pub fn enneper<T: Real>(t: &Jet2<T>, p: &Jet2<T>) -> [Jet2<T>; 3] {
    let e = t.exp();
    let u = e * p.cos();
    let v = -(e * p.sin());
    let (u2, v2) = (u * u, v * v);
    let third = T::c(1.0 / 3.0);
    [u - (u2 * u).scale(third) + u * v2, v - (v2 * v).scale(third) + u2 * v, u2 - v2]
}

/// Torus of revolution in conformal coordinates `(u, s)` with period `2πr/c` in `s`.
pub fn torus<T: Real>(big_r: f64, small_r: f64, u: &Jet2<T>, s: &Jet2<T>) -> crate::Result<[Jet2<T>; 3]> {
    let c = (big_r * big_r - small_r * small_r).sqrt();
    let k2 = (big_r + small_r) / (big_r - small_r);
    let k = k2.sqrt();
    let sigma = s.scale(T::c(c / small_r));
    let (cs, ss) = (sigma.cos(), sigma.sin());
    let den = cs.scale(T::c(1.0 - k2)).add_const(T::c(1.0 + k2)).recip()?;
    let cos_v = cs.scale(T::c(1.0 + k2)).add_const(T::c(1.0 - k2)) * den;
    let sin_v = ss.scale(T::c(2.0 * k)) * den;
    let rho = cos_v.scale(T::c(small_r)).add_const(T::c(big_r));
    Ok([rho * u.cos(), rho * u.sin(), sin_v.scale(T::c(small_r))])
}
