//! Tensor-product quadrature: trapezoid on periodic axes, composite Gauss–Legendre elsewhere.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::Domain2;

/// Gauss–Legendre nodes per cell.
pub const GL_NODES: usize = 16;

/// Values beyond this magnitude are treated as a non-integrable blow-up.
pub const OVERFLOW_GUARD: f64 = 1e250;

/// Nodes per axis of a tensor grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize) -> Self {
        GridSpec { nx, ny }
    }

    pub fn halved(&self) -> Self {
        GridSpec { nx: (self.nx / 2).max(8), ny: (self.ny / 2).max(8) }
    }

    pub fn doubled(&self) -> Self {
        GridSpec { nx: self.nx * 2, ny: self.ny * 2 }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;
    /// Parses `AxB`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::Config(format!("grid `{s}` is not of the form AxB")))?;
        let p = |v: &str| v.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad grid count `{v}`")));
        let g = GridSpec { nx: p(a)?, ny: p(b)? };
        if g.nx < 8 || g.ny < 8 {
            return Err(Error::Config(format!("grid counts must be at least 8 per axis, got {s}")));
        }
        Ok(g)
    }
}

/// One-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn gl_reference() -> &'static [(f64, f64)] {
    static GL: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    GL.get_or_init(|| {
        let q = GaussLegendre::new(NonZeroUsize::new(GL_NODES).expect("nonzero"));
        let mut v = q.as_node_weight_pairs().to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    })
}

impl Rule1D {
    /// `n`-point trapezoid rule on a periodic interval `[a, b)`.
    pub fn trapezoid(a: f64, b: f64, n: usize) -> Self {
        let h = (b - a) / n as f64;
        Rule1D { nodes: (0..n).map(|i| a + h * i as f64).collect(), weights: vec![h; n] }
    }

    /// Composite Gauss–Legendre with `cells` uniform cells.
    pub fn gauss_legendre(a: f64, b: f64, cells: usize) -> Self {
        let cells = cells.max(1);
        let h = (b - a) / cells as f64;
        let mut nodes = Vec::with_capacity(cells * GL_NODES);
        let mut weights = Vec::with_capacity(cells * GL_NODES);
        for c in 0..cells {
            let lo = a + h * c as f64;
            for &(x, w) in gl_reference() {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Rule1D { nodes, weights }
    }

    /// Gauss–Legendre on explicit cell boundaries.
    pub fn gauss_legendre_cells(edges: &[f64]) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for e in edges.windows(2) {
            let h = e[1] - e[0];
            for &(x, w) in gl_reference() {
                nodes.push(e[0] + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Rule1D { nodes, weights }
    }

    /// Rule for an axis with about `n` nodes.
    pub fn for_axis(range: [f64; 2], periodic: bool, n: usize) -> Self {
        if periodic {
            Self::trapezoid(range[0], range[1], n)
        } else {
            Self::gauss_legendre(range[0], range[1], (n / GL_NODES).max(1))
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Tensor grid over a domain.
pub fn domain_rules(domain: &Domain2, grid: GridSpec) -> (Rule1D, Rule1D) {
    let per = domain.periodic();
    (Rule1D::for_axis(domain.x_range(), per[0], grid.nx), Rule1D::for_axis(domain.y_range(), per[1], grid.ny))
}

/// Result of integrating `M` quantities at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<const M: usize> {
    pub value: [f64; M],
    /// `Σ |w f|`, used for the rounding floor.
    pub abs: [f64; M],
}

impl<const M: usize> Integral<M> {
    /// Rounding-level error floor.
    pub fn floor(&self) -> [f64; M] {
        self.abs.map(|a| 64.0 * f64::EPSILON * a)
    }
}

/// Integrates a vector integrand over the tensor grid with an ordered (thread-count independent) sum.
pub fn integrate<const M: usize, F>(rx: &Rule1D, ry: &Rule1D, f: F) -> Result<Integral<M>>
where
    F: Fn([f64; 2]) -> Result<[f64; M]> + Sync,
{
    let rows: Vec<([f64; M], [f64; M])> = rx
        .nodes
        .par_iter()
        .zip(rx.weights.par_iter())
        .map(|(&x, &wx)| {
            let mut v = [0.0; M];
            let mut a = [0.0; M];
            for (&y, &wy) in ry.nodes.iter().zip(&ry.weights) {
                let pt = [x, y];
                let r = f(pt)?;
                for k in 0..M {
                    if !r[k].is_finite() || r[k].abs() > OVERFLOW_GUARD {
                        return Err(Error::Blowup { point: pt });
                    }
                    v[k] += wy * r[k];
                    a[k] += (wy * r[k]).abs();
                }
            }
            Ok((v.map(|s| s * wx), a.map(|s| s * wx.abs())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut value = [0.0; M];
    let mut abs = [0.0; M];
    for (v, a) in rows {
        for k in 0..M {
            value[k] += v[k];
            abs[k] += a[k];
        }
    }
    Ok(Integral { value, abs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials() {
        let r = Rule1D::gauss_legendre(0.0, 2.0, 3);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 2f64.powi(10) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_spectral_on_periodic() {
        let r = Rule1D::trapezoid(0.0, std::f64::consts::TAU, 32);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (x.cos()).exp()).sum();
        let exact = std::f64::consts::TAU * 1.2660658777520082;
        assert!((s - exact).abs() < 1e-13);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!("64x32".parse::<GridSpec>().unwrap(), GridSpec::new(64, 32));
        assert!("4x64".parse::<GridSpec>().is_err());
        assert!("64".parse::<GridSpec>().is_err());
    }

    #[test]
    fn ordered_sum_is_deterministic() {
        let rx = Rule1D::gauss_legendre(0.0, 1.0, 4);
        let ry = Rule1D::trapezoid(0.0, 1.0, 16);
        let f = |p: [f64; 2]| Ok([p[0].sin() * p[1], 1.0]);
        let a = integrate(&rx, &ry, f).unwrap();
        let b = integrate(&rx, &ry, f).unwrap();
        assert_eq!(a, b);
        assert!((a.value[1] - 1.0).abs() < 1e-14);
    }
}
