//! Minkowski space R^{4,1} with η = diag(1,1,1,1,−1) and the Lorentz action of Möbius maps.

use std::ops::Mul;

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jet::{ComplexJet2, Jet2};
use crate::real::Real;
use crate::surface::conformal::{ConformalMap3, Mobius};

pub type Matrix5 = SMatrix<f64, 5, 5>;

const ETA: [f64; 5] = [1.0, 1.0, 1.0, 1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzVec(pub [f64; 5]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Spacelike,
    Null,
    Timelike,
}

impl LorentzVec {
    pub fn norm2(&self) -> f64 {
        eta_inner(&self.0, &self.0)
    }

    /// Causal type with a relative tolerance on the Euclidean size.
    pub fn causal(&self, rel_tol: f64) -> Causal {
        let n = self.norm2();
        let e: f64 = self.0.iter().map(|v| v * v).sum();
        if n.abs() <= rel_tol * e {
            Causal::Null
        } else if n > 0.0 {
            Causal::Spacelike
        } else {
            Causal::Timelike
        }
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn eta_inner(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    (0..5).map(|i| ETA[i] * a[i] * b[i]).sum()
}

/// Complexified η pairing, bilinear (no conjugation). Entries are `(re, im)`.
pub fn eta_inner_complex(a: &[(f64, f64); 5], b: &[(f64, f64); 5]) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for i in 0..5 {
        re += ETA[i] * (a[i].0 * b[i].0 - a[i].1 * b[i].1);
        im += ETA[i] * (a[i].0 * b[i].1 + a[i].1 * b[i].0);
    }
    (re, im)
}

pub fn eta_inner_jet<T: Real>(a: &[Jet2<T>; 5], b: &[Jet2<T>; 5]) -> Jet2<T> {
    let mut s = a[0] * b[0];
    for i in 1..4 {
        s += a[i] * b[i];
    }
    s - a[4] * b[4]
}

/// Bilinear η pairing of complex jets.
pub fn eta_inner_cjet<T: Real>(a: &[ComplexJet2<T>; 5], b: &[ComplexJet2<T>; 5]) -> ComplexJet2<T> {
    let mut s = a[0] * b[0];
    for i in 1..4 {
        s = s + a[i] * b[i];
    }
    s - a[4] * b[4]
}

/// Squared Euclidean norm ξ of the values of a complex 5-vector.
pub fn euclid_norm2_cjet<T: Real>(a: &[ComplexJet2<T>; 5]) -> T {
    a.iter().fold(T::zero(), |s, v| {
        let (r, i) = v.value();
        s + r * r + i * i
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(pub Matrix5);

impl LorentzMatrix {
    pub fn identity() -> Self {
        LorentzMatrix(Matrix5::identity())
    }

    pub fn eta() -> Matrix5 {
        Matrix5::from_diagonal(&nalgebra::SVector::<f64, 5>::from(ETA))
    }

    /// `det(R)·blockdiag(R, 1, 1)` for orthogonal `R`.
    pub fn rotation(r: &[[f64; 3]; 3]) -> Self {
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        let sign = det.signum();
        let mut m = Matrix5::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = sign * r[i][j];
            }
        }
        m[(3, 3)] = sign;
        m[(4, 4)] = sign;
        LorentzMatrix(m)
    }

    /// Boost in the (x⁴, x⁵) plane.
    pub fn boost45(rapidity: f64) -> Self {
        let (c, s) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix5::identity();
        m[(3, 3)] = c;
        m[(3, 4)] = s;
        m[(4, 3)] = s;
        m[(4, 4)] = c;
        LorentzMatrix(m)
    }

    pub fn dilation(s: f64) -> Self {
        Self::boost45(s.ln())
    }

    pub fn translation(v: [f64; 3]) -> Self {
        let h = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        let mut m = Matrix5::identity();
        for i in 0..3 {
            m[(i, 3)] = -v[i];
            m[(i, 4)] = v[i];
            m[(3, i)] = v[i];
            m[(4, i)] = v[i];
        }
        m[(3, 3)] = 1.0 - h;
        m[(3, 4)] = h;
        m[(4, 3)] = -h;
        m[(4, 4)] = 1.0 + h;
        LorentzMatrix(m)
    }

    /// Unit inversion about `c`.
    pub fn inversion(c: [f64; 3]) -> Self {
        let iota = LorentzMatrix(Matrix5::from_diagonal(&nalgebra::SVector::<f64, 5>::from([
            -1.0, -1.0, -1.0, 1.0, -1.0,
        ])));
        Self::translation(c) * iota * Self::translation([-c[0], -c[1], -c[2]])
    }

    pub fn from_mobius(f: &Mobius) -> Self {
        match *f {
            Mobius::Translation(v) => Self::translation(v),
            Mobius::Dilation(s) => Self::dilation(s),
            Mobius::Rotation(r) => Self::rotation(&r),
            Mobius::Inversion(c) => Self::inversion(c),
        }
    }

    /// `max |MᵀηM − η|`.
    pub fn lorentz_defect(&self) -> f64 {
        let eta = Self::eta();
        (self.0.transpose() * eta * self.0 - eta).amax()
    }

    pub fn is_lorentz(&self, tol: f64) -> bool {
        self.lorentz_defect() <= tol
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Inverse of an η-orthogonal matrix, `η Mᵀ η`.
    pub fn inverse(&self) -> Self {
        let eta = Self::eta();
        LorentzMatrix(eta * self.0.transpose() * eta)
    }

    pub fn apply(&self, y: &LorentzVec) -> LorentzVec {
        let mut out = [0.0; 5];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..5).map(|j| self.0[(i, j)] * y.0[j]).sum();
        }
        LorentzVec(out)
    }

    /// Componentwise action on jets.
    pub fn apply_jets<T: Real>(&self, y: &[Jet2<T>; 5]) -> [Jet2<T>; 5] {
        std::array::from_fn(|i| {
            let mut s = y[0].scale(T::c(self.0[(i, 0)]));
            for j in 1..5 {
                s += y[j].scale(T::c(self.0[(i, j)]));
            }
            s
        })
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;
    fn mul(self, o: LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * o.0)
    }
}

/// Lorentz matrix `M` with `CGM(Θ∘Φ) = M·CGM(Φ)`.
pub fn lorentz_from_conformal(theta: &ConformalMap3) -> Result<LorentzMatrix> {
    // factors are validated on construction; rebuild to surface any invalid ones
    let theta = ConformalMap3::new(theta.factors().to_vec())?;
    Ok(theta
        .factors()
        .iter()
        .fold(LorentzMatrix::identity(), |m, f| LorentzMatrix::from_mobius(f) * m))
}

/// Jet-level matrix action.
pub fn matrix_apply<T: Real>(m: &LorentzMatrix, y: &[Jet2<T>; 5]) -> [Jet2<T>; 5] {
    m.apply_jets(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::conformal::axis_rotation;

    #[test]
    fn inner_products() {
        assert_eq!(eta_inner(&[0.0, 0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0, 0.0]), 1.0);
        assert_eq!(eta_inner(&[0.0, 0.0, 0.0, 1.0, 1.0], &[0.0, 0.0, 0.0, 1.0, 1.0]), 0.0);
        let v = [(1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)];
        assert_eq!(eta_inner_complex(&v, &v), (0.0, 0.0));
        assert_eq!(LorentzVec([0.0, 0.0, 0.0, 1.0, 1.0]).causal(1e-12), Causal::Null);
        assert_eq!(LorentzVec([0.0, 0.0, 0.0, 0.0, 1.0]).causal(1e-12), Causal::Timelike);
    }

    #[test]
    fn boost_closed_form() {
        let y = LorentzMatrix::boost45(1.0).apply(&LorentzVec([0.0, 0.0, 0.0, 1.0, 0.0]));
        assert_eq!(y.0, [0.0, 0.0, 0.0, 1f64.cosh(), 1f64.sinh()]);
    }

    #[test]
    fn generators_are_in_so41() {
        let ms = [
            LorentzMatrix::rotation(&axis_rotation([1.0, -2.0, 0.5], 0.9)),
            LorentzMatrix::dilation(2.5),
            LorentzMatrix::translation([0.3, -0.7, 1.9]),
            LorentzMatrix::inversion([0.2, 0.1, -0.4]),
        ];
        for m in ms {
            assert!(m.is_lorentz(1e-12), "{}", m.lorentz_defect());
            assert!((m.det() - 1.0).abs() < 1e-10);
            assert!(((m * m.inverse()).0 - Matrix5::identity()).amax() < 1e-12);
        }
        let mut refl = axis_rotation([0.0, 0.0, 1.0], 0.3);
        for v in refl[2].iter_mut() {
            *v = -*v;
        }
        let m = LorentzMatrix::rotation(&refl);
        assert!((m.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_block_diagonal() {
        let r = axis_rotation([0.0, 1.0, 0.0], 0.4);
        let m = LorentzMatrix::rotation(&r);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.0[(i, j)], r[i][j]);
            }
        }
        assert_eq!(m.0[(3, 3)], 1.0);
        assert_eq!(m.0[(4, 4)], 1.0);
    }

    #[test]
    fn composition_order() {
        let a = Mobius::Translation([1.0, 0.0, 0.0]);
        let b = Mobius::Dilation(2.0);
        let m = lorentz_from_conformal(&ConformalMap3::new(vec![a, b]).unwrap()).unwrap();
        let want = LorentzMatrix::from_mobius(&b) * LorentzMatrix::from_mobius(&a);
        assert_eq!(m, want);
        assert_eq!(lorentz_from_conformal(&ConformalMap3::identity()).unwrap(), LorentzMatrix::identity());
    }

    #[test]
    fn light_cone_lift_is_equivariant() {
        // X(x) = (x, (|x|²−1)/2, (|x|²+1)/2) maps to a multiple of X(Θx)
        let lift = |x: [f64; 3]| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            LorentzVec([x[0], x[1], x[2], 0.5 * (r2 - 1.0), 0.5 * (r2 + 1.0)])
        };
        let theta = ConformalMap3::new(vec![
            Mobius::Inversion([0.5, 0.0, 0.0]),
            Mobius::Translation([0.0, 1.0, -1.0]),
            Mobius::Dilation(0.3),
        ])
        .unwrap();
        let m = lorentz_from_conformal(&theta).unwrap();
        let x = [0.1, 0.7, -0.2];
        let a = m.apply(&lift(x));
        let b = lift(theta.apply_point(x).unwrap());
        let k = a.0[4] - a.0[3];
        for i in 0..5 {
            assert!((a.0[i] - k * b.0[i]).abs() < 1e-12);
        }
    }
}
