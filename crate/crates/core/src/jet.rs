//! Truncated bivariate Taylor jets.
//!
//! A [`Jet2`] of order `K` stores `c_ab = ∂^a_x ∂^b_y f / (a! b!)` for `a + b ≤ K`
//! in graded-lexicographic order: degree `d = a + b` ascending, and inside a degree
//! `b` ascending. The flat index of `c_ab` is therefore `d(d+1)/2 + b`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::real::Real;

pub const MAX_ORDER: usize = 6;
pub const MAX_COEFFS: usize = 28;

/// Number of coefficients of an order-`k` jet.
#[inline]
pub const fn coeff_count(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Flat index of `c_ab`.
#[inline]
pub const fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[derive(Clone, Copy, PartialEq)]
pub struct Jet2<T = f64> {
    order: u8,
    c: [T; MAX_COEFFS],
}

impl<T: Real> fmt::Debug for Jet2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet2")
            .field("order", &self.order)
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

impl<T: Real> Jet2<T> {
    /// Zero jet of the given order. Panics if `order > MAX_ORDER`.
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet2 { order: order as u8, c: [T::zero(); MAX_COEFFS] }
    }

    pub fn constant(v: T, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = v;
        j
    }

    /// Jet of the coordinate function `x` at base abscissa `x0`.
    pub fn var_x(x0: T, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.c[index(1, 0)] = T::one();
        }
        j
    }

    /// Jet of the coordinate function `y` at base ordinate `y0`.
    pub fn var_y(y0: T, order: usize) -> Self {
        let mut j = Self::constant(y0, order);
        if order > 0 {
            j.c[index(0, 1)] = T::one();
        }
        j
    }

    /// Builds a jet from raw coefficients in the triangular layout.
    pub fn from_coeffs(order: usize, coeffs: &[T]) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        let n = coeff_count(order);
        if coeffs.len() != n {
            return Err(Error::Config(format!(
                "order {order} needs {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut j = Self::zero(order);
        j.c[..n].copy_from_slice(coeffs);
        Ok(j)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    #[inline]
    pub fn coeffs(&self) -> &[T] {
        &self.c[..coeff_count(self.order())]
    }

    #[inline]
    pub fn value(&self) -> T {
        self.c[0]
    }

    #[inline]
    pub fn set_value(&mut self, v: T) {
        self.c[0] = v;
    }

    /// Normalized coefficient `c_ab`; zero beyond the order.
    #[inline]
    pub fn coeff(&self, a: usize, b: usize) -> T {
        if a + b > self.order() {
            T::zero()
        } else {
            self.c[index(a, b)]
        }
    }

    /// Partial derivative `∂^a_x ∂^b_y f` at the base point.
    pub fn derivative(&self, a: usize, b: usize) -> T {
        self.coeff(a, b) * T::c(factorial(a) * factorial(b))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let k = order.min(self.order());
        let mut j = Self::zero(k);
        let n = coeff_count(k);
        j.c[..n].copy_from_slice(&self.c[..n]);
        j
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs().iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn map_coeffs(&self, f: impl Fn(T) -> T) -> Self {
        let mut j = *self;
        for v in j.c[..coeff_count(self.order())].iter_mut() {
            *v = f(*v);
        }
        j
    }

    pub fn scale(&self, s: T) -> Self {
        self.map_coeffs(|v| v * s)
    }

    pub fn add_const(&self, s: T) -> Self {
        let mut j = *self;
        j.c[0] = j.c[0] + s;
        j
    }

    /// Sum of two jets of equal order.
    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.same_order(o)?;
        Ok(*self + *o)
    }

    /// Product of two jets of equal order.
    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.same_order(o)?;
        Ok(*self * *o)
    }

    fn same_order(&self, o: &Self) -> Result<()> {
        if self.order != o.order {
            Err(Error::OrderMismatch(self.order(), o.order()))
        } else {
            Ok(())
        }
    }

    fn mul_to(&self, o: &Self, k: usize) -> Self {
        let mut out = Self::zero(k);
        for d in 0..=k {
            for b in 0..=d {
                let a = d - b;
                let mut s = T::zero();
                for i in 0..=a {
                    for j in 0..=b {
                        s = s + self.c[index(i, j)] * o.c[index(a - i, b - j)];
                    }
                }
                out.c[index(a, b)] = s;
            }
        }
        out
    }

    /// `Σ u_k (f − f0)^k`, the composition of a univariate Taylor series with `f`.
    pub fn compose(&self, u: &[T]) -> Self {
        let k = self.order();
        assert!(u.len() > k, "series needs {} terms", k + 1);
        let mut h = *self;
        h.c[0] = T::zero();
        let mut r = Self::constant(u[k], k);
        for i in (0..k).rev() {
            r = r * h;
            r.c[0] = r.c[0] + u[i];
        }
        r
    }

    /// `Σ u_k ((f − f0)/s)^k`; keeps the series coefficients O(1) when `f0` is tiny or huge.
    fn compose_scaled(&self, s: T, u: &[T]) -> Self {
        let is = T::one() / s;
        let mut h = self.scale(is);
        h.c[0] = T::zero();
        let k = self.order();
        let mut r = Self::constant(u[k], k);
        for i in (0..k).rev() {
            r = r * h;
            r.c[0] = r.c[0] + u[i];
        }
        r
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut u = [T::zero(); MAX_ORDER + 1];
        let mut f = T::one();
        for (k, uk) in u.iter_mut().enumerate().take(self.order() + 1) {
            if k > 0 {
                f = f / T::from_usize(k);
            }
            *uk = e * f;
        }
        self.compose(&u)
    }

    pub fn ln(&self) -> Result<Self> {
        let v = self.value();
        if !(v > T::zero()) {
            return Err(Error::Domain { func: "log", value: v.f64() });
        }
        let mut u = [T::zero(); MAX_ORDER + 1];
        u[0] = v.ln();
        for k in 1..=self.order() {
            let s = if k % 2 == 1 { T::one() } else { -T::one() };
            u[k] = s / T::from_usize(k);
        }
        Ok(self.compose_scaled(v, &u))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&Self::trig_series(s, c, self.order()))
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&Self::trig_series(c, -s, self.order()))
    }

    fn trig_series(f0: T, f1: T, k: usize) -> [T; MAX_ORDER + 1] {
        let cycle = [f0, f1, -f0, -f1];
        let mut u = [T::zero(); MAX_ORDER + 1];
        for (i, ui) in u.iter_mut().enumerate().take(k + 1) {
            *ui = cycle[i % 4] / T::c(factorial(i));
        }
        u
    }

    pub fn sinh(&self) -> Self {
        let v = self.value();
        self.compose(&Self::hyp_series(v.sinh(), v.cosh(), self.order()))
    }

    pub fn cosh(&self) -> Self {
        let v = self.value();
        self.compose(&Self::hyp_series(v.cosh(), v.sinh(), self.order()))
    }

    fn hyp_series(f0: T, f1: T, k: usize) -> [T; MAX_ORDER + 1] {
        let mut u = [T::zero(); MAX_ORDER + 1];
        for (i, ui) in u.iter_mut().enumerate().take(k + 1) {
            let f = if i % 2 == 0 { f0 } else { f1 };
            *ui = f / T::c(factorial(i));
        }
        u
    }

    /// Univariate series of tanh about `v` from the Riccati relation `y' = 1 − y²`.
    fn tanh_series(v: T, k: usize) -> [T; MAX_ORDER + 1] {
        let mut y = [T::zero(); MAX_ORDER + 1];
        y[0] = v.tanh();
        for n in 0..k {
            let mut s = if n == 0 { T::one() } else { T::zero() };
            for j in 0..=n {
                s = s - y[j] * y[n - j];
            }
            y[n + 1] = s / T::from_usize(n + 1);
        }
        y
    }

    pub fn tanh(&self) -> Self {
        self.compose(&Self::tanh_series(self.value(), self.order()))
    }

    /// Hyperbolic secant via `y' = −y·tanh`.
    pub fn sech(&self) -> Self {
        let k = self.order();
        let v = self.value();
        let t = Self::tanh_series(v, k);
        let mut y = [T::zero(); MAX_ORDER + 1];
        y[0] = T::one() / v.cosh();
        for n in 0..k {
            let mut s = T::zero();
            for j in 0..=n {
                s = s - y[j] * t[n - j];
            }
            y[n + 1] = s / T::from_usize(n + 1);
        }
        self.compose(&y)
    }

    /// Real power `f^p` for positive base value.
    pub fn powf(&self, p: T) -> Result<Self> {
        let v = self.value();
        if !(v > T::zero()) {
            return Err(Error::Domain { func: "pow", value: v.f64() });
        }
        let mut u = [T::zero(); MAX_ORDER + 1];
        u[0] = v.powf(p);
        for k in 1..=self.order() {
            u[k] = u[k - 1] * (p - T::from_usize(k - 1)) / T::from_usize(k);
        }
        Ok(self.compose_scaled(v, &u))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let v = self.value();
        if !(v > T::zero()) {
            return Err(Error::Domain { func: "sqrt", value: v.f64() });
        }
        let s = v.sqrt();
        let half = T::c(0.5);
        let mut u = [T::zero(); MAX_ORDER + 1];
        u[0] = s;
        for k in 1..=self.order() {
            u[k] = u[k - 1] * (half - T::from_usize(k - 1)) / T::from_usize(k);
        }
        Ok(self.compose_scaled(v, &u))
    }

    pub fn recip(&self) -> Result<Self> {
        let v = self.value();
        if v == T::zero() || !v.is_finite() {
            return Err(Error::Domain { func: "recip", value: v.f64() });
        }
        Ok(self.recip_unchecked())
    }

    /// Reciprocal without the domain check; a zero base value yields non-finite coefficients.
    pub fn recip_unchecked(&self) -> Self {
        let v = self.value();
        let iv = T::one() / v;
        let mut u = [T::zero(); MAX_ORDER + 1];
        u[0] = iv;
        for k in 1..=self.order() {
            u[k] = -u[k - 1];
        }
        self.compose_scaled(v, &u)
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { *self };
        let mut r = Self::constant(T::one(), self.order());
        let mut p = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                r = r * p;
            }
            p = p * p;
            e >>= 1;
        }
        Ok(r)
    }

    pub fn atan(&self) -> Self {
        let k = self.order();
        let v = self.value();
        // series of 1/(1 + (v+s)^2) = 1/(a0 + a1 s + s^2)
        let a0 = T::one() + v * v;
        let a1 = T::c(2.0) * v;
        let mut r = [T::zero(); MAX_ORDER + 1];
        r[0] = T::one() / a0;
        for n in 1..k {
            let prev2 = if n >= 2 { r[n - 2] } else { T::zero() };
            r[n] = -(a1 * r[n - 1] + prev2) / a0;
        }
        let mut u = [T::zero(); MAX_ORDER + 1];
        u[0] = v.atan();
        for n in 1..=k {
            u[n] = r[n - 1] / T::from_usize(n);
        }
        self.compose(&u)
    }

    /// Angle of the point `(x, y)`, i.e. `atan2(y, x)` with `self = y`.
    pub fn atan2(&self, x: &Self) -> Result<Self> {
        let (y0, x0) = (self.value(), x.value());
        if y0 == T::zero() && x0 == T::zero() {
            return Err(Error::Domain { func: "atan2", value: 0.0 });
        }
        let mut r = if x0.abs() >= y0.abs() {
            (*self * x.recip_unchecked()).atan()
        } else {
            -(*x * self.recip_unchecked()).atan()
        };
        r.c[0] = y0.atan2(x0);
        Ok(r)
    }

    /// `∂_x f`, an order `K − 1` jet.
    pub fn dx(&self) -> Result<Self> {
        let k = self.order();
        if k == 0 {
            return Err(Error::InsufficientOrder { needed: 1, got: 0 });
        }
        let mut out = Self::zero(k - 1);
        for d in 0..k {
            for b in 0..=d {
                let a = d - b;
                out.c[index(a, b)] = T::from_usize(a + 1) * self.c[index(a + 1, b)];
            }
        }
        Ok(out)
    }

    /// `∂_y f`, an order `K − 1` jet.
    pub fn dy(&self) -> Result<Self> {
        let k = self.order();
        if k == 0 {
            return Err(Error::InsufficientOrder { needed: 1, got: 0 });
        }
        let mut out = Self::zero(k - 1);
        for d in 0..k {
            for b in 0..=d {
                let a = d - b;
                out.c[index(a, b)] = T::from_usize(b + 1) * self.c[index(a, b + 1)];
            }
        }
        Ok(out)
    }

    /// Gradient `(∂_x f, ∂_y f)`.
    pub fn grad(&self) -> Result<[Self; 2]> {
        Ok([self.dx()?, self.dy()?])
    }

    /// Antiderivative in `x` vanishing on the line through the base point; order `K + 1`.
    pub fn integrate_x(&self) -> Result<Self> {
        let k = self.order() + 1;
        if k > MAX_ORDER {
            return Err(Error::OrderTooLarge(k));
        }
        let mut out = Self::zero(k);
        for d in 0..k {
            for b in 0..=d {
                let a = d - b;
                out.c[index(a + 1, b)] = self.c[index(a, b)] / T::from_usize(a + 1);
            }
        }
        Ok(out)
    }

    /// Jet of `p ↦ f(sx·p_x + ox, sy·p_y + oy)` given the jet of `f` at the image point.
    pub fn scale_axes(&self, sx: T, sy: T) -> Self {
        let mut j = *self;
        for d in 0..=self.order() {
            for b in 0..=d {
                let a = d - b;
                j.c[index(a, b)] = self.c[index(a, b)] * sx.powi(a as i32) * sy.powi(b as i32);
            }
        }
        j
    }

    /// Flat Laplacian `∂²_x f + ∂²_y f`, an order `K − 2` jet.
    pub fn laplacian_flat(&self) -> Result<Self> {
        if self.order() < 2 {
            return Err(Error::InsufficientOrder { needed: 2, got: self.order() });
        }
        Ok(self.dx()?.dx()? + self.dy()?.dy()?)
    }

    pub fn to_f64(&self) -> Jet2<f64> {
        let mut j = Jet2::<f64>::zero(self.order());
        for (d, s) in j.c.iter_mut().zip(self.coeffs()) {
            *d = s.f64();
        }
        j
    }

    pub fn from_f64(j: &Jet2<f64>) -> Self {
        let mut out = Self::zero(j.order());
        for (d, s) in out.c.iter_mut().zip(j.coeffs()) {
            *d = T::c(*s);
        }
        out
    }
}

/// Elementary functions selectable by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Recip,
    Atan,
    Pow(f64),
}

/// Applies an elementary function through univariate series composition.
pub fn jet_elementary<T: Real>(f: &Jet2<T>, func: Elementary) -> Result<Jet2<T>> {
    Ok(match func {
        Elementary::Exp => f.exp(),
        Elementary::Log => f.ln()?,
        Elementary::Sin => f.sin(),
        Elementary::Cos => f.cos(),
        Elementary::Sinh => f.sinh(),
        Elementary::Cosh => f.cosh(),
        Elementary::Sqrt => f.sqrt()?,
        Elementary::Recip => f.recip()?,
        Elementary::Atan => f.atan(),
        Elementary::Pow(p) => f.powf(T::c(p))?,
    })
}

impl<T: Real> Add for Jet2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let k = self.order().min(o.order());
        let mut out = Self::zero(k);
        for i in 0..coeff_count(k) {
            out.c[i] = self.c[i] + o.c[i];
        }
        out
    }
}

impl<T: Real> Sub for Jet2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let k = self.order().min(o.order());
        let mut out = Self::zero(k);
        for i in 0..coeff_count(k) {
            out.c[i] = self.c[i] - o.c[i];
        }
        out
    }
}

/// Operators truncate to the smaller order; use `checked_*` to insist on equal orders.
impl<T: Real> Mul for Jet2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let k = self.order().min(o.order());
        self.mul_to(&o, k)
    }
}

impl<T: Real> Div for Jet2<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip_unchecked()
    }
}

impl<T: Real> Neg for Jet2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_coeffs(|v| -v)
    }
}

impl<T: Real> AddAssign for Jet2<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Jet2<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

/// Complex-valued jet `re + i·im`.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexJet2<T = f64> {
    pub re: Jet2<T>,
    pub im: Jet2<T>,
}

impl<T: Real> fmt::Debug for ComplexJet2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexJet2").field("re", &self.re).field("im", &self.im).finish()
    }
}

impl<T: Real> ComplexJet2<T> {
    pub fn new(re: Jet2<T>, im: Jet2<T>) -> Result<Self> {
        if re.order() != im.order() {
            return Err(Error::OrderMismatch(re.order(), im.order()));
        }
        Ok(ComplexJet2 { re, im })
    }

    pub fn from_real(re: Jet2<T>) -> Self {
        ComplexJet2 { re, im: Jet2::zero(re.order()) }
    }

    /// The coordinate jet `z = x + iy` at `(x0, y0)`.
    pub fn z(x0: T, y0: T, order: usize) -> Self {
        ComplexJet2 { re: Jet2::var_x(x0, order), im: Jet2::var_y(y0, order) }
    }

    pub fn order(&self) -> usize {
        self.re.order().min(self.im.order())
    }

    pub fn value(&self) -> (T, T) {
        (self.re.value(), self.im.value())
    }

    pub fn abs_value(&self) -> T {
        self.re.value().hypot(self.im.value())
    }

    pub fn conj(&self) -> Self {
        ComplexJet2 { re: self.re, im: -self.im }
    }

    pub fn scale(&self, s: T) -> Self {
        ComplexJet2 { re: self.re.scale(s), im: self.im.scale(s) }
    }

    /// `∂_z = ½(∂_x − i∂_y)`.
    pub fn dz(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { needed: 1, got: 0 });
        }
        let half = T::c(0.5);
        let (rx, ry, ix, iy) = (self.re.dx()?, self.re.dy()?, self.im.dx()?, self.im.dy()?);
        Ok(ComplexJet2 { re: (rx + iy).scale(half), im: (ix - ry).scale(half) })
    }

    /// `∂_z̄ = ½(∂_x + i∂_y)`.
    pub fn dzbar(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { needed: 1, got: 0 });
        }
        let half = T::c(0.5);
        let (rx, ry, ix, iy) = (self.re.dx()?, self.re.dy()?, self.im.dx()?, self.im.dy()?);
        Ok(ComplexJet2 { re: (rx - iy).scale(half), im: (ix + ry).scale(half) })
    }

    pub fn laplacian_flat(&self) -> Result<Self> {
        Ok(ComplexJet2 { re: self.re.laplacian_flat()?, im: self.im.laplacian_flat()? })
    }
}

/// Wirtinger derivative `∂_z`.
pub fn wirtinger_dz<T: Real>(f: &ComplexJet2<T>) -> Result<ComplexJet2<T>> {
    f.dz()
}

/// Wirtinger derivative `∂_z̄`.
pub fn wirtinger_dzbar<T: Real>(f: &ComplexJet2<T>) -> Result<ComplexJet2<T>> {
    f.dzbar()
}

impl<T: Real> Add for ComplexJet2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ComplexJet2 { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: Real> Sub for ComplexJet2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ComplexJet2 { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: Real> Mul for ComplexJet2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ComplexJet2 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl<T: Real> Neg for ComplexJet2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexJet2 { re: -self.re, im: -self.im }
    }
}
