//! Scalar abstraction shared by plain floats and forward-mode dual numbers.
//!
//! Every metric, wind field and embedding in this crate is written once,
//! generically over [`Real`], and evaluated either on `f64` or on nested
//! [`Dual`] numbers. Nesting `Dual<Dual<Dual<f64>>>` carries three independent
//! infinitesimals, which gives exact mixed partials up to order three.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Real:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Lift a constant (all infinitesimal parts zero).
    fn cst(v: f64) -> Self;
    /// Real part, discarding every infinitesimal component.
    fn re(&self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn recip(self) -> Self {
        1.0 / self
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// First-order dual number `v + d·ε` with `ε² = 0`, generic over its
/// component type so it can be nested.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual<T> {
    pub v: T,
    pub d: T,
}

pub type D1 = Dual<f64>;
pub type D2 = Dual<D1>;
pub type D3 = Dual<D2>;

impl<T: Real> Dual<T> {
    #[inline]
    pub fn new(v: T, d: T) -> Self {
        Dual { v, d }
    }

    /// Independent variable: unit infinitesimal part.
    #[inline]
    pub fn var(v: T) -> Self {
        Dual { v, d: T::cst(1.0) }
    }

    #[inline]
    pub fn constant(v: T) -> Self {
        Dual { v, d: T::zero() }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Dual { v: self.v * o.v, d: self.v * o.d + self.d * o.v }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = o.v.recip();
        let q = self.v * inv;
        Dual { v: q, d: (self.d - q * o.d) * inv }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual { v: -self.v, d: -self.d }
    }
}

impl<T: Real> Add<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: f64) -> Self {
        Dual { v: self.v + o, d: self.d }
    }
}

impl<T: Real> Sub<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: f64) -> Self {
        Dual { v: self.v - o, d: self.d }
    }
}

impl<T: Real> Mul<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: f64) -> Self {
        Dual { v: self.v * o, d: self.d * o }
    }
}

impl<T: Real> Div<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: f64) -> Self {
        Dual { v: self.v / o, d: self.d / o }
    }
}

impl<T: Real> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Real> Real for Dual<T> {
    #[inline]
    fn cst(v: f64) -> Self {
        Dual { v: T::cst(v), d: T::zero() }
    }
    #[inline]
    fn re(&self) -> f64 {
        self.v.re()
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        Dual { v: s, d: self.d / (s * 2.0) }
    }
    #[inline]
    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual { v: e, d: self.d * e }
    }
    #[inline]
    fn ln(self) -> Self {
        Dual { v: self.v.ln(), d: self.d / self.v }
    }
    #[inline]
    fn sin(self) -> Self {
        Dual { v: self.v.sin(), d: self.d * self.v.cos() }
    }
    #[inline]
    fn cos(self) -> Self {
        Dual { v: self.v.cos(), d: -(self.d * self.v.sin()) }
    }
    #[inline]
    fn recip(self) -> Self {
        let r = self.v.recip();
        Dual { v: r, d: -(self.d * r * r) }
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::cst(1.0);
        }
        let p = self.v.powi(n - 1);
        Dual { v: p * self.v, d: self.d * p * (n as f64) }
    }
}

/// Seed a scalar for third-order propagation. `a`, `b`, `c` select which of
/// the three infinitesimals (innermost first) this variable carries.
#[inline]
pub fn seed3(v: f64, a: bool, b: bool, c: bool) -> D3 {
    let one = |on: bool| if on { 1.0 } else { 0.0 };
    Dual {
        v: Dual { v: Dual { v, d: one(a) }, d: Dual { v: one(b), d: 0.0 } },
        d: Dual { v: Dual { v: one(c), d: 0.0 }, d: Dual::default() },
    }
}

#[inline]
pub fn seed2(v: f64, a: bool, b: bool) -> D2 {
    Dual {
        v: Dual { v, d: if a { 1.0 } else { 0.0 } },
        d: Dual { v: if b { 1.0 } else { 0.0 }, d: 0.0 },
    }
}

#[inline]
pub fn seed1(v: f64, a: bool) -> D1 {
    Dual { v, d: if a { 1.0 } else { 0.0 } }
}

/// Components of a third-order result, named by which infinitesimals they
/// multiply.
#[derive(Clone, Copy, Debug)]
pub struct Jet3 {
    pub value: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub ab: f64,
    pub ac: f64,
    pub bc: f64,
    pub abc: f64,
}

impl From<D3> for Jet3 {
    fn from(r: D3) -> Self {
        Jet3 {
            value: r.v.v.v,
            a: r.v.v.d,
            b: r.v.d.v,
            c: r.d.v.v,
            ab: r.v.d.d,
            ac: r.d.v.d,
            bc: r.d.d.v,
            abc: r.d.d.d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_derivative_of_cube() {
        // f(z) = z³ at z = 2: f' = 12, f'' = 12, f''' = 6.
        let z = seed3(2.0, true, true, true);
        let j = Jet3::from(z * z * z);
        assert_eq!(j.value, 8.0);
        assert_eq!(j.a, 12.0);
        assert_eq!(j.ab, 12.0);
        assert_eq!(j.abc, 6.0);
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x = 0.7;
        let d = Dual::var(x);
        assert!((d.sqrt().d - 0.5 / x.sqrt()).abs() < 1e-15);
        assert!((d.exp().d - x.exp()).abs() < 1e-15);
        assert!((d.ln().d - 1.0 / x).abs() < 1e-15);
        assert!((d.sin().d - x.cos()).abs() < 1e-15);
        assert!((d.cos().d + x.sin()).abs() < 1e-15);
        assert!((d.recip().d + 1.0 / (x * x)).abs() < 1e-15);
        assert!((d.powi(4).d - 4.0 * x.powi(3)).abs() < 1e-14);
        assert!(((d / Dual::var(x)).d).abs() < 1e-15);
    }

    #[test]
    fn mixed_partials_of_product() {
        // f(x, y) = x² y³; ∂x∂y∂y f = 2x·6y = 12xy.
        let x = seed3(1.5, true, false, false);
        let y = seed3(-0.5, false, true, true);
        let j = Jet3::from(x * x * y * y * y);
        assert!((j.abc - 12.0 * 1.5 * -0.5).abs() < 1e-13);
        assert!((j.bc - 1.5 * 1.5 * 6.0 * -0.5).abs() < 1e-13);
        assert!((j.a - 2.0 * 1.5 * (-0.5f64).powi(3)).abs() < 1e-13);
    }
}
