//! Second-order jets: a value together with its first two derivatives.

use std::ops::{Add, Mul, Neg, Sub};

use crate::{cln, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: C64,
    pub d1: C64,
    pub d2: C64,
}

impl Jet {
    pub fn new(v: C64, d1: C64, d2: C64) -> Self {
        Self { v, d1, d2 }
    }

    pub fn constant(v: C64) -> Self {
        Self::new(v, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// The independent variable itself.
    pub fn var(x: C64) -> Self {
        Self::new(x, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::constant(C64::new(0.0, 0.0))
    }

    pub fn scale(self, k: C64) -> Self {
        Self::new(self.v * k, self.d1 * k, self.d2 * k)
    }

    /// Apply an outer function given as (f, f', f'') evaluated at `self.v`.
    pub fn compose(self, f: [C64; 3]) -> Self {
        Self::new(f[0], f[1] * self.d1, f[2] * self.d1 * self.d1 + f[1] * self.d2)
    }

    /// Principal-branch power. The base must be nonzero.
    pub fn powc(self, w: C64) -> Self {
        let g = self.v;
        let p = (w * cln(g)).exp();
        let p1 = p / g;
        let p2 = p1 / g;
        self.compose([p, w * p1, w * (w - 1.0) * p2])
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose([e, e, e])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(self.v * o.v, self.d1 * o.v + self.v * o.d1, self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2)
    }
}

/// A complex function of the radial coordinate with derivatives up to order two.
pub trait RadialFunction: Sync {
    fn jet2(&self, u: f64) -> Result<Jet>;

    fn value(&self, u: f64) -> Result<C64> {
        Ok(self.jet2(u)?.v)
    }

    fn jet1(&self, u: f64) -> Result<(C64, C64)> {
        let j = self.jet2(u)?;
        Ok((j.v, j.d1))
    }
}

/// Wraps an opaque callable; derivatives come from central differences.
pub struct FiniteDiff<F>(pub F);

impl<F> FiniteDiff<F> {
    pub fn step(u: f64) -> f64 {
        1e-6 * u.abs().max(1.0)
    }
}

impl<F> RadialFunction for FiniteDiff<F>
where
    F: Fn(f64) -> Result<C64> + Sync,
{
    fn jet2(&self, u: f64) -> Result<Jet> {
        let h = Self::step(u);
        let f0 = (self.0)(u)?;
        let fp = (self.0)(u + h)?;
        let fm = (self.0)(u - h)?;
        Ok(Jet::new(f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
    }

    fn value(&self, u: f64) -> Result<C64> {
        (self.0)(u)
    }
}
