//! The cubic character surface `F = {P = 0} ⊂ C³`, its rational
//! parametrization, and the split of its real points into two components.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Scalars the surface utilities work over: exact rationals or `f64`.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Whether `value = P(p)` counts as zero at `p`.
    fn vanishes(value: &Self, p: &CharacterPoint<Self>) -> bool;
}

impl Scalar for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn vanishes(value: &Self, _p: &CharacterPoint<Self>) -> bool {
        Zero::is_zero(value)
    }
}

/// Relative tolerance for the floating-point surface test.
pub const SURFACE_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn vanishes(value: &Self, p: &CharacterPoint<Self>) -> bool {
        let scale = 1.0 + p.x.abs().powi(3) + p.y.abs().powi(3) + p.z.abs().powi(2);
        value.abs() < SURFACE_TOL * scale
    }
}

/// Trace coordinates `(x, y, z)` of a representation class.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterPoint<T = Rational> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> CharacterPoint<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        CharacterPoint { x, y, z }
    }
}

impl CharacterPoint<Rational> {
    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        CharacterPoint { x: x.into(), y: y.into(), z: z.into() }
    }

    pub fn to_f64(&self) -> CharacterPoint<f64> {
        CharacterPoint { x: self.x.to_f64(), y: self.y.to_f64(), z: self.z.to_f64() }
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer() && self.z.is_integer()
    }
}

impl<T: fmt::Display> fmt::Display for CharacterPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl<T: fmt::Display> fmt::Debug for CharacterPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn c<T: Scalar>(n: i64) -> T {
    T::from_i64(n)
}

/// Lawton's polynomial
/// `414 − 108x + x³ − 108y + 21xy + y³ − (51 − 9x − 9y + xy)z + z²`.
pub fn lawton_eval<T: Scalar>(p: &CharacterPoint<T>) -> T {
    let (x, y, z) = (p.x.clone(), p.y.clone(), p.z.clone());
    let cubic = c::<T>(414) - c::<T>(108) * x.clone() + x.clone() * x.clone() * x.clone() - c::<T>(108) * y.clone()
        + c::<T>(21) * x.clone() * y.clone()
        + y.clone() * y.clone() * y.clone();
    let linear = c::<T>(51) - c::<T>(9) * x.clone() - c::<T>(9) * y.clone() + x * y;
    cubic - linear * z.clone() + z.clone() * z
}

pub fn on_surface<T: Scalar>(p: &CharacterPoint<T>) -> bool {
    T::vanishes(&lawton_eval(p), p)
}

/// A point of the parameter plane off the curve `st − s³ − 1 = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ParamPoint {
    s: Rational,
    t: Rational,
}

impl ParamPoint {
    pub fn new(s: Rational, t: Rational) -> Result<Self> {
        if Zero::is_zero(&psi_denominator(&s, &t)) {
            return Err(Error::SingularParameter);
        }
        Ok(ParamPoint { s, t })
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }
}

fn psi_denominator<T: Scalar>(s: &T, t: &T) -> T {
    s.clone() * t.clone() - s.clone() * s.clone() * s.clone() - c::<T>(1)
}

/// `Ψ(s, t) = (3 + r, 3 + s·r, 3 + t·r)` with `r = (3 + 3s + t)² / (st − s³ − 1)`.
pub fn psi_scalar<T: Scalar>(s: &T, t: &T) -> Result<CharacterPoint<T>> {
    let den = psi_denominator(s, t);
    if den.is_zero() {
        return Err(Error::SingularParameter);
    }
    let w = c::<T>(3) + c::<T>(3) * s.clone() + t.clone();
    let r = w.clone() * w / den;
    Ok(CharacterPoint { x: c::<T>(3) + r.clone(), y: c::<T>(3) + s.clone() * r.clone(), z: c::<T>(3) + t.clone() * r })
}

pub fn psi(p: &ParamPoint) -> CharacterPoint {
    psi_scalar(&p.s, &p.t).expect("ParamPoint is off the singular curve")
}

/// Recovers `(s, t)` with `Ψ(s, t) = p`, when `p` lies in the image of `Ψ`.
pub fn psi_preimage(p: &CharacterPoint) -> Option<ParamPoint> {
    let r = &p.x - 3;
    if Zero::is_zero(&r) {
        return None;
    }
    let s = (&p.y - 3) / &r;
    let t = (&p.z - 3) / &r;
    let pp = ParamPoint::new(s, t).ok()?;
    (psi(&pp) == *p).then_some(pp)
}

/// `z² + b z + c` with `P(x, y, z) = z² + b z + c`.
fn z_quadratic<T: Scalar>(x: &T, y: &T) -> (T, T) {
    let b = -(c::<T>(51) - c::<T>(9) * x.clone() - c::<T>(9) * y.clone() + x.clone() * y.clone());
    let cst = lawton_eval(&CharacterPoint { x: x.clone(), y: y.clone(), z: c::<T>(0) });
    (b, cst)
}

/// Rational roots of `P(x, y, ·)`, with multiplicity, ascending.
pub fn solve_z(x: &Rational, y: &Rational) -> Vec<Rational> {
    let (b, cst) = z_quadratic(x, y);
    let disc = &b * &b - &cst * 4;
    let Some(root) = disc.sqrt_exact() else {
        return Vec::new();
    };
    let half = Rational::new(1, 2);
    let mut roots = vec![(-&b - &root) * &half, (-&b + root) * half];
    roots.sort();
    roots
}

/// Real roots of `P(x, y, ·)` in floating point, ascending.
pub fn solve_z_f64(x: f64, y: f64) -> Vec<f64> {
    let (b, cst) = z_quadratic(&x, &y);
    let disc = b * b - 4.0 * cst;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Stable form avoiding cancellation.
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = if q == 0.0 { vec![0.0, 0.0] } else { vec![q, cst / q] };
    roots.sort_by(f64::total_cmp);
    roots
}

/// The two connected components of the real points of `F`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ComponentLabel {
    /// Contains the trivial representation.
    C1,
    /// The Hitchin component, containing the uniformization representation.
    C2,
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentLabel::C1 => "C1",
            ComponentLabel::C2 => "C2",
        })
    }
}

/// `C2` exactly on the open quadrant `x > 3, y > 3`; boundary points go to `C1`.
pub fn classify_component<T: Scalar>(p: &CharacterPoint<T>) -> Result<ComponentLabel> {
    if !on_surface(p) {
        return Err(Error::OffSurface(lawton_eval(p).to_string()));
    }
    let three = c::<T>(3);
    Ok(if p.x > three && p.y > three { ComponentLabel::C2 } else { ComponentLabel::C1 })
}

/// The unique singular point, the character of the trivial representation.
pub fn singular_locus() -> CharacterPoint {
    CharacterPoint::from_i64(3, 3, 3)
}
