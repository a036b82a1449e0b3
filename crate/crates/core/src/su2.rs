//! SU(2) as unit quaternions.
//!
//! A [`Unitary`] `(w, x, y, z)` stands for `w·I + i(x·X + y·Y + z·Z)`, so
//! `exp(iα n̂·σ)` is `(cos α, sin α·n̂)`. With this sign convention the
//! product rule is
//!
//! ```text
//! (w1, v1)(w2, v2) = (w1 w2 − v1·v2,  w1 v2 + w2 v1 − v1 × v2)
//! ```
//!
//! (note the minus on the cross product, unlike Hamilton quaternions).

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;
use crate::{Error, Result};

/// Loose tolerance on axis norms; axes are renormalized after the check.
pub const AXIS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_f64(v: [f64; 3]) -> Self {
        Vec3::new(T::from_f64(v[0]), T::from_f64(v[1]), T::from_f64(v[2]))
    }

    pub fn zero() -> Self {
        Vec3::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_x() -> Self {
        Vec3::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Vec3::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Vec3::new(T::zero(), T::zero(), T::one())
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }

    pub fn get(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone() + self.z.clone() * o.z.clone()
    }

    pub fn cross(&self, o: &Self) -> Self {
        Vec3::new(
            self.y.clone() * o.z.clone() - self.z.clone() * o.y.clone(),
            self.z.clone() * o.x.clone() - self.x.clone() * o.z.clone(),
            self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Vec3::new(self.x.clone() * s.clone(), self.y.clone() * s.clone(), self.z.clone() * s.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Checks `|v| ≈ 1` within [`AXIS_TOLERANCE`] and returns `v / |v|`.
    pub fn to_unit(&self) -> Result<Self> {
        let n = self.norm();
        if !n.is_finite() || (n.clone() - T::one()).abs() > T::from_f64(AXIS_TOLERANCE) {
            return Err(Error::InvalidAxis(format!("{self:?} has norm {:e}", n.to_f64())));
        }
        Ok(self.scale(&(T::one() / n)))
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Vec3<T>;
    fn add(self, o: Self) -> Self {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Vec3<T>;
    fn sub(self, o: Self) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Vec3<T>;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// The ε of `V = exp(iε·σ)`.
pub type ErrorVector<T> = Vec3<T>;

/// `exp(iα n̂·σ)`: a rotation by `2α` about `n̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisAngle<T> {
    pub axis: Vec3<T>,
    pub alpha: T,
}

impl<T: Real> AxisAngle<T> {
    pub fn new(axis: Vec3<T>, alpha: T) -> Self {
        AxisAngle { axis, alpha }
    }

    pub fn to_unitary(&self) -> Result<Unitary<T>> {
        Unitary::from_generator(&self.axis, &self.alpha)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Unitary<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Unitary { w, x, y, z }
    }

    pub fn identity() -> Self {
        Unitary::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// `exp(iα n̂·σ)` for a unit axis.
    pub fn from_generator(axis: &Vec3<T>, alpha: &T) -> Result<Self> {
        let n = axis.to_unit()?;
        let s = alpha.sin();
        Ok(Unitary::new(alpha.cos(), s.clone() * n.x, s.clone() * n.y, s * n.z))
    }

    /// `exp(iε·σ)` for an arbitrary (possibly zero) vector.
    pub fn exp_vector(eps: &Vec3<T>) -> Self {
        let n = eps.norm();
        if n == T::zero() {
            return Unitary::identity();
        }
        let k = n.sin() / n.clone();
        Unitary::new(n.cos(), eps.x.clone() * k.clone(), eps.y.clone() * k.clone(), eps.z.clone() * k)
    }

    /// The pure quaternion `i v·σ`.
    fn pure(v: &Vec3<T>) -> Self {
        Unitary::new(T::zero(), v.x.clone(), v.y.clone(), v.z.clone())
    }

    pub fn vector(&self) -> Vec3<T> {
        Vec3::new(self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.w.square() + self.vector().norm_sq()
    }

    pub fn dagger(&self) -> Self {
        Unitary::new(self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }

    /// `g · self · g†`.
    pub fn conjugate_frame(&self, g: &Self) -> Self {
        g.clone() * self.clone() * g.dagger()
    }

    /// The SO(3) action of `self` on 3-vectors: `U (v·σ) U† = (R v)·σ`.
    pub fn rotate(&self, v: &Vec3<T>) -> Vec3<T> {
        Unitary::pure(v).conjugate_frame(self).vector()
    }

    /// `ideal† · actual`, the `V` with `actual = ideal · V`.
    pub fn error_unitary(ideal: &Self, actual: &Self) -> Self {
        ideal.dagger() * actual.clone()
    }

    /// ε with `exp(iε·σ) = self`, on the principal branch `w > 0`.
    pub fn log_pauli(&self) -> Result<ErrorVector<T>> {
        if self.w <= T::zero() {
            return Err(Error::Branch(format!(
                "log_pauli needs w > 0, got w = {:e}",
                self.w.to_f64()
            )));
        }
        let v = self.vector();
        let s = v.norm();
        if s == T::zero() {
            return Ok(Vec3::zero());
        }
        // asin is well conditioned for small angles, acos near π/2
        let angle = if s < self.w { s.asin() } else { self.w.acos() };
        Ok(v.scale(&(angle / s)))
    }

    /// `(tr(X·V), tr(Y·V), tr(Z·V))` for `V = ideal†·actual`, as the
    /// coefficients of `i`: `(2x, 2y, 2z)`.
    pub fn trace_components(ideal: &Self, actual: &Self) -> Vec3<T> {
        let v = Self::error_unitary(ideal, actual);
        let two = T::from_i64(2);
        Vec3::new(two.clone() * v.x, two.clone() * v.y, two * v.z)
    }

    /// `1 − ½|tr(ideal†·actual)|`, evaluated as `|v|²/(1 + |w|)`.
    pub fn infidelity(ideal: &Self, actual: &Self) -> T {
        let v = Self::error_unitary(ideal, actual);
        v.vector().norm_sq() / (T::one() + v.w.abs())
    }

    /// `min_φ ‖ideal − e^{iφ}·actual‖₁`. For `V = ideal†·actual` with
    /// eigenphases `±β` the minimum sits at `φ = ±β` and equals `2 sin β`.
    pub fn phase_opt_trace_distance(ideal: &Self, actual: &Self) -> T {
        let v = Self::error_unitary(ideal, actual);
        T::from_i64(2) * v.vector().norm()
    }
}

impl<T: Real> Mul for Unitary<T> {
    type Output = Unitary<T>;

    fn mul(self, b: Self) -> Self {
        let a = self;
        let v1 = a.vector();
        let v2 = b.vector();
        let c = v1.cross(&v2);
        let w = a.w.clone() * b.w.clone() - v1.dot(&v2);
        let v = v2.scale(&a.w) + v1.scale(&b.w) - c;
        Unitary::new(w, v.x, v.y, v.z)
    }
}
