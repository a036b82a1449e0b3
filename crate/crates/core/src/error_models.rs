//! Systematic error models and their action on ideal pulses.
//!
//! Every model is systematic: asking for the inverse pulse yields the
//! inverse of the corrupted forward pulse. Over-rotation amounts are
//! functions of the unsigned generator angle `|α|` and are added with the
//! sign of `α`.
//!
//! # Config syntax
//!
//! ```text
//! model=none
//! model=linear   [eps=<x>]
//! model=poly     coeffs=<c0>,<c1>,...        | table=<a>:<v>,<a>:<v>,...
//! model=axispoly coeffs=<list> [x=<list>] [y=<list>] [z=<list>]
//! model=vector   [dx=<list>] [dy=<list>] [dz=<list>]
//! model=axisdep  delta=<x> deltahat=<x>
//! ```
//!
//! Fields are separated by whitespace or `;`. Explicit values must satisfy
//! `|c| < 0.5`; polynomials have degree at most 6; `axisdep` requires
//! `0.1 ≤ |deltahat/delta| ≤ 10` when both are nonzero. An omitted `eps`
//! means a unit coefficient, so the `scale` passed at evaluation time is the
//! over-rotation itself.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Real;
use crate::sequences::{Channel, Pulse};
use crate::su2::{Unitary, Vec3};
use crate::{Error, Result};

pub const MAX_POLY_DEGREE: usize = 6;
pub const COEFF_BOUND: f64 = 0.5;

/// Right-handed orthonormal triad: a pulse's local x, y, z axes in lab
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTriad<T> {
    pub x: Vec3<T>,
    pub y: Vec3<T>,
    pub z: Vec3<T>,
}

impl<T: Real> FrameTriad<T> {
    pub fn identity() -> Self {
        FrameTriad { x: Vec3::unit_x(), y: Vec3::unit_y(), z: Vec3::unit_z() }
    }

    /// A right-handed triad whose local x-axis is `axis`. Coordinate axes
    /// get the cyclic triads (x,y,z), (y,z,x), (z,x,y).
    pub fn for_axis(axis: &Vec3<T>) -> Result<Self> {
        let u = axis.to_unit()?;
        let (zero, one) = (T::zero(), T::one());
        let is = |a: &T, b: &T, c: &T| u.x == *a && u.y == *b && u.z == *c;
        if is(&one, &zero, &zero) {
            return Ok(Self::identity());
        }
        if is(&zero, &one, &zero) {
            return Ok(FrameTriad { x: Vec3::unit_y(), y: Vec3::unit_z(), z: Vec3::unit_x() });
        }
        if is(&zero, &zero, &one) {
            return Ok(FrameTriad { x: Vec3::unit_z(), y: Vec3::unit_x(), z: Vec3::unit_y() });
        }
        // helper direction away from u
        let helper = if u.z.abs() < T::from_f64(0.9) { Vec3::unit_z() } else { Vec3::unit_x() };
        let v = helper.cross(&u);
        let v = v.scale(&(T::one() / v.norm()));
        let w = u.cross(&v);
        Ok(FrameTriad { x: u, y: v, z: w })
    }

    pub fn from_rows(rows: [Vec3<T>; 3]) -> Result<Self> {
        let [x, y, z] = rows;
        let f = FrameTriad { x, y, z };
        f.validate()?;
        Ok(f)
    }

    /// Lab coordinates of a vector given in this frame.
    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        self.x.scale(&v.x) + self.y.scale(&v.y) + self.z.scale(&v.z)
    }

    /// The frame carried along by `g`: each axis rotated by `g`'s SO(3) action.
    pub fn transformed(&self, g: &Unitary<T>) -> Self {
        FrameTriad { x: g.rotate(&self.x), y: g.rotate(&self.y), z: g.rotate(&self.z) }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::from_f64(crate::su2::AXIS_TOLERANCE);
        let axes = [&self.x, &self.y, &self.z];
        for (i, a) in axes.iter().enumerate() {
            for (j, b) in axes.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                if (a.dot(b) - target).abs() > tol {
                    return Err(Error::InvalidAxis(format!("frame is not orthonormal (axes {i},{j})")));
                }
            }
        }
        if (self.x.cross(&self.y) - self.z.clone()).norm() > tol {
            return Err(Error::InvalidAxis("frame is not right-handed".into()));
        }
        Ok(())
    }

    pub fn to_array(&self) -> [T; 9] {
        let [a, b, c] = self.x.to_array();
        let [d, e, f] = self.y.to_array();
        let [g, h, i] = self.z.to_array();
        [a, b, c, d, e, f, g, h, i]
    }
}

/// An over-rotation amount as a function of `|α|`.
#[derive(Clone, Debug, PartialEq)]
pub enum AngleFn<T> {
    /// `Σ c_k |α|^k`
    Poly(Vec<T>),
    /// Piecewise-linear through `(|α|, value)` knots, clamped at the ends.
    Table(Vec<(T, T)>),
}

impl<T: Real> AngleFn<T> {
    pub fn constant(c: T) -> Self {
        AngleFn::Poly(vec![c])
    }

    pub fn zero() -> Self {
        AngleFn::Poly(Vec::new())
    }

    pub fn eval(&self, angle: &T) -> T {
        match self {
            AngleFn::Poly(coeffs) => coeffs
                .iter()
                .rev()
                .fold(T::zero(), |acc, c| acc * angle.clone() + c.clone()),
            AngleFn::Table(knots) => interpolate(knots, angle),
        }
    }
}

fn interpolate<T: Real>(knots: &[(T, T)], x: &T) -> T {
    let Some(first) = knots.first() else {
        return T::zero();
    };
    if *x <= first.0 {
        return first.1.clone();
    }
    for pair in knots.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if *x <= b.0 {
            let t = (x.clone() - a.0.clone()) / (b.0.clone() - a.0.clone());
            return a.1.clone() + t * (b.1.clone() - a.1.clone());
        }
    }
    knots[knots.len() - 1].1.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl AxisName {
    /// The coordinate axis `v` lies along (either sign), if any.
    pub fn of<T: Real>(v: &Vec3<T>) -> Option<AxisName> {
        let tol = T::one() - T::from_f64(crate::su2::AXIS_TOLERANCE);
        [AxisName::X, AxisName::Y, AxisName::Z]
            .into_iter()
            .zip(v.to_array())
            .find(|(_, c)| c.abs() >= tol)
            .map(|(n, _)| n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ErrorModel<T> {
    None,
    /// `ε(α) = eps·|α|`: the generator scales by `1 + eps`.
    LinearOverRotation { eps: T },
    /// Angle-dependent, axis-independent over-rotation.
    PolyOverRotation { f: AngleFn<T> },
    /// Over-rotation depending on angle and on the (coordinate) axis;
    /// axes without an entry use `base`.
    AxisOverRotation { base: AngleFn<T>, per_axis: BTreeMap<AxisName, AngleFn<T>> },
    /// `actual = ideal · exp(i (F·δ(|α|))·σ)` with `F` the pulse frame.
    CovariantVector { delta: [AngleFn<T>; 3] },
    /// Over-rotation by `delta` on R̄_0-type correction pulses and by
    /// `delta_hat` on transported (R̄_t-type) ones; other pulses are exact.
    AxisDependentPi3 { delta: T, delta_hat: T },
}

/// Anything that corrupts ideal pulses.
pub trait Realize<T: Real> {
    fn realize(&self, pulse: &Pulse<T>, scale: &T) -> Result<Unitary<T>>;
}

fn branch_limit<T: Real>() -> T {
    T::pi() / T::from_i64(2)
}

impl<T: Real> ErrorModel<T> {
    /// Over-rotation of `|α|` for over-rotation models.
    fn over_rotation(&self, pulse: &Pulse<T>, scale: &T) -> Option<T> {
        let mag = pulse.alpha.abs().value::<T>();
        let amount = match self {
            ErrorModel::LinearOverRotation { eps } => eps.clone() * mag,
            ErrorModel::PolyOverRotation { f } => f.eval(&mag),
            ErrorModel::AxisOverRotation { base, per_axis } => {
                let f = AxisName::of(&pulse.lab_axis()).and_then(|n| per_axis.get(&n)).unwrap_or(base);
                f.eval(&mag)
            }
            ErrorModel::AxisDependentPi3 { delta, delta_hat } => {
                if !pulse.role.is_correction() {
                    return Some(T::zero());
                }
                if pulse.transported {
                    delta_hat.clone()
                } else {
                    delta.clone()
                }
            }
            ErrorModel::None | ErrorModel::CovariantVector { .. } => return None,
        };
        Some(scale.clone() * amount)
    }

    /// Config-string form of the model.
    pub fn to_config(&self) -> String {
        fn list<T: Real>(f: &AngleFn<T>) -> String {
            match f {
                AngleFn::Poly(c) => c.iter().map(|v| v.to_exact_string()).collect::<Vec<_>>().join(","),
                AngleFn::Table(k) => k
                    .iter()
                    .map(|(a, v)| format!("{}:{}", a.to_exact_string(), v.to_exact_string()))
                    .collect::<Vec<_>>()
                    .join(","),
            }
        }
        fn key<T>(f: &AngleFn<T>, poly: &str) -> String {
            match f {
                AngleFn::Poly(_) => poly.to_string(),
                AngleFn::Table(_) => "table".to_string(),
            }
        }
        match self {
            ErrorModel::None => "model=none".into(),
            ErrorModel::LinearOverRotation { eps } => format!("model=linear eps={}", eps.to_exact_string()),
            ErrorModel::PolyOverRotation { f } => format!("model=poly {}={}", key(f, "coeffs"), list(f)),
            ErrorModel::AxisOverRotation { base, per_axis } => {
                let mut s = format!("model=axispoly coeffs={}", list(base));
                for (name, f) in per_axis {
                    let n = match name {
                        AxisName::X => "x",
                        AxisName::Y => "y",
                        AxisName::Z => "z",
                    };
                    s.push_str(&format!(" {n}={}", list(f)));
                }
                s
            }
            ErrorModel::CovariantVector { delta } => {
                format!("model=vector dx={};dy={};dz={}", list(&delta[0]), list(&delta[1]), list(&delta[2]))
            }
            ErrorModel::AxisDependentPi3 { delta, delta_hat } => format!(
                "model=axisdep delta={} deltahat={}",
                delta.to_exact_string(),
                delta_hat.to_exact_string()
            ),
        }
    }
}

impl<T: Real> fmt::Display for ErrorModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_config())
    }
}

impl<T: Real> Realize<T> for ErrorModel<T> {
    fn realize(&self, pulse: &Pulse<T>, scale: &T) -> Result<Unitary<T>> {
        let ideal = pulse.ideal()?;
        match self {
            ErrorModel::None => Ok(ideal),
            ErrorModel::CovariantVector { delta } => {
                if pulse.role.is_dagger() {
                    return Ok(self.realize(&pulse.inverse(), scale)?.dagger());
                }
                let mag = pulse.alpha.abs().value::<T>();
                let local = Vec3::new(delta[0].eval(&mag), delta[1].eval(&mag), delta[2].eval(&mag)).scale(scale);
                let lab = pulse.frame.apply(&local);
                if !(lab.norm() < branch_limit::<T>()) {
                    return Err(Error::Branch(format!("error generator {:?} exceeds π/2", lab)));
                }
                Ok(ideal * Unitary::exp_vector(&lab))
            }
            _ => {
                let shift = self.over_rotation(pulse, scale).unwrap_or_else(T::zero);
                if !shift.is_finite() {
                    return Err(Error::Branch("non-finite over-rotation".into()));
                }
                if pulse.alpha.is_zero() || shift == T::zero() {
                    return Ok(ideal);
                }
                let alpha = pulse.alpha.value::<T>();
                let actual = if pulse.alpha.is_negative() { alpha - shift } else { alpha + shift };
                Unitary::from_generator(&pulse.lab_axis(), &actual)
            }
        }
    }
}

/// Models assigned to the noisy channels. Pulses on [`Channel::Perfect`]
/// are never corrupted.
#[derive(Clone, Debug, PartialEq)]
pub struct Noise<T> {
    pub target: ErrorModel<T>,
    pub pi3: ErrorModel<T>,
}

impl<T: Real> Noise<T> {
    pub fn none() -> Self {
        Noise { target: ErrorModel::None, pi3: ErrorModel::None }
    }

    pub fn split(target: ErrorModel<T>, pi3: ErrorModel<T>) -> Self {
        Noise { target, pi3 }
    }

    pub fn for_channel(&self, channel: Channel) -> Option<&ErrorModel<T>> {
        match channel {
            Channel::Target => Some(&self.target),
            Channel::Pi3 => Some(&self.pi3),
            Channel::Perfect => None,
        }
    }

    pub fn describe(&self) -> String {
        if self.target == self.pi3 {
            self.target.to_config()
        } else {
            format!("target[{}] pi3[{}]", self.target, self.pi3)
        }
    }
}

impl<T: Real> From<ErrorModel<T>> for Noise<T> {
    fn from(m: ErrorModel<T>) -> Self {
        Noise { target: m.clone(), pi3: m }
    }
}

/// Whether `model` is systematic on `pulse`: realizing the inverse pulse
/// gives the dagger of the realized pulse.
pub fn invert_model_consistency<T: Real, M: Realize<T> + ?Sized>(model: &M, pulse: &Pulse<T>) -> bool {
    let one = T::one();
    let (Ok(fwd), Ok(inv)) = (model.realize(pulse, &one), model.realize(&pulse.inverse(), &one)) else {
        return false;
    };
    let d = fwd.dagger();
    let tol = T::noise_floor(3);
    [d.w - inv.w, d.x - inv.x, d.y - inv.y, d.z - inv.z].iter().all(|e| e.abs() <= tol)
}

/// Parses the config syntax described in the module docs.
pub fn parse_model<T: Real>(config: &str) -> Result<ErrorModel<T>> {
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    for tok in config.split(|c: char| c.is_whitespace() || c == ';').filter(|t| !t.is_empty()) {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{tok}`")))?;
        if fields.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("duplicate key `{k}`")));
        }
    }
    let kind = fields.remove("model").ok_or_else(|| Error::Config("missing `model=`".into()))?;
    let allowed: &[&str] = match kind.as_str() {
        "none" => &[],
        "linear" => &["eps"],
        "poly" => &["coeffs", "table"],
        "axispoly" => &["coeffs", "x", "y", "z"],
        "vector" => &["dx", "dy", "dz"],
        "axisdep" => &["delta", "deltahat"],
        other => return Err(Error::Config(format!("unknown model `{other}`"))),
    };
    if let Some(bad) = fields.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Config(format!("unknown key `{bad}` for model={kind}")));
    }
    let model = match kind.as_str() {
        "none" => ErrorModel::None,
        "linear" => ErrorModel::LinearOverRotation {
            eps: match fields.get("eps") {
                Some(v) => bounded(parse_num(v)?)?,
                None => T::one(),
            },
        },
        "poly" => {
            let f = match (fields.get("coeffs"), fields.get("table")) {
                (Some(c), None) => parse_poly(c)?,
                (None, Some(t)) => parse_table(t)?,
                _ => return Err(Error::Config("model=poly needs exactly one of coeffs=, table=".into())),
            };
            ErrorModel::PolyOverRotation { f }
        }
        "axispoly" => {
            let base = fields
                .get("coeffs")
                .map(|c| parse_poly(c))
                .transpose()?
                .unwrap_or_else(AngleFn::zero);
            let mut per_axis = BTreeMap::new();
            for (key, name) in [("x", AxisName::X), ("y", AxisName::Y), ("z", AxisName::Z)] {
                if let Some(c) = fields.get(key) {
                    per_axis.insert(name, parse_poly(c)?);
                }
            }
            ErrorModel::AxisOverRotation { base, per_axis }
        }
        "vector" => {
            let get = |k: &str| -> Result<AngleFn<T>> {
                fields.get(k).map(|c| parse_poly(c)).transpose().map(|f| f.unwrap_or_else(AngleFn::zero))
            };
            ErrorModel::CovariantVector { delta: [get("dx")?, get("dy")?, get("dz")?] }
        }
        "axisdep" => {
            let get = |k: &str| -> Result<T> {
                let v = fields.get(k).ok_or_else(|| Error::Config(format!("model=axisdep needs {k}=")))?;
                bounded(parse_num(v)?)
            };
            let (delta, delta_hat) = (get("delta")?, get("deltahat")?);
            check_ratio(&delta, &delta_hat)?;
            ErrorModel::AxisDependentPi3 { delta, delta_hat }
        }
        _ => unreachable!(),
    };
    Ok(model)
}

/// The `|δ̂| = Θ(|δ|)` requirement of the axis-dependent model.
pub fn check_ratio<T: Real>(delta: &T, delta_hat: &T) -> Result<()> {
    if *delta == T::zero() || *delta_hat == T::zero() {
        return Ok(());
    }
    let r = (delta_hat.clone() / delta.clone()).abs().to_f64();
    if !(0.1..=10.0).contains(&r) {
        return Err(Error::Config(format!("|deltahat/delta| = {r} outside [0.1, 10]")));
    }
    Ok(())
}

fn parse_num<T: Real>(s: &str) -> Result<T> {
    T::parse_str(s).ok_or_else(|| Error::Config(format!("not a number: `{s}`")))
}

fn bounded<T: Real>(v: T) -> Result<T> {
    if v.abs() < T::from_f64(COEFF_BOUND) {
        Ok(v)
    } else {
        Err(Error::Config(format!("coefficient {} not below {COEFF_BOUND} in magnitude", v.to_f64())))
    }
}

fn parse_poly<T: Real>(s: &str) -> Result<AngleFn<T>> {
    let coeffs = s.split(',').map(|c| bounded(parse_num(c)?)).collect::<Result<Vec<T>>>()?;
    if coeffs.len() > MAX_POLY_DEGREE + 1 {
        return Err(Error::Config(format!("polynomial degree above {MAX_POLY_DEGREE}")));
    }
    Ok(AngleFn::Poly(coeffs))
}

fn parse_table<T: Real>(s: &str) -> Result<AngleFn<T>> {
    let mut knots: Vec<(T, T)> = Vec::new();
    for item in s.split(',') {
        let (a, v) = item
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("table entry `{item}` is not angle:value")))?;
        let a: T = parse_num(a)?;
        if let Some((prev, _)) = knots.last() {
            if a <= *prev {
                return Err(Error::Config("table angles must increase".into()));
            }
        }
        knots.push((a, bounded(parse_num(v)?)?));
    }
    Ok(AngleFn::Table(knots))
}
