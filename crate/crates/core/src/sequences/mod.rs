//! Pulses, gates and pulse sequences, plus the sequence builders.
//!
//! A [`PulseSequence`] lists pulses in time order: the first pulse acts
//! first, so the composite unitary is `P_n ⋯ P_2 P_1`.

pub mod builders;
pub mod dsl;

use std::fmt;
use std::ops::{Add, Neg};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error_models::{ErrorModel, FrameTriad, Noise, Realize};
use crate::scalar::Real;
use crate::su2::{Unitary, Vec3};
use crate::{Error, Result};

pub use builders::{b2, b4, concat, naive, pi3_correct, pi5_sequence, pi5_sequence_on, symmetrize};

/// A rational multiple of π, kept exact so sequences compare and serialize
/// without rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiAngle(pub Ratio<i64>);

impl PiAngle {
    pub fn new(numer: i64, denom: i64) -> Self {
        PiAngle(Ratio::new(numer, denom))
    }

    pub fn zero() -> Self {
        PiAngle(Ratio::zero())
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// The angle in radians.
    pub fn value<T: Real>(&self) -> T {
        T::pi() * T::from_i64(self.numer()) / T::from_i64(self.denom())
    }

    /// The angle divided by π.
    pub fn ratio<T: Real>(&self) -> T {
        T::from_ratio(self.numer(), self.denom())
    }

    pub fn abs(&self) -> Self {
        PiAngle(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn scale(&self, numer: i64, denom: i64) -> Self {
        PiAngle(self.0 * Ratio::new(numer, denom))
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.parse().ok()?, d.parse().ok()?),
            None => (s.parse().ok()?, 1),
        };
        if d == 0 {
            return None;
        }
        Some(PiAngle::new(n, d))
    }
}

impl fmt::Display for PiAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Neg for PiAngle {
    type Output = Self;
    fn neg(self) -> Self {
        PiAngle(-self.0)
    }
}

impl Add for PiAngle {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PiAngle(self.0 + o.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Target,
    TargetDagger,
    Correction,
    CorrectionDagger,
}

impl Role {
    pub fn is_dagger(self) -> bool {
        matches!(self, Role::TargetDagger | Role::CorrectionDagger)
    }

    pub fn is_correction(self) -> bool {
        matches!(self, Role::Correction | Role::CorrectionDagger)
    }

    pub fn inverse(self) -> Self {
        match self {
            Role::Target => Role::TargetDagger,
            Role::TargetDagger => Role::Target,
            Role::Correction => Role::CorrectionDagger,
            Role::CorrectionDagger => Role::Correction,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Target => "target",
            Role::TargetDagger => "target_dagger",
            Role::Correction => "correction",
            Role::CorrectionDagger => "correction_dagger",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Role::Target, Role::TargetDagger, Role::Correction, Role::CorrectionDagger]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

/// Which error model a pulse is subject to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    /// The model of the pulses implementing the target rotation.
    Target,
    /// The model of the π/3 correction pulses.
    Pi3,
    /// Never corrupted.
    Perfect,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Target => "target",
            Channel::Pi3 => "pi3",
            Channel::Perfect => "perfect",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Channel::Target, Channel::Pi3, Channel::Perfect].into_iter().find(|c| c.as_str() == s)
    }
}

/// One rotation `exp(iα n·σ)`. `axis` is given in the local `frame`;
/// `transported` marks pulses whose frame was carried along by the target
/// unitary (R̄_t-type pulses).
#[derive(Clone, Debug, PartialEq)]
pub struct Pulse<T> {
    pub frame: FrameTriad<T>,
    pub axis: Vec3<T>,
    pub alpha: PiAngle,
    pub role: Role,
    pub channel: Channel,
    pub transported: bool,
}

impl<T: Real> Pulse<T> {
    pub fn new(frame: FrameTriad<T>, axis: Vec3<T>, alpha: PiAngle, role: Role, channel: Channel) -> Self {
        Pulse { frame, axis, alpha, role, channel, transported: false }
    }

    /// A pulse about a lab-frame axis.
    pub fn lab(axis: Vec3<T>, alpha: PiAngle, role: Role, channel: Channel) -> Self {
        Self::new(FrameTriad::identity(), axis, alpha, role, channel)
    }

    pub fn lab_axis(&self) -> Vec3<T> {
        self.frame.apply(&self.axis)
    }

    pub fn ideal(&self) -> Result<Unitary<T>> {
        Unitary::from_generator(&self.lab_axis(), &self.alpha.value::<T>())
    }

    pub fn inverse(&self) -> Self {
        Pulse { alpha: -self.alpha, role: self.role.inverse(), ..self.clone() }
    }
}

/// An ideal target rotation `exp(iα n·σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate<T> {
    pub axis: Vec3<T>,
    pub alpha: PiAngle,
}

impl<T: Real> Gate<T> {
    pub fn new(axis: Vec3<T>, alpha: PiAngle) -> Self {
        Gate { axis, alpha }
    }

    /// The π rotation about x, `exp(iπ/2 X)`.
    pub fn x_pi() -> Self {
        Gate::new(Vec3::unit_x(), PiAngle::new(1, 2))
    }

    pub fn unitary(&self) -> Result<Unitary<T>> {
        Unitary::from_generator(&self.axis, &self.alpha.value::<T>())
    }

    /// Parses `x-pi`, `y-pi/2`, `z-3pi/4`, `-pi/2` style rotation specs
    /// (`<axis>-<rotation angle>`), or `nx,ny,nz:p/q` with `p/q` the
    /// generator angle in units of π.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad target `{s}`"));
        if let Some((axis, angle)) = s.split_once(':') {
            let comps: Vec<T> = axis.split(',').map(|c| T::parse_str(c).ok_or_else(bad)).collect::<Result<_>>()?;
            let [x, y, z]: [T; 3] = comps.try_into().map_err(|_| bad())?;
            let alpha = PiAngle::parse(angle).ok_or_else(bad)?;
            return Ok(Gate::new(Vec3::new(x, y, z).to_unit()?, alpha));
        }
        let (axis, angle) = s.split_once('-').ok_or_else(bad)?;
        let axis = match axis {
            "x" => Vec3::unit_x(),
            "y" => Vec3::unit_y(),
            "z" => Vec3::unit_z(),
            _ => return Err(bad()),
        };
        let (num, den) = match angle.split_once('/') {
            Some((n, d)) => (n, d.parse::<i64>().map_err(|_| bad())?),
            None => (angle, 1),
        };
        let k = match num.strip_suffix("pi").ok_or_else(bad)? {
            "" => 1,
            "-" => -1,
            k => k.parse::<i64>().map_err(|_| bad())?,
        };
        if den == 0 {
            return Err(bad());
        }
        // rotation angle kπ/den is generator kπ/(2 den)
        Ok(Gate::new(axis, PiAngle::new(k, 2 * den)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence<T> {
    pub target: Gate<T>,
    pub pulses: Vec<Pulse<T>>,
}

impl<T: Real> PulseSequence<T> {
    pub fn new(target: Gate<T>, pulses: Vec<Pulse<T>>) -> Self {
        PulseSequence { target, pulses }
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn count(&self, pred: impl Fn(&Pulse<T>) -> bool) -> usize {
        self.pulses.iter().filter(|p| pred(p)).count()
    }

    pub fn target_pulse_count(&self) -> usize {
        self.count(|p| !p.role.is_correction())
    }

    pub fn correction_pulse_count(&self) -> usize {
        self.count(|p| p.role.is_correction())
    }

    /// Pulses realizing the inverse sequence: reversed, each inverted.
    pub fn dagger_pulses(&self) -> Vec<Pulse<T>> {
        self.pulses.iter().rev().map(Pulse::inverse).collect()
    }

    /// Total rotation angle `Σ 2|α|`, in units of π.
    pub fn total_angle(&self) -> PiAngle {
        self.pulses.iter().fold(PiAngle::zero(), |acc, p| acc + p.alpha.abs().scale(2, 1))
    }

    /// Moves every pulse on channel `from` to channel `to`.
    pub fn with_channel(mut self, from: Channel, to: Channel) -> Self {
        for p in &mut self.pulses {
            if p.channel == from {
                p.channel = to;
            }
        }
        self
    }

    pub fn ideal_target(&self) -> Result<Unitary<T>> {
        self.target.unitary()
    }

    /// Product of the error-free pulses.
    pub fn ideal_product(&self) -> Result<Unitary<T>> {
        self.evaluate(&Noise::none(), &T::zero(), true)
    }

    /// Composite unitary with every pulse realized under its channel's
    /// model at `scale`. With `perfect_pi3` the π/3 channel is left exact.
    pub fn evaluate(&self, noise: &Noise<T>, scale: &T, perfect_pi3: bool) -> Result<Unitary<T>> {
        let mut acc = Unitary::identity();
        for p in &self.pulses {
            let model = match p.channel {
                Channel::Pi3 if perfect_pi3 => None,
                c => noise.for_channel(c),
            };
            let u = match model {
                Some(m) if *m != ErrorModel::None => m.realize(p, scale)?,
                _ => p.ideal()?,
            };
            acc = u * acc;
        }
        Ok(acc)
    }
}
