//! Named builtin sequences.
//!
//! ```text
//! naive | b2 | b4 | b2sym | b4sym | pi5
//! pi3:<AXIS>             AXIS = X, Y, Z or nx,ny,nz
//! concat:<A>,<B>,...     successive π/3 corrections, innermost first
//! pi3<A>∘<name>          π/3 correction about A ∈ {X, Y, Z, xy} of any name
//! ```
//!
//! `.` may stand in for `∘`. The `xy` axis is found numerically with
//! [`xy_error_axis`] under a linear over-rotation probe.

use crate::analysis::xy_error_axis;
use crate::error_models::{ErrorModel, Noise};
use crate::scalar::{ext_digits, Ext, Real};
use crate::sequences::{self, Gate, PulseSequence};
use crate::su2::Vec3;
use crate::{Error, Result};

pub const BUILTIN_NAMES: &[&str] = &[
    "naive",
    "pi3:X",
    "pi3:Y",
    "pi3:Z",
    "pi5",
    "b2",
    "b4",
    "b2sym",
    "b4sym",
    "pi3Y∘b2sym",
    "pi3Y∘b4sym",
    "pi3xy∘b2",
    "pi3xy∘b4",
    "concat:X,Y",
    "concat:X,Y,Z,X,Y,Z",
];

/// Probe magnitude for the `xy` correction axis.
pub const XY_PROBE_SCALE: f64 = 1e-3;

fn named_axis<T: Real>(s: &str) -> Result<Vec3<T>> {
    match s {
        "X" | "x" => Ok(Vec3::unit_x()),
        "Y" | "y" => Ok(Vec3::unit_y()),
        "Z" | "z" => Ok(Vec3::unit_z()),
        _ => Err(Error::Config(format!("bad axis `{s}`"))),
    }
}

fn parse_axis<T: Real>(s: &str) -> Result<Vec3<T>> {
    if s.contains(',') {
        let comps = s
            .split(',')
            .map(|c| T::parse_str(c.trim()).ok_or_else(|| Error::Config(format!("bad axis `{s}`"))))
            .collect::<Result<Vec<T>>>()?;
        let [x, y, z]: [T; 3] = comps.try_into().map_err(|_| Error::Config(format!("bad axis `{s}`")))?;
        return Vec3::new(x, y, z).to_unit();
    }
    named_axis(s)
}

/// The probe error of a high-order inner sequence can sit at double
/// round-off, so low-precision builds take the axis from an extended run.
fn xy_axis<T: Real>(inner: &str, gate: &Gate<T>, inner_seq: &PulseSequence<T>) -> Result<Vec3<T>> {
    if T::digits() >= ext_digits() {
        let probe = Noise::from(ErrorModel::LinearOverRotation { eps: T::one() });
        return Ok(xy_error_axis(inner_seq, &probe, &T::from_f64(XY_PROBE_SCALE), true)?.axis);
    }
    let ext_gate = Gate::new(Vec3::<Ext>::from_f64(gate.axis.to_f64()).to_unit()?, gate.alpha);
    let a = xy_axis(inner, &ext_gate, &build(inner, &ext_gate)?)?;
    Vec3::<T>::from_f64(a.to_f64()).to_unit()
}

pub fn build<T: Real>(name: &str, gate: &Gate<T>) -> Result<PulseSequence<T>> {
    let name = name.trim();
    let composed = name.split_once('∘').or_else(|| {
        if name.starts_with("pi3:") {
            None
        } else {
            name.split_once('.')
        }
    });
    if let Some((outer, inner)) = composed {
        let axis = outer
            .strip_prefix("pi3")
            .ok_or_else(|| Error::Config(format!("`{outer}` is not a π/3 correction")))?;
        let inner_seq = build(inner, gate)?;
        let axis = if axis == "xy" {
            xy_axis(inner, gate, &inner_seq)?
        } else {
            named_axis(axis)?
        };
        return sequences::pi3_correct(&inner_seq, &axis);
    }
    if let Some(axis) = name.strip_prefix("pi3:") {
        return sequences::pi3_correct(&sequences::naive(gate), &parse_axis(axis)?);
    }
    if let Some(list) = name.strip_prefix("concat:") {
        let axes = list.split(',').map(|a| named_axis(a.trim())).collect::<Result<Vec<Vec3<T>>>>()?;
        return sequences::concat(gate, &axes);
    }
    match name {
        "naive" => Ok(sequences::naive(gate)),
        "b2" => sequences::b2(gate),
        "b4" => sequences::b4(gate),
        "b2sym" => sequences::symmetrize(&sequences::b2(gate)?),
        "b4sym" => sequences::symmetrize(&sequences::b4(gate)?),
        "pi5" => sequences::pi5_sequence(gate),
        other => Err(Error::Config(format!("unknown sequence `{other}`"))),
    }
}
