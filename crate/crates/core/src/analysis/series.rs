use std::fmt;
use std::str::FromStr;

use crate::error_models::{AngleFn, ErrorModel, Noise};
use crate::par;
use crate::scalar::Real;
use crate::sequences::PulseSequence;
use crate::su2::Unitary;
use crate::{Error, Result};

/// Minimum precision for finite-difference coefficients.
pub const MIN_SERIES_DIGITS: u32 = 50;

/// Expansion parameters: the target-pulse error vector `ε`, the
/// correction-pulse error vector `δ` (covariant), and the axis-dependent
/// over-rotations `δ`, `δ̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Ex,
    Ey,
    Ez,
    Dx,
    Dy,
    Dz,
    Delta,
    DeltaHat,
}

impl Param {
    const NAMES: [(Param, &'static str); 8] = [
        (Param::Ex, "ex"),
        (Param::Ey, "ey"),
        (Param::Ez, "ez"),
        (Param::Dx, "dx"),
        (Param::Dy, "dy"),
        (Param::Dz, "dz"),
        (Param::Delta, "delta"),
        (Param::DeltaHat, "deltahat"),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(p, _)| *p == self).map(|(_, n)| *n).expect("all params named")
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(p, _)| *p)
            .ok_or_else(|| Error::Config(format!("unknown parameter `{s}`")))
    }
}

/// Which parameters drive which channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `ε` on target pulses; π/3 pulses perfect.
    TargetVector,
    /// `ε` on target pulses, covariant `δ` on π/3 pulses.
    Covariant,
    /// `ε` on target pulses, over-rotation `δ`/`δ̂` on R̄_0/R̄_t.
    AxisDependent,
}

impl Family {
    pub fn params(self) -> &'static [Param] {
        use Param::*;
        match self {
            Family::TargetVector => &[Ex, Ey, Ez],
            Family::Covariant => &[Ex, Ey, Ez, Dx, Dy, Dz],
            Family::AxisDependent => &[Ex, Ey, Ez, Delta, DeltaHat],
        }
    }

    pub fn perfect_pi3(self) -> bool {
        self == Family::TargetVector
    }

    /// Noise with the given parameter values (missing ones are zero).
    pub fn noise<T: Real>(self, values: &[(Param, T)]) -> Noise<T> {
        let get = |p: Param| values.iter().find(|(q, _)| *q == p).map(|(_, v)| v.clone()).unwrap_or_else(T::zero);
        let vector = |a: Param, b: Param, c: Param| ErrorModel::CovariantVector {
            delta: [AngleFn::constant(get(a)), AngleFn::constant(get(b)), AngleFn::constant(get(c))],
        };
        let target = vector(Param::Ex, Param::Ey, Param::Ez);
        let pi3 = match self {
            Family::TargetVector => ErrorModel::None,
            Family::Covariant => vector(Param::Dx, Param::Dy, Param::Dz),
            Family::AxisDependent => ErrorModel::AxisDependentPi3 { delta: get(Param::Delta), delta_hat: get(Param::DeltaHat) },
        };
        Noise::split(target, pi3)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "target" => Ok(Family::TargetVector),
            "covariant" => Ok(Family::Covariant),
            "axisdep" => Ok(Family::AxisDependent),
            _ => Err(Error::Config(format!("unknown family `{s}` (target, covariant, axisdep)"))),
        }
    }
}

/// A monomial such as `ey^2*ez`, each exponent in 1..=4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex(pub Vec<(Param, u32)>);

impl MultiIndex {
    pub fn total_order(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    fn factorial(&self) -> u64 {
        self.0.iter().map(|(_, k)| (1..=*k as u64).product::<u64>()).product()
    }
}

impl FromStr for MultiIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut terms: Vec<(Param, u32)> = Vec::new();
        for part in s.split('*') {
            let (name, k) = match part.split_once('^') {
                Some((n, k)) => (n, k.parse::<u32>().map_err(|_| Error::Config(format!("bad exponent in `{part}`")))?),
                None => (part, 1),
            };
            let p: Param = name.trim().parse()?;
            if !(1..=4).contains(&k) {
                return Err(Error::Config(format!("exponent {k} outside 1..=4")));
            }
            if terms.iter().any(|(q, _)| *q == p) {
                return Err(Error::Config(format!("`{name}` repeated")));
            }
            terms.push((p, k));
        }
        terms.sort();
        Ok(MultiIndex(terms))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, k)| if *k == 1 { p.name().to_string() } else { format!("{}^{k}", p.name()) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Five-point central stencils for derivative orders 1..=4, offsets −2..=2,
/// as (numerators, denominator).
const STENCILS: [([i64; 5], i64); 4] = [
    ([1, -8, 0, 8, -1], 12),
    ([-1, 16, -30, 16, -1], 12),
    ([-1, 2, 0, -2, 1], 2),
    ([1, -4, 6, -4, 1], 1),
];

/// Taylor coefficient of trace component `component` (0 = x, 1 = y, 2 = z)
/// in the monomial `index`, by tensor-product central differences about
/// zero with step `h = 10^(−digits/4)`. Monomials of total order above 3
/// use `10^(−digits/(K+1))` to keep round-off below the truncation error.
pub fn series_coefficient<T: Real>(
    seq: &PulseSequence<T>,
    family: Family,
    index: &MultiIndex,
    component: usize,
) -> Result<T> {
    if T::digits() < MIN_SERIES_DIGITS {
        return Err(Error::Precision(format!(
            "series coefficients need at least {MIN_SERIES_DIGITS} digits, have {}",
            T::digits()
        )));
    }
    if component > 2 {
        return Err(Error::Config(format!("component {component} not in 0..=2")));
    }
    if index.0.is_empty() {
        return Err(Error::Config("empty multi-index".into()));
    }
    if let Some((p, _)) = index.0.iter().find(|(p, _)| !family.params().contains(p)) {
        return Err(Error::Config(format!("parameter {} not in family {family:?}", p.name())));
    }
    let total = index.total_order();
    let exponent = T::digits() / 4.max(total + 1);
    let h = T::exp10(-(exponent as i32));
    if !(h > T::zero()) {
        return Err(Error::Difference("step underflow".into()));
    }

    // all stencil points with nonzero weight
    let mut points: Vec<(Vec<i64>, i64)> = vec![(Vec::new(), 1)];
    for (_, k) in &index.0 {
        let (w, _) = STENCILS[*k as usize - 1];
        points = points
            .into_iter()
            .flat_map(|(offs, wt)| {
                (0..5).filter(move |&j| w[j] != 0).map(move |j| {
                    let mut o = offs.clone();
                    o.push(j as i64 - 2);
                    (o, wt * w[j])
                })
            })
            .collect();
    }

    let ideal = seq.ideal_target()?;
    let one = T::one();
    let perfect = family.perfect_pi3();
    let values = par::map(&points, |(offs, wt)| -> Result<T> {
        let vals: Vec<(Param, T)> = index
            .0
            .iter()
            .zip(offs)
            .map(|((p, _), o)| (*p, h.clone() * T::from_i64(*o)))
            .collect();
        let actual = seq.evaluate(&family.noise(&vals), &one, perfect)?;
        let c = Unitary::trace_components(&ideal, &actual).get(component).clone();
        Ok(c * T::from_i64(*wt))
    });
    let mut sum = T::zero();
    for v in values {
        sum = sum + v?;
    }
    let denom: i64 = index.0.iter().map(|(_, k)| STENCILS[*k as usize - 1].1).product();
    let scale = T::from_i64(denom) * h.powi(total) * T::from_i64(index.factorial() as i64);
    let coeff = sum / scale;
    if !coeff.is_finite() {
        return Err(Error::Difference("non-finite difference quotient".into()));
    }
    Ok(coeff)
}
