//! Real scalars at a run-wide precision.
//!
//! Two backends implement [`Real`]: `f64` for ordinary double precision and
//! [`Ext`], a binary floating-point number whose mantissa length is chosen
//! once per run with [`set_digits`]. Deep infidelities (down to 1e-35 and
//! below) are only visible in the extended backend; in double precision they
//! drown in the 1e-16 cancellation floor of long quaternion products.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

/// Digits of an `f64`, as used for tolerances and precision floors.
pub const F64_DIGITS: u32 = 16;
/// Smallest accepted extended precision.
pub const MIN_EXT_DIGITS: u32 = 17;
/// Largest accepted precision.
pub const MAX_DIGITS: u32 = 200;
/// Extended precision used when nothing else was requested.
pub const DEFAULT_EXT_DIGITS: u32 = 60;

static EXT_DIGITS: AtomicU32 = AtomicU32::new(DEFAULT_EXT_DIGITS);

const RM: RoundingMode = RoundingMode::ToEven;

/// Sets the decimal precision of every [`Ext`] operation from now on.
///
/// Precision must not change while a computation is running: values created
/// at one precision and combined at another are rounded to the newer one.
pub fn set_digits(digits: u32) -> Result<(), crate::Error> {
    if !(MIN_EXT_DIGITS..=MAX_DIGITS).contains(&digits) {
        return Err(crate::Error::Precision(format!(
            "extended precision must be within {MIN_EXT_DIGITS}..={MAX_DIGITS} digits, got {digits}"
        )));
    }
    EXT_DIGITS.store(digits, AtomicOrdering::SeqCst);
    Ok(())
}

/// Current extended precision in decimal digits.
pub fn ext_digits() -> u32 {
    EXT_DIGITS.load(AtomicOrdering::SeqCst)
}

fn ext_bits() -> usize {
    // log2(10) = 3.3219...; a few guard bits on top
    (ext_digits() as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Real-number interface shared by the double and extended backends.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn pi() -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn acos(&self) -> Self;
    fn asin(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;

    /// Decimal digits carried by the current precision.
    fn digits() -> u32;

    /// Text form that parses back to the identical value.
    fn to_exact_string(&self) -> String;

    /// Parses decimal notation, or the exact form written by
    /// [`Real::to_exact_string`].
    fn parse_str(s: &str) -> Option<Self>;

    /// Scientific notation with `sig` significant digits.
    fn to_sci(&self, sig: usize) -> String;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// `10^exp`.
    fn exp10(exp: i32) -> Self {
        let p = Self::from_i64(10).powi(exp.unsigned_abs());
        if exp < 0 {
            Self::one() / p
        } else {
            p
        }
    }

    /// `10^(k - digits)`: the scale below which a result is rounding noise,
    /// with `k` decades of guard band.
    fn noise_floor(k: i32) -> Self {
        Self::exp10(k - Self::digits() as i32)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn acos(&self) -> Self {
        f64::acos(*self)
    }

    fn asin(&self) -> Self {
        f64::asin(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn digits() -> u32 {
        F64_DIGITS
    }

    fn to_exact_string(&self) -> String {
        // Display is the shortest string that round-trips.
        format!("{self}")
    }

    fn parse_str(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn to_sci(&self, sig: usize) -> String {
        format!("{:.*e}", sig.saturating_sub(1), self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Extended-precision real; see [`set_digits`].
#[derive(Clone)]
pub struct Ext(BigFloat);

impl Ext {
    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({})", self.to_sci(20))
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(ext_digits() as usize))
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! ext_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Ext {
            type Output = Ext;
            fn $method(self, rhs: Ext) -> Ext {
                Ext(self.0.$method(&rhs.0, ext_bits(), RM))
            }
        }
    };
}

ext_binop!(Add, add);
ext_binop!(Sub, sub);
ext_binop!(Mul, mul);
ext_binop!(Div, div);

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext(self.0.neg())
    }
}

impl Real for Ext {
    fn from_f64(x: f64) -> Self {
        Ext(BigFloat::from_f64(x, ext_bits()))
    }

    fn from_i64(n: i64) -> Self {
        Ext(BigFloat::from_i64(n, ext_bits()))
    }

    fn pi() -> Self {
        Ext(with_consts(|cc| cc.pi(ext_bits(), RM)))
    }

    fn sin(&self) -> Self {
        Ext(with_consts(|cc| self.0.sin(ext_bits(), RM, cc)))
    }

    fn cos(&self) -> Self {
        Ext(with_consts(|cc| self.0.cos(ext_bits(), RM, cc)))
    }

    fn sqrt(&self) -> Self {
        Ext(self.0.sqrt(ext_bits(), RM))
    }

    fn acos(&self) -> Self {
        Ext(with_consts(|cc| self.0.acos(ext_bits(), RM, cc)))
    }

    fn asin(&self) -> Self {
        Ext(with_consts(|cc| self.0.asin(ext_bits(), RM, cc)))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, sign, exp, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        // mantissa is 0.m with the most significant word last
        let mut acc = 0.0f64;
        let mut scale = exp - 64;
        for w in words.iter().rev().take(2) {
            acc += ldexp(*w as f64, scale);
            scale -= 64;
        }
        if sign == Sign::Neg {
            -acc
        } else {
            acc
        }
    }

    fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    fn digits() -> u32 {
        ext_digits()
    }

    fn to_exact_string(&self) -> String {
        // Short decimal when it denotes exactly this value, hex otherwise.
        let short = format!("{}", self.to_f64());
        if Self::parse_str(&short).as_ref() == Some(self) {
            return short;
        }
        let hex = with_consts(|cc| self.0.format(Radix::Hex, RoundingMode::None, cc))
            .expect("hex formatting of a finite value");
        match hex.strip_prefix('-') {
            Some(rest) => format!("-0x{rest}"),
            None => format!("0x{hex}"),
        }
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let value = if let Some(hex) = body.strip_prefix("0x") {
            with_consts(|cc| BigFloat::parse(hex, Radix::Hex, ext_bits(), RM, cc))
        } else {
            // reject what astro-float would accept but Rust floats would not
            body.parse::<f64>().ok()?;
            with_consts(|cc| BigFloat::parse(body, Radix::Dec, ext_bits(), RM, cc))
        };
        if value.is_nan() || value.is_inf() {
            return None;
        }
        Some(Ext(if neg { value.neg() } else { value }))
    }

    fn to_sci(&self, sig: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let dec = with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_default();
        round_decimal(&dec, sig.max(1))
    }
}

fn ldexp(x: f64, exp: i32) -> f64 {
    // split to avoid premature overflow/underflow of 2^exp
    let half = exp / 2;
    x * 2f64.powi(half) * 2f64.powi(exp - half)
}

/// Rounds a decimal scientific string (`[-]d.ddd[e±x]`) to `sig` significant
/// digits, half-up on the decimal digits.
fn round_decimal(s: &str, sig: usize) -> String {
    let (neg, s) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let point = mant.find('.').unwrap_or(mant.len());
    let digits: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    let Some(first) = digits.iter().position(|&d| d != 0) else {
        return format!("{:.*e}", sig - 1, 0.0);
    };
    // value = 0.d1d2... * 10^(point + exp) with leading zeros stripped
    let mut exp10 = point as i64 + exp - first as i64 - 1;
    let mut kept: Vec<u8> = digits[first..].iter().copied().chain(std::iter::repeat(0)).take(sig).collect();
    let next = digits.get(first + sig).copied().unwrap_or(0);
    if next >= 5 {
        let mut i = sig;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exp10 += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + kept[0]) as char);
    if sig > 1 {
        out.push('.');
        out.extend(kept[1..].iter().map(|d| (b'0' + d) as char));
    }
    out.push_str(&format!("e{exp10}"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_basic_arithmetic() {
        let third = Ext::from_ratio(1, 3);
        let back = third.clone() * Ext::from_i64(3);
        assert!((back - Ext::one()).abs() < Ext::noise_floor(1));
        assert!(Ext::from_i64(2) > Ext::one());
        assert_eq!(Ext::from_f64(-0.25).to_f64(), -0.25);
    }

    #[test]
    fn ext_trig_identity() {
        let x = Ext::from_ratio(7, 10);
        let s = x.sin();
        let c = x.cos();
        let err = (s.square() + c.square() - Ext::one()).abs();
        assert!(err < Ext::noise_floor(2), "{err:?}");
        let pi6 = Ext::pi() / Ext::from_i64(6);
        assert!((pi6.sin() - Ext::from_ratio(1, 2)).abs() < Ext::noise_floor(2));
        assert!((Ext::from_ratio(1, 2).acos() - Ext::pi() / Ext::from_i64(3)).abs() < Ext::noise_floor(2));
    }

    #[test]
    fn ext_to_f64_matches() {
        for x in [1.0, -3.5, 1e-35, 123456.789, 0.1] {
            let e = Ext::from_f64(x);
            assert_eq!(e.to_f64(), x);
        }
        assert!((Ext::pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn exact_strings_round_trip() {
        for v in [Ext::from_ratio(1, 3), Ext::from_i64(0), Ext::from_f64(-0.25), -Ext::pi().sqrt()] {
            let s = v.to_exact_string();
            assert_eq!(Ext::parse_str(&s), Some(v.clone()), "{s}");
        }
        assert_eq!(Ext::from_i64(1).to_exact_string(), "1");
        assert_eq!(Ext::from_f64(-0.25).to_exact_string(), "-0.25");
        assert!(Ext::from_ratio(1, 3).to_exact_string().starts_with("0x"));
        for v in [0.1f64, -1.0 / 3.0, 1e-300] {
            assert_eq!(f64::parse_str(&v.to_exact_string()), Some(v));
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!(Ext::parse_str("abc"), None);
        assert_eq!(f64::parse_str("1.2.3"), None);
        assert_eq!(Ext::parse_str("inf"), None);
    }

    #[test]
    fn sci_rounding() {
        assert_eq!(round_decimal("1.2345e-3", 3), "1.23e-3");
        assert_eq!(round_decimal("9.996e2", 3), "1.00e3");
        assert_eq!(round_decimal("-0.000456", 2), "-4.6e-4");
        assert_eq!(Ext::from_f64(0.125).to_sci(2), "1.3e-1");
        assert_eq!(1.2345e-3f64.to_sci(3), "1.23e-3");
    }

    #[test]
    fn digits_bounds() {
        assert!(set_digits(5).is_err());
        assert!(set_digits(201).is_err());
    }
}
