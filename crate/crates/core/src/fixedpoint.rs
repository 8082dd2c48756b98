//! Bit-accurate fixed-point values.
//!
//! An [`FxValue`] is a two's-complement (or unsigned) integer mantissa `raw`
//! together with an [`FxFormat`] describing the total width `W`, the number of
//! integer bits `I`, and the quantization and overflow behavior applied when
//! a value is assigned into the format. The numeric value is
//! `raw * 2^(I - W)`.
//!
//! Arithmetic (`add`, `sub`, `mul`) is full precision: the result format is
//! wide enough to hold the exact result, so no rounding or overflow ever
//! happens there. Narrowing only happens through [`FxValue::cast`] or
//! [`convert`], which apply the target format's modes.
//!
//! Raw mantissas are held in `i128` so that every intermediate of a
//! 64-bit-bounded operation is exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{FxError, ParseError};
use crate::rational::Rational;

pub const MAX_WIDTH: u32 = 64;

/// Quantization applied when fractional bits are dropped.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    /// Round to nearest, ties toward +inf.
    Rnd,
    /// Round to nearest, ties toward zero.
    RndZero,
    /// Truncate toward -inf.
    Trn,
}

/// Behavior when a value falls outside the representable range.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Overflow {
    Sat,
    Wrap,
}

impl Quant {
    pub const ALL: [Quant; 3] = [Quant::Rnd, Quant::RndZero, Quant::Trn];

    pub fn name(self) -> &'static str {
        match self {
            Quant::Rnd => "RND",
            Quant::RndZero => "RND_ZERO",
            Quant::Trn => "TRN",
        }
    }
}

impl Overflow {
    pub const ALL: [Overflow; 2] = [Overflow::Sat, Overflow::Wrap];

    pub fn name(self) -> &'static str {
        match self {
            Overflow::Sat => "SAT",
            Overflow::Wrap => "WRAP",
        }
    }
}

impl FromStr for Quant {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RND" => Ok(Quant::Rnd),
            "RND_ZERO" => Ok(Quant::RndZero),
            "TRN" => Ok(Quant::Trn),
            other => Err(ParseError::new(0, format!("unknown quantization mode `{other}`"))),
        }
    }
}

impl FromStr for Overflow {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SAT" => Ok(Overflow::Sat),
            "WRAP" => Ok(Overflow::Wrap),
            other => Err(ParseError::new(0, format!("unknown overflow mode `{other}`"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FxFormat {
    width: u32,
    int_bits: u32,
    signed: bool,
    quant: Quant,
    overflow: Overflow,
}

impl FxFormat {
    /// Signed format with the default TRN/WRAP modes.
    pub fn new(width: u32, int_bits: u32) -> Result<Self, FxError> {
        Self::with_sign(width, int_bits, true)
    }

    /// Unsigned format with the default TRN/WRAP modes.
    pub fn unsigned(width: u32, int_bits: u32) -> Result<Self, FxError> {
        Self::with_sign(width, int_bits, false)
    }

    pub fn with_sign(width: u32, int_bits: u32, signed: bool) -> Result<Self, FxError> {
        if width == 0 || width > MAX_WIDTH || int_bits > width {
            return Err(FxError::InvalidFormat { width, int_bits });
        }
        Ok(FxFormat {
            width,
            int_bits,
            signed,
            quant: Quant::Trn,
            overflow: Overflow::Wrap,
        })
    }

    pub fn with_modes(self, quant: Quant, overflow: Overflow) -> Self {
        FxFormat { quant, overflow, ..self }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn int_bits(&self) -> u32 {
        self.int_bits
    }

    pub fn frac_bits(&self) -> u32 {
        self.width - self.int_bits
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn quant(&self) -> Quant {
        self.quant
    }

    pub fn overflow(&self) -> Overflow {
        self.overflow
    }

    /// Weight of the least significant bit, `2^(I-W)`.
    pub fn lsb(&self) -> Rational {
        Rational::pow2(-(self.frac_bits() as i32))
    }

    pub fn min_raw(&self) -> i128 {
        if self.signed {
            -(1i128 << (self.width - 1))
        } else {
            0
        }
    }

    pub fn max_raw(&self) -> i128 {
        if self.signed {
            (1i128 << (self.width - 1)) - 1
        } else {
            (1i128 << self.width) - 1
        }
    }

    pub fn min_value(&self) -> Rational {
        Rational::scaled(self.min_raw(), -(self.frac_bits() as i32))
    }

    pub fn max_value(&self) -> Rational {
        Rational::scaled(self.max_raw(), -(self.frac_bits() as i32))
    }

    pub fn contains_raw(&self, raw: i128) -> bool {
        (self.min_raw()..=self.max_raw()).contains(&raw)
    }

    /// Signed format able to hold every value of this one.
    fn as_signed(&self) -> (u32, u32) {
        if self.signed {
            (self.int_bits, self.frac_bits())
        } else {
            (self.int_bits + 1, self.frac_bits())
        }
    }

    /// Applies this format's overflow mode to an integer already on the LSB
    /// grid.
    fn overflow_raw(&self, q: i128) -> i128 {
        if self.contains_raw(q) {
            return q;
        }
        match self.overflow {
            Overflow::Sat => q.clamp(self.min_raw(), self.max_raw()),
            Overflow::Wrap => wrap_bits(q, self.width, self.signed),
        }
    }

    /// Quantizes `raw * 2^-from_frac` onto this format's grid and applies
    /// overflow.
    fn fit_raw(&self, raw: i128, from_frac: u32) -> i128 {
        let to_frac = self.frac_bits();
        let q = match from_frac.cmp(&to_frac) {
            Ordering::Equal => raw,
            Ordering::Greater => round_shift(raw, from_frac - to_frac, self.quant),
            Ordering::Less => {
                let s = to_frac - from_frac;
                let shifted = raw.checked_shl(s).filter(|v| v >> s == raw);
                match (shifted, self.overflow) {
                    (Some(v), _) => v,
                    // Too large for i128: only the low W bits survive a wrap,
                    // and any saturation lands on the bound with raw's sign.
                    (None, Overflow::Wrap) => raw.wrapping_shl(s),
                    (None, Overflow::Sat) => {
                        if raw < 0 {
                            self.min_raw()
                        } else {
                            self.max_raw()
                        }
                    }
                }
            }
        };
        self.overflow_raw(q)
    }
}

impl fmt::Display for FxFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = if self.signed { "" } else { "u" };
        write!(
            f,
            "({u}{},{},{},{})",
            self.width,
            self.int_bits,
            self.quant.name(),
            self.overflow.name()
        )
    }
}

/// Arithmetic right shift by `k >= 1` with the given rounding.
fn round_shift(raw: i128, k: u32, quant: Quant) -> i128 {
    if k >= 126 {
        // |raw| < 2^125 here, so the exact quotient lies in (-1, 1).
        return match quant {
            Quant::Trn if raw < 0 => -1,
            _ => 0,
        };
    }
    let half = 1i128 << (k - 1);
    match quant {
        Quant::Trn => raw >> k,
        Quant::Rnd => (raw + half) >> k,
        Quant::RndZero if raw >= 0 => (raw + half - 1) >> k,
        Quant::RndZero => (raw + half) >> k,
    }
}

/// Keeps the low `width` bits of `q`, sign-extending when `signed`.
fn wrap_bits(q: i128, width: u32, signed: bool) -> i128 {
    let sh = 128 - width;
    if signed {
        q.wrapping_shl(sh) >> sh
    } else {
        ((q.wrapping_shl(sh) as u128) >> sh) as i128
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FxValue {
    raw: i128,
    format: FxFormat,
}

impl FxValue {
    /// Builds a value from a raw mantissa that must already be in range.
    pub fn from_raw(raw: i128, format: FxFormat) -> Option<Self> {
        format.contains_raw(raw).then_some(FxValue { raw, format })
    }

    /// Assigns a raw mantissa, applying the format's overflow mode.
    pub fn from_raw_wrapped(raw: i128, format: FxFormat) -> Self {
        FxValue { raw: format.overflow_raw(raw), format }
    }

    pub fn zero(format: FxFormat) -> Self {
        FxValue { raw: 0, format }
    }

    /// An integer constant, assigned into `format` with its modes.
    pub fn from_int(v: i128, format: FxFormat) -> Self {
        let raw = format.fit_raw(v, 0);
        FxValue { raw, format }
    }

    pub fn raw(&self) -> i128 {
        self.raw
    }

    pub fn format(&self) -> FxFormat {
        self.format
    }

    pub fn to_rational(&self) -> Rational {
        Rational::scaled(self.raw, -(self.format.frac_bits() as i32))
    }

    pub fn to_f64(&self) -> f64 {
        self.raw as f64 * (-(self.format.frac_bits() as f64)).exp2()
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    /// Assignment into another format: quantize, then overflow, using the
    /// target's modes.
    pub fn cast(&self, target: FxFormat) -> FxValue {
        let raw = target.fit_raw(self.raw, self.format.frac_bits());
        FxValue { raw, format: target }
    }

    pub fn add(&self, other: &FxValue) -> Result<FxValue, FxError> {
        self.add_sub(other, false)
    }

    pub fn sub(&self, other: &FxValue) -> Result<FxValue, FxError> {
        self.add_sub(other, true)
    }

    fn add_sub(&self, other: &FxValue, negate: bool) -> Result<FxValue, FxError> {
        let (a, b) = (self.format, other.format);
        let frac = a.frac_bits().max(b.frac_bits());
        let (int_bits, signed) = if !a.signed && !b.signed {
            (a.int_bits.max(b.int_bits) + 1, negate)
        } else {
            let (ia, _) = a.as_signed();
            let (ib, _) = b.as_signed();
            (ia.max(ib) + 1, true)
        };
        let format = full_format(int_bits, frac, signed)?;
        let x = self.raw << (frac - a.frac_bits());
        let y = other.raw << (frac - b.frac_bits());
        let raw = if negate { x - y } else { x + y };
        Ok(FxValue { raw, format })
    }

    pub fn mul(&self, other: &FxValue) -> Result<FxValue, FxError> {
        let (a, b) = (self.format, other.format);
        let frac = a.frac_bits() + b.frac_bits();
        let (int_bits, signed) = match (a.signed, b.signed) {
            (false, false) => (a.int_bits + b.int_bits, false),
            (true, true) => (a.int_bits + b.int_bits, true),
            _ => (a.as_signed().0 + b.as_signed().0, true),
        };
        let format = full_format(int_bits, frac, signed)?;
        Ok(FxValue { raw: self.raw * other.raw, format })
    }

    /// Multiplies by `2^-n` in place of the format: bits shifted out are
    /// dropped (truncation toward -inf).
    pub fn shift_right(&self, n: u32) -> FxValue {
        let raw = self.raw >> n.min(127);
        FxValue { raw, format: self.format }
    }

    /// Multiplies by `2^n`, applying the format's overflow mode.
    pub fn shift_left(&self, n: u32) -> FxValue {
        let format = self.format;
        let raw = match self.raw.checked_shl(n).filter(|v| v >> n == self.raw) {
            Some(r) => format.overflow_raw(r),
            None => match format.overflow {
                Overflow::Wrap if n >= 128 => 0,
                Overflow::Wrap => wrap_bits(self.raw.wrapping_shl(n), format.width, format.signed),
                Overflow::Sat if self.raw < 0 => format.min_raw(),
                Overflow::Sat => format.max_raw(),
            },
        };
        FxValue { raw, format }
    }

    pub fn bit_get(&self, index: u32) -> Result<bool, FxError> {
        self.check_bit(index)?;
        Ok((self.raw >> index) & 1 == 1)
    }

    pub fn bit_set(&self, index: u32, bit: bool) -> Result<FxValue, FxError> {
        self.check_bit(index)?;
        let pattern = if bit {
            self.raw | (1i128 << index)
        } else {
            self.raw & !(1i128 << index)
        };
        let raw = wrap_bits(pattern, self.format.width, self.format.signed);
        Ok(FxValue { raw, format: self.format })
    }

    fn check_bit(&self, index: u32) -> Result<(), FxError> {
        if index >= self.format.width {
            return Err(FxError::BitIndex { index, width: self.format.width });
        }
        Ok(())
    }

    /// Integer part, truncated toward zero.
    pub fn to_int(&self) -> i128 {
        let f = self.format.frac_bits();
        if f >= 127 {
            return 0;
        }
        self.raw / (1i128 << f)
    }

    pub fn sign(&self) -> i32 {
        self.raw.signum() as i32
    }

    /// Compares numeric values across formats.
    pub fn cmp_value(&self, other: &FxValue) -> Ordering {
        let (fa, fb) = (self.format.frac_bits(), other.format.frac_bits());
        let f = fa.max(fb);
        (self.raw << (f - fa)).cmp(&(other.raw << (f - fb)))
    }

    pub fn value_eq(&self, other: &FxValue) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }

    /// Exact decimal rendering of the value.
    pub fn decimal(&self) -> String {
        self.to_rational().to_string()
    }
}

fn full_format(int_bits: u32, frac_bits: u32, signed: bool) -> Result<FxFormat, FxError> {
    let width = int_bits + frac_bits;
    if width > MAX_WIDTH {
        return Err(FxError::WidthOverflow { needed: width });
    }
    FxFormat::with_sign(width, int_bits, signed)
}

/// Assigns an exact rational into `format`: quantize onto the LSB grid with
/// the format's rounding, then apply its overflow mode.
pub fn convert(x: &Rational, format: FxFormat) -> FxValue {
    let scale = BigInt::one() << format.frac_bits();
    let numer = x.numer() * scale;
    let denom = x.denom();
    let q = quantize_ratio(&numer, denom, format.quant);
    let raw = overflow_big(&q, &format);
    FxValue { raw, format }
}

/// Rounds `numer / denom` (denom > 0) to an integer.
fn quantize_ratio(numer: &BigInt, denom: &BigInt, quant: Quant) -> BigInt {
    let two = BigInt::from(2);
    match quant {
        Quant::Trn => numer.div_floor(denom),
        // floor(s + 1/2)
        Quant::Rnd => (numer * &two + denom).div_floor(&(denom * &two)),
        Quant::RndZero => {
            if numer.sign() == num_bigint::Sign::Minus {
                (numer * &two + denom).div_floor(&(denom * &two))
            } else {
                // ceil(s - 1/2)
                -((-(numer * &two) + denom).div_floor(&(denom * &two)))
            }
        }
    }
}

fn overflow_big(q: &BigInt, format: &FxFormat) -> i128 {
    let min = BigInt::from(format.min_raw());
    let max = BigInt::from(format.max_raw());
    if *q >= min && *q <= max {
        return q.to_i128().expect("in-range raw fits i128");
    }
    match format.overflow {
        Overflow::Sat => {
            if *q < min {
                format.min_raw()
            } else {
                format.max_raw()
            }
        }
        Overflow::Wrap => {
            let modulus = BigInt::one() << format.width;
            let mut r = q.mod_floor(&modulus);
            if format.signed && r > max {
                r -= &modulus;
            }
            r.to_i128().expect("wrapped raw fits i128")
        }
    }
}

impl fmt::Display for FxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{} {}", self.raw, self.format, self.decimal())
    }
}

/// Parses `raw@(W,I,Q,O)` with an optional trailing decimal value, which
/// must agree with the raw mantissa when present. An unsigned format is
/// written `(uW,I,Q,O)`.
impl FromStr for FxValue {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| ParseError::new(0, format!("invalid fixed-point literal `{s}`: {m}"));
        let (raw_txt, rest) = s.trim().split_once('@').ok_or_else(|| bad("missing `@`"))?;
        let raw: i128 = raw_txt.trim().parse().map_err(|_| bad("raw is not an integer"))?;
        let rest = rest.trim();
        let inner_end = rest.find(')').ok_or_else(|| bad("missing `)`"))?;
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| bad("missing `(`"))?
            .get(..inner_end - 1)
            .ok_or_else(|| bad("malformed format"))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad("format needs four fields"));
        }
        let (signed, w_txt) = match parts[0].strip_prefix('u') {
            Some(w) => (false, w),
            None => (true, parts[0]),
        };
        let width: u32 = w_txt.parse().map_err(|_| bad("bad width"))?;
        let int_bits: u32 = parts[1].parse().map_err(|_| bad("bad integer bits"))?;
        let format = FxFormat::with_sign(width, int_bits, signed)
            .map_err(|e| bad(&e.to_string()))?
            .with_modes(parts[2].parse()?, parts[3].parse()?);
        let value = FxValue::from_raw(raw, format).ok_or_else(|| bad("raw out of range"))?;
        let tail = rest[inner_end + 1..].trim();
        if !tail.is_empty() {
            let dec: Rational = tail.parse().map_err(|_| bad("bad decimal value"))?;
            if dec != value.to_rational() {
                return Err(bad("decimal value disagrees with raw"));
            }
        }
        Ok(value)
    }
}
