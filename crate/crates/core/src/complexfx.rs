//! Complex numbers over fixed-point components.

use std::fmt;

use crate::error::FxError;
use crate::fixedpoint::{convert, FxFormat, FxValue};
use crate::rational::Rational;

/// Complex value whose real and imaginary parts share one format.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct CFx {
    re: FxValue,
    im: FxValue,
}

/// Format of the components returned by [`CFx::sign_conj`]: holds -1, 0, +1.
pub fn sign_format() -> FxFormat {
    FxFormat::new(2, 2).expect("static format")
}

impl CFx {
    pub fn new(re: FxValue, im: FxValue) -> Result<Self, FxError> {
        if re.format() != im.format() {
            return Err(FxError::FormatMismatch);
        }
        Ok(CFx { re, im })
    }

    pub fn zero(format: FxFormat) -> Self {
        CFx { re: FxValue::zero(format), im: FxValue::zero(format) }
    }

    /// Both mantissas must be in range for `format`.
    pub fn from_raw(re: i128, im: i128, format: FxFormat) -> Option<Self> {
        Some(CFx {
            re: FxValue::from_raw(re, format)?,
            im: FxValue::from_raw(im, format)?,
        })
    }

    pub fn from_rationals(re: &Rational, im: &Rational, format: FxFormat) -> Self {
        CFx { re: convert(re, format), im: convert(im, format) }
    }

    pub fn re(&self) -> FxValue {
        self.re
    }

    pub fn im(&self) -> FxValue {
        self.im
    }

    pub fn format(&self) -> FxFormat {
        self.re.format()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &CFx) -> Result<CFx, FxError> {
        Ok(CFx { re: self.re.add(&other.re)?, im: self.im.add(&other.im)? })
    }

    pub fn sub(&self, other: &CFx) -> Result<CFx, FxError> {
        Ok(CFx { re: self.re.sub(&other.re)?, im: self.im.sub(&other.im)? })
    }

    /// Full-precision product using four real multiplications.
    pub fn mul(&self, other: &CFx) -> Result<CFx, FxError> {
        let rr = self.re.mul(&other.re)?;
        let ii = self.im.mul(&other.im)?;
        let ri = self.re.mul(&other.im)?;
        let ir = self.im.mul(&other.re)?;
        Ok(CFx { re: rr.sub(&ii)?, im: ri.add(&ir)? })
    }

    /// Multiplies both parts by a real fixed-point scalar.
    pub fn scale(&self, k: &FxValue) -> Result<CFx, FxError> {
        Ok(CFx { re: self.re.mul(k)?, im: self.im.mul(k)? })
    }

    /// `(sign(re), -sign(im))`, with a zero component mapping to 0.
    pub fn sign_conj(&self) -> CFx {
        let f = sign_format();
        CFx {
            re: FxValue::from_int(self.re.sign() as i128, f),
            im: FxValue::from_int(-self.im.sign() as i128, f),
        }
    }

    /// Componentwise assignment into `format` using its modes.
    pub fn cast(&self, format: FxFormat) -> CFx {
        CFx { re: self.re.cast(format), im: self.im.cast(format) }
    }

    pub fn value_eq(&self, other: &CFx) -> bool {
        self.re.value_eq(&other.re) && self.im.value_eq(&other.im)
    }

    pub fn to_rationals(&self) -> (Rational, Rational) {
        (self.re.to_rational(), self.im.to_rational())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `(raw_re,raw_im)@(W,I,Q,O)`
    pub fn render_raw(&self) -> String {
        format!("({},{})@{}", self.re.raw(), self.im.raw(), self.format())
    }
}

/// Componentwise [`convert`] of a complex rational.
pub fn cconvert(value: &CFx, format: FxFormat) -> CFx {
    value.cast(format)
}

impl fmt::Display for CFx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re.decimal(), self.im.decimal())
    }
}
