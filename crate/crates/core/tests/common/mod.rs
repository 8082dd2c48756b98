//! Oracles shared by the integration tests. They work on exact rationals
//! with their own quantization code, so they share no arithmetic with the
//! library under test.
#![allow(dead_code)]

pub mod props;
pub mod sweep;
pub mod trace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Q {
    Rnd,
    RndZero,
    Trn,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum O {
    Sat,
    Wrap,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Fmt {
    pub w: u32,
    pub i: u32,
    pub signed: bool,
    pub q: Q,
    pub o: O,
}

impl Fmt {
    pub fn s(w: u32, i: u32) -> Self {
        Fmt { w, i, signed: true, q: Q::Trn, o: O::Wrap }
    }

    pub fn modes(self, q: Q, o: O) -> Self {
        Fmt { q, o, ..self }
    }

    /// Value of one LSB.
    pub fn lsb(&self) -> BigRational {
        pow2(self.i as i64 - self.w as i64)
    }

    pub fn raw_range(&self) -> (BigInt, BigInt) {
        let span = BigInt::one() << self.w;
        if self.signed {
            let h: BigInt = &span / 2;
            (-h.clone(), h - 1)
        } else {
            (BigInt::zero(), span - 1)
        }
    }
}

pub fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        (0..e).fold(BigRational::one(), |a, _| a * &two)
    } else {
        (0..-e).fold(BigRational::one(), |a, _| a / &two)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Mantissa of `x` in `f`, by the textbook definitions: pick the grid
/// point(s) around `x`, resolve with the quantization rule, then resolve
/// overflow.
pub fn quantize_raw(x: &BigRational, f: Fmt) -> BigInt {
    let scaled = x / f.lsb();
    let lo = scaled.floor().to_integer();
    let hi = scaled.ceil().to_integer();
    let q = if lo == hi {
        lo
    } else {
        let d_lo = &scaled - BigRational::from_integer(lo.clone());
        let d_hi = BigRational::from_integer(hi.clone()) - &scaled;
        match f.q {
            Q::Trn => lo,
            _ if d_lo < d_hi => lo,
            _ if d_hi < d_lo => hi,
            Q::Rnd => hi,
            Q::RndZero => {
                if scaled.is_positive() {
                    lo
                } else {
                    hi
                }
            }
        }
    };
    let (min, max) = f.raw_range();
    match f.o {
        O::Sat => q.clamp(min, max),
        O::Wrap => {
            let span = BigInt::one() << f.w;
            let r = (q - &min).mod_floor(&span);
            r + min
        }
    }
}

pub fn quantize(x: &BigRational, f: Fmt) -> BigRational {
    BigRational::from_integer(quantize_raw(x, f)) * f.lsb()
}

pub fn to_i128(v: &BigInt) -> i128 {
    i128::try_from(v).expect("fits")
}
