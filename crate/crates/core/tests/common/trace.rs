//! Rational-valued trace of the equalizer at the default geometry: every
//! assignment is an exact product or sum followed by [`quantize`] into the
//! declared format.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{pow2, quantize, quantize_raw, rat, Fmt, O, Q};

type C = (BigRational, BigRational);

fn czero() -> C {
    (BigRational::zero(), BigRational::zero())
}

fn cmul(a: &C, b: &C) -> C {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn sgn(x: &BigRational) -> BigRational {
    if x.is_positive() {
        rat(1, 1)
    } else if x.is_negative() {
        rat(-1, 1)
    } else {
        BigRational::zero()
    }
}

fn sign_conj(a: &C) -> C {
    (sgn(&a.0), -sgn(&a.1))
}

fn cq(a: &C, f: Fmt) -> C {
    (quantize(&a.0, f), quantize(&a.1, f))
}

pub struct Trace {
    pub ffe_c: Vec<C>,
    pub dfe_c: Vec<C>,
    pub x: Vec<C>,
    pub sv: Vec<C>,
    pub coef_q: Q,
}

pub struct TraceStep {
    pub symbol: u8,
    pub sv0: C,
}

const X: Fmt = Fmt { w: 10, i: 0, signed: true, q: Q::Trn, o: O::Wrap };
const ACC: Fmt = Fmt { w: 11, i: 1, signed: true, q: Q::Trn, o: O::Wrap };
const ERR: Fmt = X;
const SV: Fmt = Fmt { w: 4, i: 0, signed: true, q: Q::Trn, o: O::Wrap };

impl Trace {
    pub fn new(coef_q: Q) -> Self {
        Trace {
            ffe_c: vec![czero(); 8],
            dfe_c: vec![czero(); 16],
            x: vec![czero(); 8],
            sv: vec![czero(); 16],
            coef_q,
        }
    }

    /// Level `l` in `-4..=3` of one dimension and its reconstructed value.
    fn slice_dim(y: &BigRational) -> (i64, BigRational) {
        let d = y - rat(1, 16);
        let stage = quantize(&d, Fmt::s(10, 0).modes(Q::RndZero, O::Sat));
        let level = quantize_raw(&stage, Fmt::s(3, 0));
        let l: i64 = i64::try_from(&level).unwrap();
        (l, quantize(&(rat(l, 8) + rat(1, 16)), SV))
    }

    /// One decoder invocation; inputs are already on the `(10, 0)` grid.
    pub fn step(&mut self, x_in: [C; 2], train: Option<C>) -> TraceStep {
        self.x[0] = cq(&x_in[0], X);
        self.x[1] = cq(&x_in[1], X);

        let mut yffe = czero();
        for k in 0..8 {
            let p = cmul(&self.x[k], &self.ffe_c[k]);
            yffe = cq(&(&yffe.0 + &p.0, &yffe.1 + &p.1), ACC);
        }
        let mut ydfe = czero();
        for k in 0..16 {
            let p = cmul(&self.sv[k], &self.dfe_c[k]);
            ydfe = cq(&(&ydfe.0 + &p.0, &ydfe.1 + &p.1), ACC);
        }
        let y = cq(&(&yffe.0 - &ydfe.0, &yffe.1 - &ydfe.1), ACC);

        let (lr, pr) = Self::slice_dim(&y.0);
        let (li, pi) = Self::slice_dim(&y.1);
        let symbol = (8 * lr + li).rem_euclid(64) as u8;
        self.sv[0] = train.unwrap_or((pr, pi));
        let e = cq(&(&self.sv[0].0 - &y.0, &self.sv[0].1 - &y.1), ERR);

        let mu = pow2(-8);
        let cf = Fmt::s(10, 0).modes(self.coef_q, O::Wrap);
        for k in 0..8 {
            let d = cmul(&e, &sign_conj(&self.x[k]));
            let c = &self.ffe_c[k];
            self.ffe_c[k] = cq(&(&c.0 + &d.0 * &mu, &c.1 + &d.1 * &mu), cf);
        }
        for k in 0..16 {
            let d = cmul(&e, &sign_conj(&self.sv[k]));
            let c = &self.dfe_c[k];
            self.dfe_c[k] = cq(&(&c.0 - &d.0 * &mu, &c.1 - &d.1 * &mu), cf);
        }

        for k in (0..=4).rev().step_by(2) {
            self.x[k + 3] = self.x[k + 1].clone();
            self.x[k + 2] = self.x[k].clone();
        }
        for k in (0..15).rev() {
            self.sv[k + 1] = self.sv[k].clone();
        }
        TraceStep { symbol, sv0: self.sv[0].clone() }
    }

    /// Same layout as the library's state snapshot: raw mantissas, one line
    /// per array component.
    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        let cf = Fmt::s(10, 0);
        for (name, arr, f) in [("ffe_c", &self.ffe_c, cf), ("dfe_c", &self.dfe_c, cf), ("x", &self.x, X), ("sv", &self.sv, SV)] {
            for part in 0..2 {
                let _ = write!(out, "{name}.{}", if part == 0 { "re" } else { "im" });
                for v in arr {
                    let c = if part == 0 { &v.0 } else { &v.1 };
                    let raw: BigInt = (c / f.lsb()).to_integer();
                    let _ = write!(out, " {raw}");
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Header line plus snapshot for every step, as stored in the golden files.
pub fn render_step(n: usize, symbol: u8, snapshot: &str) -> String {
    format!("step {n} symbol {symbol}\n{snapshot}")
}
