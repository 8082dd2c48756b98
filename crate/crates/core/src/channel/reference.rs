//! Floating-point reference of the decoder: the same dataflow with no
//! quantization or overflow anywhere except the slicer's decision grid.

use num_complex::Complex64;

use crate::complexfx::CFx;
use crate::decoder::{symbol_levels, DecoderParams, SlicerMode};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RefDecision {
    pub symbol: u8,
    pub y: Complex64,
    pub e: Complex64,
    pub sv0: Complex64,
}

#[derive(Clone, Debug)]
pub struct ReferenceDecoder {
    pub ffe_c: Vec<Complex64>,
    pub dfe_c: Vec<Complex64>,
    pub x: Vec<Complex64>,
    pub sv: Vec<Complex64>,
    mu_ffe: f64,
    mu_dfe: f64,
    slicer: SlicerMode,
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn sign_conj(z: Complex64) -> Complex64 {
    Complex64::new(sign(z.re), -sign(z.im))
}

/// Decision level of one dimension: `(v - 1/16) * 8` floored (or rounded
/// to nearest, ties toward zero) and limited to `-4..=3`.
fn level(v: f64, mode: SlicerMode) -> i32 {
    let t = (v - 0.0625) * 8.0;
    let l = match mode {
        SlicerMode::Truncating => t.floor(),
        SlicerMode::Rounding if t >= 0.0 => (t - 0.5).ceil(),
        SlicerMode::Rounding => (t + 0.5).floor(),
    };
    l.clamp(-4.0, 3.0) as i32
}

fn level_value(l: i32) -> f64 {
    l as f64 / 8.0 + 0.0625
}

pub fn reference_point(symbol: u8) -> Complex64 {
    let (r, i) = symbol_levels(symbol);
    Complex64::new(level_value(r), level_value(i))
}

impl ReferenceDecoder {
    pub fn new(params: &DecoderParams) -> Self {
        let z = Complex64::new(0.0, 0.0);
        ReferenceDecoder {
            ffe_c: vec![z; params.nffe],
            dfe_c: vec![z; params.ndfe],
            x: vec![z; params.nffe],
            sv: vec![z; params.ndfe],
            mu_ffe: (-(params.mu_ffe_shift as f64)).exp2(),
            mu_dfe: (-(params.mu_dfe_shift as f64)).exp2(),
            slicer: params.slicer,
        }
    }

    pub fn slice(y: Complex64, mode: SlicerMode) -> (Complex64, u8) {
        let (r, i) = (level(y.re, mode), level(y.im, mode));
        let symbol = ((8 * r + i) & 0x3f) as u8;
        (Complex64::new(level_value(r), level_value(i)), symbol)
    }

    pub fn step(&mut self, x_in: [CFx; 2], train: Option<u8>) -> RefDecision {
        let c = |v: &CFx| {
            let (re, im) = v.to_f64();
            Complex64::new(re, im)
        };
        self.x[0] = c(&x_in[0]);
        self.x[1] = c(&x_in[1]);
        let yffe: Complex64 = self.x.iter().zip(&self.ffe_c).map(|(x, k)| x * k).sum();
        let ydfe: Complex64 = self.sv.iter().zip(&self.dfe_c).map(|(s, k)| s * k).sum();
        let y = yffe - ydfe;
        let (point, symbol) = Self::slice(y, self.slicer);
        self.sv[0] = match train {
            Some(s) => reference_point(s),
            None => point,
        };
        let e = self.sv[0] - y;
        for (k, x) in self.ffe_c.iter_mut().zip(&self.x) {
            *k += self.mu_ffe * (e * sign_conj(*x));
        }
        for (k, s) in self.dfe_c.iter_mut().zip(&self.sv) {
            *k -= self.mu_dfe * (e * sign_conj(*s));
        }
        let n = self.x.len();
        let mut k = n as isize - 4;
        while k >= 0 {
            let k_ = k as usize;
            self.x[k_ + 3] = self.x[k_ + 1];
            self.x[k_ + 2] = self.x[k_];
            k -= 2;
        }
        for k in (0..self.sv.len() - 1).rev() {
            self.sv[k + 1] = self.sv[k];
        }
        RefDecision { symbol, y, e, sv0: self.sv[0] }
    }
}
