//! Test harness around the decoder: a seeded symbol source, the 64-QAM
//! mapper, a T/2-spaced ISI channel with optional Gaussian noise, and trial
//! metrics.

mod prng;
mod reference;
mod trial;

pub use prng::XorShift64Star;
pub use reference::{RefDecision, ReferenceDecoder};
pub use trial::{run_reference_trial, run_trial, run_trial_with, SymbolDecoder, TrialError, TrialMetrics};

use crate::complexfx::CFx;
use crate::decoder::symbol_point;
use crate::error::ChannelError;
use crate::fixedpoint::{convert, FxFormat, Overflow, Quant};
use crate::rational::Rational;

/// Complex rational channel tap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tap {
    pub re: Rational,
    pub im: Rational,
}

impl Tap {
    pub fn real(re: Rational) -> Self {
        Tap { re, im: Rational::zero() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    /// Impulse response at T/2 spacing.
    pub taps: Vec<Tap>,
    pub noise_sigma: Rational,
    pub seed: u64,
    pub n_train: usize,
    pub n_measure: usize,
    /// Symbols per MSE block.
    pub block_size: usize,
    /// A trial counts as converged when its SER is at most this value.
    pub max_ser: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            taps: vec![Tap::real(Rational::one())],
            noise_sigma: Rational::zero(),
            seed: 1,
            n_train: 0,
            n_measure: 0,
            block_size: 500,
            max_ser: 1e-3,
        }
    }
}

/// Largest constellation magnitude per dimension, `3/8 + 1/16`.
pub fn max_point_magnitude() -> Rational {
    Rational::new(7, 16)
}

impl ChannelConfig {
    /// The noiseless acceptance channel: taps `[1.05, 1.05, 0.05, 0.05]`, a
    /// two-half-sample main pulse plus a one-symbol post-cursor.
    pub fn scenario_s() -> Self {
        let t = |s: &str| Tap::real(s.parse().expect("literal"));
        ChannelConfig {
            taps: vec![t("1.05"), t("1.05"), t("0.05"), t("0.05")],
            seed: 2004,
            n_train: 4000,
            n_measure: 10_000,
            max_ser: 0.0,
            ..Default::default()
        }
    }

    /// Worst-case noiseless output magnitude in one dimension.
    pub fn worst_case_amplitude(&self) -> Rational {
        let mut worst = Rational::zero();
        for phase in 0..2 {
            let mut sum = Rational::zero();
            for tap in self.taps.iter().skip(phase).step_by(2) {
                sum = sum + tap.re.abs() + tap.im.abs();
            }
            worst = worst.max(sum);
        }
        worst * max_point_magnitude()
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.taps.is_empty() {
            return Err(ChannelError::NoTaps);
        }
        if self.noise_sigma.is_negative() {
            return Err(ChannelError::NegativeNoise);
        }
        let worst = self.worst_case_amplitude();
        if worst >= Rational::new(1, 2) {
            return Err(ChannelError::Amplitude { worst: worst.to_string() });
        }
        Ok(())
    }
}

/// Constellation point of a 6-bit code in `format`.
pub fn map_symbol(symbol: u8, format: FxFormat) -> Result<CFx, ChannelError> {
    if symbol > 63 {
        return Err(ChannelError::SymbolRange(symbol as u32));
    }
    Ok(symbol_point(symbol, format))
}

/// Draws `n` symbols from the generator.
pub fn symbol_stream(rng: &mut XorShift64Star, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.next_symbol()).collect()
}

/// Sends `symbols` through the channel. Symbol `n` is an impulse at
/// half-sample `2n`; the output keeps `2 * symbols.len()` samples (the
/// convolution tail is dropped), each rounded and saturated into
/// `x_format` (the samples keep `x_format`'s own modes). Noise, if any, is drawn from `rng` one complex pair per
/// sample.
pub fn transmit(
    symbols: &[u8],
    cfg: &ChannelConfig,
    x_format: FxFormat,
    rng: &mut XorShift64Star,
) -> Result<Vec<CFx>, ChannelError> {
    cfg.validate()?;
    let points = symbols
        .iter()
        .map(|&s| map_symbol(s, x_format).map(|p| p.to_rationals()))
        .collect::<Result<Vec<_>, _>>()?;
    let out_f = x_format.with_modes(Quant::Rnd, Overflow::Sat);
    let sigma = cfg.noise_sigma.to_f64();
    let noisy = !cfg.noise_sigma.is_zero();
    let n_out = 2 * symbols.len();
    let mut out = Vec::with_capacity(n_out);
    for m in 0..n_out {
        let (mut re, mut im) = (Rational::zero(), Rational::zero());
        for (j, tap) in cfg.taps.iter().enumerate() {
            if j > m || (m - j) % 2 != 0 {
                continue;
            }
            let (pr, pi) = &points[(m - j) / 2];
            re = re + (&tap.re * pr) - (&tap.im * pi);
            im = im + (&tap.re * pi) + (&tap.im * pr);
        }
        if noisy {
            let (nr, ni) = rng.gaussian_pair();
            re = re + Rational::from_f64(sigma * nr).unwrap_or_else(Rational::zero);
            im = im + Rational::from_f64(sigma * ni).unwrap_or_else(Rational::zero);
        }
        let (qr, qi) = (convert(&re, out_f), convert(&im, out_f));
        out.push(CFx::from_raw(qr.raw(), qi.raw(), x_format).expect("in range"));
    }
    Ok(out)
}
