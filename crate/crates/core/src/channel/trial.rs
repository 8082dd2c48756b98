use std::fmt::Write as _;

use crate::complexfx::CFx;
use crate::decoder::{Decoder, DecoderParams, ParamsError};
use crate::error::ChannelError;

use super::reference::ReferenceDecoder;
use super::{symbol_stream, transmit, ChannelConfig, XorShift64Star};

/// Anything that turns two T/2 samples into a symbol decision.
pub trait SymbolDecoder {
    /// Returns the slicer's symbol and `|e|^2`.
    fn decode(&mut self, x_in: [CFx; 2], train: Option<u8>) -> (u8, f64);
}

impl SymbolDecoder for Decoder {
    fn decode(&mut self, x_in: [CFx; 2], train: Option<u8>) -> (u8, f64) {
        let r = match train {
            Some(s) => self.step_trained(x_in, s),
            None => self.step(x_in),
        };
        let (re, im) = r.e.to_f64();
        (r.symbol, re * re + im * im)
    }
}

impl SymbolDecoder for ReferenceDecoder {
    fn decode(&mut self, x_in: [CFx; 2], train: Option<u8>) -> (u8, f64) {
        let r = self.step(x_in, train);
        (r.symbol, r.e.norm_sqr())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialMetrics {
    pub block_size: usize,
    /// Mean `|e|^2` per block over the whole run, training included.
    pub mse_per_block: Vec<f64>,
    /// Slicer decisions that differ from the transmitted symbol, per block,
    /// training included.
    pub decision_errors_per_block: Vec<usize>,
    /// Measurement-window errors accumulated up to the end of each block.
    pub cumulative_errors: Vec<usize>,
    pub n_train: usize,
    pub n_measure: usize,
    pub symbol_errors: usize,
    pub ser: f64,
    pub converged: bool,
}

impl TrialMetrics {
    pub fn final_mse(&self) -> Option<f64> {
        self.mse_per_block.last().copied()
    }

    /// Decision errors in the last block that lies entirely in training.
    pub fn last_training_block_errors(&self) -> Option<usize> {
        let full = self.n_train / self.block_size;
        full.checked_sub(1).map(|b| self.decision_errors_per_block[b])
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>6}  {:>12}  {:>8}  {:>17}", "block", "mse", "errors", "cumulative_errors");
        for (b, mse) in self.mse_per_block.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>6}  {:>12.6e}  {:>8}  {:>17}",
                b, mse, self.decision_errors_per_block[b], self.cumulative_errors[b]
            );
        }
        let _ = writeln!(out, "{}", self.summary());
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("block_index,mse,cumulative_errors\n");
        for (b, mse) in self.mse_per_block.iter().enumerate() {
            let _ = writeln!(out, "{b},{mse:.9e},{}", self.cumulative_errors[b]);
        }
        let _ = writeln!(out, "# {}", self.summary());
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "ser={:.6} symbol_errors={} measured={} converged={}",
            self.ser, self.symbol_errors, self.n_measure, self.converged
        )
    }
}

/// Runs a trial with any decoder: the first `n_train` symbols are decoded
/// in training mode, the next `n_measure` decision-directed. Errors are
/// counted against the transmitted symbol with zero decision delay.
pub fn run_trial_with<D: SymbolDecoder>(
    cfg: &ChannelConfig,
    params: &DecoderParams,
    decoder: &mut D,
) -> Result<TrialMetrics, ChannelError> {
    cfg.validate()?;
    let block = cfg.block_size.max(1);
    let total = cfg.n_train + cfg.n_measure;
    let mut rng = XorShift64Star::new(cfg.seed);
    let symbols = symbol_stream(&mut rng, total);
    let samples = transmit(&symbols, cfg, params.x_format(), &mut rng)?;

    let mut mse = Vec::new();
    let mut errs = Vec::new();
    let mut cumulative = Vec::new();
    let (mut acc, mut block_errs, mut in_block, mut measured_errs) = (0.0, 0usize, 0usize, 0usize);
    for (n, &sym) in symbols.iter().enumerate() {
        let x_in = [samples[2 * n + 1], samples[2 * n]];
        let train = (n < cfg.n_train).then_some(sym);
        let (decided, e2) = decoder.decode(x_in, train);
        acc += e2;
        in_block += 1;
        if decided != sym {
            block_errs += 1;
            if train.is_none() {
                measured_errs += 1;
            }
        }
        if in_block == block || n + 1 == total {
            mse.push(acc / in_block as f64);
            errs.push(block_errs);
            cumulative.push(measured_errs);
            acc = 0.0;
            block_errs = 0;
            in_block = 0;
        }
    }
    let ser = if cfg.n_measure == 0 { 0.0 } else { measured_errs as f64 / cfg.n_measure as f64 };
    Ok(TrialMetrics {
        block_size: block,
        mse_per_block: mse,
        decision_errors_per_block: errs,
        cumulative_errors: cumulative,
        n_train: cfg.n_train,
        n_measure: cfg.n_measure,
        symbol_errors: measured_errs,
        ser,
        converged: ser <= cfg.max_ser,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum TrialError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Trial of the bit-exact decoder.
pub fn run_trial(cfg: &ChannelConfig, params: &DecoderParams) -> Result<TrialMetrics, TrialError> {
    let mut dec = Decoder::new(params.clone())?;
    Ok(run_trial_with(cfg, params, &mut dec)?)
}

/// Trial of the floating-point reference.
pub fn run_reference_trial(cfg: &ChannelConfig, params: &DecoderParams) -> Result<TrialMetrics, TrialError> {
    params.validate()?;
    let mut dec = ReferenceDecoder::new(params);
    Ok(run_trial_with(cfg, params, &mut dec)?)
}
