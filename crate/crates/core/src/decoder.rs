//! Bit-exact model of the 64-QAM decoder: a T/2-spaced feed-forward
//! equalizer, a T-spaced decision-feedback equalizer, a 64-QAM slicer and
//! sign-LMS adaptation of both filters. One call to [`Decoder::step`]
//! consumes two input samples and produces one 6-bit symbol.
//!
//! Every intermediate is assigned into the same declared formats as the
//! hardware source, so results are reproducible bit for bit:
//!
//! | quantity        | format                      |
//! |-----------------|-----------------------------|
//! | `x`             | `(X_W, 0)`                  |
//! | `ffe_c`         | `(FFE_C_W, 0)`              |
//! | `dfe_c`         | `(DFE_C_W, 0)`              |
//! | `SV`            | `(4, 0)`                    |
//! | `yffe`, `y`     | `(FFE_W + 1, 1)`            |
//! | `ydfe`          | `(DFE_W + 1, 1)`            |
//! | `e`             | `(FFE_W, 0)`                |
//!
//! All of these use the default TRN/WRAP modes except the slicer's
//! `(FFE_W, 0, RND_ZERO, SAT)` intermediate and, optionally, rounding on the
//! coefficient updates (see [`DecoderParams::coef_quant`]).

use std::fmt::Write as _;

use crate::complexfx::CFx;
use crate::fixedpoint::{FxFormat, FxValue, Overflow, Quant};

/// Bits per 64-QAM symbol.
pub const BITS_PER_SYMBOL: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderParams {
    pub nffe: usize,
    pub ndfe: usize,
    pub x_w: u32,
    pub ffe_w: u32,
    pub dfe_w: u32,
    pub ffe_c_w: u32,
    pub dfe_c_w: u32,
    /// Step size of the FFE update is `2^-mu_ffe_shift`.
    pub mu_ffe_shift: u32,
    pub mu_dfe_shift: u32,
    /// Quantization used when an updated coefficient is written back. The
    /// hardware-faithful default is [`Quant::Trn`]; [`Quant::Rnd`] keeps
    /// small updates from being biased downward.
    pub coef_quant: Quant,
    pub slicer: SlicerMode,
}

/// How the slicer maps `y - 2^-4` onto the 3-bit level grid.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum SlicerMode {
    /// Saturate into `(FFE_W, 0)` with RND_ZERO, then assign into `(3, 0)`
    /// with the default truncation. This is what the hardware source
    /// computes; a constellation point sits at the lower edge of its
    /// decision region.
    #[default]
    Truncating,
    /// Round to nearest (ties toward zero) directly on the 3-bit grid, with
    /// saturation. Decision regions are centered on the points.
    Rounding,
}

impl Default for DecoderParams {
    fn default() -> Self {
        DecoderParams {
            nffe: 8,
            ndfe: 16,
            x_w: 10,
            ffe_w: 10,
            dfe_w: 10,
            ffe_c_w: 10,
            dfe_c_w: 10,
            mu_ffe_shift: 8,
            mu_dfe_shift: 8,
            coef_quant: Quant::Trn,
            slicer: SlicerMode::Truncating,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("{name} = {value} is below the minimum width 4")]
    WidthTooSmall { name: &'static str, value: u32 },
    #[error("{name} = {value} exceeds the supported maximum")]
    TooLarge { name: &'static str, value: u32 },
    #[error("nffe must be an even number >= 4, got {0}")]
    Ffe(usize),
    #[error("ndfe must be >= 2, got {0}")]
    Dfe(usize),
}

impl DecoderParams {
    /// Default geometry with rounding on the coefficient updates.
    pub fn with_rounded_updates() -> Self {
        DecoderParams { coef_quant: Quant::Rnd, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        for (name, value) in [
            ("X_W", self.x_w),
            ("FFE_W", self.ffe_w),
            ("DFE_W", self.dfe_w),
            ("FFE_C_W", self.ffe_c_w),
            ("DFE_C_W", self.dfe_c_w),
        ] {
            if value < 4 {
                return Err(ParamsError::WidthTooSmall { name, value });
            }
            if value > 24 {
                return Err(ParamsError::TooLarge { name, value });
            }
        }
        for (name, value) in [("mu_ffe_shift", self.mu_ffe_shift), ("mu_dfe_shift", self.mu_dfe_shift)] {
            if value > 24 {
                return Err(ParamsError::TooLarge { name, value });
            }
        }
        if self.nffe < 4 || !self.nffe.is_multiple_of(2) || self.nffe > 256 {
            return Err(ParamsError::Ffe(self.nffe));
        }
        if self.ndfe < 2 || self.ndfe > 256 {
            return Err(ParamsError::Dfe(self.ndfe));
        }
        Ok(())
    }

    pub fn x_format(&self) -> FxFormat {
        fmt(self.x_w, 0)
    }

    pub fn ffe_coef_format(&self) -> FxFormat {
        fmt(self.ffe_c_w, 0).with_modes(self.coef_quant, Overflow::Wrap)
    }

    pub fn dfe_coef_format(&self) -> FxFormat {
        fmt(self.dfe_c_w, 0).with_modes(self.coef_quant, Overflow::Wrap)
    }

    pub fn ffe_acc_format(&self) -> FxFormat {
        fmt(self.ffe_w + 1, 1)
    }

    pub fn dfe_acc_format(&self) -> FxFormat {
        fmt(self.dfe_w + 1, 1)
    }

    pub fn error_format(&self) -> FxFormat {
        fmt(self.ffe_w, 0)
    }

    /// `(1 as (W+2, 2)) >> shift`, assigned into the coefficient format.
    fn mu(&self, acc_w: u32, coef_w: u32, shift: u32) -> FxValue {
        FxValue::from_int(1, fmt(acc_w + 2, 2)).shift_right(shift).cast(fmt(coef_w, 0))
    }

    pub fn mu_ffe(&self) -> FxValue {
        self.mu(self.ffe_w, self.ffe_c_w, self.mu_ffe_shift)
    }

    pub fn mu_dfe(&self) -> FxValue {
        self.mu(self.dfe_w, self.dfe_c_w, self.mu_dfe_shift)
    }
}

fn fmt(w: u32, i: u32) -> FxFormat {
    FxFormat::new(w, i).expect("validated decoder format")
}

/// Format of the decision taps `SV`.
pub fn decision_format() -> FxFormat {
    fmt(4, 0)
}

/// Format of the slicer's 3-bit level `r` / `i`.
pub fn level_format() -> FxFormat {
    fmt(3, 0)
}

/// The slicer offset `2^-4`, built as in hardware: a zero `(4, 0)` with bit 0
/// set.
pub fn slicer_offset() -> FxValue {
    FxValue::zero(decision_format()).bit_set(0, true).expect("bit 0 exists")
}

/// All persistent equalizer state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderState {
    pub ffe_c: Vec<CFx>,
    pub dfe_c: Vec<CFx>,
    pub x: Vec<CFx>,
    pub sv: Vec<CFx>,
}

impl DecoderState {
    pub fn zeroed(params: &DecoderParams) -> Self {
        DecoderState {
            ffe_c: vec![CFx::zero(params.ffe_coef_format()); params.nffe],
            dfe_c: vec![CFx::zero(params.dfe_coef_format()); params.ndfe],
            x: vec![CFx::zero(params.x_format()); params.nffe],
            sv: vec![CFx::zero(decision_format()); params.ndfe],
        }
    }

    /// Raw mantissas of every array in declaration order, one line per
    /// component.
    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        for (name, arr) in [("ffe_c", &self.ffe_c), ("dfe_c", &self.dfe_c), ("x", &self.x), ("sv", &self.sv)] {
            for (part, pick) in [("re", 0usize), ("im", 1)] {
                let _ = write!(out, "{name}.{part}");
                for v in arr.iter() {
                    let raw = if pick == 0 { v.re().raw() } else { v.im().raw() };
                    let _ = write!(out, " {raw}");
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Slicer decision for one equalizer output.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    /// Constellation point in `(4, 0)`.
    pub point: CFx,
    /// 6-bit symbol code.
    pub symbol: u8,
    /// Per-dimension levels in `-4..=3`.
    pub levels: (i32, i32),
}

/// Quantizes one dimension: returns the 3-bit level value `r`.
fn slice_dim(y: &FxValue, ffe_w: u32, mode: SlicerMode) -> FxValue {
    let diff = y.sub(&slicer_offset()).expect("narrow widths");
    match mode {
        SlicerMode::Truncating => {
            let stage = fmt(ffe_w, 0).with_modes(Quant::RndZero, Overflow::Sat);
            diff.cast(stage).cast(level_format())
        }
        SlicerMode::Rounding => diff.cast(level_format().with_modes(Quant::RndZero, Overflow::Sat)),
    }
}

/// 64-QAM slicer with the default truncating decision grid. `ffe_w` sets
/// the width of the saturating intermediate.
pub fn slice(y: &CFx, ffe_w: u32) -> Decision {
    slice_with(y, ffe_w, SlicerMode::Truncating)
}

pub fn slice_with(y: &CFx, ffe_w: u32, mode: SlicerMode) -> Decision {
    let r = slice_dim(&y.re(), ffe_w, mode);
    let i = slice_dim(&y.im(), ffe_w, mode);
    let off = slicer_offset();
    let sv_f = decision_format();
    let point = CFx::new(
        r.add(&off).expect("narrow").cast(sv_f),
        i.add(&off).expect("narrow").cast(sv_f),
    )
    .expect("same format");
    // data_f = r*64 + i*8 as a (6, 6) value, then read as unsigned 6 bits
    let k = fmt(8, 8);
    let data = r
        .mul(&FxValue::from_int(64, k))
        .and_then(|a| a.add(&i.mul(&FxValue::from_int(8, k))?))
        .expect("narrow")
        .cast(fmt(6, 6));
    let symbol = (data.to_int() & 0x3f) as u8;
    Decision { point, symbol, levels: (r.raw() as i32, i.raw() as i32) }
}

/// Constellation point of a 6-bit code in `format`. A level `l` in `-4..=3`
/// sits at `l/8 + 1/16`; see [`symbol_levels`] for the code layout.
pub fn symbol_point(symbol: u8, format: FxFormat) -> CFx {
    let (lr, li) = symbol_levels(symbol);
    let level = |l: i32| {
        FxValue::from_raw(l as i128, level_format())
            .expect("3-bit level")
            .add(&slicer_offset())
            .expect("narrow")
            .cast(format)
    };
    CFx::new(level(lr), level(li)).expect("same format")
}

/// Inverts the slicer's code `(8 * r + i) mod 64`: the low three bits carry
/// `i` as two's complement, and `r` is what remains after removing `i`.
pub fn symbol_levels(symbol: u8) -> (i32, i32) {
    let sext = |v: i32| if v & 4 != 0 { v - 8 } else { v };
    let s = (symbol & 0x3f) as i32;
    let i = sext(s & 7);
    let r = sext(((s - i) >> 3) & 7);
    (r, i)
}

/// Outcome of one decoder invocation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    pub symbol: u8,
    /// Equalizer output in `(FFE_W + 1, 1)`.
    pub y: CFx,
    /// Error in `(FFE_W, 0)`.
    pub e: CFx,
    /// Decision point written to `SV[0]`.
    pub sv0: CFx,
}

#[derive(Clone, Debug)]
pub struct Decoder {
    params: DecoderParams,
    state: DecoderState,
    mu_ffe: FxValue,
    mu_dfe: FxValue,
}

impl Decoder {
    pub fn new(params: DecoderParams) -> Result<Self, ParamsError> {
        params.validate()?;
        let state = DecoderState::zeroed(&params);
        Ok(Decoder { mu_ffe: params.mu_ffe(), mu_dfe: params.mu_dfe(), params, state })
    }

    pub fn params(&self) -> &DecoderParams {
        &self.params
    }

    pub fn state(&self) -> &DecoderState {
        &self.state
    }

    /// Replaces the state; array lengths and formats must match the params.
    pub fn set_state(&mut self, state: DecoderState) {
        assert_eq!(state.ffe_c.len(), self.params.nffe);
        assert_eq!(state.dfe_c.len(), self.params.ndfe);
        assert_eq!(state.x.len(), self.params.nffe);
        assert_eq!(state.sv.len(), self.params.ndfe);
        self.state = state;
    }

    pub fn reset(&mut self) {
        self.state = DecoderState::zeroed(&self.params);
    }

    /// Decision-directed step.
    pub fn step(&mut self, x_in: [CFx; 2]) -> StepResult {
        self.run(x_in, None)
    }

    /// Trained step: the error reference and `SV[0]` are forced to the
    /// constellation point of `true_symbol`. The returned symbol is still
    /// the slicer's decision.
    pub fn step_trained(&mut self, x_in: [CFx; 2], true_symbol: u8) -> StepResult {
        self.run(x_in, Some(true_symbol))
    }

    fn run(&mut self, x_in: [CFx; 2], train: Option<u8>) -> StepResult {
        let p = &self.params;
        let s = &mut self.state;
        let x_f = p.x_format();

        s.x[0] = x_in[0].cast(x_f);
        s.x[1] = x_in[1].cast(x_f);

        let acc_f = p.ffe_acc_format();
        let mut yffe = CFx::zero(acc_f);
        for (x, c) in s.x.iter().zip(&s.ffe_c) {
            yffe = yffe.add(&x.mul(c).expect("narrow")).expect("narrow").cast(acc_f);
        }
        let dacc_f = p.dfe_acc_format();
        let mut ydfe = CFx::zero(dacc_f);
        for (sv, c) in s.sv.iter().zip(&s.dfe_c) {
            ydfe = ydfe.add(&sv.mul(c).expect("narrow")).expect("narrow").cast(dacc_f);
        }
        let y = yffe.sub(&ydfe).expect("narrow").cast(acc_f);

        let decision = slice_with(&y, p.ffe_w, p.slicer);
        s.sv[0] = match train {
            Some(sym) => symbol_point(sym, decision_format()),
            None => decision.point,
        };
        let e = s.sv[0].sub(&y).expect("narrow").cast(p.error_format());

        let cf = p.ffe_coef_format();
        for (c, x) in s.ffe_c.iter_mut().zip(&s.x) {
            let delta = e.mul(&x.sign_conj()).and_then(|v| v.scale(&self.mu_ffe)).expect("narrow");
            *c = c.add(&delta).expect("narrow").cast(cf);
        }
        let df = p.dfe_coef_format();
        for (c, sv) in s.dfe_c.iter_mut().zip(&s.sv) {
            let delta = e.mul(&sv.sign_conj()).and_then(|v| v.scale(&self.mu_dfe)).expect("narrow");
            *c = c.sub(&delta).expect("narrow").cast(df);
        }

        // ffe_shift: two places, walking down from the top
        let n = s.x.len();
        let mut k = n as isize - 4;
        while k >= 0 {
            let k_ = k as usize;
            s.x[k_ + 3] = s.x[k_ + 1];
            s.x[k_ + 2] = s.x[k_];
            k -= 2;
        }
        // dfe_shift
        for k in (0..s.sv.len() - 1).rev() {
            s.sv[k + 1] = s.sv[k];
        }

        StepResult { symbol: decision.symbol, y, e, sv0: s.sv[0] }
    }
}
