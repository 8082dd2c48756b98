//! C ABI for `hlslab`. Every entry point returns an [`HlsStatus`]; on a
//! non-zero status [`hlslab_last_error`] describes what went wrong. Strings
//! handed out by the library must be released with [`hlslab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hlslab::cli::{parse_arch, parse_design};
use hlslab::decoder::{Decoder, DecoderParams, SlicerMode, StepResult};
use hlslab::explorer::{explore, AreaWeights};
use hlslab::widths::{infer_widths, parse_expr};
use hlslab::{convert, CFx, FxFormat, Overflow, Quant, Rational};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HlsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Overflow = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HlsQuant {
    Rnd = 0,
    RndZero = 1,
    Trn = 2,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HlsOverflow {
    Sat = 0,
    Wrap = 1,
}

/// Decoder construction options.
#[repr(C)]
#[derive(Copy, Clone, Debug)]
pub struct HlsDecoderOptions {
    /// Coefficient word width, both filters; 0 keeps the default (10).
    pub coef_width: u32,
    /// Round coefficient updates instead of truncating them.
    pub round_updates: bool,
    /// Centered decision regions instead of the truncating slicer.
    pub rounding_slicer: bool,
}

/// Result of one decoder step. Values are raw mantissas: `y` in
/// `(FFE_W + 1, 1)`, `e` in `(FFE_W, 0)`, `sv0` in `(5, 1)`.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct HlsStep {
    pub symbol: u8,
    pub y_re: i64,
    pub y_im: i64,
    pub e_re: i64,
    pub e_im: i64,
    pub sv0_re: i64,
    pub sv0_im: i64,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct HlsReport {
    pub latency_cycles: u64,
    pub latency_ns: f64,
    pub symbol_rate_mbaud: f64,
    pub data_rate_mbps: f64,
    pub area: f64,
}

/// Opaque decoder handle.
pub struct HlsDecoder {
    inner: Decoder,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: HlsStatus, msg: impl Into<String>) -> HlsStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HlsStatus) -> HlsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(HlsStatus::Ok) => {
            set_error("");
            HlsStatus::Ok
        }
        Ok(s) => s,
        Err(_) => fail(HlsStatus::Internal, "internal error"),
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, HlsStatus> {
    if p.is_null() {
        return Err(fail(HlsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HlsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message for the last failing call on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hlslab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hlslab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Quantizes `num / den` into `(width, int_bits, signed)` and writes the
/// raw mantissa.
///
/// # Safety
/// `out_raw` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlslab_fx_convert(
    num: i64,
    den: i64,
    width: u32,
    int_bits: u32,
    is_signed: bool,
    quant: HlsQuant,
    overflow: HlsOverflow,
    out_raw: *mut i64,
) -> HlsStatus {
    guard(|| {
        if out_raw.is_null() {
            return fail(HlsStatus::NullPointer, "out_raw is null");
        }
        if den == 0 {
            return fail(HlsStatus::InvalidArgument, "zero denominator");
        }
        let f = match FxFormat::with_sign(width, int_bits, is_signed) {
            Ok(f) => f,
            Err(e) => return fail(HlsStatus::InvalidArgument, e.to_string()),
        };
        let q = match quant {
            HlsQuant::Rnd => Quant::Rnd,
            HlsQuant::RndZero => Quant::RndZero,
            HlsQuant::Trn => Quant::Trn,
        };
        let o = match overflow {
            HlsOverflow::Sat => Overflow::Sat,
            HlsOverflow::Wrap => Overflow::Wrap,
        };
        let v = convert(&Rational::new(num.into(), den.into()), f.with_modes(q, o));
        // an unsigned 64-bit mantissa may not fit
        match i64::try_from(v.raw()) {
            Ok(r) => {
                *out_raw = r;
                HlsStatus::Ok
            }
            Err(_) => fail(HlsStatus::Overflow, "mantissa does not fit in int64"),
        }
    })
}

/// Creates a decoder with zeroed state. `options` may be null for the
/// defaults.
///
/// # Safety
/// `options` must be null or valid for reads; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlslab_decoder_new(options: *const HlsDecoderOptions, out: *mut *mut HlsDecoder) -> HlsStatus {
    guard(|| {
        if out.is_null() {
            return fail(HlsStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let mut p = DecoderParams::default();
        if let Some(o) = options.as_ref() {
            if o.coef_width != 0 {
                p.ffe_c_w = o.coef_width;
                p.dfe_c_w = o.coef_width;
            }
            if o.round_updates {
                p.coef_quant = Quant::Rnd;
            }
            if o.rounding_slicer {
                p.slicer = SlicerMode::Rounding;
            }
        }
        match Decoder::new(p) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(HlsDecoder { inner: d }));
                HlsStatus::Ok
            }
            Err(e) => fail(HlsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Destroys a decoder. Null is ignored.
///
/// # Safety
/// `dec` must come from [`hlslab_decoder_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hlslab_decoder_free(dec: *mut HlsDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Zeroes the decoder state.
///
/// # Safety
/// `dec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hlslab_decoder_reset(dec: *mut HlsDecoder) -> HlsStatus {
    guard(|| match dec.as_mut() {
        Some(d) => {
            d.inner.reset();
            HlsStatus::Ok
        }
        None => fail(HlsStatus::NullPointer, "decoder is null"),
    })
}

fn raw(v: &CFx) -> (i64, i64) {
    (v.re().raw() as i64, v.im().raw() as i64)
}

/// One decoder invocation. `x` holds the two new input samples as raw
/// mantissas in `(X_W, 0)`: `{re0, im0, re1, im1}`, where sample 0 is
/// `x_in[0]`. `train` is the true symbol (0..63) or -1 for a
/// decision-directed step.
///
/// # Safety
/// `dec` must be a live handle, `x` valid for four reads, `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn hlslab_decoder_step(
    dec: *mut HlsDecoder,
    x: *const i64,
    train: i32,
    out: *mut HlsStep,
) -> HlsStatus {
    guard(|| {
        let (Some(d), false, false) = (dec.as_mut(), x.is_null(), out.is_null()) else {
            return fail(HlsStatus::NullPointer, "null argument");
        };
        let x = std::slice::from_raw_parts(x, 4);
        let f = d.inner.params().x_format();
        let (Some(a), Some(b)) =
            (CFx::from_raw(x[0].into(), x[1].into(), f), CFx::from_raw(x[2].into(), x[3].into(), f))
        else {
            return fail(HlsStatus::InvalidArgument, format!("input sample outside {f}"));
        };
        let r: StepResult = match train {
            -1 => d.inner.step([a, b]),
            0..=63 => d.inner.step_trained([a, b], train as u8),
            _ => return fail(HlsStatus::InvalidArgument, format!("training symbol {train} not in 0..63 or -1")),
        };
        let ((y_re, y_im), (e_re, e_im), (sv0_re, sv0_im)) = (raw(&r.y), raw(&r.e), raw(&r.sv0));
        *out = HlsStep { symbol: r.symbol, y_re, y_im, e_re, e_im, sv0_re, sv0_im };
        HlsStatus::Ok
    })
}

/// Text dump of the decoder state; free with [`hlslab_string_free`].
///
/// # Safety
/// `dec` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlslab_decoder_snapshot(dec: *const HlsDecoder, out: *mut *mut c_char) -> HlsStatus {
    guard(|| {
        let (Some(d), false) = (dec.as_ref(), out.is_null()) else {
            return fail(HlsStatus::NullPointer, "null argument");
        };
        *out = CString::new(d.inner.state().snapshot()).unwrap_or_default().into_raw();
        HlsStatus::Ok
    })
}

/// Evaluates one architecture against a design, both given as file text.
/// `clock_ns` is a decimal or `p/q` string, or null to use the design's
/// own clock.
///
/// # Safety
/// String arguments must be null-terminated; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlslab_explore(
    design_text: *const c_char,
    arch_text: *const c_char,
    clock_ns: *const c_char,
    out: *mut HlsReport,
) -> HlsStatus {
    guard(|| {
        if out.is_null() {
            return fail(HlsStatus::NullPointer, "out is null");
        }
        let (design_text, arch_text) = match (text(design_text, "design"), text(arch_text, "arch")) {
            (Ok(d), Ok(a)) => (d, a),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let design = match parse_design(design_text) {
            Ok(d) => d,
            Err(e) => return fail(HlsStatus::Parse, format!("design: {e}")),
        };
        let clock = if clock_ns.is_null() {
            design.clock_ns.clone()
        } else {
            let s = match text(clock_ns, "clock_ns") {
                Ok(s) => s,
                Err(st) => return st,
            };
            match s.trim().parse::<Rational>() {
                Ok(c) => Some(c),
                Err(_) => return fail(HlsStatus::InvalidArgument, format!("bad clock period `{s}`")),
            }
        };
        let Some(clock) = clock else {
            return fail(HlsStatus::InvalidArgument, "no clock period");
        };
        let cfg = match parse_arch(arch_text, "ffi", &design) {
            Ok(c) => c,
            Err(e) => return fail(HlsStatus::Parse, format!("arch: {e}")),
        };
        match explore(&design, &cfg, &clock, &AreaWeights::default()) {
            Ok(r) => {
                *out = HlsReport {
                    latency_cycles: r.latency_cycles,
                    latency_ns: r.latency_ns.to_f64(),
                    symbol_rate_mbaud: r.symbol_rate_mbaud,
                    data_rate_mbps: r.data_rate_mbps,
                    area: r.area,
                };
                HlsStatus::Ok
            }
            Err(e) => fail(HlsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Infers the root width of an expression in the widths S-expression
/// syntax.
///
/// # Safety
/// `expr` must be null-terminated; the out pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlslab_infer_width(expr: *const c_char, out_width: *mut u32, out_signed: *mut bool) -> HlsStatus {
    guard(|| {
        if out_width.is_null() || out_signed.is_null() {
            return fail(HlsStatus::NullPointer, "null out pointer");
        }
        let src = match text(expr, "expr") {
            Ok(s) => s,
            Err(st) => return st,
        };
        let e = match parse_expr(src) {
            Ok(e) => e,
            Err(e) => return fail(HlsStatus::Parse, e.to_string()),
        };
        match infer_widths(&e) {
            Ok(w) => {
                *out_width = w.width;
                *out_signed = w.signed;
                HlsStatus::Ok
            }
            Err(e) => fail(HlsStatus::Overflow, e.to_string()),
        }
    })
}
