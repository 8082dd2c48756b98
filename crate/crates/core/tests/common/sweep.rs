//! Exhaustive comparison of the fixed-point library against integer-ratio
//! arithmetic for every format up to a given width.

use hlslab::{convert, FxFormat, FxValue, Overflow, Quant, Rational};

pub const QUANTS: [Quant; 3] = [Quant::Rnd, Quant::RndZero, Quant::Trn];
pub const OVERFLOWS: [Overflow; 2] = [Overflow::Sat, Overflow::Wrap];

/// Every `(W, I, signed)` with `1 <= W <= max_w`, `0 <= I <= W`, in TRN/WRAP.
pub fn formats(max_w: u32) -> Vec<FxFormat> {
    let mut out = Vec::new();
    for w in 1..=max_w {
        for i in 0..=w {
            for signed in [true, false] {
                out.push(FxFormat::with_sign(w, i, signed).unwrap());
            }
        }
    }
    out
}

pub fn raws(f: &FxFormat) -> std::ops::RangeInclusive<i128> {
    let w = f.width();
    if f.is_signed() {
        -(1i128 << (w - 1))..=(1i128 << (w - 1)) - 1
    } else {
        0..=(1i128 << w) - 1
    }
}

/// Value as an exact ratio `(n, d)` with `d > 0`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub n: i128,
    pub d: i128,
}

impl Ratio {
    pub fn of(v: &FxValue) -> Ratio {
        Ratio { n: v.raw(), d: 1i128 << v.format().frac_bits() }
    }

    pub fn add(self, o: Ratio) -> Ratio {
        Ratio { n: self.n * o.d + o.n * self.d, d: self.d * o.d }
    }

    pub fn neg(self) -> Ratio {
        Ratio { n: -self.n, d: self.d }
    }

    pub fn mul(self, o: Ratio) -> Ratio {
        Ratio { n: self.n * o.n, d: self.d * o.d }
    }

    pub fn eq_value(self, o: Ratio) -> bool {
        self.n * o.d == o.n * self.d
    }
}

/// Target mantissa for `x` in `(W, I, signed)` under the given modes,
/// straight from the definitions.
pub fn oracle_raw(x: Ratio, w: u32, i: u32, signed: bool, q: Quant, o: Overflow) -> i128 {
    // x / lsb = n * 2^F / d
    let num = x.n * (1i128 << (w - i));
    let fl = num.div_euclid(x.d);
    let rem = num - fl * x.d; // 0 <= rem < d
    let q = if rem == 0 {
        fl
    } else {
        match q {
            Quant::Trn => fl,
            _ if 2 * rem < x.d => fl,
            _ if 2 * rem > x.d => fl + 1,
            Quant::Rnd => fl + 1,
            Quant::RndZero => {
                if fl >= 0 {
                    fl
                } else {
                    fl + 1
                }
            }
        }
    };
    let (lo, hi) = if signed { (-(1i128 << (w - 1)), (1i128 << (w - 1)) - 1) } else { (0, (1i128 << w) - 1) };
    match o {
        Overflow::Sat => q.clamp(lo, hi),
        Overflow::Wrap => (q - lo).rem_euclid(1i128 << w) + lo,
    }
}

#[derive(Debug, Default)]
pub struct SweepStats {
    pub checks: u64,
    pub mismatches: u64,
    pub first: Vec<String>,
}

impl SweepStats {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.mismatches += 1;
            if self.first.len() < 10 {
                self.first.push(what());
            }
        }
    }
}

/// Expected `(I, F, signed)` of a full-precision sum or difference.
fn sum_format(a: &FxFormat, b: &FxFormat, is_sub: bool) -> (u32, u32, bool) {
    let f = a.frac_bits().max(b.frac_bits());
    if !a.is_signed() && !b.is_signed() {
        return (a.int_bits().max(b.int_bits()) + 1, f, is_sub);
    }
    let ia = a.int_bits() + u32::from(!a.is_signed());
    let ib = b.int_bits() + u32::from(!b.is_signed());
    (ia.max(ib) + 1, f, true)
}

fn product_format(a: &FxFormat, b: &FxFormat) -> (u32, u32, bool) {
    let f = a.frac_bits() + b.frac_bits();
    if a.is_signed() == b.is_signed() {
        return (a.int_bits() + b.int_bits(), f, a.is_signed());
    }
    let ia = a.int_bits() + u32::from(!a.is_signed());
    let ib = b.int_bits() + u32::from(!b.is_signed());
    (ia + ib, f, true)
}

fn shape(v: &FxValue) -> (u32, u32, bool) {
    let f = v.format();
    (f.int_bits(), f.frac_bits(), f.is_signed())
}

/// add/sub/mul of every raw pair of `a` and `b`.
pub fn binary_ops(a: &FxFormat, b: &FxFormat, stats: &mut SweepStats) {
    for ra in raws(a) {
        let va = FxValue::from_raw(ra, *a).unwrap();
        let xa = Ratio::of(&va);
        for rb in raws(b) {
            let vb = FxValue::from_raw(rb, *b).unwrap();
            let xb = Ratio::of(&vb);
            let s = va.add(&vb).unwrap();
            stats.record(
                Ratio::of(&s).eq_value(xa.add(xb)) && shape(&s) == sum_format(a, b, false),
                || format!("add {va} {vb} -> {s}"),
            );
            let d = va.sub(&vb).unwrap();
            stats.record(
                Ratio::of(&d).eq_value(xa.add(xb.neg())) && shape(&d) == sum_format(a, b, true),
                || format!("sub {va} {vb} -> {d}"),
            );
            let p = va.mul(&vb).unwrap();
            stats.record(
                Ratio::of(&p).eq_value(xa.mul(xb)) && shape(&p) == product_format(a, b),
                || format!("mul {va} {vb} -> {p}"),
            );
        }
    }
}

/// Shifts by `0..=W+1` of every raw value of `f` in every mode pair.
pub fn shifts(f: &FxFormat, stats: &mut SweepStats) {
    let (w, i, s) = (f.width(), f.int_bits(), f.is_signed());
    for o in OVERFLOWS {
        let fo = f.with_modes(Quant::Trn, o);
        for r in raws(f) {
            let v = FxValue::from_raw(r, fo).unwrap();
            let x = Ratio::of(&v);
            for n in 0..=w + 1 {
                let scale = Ratio { n: 1, d: 1i128 << n };
                let right = v.shift_right(n);
                let want = oracle_raw(x.mul(scale), w, i, s, Quant::Trn, o);
                stats.record(right.raw() == want && right.format() == fo, || format!("{v} >> {n} -> {right}"));
                let left = v.shift_left(n);
                let want = oracle_raw(x.mul(Ratio { n: 1i128 << n, d: 1 }), w, i, s, Quant::Trn, o);
                stats.record(left.raw() == want && left.format() == fo, || format!("{v} << {n} -> {left}"));
            }
        }
    }
}

/// Values on a grid three bits finer than `f`, spanning twice its range,
/// plus thirds and fifths of its LSB.
pub fn convert_inputs(f: &FxFormat) -> Vec<Ratio> {
    let fine = 1i128 << (f.frac_bits() + 3);
    let span = 1i128 << (f.int_bits() + 1);
    let mut out: Vec<Ratio> = (-span * fine..=span * fine).map(|n| Ratio { n, d: fine }).collect();
    let lsb_d = 1i128 << f.frac_bits();
    for k in [3i128, 5] {
        let lim = 2 * span * lsb_d * k;
        out.extend((-lim..=lim).step_by(1).map(|n| Ratio { n, d: lsb_d * k }));
    }
    out
}

/// `convert` of every input from [`convert_inputs`] in every mode pair, and
/// `cast` of every raw value of `from` into `f`.
pub fn conversions(f: &FxFormat, stats: &mut SweepStats) {
    let inputs = convert_inputs(f);
    let (w, i, s) = (f.width(), f.int_bits(), f.is_signed());
    for q in QUANTS {
        for o in OVERFLOWS {
            let ff = f.with_modes(q, o);
            for x in &inputs {
                let got = convert(&Rational::new(x.n, x.d), ff);
                let want = oracle_raw(*x, w, i, s, q, o);
                stats.record(got.raw() == want && got.format() == ff, || {
                    format!("convert {}/{} into {ff} -> {} (want raw {want})", x.n, x.d, got.raw())
                });
            }
        }
    }
}

pub fn casts(from: &FxFormat, to: &FxFormat, stats: &mut SweepStats) {
    let (w, i, s) = (to.width(), to.int_bits(), to.is_signed());
    for q in QUANTS {
        for o in OVERFLOWS {
            let tf = to.with_modes(q, o);
            for r in raws(from) {
                let v = FxValue::from_raw(r, *from).unwrap();
                let got = v.cast(tf);
                let want = oracle_raw(Ratio::of(&v), w, i, s, q, o);
                stats.record(got.raw() == want, || format!("cast {v} into {tf} -> {got}"));
            }
        }
    }
}

/// Full sweep: conversions and shifts for every format with `W <= max_w`;
/// add/sub/mul for every same-format pair, and for every pair of formats
/// with `W <= pair_w`; casts between every pair of formats with
/// `W <= pair_w`, and from every format into every same-width format.
pub fn run(max_w: u32, pair_w: u32) -> SweepStats {
    let mut stats = SweepStats::default();
    let all = formats(max_w);
    for f in &all {
        conversions(f, &mut stats);
        shifts(f, &mut stats);
        binary_ops(f, f, &mut stats);
        for t in all.iter().filter(|t| t.width() == f.width()) {
            casts(f, t, &mut stats);
        }
    }
    let small = formats(pair_w);
    for a in &small {
        for b in &small {
            if a != b {
                binary_ops(a, b, &mut stats);
                casts(a, b, &mut stats);
            }
        }
    }
    stats
}
