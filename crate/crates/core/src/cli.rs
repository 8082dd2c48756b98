//! Text front end: parsers and renderers for the design, architecture and
//! trial files, and the three commands behind the `hlslab` binary.
//!
//! All files are line oriented with `#` comments.
//!
//! ```text
//! # design file
//! design qam_decoder
//! clock_ns 10
//! bits_per_output 6
//! overhead_cycles 3
//! array x registers bits=160
//! array buf memory ports=1 pack=2
//! loop ffe trips=8 mults=4 adds=4 access x=1 ffe_c=1
//! barrier
//!
//! # arch file
//! merge ffe dfe
//! unroll dfe 2
//! pipeline ffe_shift ii=1 depth=2
//!
//! # trial file
//! taps 1.05,0; 1.05,0; 0.05,0; 0.05,0
//! noise_sigma 0
//! seed 2004
//! train 4000
//! measure 10000
//! require_converged true
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::channel::{run_trial, ChannelConfig, Tap, TrialMetrics};
use crate::decoder::{DecoderParams, SlicerMode};
use crate::error::ParseError;
use crate::explorer::{
    explore, normalize_areas, ArchConfig, AreaWeights, ArrayMapping, DesignModel, DesignReport, Item, LoopSpec,
    Pipeline, Unroll,
};
use crate::fixedpoint::Quant;
use crate::rational::Rational;
use crate::widths::{infer_widths, parse_expr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
}

/// What a command prints and how it exits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INPUT }
    }
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let words: Vec<&str> = l.split('#').next().unwrap_or("").split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn ident(s: &str, what: &str, line: usize) -> Result<String, ParseError> {
    if is_ident(s) {
        Ok(s.to_string())
    } else {
        Err(ParseError::new(line, format!("invalid {what} `{s}`")))
    }
}

fn num<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T, ParseError> {
    s.parse().map_err(|_| ParseError::new(line, format!("invalid {what} `{s}`")))
}

fn key_value(word: &str, line: usize) -> Result<(&str, &str), ParseError> {
    word.split_once('=')
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .ok_or_else(|| ParseError::new(line, format!("expected key=value, got `{word}`")))
}

fn arity(words: &[&str], n: usize, line: usize) -> Result<(), ParseError> {
    if words.len() != n + 1 {
        return Err(ParseError::new(line, format!("`{}` takes {n} argument(s)", words[0])));
    }
    Ok(())
}

fn parse_bool(s: &str, line: usize) -> Result<bool, ParseError> {
    match s {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(ParseError::new(line, format!("invalid boolean `{s}`"))),
    }
}

fn parse_loop(words: &[&str], line: usize) -> Result<LoopSpec, ParseError> {
    if words.len() < 2 {
        return Err(ParseError::new(line, "`loop` needs a label"));
    }
    let mut lp = LoopSpec::new(&ident(words[1], "loop label", line)?, 0);
    let mut seen = BTreeSet::new();
    let mut rest = words[2..].iter();
    for w in rest.by_ref() {
        if *w == "access" {
            break;
        }
        let (k, v) = key_value(w, line)?;
        if !seen.insert(k) {
            return Err(ParseError::new(line, format!("`{k}` given twice")));
        }
        match k {
            "trips" => lp.trips = num(v, "trip count", line)?,
            "mults" => lp.mults = num(v, "multiplier count", line)?,
            "adds" => lp.adds = num(v, "adder count", line)?,
            "mergeable" => lp.mergeable = parse_bool(v, line)?,
            _ => return Err(ParseError::new(line, format!("unknown loop key `{k}`"))),
        }
    }
    if !seen.contains("trips") {
        return Err(ParseError::new(line, format!("loop `{}` has no trips=", lp.label)));
    }
    if lp.trips == 0 {
        return Err(ParseError::new(line, "trip count must be >= 1"));
    }
    for w in rest {
        let (array, count) = key_value(w, line)?;
        let array = ident(array, "array name", line)?;
        if lp.accesses.iter().any(|(a, _)| *a == array) {
            return Err(ParseError::new(line, format!("array `{array}` listed twice")));
        }
        lp.accesses.push((array, num(count, "access count", line)?));
    }
    Ok(lp)
}

fn parse_array(words: &[&str], line: usize) -> Result<(String, ArrayMapping), ParseError> {
    if words.len() < 3 {
        return Err(ParseError::new(line, "`array` needs a name and `registers` or `memory`"));
    }
    let name = ident(words[1], "array name", line)?;
    let mut keys = std::collections::BTreeMap::new();
    for w in &words[3..] {
        let (k, v) = key_value(w, line)?;
        if keys.insert(k, v).is_some() {
            return Err(ParseError::new(line, format!("`{k}` given twice")));
        }
    }
    let allowed: &[&str] = match words[2] {
        "registers" => &["bits"],
        "memory" => &["ports", "pack"],
        other => return Err(ParseError::new(line, format!("unknown array mapping `{other}`"))),
    };
    if let Some(k) = keys.keys().find(|k| !allowed.contains(k)) {
        return Err(ParseError::new(line, format!("unknown key `{k}` for {} array", words[2])));
    }
    let mapping = if words[2] == "registers" {
        ArrayMapping::Registers { bits: keys.get("bits").map(|v| num(v, "bit count", line)).transpose()?.unwrap_or(0) }
    } else {
        let get = |k: &str| -> Result<u32, ParseError> {
            let v = keys.get(k).ok_or_else(|| ParseError::new(line, format!("memory array needs {k}=")))?;
            let n: u32 = num(v, k, line)?;
            if n == 0 {
                return Err(ParseError::new(line, format!("{k} must be >= 1")));
            }
            Ok(n)
        };
        ArrayMapping::Memory { ports: get("ports")?, pack: get("pack")? }
    };
    Ok((name, mapping))
}

/// Parses a design file. Arrays may be declared before or after the loops
/// that use them.
pub fn parse_design(text: &str) -> Result<DesignModel, ParseError> {
    let mut design = DesignModel {
        name: String::new(),
        clock_ns: None,
        bits_per_output: 1,
        overhead_cycles: 0,
        arrays: Vec::new(),
        items: Vec::new(),
    };
    let mut seen = BTreeSet::new();
    let mut loop_lines = Vec::new();
    for (line, words) in lines(text) {
        let once = |seen: &mut BTreeSet<&'static str>, key: &'static str| {
            if seen.insert(key) {
                Ok(())
            } else {
                Err(ParseError::new(line, format!("`{key}` given twice")))
            }
        };
        match words[0] {
            "design" => {
                once(&mut seen, "design")?;
                arity(&words, 1, line)?;
                design.name = ident(words[1], "design name", line)?;
            }
            "clock_ns" => {
                once(&mut seen, "clock_ns")?;
                arity(&words, 1, line)?;
                let c: Rational = num(words[1], "clock period", line)?;
                if c.signum() <= 0 {
                    return Err(ParseError::new(line, "clock period must be positive"));
                }
                design.clock_ns = Some(c);
            }
            "bits_per_output" => {
                once(&mut seen, "bits_per_output")?;
                arity(&words, 1, line)?;
                design.bits_per_output = num(words[1], "bit count", line)?;
                if design.bits_per_output == 0 {
                    return Err(ParseError::new(line, "bits_per_output must be >= 1"));
                }
            }
            "overhead_cycles" => {
                once(&mut seen, "overhead_cycles")?;
                arity(&words, 1, line)?;
                design.overhead_cycles = num(words[1], "cycle count", line)?;
            }
            "array" => {
                let (name, mapping) = parse_array(&words, line)?;
                if design.array(&name).is_some() {
                    return Err(ParseError::new(line, format!("duplicate array `{name}`")));
                }
                design.arrays.push((name, mapping));
            }
            "loop" => {
                let lp = parse_loop(&words, line)?;
                if design.find_loop(&lp.label).is_some() {
                    return Err(ParseError::new(line, format!("duplicate loop label `{}`", lp.label)));
                }
                loop_lines.push(line);
                design.items.push(Item::Loop(lp));
            }
            "barrier" => {
                arity(&words, 0, line)?;
                design.items.push(Item::Barrier);
            }
            other => return Err(ParseError::new(line, format!("unknown directive `{other}`"))),
        }
    }
    if design.loops().next().is_none() {
        return Err(ParseError::new(0, "no loops"));
    }
    for (lp, line) in design.loops().zip(&loop_lines) {
        if let Some((a, _)) = lp.accesses.iter().find(|(a, _)| design.array(a).is_none()) {
            return Err(ParseError::new(*line, format!("loop `{}` accesses undeclared array `{a}`", lp.label)));
        }
    }
    Ok(design)
}

pub fn render_design(design: &DesignModel) -> String {
    let mut out = String::new();
    if !design.name.is_empty() {
        let _ = writeln!(out, "design {}", design.name);
    }
    if let Some(c) = &design.clock_ns {
        let _ = writeln!(out, "clock_ns {c}");
    }
    let _ = writeln!(out, "bits_per_output {}", design.bits_per_output);
    let _ = writeln!(out, "overhead_cycles {}", design.overhead_cycles);
    for (name, m) in &design.arrays {
        match m {
            ArrayMapping::Registers { bits } => {
                let _ = writeln!(out, "array {name} registers bits={bits}");
            }
            ArrayMapping::Memory { ports, pack } => {
                let _ = writeln!(out, "array {name} memory ports={ports} pack={pack}");
            }
        }
    }
    for item in &design.items {
        match item {
            Item::Barrier => out.push_str("barrier\n"),
            Item::Loop(lp) => {
                let _ = write!(out, "loop {} trips={} mults={} adds={}", lp.label, lp.trips, lp.mults, lp.adds);
                if !lp.mergeable {
                    out.push_str(" mergeable=false");
                }
                if !lp.accesses.is_empty() {
                    out.push_str(" access");
                    for (a, n) in &lp.accesses {
                        let _ = write!(out, " {a}={n}");
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Parses an architecture file against `design`; every label must name one
/// of its loops. `name` becomes the configuration id.
pub fn parse_arch(text: &str, name: &str, design: &DesignModel) -> Result<ArchConfig, ParseError> {
    let mut cfg = ArchConfig::new(name);
    let mut unrolled = BTreeSet::new();
    let mut pipelined = BTreeSet::new();
    let known = |label: &str, line: usize| -> Result<String, ParseError> {
        if design.find_loop(label).is_none() {
            return Err(ParseError::new(line, format!("unknown loop `{label}`")));
        }
        Ok(label.to_string())
    };
    for (line, words) in lines(text) {
        match words[0] {
            "merge" => {
                if words.len() < 2 {
                    return Err(ParseError::new(line, "`merge` needs at least one loop"));
                }
                for w in &words[1..] {
                    let l = known(w, line)?;
                    cfg.entry(&l).merge = true;
                }
            }
            "unroll" => {
                arity(&words, 2, line)?;
                let l = known(words[1], line)?;
                if !unrolled.insert(l.clone()) {
                    return Err(ParseError::new(line, format!("loop `{l}` unrolled twice")));
                }
                let u = if words[2] == "full" {
                    Unroll::Full
                } else {
                    let u: u64 = num(words[2], "unroll factor", line)?;
                    if u == 0 {
                        return Err(ParseError::new(line, "unroll factor must be >= 1"));
                    }
                    Unroll::Factor(u)
                };
                cfg.entry(&l).unroll = u;
            }
            "pipeline" => {
                if words.len() < 2 {
                    return Err(ParseError::new(line, "`pipeline` needs a loop"));
                }
                let l = known(words[1], line)?;
                if !pipelined.insert(l.clone()) {
                    return Err(ParseError::new(line, format!("loop `{l}` pipelined twice")));
                }
                let (mut ii, mut depth) = (None, None);
                for w in &words[2..] {
                    let (k, v) = key_value(w, line)?;
                    let slot = match k {
                        "ii" => &mut ii,
                        "depth" => &mut depth,
                        _ => return Err(ParseError::new(line, format!("unknown pipeline key `{k}`"))),
                    };
                    let n: u64 = num(v, k, line)?;
                    if n == 0 {
                        return Err(ParseError::new(line, format!("{k} must be >= 1")));
                    }
                    if slot.replace(n).is_some() {
                        return Err(ParseError::new(line, format!("`{k}` given twice")));
                    }
                }
                let (Some(ii), Some(depth)) = (ii, depth) else {
                    return Err(ParseError::new(line, "pipeline needs ii= and depth="));
                };
                cfg.entry(&l).pipeline = Some(Pipeline { ii, depth });
            }
            other => return Err(ParseError::new(line, format!("unknown directive `{other}`"))),
        }
    }
    Ok(cfg)
}

pub fn render_arch(cfg: &ArchConfig) -> String {
    let mut out = String::new();
    let merged: Vec<&str> = cfg.directives.iter().filter(|(_, d)| d.merge).map(|(l, _)| l.as_str()).collect();
    if !merged.is_empty() {
        let _ = writeln!(out, "merge {}", merged.join(" "));
    }
    for (l, d) in &cfg.directives {
        match d.unroll {
            Unroll::Factor(1) => {}
            Unroll::Factor(u) => {
                let _ = writeln!(out, "unroll {l} {u}");
            }
            Unroll::Full => {
                let _ = writeln!(out, "unroll {l} full");
            }
        }
        if let Some(p) = d.pipeline {
            let _ = writeln!(out, "pipeline {l} ii={} depth={}", p.ii, p.depth);
        }
    }
    out
}

/// Parsed trial file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialSpec {
    pub channel: ChannelConfig,
    pub params: DecoderParams,
    pub require_converged: bool,
}

fn parse_taps(words: &[&str], line: usize) -> Result<Vec<Tap>, ParseError> {
    let joined = words.join("");
    let mut taps = Vec::new();
    for part in joined.split(';').filter(|p| !p.is_empty()) {
        let (re, im) = part.split_once(',').unwrap_or((part, "0"));
        taps.push(Tap { re: num(re, "tap", line)?, im: num(im, "tap", line)? });
    }
    if taps.is_empty() {
        return Err(ParseError::new(line, "`taps` needs at least one tap"));
    }
    Ok(taps)
}

/// Parses a trial file. Besides the channel keys it accepts `block_size`,
/// `max_ser`, `coef_quant trn|rnd`, `coef_w <bits>` and
/// `slicer truncating|rounding` to vary the decoder.
pub fn parse_trial(text: &str) -> Result<TrialSpec, ParseError> {
    let mut t = TrialSpec::default();
    let mut seen = BTreeSet::new();
    for (line, words) in lines(text) {
        let key = words[0];
        if !seen.insert(key.to_string()) {
            return Err(ParseError::new(line, format!("`{key}` given twice")));
        }
        if key != "taps" {
            arity(&words, 1, line)?;
        }
        let v = words.get(1).copied().unwrap_or("");
        match key {
            "taps" => t.channel.taps = parse_taps(&words[1..], line)?,
            "noise_sigma" => {
                let s: Rational = num(v, "noise sigma", line)?;
                if s.is_negative() {
                    return Err(ParseError::new(line, "noise sigma must be nonnegative"));
                }
                t.channel.noise_sigma = s;
            }
            "seed" => t.channel.seed = num(v, "seed", line)?,
            "train" => t.channel.n_train = num(v, "training length", line)?,
            "measure" => t.channel.n_measure = num(v, "measurement length", line)?,
            "require_converged" => t.require_converged = parse_bool(v, line)?,
            "block_size" => {
                t.channel.block_size = num(v, "block size", line)?;
                if t.channel.block_size == 0 {
                    return Err(ParseError::new(line, "block size must be >= 1"));
                }
            }
            "max_ser" => {
                let m: f64 = num(v, "SER threshold", line)?;
                if !(0.0..=1.0).contains(&m) {
                    return Err(ParseError::new(line, "max_ser must lie in [0, 1]"));
                }
                t.channel.max_ser = m;
            }
            "coef_quant" => {
                t.params.coef_quant = match v {
                    "trn" => Quant::Trn,
                    "rnd" => Quant::Rnd,
                    _ => return Err(ParseError::new(line, format!("coef_quant must be trn or rnd, got `{v}`"))),
                }
            }
            "coef_w" => {
                let w: u32 = num(v, "coefficient width", line)?;
                t.params.ffe_c_w = w;
                t.params.dfe_c_w = w;
            }
            "slicer" => {
                t.params.slicer = match v {
                    "truncating" => SlicerMode::Truncating,
                    "rounding" => SlicerMode::Rounding,
                    _ => return Err(ParseError::new(line, format!("slicer must be truncating or rounding, got `{v}`"))),
                }
            }
            other => return Err(ParseError::new(line, format!("unknown key `{other}`"))),
        }
    }
    t.params.validate().map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(t)
}

pub fn render_trial(t: &TrialSpec) -> String {
    let c = &t.channel;
    let taps: Vec<String> = c.taps.iter().map(|tap| format!("{},{}", tap.re, tap.im)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "taps {}", taps.join("; "));
    let _ = writeln!(out, "noise_sigma {}", c.noise_sigma);
    let _ = writeln!(out, "seed {}", c.seed);
    let _ = writeln!(out, "train {}", c.n_train);
    let _ = writeln!(out, "measure {}", c.n_measure);
    let _ = writeln!(out, "block_size {}", c.block_size);
    let _ = writeln!(out, "max_ser {}", c.max_ser);
    let _ = writeln!(out, "require_converged {}", t.require_converged);
    let q = if t.params.coef_quant == Quant::Rnd { "rnd" } else { "trn" };
    let _ = writeln!(out, "coef_quant {q}");
    if t.params.ffe_c_w == t.params.dfe_c_w {
        let _ = writeln!(out, "coef_w {}", t.params.ffe_c_w);
    }
    let s = match t.params.slicer {
        SlicerMode::Truncating => "truncating",
        SlicerMode::Rounding => "rounding",
    };
    let _ = writeln!(out, "slicer {s}");
    out
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn with_path(path: &Path, e: ParseError) -> String {
    format!("{}: {e}", path.display())
}

fn config_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "config".into())
}

/// One row per report. Rates carry two decimals, relative area three.
pub fn render_reports(reports: &[DesignReport], format: OutputFormat) -> String {
    let mut out = String::new();
    let header = ["config_id", "latency_cycles", "latency_ns", "mbaud", "mbps", "rel_area"];
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.config_id.clone(),
                r.latency_cycles.to_string(),
                r.latency_ns.to_string(),
                format!("{:.2}", r.symbol_rate_mbaud),
                format!("{:.2}", r.data_rate_mbps),
                format!("{:.3}", r.relative_area),
            ]
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            let _ = writeln!(out, "{}", header.join(","));
            for row in &rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        OutputFormat::Table => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let parts: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                    .collect();
                parts.join("  ")
            };
            let _ = writeln!(out, "{}", line(header.to_vec()));
            for row in &rows {
                let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
            }
        }
    }
    out
}

/// Evaluates every architecture file against the design. Relative area is
/// normalized to the smallest design in the batch.
pub fn cmd_explore(design_path: &Path, arch_paths: &[&Path], clock: Option<Rational>, format: OutputFormat) -> Outcome {
    let text = match read(design_path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(e),
    };
    let design = match parse_design(&text) {
        Ok(d) => d,
        Err(e) => return Outcome::input_error(with_path(design_path, e)),
    };
    let Some(clock) = clock.or_else(|| design.clock_ns.clone()) else {
        return Outcome::input_error("no clock period: give --clock or clock_ns in the design file");
    };
    if arch_paths.is_empty() {
        return Outcome::input_error("no architecture files given");
    }
    let weights = AreaWeights::default();
    let mut reports = Vec::new();
    for p in arch_paths {
        let text = match read(p) {
            Ok(t) => t,
            Err(e) => return Outcome::input_error(e),
        };
        let cfg = match parse_arch(&text, &config_id(p), &design) {
            Ok(c) => c,
            Err(e) => return Outcome::input_error(with_path(p, e)),
        };
        match explore(&design, &cfg, &clock, &weights) {
            Ok(r) => reports.push(r),
            Err(e) => return Outcome::input_error(format!("{}: {e}", p.display())),
        }
    }
    normalize_areas(&mut reports);
    Outcome::ok(render_reports(&reports, format))
}

fn render_trial_report(t: &TrialSpec, m: &TrialMetrics, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => m.render_csv(),
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "trial seed={} train={} measure={} coef_quant={} slicer={:?}",
                t.channel.seed,
                t.channel.n_train,
                t.channel.n_measure,
                t.params.coef_quant.name(),
                t.params.slicer
            );
            out.push_str(&m.render_table());
            out
        }
    }
}

/// Runs the trial described by the file. Exits with
/// [`EXIT_NOT_CONVERGED`] when the file demands convergence and the trial
/// misses it.
pub fn cmd_simulate(trial_path: &Path, format: OutputFormat) -> Outcome {
    let text = match read(trial_path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(e),
    };
    let t = match parse_trial(&text) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(with_path(trial_path, e)),
    };
    let m = match run_trial(&t.channel, &t.params) {
        Ok(m) => m,
        Err(e) => return Outcome::input_error(format!("{}: {e}", trial_path.display())),
    };
    let mut out = Outcome::ok(render_trial_report(&t, &m, format));
    if t.require_converged && !m.converged {
        out.code = EXIT_NOT_CONVERGED;
        out.stderr = format!("trial did not converge: ser {:.6} > max_ser {}\n", m.ser, t.channel.max_ser);
    }
    out
}

/// Prints inferred widths for every node of the expression in the file.
pub fn cmd_widths(expr_path: &Path) -> Outcome {
    let text = match read(expr_path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(e),
    };
    let expr = match parse_expr(&text) {
        Ok(e) => e,
        Err(e) => return Outcome::input_error(with_path(expr_path, e)),
    };
    match infer_widths(&expr) {
        Ok(info) => Outcome::ok(info.report()),
        Err(e) => Outcome::input_error(format!("{}: {e}", expr_path.display())),
    }
}
