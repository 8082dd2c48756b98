//! Acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line straight to stdout (not captured), so
//! `cargo test --test acceptance` shows the full scoreboard.

mod common;

use std::io::Write as _;
use std::path::PathBuf;

use hlslab::channel::{map_symbol, run_reference_trial, run_trial, ChannelConfig};
use hlslab::cli::{parse_arch, parse_design, parse_trial};
use hlslab::decoder::{slice_with, Decoder, DecoderParams, SlicerMode};
use hlslab::explorer::{area_estimate, explore, AreaWeights, DesignModel, DesignReport};
use hlslab::widths::{infer_widths, parse_expr};
use hlslab::{CFx, Rational};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

fn report(id: u32, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{tag} criterion {id:>2}: {detail}");
    let _ = out.flush();
}

fn note(id: u32, detail: &str) {
    let _ = writeln!(std::io::stdout().lock(), "     criterion {id:>2} (info): {detail}");
}

const ROWS: [&str; 4] = ["table1_none.arch", "table1_merge.arch", "table1_row3.arch", "table1_row4.arch"];

fn bundled() -> (DesignModel, Vec<DesignReport>) {
    let design = parse_design(&read("qam.design")).unwrap();
    let clock = Rational::from_int(10);
    let reports = ROWS
        .iter()
        .map(|f| {
            let cfg = parse_arch(&read(f), f, &design).unwrap();
            explore(&design, &cfg, &clock, &AreaWeights::default()).unwrap()
        })
        .collect();
    (design, reports)
}

#[test]
fn criterion_01_table1_latency() {
    let (_, reports) = bundled();
    let cycles: Vec<u64> = reports.iter().map(|r| r.latency_cycles).collect();
    let ns: Vec<String> = reports.iter().map(|r| r.latency_ns.to_string()).collect();
    let ok = cycles == [69, 35, 19, 15] && ns == ["690", "350", "190", "150"];
    report(1, ok, &format!("latency cycles {cycles:?}, ns {ns:?} (want 69/35/19/15, 690/350/190/150)"));
    assert!(ok);
}

#[test]
fn criterion_02_table1_data_rates() {
    let (_, reports) = bundled();
    let want = [8.6, 17.1, 31.5, 40.0];
    let got: Vec<f64> = reports.iter().map(|r| r.data_rate_mbps).collect();
    let ok = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 0.15);
    let shown: Vec<String> = got.iter().map(|g| format!("{g:.2}")).collect();
    report(2, ok, &format!("data rates {shown:?} Mbps vs {want:?} within 0.15"));
    assert!(ok);
}

#[test]
fn criterion_03_table1_area_ordering() {
    let (design, _) = bundled();
    let w = AreaWeights::default();
    let areas: Vec<f64> = ROWS
        .iter()
        .map(|f| area_estimate(&design, &parse_arch(&read(f), f, &design).unwrap(), &w))
        .collect();
    let ok = areas.windows(2).all(|p| p[0] < p[1]);
    let rel: Vec<String> = areas.iter().map(|a| format!("{:.3}", a / areas[0])).collect();
    report(3, ok, &format!("area none < merge < merge+U2 < merge+U2/U4: relative {rel:?}"));
    assert!(ok);
}

#[test]
fn criterion_04_throughput_goal() {
    let (_, reports) = bundled();
    let target = Rational::from_int(30);
    let flags: Vec<bool> = reports.iter().map(|r| r.meets_rate(&target, 6)).collect();
    let consistent = reports.iter().zip(&flags).all(|(r, &f)| f == (r.latency_cycles <= 20));
    let ok = consistent && flags[2] && !flags[1];
    report(4, ok, &format!("meets 30 Mbps at 100 MHz: {flags:?} (19-cycle passes, 35-cycle fails)"));
    assert!(ok);
}

#[test]
fn criterion_05_fixed_point_oracle() {
    let stats = common::sweep::run(8, 6);
    let ok = stats.mismatches == 0;
    report(
        5,
        ok,
        &format!("exhaustive W<=8 sweep: {} checks, {} mismatches", stats.checks, stats.mismatches),
    );
    assert!(ok, "{:#?}", stats.first);
}

#[test]
fn criterion_06_slicer_round_trip() {
    let p = DecoderParams::default();
    let mut bad = Vec::new();
    for mode in [SlicerMode::Truncating, SlicerMode::Rounding] {
        for s in 0..64u8 {
            let y = map_symbol(s, p.x_format()).unwrap().cast(p.ffe_acc_format());
            if slice_with(&y, p.ffe_w, mode).symbol != s {
                bad.push((mode, s));
            }
        }
    }
    report(6, bad.is_empty(), &format!("slice(map_symbol(s)) = s for all 64 codes, both slicer modes; {} failures", bad.len()));
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_07_decoder_golden_trace() {
    let golden = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/zero_10.golden")).unwrap();
    let mut dec = Decoder::new(DecoderParams::default()).unwrap();
    let z = CFx::zero(dec.params().x_format());
    let mut trace = String::new();
    let mut first = None;
    for n in 0..10 {
        let r = dec.step([z, z]);
        first.get_or_insert((r.symbol, r.sv0.to_string()));
        trace.push_str(&common::trace::render_step(n, r.symbol, &dec.state().snapshot()));
    }
    let (sym, sv0) = first.unwrap();
    let ok = sym == 55 && sv0 == "(-0.0625, -0.0625)" && trace == golden;
    report(7, ok, &format!("first symbol {sym}, SV[0] {sv0}, 10-step snapshot matches golden: {}", trace == golden));
    assert!(ok);
}

#[test]
fn criterion_08_convergence_scenario_s() {
    // calibration thresholds for this artifact: SER exactly 0 over the
    // measurement window and final block MSE below 2^-6
    let t = parse_trial(&read("scenario_s.trial")).unwrap();
    let cfg = &t.channel;
    assert_eq!(cfg.taps, ChannelConfig::scenario_s().taps);
    let mse_limit = 2f64.powi(-6);

    let reference = run_reference_trial(cfg, &t.params).unwrap();
    let ref_ok = reference.ser == 0.0;
    let fixed = run_trial(cfg, &t.params).unwrap();
    let fixed_mse = fixed.final_mse().unwrap();
    let fixed_ok = fixed.ser == 0.0 && fixed_mse < mse_limit;
    let ok = ref_ok && fixed_ok;
    report(
        8,
        ok,
        &format!(
            "scenario S: (a) float reference ser {:.4}; (b) fixed-point, coef rounding, ser {:.4}, final mse {:.3e} (< {:.3e})",
            reference.ser, fixed.ser, fixed_mse, mse_limit
        ),
    );
    for (label, params) in [
        ("rounding slicer, 10-bit coefs", DecoderParams { slicer: SlicerMode::Rounding, ..t.params.clone() }),
        (
            "rounding slicer, 11-bit coefs",
            DecoderParams { slicer: SlicerMode::Rounding, ffe_c_w: 11, dfe_c_w: 11, ..t.params.clone() },
        ),
    ] {
        let r = run_reference_trial(cfg, &params).unwrap();
        let f = run_trial(cfg, &params).unwrap();
        note(
            8,
            &format!(
                "{label}: reference ser {:.4}, fixed-point ser {:.4}, final mse {:.3e}",
                r.ser,
                f.ser,
                f.final_mse().unwrap()
            ),
        );
    }
    assert!(ok, "reference ser {}, fixed ser {} mse {}", reference.ser, fixed.ser, fixed_mse);
}

#[test]
fn criterion_09_explorer_properties() {
    let cases = 4000;
    let results = [
        ("merging never increases latency", common::props::check_merge_never_hurts(cases)),
        ("unrolling never increases latency or decreases area", common::props::check_unroll_monotone(cases)),
        ("pipeline latency (N-1)*II + D", common::props::check_pipeline_formula(cases)),
    ];
    let ok = results.iter().all(|(_, r)| r.is_ok());
    let summary: Vec<String> = results
        .iter()
        .map(|(name, r)| format!("{name}: {}", if r.is_ok() { "ok" } else { "violated" }))
        .collect();
    report(9, ok, &format!("{cases} random cases each; {}", summary.join("; ")));
    note(
        9,
        "random designs map arrays to registers; with a port-limited memory, unrolling can lengthen a loop \
         (N=3, 1 access, 1 port: U=1 -> 3 cycles, U=2 -> 4), see explorer_props.rs",
    );
    for (_, r) in &results {
        if let Err(e) = r {
            note(9, e);
        }
    }
    assert!(ok);
}

#[test]
fn criterion_10_width_inference() {
    let counter = infer_widths(&parse_expr(&read("fig2_counter.expr")).unwrap()).unwrap().width;
    let int17 = infer_widths(&parse_expr(&read("int17.expr")).unwrap()).unwrap().width;
    let enumeration = common::props::check_widths_enumeration(1000);
    let ok = counter == 10 && int17 == 17 && enumeration.is_ok();
    report(
        10,
        ok,
        &format!(
            "counter 0..1023 -> {counter} bits, int17 cast -> {int17} bits, enumeration over random trees: {}",
            if enumeration.is_ok() { "ok" } else { "violated" }
        ),
    );
    assert!(ok, "{enumeration:?}");
}
