//! Property checks for the explorer and width inference, shared by the
//! acceptance target and the per-module integration tests.

use hlslab::explorer::{
    area_estimate, pipeline_latency, total_latency, ArchConfig, AreaWeights, ArrayMapping, DesignModel, Item,
    LoopSpec, Pipeline, Unroll,
};
use hlslab::widths::{infer_widths, ExprKind, ExprNode, Interval, Leaf};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

/// Designs with up to seven loops, random barriers, register-mapped arrays.
pub fn design_strategy() -> impl Strategy<Value = DesignModel> {
    let lp = (1u64..40, 0u64..6, 0u64..6, 0u64..4, 0u64..4, prop::bool::weighted(0.85));
    (prop::collection::vec((lp, prop::bool::weighted(0.2)), 1..8), 0u64..6).prop_map(|(loops, overhead)| {
        let mut items = Vec::new();
        for (k, ((trips, mults, adds, ra, rb, mergeable), barrier)) in loops.into_iter().enumerate() {
            let mut l = LoopSpec::new(&format!("l{k}"), trips).with_ops(mults, adds);
            if ra > 0 {
                l = l.with_access("a", ra);
            }
            if rb > 0 {
                l = l.with_access("b", rb);
            }
            l.mergeable = mergeable;
            items.push(Item::Loop(l));
            if barrier {
                items.push(Item::Barrier);
            }
        }
        DesignModel {
            name: "random".into(),
            clock_ns: None,
            bits_per_output: 6,
            overhead_cycles: overhead,
            arrays: vec![
                ("a".into(), ArrayMapping::Registers { bits: 64 }),
                ("b".into(), ArrayMapping::Registers { bits: 32 }),
            ],
            items,
        }
    })
}

fn unroll_strategy() -> impl Strategy<Value = Unroll> {
    prop_oneof![4 => (1u64..9).prop_map(Unroll::Factor), 1 => Just(Unroll::Full)]
}

/// A design plus a valid configuration: pipelined loops are never merged.
pub fn design_and_config() -> impl Strategy<Value = (DesignModel, ArchConfig)> {
    design_strategy().prop_flat_map(|d| {
        let n = d.loops().count();
        let dir = (any::<bool>(), unroll_strategy(), prop::option::weighted(0.2, (1u64..4, 1u64..6)));
        (Just(d), prop::collection::vec(dir, n))
    })
    .prop_map(|(d, dirs)| {
        let mut cfg = ArchConfig::new("random");
        let labels: Vec<String> = d.loops().map(|l| l.label.clone()).collect();
        for (label, (merge, unroll, pipe)) in labels.iter().zip(dirs) {
            let e = cfg.entry(label);
            e.unroll = unroll;
            e.pipeline = pipe.map(|(ii, depth)| Pipeline { ii, depth });
            e.merge = merge && e.pipeline.is_none();
        }
        (d, cfg)
    })
}

/// `by == 0` means a full unroll.
fn wider(u: Unroll, by: u64) -> Unroll {
    match u {
        Unroll::Factor(_) if by == 0 => Unroll::Full,
        Unroll::Factor(f) => Unroll::Factor(f + by),
        Unroll::Full => Unroll::Full,
    }
}

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

/// Enabling merge on one more loop never lengthens the schedule.
pub fn check_merge_never_hurts(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(design_and_config(), any::<prop::sample::Index>()), |((d, cfg), idx)| {
            let labels: Vec<String> = d.loops().map(|l| l.label.clone()).collect();
            let label = &labels[idx.index(labels.len())];
            if cfg.directive(label).pipeline.is_some() {
                return Ok(());
            }
            let before = total_latency(&d, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let mut merged = cfg.clone();
            merged.entry(label).merge = true;
            let after = total_latency(&d, &merged).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(after <= before, "merging {label}: {before} -> {after}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Raising one loop's unroll factor never lengthens the schedule and never
/// shrinks the area.
pub fn check_unroll_monotone(cases: u32) -> Result<(), String> {
    let w = AreaWeights::default();
    runner(cases)
        .run(&(design_and_config(), any::<prop::sample::Index>(), 0u64..5), |((d, cfg), idx, by)| {
            let labels: Vec<String> = d.loops().map(|l| l.label.clone()).collect();
            let label = &labels[idx.index(labels.len())];
            let mut more = cfg.clone();
            more.entry(label).unroll = wider(cfg.directive(label).unroll, by);
            let (l0, l1) = (total_latency(&d, &cfg).unwrap(), total_latency(&d, &more).unwrap());
            let (a0, a1) = (area_estimate(&d, &cfg, &w), area_estimate(&d, &more, &w));
            prop_assert!(l1 <= l0, "unrolling {label}: latency {l0} -> {l1}");
            prop_assert!(a1 >= a0, "unrolling {label}: area {a0} -> {a1}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `(ceil(N/U) - 1) * II + D`, and `D` alone under a full unroll.
pub fn check_pipeline_formula(cases: u32) -> Result<(), String> {
    let d = DesignModel::qam();
    runner(cases)
        .run(&(1u64..500, 1u64..20, 1u64..8, 1u64..30), |(n, u, ii, depth)| {
            let l = LoopSpec::new("p", n);
            let p = Pipeline { ii, depth };
            let got = pipeline_latency(&l, Unroll::Factor(u), p, &d).unwrap();
            prop_assert_eq!(got, (n.div_ceil(u) - 1) * ii + depth);
            prop_assert_eq!(pipeline_latency(&l, Unroll::Full, p, &d).unwrap(), depth);
            prop_assert_eq!(pipeline_latency(&l, Unroll::Factor(n), p, &d).unwrap(), depth);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Trees of add/sub/mul/shift/cast over at most four leaves whose ranges
/// lie in [-32, 31].
pub fn small_tree() -> impl Strategy<Value = ExprNode> {
    let leaf = (-32i128..32, 0i128..12).prop_map(|(lo, span)| ExprNode::range(lo, (lo + span).min(31)));
    leaf.prop_recursive(3, 4, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprNode::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprNode::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprNode::mul(a, b)),
            (-3i32..4, inner.clone()).prop_map(|(k, a)| ExprNode::shift(k, a)),
            (2u32..12, any::<bool>(), inner).prop_map(|(w, s, a)| ExprNode::cast(w, s, a)),
        ]
    })
}

fn has_cast(e: &ExprNode) -> bool {
    matches!(e.kind, ExprKind::Cast { .. }) || e.children.iter().any(has_cast)
}

fn fits(v: i128, width: u32, signed: bool) -> bool {
    Interval::of_width(width, signed).contains(v)
}

/// Enumerates every leaf assignment of `e` and checks the inferred
/// interval and width of `e` and, recursively, of each subtree.
pub fn check_against_enumeration(e: &ExprNode) -> Result<(), TestCaseError> {
    let info = infer_widths(e).map_err(|err| TestCaseError::fail(err.to_string()))?;
    let leaves = e.leaf_intervals();
    let combos: i128 = leaves.iter().map(|iv| iv.hi - iv.lo + 1).product();
    if combos > 200_000 {
        return Ok(());
    }
    let (mut lo, mut hi) = (i128::MAX, i128::MIN);
    let mut idx: Vec<i128> = leaves.iter().map(|iv| iv.lo).collect();
    loop {
        let v = e.eval(&mut idx.iter().copied());
        prop_assert!(info.interval.contains(v), "{e}: {v} outside {}", info.interval);
        prop_assert!(fits(v, info.width, info.signed), "{e}: {v} does not fit {} bits", info.width);
        lo = lo.min(v);
        hi = hi.max(v);
        let mut k = 0;
        loop {
            if k == idx.len() {
                for c in &e.children {
                    check_against_enumeration(c)?;
                }
                if !has_cast(e) {
                    prop_assert_eq!(info.interval, Interval::new(lo, hi), "{} not tight", e);
                }
                return Ok(());
            }
            if idx[k] < leaves[k].hi {
                idx[k] += 1;
                break;
            }
            idx[k] = leaves[k].lo;
            k += 1;
        }
    }
}

pub fn check_widths_enumeration(cases: u32) -> Result<(), String> {
    runner(cases).run(&small_tree(), |e| check_against_enumeration(&e)).map_err(|e| e.to_string())
}

/// Width of the loop counter `0..=n-1` in the bundled example.
pub fn counter_width(n: i128) -> u32 {
    infer_widths(&ExprNode::leaf(Leaf::Range(Interval::new(0, n - 1)))).unwrap().width
}
