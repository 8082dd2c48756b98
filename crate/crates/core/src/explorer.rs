//! Loop-level architecture exploration.
//!
//! A [`DesignModel`] is an ordered list of loops and barriers plus the
//! mapping of every array to registers or memory. An [`ArchConfig`] attaches
//! merge / unroll / pipeline directives to loops. The explorer reduces
//! scheduling to the arithmetic the hardware flow reports:
//!
//! * every loop body fits one clock cycle unless memory ports throttle it,
//! * adjacent merge-enabled loops (up to a barrier) run as one loop whose
//!   trip count is the largest member's,
//! * unrolling by `U` divides the trip count (rounding up) and multiplies
//!   per-iteration resource use,
//! * a pipelined loop takes `(trips - 1) * II + depth` cycles,
//! * a fixed number of overhead cycles covers the code between loops.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::ExploreError;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrayMapping {
    /// Split into registers; `bits` is the total state held.
    Registers { bits: u64 },
    /// `ports` accesses per cycle, each moving `pack` elements.
    Memory { ports: u32, pack: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSpec {
    pub label: String,
    pub trips: u64,
    pub mults: u64,
    pub adds: u64,
    /// Accesses per iteration, per array, in declaration order.
    pub accesses: Vec<(String, u64)>,
    pub mergeable: bool,
}

impl LoopSpec {
    pub fn new(label: &str, trips: u64) -> Self {
        LoopSpec {
            label: label.to_string(),
            trips,
            mults: 0,
            adds: 0,
            accesses: Vec::new(),
            mergeable: true,
        }
    }

    pub fn with_ops(mut self, mults: u64, adds: u64) -> Self {
        self.mults = mults;
        self.adds = adds;
        self
    }

    pub fn with_access(mut self, array: &str, count: u64) -> Self {
        self.accesses.push((array.to_string(), count));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Loop(LoopSpec),
    Barrier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignModel {
    pub name: String,
    pub clock_ns: Option<Rational>,
    pub bits_per_output: u32,
    pub overhead_cycles: u64,
    pub arrays: Vec<(String, ArrayMapping)>,
    pub items: Vec<Item>,
}

impl DesignModel {
    pub fn loops(&self) -> impl Iterator<Item = &LoopSpec> {
        self.items.iter().filter_map(|it| match it {
            Item::Loop(l) => Some(l),
            Item::Barrier => None,
        })
    }

    pub fn find_loop(&self, label: &str) -> Option<&LoopSpec> {
        self.loops().find(|l| l.label == label)
    }

    pub fn array(&self, name: &str) -> Option<&ArrayMapping> {
        self.arrays.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Total bits of all register-mapped arrays.
    pub fn register_bits(&self) -> u64 {
        self.arrays
            .iter()
            .map(|(_, m)| match m {
                ArrayMapping::Registers { bits } => *bits,
                ArrayMapping::Memory { .. } => 0,
            })
            .sum()
    }

    /// The six-loop QAM decoder with overhead 3 and a barrier where the
    /// slicer sits. All four arrays are small enough for registers.
    pub fn qam() -> Self {
        let regs = |bits| ArrayMapping::Registers { bits };
        DesignModel {
            name: "qam_decoder".into(),
            clock_ns: Some(Rational::from_int(10)),
            bits_per_output: 6,
            overhead_cycles: 3,
            arrays: vec![
                ("x".into(), regs(160)),
                ("ffe_c".into(), regs(160)),
                ("dfe_c".into(), regs(320)),
                ("sv".into(), regs(128)),
            ],
            items: vec![
                Item::Loop(LoopSpec::new("ffe", 8).with_ops(4, 4).with_access("x", 1).with_access("ffe_c", 1)),
                Item::Loop(LoopSpec::new("dfe", 16).with_ops(4, 4).with_access("sv", 1).with_access("dfe_c", 1)),
                Item::Barrier,
                Item::Loop(LoopSpec::new("ffe_adapt", 8).with_ops(0, 4).with_access("x", 1).with_access("ffe_c", 2)),
                Item::Loop(LoopSpec::new("dfe_adapt", 16).with_ops(0, 4).with_access("sv", 1).with_access("dfe_c", 2)),
                Item::Loop(LoopSpec::new("ffe_shift", 3).with_access("x", 4)),
                Item::Loop(LoopSpec::new("dfe_shift", 15).with_access("sv", 2)),
            ],
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Unroll {
    Factor(u64),
    Full,
}

impl Unroll {
    /// Copies of the body that actually run side by side for `trips`.
    pub fn width(self, trips: u64) -> u64 {
        match self {
            Unroll::Factor(u) => u.min(trips),
            Unroll::Full => trips,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Pipeline {
    pub ii: u64,
    pub depth: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LoopDirective {
    pub merge: bool,
    pub unroll: Unroll,
    pub pipeline: Option<Pipeline>,
}

impl Default for LoopDirective {
    fn default() -> Self {
        LoopDirective { merge: false, unroll: Unroll::Factor(1), pipeline: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArchConfig {
    pub name: String,
    pub directives: BTreeMap<String, LoopDirective>,
}

impl ArchConfig {
    pub fn new(name: &str) -> Self {
        ArchConfig { name: name.to_string(), directives: BTreeMap::new() }
    }

    pub fn directive(&self, label: &str) -> LoopDirective {
        self.directives.get(label).copied().unwrap_or_default()
    }

    pub fn entry(&mut self, label: &str) -> &mut LoopDirective {
        self.directives.entry(label.to_string()).or_default()
    }

    pub fn merge_all<'a>(mut self, labels: impl IntoIterator<Item = &'a str>) -> Self {
        for l in labels {
            self.entry(l).merge = true;
        }
        self
    }

    pub fn unroll(mut self, label: &str, u: Unroll) -> Self {
        self.entry(label).unroll = u;
        self
    }

    pub fn pipeline(mut self, label: &str, ii: u64, depth: u64) -> Self {
        self.entry(label).pipeline = Some(Pipeline { ii, depth });
        self
    }

    /// The four architectures compared for the QAM decoder, in the order
    /// none, all-merge, merge + U=2, merge + U=2/U=4.
    pub fn table1() -> Vec<ArchConfig> {
        let all = ["ffe", "dfe", "ffe_adapt", "dfe_adapt", "ffe_shift", "dfe_shift"];
        let u = Unroll::Factor;
        vec![
            ArchConfig::new("none"),
            ArchConfig::new("merge").merge_all(all),
            ArchConfig::new("merge_u2")
                .merge_all(all)
                .unroll("dfe", u(2))
                .unroll("dfe_adapt", u(2))
                .unroll("dfe_shift", u(2)),
            ArchConfig::new("merge_u2_u4")
                .merge_all(all)
                .unroll("dfe", u(2))
                .unroll("ffe_adapt", u(2))
                .unroll("dfe_adapt", u(4))
                .unroll("dfe_shift", u(4)),
        ]
    }

    /// Rejects directives naming unknown loops and zero-valued factors.
    pub fn validate(&self, design: &DesignModel) -> Result<(), ExploreError> {
        for (label, d) in &self.directives {
            if design.find_loop(label).is_none() {
                return Err(ExploreError::UnknownLoop(label.clone()));
            }
            let invalid = |reason: &str| ExploreError::InvalidDirective { label: label.clone(), reason: reason.into() };
            if d.unroll == Unroll::Factor(0) {
                return Err(invalid("unroll factor must be >= 1"));
            }
            if let Some(p) = d.pipeline {
                if p.ii == 0 {
                    return Err(invalid("initiation interval must be >= 1"));
                }
                if p.depth == 0 {
                    return Err(invalid("pipeline depth must be >= 1"));
                }
            }
        }
        Ok(())
    }
}

/// `ceil(N / U)`; a full unroll leaves one trip.
pub fn effective_trip(lp: &LoopSpec, unroll: Unroll) -> u64 {
    match unroll {
        Unroll::Full => 1,
        Unroll::Factor(u) => lp.trips.div_ceil(u.max(1)),
    }
}

/// Cycles per (unrolled) iteration: the worst memory-port bottleneck, at
/// least one. Register-mapped arrays never constrain.
pub fn iteration_cycles(lp: &LoopSpec, unroll: Unroll, design: &DesignModel) -> Result<u64, ExploreError> {
    let width = unroll.width(lp.trips);
    let mut cycles = 1;
    for (array, count) in &lp.accesses {
        match design.array(array) {
            None => {
                return Err(ExploreError::UnknownArray { loop_label: lp.label.clone(), array: array.clone() });
            }
            Some(ArrayMapping::Registers { .. }) => {}
            Some(ArrayMapping::Memory { ports, pack }) => {
                let bandwidth = (*ports as u64 * *pack as u64).max(1);
                cycles = cycles.max((count * width).div_ceil(bandwidth));
            }
        }
    }
    Ok(cycles)
}

/// `(trips - 1) * II + depth`, where the interval cannot beat the memory
/// bottleneck of one iteration.
pub fn pipeline_latency(
    lp: &LoopSpec,
    unroll: Unroll,
    pipe: Pipeline,
    design: &DesignModel,
) -> Result<u64, ExploreError> {
    let ii = pipe.ii.max(iteration_cycles(lp, unroll, design)?);
    Ok((effective_trip(lp, unroll) - 1) * ii + pipe.depth)
}

/// Indices (into `design.loops()`) of loops executed together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub members: Vec<usize>,
}

/// Maximal runs of consecutive merge-enabled loops, split at barriers;
/// every other loop is its own group.
pub fn merge_groups(design: &DesignModel, config: &ArchConfig) -> Vec<Group> {
    let mut groups = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    let mut idx = 0;
    for item in &design.items {
        match item {
            Item::Barrier => {
                if !run.is_empty() {
                    groups.push(Group { members: std::mem::take(&mut run) });
                }
            }
            Item::Loop(lp) => {
                if lp.mergeable && config.directive(&lp.label).merge {
                    run.push(idx);
                } else {
                    if !run.is_empty() {
                        groups.push(Group { members: std::mem::take(&mut run) });
                    }
                    groups.push(Group { members: vec![idx] });
                }
                idx += 1;
            }
        }
    }
    if !run.is_empty() {
        groups.push(Group { members: run });
    }
    groups
}

/// Cycles for one group: the slowest member, or the pipelined latency of a
/// pipelined singleton.
pub fn group_latency(
    design: &DesignModel,
    group: &Group,
    config: &ArchConfig,
) -> Result<u64, ExploreError> {
    let loops: Vec<&LoopSpec> = design.loops().collect();
    let mut worst = 0;
    for &i in &group.members {
        let lp = loops[i];
        let d = config.directive(&lp.label);
        let cycles = match d.pipeline {
            Some(_) if group.members.len() > 1 => {
                return Err(ExploreError::PipelineInMergedGroup(lp.label.clone()));
            }
            Some(p) => pipeline_latency(lp, d.unroll, p, design)?,
            None => effective_trip(lp, d.unroll) * iteration_cycles(lp, d.unroll, design)?,
        };
        worst = worst.max(cycles);
    }
    Ok(worst)
}

/// Overhead plus the sum of group latencies.
pub fn total_latency(design: &DesignModel, config: &ArchConfig) -> Result<u64, ExploreError> {
    config.validate(design)?;
    let mut total = design.overhead_cycles;
    for g in merge_groups(design, config) {
        total += group_latency(design, &g, config)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rates {
    pub latency_ns: Rational,
    pub mbaud: f64,
    pub mbps: f64,
}

/// One output per `latency_cycles` at `clock_ns` per cycle.
pub fn data_rate(latency_cycles: u64, clock_ns: &Rational, bits_per_output: u32) -> Rates {
    let latency_ns = Rational::from_int(latency_cycles as i128) * clock_ns.clone();
    let ns = latency_ns.to_f64();
    let mbaud = 1000.0 / ns;
    Rates { latency_ns, mbaud, mbps: bits_per_output as f64 * mbaud }
}

/// Relative cost of one functional unit or one register bit.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AreaWeights {
    pub multiplier: f64,
    pub adder: f64,
    pub register_bit: f64,
}

impl Default for AreaWeights {
    fn default() -> Self {
        AreaWeights { multiplier: 1.0, adder: 0.15, register_bit: 0.02 }
    }
}

/// Functional units a group keeps busy at once: every member's body,
/// replicated by its unroll width.
fn group_units(design: &DesignModel, group: &Group, config: &ArchConfig) -> (u64, u64) {
    let loops: Vec<&LoopSpec> = design.loops().collect();
    group.members.iter().fold((0, 0), |(m, a), &i| {
        let lp = loops[i];
        let w = config.directive(&lp.label).unroll.width(lp.trips);
        (m + lp.mults * w, a + lp.adds * w)
    })
}

/// Units are shared across groups (they run one after another), so the
/// design needs the per-type maximum over groups. Register-mapped state is
/// added on top.
pub fn area_estimate(design: &DesignModel, config: &ArchConfig, weights: &AreaWeights) -> f64 {
    let (mut mults, mut adds) = (0, 0);
    for g in merge_groups(design, config) {
        let (m, a) = group_units(design, &g, config);
        mults = mults.max(m);
        adds = adds.max(a);
    }
    weights.multiplier * mults as f64 + weights.adder * adds as f64 + weights.register_bit * design.register_bits() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupReport {
    pub loops: Vec<String>,
    pub effective_trips: Vec<u64>,
    pub start_cycle: u64,
    pub cycles: u64,
    pub pipelined: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignReport {
    pub config_id: String,
    pub latency_cycles: u64,
    pub latency_ns: Rational,
    pub symbol_rate_mbaud: f64,
    pub data_rate_mbps: f64,
    pub area: f64,
    /// Area relative to a chosen baseline; 1.0 until normalized.
    pub relative_area: f64,
    pub overhead_cycles: u64,
    pub groups: Vec<GroupReport>,
}

impl DesignReport {
    /// True when the design delivers at least `target_mbps`, compared
    /// exactly: `latency_ns * target <= bits * 1000`.
    pub fn meets_rate(&self, target_mbps: &Rational, bits_per_output: u32) -> bool {
        let lhs = &self.latency_ns * target_mbps;
        lhs <= Rational::from_int(bits_per_output as i128 * 1000)
    }

    /// Text schedule: one line per group with its cycle window.
    pub fn schedule(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "schedule for {}:", self.config_id);
        for g in &self.groups {
            let members: Vec<String> = g
                .loops
                .iter()
                .zip(&g.effective_trips)
                .map(|(l, t)| format!("{l}x{t}"))
                .collect();
            let tag = if g.pipelined { " (pipelined)" } else { "" };
            let _ = writeln!(
                out,
                "  [{:>4}, {:>4})  {:>4} cycles  {}{}",
                g.start_cycle,
                g.start_cycle + g.cycles,
                g.cycles,
                members.join(" + "),
                tag
            );
        }
        let end = self.groups.last().map(|g| g.start_cycle + g.cycles).unwrap_or(0);
        let _ = writeln!(out, "  [{:>4}, {:>4})  {:>4} cycles  overhead", end, end + self.overhead_cycles, self.overhead_cycles);
        out
    }
}

/// Full evaluation of one configuration.
pub fn explore(
    design: &DesignModel,
    config: &ArchConfig,
    clock_ns: &Rational,
    weights: &AreaWeights,
) -> Result<DesignReport, ExploreError> {
    if clock_ns.signum() <= 0 {
        return Err(ExploreError::InvalidClock);
    }
    config.validate(design)?;
    let loops: Vec<&LoopSpec> = design.loops().collect();
    let mut groups = Vec::new();
    let mut start = 0;
    for g in merge_groups(design, config) {
        let cycles = group_latency(design, &g, config)?;
        let members: Vec<&LoopSpec> = g.members.iter().map(|&i| loops[i]).collect();
        groups.push(GroupReport {
            loops: members.iter().map(|l| l.label.clone()).collect(),
            effective_trips: members.iter().map(|l| effective_trip(l, config.directive(&l.label).unroll)).collect(),
            start_cycle: start,
            cycles,
            pipelined: members.iter().any(|l| config.directive(&l.label).pipeline.is_some()),
        });
        start += cycles;
    }
    let latency_cycles = start + design.overhead_cycles;
    let rates = data_rate(latency_cycles, clock_ns, design.bits_per_output);
    Ok(DesignReport {
        config_id: config.name.clone(),
        latency_cycles,
        latency_ns: rates.latency_ns,
        symbol_rate_mbaud: rates.mbaud,
        data_rate_mbps: rates.mbps,
        area: area_estimate(design, config, weights),
        relative_area: 1.0,
        overhead_cycles: design.overhead_cycles,
        groups,
    })
}

/// Divides every area by the smallest one in the batch.
pub fn normalize_areas(reports: &mut [DesignReport]) {
    let base = reports.iter().map(|r| r.area).fold(f64::INFINITY, f64::min);
    for r in reports.iter_mut() {
        r.relative_area = if base > 0.0 && base.is_finite() { r.area / base } else { 1.0 };
    }
}
