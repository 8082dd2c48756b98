//! Bit-width inference by interval propagation over integer expression trees.
//!
//! Expressions are written in prefix form:
//!
//! ```text
//! # a = (int17)(a + b*c)
//! (cast 17 (add a:int32 (mul b:int32 c:int32)))
//! ```
//!
//! Leaves are `int<W>`, `uint<W>` or an explicit range `lo..hi`, optionally
//! prefixed with `name:`. Operators are `add`, `sub`, `mul` (two or more
//! operands for `add`/`mul`), `shift <k>` (left for positive `k`,
//! arithmetic right for negative), `cast <W>` and `ucast <W>`.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{FxError, ParseError};

pub const MAX_WIDTH: u32 = 64;

/// Closed integer interval.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: i128,
    pub hi: i128,
}

impl Interval {
    pub fn new(lo: i128, hi: i128) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    /// Full range of a `width`-bit integer.
    pub fn of_width(width: u32, signed: bool) -> Self {
        if signed {
            let h = 1i128 << (width - 1);
            Interval { lo: -h, hi: h - 1 }
        } else {
            Interval { lo: 0, hi: (1i128 << width) - 1 }
        }
    }

    pub fn contains(&self, v: i128) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn within(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Smallest width holding every value of `iv`; at least 1.
pub fn width_of(iv: &Interval, signed: bool) -> u32 {
    let bits = |v: i128| 128 - (v.max(0) as u128).leading_zeros();
    if signed {
        // -2^(w-1) <= lo  <=>  -lo - 1 < 2^(w-1)
        bits(iv.hi).max(bits(-(iv.lo + 1))) + 1
    } else {
        bits(iv.hi).max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Range(Interval),
    Int { width: u32, signed: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Leaf { name: Option<String>, leaf: Leaf },
    Add,
    Sub,
    Mul,
    Shift(i32),
    Cast { width: u32, signed: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprNode {
    pub kind: ExprKind,
    pub children: Vec<ExprNode>,
}

#[allow(clippy::should_implement_trait)]
impl ExprNode {
    pub fn leaf(leaf: Leaf) -> Self {
        ExprNode { kind: ExprKind::Leaf { name: None, leaf }, children: vec![] }
    }

    pub fn named(name: &str, leaf: Leaf) -> Self {
        ExprNode { kind: ExprKind::Leaf { name: Some(name.into()), leaf }, children: vec![] }
    }

    pub fn range(lo: i128, hi: i128) -> Self {
        Self::leaf(Leaf::Range(Interval::new(lo, hi)))
    }

    pub fn int(width: u32, signed: bool) -> Self {
        Self::leaf(Leaf::Int { width, signed })
    }

    pub fn op(kind: ExprKind, children: Vec<ExprNode>) -> Self {
        ExprNode { kind, children }
    }

    pub fn add(a: ExprNode, b: ExprNode) -> Self {
        Self::op(ExprKind::Add, vec![a, b])
    }

    pub fn sub(a: ExprNode, b: ExprNode) -> Self {
        Self::op(ExprKind::Sub, vec![a, b])
    }

    pub fn mul(a: ExprNode, b: ExprNode) -> Self {
        Self::op(ExprKind::Mul, vec![a, b])
    }

    pub fn shift(k: i32, a: ExprNode) -> Self {
        Self::op(ExprKind::Shift(k), vec![a])
    }

    pub fn cast(width: u32, signed: bool, a: ExprNode) -> Self {
        Self::op(ExprKind::Cast { width, signed }, vec![a])
    }

    /// Evaluates with concrete leaf values taken in left-to-right order.
    pub fn eval(&self, leaves: &mut impl Iterator<Item = i128>) -> i128 {
        let mut kids = self.children.iter().map(|c| c.eval(leaves));
        match &self.kind {
            ExprKind::Leaf { .. } => leaves.next().expect("leaf value"),
            ExprKind::Add => kids.sum(),
            ExprKind::Sub => {
                let a = kids.next().expect("operand");
                a - kids.next().expect("operand")
            }
            ExprKind::Mul => kids.product(),
            ExprKind::Shift(k) => {
                let a = kids.next().expect("operand");
                if *k >= 0 { a << k } else { a >> -k }
            }
            ExprKind::Cast { width, signed } => wrap(kids.next().expect("operand"), *width, *signed),
        }
    }

    /// Leaf intervals in left-to-right order.
    pub fn leaf_intervals(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Interval>) {
        match &self.kind {
            ExprKind::Leaf { leaf, .. } => out.push(leaf_interval(leaf)),
            _ => self.children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    fn label(&self) -> String {
        match &self.kind {
            ExprKind::Leaf { name, leaf } => {
                let l = match leaf {
                    Leaf::Range(iv) => format!("{}..{}", iv.lo, iv.hi),
                    Leaf::Int { width, signed: true } => format!("int{width}"),
                    Leaf::Int { width, signed: false } => format!("uint{width}"),
                };
                match name {
                    Some(n) => format!("{n}:{l}"),
                    None => l,
                }
            }
            ExprKind::Add => "add".into(),
            ExprKind::Sub => "sub".into(),
            ExprKind::Mul => "mul".into(),
            ExprKind::Shift(k) => format!("shift {k}"),
            ExprKind::Cast { width, signed: true } => format!("cast {width}"),
            ExprKind::Cast { width, signed: false } => format!("ucast {width}"),
        }
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let ExprKind::Leaf { .. } = self.kind {
            return f.write_str(&self.label());
        }
        write!(f, "({}", self.label())?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

fn wrap(v: i128, width: u32, signed: bool) -> i128 {
    let m = 1i128 << width;
    let r = v.rem_euclid(m);
    if signed && r >= m / 2 { r - m } else { r }
}

fn leaf_interval(leaf: &Leaf) -> Interval {
    match leaf {
        Leaf::Range(iv) => *iv,
        Leaf::Int { width, signed } => Interval::of_width(*width, *signed),
    }
}

/// Inference result for one node, mirroring the input tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthInfo {
    pub label: String,
    pub interval: Interval,
    pub signed: bool,
    pub width: u32,
    pub children: Vec<WidthInfo>,
}

impl WidthInfo {
    /// Indented per-node listing, preorder.
    pub fn report(&self) -> String {
        let mut out = format!("{:<36} {:>10}  {}\n", "node", "width", "interval");
        self.write_rows(0, &mut out);
        out
    }

    fn write_rows(&self, depth: usize, out: &mut String) {
        let label = format!("{}{}", "  ".repeat(depth), self.label);
        let w = format!("{}{}", if self.signed { "int" } else { "uint" }, self.width);
        let _ = writeln!(out, "{label:<36} {w:>10}  {}", self.interval);
        for c in &self.children {
            c.write_rows(depth + 1, out);
        }
    }
}

fn overflow() -> FxError {
    FxError::WidthOverflow { needed: MAX_WIDTH + 1 }
}

fn check_width(width: u32) -> Result<(), FxError> {
    if width == 0 {
        return Err(FxError::InvalidFormat { width, int_bits: 0 });
    }
    if width > MAX_WIDTH {
        return Err(FxError::WidthOverflow { needed: width });
    }
    Ok(())
}

/// Propagates intervals bottom-up and sizes every node. A node is signed
/// when any operand is signed or its interval reaches below zero. A cast
/// keeps its operand's interval when it fits and otherwise takes the whole
/// range of the target type, since wrapping can land anywhere in it.
pub fn infer_widths(root: &ExprNode) -> Result<WidthInfo, FxError> {
    let children = root.children.iter().map(infer_widths).collect::<Result<Vec<_>, _>>()?;
    let any_signed = children.iter().any(|c| c.signed);
    let ivs: Vec<Interval> = children.iter().map(|c| c.interval).collect();
    let arity = |n: usize| {
        if ivs.len() < n {
            Err(FxError::InvalidFormat { width: 0, int_bits: 0 })
        } else {
            Ok(())
        }
    };
    let (interval, signed, forced) = match &root.kind {
        ExprKind::Leaf { leaf, .. } => {
            if let Leaf::Int { width, .. } = leaf {
                check_width(*width)?;
            }
            let iv = leaf_interval(leaf);
            let signed = match leaf {
                Leaf::Int { signed, .. } => *signed,
                Leaf::Range(iv) => iv.lo < 0,
            };
            (iv, signed, None)
        }
        ExprKind::Add => {
            arity(2)?;
            let lo = ivs.iter().try_fold(0i128, |s, iv| s.checked_add(iv.lo)).ok_or_else(overflow)?;
            let hi = ivs.iter().try_fold(0i128, |s, iv| s.checked_add(iv.hi)).ok_or_else(overflow)?;
            (Interval::new(lo, hi), any_signed || lo < 0, None)
        }
        ExprKind::Sub => {
            arity(2)?;
            let (a, b) = (ivs[0], ivs[1]);
            let lo = a.lo.checked_sub(b.hi).ok_or_else(overflow)?;
            let hi = a.hi.checked_sub(b.lo).ok_or_else(overflow)?;
            (Interval::new(lo, hi), any_signed || lo < 0, None)
        }
        ExprKind::Mul => {
            arity(2)?;
            let mut acc = ivs[0];
            for b in &ivs[1..] {
                let cands = [
                    acc.lo.checked_mul(b.lo),
                    acc.lo.checked_mul(b.hi),
                    acc.hi.checked_mul(b.lo),
                    acc.hi.checked_mul(b.hi),
                ];
                let vals = cands.iter().map(|c| c.ok_or_else(overflow)).collect::<Result<Vec<_>, _>>()?;
                acc = Interval::new(*vals.iter().min().unwrap(), *vals.iter().max().unwrap());
            }
            (acc, any_signed || acc.lo < 0, None)
        }
        ExprKind::Shift(k) => {
            arity(1)?;
            let a = ivs[0];
            let iv = if *k >= 0 {
                if *k as u32 > MAX_WIDTH {
                    return Err(overflow());
                }
                let m = 1i128 << k;
                Interval::new(a.lo.checked_mul(m).ok_or_else(overflow)?, a.hi.checked_mul(m).ok_or_else(overflow)?)
            } else {
                let s = (-(*k as i64)).min(127) as u32;
                Interval::new(a.lo >> s, a.hi >> s)
            };
            (iv, any_signed || iv.lo < 0, None)
        }
        ExprKind::Cast { width, signed } => {
            arity(1)?;
            check_width(*width)?;
            let full = Interval::of_width(*width, *signed);
            let iv = if ivs[0].within(&full) { ivs[0] } else { full };
            (iv, *signed, Some(*width))
        }
    };
    let width = match forced {
        Some(w) => w,
        None => width_of(&interval, signed),
    };
    if width > MAX_WIDTH {
        return Err(FxError::WidthOverflow { needed: width });
    }
    Ok(WidthInfo { label: root.label(), interval, signed, width, children })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(Tok, usize)> {
    let mut toks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let spaced = line.replace('(', " ( ").replace(')', " ) ");
        for t in spaced.split_whitespace() {
            let tok = match t {
                "(" => Tok::Open,
                ")" => Tok::Close,
                a => Tok::Atom(a.to_string()),
            };
            toks.push((tok, i + 1));
        }
    }
    toks
}

fn parse_leaf(atom: &str, line: usize) -> Result<ExprNode, ParseError> {
    let (name, body) = match atom.split_once(':') {
        Some((n, b)) => {
            if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(ParseError::new(line, format!("bad leaf name in `{atom}`")));
            }
            (Some(n.to_string()), b)
        }
        None => (None, atom),
    };
    let bad = || ParseError::new(line, format!("bad leaf `{atom}`"));
    let leaf = if let Some((lo, hi)) = body.split_once("..") {
        let lo: i128 = lo.parse().map_err(|_| bad())?;
        let hi: i128 = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(ParseError::new(line, format!("empty range `{body}`")));
        }
        let limit = 1i128 << MAX_WIDTH;
        if lo < -limit / 2 || hi >= limit {
            return Err(ParseError::new(line, format!("range `{body}` exceeds {MAX_WIDTH} bits")));
        }
        Leaf::Range(Interval::new(lo, hi))
    } else {
        let (signed, digits) = if let Some(d) = body.strip_prefix("uint") {
            (false, d)
        } else if let Some(d) = body.strip_prefix("int") {
            (true, d)
        } else {
            return Err(bad());
        };
        let width: u32 = digits.parse().map_err(|_| bad())?;
        if width == 0 || width > MAX_WIDTH {
            return Err(ParseError::new(line, format!("width {width} outside 1..={MAX_WIDTH}")));
        }
        Leaf::Int { width, signed }
    };
    Ok(ExprNode { kind: ExprKind::Leaf { name, leaf }, children: vec![] })
}

fn parse_node(toks: &[(Tok, usize)], pos: &mut usize) -> Result<ExprNode, ParseError> {
    let last_line = toks.last().map(|t| t.1).unwrap_or(0);
    let (tok, line) = toks.get(*pos).cloned().ok_or_else(|| ParseError::new(last_line, "unexpected end of expression"))?;
    *pos += 1;
    match tok {
        Tok::Close => Err(ParseError::new(line, "unexpected `)`")),
        Tok::Atom(a) => parse_leaf(&a, line),
        Tok::Open => {
            let op = match toks.get(*pos) {
                Some((Tok::Atom(a), _)) => a.clone(),
                _ => return Err(ParseError::new(line, "expected an operator after `(`")),
            };
            *pos += 1;
            let mut int_arg = |what: &str| -> Result<i64, ParseError> {
                match toks.get(*pos) {
                    Some((Tok::Atom(a), l)) => {
                        *pos += 1;
                        a.parse().map_err(|_| ParseError::new(*l, format!("{what} expects an integer, got `{a}`")))
                    }
                    _ => Err(ParseError::new(line, format!("{what} expects an integer argument"))),
                }
            };
            let (kind, min, max) = match op.as_str() {
                "add" => (ExprKind::Add, 2, usize::MAX),
                "mul" => (ExprKind::Mul, 2, usize::MAX),
                "sub" => (ExprKind::Sub, 2, 2),
                "shift" => {
                    let k = int_arg("shift")?;
                    let k = i32::try_from(k).map_err(|_| ParseError::new(line, "shift amount too large"))?;
                    (ExprKind::Shift(k), 1, 1)
                }
                "cast" | "ucast" => {
                    let w = int_arg(&op)?;
                    if !(1..=MAX_WIDTH as i64).contains(&w) {
                        return Err(ParseError::new(line, format!("cast width {w} outside 1..={MAX_WIDTH}")));
                    }
                    (ExprKind::Cast { width: w as u32, signed: op == "cast" }, 1, 1)
                }
                other => return Err(ParseError::new(line, format!("unknown operator `{other}`"))),
            };
            let mut children = Vec::new();
            loop {
                match toks.get(*pos) {
                    Some((Tok::Close, _)) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_node(toks, pos)?),
                    None => return Err(ParseError::new(last_line, format!("unclosed `({op}`"))),
                }
            }
            if children.len() < min || children.len() > max {
                return Err(ParseError::new(line, format!("`{op}` given {} operands", children.len())));
            }
            Ok(ExprNode { kind, children })
        }
    }
}

/// Parses one prefix expression; `#` starts a comment.
pub fn parse_expr(text: &str) -> Result<ExprNode, ParseError> {
    let toks = tokenize(text);
    if toks.is_empty() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut pos = 0;
    let node = parse_node(&toks, &mut pos)?;
    if let Some((_, line)) = toks.get(pos) {
        return Err(ParseError::new(*line, "trailing input after expression"));
    }
    Ok(node)
}
