//! Labeled F-paths.
//!
//! A step is either a rise `(a; 1)` with `a >= 0`, or a down step
//! `(a; b_1, .., b_k)` with `a >= 1` and every `b_i <= 0`; it moves by
//! `(a, b_1 + .. + b_k)` and has semilength `k`. A path starts at the origin
//! and never goes below `y = x`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the semilength for [`enumerate_lf`].
pub const LF_GUARD: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledStep {
    pub a: u32,
    pub parts: Vec<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepClass {
    North,
    Up,
    DownPure,
    DownZeroTailed,
    DownComplex,
}

impl StepClass {
    pub fn is_down(self) -> bool {
        matches!(self, StepClass::DownPure | StepClass::DownZeroTailed | StepClass::DownComplex)
    }
}

impl LabeledStep {
    pub fn rise(a: u32) -> Self {
        LabeledStep { a, parts: vec![1] }
    }

    pub fn north() -> Self {
        LabeledStep::rise(0)
    }

    pub fn down(a: u32, parts: Vec<i32>) -> Self {
        LabeledStep { a, parts }
    }

    pub fn is_rise(&self) -> bool {
        self.parts == [1]
    }

    /// `b = b_1 + .. + b_k`.
    pub fn b(&self) -> i64 {
        self.parts.iter().map(|&p| p as i64).sum()
    }

    /// `k`, the number of label parts.
    pub fn semilength(&self) -> usize {
        self.parts.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.parts.is_empty() {
            return Err(Error::BadLabel("a label needs at least one part".into()));
        }
        if self.is_rise() {
            return Ok(());
        }
        if self.parts.iter().any(|&p| p > 0) {
            if self.parts.len() == 1 {
                return Err(Error::StepNotInF { a: self.a, b: self.b() });
            }
            return Err(Error::BadLabel(format!("down-step parts must be <= 0, got {:?}", self.parts)));
        }
        if self.a == 0 {
            return Err(Error::StepNotInF { a: 0, b: self.b() });
        }
        Ok(())
    }

    pub fn classify(&self) -> StepClass {
        classify_step(self)
    }
}

pub fn classify_step(s: &LabeledStep) -> StepClass {
    if s.is_rise() {
        return if s.a == 0 { StepClass::North } else { StepClass::Up };
    }
    match s.parts.len() {
        1 => StepClass::DownPure,
        _ if s.parts[1..].iter().all(|&p| p == 0) => StepClass::DownZeroTailed,
        _ => StepClass::DownComplex,
    }
}

impl fmt::Display for LabeledStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.a)?;
        for (i, p) in self.parts.iter().enumerate() {
            write!(f, "{}{p}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, ")")
    }
}

/// A validated labeled F-path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPath", into = "RawPath")]
pub struct LabeledFPath {
    steps: Vec<LabeledStep>,
}

#[derive(Serialize, Deserialize)]
struct RawPath {
    steps: Vec<LabeledStep>,
}

impl TryFrom<RawPath> for LabeledFPath {
    type Error = Error;
    fn try_from(raw: RawPath) -> Result<Self> {
        validate_lf(raw.steps)
    }
}

impl From<LabeledFPath> for RawPath {
    fn from(p: LabeledFPath) -> Self {
        RawPath { steps: p.steps }
    }
}

pub fn validate_lf(steps: Vec<LabeledStep>) -> Result<LabeledFPath> {
    let (mut x, mut y) = (0i64, 0i64);
    for (i, s) in steps.iter().enumerate() {
        s.validate()?;
        x += s.a as i64;
        y += s.b();
        if y < x {
            return Err(Error::BelowDiagonal(i + 1));
        }
    }
    Ok(LabeledFPath { steps })
}

impl LabeledFPath {
    pub fn empty() -> Self {
        LabeledFPath { steps: Vec::new() }
    }

    pub fn steps(&self) -> &[LabeledStep] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<LabeledStep> {
        self.steps
    }

    pub fn semilength(&self) -> usize {
        self.steps.iter().map(LabeledStep::semilength).sum()
    }

    /// `y - x` at the final lattice point.
    pub fn height(&self) -> i64 {
        let (x, y) = self.endpoint();
        y - x
    }

    pub fn endpoint(&self) -> (i64, i64) {
        self.steps.iter().fold((0, 0), |(x, y), s| (x + s.a as i64, y + s.b()))
    }

    pub fn points(&self) -> Vec<(i64, i64)> {
        let mut pts = vec![(0, 0)];
        let (mut x, mut y) = (0, 0);
        for s in &self.steps {
            x += s.a as i64;
            y += s.b();
            pts.push((x, y));
        }
        pts
    }

    /// The path without its last step, and that step.
    pub fn split_last(&self) -> Option<(LabeledFPath, &LabeledStep)> {
        let (last, rest) = self.steps.split_last()?;
        Some((LabeledFPath { steps: rest.to_vec() }, last))
    }

    /// Appends a step, checking it and the diagonal constraint.
    pub fn push(&mut self, step: LabeledStep) -> Result<()> {
        step.validate()?;
        let h = self.height() + step.b() - step.a as i64;
        if h < 0 {
            return Err(Error::BelowDiagonal(self.steps.len() + 1));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn concat(&self, other: &LabeledFPath) -> Result<LabeledFPath> {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        validate_lf(steps)
    }

    pub fn down_steps(&self) -> impl Iterator<Item = (usize, &LabeledStep)> {
        self.steps.iter().enumerate().filter(|(_, s)| classify_step(s).is_down())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Display for LabeledFPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `(semilength, height)`.
pub fn lf_stats(q: &LabeledFPath) -> (usize, i64) {
    (q.semilength(), q.height())
}

/// At most one down step, which (if present) is pure or 0-tailed.
pub fn in_class_210a(q: &LabeledFPath) -> bool {
    let downs: Vec<_> = q.down_steps().collect();
    match downs.as_slice() {
        [] => true,
        [(_, s)] => matches!(classify_step(s), StepClass::DownPure | StepClass::DownZeroTailed),
        _ => false,
    }
}

/// Exactly one down step, which is complex and followed only by north steps.
pub fn in_class_210b(q: &LabeledFPath) -> bool {
    let downs: Vec<_> = q.down_steps().collect();
    match downs.as_slice() {
        [(i, s)] => {
            classify_step(s) == StepClass::DownComplex
                && q.steps[i + 1..].iter().all(|s| classify_step(s) == StepClass::North)
        }
        _ => false,
    }
}

/// Membership in `LF(210)`, the union of the two classes above.
pub fn in_class_210(q: &LabeledFPath) -> bool {
    in_class_210a(q) || in_class_210b(q)
}

/// Membership in `LF(110)`: no complex down steps, 0-tailed down steps only
/// after north/up steps, and no north step after a down step.
pub fn in_class_110(q: &LabeledFPath) -> bool {
    let mut seen_down = false;
    for s in &q.steps {
        match classify_step(s) {
            StepClass::DownComplex => return false,
            StepClass::DownZeroTailed if seen_down => return false,
            StepClass::North if seen_down => return false,
            c if c.is_down() => seen_down = true,
            _ => {}
        }
    }
    true
}

/// Paths whose unique down step is complex and comes last.
pub fn in_class_210b_tilde(q: &LabeledFPath) -> bool {
    let downs: Vec<_> = q.down_steps().collect();
    matches!(downs.as_slice(), [(i, s)] if *i + 1 == q.steps.len() && classify_step(s) == StepClass::DownComplex)
}

/// All labeled F-paths of semilength `n`, ordered lexicographically by
/// their step lists (steps compared by `(a, parts)`).
pub fn enumerate_lf(n: usize) -> Result<Vec<LabeledFPath>> {
    enumerate_lf_bounded(n, LF_GUARD)
}

pub fn enumerate_lf_bounded(n: usize, guard: usize) -> Result<Vec<LabeledFPath>> {
    if n > guard {
        return Err(Error::GuardExceeded { what: "enumerate_lf", n, guard });
    }
    let mut out = Vec::new();
    lf_dfs(&mut Vec::new(), 0, n, &mut out);
    Ok(out)
}

fn lf_dfs(steps: &mut Vec<LabeledStep>, height: i64, budget: usize, out: &mut Vec<LabeledFPath>) {
    if budget == 0 {
        out.push(LabeledFPath { steps: steps.clone() });
        return;
    }
    for s in candidate_steps(height, budget) {
        let h = height + s.b() - s.a as i64;
        let k = s.semilength();
        steps.push(s);
        lf_dfs(steps, h, budget - k, out);
        steps.pop();
    }
}

/// Steps available at height `h` with semilength at most `budget`, sorted.
fn candidate_steps(h: i64, budget: usize) -> Vec<LabeledStep> {
    let mut out = Vec::new();
    // rise (a; 1) needs a <= h + 1
    for a in 0..=h + 1 {
        out.push(LabeledStep::rise(a as u32));
    }
    // down (a; parts) needs a - b <= h, so 1 <= a <= h and |b| <= h - a
    for a in 1..=h {
        for depth in 0..=h - a {
            for k in 1..=budget {
                for parts in weak_compositions(depth as i32, k) {
                    out.push(LabeledStep::down(a as u32, parts.into_iter().map(|p| -p).collect()));
                }
            }
        }
    }
    out.sort();
    out
}

/// All ways to write `total` as an ordered sum of `k` nonnegative parts.
pub fn weak_compositions(total: i32, k: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(rem: i32, k: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() + 1 == k {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for p in 0..=rem {
            cur.push(p);
            go(rem - p, k, cur, out);
            cur.pop();
        }
    }
    if k > 0 {
        go(total, k, &mut cur, &mut out);
    }
    out
}

/// The 19-step path of semilength 24 and height 3 used as a running example.
pub fn sample_path() -> LabeledFPath {
    let n = LabeledStep::north;
    let steps = vec![
        n(),
        n(),
        n(),
        LabeledStep::rise(1),
        LabeledStep::rise(3),
        n(),
        n(),
        n(),
        n(),
        LabeledStep::down(2, vec![0]),
        n(),
        n(),
        LabeledStep::down(1, vec![-1]),
        n(),
        n(),
        n(),
        n(),
        LabeledStep::down(1, vec![0, 0, 0]),
        LabeledStep::down(1, vec![0, -1, 0, -1]),
    ];
    validate_lf(steps).expect("valid sample path")
}
