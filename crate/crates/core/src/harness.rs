//! Exhaustive cross-validation of formulas, maps and identities against
//! brute-force enumeration, collected into a deterministic report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bijection::{enumerate_tilings, has_rank_prefix, is_to_tiling, phi, phi_inv, psi, psi_inv, schroeder_to_is, tiling_to_is};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::formula::{
    binom, count_102_rank, count_201_by_max, count_a_subset, count_pair_rank, count_pair_rank_top_row, count_top_rank, fib,
    formula_210, total_102_120, Tau,
};
use crate::fpath::{enumerate_lf, in_class_110, in_class_210, LabeledFPath};
use crate::paths::{
    block_of, count_dyck_final_descent, enumerate_dyck, enumerate_schroeder, enumerate_uvd, schroeder_to_uvd, uvd_to_schroeder,
    validate_uvd, vox_of,
};
use crate::sequence::{contains_pattern, enumerate_is_with, pat, pattern_102, InversionSequence, Pattern, IS_GUARD};
use crate::series::{verify_identity, IdentityId};

/// Default u-order for identity checks.
pub const DEFAULT_U_ORDER: usize = 6;

/// What a check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckFamily {
    BijectionPhi,
    BijectionPsi,
    BijectionM,
    BijectionComposed,
    Tiling,
    Formula102,
    FormulaPair(Tau),
    Formula201Split,
    FormulaASubset,
    FormulaTotals(Tau),
    DyckLemma,
    LfClass(Tau),
    Identity(IdentityId),
    /// Which of `block(P) = rank` and `block(P) = rank + 1` holds under φ∘ψ⁻¹∘M.
    ProbeBlockRank,
    /// The two readings of `c(j, k)` in the 210 formula against enumeration.
    ProbeBallot,
    /// The 210 / 110 formulas on the rank `n - 1` row.
    ProbeTopRow(Tau),
}

impl CheckFamily {
    /// Largest accepted `n_max` (x-order for identities).
    pub fn guard(self) -> usize {
        match self {
            CheckFamily::BijectionPhi
            | CheckFamily::BijectionPsi
            | CheckFamily::BijectionM
            | CheckFamily::BijectionComposed
            | CheckFamily::ProbeBlockRank => 7,
            CheckFamily::Tiling | CheckFamily::DyckLemma | CheckFamily::FormulaASubset | CheckFamily::Formula201Split => 8,
            CheckFamily::FormulaPair(Tau::T201) => 8,
            CheckFamily::Formula102 | CheckFamily::FormulaPair(_) | CheckFamily::ProbeBallot | CheckFamily::ProbeTopRow(_) => 9,
            CheckFamily::FormulaTotals(_) => 10,
            CheckFamily::LfClass(_) => 6,
            CheckFamily::Identity(_) => crate::series::MAX_ORDER,
        }
    }

    pub fn default_n_max(self) -> usize {
        match self {
            CheckFamily::BijectionPhi
            | CheckFamily::BijectionPsi
            | CheckFamily::BijectionM
            | CheckFamily::BijectionComposed
            | CheckFamily::ProbeBlockRank => 6,
            CheckFamily::Identity(_) => 24,
            f => f.guard(),
        }
    }
}

impl fmt::Display for CheckFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFamily::BijectionPhi => write!(f, "bijection-phi"),
            CheckFamily::BijectionPsi => write!(f, "bijection-psi"),
            CheckFamily::BijectionM => write!(f, "bijection-M"),
            CheckFamily::BijectionComposed => write!(f, "bijection-composed"),
            CheckFamily::Tiling => write!(f, "tiling"),
            CheckFamily::Formula102 => write!(f, "formula-102"),
            CheckFamily::FormulaPair(t) => write!(f, "formula-pair({t})"),
            CheckFamily::Formula201Split => write!(f, "formula-201-split"),
            CheckFamily::FormulaASubset => write!(f, "formula-A-subset"),
            CheckFamily::FormulaTotals(t) => write!(f, "formula-totals({t})"),
            CheckFamily::DyckLemma => write!(f, "dyck-lemma"),
            CheckFamily::LfClass(t) => write!(f, "lf-class({t})"),
            CheckFamily::Identity(id) => write!(f, "identity({id})"),
            CheckFamily::ProbeBlockRank => write!(f, "probe-block-rank"),
            CheckFamily::ProbeBallot => write!(f, "probe-ballot"),
            CheckFamily::ProbeTopRow(t) => write!(f, "probe-top-row({t})"),
        }
    }
}

impl FromStr for CheckFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once('(') {
            Some((h, rest)) => (h, Some(rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unclosed '(' in {s:?}")))?)),
            None => (s, None),
        };
        let tau = || -> Result<Tau> { arg.ok_or_else(|| Error::Parse(format!("{head} needs a pattern argument")))?.parse() };
        let fam = match head {
            "bijection-phi" => CheckFamily::BijectionPhi,
            "bijection-psi" => CheckFamily::BijectionPsi,
            "bijection-M" | "bijection-m" => CheckFamily::BijectionM,
            "bijection-composed" => CheckFamily::BijectionComposed,
            "tiling" => CheckFamily::Tiling,
            "formula-102" => CheckFamily::Formula102,
            "formula-pair" => CheckFamily::FormulaPair(tau()?),
            "formula-201-split" => CheckFamily::Formula201Split,
            "formula-A-subset" | "formula-a-subset" => CheckFamily::FormulaASubset,
            "formula-totals" => match tau()? {
                t @ (Tau::T011 | Tau::T012 | Tau::T120) => CheckFamily::FormulaTotals(t),
                t => return Err(Error::Parse(format!("no totals identity for {t}"))),
            },
            "dyck-lemma" => CheckFamily::DyckLemma,
            "lf-class" => match tau()? {
                t @ (Tau::T210 | Tau::T110) => CheckFamily::LfClass(t),
                t => return Err(Error::Parse(format!("no LF class for {t}"))),
            },
            "identity" => CheckFamily::Identity(
                arg.ok_or_else(|| Error::Parse("identity needs a tag".into()))?.parse()?,
            ),
            "probe-block-rank" => CheckFamily::ProbeBlockRank,
            "probe-ballot" => CheckFamily::ProbeBallot,
            "probe-top-row" => match tau()? {
                t @ (Tau::T210 | Tau::T110) => CheckFamily::ProbeTopRow(t),
                t => return Err(Error::Parse(format!("no top-row probe for {t}"))),
            },
            _ => return Err(Error::Parse(format!("unknown check family {s:?}"))),
        };
        if arg.is_some() && !matches!(head, "formula-pair" | "formula-totals" | "lf-class" | "identity" | "probe-top-row") {
            return Err(Error::Parse(format!("{head} takes no argument")));
        }
        Ok(fam)
    }
}

impl Serialize for CheckFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CheckFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub family: CheckFamily,
    pub n_max: usize,
    /// u-order for identity checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_order: Option<usize>,
}

impl CheckSpec {
    pub fn new(family: CheckFamily, n_max: usize) -> Self {
        CheckSpec { family, n_max, u_order: None }
    }

    pub fn with_default(family: CheckFamily) -> Self {
        CheckSpec::new(family, family.default_n_max())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub family: CheckFamily,
    pub n_max: usize,
    pub status: CheckStatus,
    /// Number of objects or cells compared.
    pub cells: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finding: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub all_pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub exec: Exec,
    /// Record per-check wall time; off by default so reports stay byte-stable.
    pub timing: bool,
}

/// Accumulates comparisons and keeps the first failure.
#[derive(Default)]
struct Tally {
    cells: usize,
    witness: Option<(Value, String)>,
    finding: Option<Value>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> (Value, String)) {
        self.cells += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn cell(&mut self, what: &str, n: usize, t: usize, formula: impl fmt::Display, oracle: impl fmt::Display) {
        let (f, o) = (formula.to_string(), oracle.to_string());
        self.check(f == o, || (json!({"n": n, "t": t, "formula": f, "oracle": o}), format!("{what} differs from enumeration")));
    }
}

/// The full suite at default sizes, in a fixed order.
pub fn default_suite() -> Vec<CheckSpec> {
    let mut fams = vec![
        CheckFamily::BijectionPhi,
        CheckFamily::BijectionPsi,
        CheckFamily::BijectionM,
        CheckFamily::BijectionComposed,
        CheckFamily::Tiling,
        CheckFamily::Formula102,
    ];
    fams.extend(Tau::ALL.into_iter().map(CheckFamily::FormulaPair));
    fams.extend([CheckFamily::Formula201Split, CheckFamily::FormulaASubset]);
    fams.extend([Tau::T011, Tau::T012, Tau::T120].map(CheckFamily::FormulaTotals));
    fams.push(CheckFamily::DyckLemma);
    fams.extend([Tau::T210, Tau::T110].map(CheckFamily::LfClass));
    fams.extend(IdentityId::ALL.into_iter().map(CheckFamily::Identity));
    fams.extend([CheckFamily::ProbeBlockRank, CheckFamily::ProbeBallot]);
    fams.extend([Tau::T210, Tau::T110].map(CheckFamily::ProbeTopRow));
    fams.into_iter().map(CheckSpec::with_default).collect()
}

/// Runs every spec; a guard violation marks that spec as an error and the
/// rest still run. Results keep the order of `specs`.
pub fn run_checks(specs: &[CheckSpec], opts: RunOptions) -> ConformanceReport {
    let checks = opts.exec.map(specs, |spec| run_one(spec, opts));
    let count = |s: CheckStatus| checks.iter().filter(|c| c.status == s).count();
    ConformanceReport {
        all_pass: checks.iter().all(|c| c.status == CheckStatus::Pass),
        passed: count(CheckStatus::Pass),
        failed: count(CheckStatus::Fail),
        errors: count(CheckStatus::Error),
        checks,
    }
}

fn run_one(spec: &CheckSpec, opts: RunOptions) -> CheckResult {
    let start = Instant::now();
    let outcome = if spec.n_max > spec.family.guard() {
        Err(Error::GuardExceeded { what: "check", n: spec.n_max, guard: spec.family.guard() })
    } else {
        dispatch(spec, opts.exec)
    };
    let elapsed_ms = opts.timing.then(|| start.elapsed().as_millis() as u64);
    let mut res = CheckResult {
        family: spec.family,
        n_max: spec.n_max,
        status: CheckStatus::Pass,
        cells: 0,
        witness: None,
        detail: None,
        finding: None,
        elapsed_ms,
    };
    match outcome {
        Ok(t) => {
            res.cells = t.cells;
            res.finding = t.finding;
            if let Some((w, d)) = t.witness {
                res.status = CheckStatus::Fail;
                res.witness = Some(w);
                res.detail = Some(d);
            }
        }
        Err(e) => {
            res.status = CheckStatus::Error;
            res.detail = Some(e.to_string());
        }
    }
    res
}

fn dispatch(spec: &CheckSpec, exec: Exec) -> Result<Tally> {
    let n = spec.n_max;
    match spec.family {
        CheckFamily::BijectionPhi => check_phi(n, exec),
        CheckFamily::BijectionPsi => check_psi(n, exec),
        CheckFamily::BijectionM => check_m(n),
        CheckFamily::BijectionComposed => check_composed(n, exec),
        CheckFamily::Tiling => check_tiling(n, exec),
        CheckFamily::Formula102 => check_formula_102(n, exec),
        CheckFamily::FormulaPair(tau) => check_formula_pair(tau, n, exec),
        CheckFamily::Formula201Split => check_201_split(n, exec),
        CheckFamily::FormulaASubset => check_a_subset(n, exec),
        CheckFamily::FormulaTotals(tau) => check_totals(tau, n),
        CheckFamily::DyckLemma => check_dyck(n),
        CheckFamily::LfClass(tau) => check_lf_class(tau, n, exec),
        CheckFamily::Identity(id) => {
            let r = verify_identity(id, n, spec.u_order.unwrap_or(DEFAULT_U_ORDER))?;
            let mut t = Tally { cells: r.relations, ..Tally::default() };
            if let Some(m) = r.first_mismatch {
                t.witness = Some((serde_json::to_value(&m).expect("json"), format!("{} fails", m.relation)));
            }
            Ok(t)
        }
        CheckFamily::ProbeBlockRank => probe_block_rank(n, exec),
        CheckFamily::ProbeBallot => probe_ballot(n, exec),
        CheckFamily::ProbeTopRow(tau) => probe_top_row(tau, n, exec),
    }
}

fn enumerate(n: usize, avoid: &[Pattern], exec: Exec) -> Result<Vec<InversionSequence>> {
    enumerate_is_with(n, avoid, IS_GUARD, exec)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Checks that `images` hit every element of `target` exactly once.
fn check_onto<T: Ord + Clone + Serialize>(t: &mut Tally, mut images: Vec<T>, target: &[T]) {
    images.sort();
    if let Some(w) = images.windows(2).find(|w| w[0] == w[1]) {
        let dup = w[0].clone();
        t.check(false, || (to_json(&dup), "image hit twice".into()));
        return;
    }
    for x in target {
        let hit = images.binary_search(x).is_ok();
        t.check(hit, || (to_json(x), "not in the image".into()));
    }
    let mut sorted_target = target.to_vec();
    sorted_target.sort();
    if let Some(extra) = images.iter().find(|x| sorted_target.binary_search(x).is_err()) {
        t.check(false, || (to_json(extra), "image outside the target set".into()));
    }
}

/// Applies `f` to every item (in parallel when allowed) and records the
/// first failure in input order.
fn per_item<T, F>(t: &mut Tally, items: &[T], exec: Exec, f: F)
where
    T: Sync + Serialize,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    let results = exec.map(items, |x| f(x));
    for (x, r) in items.iter().zip(results) {
        t.check(r.is_none(), || (to_json(x), r.clone().unwrap_or_default()));
    }
}

fn check_phi(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let p102 = pattern_102();
    for n in 0..=n_max {
        let paths = enumerate_lf(n)?;
        per_item(&mut t, &paths, exec, |q| {
            let e = phi(q);
            let (x, y) = q.endpoint();
            if e.len() != n + 1 || e.contains(&p102) {
                return Some(format!("phi gives {e}, not in IS_{}(102)", n + 1));
            }
            if e.rank_value() != q.height() {
                return Some(format!("rank {} != height {}", e.rank_value(), q.height()));
            }
            if e.max_value() as i64 != x || e.prmx() as i64 != y + 1 {
                return Some("max/prmx do not match the endpoint".into());
            }
            match phi_inv(&e) {
                Ok(back) if &back == q => None,
                Ok(back) => Some(format!("phi_inv gives {}", back.to_json())),
                Err(err) => Some(format!("phi_inv fails: {err}")),
            }
        });
        let images = exec.map(&paths, phi);
        check_onto(&mut t, images, &enumerate(n + 1, std::slice::from_ref(&p102), exec)?);
    }
    Ok(t)
}

fn check_psi(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 0..=n_max {
        let paths = enumerate_lf(n)?;
        per_item(&mut t, &paths, exec, |q| {
            let s = psi(q);
            if let Err(err) = validate_uvd(s.as_str()) {
                return Some(format!("psi gives invalid {s:?}: {err}"));
            }
            if s.semilength() != n + 1 {
                return Some(format!("psi gives semilength {}", s.semilength()));
            }
            let st = s.stats();
            if st.vox != q.height() || st.block as i64 != q.height() + 1 {
                return Some(format!("vox {} / block {} vs height {}", st.vox, st.block, q.height()));
            }
            match psi_inv(&s) {
                Ok(back) if &back == q => None,
                Ok(back) => Some(format!("psi_inv gives {}", back.to_json())),
                Err(err) => Some(format!("psi_inv fails: {err}")),
            }
        });
        let images = exec.map(&paths, psi);
        check_onto(&mut t, images, &enumerate_uvd(n + 1)?);
    }
    Ok(t)
}

fn check_m(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 1..=n_max {
        let sps = enumerate_schroeder(n)?;
        let mut images = Vec::with_capacity(sps.len());
        for p in &sps {
            let s = schroeder_to_uvd(p);
            let ok = validate_uvd(s.as_str()).is_ok()
                && p.block() as i64 == vox_of(s.steps()) + 1
                && uvd_to_schroeder(&s) == *p;
            t.check(ok, || (to_json(p), "M is not a statistic-preserving inverse pair here".into()));
            images.push(s);
        }
        check_onto(&mut t, images, &enumerate_uvd(n)?);
    }
    Ok(t)
}

fn check_composed(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let p102 = pattern_102();
    for n in 1..=n_max {
        let sps = enumerate_schroeder(n)?;
        let images: Vec<Result<InversionSequence>> = exec.map(&sps, schroeder_to_is);
        let mut ok_images = Vec::with_capacity(images.len());
        for (p, e) in sps.iter().zip(images) {
            match e {
                Ok(e) => {
                    let ok = e.len() == n && !e.contains(&p102) && p.block() as i64 == e.rank_value() + 1;
                    t.check(ok, || (to_json(p), format!("image {e} breaks length, avoidance or block = rank + 1")));
                    ok_images.push(e);
                }
                Err(err) => t.check(false, || (to_json(p), err.to_string())),
            }
        }
        check_onto(&mut t, ok_images, &enumerate(n, std::slice::from_ref(&p102), exec)?);
    }
    Ok(t)
}

fn check_tiling(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let avoid = [pattern_102(), pat("012")];
    for n in 1..=n_max {
        let seqs = enumerate(n, &avoid, exec)?;
        per_item(&mut t, &seqs, exec, |e| {
            let tl = match is_to_tiling(e) {
                Ok(tl) => tl,
                Err(err) => return Some(err.to_string()),
            };
            if tl.board_length() != 2 * n - 2 {
                return Some(format!("tiling {tl} has length {}", tl.board_length()));
            }
            if tiling_to_is(&tl, n).as_ref() != Ok(e) {
                return Some(format!("tiling {tl} does not map back"));
            }
            let rank = e.rank_value();
            if n >= 3 && rank < n as i64 - 2 && !has_rank_prefix(&tl, rank as usize) {
                return Some(format!("tiling {tl} lacks the rank-{rank} prefix"));
            }
            None
        });
        t.cell("|IS_n(102,012)| = F_{2n-1}", n, 0, fib(2 * n as u64 - 1), seqs.len());
        let images: Vec<_> = seqs.iter().filter_map(|e| is_to_tiling(e).ok()).collect();
        check_onto(&mut t, images, &enumerate_tilings(2 * n - 2));
    }
    Ok(t)
}

/// Oracle histogram of ranks for `IS_n` avoiding `avoid`.
fn rank_histogram(n: usize, avoid: &[Pattern], exec: Exec) -> Result<Vec<usize>> {
    let mut h = vec![0usize; n];
    for e in enumerate(n, avoid, exec)? {
        h[e.rank_value() as usize] += 1;
    }
    Ok(h)
}

fn check_formula_102(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 1..=n_max {
        let h = rank_histogram(n, &[pattern_102()], exec)?;
        for (rank, &count) in h.iter().enumerate() {
            t.cell("count_102_rank", n, rank, count_102_rank(n, rank)?, count);
        }
    }
    Ok(t)
}

fn check_formula_pair(tau: Tau, n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 2..=n_max {
        let h = rank_histogram(n, &[pattern_102(), tau.pattern()], exec)?;
        for (rank, &count) in h.iter().enumerate().take(n - 1) {
            t.cell("count_pair_rank", n, rank, count_pair_rank(tau, n, rank)?, count);
        }
    }
    Ok(t)
}

/// Whether `e` has the shape that characterizes (102, 201)-avoiders
/// containing 101: a weakly increasing start bounded by some `m̂ < m`, a
/// block of `m`'s ending at the first descent, then `m̂`, then a nonconstant
/// word over `{m̂, m}`, then a weakly decreasing tail below `m̂`.
pub fn matches_form_201(e: &InversionSequence) -> bool {
    let w = e.entries();
    let n = w.len() as i64;
    let m = e.max_value() as i64;
    let t = e.rank_value();
    if m == 0 || t < 0 {
        return false;
    }
    let at = |i: i64| w[(i - 1) as usize] as i64;
    for s in 0..=t {
        for m_hat in 0..m {
            for k in 0..=n - m - t - 3 {
                let head_ok = (1..m + s).all(|i| at(i) <= at(i + 1)) && (m + s == 0 || at(m + s) <= m_hat);
                let block_ok = (m + s + 1..=m + t + 1).all(|i| at(i) == m);
                let pivot_ok = at(m + t + 2) == m_hat;
                let mid: Vec<i64> = (m + t + 3..=m + t + k + 3).map(at).collect();
                let mid_ok = mid.iter().all(|&v| v == m_hat || v == m) && mid.contains(&m);
                let tail_ok = (m + t + k + 4..=n).all(|i| at(i) < m_hat && (i == m + t + k + 4 || at(i - 1) >= at(i)));
                if head_ok && block_ok && pivot_ok && mid_ok && tail_ok {
                    return true;
                }
            }
        }
    }
    false
}

fn check_201_split(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let p101 = pat("101");
    for n in 2..=n_max {
        let seqs = enumerate(n, &[pattern_102(), pat("201")], exec)?;
        // (t, m, contains 101) -> count
        let mut hist: BTreeMap<(usize, usize, bool), usize> = BTreeMap::new();
        for e in &seqs {
            let c101 = e.contains(&p101);
            let rank = e.rank_value() as usize;
            if rank + 2 <= n {
                *hist.entry((rank, e.max_value() as usize, c101)).or_default() += 1;
            }
            t.check(matches_form_201(e) == c101, || {
                (to_json(e), format!("matches_form_201 = {}, contains 101 = {c101}", !c101))
            });
        }
        for rank in 0..=n - 2 {
            let mut covered = 0;
            for (c101, m_hi) in [(false, n as i64 - rank as i64 - 1), (true, n as i64 - rank as i64 - 3)] {
                for m in 1..=m_hi.max(0) as usize {
                    let oracle = hist.get(&(rank, m, c101)).copied().unwrap_or(0);
                    covered += oracle;
                    let f = count_201_by_max(n, rank, m, c101)?;
                    let what = if c101 { "count_201_by_max(contains 101)" } else { "count_201_by_max(avoids 101)" };
                    t.check(f.to_string() == oracle.to_string(), || {
                        (json!({"n": n, "t": rank, "m": m, "contains_101": c101, "formula": f.to_string(), "oracle": oracle}), format!("{what} differs from enumeration"))
                    });
                }
            }
            let total: usize = hist.iter().filter(|((r, _, _), _)| *r == rank).map(|(_, c)| *c).sum();
            t.cell("(t, m) ranges cover every sequence of rank t", n, rank, covered, total);
        }
    }
    Ok(t)
}

/// `|A_{n,t}|` by enumeration, for `0 <= t <= n-2`.
fn a_subset_oracle(n: usize, exec: Exec) -> Result<Vec<usize>> {
    let mut h = vec![0usize; n.saturating_sub(1)];
    for e in enumerate(n, &[pattern_102(), pat("120")], exec)? {
        let rank = e.rank_value() as usize;
        let m = e.max_value() as usize;
        if rank + 2 <= n && m + rank >= 1 && e.get(m + rank) < m as u32 {
            h[rank] += 1;
        }
    }
    Ok(h)
}

fn check_a_subset(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rows = vec![Vec::new(), Vec::new()];
    for n in 2..=n_max {
        let h = a_subset_oracle(n, exec)?;
        for (rank, &count) in h.iter().enumerate() {
            t.cell("|A_{n,t}| = binom(2n-t-3, n-1)", n, rank, count_a_subset(n, rank)?, count);
        }
        rows.push(h);
    }
    for n in 2..n_max {
        for rank in 1..n {
            let sum: usize = (rank - 1..=n - 2).map(|i| rows[n][i]).sum();
            t.cell("|A_{n+1,t}| = sum_{i=t-1}^{n-2} |A_{n,i}|", n + 1, rank, sum, rows[n + 1][rank]);
        }
    }
    Ok(t)
}

fn check_totals(tau: Tau, n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 1..=n_max {
        let mut total = BigInt::from(count_top_rank(tau, n));
        for rank in 0..n.saturating_sub(1) {
            total += BigInt::from(count_pair_rank(tau, n, rank)?.0);
        }
        let want = match tau {
            Tau::T120 => total_102_120(n),
            _ => fib(2 * n as u64 - 1),
        };
        t.cell("row sum", n, 0, total, want);
    }
    Ok(t)
}

fn check_dyck(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 1..=n_max {
        let mut by_descent = vec![0usize; n + 1];
        let mut by_returns = vec![0usize; n + 1];
        for p in enumerate_dyck(n)? {
            by_descent[p.final_descent()] += 1;
            by_returns[p.returns()] += 1;
        }
        for k in 1..=n {
            let f = count_dyck_final_descent(n, k)?;
            let closed = BigRational::new(binom(2 * n as i64 - k as i64 - 1, n as i64 - 1) * k, BigInt::from(n));
            t.cell("final descent k", n, k, &f, by_descent[k]);
            t.cell("k returns", n, k, &f, by_returns[k]);
            t.cell("k/n binom(2n-k-1, n-1)", n, k, &f, closed);
        }
    }
    Ok(t)
}

fn check_lf_class(tau: Tau, n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let class: fn(&LabeledFPath) -> bool = if tau == Tau::T210 { in_class_210 } else { in_class_110 };
    let tp = tau.pattern();
    for n in 0..=n_max {
        let paths = enumerate_lf(n)?;
        per_item(&mut t, &paths, exec, |q| {
            let inside = class(q);
            let avoids = !contains_pattern(phi(q).entries(), &tp);
            (inside != avoids).then(|| format!("class membership {inside} but phi(Q) avoids {tau}: {avoids}"))
        });
        let mut by_height = vec![0usize; n + 1];
        for q in paths.iter().filter(|q| class(q)) {
            by_height[q.height() as usize] += 1;
        }
        let h = rank_histogram(n + 1, &[pattern_102(), tp.clone()], exec)?;
        for (rank, &count) in h.iter().enumerate() {
            t.cell("class count by height vs IS_{n+1,t}(102,tau)", n + 1, rank, by_height[rank], count);
        }
    }
    Ok(t)
}

fn probe_block_rank(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let (mut eq, mut eq_plus_one, mut total) = (0usize, 0usize, 0usize);
    let mut first_counterexample: Option<Value> = None;
    for n in 1..=n_max {
        let sps = enumerate_schroeder(n)?;
        let ranks = exec.map(&sps, |p| schroeder_to_is(p).map(|e| e.rank_value()));
        for (p, r) in sps.iter().zip(ranks) {
            let r = r?;
            let b = block_of(schroeder_to_uvd(p).steps()) as i64;
            total += 1;
            eq += usize::from(b == r);
            eq_plus_one += usize::from(b == r + 1);
            if b != r && first_counterexample.is_none() {
                first_counterexample = Some(json!({"path": p, "block": b, "rank": r}));
            }
        }
    }
    let holds = match (eq == total, eq_plus_one == total) {
        (true, _) => "block = rank",
        (_, true) => "block = rank + 1",
        _ => "neither",
    };
    t.cells = total;
    t.finding = Some(json!({
        "compared": total,
        "block_eq_rank": eq,
        "block_eq_rank_plus_1": eq_plus_one,
        "holds": holds,
        "first_counterexample_to_block_eq_rank": first_counterexample,
    }));
    if holds == "neither" {
        t.witness = Some((Value::Null, "neither candidate identity holds".into()));
    }
    Ok(t)
}

fn probe_ballot(n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let mut ballot_ok = 0usize;
    let mut literal_ok = 0usize;
    let mut first_literal_miss: Option<Value> = None;
    for n in 2..=n_max {
        let h = rank_histogram(n, &[pattern_102(), Tau::T210.pattern()], exec)?;
        let ni = n as i64;
        for (rank, &count) in h.iter().enumerate().take(n - 1) {
            let ti = rank as i64;
            let oracle = BigRational::from_integer(BigInt::from(count));
            let ballot: BigInt = formula_210(ni, ti, crate::formula::ballot);
            let literal: BigRational = formula_210(ni, ti, |j, k| {
                if 2 * j + k == 0 {
                    return BigRational::zero();
                }
                BigRational::new(binom(2 * j + k, n as i64) * k, BigInt::from(2 * j + k))
            });
            t.cells += 1;
            if BigRational::from_integer(ballot.clone()) == oracle {
                ballot_ok += 1;
            } else if t.witness.is_none() {
                t.witness = Some((json!({"n": n, "t": rank, "formula": ballot.to_string(), "oracle": count}), "ballot reading differs from enumeration".into()));
            }
            if literal == oracle {
                literal_ok += 1;
            } else if first_literal_miss.is_none() {
                first_literal_miss = Some(json!({"n": n, "t": rank, "literal": literal.to_string(), "oracle": count}));
            }
        }
    }
    t.finding = Some(json!({
        "compared": t.cells,
        "ballot_binom_2j_plus_k_choose_j_matches": ballot_ok,
        "literal_binom_2j_plus_k_choose_n_matches": literal_ok,
        "first_literal_mismatch": first_literal_miss,
    }));
    Ok(t)
}

fn probe_top_row(tau: Tau, n_max: usize, exec: Exec) -> Result<Tally> {
    let mut t = Tally::default();
    let mut agree = 0usize;
    for n in 2..=n_max {
        let h = rank_histogram(n, &[pattern_102(), tau.pattern()], exec)?;
        let f = count_pair_rank_top_row(tau, n)?;
        let oracle = h[n - 1];
        t.cells += 1;
        if f == BigInt::from(oracle) {
            agree += 1;
        } else if t.witness.is_none() {
            t.witness = Some((json!({"n": n, "t": n - 1, "formula": f.to_string(), "oracle": oracle}), "formula differs on the rank n-1 row".into()));
        }
    }
    t.finding = Some(json!({"rows_compared": t.cells, "rows_matching": agree}));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for spec in default_suite() {
            let s = spec.family.to_string();
            assert_eq!(s.parse::<CheckFamily>().unwrap(), spec.family, "{s}");
        }
        assert!("formula-pair".parse::<CheckFamily>().is_err());
        assert!("lf-class(012)".parse::<CheckFamily>().is_err());
        assert!("tiling(3)".parse::<CheckFamily>().is_err());
        assert!("bogus".parse::<CheckFamily>().is_err());
    }

    #[test]
    fn form_201_examples() {
        let e = |v: &[u32]| InversionSequence::new(v.to_vec()).unwrap();
        assert!(!matches_form_201(&e(&[0, 0])));
        // (0,1,0,1): m = 1, t = 0, m̂ = 0
        assert!(matches_form_201(&e(&[0, 1, 0, 1])));
        assert!(!matches_form_201(&e(&[0, 1, 0, 0])));
    }

    #[test]
    fn small_runs_pass() {
        let specs = vec![
            CheckSpec::new(CheckFamily::BijectionPhi, 4),
            CheckSpec::new(CheckFamily::BijectionPsi, 4),
            CheckSpec::new(CheckFamily::FormulaPair(Tau::T012), 9),
            CheckSpec::new(CheckFamily::Formula201Split, 6),
            CheckSpec::new(CheckFamily::ProbeBlockRank, 4),
        ];
        let r = run_checks(&specs, RunOptions::default());
        assert!(r.all_pass, "{r:#?}");
        assert_eq!(r.checks[2].cells, 36);
        let finding = r.checks[4].finding.as_ref().unwrap();
        assert_eq!(finding["holds"], "block = rank + 1");
    }

    #[test]
    fn guard_violation_is_isolated() {
        let specs = vec![CheckSpec::new(CheckFamily::LfClass(Tau::T210), 9), CheckSpec::new(CheckFamily::DyckLemma, 4)];
        let r = run_checks(&specs, RunOptions::default());
        assert_eq!(r.checks[0].status, CheckStatus::Error);
        assert_eq!(r.checks[1].status, CheckStatus::Pass);
        assert!(!r.all_pass);
    }

    #[test]
    fn modes_give_identical_reports() {
        let specs = vec![CheckSpec::new(CheckFamily::BijectionComposed, 4), CheckSpec::new(CheckFamily::Tiling, 6)];
        let a = run_checks(&specs, RunOptions { exec: Exec::Sequential, timing: false });
        let b = run_checks(&specs, RunOptions { exec: Exec::Parallel, timing: false });
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
