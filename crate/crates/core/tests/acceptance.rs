//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//! All comparisons are exact; the only tolerances are wall-clock limits.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use is102::bijection::{is_to_tiling, tiling_to_is, Tiling};
use is102::formula::Tau;
use is102::harness::{run_checks, CheckFamily, CheckResult, CheckSpec, CheckStatus, RunOptions};
use is102::series::IdentityId;
use is102::InversionSequence;

const LIMIT_BIJECTIONS: Duration = Duration::from_secs(60);
const LIMIT_RANK: Duration = Duration::from_secs(60);
const LIMIT_SERIES: Duration = Duration::from_secs(30);

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(specs: Vec<CheckSpec>) -> (Vec<CheckResult>, Duration) {
    let start = Instant::now();
    let report = run_checks(&specs, RunOptions::default());
    (report.checks, start.elapsed())
}

fn summarize(checks: &[CheckResult]) -> Outcome {
    let cells: usize = checks.iter().map(|c| c.cells).sum();
    match checks.iter().find(|c| c.status != CheckStatus::Pass) {
        None => Outcome { ok: true, detail: format!("{} checks, {cells} comparisons", checks.len()) },
        Some(c) => Outcome {
            ok: false,
            detail: format!(
                "{} {:?}: {} witness {}",
                c.family,
                c.status,
                c.detail.as_deref().unwrap_or(""),
                c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()
            ),
        },
    }
}

fn timed(mut o: Outcome, took: Duration, limit: Duration) -> Outcome {
    o.detail = format!("{}; {:.2}s (limit {}s)", o.detail, took.as_secs_f64(), limit.as_secs());
    if took >= limit {
        o.ok = false;
    }
    o
}

fn specs(fams: impl IntoIterator<Item = CheckFamily>, n: usize) -> Vec<CheckSpec> {
    fams.into_iter().map(|f| CheckSpec::new(f, n)).collect()
}

fn bijections() -> Outcome {
    let (checks, took) = run(specs(
        [CheckFamily::BijectionPhi, CheckFamily::BijectionPsi, CheckFamily::BijectionM, CheckFamily::BijectionComposed],
        6,
    ));
    timed(summarize(&checks), took, LIMIT_BIJECTIONS)
}

fn rank_counts() -> Outcome {
    let (checks, took) = run(specs([CheckFamily::Formula102], 9));
    let mut o = summarize(&checks);
    if checks[0].cells != 45 {
        o = Outcome { ok: false, detail: format!("expected 45 cells, compared {}", checks[0].cells) };
    }
    timed(o, took, LIMIT_RANK)
}

fn pair_formulas() -> Outcome {
    let mut all = Vec::new();
    for tau in Tau::ALL {
        all.push(CheckSpec::new(CheckFamily::FormulaPair(tau), if tau == Tau::T201 { 8 } else { 9 }));
    }
    all.push(CheckSpec::new(CheckFamily::Formula201Split, 8));
    let (checks, _) = run(all);
    let mut o = summarize(&checks);
    let cells: usize = checks[..Tau::ALL.len()].iter().map(|c| c.cells).sum();
    let expected = 8 * 36 + 28;
    if o.ok && cells != expected {
        o = Outcome { ok: false, detail: format!("expected {expected} (n,t) cells, compared {cells}") };
    }
    o
}

fn totals() -> Outcome {
    let (checks, _) = run(specs([Tau::T011, Tau::T012, Tau::T120].map(CheckFamily::FormulaTotals), 10));
    summarize(&checks)
}

fn tiling() -> Outcome {
    let (checks, _) = run(specs([CheckFamily::Tiling], 8));
    let mut o = summarize(&checks);
    let examples = [("000", "DD"), ("001", "DSS"), ("010", "SSD"), ("011", "SSSS"), ("002", "SDS")];
    for (seq, word) in examples {
        let e = InversionSequence::new(seq.chars().map(|c| c.to_digit(10).unwrap()).collect()).unwrap();
        let got = is_to_tiling(&e).map(|t| t.to_string());
        let back = Tiling::parse(word).and_then(|t| tiling_to_is(&t, 3));
        if got.as_deref() != Ok(word) || back.as_ref() != Ok(&e) {
            return Outcome { ok: false, detail: format!("{seq} -> {got:?}, expected {word}") };
        }
    }
    o.detail += "; 000->DD 001->DSS 010->SSD 011->SSSS 002->SDS";
    o
}

fn dyck() -> Outcome {
    let (checks, _) = run(specs([CheckFamily::DyckLemma], 8));
    summarize(&checks)
}

fn series() -> Outcome {
    let all: Vec<CheckSpec> = IdentityId::ALL
        .into_iter()
        .map(|id| CheckSpec { family: CheckFamily::Identity(id), n_max: 24, u_order: Some(6) })
        .collect();
    let (checks, took) = run(all);
    timed(summarize(&checks), took, LIMIT_SERIES)
}

fn a_subset() -> Outcome {
    let (checks, _) = run(specs([CheckFamily::FormulaASubset], 8));
    summarize(&checks)
}

fn probes() -> Outcome {
    let (checks, _) = run(vec![CheckSpec::new(CheckFamily::ProbeBlockRank, 6), CheckSpec::new(CheckFamily::ProbeBallot, 9)]);
    let base = summarize(&checks);
    if !base.ok {
        return base;
    }
    let block = checks[0].finding.as_ref().unwrap();
    let ballot = checks[1].finding.as_ref().unwrap();
    let holds = block["holds"].as_str().unwrap_or("neither").to_string();
    let compared = ballot["compared"].as_u64().unwrap_or(0);
    let ballot_ok = ballot["ballot_binom_2j_plus_k_choose_j_matches"].as_u64().unwrap_or(0);
    let literal_ok = ballot["literal_binom_2j_plus_k_choose_n_matches"].as_u64().unwrap_or(0);
    Outcome {
        ok: holds != "neither" && ballot_ok == compared && compared > 0,
        detail: format!(
            "{holds} on all {} paths; c(j,k) = k/(2j+k) binom(2j+k,j) matches {ballot_ok}/{compared} cells, binom(2j+k,n) reading matches {literal_ok}/{compared}",
            block["compared"]
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("bijections phi, psi, M and the composition on n <= 6 with statistics", bijections),
        ("rank counts for IS_n(102), n <= 9, all 45 cells", rank_counts),
        ("pair formulas for nine patterns and the 201 split by max", pair_formulas),
        ("row totals for 011, 012 and 120, n <= 10", totals),
        ("tiling bijection for n <= 8 and the n = 3 correspondences", tiling),
        ("Dyck final-descent lemma for n <= 8", dyck),
        ("all twelve series identities at x-order 24, u-order 6", series),
        ("A_{n,t} closed form and recurrence for n <= 8", a_subset),
        ("block/rank and c(j,k) probes", probes),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} {}. {name}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
