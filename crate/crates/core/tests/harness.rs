use is102::formula::Tau;
use is102::harness::{default_suite, matches_form_201, run_checks, CheckFamily, CheckSpec, CheckStatus, ConformanceReport, RunOptions};
use is102::sequence::{enumerate_is, pat, pattern_102};
use is102::Exec;

#[test]
fn default_suite_passes_and_is_mode_independent() {
    let suite = default_suite();
    let seq = run_checks(&suite, RunOptions { exec: Exec::Sequential, timing: false });
    let par = run_checks(&suite, RunOptions { exec: Exec::Parallel, timing: false });
    let failing: Vec<_> = seq.checks.iter().filter(|c| c.status != CheckStatus::Pass).collect();
    assert!(seq.all_pass, "{failing:#?}");
    assert_eq!(serde_json::to_string(&seq).unwrap(), serde_json::to_string(&par).unwrap());
    let back: ConformanceReport = serde_json::from_str(&serde_json::to_string(&seq).unwrap()).unwrap();
    assert_eq!(back, seq);
}

#[test]
fn form_201_characterizes_101_containment() {
    let p101 = pat("101");
    for n in 1..=8 {
        for e in enumerate_is(n, &[pattern_102(), pat("201")]).unwrap() {
            assert_eq!(matches_form_201(&e), e.contains(&p101), "{e}");
        }
    }
}

#[test]
fn oversized_checks_error_without_stopping_others() {
    let specs = [
        CheckSpec::new(CheckFamily::FormulaPair(Tau::T201), 9),
        CheckSpec::new(CheckFamily::FormulaPair(Tau::T012), 9),
    ];
    let r = run_checks(&specs, RunOptions::default());
    assert_eq!(r.checks[0].status, CheckStatus::Error);
    assert_eq!(r.checks[1].status, CheckStatus::Pass);
    assert_eq!(r.checks[1].cells, 36);
    assert_eq!((r.passed, r.errors), (1, 1));
}

#[test]
fn timing_is_opt_in() {
    let specs = [CheckSpec::new(CheckFamily::DyckLemma, 5)];
    let plain = run_checks(&specs, RunOptions::default());
    assert!(plain.checks[0].elapsed_ms.is_none());
    let timed = run_checks(&specs, RunOptions { exec: Exec::Sequential, timing: true });
    assert!(timed.checks[0].elapsed_ms.is_some());
}
