//! `is102`: counting tables, bijection maps, series checks and the
//! conformance suite from the command line.

use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use is102::bijection::{is_to_tiling, phi, phi_inv, psi, psi_inv, schroeder_to_is, tiling_to_is, Tiling, enumerate_tilings};
use is102::formula::{count_102_rank, count_pair_rank, count_top_rank, BigCount, CountQuery, Tau};
use is102::fpath::{enumerate_lf, LabeledFPath};
use is102::harness::{default_suite, run_checks, CheckFamily, CheckSpec, RunOptions};
use is102::paths::{
    enumerate_dyck, enumerate_schroeder, enumerate_uvd, schroeder_to_uvd, uvd_to_schroeder, validate_schroeder, validate_uvd,
};
use is102::sequence::{enumerate_is_with, pat, pattern_102, IS_GUARD};
use is102::series::{named_series, verify_identity, IdentityId, MAX_U_ORDER};
use is102::{Exec, InversionSequence};

#[derive(Parser, Debug)]
#[command(name = "is102", version, about = "Rank-refined enumeration of 102-avoiding inversion sequences and the bijections behind it")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Bfile,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a closed-form count, optionally checked against enumeration.
    Count {
        /// Second avoided pattern (101, 001, 011, 012, 021, 120, 201, 210, 110); omit for 102 alone.
        #[arg(long)]
        tau: Option<Tau>,
        #[arg(long)]
        n: usize,
        /// Rank.
        #[arg(long)]
        t: usize,
        /// Maximum entry (tau = 201 only).
        #[arg(long)]
        m: Option<usize>,
        /// With --m: count sequences containing 101 instead of avoiding it.
        #[arg(long)]
        contains_101: bool,
        /// Also count by brute force.
        #[arg(long)]
        oracle: bool,
    },
    /// Table of counts, one row per n and one column per rank (CSV by default).
    Table {
        #[arg(long)]
        tau: Option<Tau>,
        #[arg(long)]
        n_max: usize,
    },
    /// List every object of a family of size n (board length for `tiling`).
    Enumerate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Second avoided pattern for `is`.
        #[arg(long)]
        tau: Option<Tau>,
    },
    /// Push one object through a map. Input comes from --input or stdin.
    Map {
        #[arg(value_enum)]
        map: MapKind,
        #[arg(long)]
        input: Option<String>,
        /// Sequence length for `tiling-inv` (defaults to board length / 2 + 1).
        #[arg(long)]
        n: Option<usize>,
        /// Also emit the lattice points of a path result as JSON.
        #[arg(long)]
        coords: bool,
    },
    /// Truncated power series.
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Run the conformance suite (or chosen families). Exit code 1 on any failure.
    Verify {
        /// Check family such as `bijection-phi` or `formula-pair(012)`; repeatable.
        #[arg(long)]
        family: Vec<CheckFamily>,
        /// Size for every selected family (x-order for identities).
        #[arg(long)]
        n_max: Option<usize>,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<std::path::PathBuf>,
        /// Record wall time per check.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    /// Check one identity (or all) coefficient by coefficient.
    Verify {
        /// Identity tag such as D_CUBIC; omit for all.
        #[arg(long)]
        id: Option<IdentityId>,
        #[arg(long, default_value_t = 24)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        u_order: usize,
    },
    /// Print coefficients of a named series: A, D, D0, Dt, E, C, A0, B0, Gt, Ht.
    Coeffs {
        #[arg(long)]
        id: String,
        #[arg(long)]
        order: usize,
        /// Rank for Dt, Gt, Ht.
        #[arg(long, default_value_t = 0)]
        t: usize,
        /// Index printed for the constant term in b-file output.
        #[arg(long, default_value_t = 0)]
        offset: i64,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    Is,
    Uvd,
    Schroeder,
    Dyck,
    Lf,
    Tiling,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MapKind {
    /// labeled F-path -> inversion sequence
    Phi,
    /// inversion sequence -> labeled F-path
    PhiInv,
    /// labeled F-path -> UVD path
    Psi,
    /// UVD path -> labeled F-path
    PsiInv,
    /// 2-Schroeder path -> UVD path
    M,
    /// UVD path -> 2-Schroeder path
    MInv,
    /// 2-Schroeder path -> inversion sequence
    SpToIs,
    /// (102, 012)-avoiding inversion sequence -> tiling
    Tiling,
    /// tiling -> inversion sequence
    TilingInv,
}

/// A failed run: usage problems exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Check,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<is102::Error> for Failure {
    fn from(e: is102::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Count { tau, n, t, m, contains_101, oracle } => count(fmt, exec, tau, n, t, m, contains_101, oracle),
        Cmd::Table { tau, n_max } => table(fmt, tau, n_max),
        Cmd::Enumerate { family, n, tau } => enumerate(fmt, exec, family, n, tau),
        Cmd::Map { map, input, n, coords } => map_one(fmt, map, input, n, coords),
        Cmd::Series { cmd: SeriesCmd::Verify { id, order, u_order } } => series_verify(fmt, id, order, u_order),
        Cmd::Series { cmd: SeriesCmd::Coeffs { id, order, t, offset } } => series_coeffs(fmt, &id, order, t, offset),
        Cmd::Verify { family, n_max, json, timing } => verify(fmt, exec, family, n_max, json, timing),
    }
}

fn only(fmt: Option<Format>, allowed: &[Format]) -> Result<Format> {
    let f = fmt.unwrap_or(allowed[0]);
    if !allowed.contains(&f) {
        bail!("--format {f:?} is not available here; choose one of {allowed:?}");
    }
    Ok(f)
}

fn print_json(v: &Value, f: Format) {
    match f {
        Format::Pretty => println!("{}", serde_json::to_string_pretty(v).expect("json")),
        _ => println!("{v}"),
    }
}

/// JSON number when it fits in u64, decimal string otherwise.
fn count_value(c: &BigCount) -> Value {
    match u64::try_from(&c.0) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn count(
    fmt: Option<Format>,
    exec: Exec,
    tau: Option<Tau>,
    n: usize,
    t: usize,
    m: Option<usize>,
    contains_101: bool,
    oracle: bool,
) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Json, Format::Pretty])?;
    if contains_101 && m.is_none() {
        return Err(anyhow!("--contains-101 needs --m").into());
    }
    let query = CountQuery { n, t, tau, m, contains_101: m.map(|_| contains_101) };
    let value = query.evaluate()?;
    let mut out = json!({"query": query, "value": count_value(&value)});
    let mut ok = true;
    if oracle {
        let mut avoid = vec![pattern_102()];
        avoid.extend(tau.map(Tau::pattern));
        let p101 = pat("101");
        let found = enumerate_is_with(n, &avoid, IS_GUARD, exec)?
            .iter()
            .filter(|e| e.rank_value() == t as i64)
            .filter(|e| m.is_none_or(|m| e.max_value() as usize == m && e.contains(&p101) == contains_101))
            .count();
        let found = BigCount::from(found);
        ok = found == value;
        out["oracle_value"] = count_value(&found);
        out["match"] = json!(ok);
    }
    print_json(&out, f);
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn table(fmt: Option<Format>, tau: Option<Tau>, n_max: usize) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Csv, Format::Json])?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n);
        for t in 0..n {
            let c = match tau {
                None => count_102_rank(n, t)?,
                Some(tau) if t + 1 == n => BigCount::from(count_top_rank(tau, n)),
                Some(tau) => count_pair_rank(tau, n, t)?,
            };
            row.push(c.to_string());
        }
        rows.push(row);
    }
    if f == Format::Json {
        let tau = tau.map(|t| t.as_str());
        print_json(&json!({"tau": tau, "rows": rows}), f);
        return Ok(());
    }
    let header: Vec<String> = std::iter::once("n".to_string()).chain((0..n_max).map(|t| format!("t={t}"))).collect();
    println!("{}", header.join(","));
    for (i, row) in rows.iter().enumerate() {
        let mut cells = vec![(i + 1).to_string()];
        cells.extend(row.iter().cloned());
        cells.resize(n_max + 1, String::new());
        println!("{}", cells.join(","));
    }
    Ok(())
}

fn enumerate(fmt: Option<Format>, exec: Exec, family: Family, n: usize, tau: Option<Tau>) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Pretty, Format::Json])?;
    if tau.is_some() && !matches!(family, Family::Is) {
        return Err(anyhow!("--tau only applies to `enumerate is`").into());
    }
    let items: Vec<(String, Value)> = match family {
        Family::Is => {
            let mut avoid = vec![pattern_102()];
            avoid.extend(tau.map(Tau::pattern));
            enumerate_is_with(n, &avoid, IS_GUARD, exec)?.into_iter().map(|e| (e.to_string(), json!(e))).collect()
        }
        Family::Uvd => enumerate_uvd(n)?.into_iter().map(|p| (p.to_string(), json!(p))).collect(),
        Family::Schroeder => enumerate_schroeder(n)?.into_iter().map(|p| (p.to_string(), json!(p))).collect(),
        Family::Dyck => enumerate_dyck(n)?.into_iter().map(|p| (p.to_string(), json!(p))).collect(),
        Family::Lf => enumerate_lf(n)?.into_iter().map(|q| (q.to_json(), json!(q))).collect(),
        Family::Tiling => enumerate_tilings(n).into_iter().map(|t| (t.to_string(), json!(t))).collect(),
    };
    if f == Format::Json {
        println!("{}", Value::Array(items.into_iter().map(|(_, v)| v).collect()));
    } else {
        for (s, _) in items {
            println!("{s}");
        }
    }
    Ok(())
}

fn read_input(input: Option<String>) -> Result<String> {
    let raw = match input {
        Some(s) => s,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        }
    };
    Ok(raw.trim().to_string())
}

/// Accepts a bare word or a JSON string.
fn word(input: &str) -> Result<String> {
    if input.starts_with('"') {
        Ok(serde_json::from_str(input).context("parsing JSON string")?)
    } else {
        Ok(input.to_string())
    }
}

fn sequence(input: &str) -> Result<InversionSequence> {
    if input.starts_with('[') {
        return serde_json::from_str(input).context("parsing inversion sequence");
    }
    let digits = input
        .chars()
        .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
        .map(|c| c.to_digit(10).ok_or_else(|| anyhow!("bad entry {c:?}; use a JSON array for entries above 9")))
        .collect::<Result<Vec<u32>>>()?;
    Ok(InversionSequence::new(digits)?)
}

fn lf_path(input: &str) -> Result<LabeledFPath> {
    serde_json::from_str(input).context("parsing labeled F-path JSON")
}

fn map_one(fmt: Option<Format>, map: MapKind, input: Option<String>, n: Option<usize>, coords: bool) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Json, Format::Pretty])?;
    let input = read_input(input)?;
    let (json_out, pretty, points): (Value, String, Option<Vec<(i64, i64)>>) = match map {
        MapKind::Phi => {
            let e = phi(&lf_path(&input)?);
            (json!(e), e.to_string(), None)
        }
        MapKind::PhiInv => {
            let q = phi_inv(&sequence(&input)?)?;
            (json!(q), q.to_string(), Some(q.points()))
        }
        MapKind::Psi => {
            let s = psi(&lf_path(&input)?);
            (json!(s), s.to_string(), Some(s.coordinates()))
        }
        MapKind::PsiInv => {
            let q = psi_inv(&validate_uvd(&word(&input)?)?)?;
            (json!(q), q.to_string(), Some(q.points()))
        }
        MapKind::M => {
            let s = schroeder_to_uvd(&validate_schroeder(&word(&input)?)?);
            (json!(s), s.to_string(), Some(s.coordinates()))
        }
        MapKind::MInv => {
            let p = uvd_to_schroeder(&validate_uvd(&word(&input)?)?);
            (json!(p), p.to_string(), Some(p.coordinates()))
        }
        MapKind::SpToIs => {
            let e = schroeder_to_is(&validate_schroeder(&word(&input)?)?)?;
            (json!(e), e.to_string(), None)
        }
        MapKind::Tiling => {
            let t = is_to_tiling(&sequence(&input)?)?;
            (json!(t), t.to_string(), None)
        }
        MapKind::TilingInv => {
            let t = Tiling::parse(&word(&input)?)?;
            let n = n.unwrap_or(t.board_length() / 2 + 1);
            let e = tiling_to_is(&t, n)?;
            (json!(e), e.to_string(), None)
        }
    };
    if coords {
        let points = points.ok_or_else(|| anyhow!("--coords needs a map whose result is a path"))?;
        print_json(&json!({"value": json_out, "coords": points}), f);
        return Ok(());
    }
    match f {
        Format::Pretty => println!("{pretty}"),
        _ => println!("{json_out}"),
    }
    Ok(())
}

fn series_verify(fmt: Option<Format>, id: Option<IdentityId>, order: usize, u_order: usize) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Json, Format::Pretty])?;
    if u_order > MAX_U_ORDER {
        return Err(anyhow!("--u-order {u_order} exceeds {MAX_U_ORDER}").into());
    }
    let ids: Vec<IdentityId> = match id {
        Some(id) => vec![id],
        None => IdentityId::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(verify_identity(id, order, u_order)?);
    }
    let all = reports.iter().all(|r| r.holds);
    let out = if reports.len() == 1 { json!(reports[0]) } else { json!({"all_hold": all, "reports": reports}) };
    print_json(&out, f);
    if all {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn series_coeffs(fmt: Option<Format>, id: &str, order: usize, t: usize, offset: i64) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Bfile, Format::Json, Format::Csv])?;
    let s = named_series(id, order, t)?;
    let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
    match f {
        Format::Json => print_json(&json!({"id": id, "order": order, "t": t, "coeffs": coeffs}), f),
        Format::Csv => println!("{}", coeffs.join(",")),
        _ => {
            for (k, c) in coeffs.iter().enumerate() {
                println!("{} {c}", k as i64 + offset);
            }
        }
    }
    Ok(())
}

fn verify(
    fmt: Option<Format>,
    exec: Exec,
    families: Vec<CheckFamily>,
    n_max: Option<usize>,
    out: Option<std::path::PathBuf>,
    timing: bool,
) -> Result<(), Failure> {
    let f = only(fmt, &[Format::Json, Format::Pretty])?;
    let mut specs: Vec<CheckSpec> = if families.is_empty() {
        default_suite()
    } else {
        families.into_iter().map(CheckSpec::with_default).collect()
    };
    if let Some(k) = n_max {
        for s in &mut specs {
            s.n_max = k;
        }
    }
    let report = run_checks(&specs, RunOptions { exec, timing });
    let v = json!(report);
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&v).expect("json");
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&v, f);
    for c in report.checks.iter().filter(|c| c.status != is102::harness::CheckStatus::Pass) {
        eprintln!("{} (n_max {}): {:?} {}", c.family, c.n_max, c.status, c.detail.as_deref().unwrap_or(""));
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_forms() {
        let e = sequence("[0,1,1]").unwrap();
        assert_eq!(sequence("011").unwrap(), e);
        assert_eq!(sequence("(0, 1, 1)").unwrap(), e);
        assert!(sequence("0x1").is_err());
        assert!(sequence("02").is_err());
    }

    #[test]
    fn words_may_be_quoted() {
        assert_eq!(word("\"ud\"").unwrap(), "ud");
        assert_eq!(word("ud").unwrap(), "ud");
    }

    #[test]
    fn format_restrictions() {
        assert_eq!(only(None, &[Format::Csv, Format::Json]).unwrap(), Format::Csv);
        assert!(only(Some(Format::Bfile), &[Format::Json]).is_err());
    }

    #[test]
    fn parser_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
