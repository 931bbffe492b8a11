use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use serde_json::json;

use super::{align, exit, Alignment, BFile, Engine, Globals, Outcome, OutputRecord, ParamsSource};
use crate::closedform::{
    build_residue_forms, char_poly_root_check, eval_at, forms_to_json, particular_identity_holds,
    reconstruct_via_trig, round_guarded, trig_constants, ParticularConstants, ROUNDING_GUARD_LOG2,
};
use crate::oracle::{self, OracleError, SolutionPair, SolutionScanner};
use crate::params::{
    detect_params, validate_params, Check, DetectConfig, MultiplierParams, ParamsError,
    DEFAULT_R_MAX,
};
use crate::recurrence::{build_spec, generate, term_at, SequenceKind};

/// Residual bound for the characteristic-root check.
pub const CHAR_POLY_RESIDUAL_LOG2: f64 = -150.0;
/// Fewest oracle terms `verify` accepts as a comparison.
pub const MIN_ORACLE_TERMS: usize = 8;
/// Largest b-file index `oeis-check` will generate up to.
const MAX_BFILE_INDEX: i64 = 1_000_000;

fn square_report(k: u64, t_cap: u64) -> Outcome {
    match oracle::square_k_search(k, t_cap) {
        Ok(rep) => {
            let sols: Vec<_> = rep
                .solutions
                .iter()
                .map(|s| json!({ "t": s.t.to_string(), "xi": s.xi.to_string() }))
                .collect();
            let doc = json!({
                "k": k,
                "square": true,
                "t_cap": t_cap,
                "solutions": sols,
                "at_most_one": rep.at_most_one,
            });
            Outcome {
                stdout: format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("json value")
                ),
                stderr: format!("k = {k} is a perfect square; no infinite family exists\n"),
                code: exit::SQUARE_K,
            }
        }
        Err(e) => Outcome::fail(exit::USAGE, e.to_string()),
    }
}

/// Detects parameters, or reads them from `--params-file`.
fn load_params(k: u64, source: &ParamsSource, g: &Globals) -> Result<MultiplierParams, Outcome> {
    if let Some(path) = &source.params_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Outcome::fail(exit::USAGE, format!("{}: {e}", path.display())))?;
        let p = MultiplierParams::from_json(&text)
            .map_err(|e| Outcome::fail(exit::USAGE, format!("{}: {e}", path.display())))?;
        if p.k != k {
            return Err(Outcome::fail(
                exit::USAGE,
                format!(
                    "{} holds parameters for k = {}, not {k}",
                    path.display(),
                    p.k
                ),
            ));
        }
        return Ok(p);
    }
    let cfg = DetectConfig {
        t_cap: g.t_cap,
        r_max: DEFAULT_R_MAX,
    };
    detect_params(k, &cfg).map_err(|e| match e {
        ParamsError::Oracle(OracleError::SquareMultiplier(_)) => square_report(k, g.t_cap),
        ParamsError::Oracle(OracleError::TrivialMultiplier(_)) => {
            Outcome::fail(exit::USAGE, e.to_string())
        }
        other => Outcome::fail(
            exit::DETECTION_FAILURE,
            format!("parameter detection failed for k = {k}: {other}"),
        ),
    })
}

fn kind_value(pair: &SolutionPair, kind: SequenceKind) -> BigInt {
    match kind {
        SequenceKind::TIndex => BigInt::from(pair.t.clone()),
        SequenceKind::XiIndex => BigInt::from(pair.xi.clone()),
        SequenceKind::TValue => BigInt::from(pair.t_value.clone()),
        SequenceKind::XiValue => BigInt::from(pair.xi_value.clone()),
    }
}

fn oracle_terms(
    k: u64,
    kind: SequenceKind,
    count: usize,
    t_cap: u64,
) -> Result<Vec<BigInt>, Outcome> {
    match oracle::enumerate_solutions(k, count, t_cap) {
        Ok(sols) => Ok(sols.iter().map(|s| kind_value(s, kind)).collect()),
        Err(OracleError::SquareMultiplier(_)) => Err(square_report(k, t_cap)),
        Err(e) => Err(Outcome::fail(
            exit::USAGE,
            format!("oracle refused: {e}; use another engine or raise --t-cap"),
        )),
    }
}

fn engine_terms(
    p: Option<&MultiplierParams>,
    k: u64,
    kind: SequenceKind,
    ns: std::ops::Range<u64>,
    engine: Engine,
    g: &Globals,
) -> Result<Vec<BigInt>, Outcome> {
    let data_err = |e: &dyn std::fmt::Display| Outcome::fail(exit::USAGE, e.to_string());
    match engine {
        Engine::Oracle => {
            let all = oracle_terms(k, kind, ns.end as usize, g.t_cap)?;
            Ok(all[ns.start as usize..].to_vec())
        }
        Engine::Recurrence => {
            let spec = build_spec(p.expect("params loaded"), kind).map_err(|e| data_err(&e))?;
            Ok(spec
                .terms()
                .skip(ns.start as usize)
                .take((ns.end - ns.start) as usize)
                .collect())
        }
        Engine::Closed => {
            let forms =
                build_residue_forms(p.expect("params loaded"), kind).map_err(|e| data_err(&e))?;
            ns.map(|n| eval_at(&forms, n).map_err(|e| data_err(&e)))
                .collect()
        }
    }
}

fn params_for(
    engine: Engine,
    k: u64,
    source: &ParamsSource,
    g: &Globals,
) -> Result<Option<MultiplierParams>, Outcome> {
    if engine == Engine::Oracle {
        Ok(None)
    } else {
        load_params(k, source, g).map(Some)
    }
}

pub fn cmd_params(k: u64, g: &Globals) -> Outcome {
    match load_params(k, &ParamsSource::default(), g) {
        Ok(p) => Outcome::ok(format!("{}\n", p.to_json())),
        Err(o) => o,
    }
}

pub fn cmd_eval(
    k: u64,
    kind: SequenceKind,
    n: u64,
    engine: Engine,
    timing: bool,
    source: &ParamsSource,
    g: &Globals,
) -> Outcome {
    let p = match params_for(engine, k, source, g) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let start = Instant::now();
    let value = match engine_terms(p.as_ref(), k, kind, n..n + 1, engine, g) {
        Ok(mut v) => v.pop().expect("one term requested"),
        Err(o) => return o,
    };
    let elapsed = start.elapsed().as_nanos() as u64;
    let rec = OutputRecord {
        k,
        kind: kind.name().to_string(),
        n,
        value: value.to_string(),
        engine,
        elapsed_ns: timing.then_some(elapsed),
    };
    Outcome::ok(format!(
        "{}\n",
        serde_json::to_string(&rec).expect("record serializes")
    ))
}

pub fn cmd_generate(
    k: u64,
    kind: SequenceKind,
    count: u64,
    engine: Engine,
    bfile: bool,
    source: &ParamsSource,
    g: &Globals,
) -> Outcome {
    let p = match params_for(engine, k, source, g) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let terms = match engine_terms(p.as_ref(), k, kind, 0..count, engine, g) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let mut out = String::new();
    if bfile {
        let _ = writeln!(out, "# k={k} kind={kind} engine={}", engine.name());
    }
    for (n, v) in terms.iter().enumerate() {
        if bfile {
            let _ = writeln!(out, "{n} {v}");
        } else {
            let rec = OutputRecord {
                k,
                kind: kind.name().to_string(),
                n: n as u64,
                value: v.to_string(),
                engine,
                elapsed_ns: None,
            };
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string(&rec).expect("record serializes")
            );
        }
    }
    Outcome::ok(out)
}

pub fn cmd_closed_form(k: u64, kind: SequenceKind, source: &ParamsSource, g: &Globals) -> Outcome {
    let p = match load_params(k, source, g) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match build_residue_forms(&p, kind) {
        Ok(forms) => Outcome::ok(format!("{}\n", forms_to_json(&forms))),
        Err(e) => Outcome::fail(exit::USAGE, e.to_string()),
    }
}

fn first_difference(a: &[BigInt], b: &[BigInt]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// Every check `verify` runs, in report order.
pub fn verify_checks(p: &MultiplierParams, depth: u64, g: &Globals) -> Vec<Check> {
    let mut checks: Vec<Check> = validate_params(p, 0, g.t_cap)
        .checks
        .into_iter()
        .map(|c| Check::new(format!("params.{}", c.name), c.passed, c.detail))
        .collect();
    let count = depth as usize + 1;

    // Recurrence terms per kind; everything else is compared to these.
    let mut rec: Vec<(SequenceKind, Vec<BigInt>)> = Vec::new();
    for kind in SequenceKind::ALL {
        match build_spec(p, kind) {
            Ok(spec) => rec.push((kind, generate(&spec, count + 1))),
            Err(e) => checks.push(Check::new(
                format!("recurrence.{kind}"),
                false,
                e.to_string(),
            )),
        }
    }

    // Oracle: the recurrence must list exactly the solutions with t ≤ cap.
    let mut scanner = SolutionScanner::new(p.k, g.t_cap);
    let sols: Vec<SolutionPair> = scanner.by_ref().take(count).collect();
    let complete = scanner.exhausted();
    for (kind, terms) in &rec {
        let truth: Vec<BigInt> = sols.iter().map(|s| kind_value(s, *kind)).collect();
        let m = truth.len();
        let name = format!("oracle.{kind}");
        let check = if let Some(i) = first_difference(&truth, terms) {
            Check::new(
                name,
                false,
                format!("n = {i}: oracle {} vs recurrence {}", truth[i], terms[i]),
            )
        } else if m < MIN_ORACLE_TERMS.min(count) {
            Check::new(
                name,
                false,
                format!("only {m} oracle terms below t cap {}", g.t_cap),
            )
        } else if complete && m < count && !recurrence_exceeds_cap(&rec, m, g.t_cap) {
            Check::new(
                name,
                false,
                format!("oracle stops at {m} terms but t_{m} is within the cap"),
            )
        } else {
            Check::new(name, true, format!("{m} terms agree"))
        };
        checks.push(check);
    }

    for (kind, terms) in &rec {
        let name = format!("closed.{kind}");
        let check = match build_residue_forms(p, *kind) {
            Err(e) => Check::new(name, false, e.to_string()),
            Ok(forms) => {
                let bad = (0..count).find_map(|n| match eval_at(&forms, n as u64) {
                    Ok(v) if v == terms[n] => None,
                    Ok(v) => Some(format!("n = {n}: closed {v} vs recurrence {}", terms[n])),
                    Err(e) => Some(e.to_string()),
                });
                match bad {
                    None => Check::new(name, true, format!("n = 0..{depth} agree")),
                    Some(d) => Check::new(name, false, d),
                }
            }
        };
        checks.push(check);
    }

    let get = |kind| {
        rec.iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, v)| &v[..count])
    };
    if let (Some(t), Some(xi), Some(tt), Some(txi)) = (
        get(SequenceKind::TIndex),
        get(SequenceKind::XiIndex),
        get(SequenceKind::TValue),
        get(SequenceKind::XiValue),
    ) {
        let bad = (0..count).find(|&n| {
            BigInt::from(oracle::triangular(&t[n])) != tt[n]
                || BigInt::from(oracle::triangular(&xi[n])) != txi[n]
                || &tt[n] * p.k != txi[n]
        });
        checks.push(match bad {
            None => Check::new(
                "identity",
                true,
                format!(
                    "T_xi = {}·T_t and T(t), T(xi) consistent for n = 0..{depth}",
                    p.k
                ),
            ),
            Some(n) => Check::new("identity", false, format!("fails at n = {n}")),
        });
    }

    let taus = ParticularConstants::for_params(p);
    for kind in SequenceKind::ALL {
        let tau = taus.for_kind(kind);
        let name = format!("particular.{kind}");
        checks.push(match build_spec(p, kind) {
            Ok(spec) => Check::new(
                name,
                particular_identity_holds(&spec, tau),
                format!("tau = {tau}"),
            ),
            Err(e) => Check::new(name, false, e.to_string()),
        });
    }

    let cp = char_poly_root_check(p, g.precision);
    let worst = cp.max_residual_log2();
    checks.push(Check::new(
        "charpoly",
        worst < CHAR_POLY_RESIDUAL_LOG2,
        format!("{} roots, max residual 2^{worst:.1}", 2 * cp.rank),
    ));

    if let Some(t) = get(SequenceKind::TIndex) {
        checks.push(trig_check(p, t, g.precision));
    }
    checks
}

fn recurrence_exceeds_cap(rec: &[(SequenceKind, Vec<BigInt>)], m: usize, t_cap: u64) -> bool {
    rec.iter()
        .find(|(k, _)| *k == SequenceKind::TIndex)
        .and_then(|(_, t)| t.get(m))
        .is_some_and(|tm| *tm > BigInt::from(t_cap))
}

/// Rounds the numeric trigonometric form against the exact `t_n`. The working
/// precision is raised above `floor` when the largest term needs it.
fn trig_check(p: &MultiplierParams, t: &[BigInt], floor: u32) -> Check {
    if p.r > 4 {
        return Check::new(
            "trig",
            true,
            format!("skipped: no explicit constants for rank {}", p.r),
        );
    }
    let top_bits = t.iter().map(|x| x.bits()).max().unwrap_or(0) as u32;
    let prec = floor.max(top_bits + 96);
    let c = match trig_constants(p, prec) {
        Ok(c) => c,
        Err(e) => return Check::new("trig", false, e.to_string()),
    };
    let bad = t.iter().enumerate().find_map(|(n, want)| {
        let n = n as u64;
        match round_guarded(&reconstruct_via_trig(&c, n), n, ROUNDING_GUARD_LOG2) {
            Ok(v) if &v == want => None,
            Ok(v) => Some(format!("n = {n}: rounds to {v}, exact {want}")),
            Err(e) => Some(e.to_string()),
        }
    });
    match bad {
        None => Check::new(
            "trig",
            true,
            format!("n = 0..{} round to exact terms at {prec} bits", t.len() - 1),
        ),
        Some(d) => Check::new("trig", false, d),
    }
}

pub fn cmd_verify(k: u64, depth: u64, source: &ParamsSource, g: &Globals) -> Outcome {
    let p = match load_params(k, source, g) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let checks = verify_checks(&p, depth, g);
    let mut out = String::new();
    for c in &checks {
        let _ = writeln!(out, "{c}");
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        out,
        "verify k={k} r={} depth={depth}: {passed}/{} checks passed",
        p.r,
        checks.len()
    );
    Outcome {
        stdout: out,
        stderr: String::new(),
        code: if passed == checks.len() {
            exit::SUCCESS
        } else {
            exit::MISMATCH
        },
    }
}

pub fn cmd_oeis_check(
    k: u64,
    kind: SequenceKind,
    path: &Path,
    source: &ParamsSource,
    g: &Globals,
) -> Outcome {
    let b = match BFile::read(path) {
        Ok(b) => b,
        Err(e) => return Outcome::fail(exit::USAGE, format!("{}: {e}", path.display())),
    };
    let last = b.entries.last().expect("non-empty").0;
    if last > MAX_BFILE_INDEX {
        return Outcome::fail(
            exit::USAGE,
            format!("index {last} exceeds {MAX_BFILE_INDEX}"),
        );
    }
    let p = match load_params(k, source, g) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let spec = match build_spec(&p, kind) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(exit::USAGE, e.to_string()),
    };
    let max_shift = super::SHIFTS.iter().max().copied().unwrap_or(0);
    let seq = generate(&spec, (last + max_shift + 1).max(0) as usize);
    let id = b.id.clone().unwrap_or_else(|| path.display().to_string());
    match align(&b, &seq) {
        Alignment::Match { shift, compared } => Outcome::ok(format!(
            "match: k={k} kind={kind} {id}: {compared} terms agree at shift {shift} (file n = {} is term {})\n",
            b.first_index(),
            b.first_index() + shift
        )),
        Alignment::Mismatch {
            shift,
            n,
            expected,
            found,
        } => {
            let expected = expected.map_or_else(|| "nothing".to_string(), |v| v.to_string());
            Outcome {
                stdout: format!(
                    "mismatch: k={k} kind={kind} {id}: no shift in -2..2 aligns; best shift {shift} fails at file n = {n}: file {found}, sequence {expected}\n"
                ),
                stderr: String::new(),
                code: exit::MISMATCH,
            }
        }
    }
}

pub fn cmd_bench(
    k: u64,
    kind: SequenceKind,
    ns: &[u64],
    source: &ParamsSource,
    g: &Globals,
) -> Outcome {
    let p = match load_params(k, source, g) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let (forms, spec) = match (build_residue_forms(&p, kind), build_spec(&p, kind)) {
        (Ok(f), Ok(s)) => (f, s),
        (Err(e), _) => return Outcome::fail(exit::USAGE, e.to_string()),
        (_, Err(e)) => return Outcome::fail(exit::USAGE, e.to_string()),
    };
    let mut out = String::from("k,kind,n,closed_ns,recur_ns,equal\n");
    let mut all_equal = true;
    for &n in ns {
        let t0 = Instant::now();
        let closed = eval_at(&forms, n);
        let closed_ns = t0.elapsed().as_nanos();
        let t1 = Instant::now();
        let recur = term_at(&spec, n as usize);
        let recur_ns = t1.elapsed().as_nanos();
        let equal = closed.as_ref().is_ok_and(|v| *v == recur);
        all_equal &= equal;
        let _ = writeln!(out, "{k},{kind},{n},{closed_ns},{recur_ns},{equal}");
    }
    Outcome {
        stdout: out,
        stderr: String::new(),
        code: if all_equal {
            exit::SUCCESS
        } else {
            exit::MISMATCH
        },
    }
}
