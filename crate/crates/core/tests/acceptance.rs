//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its PASS/FAIL line even when all of them pass.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use trimult::cli::{cmd_oeis_check, exit, Globals, ParamsSource};
use trimult::closedform::{
    audit_constant_sets, build_residue_forms, char_poly_root_check, eval_at,
    particular_identity_holds, reconstruct_via_trig, round_guarded, trig_constants,
    ParticularConstants,
};
use trimult::exactmath::{mul_count, reset_mul_count, BigRat};
use trimult::oracle::{self, triangular, SolutionScanner, DEFAULT_T_CAP};
use trimult::params::{detect_params, validate_params, DetectConfig, MultiplierParams};
use trimult::recurrence::{build_spec, generate, term_at, SequenceKind};

const KNOWN_K: [u64; 6] = [2, 3, 5, 8, 10, 13];

// Pinned tolerances and budgets.
const DETECT_BUDGET: Duration = Duration::from_secs(10);
const ENGINE_DEPTH: usize = 200;
const MIN_ORACLE_TERMS: usize = 8;
const PELL_K_MAX: u64 = 50;
const TRIG_N_MAX: u64 = 50;
const TRIG_GUARD_LOG2: i64 = -32;
const NUMERIC_PRECISION: u32 = 256;
const CHAR_POLY_RESIDUAL_LOG2: f64 = -150.0;
const SQUARE_T_CAP: u64 = 1_000_000;
const EVAL_N: u64 = 1_000_000;
const EVAL_BUDGET: Duration = Duration::from_secs(1);
const RECURRENCE_N: u64 = 100_000;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn detect(k: u64) -> Result<MultiplierParams, String> {
    detect_params(k, &DetectConfig::default()).map_err(|e| format!("k={k}: {e}"))
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn c1_parameters() -> Verdict {
    let start = Instant::now();
    let expected: [(u64, usize, i64, &[i64]); 6] = [
        (2, 1, 2, &[]),
        (3, 1, 1, &[]),
        (5, 2, 8, &[]),
        (8, 2, 16, &[5]),
        (10, 3, 18, &[1, 6]),
        (13, 4, 648, &[3, 21, 234]),
    ];
    for (k, r, kappa, seeds) in expected {
        let p = detect(k)?;
        ensure(p.r == r, format!("k={k}: r={} want {r}", p.r))?;
        ensure(
            p.kappa == int(kappa),
            format!("k={k}: kappa={} want {kappa}", p.kappa),
        )?;
        for (i, &t) in seeds.iter().enumerate() {
            ensure(
                p.seeds[i + 1] == int(t),
                format!("k={k}: t_{} = {}", i + 1, p.seeds[i + 1]),
            )?;
        }
    }
    let took = start.elapsed();
    ensure(took < DETECT_BUDGET, format!("took {took:?}"))?;
    Ok(format!("six parameter sets reproduced in {took:.2?}"))
}

fn closed_value(k: u64, kind: SequenceKind, n: u64) -> Result<BigInt, String> {
    let forms = build_residue_forms(&detect(k)?, kind).map_err(|e| e.to_string())?;
    eval_at(&forms, n).map_err(|e| e.to_string())
}

fn c2_spot_values() -> Verdict {
    let cases = [
        (2, SequenceKind::TIndex, 1, 2),
        (2, SequenceKind::TIndex, 2, 14),
        (2, SequenceKind::TValue, 1, 3),
        (5, SequenceKind::TIndex, 2, 6),
        (5, SequenceKind::TIndex, 3, 44),
    ];
    for (k, kind, n, want) in cases {
        let got = closed_value(k, kind, n)?;
        ensure(
            got == int(want),
            format!("k={k} {kind}_{n} = {got}, want {want}"),
        )?;
    }
    Ok(format!("{} exact values", cases.len()))
}

fn c3_engines() -> Verdict {
    let mut oracle_terms = Vec::new();
    for k in KNOWN_K {
        let p = detect(k)?;
        let sols: Vec<_> = SolutionScanner::new(k, DEFAULT_T_CAP)
            .take(ENGINE_DEPTH + 1)
            .collect();
        ensure(
            sols.len() >= MIN_ORACLE_TERMS,
            format!("k={k}: {} oracle terms", sols.len()),
        )?;
        oracle_terms.push(format!("{k}:{}", sols.len()));
        for kind in SequenceKind::ALL {
            let spec = build_spec(&p, kind).map_err(|e| e.to_string())?;
            let rec = generate(&spec, ENGINE_DEPTH + 1);
            let forms = build_residue_forms(&p, kind).map_err(|e| e.to_string())?;
            for (n, want) in rec.iter().enumerate() {
                let got = eval_at(&forms, n as u64).map_err(|e| e.to_string())?;
                ensure(
                    &got == want,
                    format!("k={k} {kind}_{n}: closed {got} vs recurrence {want}"),
                )?;
            }
            for (n, s) in sols.iter().enumerate() {
                let truth: BigInt = match kind {
                    SequenceKind::TIndex => s.t.clone().into(),
                    SequenceKind::XiIndex => s.xi.clone().into(),
                    SequenceKind::TValue => s.t_value.clone().into(),
                    SequenceKind::XiValue => s.xi_value.clone().into(),
                };
                ensure(
                    truth == rec[n],
                    format!("k={k} {kind}_{n}: oracle {truth} vs {}", rec[n]),
                )?;
            }
        }
    }
    Ok(format!(
        "n <= {ENGINE_DEPTH}, four kinds; oracle terms per k {}",
        oracle_terms.join(" ")
    ))
}

fn c4_identity() -> Verdict {
    let mut checked = 0;
    for k in KNOWN_K {
        let p = detect(k)?;
        let seq = |kind| -> Result<Vec<BigInt>, String> {
            Ok(generate(
                &build_spec(&p, kind).map_err(|e| e.to_string())?,
                ENGINE_DEPTH + 1,
            ))
        };
        let (t, xi) = (seq(SequenceKind::TIndex)?, seq(SequenceKind::XiIndex)?);
        let (tt, txi) = (seq(SequenceKind::TValue)?, seq(SequenceKind::XiValue)?);
        for n in 0..=ENGINE_DEPTH {
            let lhs = BigInt::from(triangular(&xi[n]));
            let rhs = BigInt::from(triangular(&t[n])) * k;
            ensure(lhs == rhs, format!("k={k} n={n}: T_xi != k T_t"))?;
            ensure(
                txi[n] == &tt[n] * k,
                format!("k={k} n={n}: value sequences disagree"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (k, n) pairs"))
}

fn c5_particular() -> Verdict {
    for k in KNOWN_K {
        let p = detect(k)?;
        let taus = ParticularConstants::for_params(&p);
        for kind in SequenceKind::ALL {
            let spec = build_spec(&p, kind).map_err(|e| e.to_string())?;
            ensure(
                particular_identity_holds(&spec, taus.for_kind(kind)),
                format!("k={k} {kind}: identity fails"),
            )?;
        }
    }
    let rat = |s: &str| s.parse::<BigRat>().expect("literal");
    for (k, tt, txi) in [
        (2, "-3/32", "-3/16"),
        (3, "-1/12", "-1/4"),
        (8, "-9/128", "-9/16"),
    ] {
        let taus = ParticularConstants::for_params(&detect(k)?);
        ensure(taus.tau_index == rat("-1/2"), format!("k={k}: index tau"))?;
        ensure(
            taus.tau_t_value == rat(tt),
            format!("k={k}: {} want {tt}", taus.tau_t_value),
        )?;
        ensure(
            taus.tau_xi_value == rat(txi),
            format!("k={k}: {} want {txi}", taus.tau_xi_value),
        )?;
    }
    Ok("identities exact; -3/32 -3/16 -1/12 -1/4 -9/128 -9/16 reproduced".into())
}

fn c6_pell() -> Verdict {
    let mut detected = Vec::new();
    let mut undetected = Vec::new();
    for k in (2..=PELL_K_MAX).filter(|&k| !oracle::is_square(k)) {
        match detect_params(k, &DetectConfig::default()) {
            Ok(p) => {
                ensure(
                    p.theta.norm() == BigRat::one(),
                    format!("k={k}: norm {}", p.theta.norm()),
                )?;
                let rep = validate_params(&p, 0, DEFAULT_T_CAP);
                ensure(rep.all_passed(), format!("k={k}: validation failed"))?;
                detected.push(k);
            }
            Err(_) => undetected.push(k),
        }
    }
    for k in KNOWN_K {
        ensure(detected.contains(&k), format!("k={k} not detected"))?;
    }
    Ok(format!(
        "norm 1 for all {} detected k <= {PELL_K_MAX}; cap {DEFAULT_T_CAP} leaves {:?} undetected",
        detected.len(),
        undetected
    ))
}

fn c7_trig() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    let mut note = String::new();
    for k in KNOWN_K {
        let p = detect(k)?;
        let c = trig_constants(&p, NUMERIC_PRECISION).map_err(|e| e.to_string())?;
        let exact = generate(
            &build_spec(&p, SequenceKind::TIndex).map_err(|e| e.to_string())?,
            TRIG_N_MAX as usize + 1,
        );
        for n in 0..=TRIG_N_MAX {
            let x = reconstruct_via_trig(&c, n);
            let got = round_guarded(&x, n, TRIG_GUARD_LOG2).map_err(|e| format!("k={k}: {e}"))?;
            ensure(
                got == exact[n as usize],
                format!("k={k} n={n}: {got} vs {}", exact[n as usize]),
            )?;
            let d = x.distance_to_nearest_integer();
            if !d.is_zero() {
                worst = worst.max(d.log2_abs());
            }
        }
        if p.r == 3 {
            let audit =
                audit_constant_sets(&p, NUMERIC_PRECISION, &exact).map_err(|e| e.to_string())?;
            note = format!(
                "; k={k} literal {:?} fails from n={:?}, amended set used",
                audit.differing, audit.literal_first_failure
            );
        }
    }
    Ok(format!(
        "n <= {TRIG_N_MAX}, worst distance 2^{worst:.1}{note}"
    ))
}

fn c8_char_poly() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for k in KNOWN_K {
        let rep = char_poly_root_check(&detect(k)?, NUMERIC_PRECISION);
        let w = rep.max_residual_log2();
        ensure(
            rep.residuals.len() == 2 * rep.rank,
            format!("k={k}: root count"),
        )?;
        ensure(
            w < CHAR_POLY_RESIDUAL_LOG2,
            format!("k={k}: residual 2^{w:.1}"),
        )?;
        worst = worst.max(w);
    }
    Ok(format!("max residual 2^{worst:.1}"))
}

fn c9_square_k() -> Verdict {
    for k in [4u64, 9, 16, 25] {
        let rep = oracle::square_k_search(k, SQUARE_T_CAP).map_err(|e| e.to_string())?;
        ensure(
            rep.solutions.is_empty(),
            format!("k={k}: {} solutions", rep.solutions.len()),
        )?;
    }
    let rep = oracle::square_k_search(36, SQUARE_T_CAP).map_err(|e| e.to_string())?;
    ensure(
        rep.solutions.len() == 1,
        format!("k=36: {} solutions", rep.solutions.len()),
    )?;
    let s = &rep.solutions[0];
    ensure(
        s.t_u64() == Some(1) && s.xi == 8u32.into(),
        format!("k=36: (t, xi) = ({}, {})", s.t, s.xi),
    )?;
    // The wheel-free scan must agree.
    for k in [4u64, 9, 16, 25, 36] {
        let naive: Vec<u64> = oracle::linear_scan(k, SQUARE_T_CAP)
            .into_iter()
            .filter(|&t| t > 0)
            .collect();
        let wheel: Vec<u64> = oracle::square_k_search(k, SQUARE_T_CAP)
            .map_err(|e| e.to_string())?
            .solutions
            .iter()
            .filter_map(|s| s.t_u64())
            .collect();
        ensure(
            naive == wheel,
            format!("k={k}: linear scan {naive:?} vs {wheel:?}"),
        )?;
    }
    Ok("k = 4, 9, 16, 25: none; k = 36: (1, 8)".into())
}

fn c10_performance() -> Verdict {
    let p = detect(2)?;
    let forms = build_residue_forms(&p, SequenceKind::TIndex).map_err(|e| e.to_string())?;
    let budget = 2 * (EVAL_N as f64).log2().ceil() as u64 + 4;
    reset_mul_count();
    let start = Instant::now();
    let v = eval_at(&forms, EVAL_N).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let muls = mul_count();
    ensure(
        muls <= budget,
        format!("{muls} multiplications, budget {budget}"),
    )?;
    ensure(took < EVAL_BUDGET, format!("eval took {took:?}"))?;
    let spec = build_spec(&p, SequenceKind::TIndex).map_err(|e| e.to_string())?;
    let rec = term_at(&spec, RECURRENCE_N as usize);
    let closed = eval_at(&forms, RECURRENCE_N).map_err(|e| e.to_string())?;
    ensure(rec == closed, format!("n={RECURRENCE_N}: engines disagree"))?;
    Ok(format!(
        "n={EVAL_N}: {muls} <= {budget} multiplications, {took:.2?}, {} bits; n={RECURRENCE_N} agrees",
        v.bits()
    ))
}

fn c11_oeis() -> Verdict {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let cases = [
        (2, SequenceKind::TIndex, "b053141.txt"),
        (2, SequenceKind::XiIndex, "b001652.txt"),
        (2, SequenceKind::TValue, "b075528.txt"),
        (2, SequenceKind::XiValue, "b029549.txt"),
        (5, SequenceKind::TIndex, "b077259.txt"),
    ];
    let g = Globals::default();
    for (k, kind, file) in cases {
        let out = cmd_oeis_check(k, kind, &dir.join(file), &ParamsSource::default(), &g);
        ensure(
            out.code == exit::SUCCESS && out.stdout.starts_with("match"),
            format!("{file}: {}{}", out.stdout.trim(), out.stderr.trim()),
        )?;
    }
    Ok(format!("{} b-files match over full overlap", cases.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("parameter reproduction", c1_parameters),
        ("closed-form spot values", c2_spot_values),
        ("engine equivalence", c3_engines),
        ("triangular identity", c4_identity),
        ("particular constants", c5_particular),
        ("Pell invariant", c6_pell),
        ("trig-form round trip", c7_trig),
        ("characteristic roots", c8_char_poly),
        ("square k", c9_square_k),
        ("performance", c10_performance),
        ("OEIS cross-check", c11_oeis),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({took:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({took:.2?}): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
