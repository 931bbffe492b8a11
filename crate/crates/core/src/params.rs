//! Per-multiplier parameters: rank `r`, `κ`, `γ`, the field discriminant `D`,
//! the Pell unit `θ = (κ+1) + √(κ(κ+2))` and the seed solutions.
//!
//! The rank is found operationally: the smallest `r` for which
//! `t_n = 2(κ+1)·t_{n−r} − t_{n−2r} + κ`, with `κ = t_{r−1} + t_r` and
//! negative indices reflected as `t_{−(j+1)} = t_j`, reproduces every
//! brute-forced solution through `t_{3r}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{squarefree_core, BigRat, ExactError, QuadElem};
use crate::oracle::{self, OracleError, SolutionScanner, DEFAULT_T_CAP};

pub const DEFAULT_R_MAX: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("t cap {t_cap} reached with {found} solutions; rank {rank} needs {needed}")]
    CapExhausted {
        rank: usize,
        needed: usize,
        found: usize,
        t_cap: u64,
    },
    #[error("no consistent rank r ≤ {r_max} for k = {k}")]
    Unsupported { k: u64, r_max: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("malformed parameter document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy)]
pub struct DetectConfig {
    pub t_cap: u64,
    pub r_max: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            t_cap: DEFAULT_T_CAP,
            r_max: DEFAULT_R_MAX,
        }
    }
}

/// Everything the recurrence and closed-form engines need for one `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierParams {
    pub k: u64,
    pub r: usize,
    pub kappa: BigInt,
    pub gamma: BigInt,
    /// Squarefree part of `κ(κ+2)`.
    pub d: BigInt,
    /// `(κ+1) + f·√D` where `κ(κ+2) = D·f²`.
    pub theta: QuadElem,
    /// `t_0 … t_{2r−1}`.
    pub seeds: Vec<BigInt>,
}

/// `x_i` for any integer `i`, reading negative indices through
/// `x_{−(j+1)} = x_j`.
pub(crate) fn reflected(xs: &[BigInt], i: isize) -> &BigInt {
    if i >= 0 {
        &xs[i as usize]
    } else {
        &xs[(-i - 1) as usize]
    }
}

/// One step of the index recurrence.
fn index_step(kappa: &BigInt, xs: &[BigInt], n: usize, r: usize) -> BigInt {
    let n = n as isize;
    let r = r as isize;
    (kappa + 1u32) * 2u32 * reflected(xs, n - r) - reflected(xs, n - 2 * r) + kappa
}

/// First index `n ≥ r` at which `xs` disagrees with the lag-`r` index
/// recurrence, or `None` if all of `xs` is consistent.
pub(crate) fn first_recurrence_violation(xs: &[BigInt], r: usize, kappa: &BigInt) -> Option<usize> {
    (r..xs.len()).find(|&n| index_step(kappa, xs, n, r) != xs[n])
}

/// Builds `θ = (κ+1) + f·√D` from `κ`.
pub fn pell_unit(kappa: &BigInt) -> Result<QuadElem, ParamsError> {
    let kappa_u = kappa
        .to_biguint()
        .filter(|k| !k.is_zero())
        .ok_or_else(|| ParamsError::Malformed(format!("κ = {kappa} must be positive")))?;
    // gcd(κ, κ+2) divides 2, so the cores of the two factors combine directly.
    let (d1, f1) = squarefree_core(&kappa_u)?;
    let (d2, f2) = squarefree_core(&(&kappa_u + 2u32))?;
    let g = if (&d1 % 2u32).is_zero() && (&d2 % 2u32).is_zero() {
        BigUint::from(2u32)
    } else {
        BigUint::one()
    };
    let d = &d1 / &g * (&d2 / &g);
    let f = f1 * f2 * g;
    Ok(QuadElem::new(
        BigRat::from_int(kappa + 1u32),
        BigRat::from_int(BigInt::from(f)),
        BigInt::from(d),
    )?)
}

impl MultiplierParams {
    /// Assembles the bundle from `t_0 … t_{2r−1}`.
    pub fn from_seeds(k: u64, r: usize, seeds: Vec<BigInt>) -> Result<Self, ParamsError> {
        if r == 0 || seeds.len() != 2 * r {
            return Err(ParamsError::Malformed(format!(
                "rank {r} needs {} seeds, got {}",
                2 * r,
                seeds.len()
            )));
        }
        let kappa = &seeds[r - 1] + &seeds[r];
        let gamma = &seeds[r - 1] * &seeds[r];
        let theta = pell_unit(&kappa)?;
        Ok(MultiplierParams {
            k,
            r,
            kappa,
            gamma,
            d: theta.d().clone(),
            theta,
            seeds,
        })
    }

    /// The recurrence coefficient `2(κ+1)` for index sequences.
    pub fn index_multiplier(&self) -> BigInt {
        (&self.kappa + 1u32) * 2u32
    }

    /// The recurrence coefficient `4(κ+1)² − 2` for value sequences.
    pub fn value_multiplier(&self) -> BigInt {
        let kp1 = &self.kappa + 1u32;
        &kp1 * &kp1 * 4u32 - 2u32
    }

    /// `T_κ − γ`, the additive constant of the `T_t` recurrence.
    pub fn value_constant(&self) -> BigInt {
        BigInt::from(oracle::triangular(&self.kappa)) - &self.gamma
    }

    /// Whether the first `r` seeds, extended by reflection through the
    /// recurrence, regenerate the stored seeds `t_r … t_{2r−1}`.
    pub fn reflection_consistent(&self) -> bool {
        let mut xs: Vec<BigInt> = self.seeds[..self.r].to_vec();
        for n in self.r..2 * self.r {
            let next = index_step(&self.kappa, &xs, n, self.r);
            xs.push(next);
        }
        xs == self.seeds
    }

    pub fn to_json(&self) -> String {
        let doc = ParamsDoc {
            k: self.k,
            r: self.r,
            kappa: self.kappa.to_string(),
            gamma: self.gamma.to_string(),
            d: self.d.to_string(),
            theta_p: self.theta.p().to_string(),
            theta_q: self.theta.q().to_string(),
            seeds: self.seeds.iter().map(ToString::to_string).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain struct serializes")
    }

    /// Parses the JSON document written by [`MultiplierParams::to_json`].
    ///
    /// Only the shape is checked here (for instance `D` must be squarefree);
    /// use [`validate_params`] to check the numbers against each other.
    pub fn from_json(s: &str) -> Result<Self, ParamsError> {
        let doc: ParamsDoc =
            serde_json::from_str(s).map_err(|e| ParamsError::Malformed(e.to_string()))?;
        let int = |field: &str, v: &str| {
            v.parse::<BigInt>()
                .map_err(|_| ParamsError::Malformed(format!("{field}: {v:?} is not an integer")))
        };
        let d = int("D", &doc.d)?;
        let theta = QuadElem::new(doc.theta_p.parse()?, doc.theta_q.parse()?, d.clone())?;
        let seeds = doc
            .seeds
            .iter()
            .map(|s| int("seeds", s))
            .collect::<Result<Vec<_>, _>>()?;
        if doc.r == 0 || seeds.len() != 2 * doc.r {
            return Err(ParamsError::Malformed(format!(
                "rank {} needs {} seeds, got {}",
                doc.r,
                2 * doc.r,
                seeds.len()
            )));
        }
        Ok(MultiplierParams {
            k: doc.k,
            r: doc.r,
            kappa: int("kappa", &doc.kappa)?,
            gamma: int("gamma", &doc.gamma)?,
            d,
            theta,
            seeds,
        })
    }
}

/// Wire form of [`MultiplierParams`]; big integers travel as decimal strings.
#[derive(Debug, Serialize, Deserialize)]
struct ParamsDoc {
    k: u64,
    r: usize,
    kappa: String,
    gamma: String,
    #[serde(rename = "D")]
    d: String,
    theta_p: String,
    theta_q: String,
    seeds: Vec<String>,
}

/// Finds the rank and parameters of `k` from brute-forced solutions.
pub fn detect_params(k: u64, config: &DetectConfig) -> Result<MultiplierParams, ParamsError> {
    if k <= 1 {
        return Err(OracleError::TrivialMultiplier(k).into());
    }
    if oracle::is_square(k) {
        return Err(OracleError::SquareMultiplier(k).into());
    }
    let mut scanner = SolutionScanner::new(k, config.t_cap);
    let mut ts: Vec<BigInt> = Vec::new();
    for r in 1..=config.r_max {
        let needed = 3 * r + 1;
        while ts.len() < needed {
            match scanner.next() {
                Some(s) => ts.push(BigInt::from(s.t)),
                None => {
                    return Err(ParamsError::CapExhausted {
                        rank: r,
                        needed,
                        found: ts.len(),
                        t_cap: config.t_cap,
                    })
                }
            }
        }
        let kappa = &ts[r - 1] + &ts[r];
        if first_recurrence_violation(&ts[..needed], r, &kappa).is_none() {
            return MultiplierParams::from_seeds(k, r, ts[..2 * r].to_vec());
        }
    }
    Err(ParamsError::Unsupported {
        k,
        r_max: config.r_max,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks a parameter bundle internally and against `depth` fresh oracle
/// solutions beyond the seeds.
pub fn validate_params(p: &MultiplierParams, depth: usize, t_cap: u64) -> ValidationReport {
    let mut checks = Vec::new();
    let r = p.r;

    let bad_seeds: Vec<String> = p
        .seeds
        .iter()
        .filter(|t| {
            t.to_biguint()
                .and_then(|t| oracle::xi_for_t(p.k, &t))
                .is_none()
        })
        .map(ToString::to_string)
        .collect();
    checks.push(Check::new(
        "seeds",
        bad_seeds.is_empty() && p.seeds.len() == 2 * r,
        if bad_seeds.is_empty() {
            format!("{} seeds solve T_xi = {}·T_t", p.seeds.len(), p.k)
        } else {
            format!("not solutions: {}", bad_seeds.join(", "))
        },
    ));

    let sum = &p.seeds[r - 1] + &p.seeds[r];
    checks.push(Check::new(
        "kappa",
        sum == p.kappa,
        format!("t_{} + t_{} = {sum}, kappa = {}", r - 1, r, p.kappa),
    ));
    let prod = &p.seeds[r - 1] * &p.seeds[r];
    checks.push(Check::new(
        "gamma",
        prod == p.gamma,
        format!("t_{} · t_{} = {prod}, gamma = {}", r - 1, r, p.gamma),
    ));

    let disc_ok = pell_unit(&p.kappa)
        .map(|u| u == p.theta && u.d() == &p.d)
        .unwrap_or(false);
    checks.push(Check::new(
        "theta",
        disc_ok,
        format!(
            "theta = {}, from kappa: {}",
            p.theta,
            match pell_unit(&p.kappa) {
                Ok(u) => u.to_string(),
                Err(e) => e.to_string(),
            }
        ),
    ));

    let norm = p.theta.norm();
    checks.push(Check::new(
        "norm",
        norm == BigRat::one(),
        format!("norm(theta) = {norm}"),
    ));

    checks.push(Check::new(
        "reflection",
        p.reflection_consistent(),
        "seeds regenerate from t_0..t_{r-1} under reflection",
    ));

    let total = 2 * r + depth;
    let recurrence_check = match oracle::enumerate_solutions(p.k, total, t_cap) {
        Ok(sols) => {
            let truth: Vec<BigInt> = sols.into_iter().map(|s| BigInt::from(s.t)).collect();
            let mut xs = p.seeds.clone();
            while xs.len() < total {
                let n = xs.len();
                let next = index_step(&p.kappa, &xs, n, r);
                xs.push(next);
            }
            match (0..total).find(|&i| xs[i] != truth[i]) {
                None => Check::new(
                    "recurrence",
                    true,
                    format!("t_0..t_{} match the oracle", total - 1),
                ),
                Some(i) => Check::new(
                    "recurrence",
                    false,
                    format!("t_{i}: recurrence {} vs oracle {}", xs[i], truth[i]),
                ),
            }
        }
        Err(e) => Check::new("recurrence", false, format!("oracle: {e}")),
    };
    checks.push(recurrence_check);

    ValidationReport { checks }
}

fn known(
    k: u64,
    r: usize,
    kappa: i64,
    gamma: i64,
    d: i64,
    theta: (i64, i64),
    seeds: &[i64],
) -> MultiplierParams {
    MultiplierParams {
        k,
        r,
        kappa: kappa.into(),
        gamma: gamma.into(),
        d: d.into(),
        theta: QuadElem::from_ints(theta.0, theta.1, d)
            .expect("table discriminants are squarefree"),
        seeds: seeds.iter().map(|&t| BigInt::from(t)).collect(),
    }
}

/// Hard-coded bundles for the worked multipliers 2, 3, 5, 8, 10 and 13.
pub fn known_params_table() -> Vec<MultiplierParams> {
    vec![
        known(2, 1, 2, 0, 2, (3, 2), &[0, 2]),
        known(3, 1, 1, 0, 3, (2, 1), &[0, 1]),
        known(5, 2, 8, 12, 5, (9, 4), &[0, 2, 6, 44]),
        known(8, 2, 16, 55, 2, (17, 12), &[0, 5, 11, 186]),
        known(10, 3, 18, 72, 10, (19, 6), &[0, 1, 6, 12, 55, 246]),
        known(
            13,
            4,
            648,
            96876,
            13,
            (649, 180),
            &[0, 3, 21, 234, 414, 4521, 27903, 304380],
        ),
    ]
}

pub fn known_params(k: u64) -> Option<MultiplierParams> {
    known_params_table().into_iter().find(|p| p.k == k)
}
