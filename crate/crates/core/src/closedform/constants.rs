//! Explicit constants of the trigonometric closed forms for ranks 1–4.
//!
//! These live in the degree-`2r` field generated by `α = θ^{1/r}`, so they are
//! evaluated numerically. They serve as an independent check on the exact
//! residue engine, not as a production path.
//!
//! The commonly quoted rank-3 expression for `A′` starts its numerator with
//! `α(2α+β³)`. Solving the six boundary equations directly gives
//! `α(2α²+β³)`, and only that reproduces the sequence (k = 10 already fails
//! at n = 0). [`ConstantSet::Amended`] uses the solved numerator and
//! [`ConstantSet::Literal`] keeps the original so the gap stays observable.

use num_bigint::BigInt;

use super::ClosedFormError;
use crate::exactmath::BigFloat;
use crate::params::MultiplierParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantSet {
    Amended,
    Literal,
}

#[derive(Debug, Clone)]
pub struct TrigConstants {
    pub rank: usize,
    pub set: ConstantSet,
    /// `A, A′, …` then `B, B′, …`.
    pub constants: Vec<(&'static str, BigFloat)>,
    pub alpha: BigFloat,
    pub beta: BigFloat,
}

impl TrigConstants {
    pub fn get(&self, name: &str) -> Option<&BigFloat> {
        self.constants
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }

    fn c(&self, name: &str) -> &BigFloat {
        self.get(name).expect("constant names are fixed per rank")
    }
}

pub fn trig_constants(p: &MultiplierParams, prec: u32) -> Result<TrigConstants, ClosedFormError> {
    trig_constants_with(p, prec, ConstantSet::Amended)
}

pub fn trig_constants_with(
    p: &MultiplierParams,
    prec: u32,
    set: ConstantSet,
) -> Result<TrigConstants, ClosedFormError> {
    let r = p.r;
    if !(1..=4).contains(&r) {
        return Err(ClosedFormError::UnsupportedRank(r));
    }
    let f = |x: i64| BigFloat::from_i64(x, prec);
    let big = |x: &BigInt| BigFloat::from_int(x, prec);

    let theta =
        &big(&(&p.kappa + 1u32)) + &(&BigFloat::from_rat(p.theta.q(), prec) * &big(&p.d).sqrt());
    let alpha = theta.nth_root(r as u32);
    // β^r = θ̄ = 1/θ; dividing avoids the cancellation in (κ+1) − f√D.
    let beta = (&f(1) / &theta).nth_root(r as u32);

    let a = &alpha;
    let b = &beta;
    let one = f(1);
    // u_i = 2·t_i + 1
    let u = |i: usize| big(&(&p.seeds[i] * 2u32 + 1u32));

    let constants: Vec<(&'static str, BigFloat)> = match r {
        1 => {
            let den = &f(2) * &(a - b);
            vec![
                ("A", &(a * &(&one - b)) / &den),
                ("B", &(b * &(a - &one)) / &den),
            ]
        }
        2 => {
            let t1 = big(&p.seeds[1]);
            let two_t1 = &f(2) * &t1;
            let a2 = a * a;
            let b2 = b * b;
            let den = &f(4) * &(&a2 - &b2);
            let one_m_b2 = &one - &b2;
            let a2_m_1 = &a2 - &one;
            vec![
                (
                    "A",
                    &(&(&(a * &(a + &one)) * &one_m_b2) + &(&two_t1 * &(a - &one))) / &den,
                ),
                (
                    "A'",
                    &(&(&(a * &(a - &one)) * &one_m_b2) - &(&two_t1 * &(a + &one))) / &den,
                ),
                (
                    "B",
                    &(&(&(b * &(b + &one)) * &a2_m_1) - &(&two_t1 * &(b - &one))) / &den,
                ),
                (
                    "B'",
                    &(&(&(b * &(b - &one)) * &a2_m_1) + &(&two_t1 * &(b + &one))) / &den,
                ),
            ]
        }
        3 => {
            let (u1, u2) = (u(1), u(2));
            let a2 = a * a;
            let a3 = &a2 * a;
            let b2 = b * b;
            let b3 = &b2 * b;
            let den = &f(6) * &(&a3 - &b3);
            let sqrt3 = f(3).sqrt();
            let one_m_b3 = &one - &b3;
            let a3_m_1 = &a3 - &one;
            let a_prime_lead = match set {
                ConstantSet::Amended => a * &(&(&f(2) * &a2) + &b3),
                ConstantSet::Literal => a * &(&(&f(2) * a) + &b3),
            };
            vec![
                (
                    "A",
                    &(&(&(a * &(&a2 - &b3)) + &(&(&u1 * &a2) * &one_m_b3)) + &(&u2 * &(a - &one)))
                        / &den,
                ),
                (
                    "A'",
                    &(&(&a_prime_lead - &(&(&u1 * &a2) * &one_m_b3)) - &(&u2 * &(a + &f(2))))
                        / &den,
                ),
                (
                    "A''",
                    &(&(&sqrt3 * a) * &(&(&b3 + &(&(&u1 * a) * &one_m_b3)) - &u2)) / &den,
                ),
                (
                    "B",
                    &(&(&(b * &(&a3 - &b2)) + &(&(&u1 * &b2) * &a3_m_1)) - &(&u2 * &(b - &one)))
                        / &den,
                ),
                (
                    "B'",
                    &(&(&(-&(b * &(&a3 + &(&f(2) * &b2)))) - &(&(&u1 * &b2) * &a3_m_1))
                        + &(&u2 * &(b + &f(2))))
                        / &den,
                ),
                (
                    "B''",
                    &(&(&sqrt3 * b) * &(&(&(-&a3) + &(&(&u1 * b) * &a3_m_1)) + &u2)) / &den,
                ),
            ]
        }
        _ => {
            let (u1, u2, u3) = (u(1), u(2), u(3));
            let a2 = a * a;
            let a3 = &a2 * a;
            let a4 = &a2 * &a2;
            let b2 = b * b;
            let b3 = &b2 * b;
            let b4 = &b2 * &b2;
            let diff = &a4 - &b4;
            let d8 = &f(8) * &diff;
            let d4 = &f(4) * &diff;
            let a_b4 = a * &b4;
            let a4_b = &a4 * b;
            vec![
                (
                    "A",
                    &(&(&(&(a * &(&a3 - &b4)) + &(&(&u1 * &a2) * &(a - &b4)))
                        + &(&(&u2 * &a2) * &(&one - &a_b4)))
                        + &(&u3 * &(a - &one)))
                        / &d8,
                ),
                (
                    "A'",
                    &(&(&(&(a * &(&a3 + &b4)) - &(&(&u1 * &a2) * &(a + &b4)))
                        + &(&(&u2 * &a2) * &(&one + &a_b4)))
                        - &(&u3 * &(a + &one)))
                        / &d8,
                ),
                (
                    "A''",
                    &(&(&(&a4 + &(&(&u1 * &a2) * &b4)) - &(&u2 * &a2)) - &u3) / &d4,
                ),
                (
                    "A'''",
                    &(a * &(&(&(&b4 + &(&u1 * &a2)) - &(&(&u2 * &a2) * &b4)) - &u3)) / &d4,
                ),
                (
                    "B",
                    &(&(&(&(b * &(&a4 - &b3)) + &(&(&u1 * &b2) * &(&a4 - b)))
                        + &(&(&u2 * &b2) * &(&a4_b - &one)))
                        - &(&u3 * &(b - &one)))
                        / &d8,
                ),
                (
                    "B'",
                    &(&(&(&(-&(b * &(&a4 + &b3))) + &(&(&u1 * &b2) * &(&a4 + b)))
                        - &(&(&u2 * &b2) * &(&a4_b + &one)))
                        + &(&u3 * &(b + &one)))
                        / &d8,
                ),
                (
                    "B''",
                    &(&(&(&(-&b4) - &(&(&u1 * &a4) * &b2)) + &(&u2 * &b2)) + &u3) / &d4,
                ),
                (
                    "B'''",
                    &(b * &(&(&(&(-&a4) - &(&u1 * &b2)) + &(&(&u2 * &a4) * &b2)) + &u3)) / &d4,
                ),
            ]
        }
    };

    Ok(TrigConstants {
        rank: r,
        set,
        constants,
        alpha,
        beta,
    })
}

/// `t_n` from the full trigonometric form, numerically.
pub fn reconstruct_via_trig(c: &TrigConstants, n: u64) -> BigFloat {
    let prec = c.alpha.precision();
    let f = |x: i64| BigFloat::from_i64(x, prec);
    let sign = f(if n.is_multiple_of(2) { 1 } else { -1 });
    let angle = |num: i64, den: i64| {
        // num·n·π/den
        &(&BigFloat::pi(prec) * &f(num * n as i64)) / &f(den)
    };
    let (ca, cb) = match c.rank {
        1 => (c.c("A").clone(), c.c("B").clone()),
        2 => (
            c.c("A") + &(&sign * c.c("A'")),
            c.c("B") + &(&sign * c.c("B'")),
        ),
        3 => {
            let (cos, sin) = angle(2, 3).cos_sin();
            (
                &(c.c("A") + &(c.c("A'") * &cos)) + &(c.c("A''") * &sin),
                &(c.c("B") + &(c.c("B'") * &cos)) + &(c.c("B''") * &sin),
            )
        }
        _ => {
            let (cos, sin) = angle(1, 2).cos_sin();
            (
                &(&(c.c("A") + &(&sign * c.c("A'"))) + &(c.c("A''") * &cos))
                    + &(c.c("A'''") * &sin),
                &(&(c.c("B") + &(&sign * c.c("B'"))) + &(c.c("B''") * &cos))
                    + &(c.c("B'''") * &sin),
            )
        }
    };
    let half = &f(1) / &f(2);
    &(&(&ca * &c.alpha.powi(n)) + &(&cb * &c.beta.powi(n))) - &half
}

/// Rounds to the nearest integer, refusing when the value is not within
/// `2^guard_log2` of one.
pub fn round_guarded(x: &BigFloat, n: u64, guard_log2: i64) -> Result<BigInt, ClosedFormError> {
    let dist = x.distance_to_nearest_integer();
    if dist.is_zero() || dist.log2_abs() < guard_log2 as f64 {
        Ok(x.round())
    } else {
        Err(ClosedFormError::PrecisionExhausted {
            n,
            distance_log2: dist.log2_abs(),
        })
    }
}

/// Guard used for rounding numeric reconstructions.
pub const ROUNDING_GUARD_LOG2: i64 = -32;

/// Where the two constant sets differ, and whether each reconstructs the
/// exact sequence for `n ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantAudit {
    pub rank: usize,
    pub differing: Vec<&'static str>,
    /// First `n` at which the literal constants fail to round to `expected[n]`.
    pub literal_first_failure: Option<u64>,
    pub amended_first_failure: Option<u64>,
}

/// Compares both constant sets against `expected` (the exact `t_n`).
pub fn audit_constant_sets(
    p: &MultiplierParams,
    prec: u32,
    expected: &[BigInt],
) -> Result<ConstantAudit, ClosedFormError> {
    let amended = trig_constants_with(p, prec, ConstantSet::Amended)?;
    let literal = trig_constants_with(p, prec, ConstantSet::Literal)?;
    let tol = BigFloat::pow2(-((prec as i64) / 2), prec);
    let differing = amended
        .constants
        .iter()
        .zip(&literal.constants)
        .filter(|((_, x), (_, y))| (x - y).abs() > tol)
        .map(|((name, _), _)| *name)
        .collect();
    let first_failure = |c: &TrigConstants| {
        expected.iter().enumerate().find_map(|(n, want)| {
            let n = n as u64;
            match round_guarded(&reconstruct_via_trig(c, n), n, ROUNDING_GUARD_LOG2) {
                Ok(v) if &v == want => None,
                _ => Some(n),
            }
        })
    };
    Ok(ConstantAudit {
        rank: p.r,
        differing,
        literal_first_failure: first_failure(&literal),
        amended_first_failure: first_failure(&amended),
    })
}
