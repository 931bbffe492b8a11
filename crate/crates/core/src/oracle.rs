//! Brute-force ground truth for `T_ξ = k·T_t`.
//!
//! Every `t` up to the cap is tested for `1 + 4k·t(t+1)` being a perfect
//! square. Nothing here knows about recurrences or Pell units; the engines
//! are validated against this module, so it must stay independent of them.
//!
//! The scan skips `t` whose discriminant is a non-residue modulo a few small
//! prime powers (a perfect square is a square modulo everything), so only a
//! small fraction of candidates reach the exact square-root test.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactmath::{isqrt_u128, isqrt_unsigned};

/// Default scan bound when seeding parameter detection.
pub const DEFAULT_T_CAP: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("k = {0} is a perfect square; use the square-k search")]
    SquareMultiplier(u64),
    #[error("k = {0} is not a perfect square")]
    NotSquare(u64),
    #[error("k must exceed 1 (got {0})")]
    TrivialMultiplier(u64),
    #[error("t cap {t_cap} reached after {} of {wanted} solutions", partial.len())]
    CapExhausted {
        partial: Vec<SolutionPair>,
        wanted: usize,
        t_cap: u64,
    },
}

/// One solution `(t, ξ)` of `T_ξ = k·T_t` with both triangular values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionPair {
    pub t: BigUint,
    pub xi: BigUint,
    pub t_value: BigUint,
    pub xi_value: BigUint,
}

impl SolutionPair {
    fn new(t: BigUint, xi: BigUint) -> Self {
        let t_value = triangular_unsigned(&t);
        let xi_value = triangular_unsigned(&xi);
        SolutionPair {
            t,
            xi,
            t_value,
            xi_value,
        }
    }

    pub fn satisfies(&self, k: u64) -> bool {
        self.xi_value == &self.t_value * k
            && self.t_value == triangular_unsigned(&self.t)
            && self.xi_value == triangular_unsigned(&self.xi)
    }
}

/// `T_t = t(t+1)/2`. For negative `t` the same formula gives `T_{−t} = T_{t−1}`.
pub fn triangular(t: &BigInt) -> BigUint {
    let v: BigInt = (t * (t + 1u32)) >> 1u32;
    v.to_biguint().expect("t(t+1) is never negative")
}

fn triangular_unsigned(t: &BigUint) -> BigUint {
    (t * (t + 1u32)) >> 1u32
}

/// The `ξ ≥ 0` with `T_ξ = k·T_t`, if there is one.
pub fn xi_for_t(k: u64, t: &BigUint) -> Option<BigUint> {
    let disc = t * (t + 1u32) * (4 * k as u128) + 1u32;
    let (root, exact) = isqrt_unsigned(&disc);
    // disc is odd, so an exact root is odd and ξ is an integer.
    exact.then(|| (root - 1u32) >> 1u32)
}

fn xi_for_t_u64(k: u64, t: u64) -> Option<BigUint> {
    let t128 = t as u128;
    let disc = t128
        .checked_mul(t128 + 1)
        .and_then(|x| x.checked_mul(k as u128))
        .and_then(|x| x.checked_mul(4))
        .and_then(|x| x.checked_add(1));
    match disc {
        Some(d) => {
            let r = isqrt_u128(d);
            (r * r == d).then(|| BigUint::from((r - 1) / 2))
        }
        None => xi_for_t(k, &BigUint::from(t)),
    }
}

pub fn is_square(k: u64) -> bool {
    let r = isqrt_u128(k as u128);
    r * r == k as u128
}

const WHEEL_MODULI: [u64; 7] = [9, 5, 7, 11, 13, 17, 19];

/// Residues `t mod modulus` for which the discriminant can be a square.
#[derive(Debug, Clone)]
struct Wheel {
    modulus: u64,
    residues: Vec<u64>,
}

impl Wheel {
    fn new(k: u64) -> Self {
        let mut modulus = 1u64;
        let mut residues = vec![0u64];
        for &m in &WHEEL_MODULI {
            let squares: Vec<bool> = {
                let mut s = vec![false; m as usize];
                for x in 0..m {
                    s[(x * x % m) as usize] = true;
                }
                s
            };
            let km = k % m;
            let admissible: Vec<u64> = (0..m)
                .filter(|&t| squares[((1 + 4 * km * (t * (t + 1) % m)) % m) as usize])
                .collect();
            if admissible.len() as u64 == m {
                continue;
            }
            let inv = mod_inverse(modulus % m, m);
            let mut next = Vec::with_capacity(residues.len() * admissible.len());
            for &r in &residues {
                for &a in &admissible {
                    let lift = ((a + m - r % m) % m) * inv % m;
                    next.push(r + modulus * lift);
                }
            }
            modulus *= m;
            residues = next;
        }
        residues.sort_unstable();
        Wheel { modulus, residues }
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    (1..m)
        .find(|x| a * x % m == 1)
        .expect("wheel moduli are pairwise coprime")
}

/// Lazily yields the solutions with `0 ≤ t ≤ t_cap` in increasing `t`.
#[derive(Debug, Clone)]
pub struct SolutionScanner {
    k: u64,
    t_cap: u64,
    wheel: Wheel,
    base: u64,
    index: usize,
    exhausted: bool,
}

impl SolutionScanner {
    pub fn new(k: u64, t_cap: u64) -> Self {
        SolutionScanner {
            k,
            t_cap,
            wheel: Wheel::new(k),
            base: 0,
            index: 0,
            exhausted: false,
        }
    }

    /// True once every `t ≤ t_cap` has been examined.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn t_cap(&self) -> u64 {
        self.t_cap
    }
}

impl Iterator for SolutionScanner {
    type Item = SolutionPair;

    fn next(&mut self) -> Option<SolutionPair> {
        while !self.exhausted {
            if self.index == self.wheel.residues.len() {
                self.index = 0;
                self.base = match self.base.checked_add(self.wheel.modulus) {
                    Some(b) => b,
                    None => {
                        self.exhausted = true;
                        break;
                    }
                };
            }
            let t = match self.base.checked_add(self.wheel.residues[self.index]) {
                Some(t) if t <= self.t_cap => t,
                _ => {
                    self.exhausted = true;
                    break;
                }
            };
            self.index += 1;
            if let Some(xi) = xi_for_t_u64(self.k, t) {
                return Some(SolutionPair::new(BigUint::from(t), xi));
            }
        }
        None
    }
}

fn check_non_square(k: u64) -> Result<(), OracleError> {
    if k <= 1 {
        return Err(OracleError::TrivialMultiplier(k));
    }
    if is_square(k) {
        return Err(OracleError::SquareMultiplier(k));
    }
    Ok(())
}

/// The first `count` solutions ordered by `t`, starting with `t = 0`.
pub fn enumerate_solutions(
    k: u64,
    count: usize,
    t_cap: u64,
) -> Result<Vec<SolutionPair>, OracleError> {
    check_non_square(k)?;
    let found: Vec<SolutionPair> = SolutionScanner::new(k, t_cap).take(count).collect();
    if found.len() < count {
        return Err(OracleError::CapExhausted {
            partial: found,
            wanted: count,
            t_cap,
        });
    }
    Ok(found)
}

/// Result of the bounded search for square `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareKReport {
    pub k: u64,
    pub t_cap: u64,
    /// Solutions with `1 ≤ t ≤ t_cap`; `t = 0` is excluded.
    pub solutions: Vec<SolutionPair>,
    /// Whether at most one nontrivial solution was found.
    pub at_most_one: bool,
}

pub fn square_k_search(k: u64, t_cap: u64) -> Result<SquareKReport, OracleError> {
    if k <= 1 {
        return Err(OracleError::TrivialMultiplier(k));
    }
    if !is_square(k) {
        return Err(OracleError::NotSquare(k));
    }
    let solutions: Vec<SolutionPair> = SolutionScanner::new(k, t_cap)
        .filter(|s| !s.t.is_zero())
        .collect();
    let at_most_one = solutions.len() <= 1;
    Ok(SquareKReport {
        k,
        t_cap,
        solutions,
        at_most_one,
    })
}

/// Plain linear scan without the residue wheel. Slow; kept for tests.
pub fn linear_scan(k: u64, t_max: u64) -> Vec<u64> {
    (0..=t_max)
        .filter(|&t| xi_for_t_u64(k, t).is_some())
        .collect()
}

impl SolutionPair {
    pub fn t_u64(&self) -> Option<u64> {
        self.t.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ts(sols: &[SolutionPair]) -> Vec<u64> {
        sols.iter().map(|s| s.t_u64().unwrap()).collect()
    }

    #[test]
    fn triangular_examples() {
        assert_eq!(triangular(&0.into()), BigUint::zero());
        assert_eq!(triangular(&14.into()), BigUint::from(105u32));
        assert_eq!(triangular(&(-3).into()), BigUint::from(3u32));
        for t in 1..1000i64 {
            assert_eq!(triangular(&(-t).into()), triangular(&(t - 1).into()));
        }
    }

    #[test]
    fn xi_for_t_examples() {
        assert_eq!(xi_for_t(2, &2u32.into()), Some(3u32.into()));
        assert_eq!(xi_for_t(5, &6u32.into()), Some(14u32.into()));
        assert_eq!(xi_for_t(5, &3u32.into()), None);
        assert_eq!(xi_for_t(7, &0u32.into()), Some(BigUint::zero()));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            ts(&enumerate_solutions(2, 5, 10_000).unwrap()),
            [0, 2, 14, 84, 492]
        );
        assert_eq!(
            ts(&enumerate_solutions(3, 4, 10_000).unwrap()),
            [0, 1, 5, 20]
        );
        assert_eq!(
            ts(&enumerate_solutions(13, 5, 10_000).unwrap()),
            [0, 3, 21, 234, 414]
        );
    }

    #[test]
    fn enumerate_reports_partial_results_at_cap() {
        match enumerate_solutions(2, 10, 100) {
            Err(OracleError::CapExhausted {
                partial,
                wanted,
                t_cap,
            }) => {
                assert_eq!(ts(&partial), [0, 2, 14, 84]);
                assert_eq!((wanted, t_cap), (10, 100));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn enumerate_rejects_square_and_trivial_k() {
        assert_eq!(
            enumerate_solutions(9, 3, 100),
            Err(OracleError::SquareMultiplier(9))
        );
        assert_eq!(
            enumerate_solutions(1, 3, 100),
            Err(OracleError::TrivialMultiplier(1))
        );
    }

    #[test]
    fn wheel_scan_matches_linear_scan() {
        for k in [
            2u64,
            3,
            5,
            6,
            7,
            8,
            10,
            12,
            13,
            19,
            21,
            36,
            45,
            2 * 3 * 5 * 7 * 11 * 13,
        ] {
            let fast: Vec<u64> = SolutionScanner::new(k, 200_000)
                .map(|s| s.t_u64().unwrap())
                .collect();
            assert_eq!(fast, linear_scan(k, 200_000), "k={k}");
        }
    }

    #[test]
    fn every_solution_satisfies_the_equation() {
        for s in SolutionScanner::new(10, 1_000_000) {
            assert!(s.satisfies(10));
        }
    }

    #[test]
    fn square_k_examples() {
        for k in [4, 9] {
            let rep = square_k_search(k, 1_000_000).unwrap();
            assert!(rep.solutions.is_empty());
            assert!(rep.at_most_one);
        }
        let rep = square_k_search(36, 1_000_000).unwrap();
        assert_eq!(rep.solutions.len(), 1);
        assert_eq!(rep.solutions[0].t, BigUint::one());
        assert_eq!(rep.solutions[0].xi, BigUint::from(8u32));
        assert_eq!(square_k_search(5, 10), Err(OracleError::NotSquare(5)));
    }

    #[test]
    fn cap_boundary_is_inclusive() {
        let sols: Vec<u64> = SolutionScanner::new(2, 84)
            .map(|s| s.t_u64().unwrap())
            .collect();
        assert_eq!(sols, [0, 2, 14, 84]);
        let sols: Vec<u64> = SolutionScanner::new(2, 83)
            .map(|s| s.t_u64().unwrap())
            .collect();
        assert_eq!(sols, [0, 2, 14]);
    }
}
