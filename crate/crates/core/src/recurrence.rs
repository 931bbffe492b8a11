//! The four lag-`r` linear recurrences for `t`, `ξ`, `T_t` and `T_ξ`.
//!
//! ```text
//! t_n     = 2(κ+1)·t_{n−r}        − t_{n−2r}     + κ
//! ξ_n     = 2(κ+1)·ξ_{n−r}        − ξ_{n−2r}     + κ
//! T_{t_n} = (4(κ+1)²−2)·T_{t_{n−r}} − T_{t_{n−2r}} + (T_κ − γ)
//! T_{ξ_n} = (4(κ+1)²−2)·T_{ξ_{n−r}} − T_{ξ_{n−2r}} + k(T_κ − γ)
//! ```
//!
//! Each sequence is generated from its own recurrence; they are tied together
//! only by tests.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::oracle;
use crate::params::MultiplierParams;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("seed t = {t} has no matching xi for k = {k}")]
    InvalidSeed { k: u64, t: BigInt },
    #[error("unknown sequence kind {0:?} (expected t, xi, Tt or Txi)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceKind {
    /// `t_n`
    TIndex,
    /// `ξ_n`
    XiIndex,
    /// `T_{t_n}`
    TValue,
    /// `T_{ξ_n}`
    XiValue,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 4] = [
        SequenceKind::TIndex,
        SequenceKind::XiIndex,
        SequenceKind::TValue,
        SequenceKind::XiValue,
    ];

    pub fn is_index(self) -> bool {
        matches!(self, SequenceKind::TIndex | SequenceKind::XiIndex)
    }

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::TIndex => "t",
            SequenceKind::XiIndex => "xi",
            SequenceKind::TValue => "Tt",
            SequenceKind::XiValue => "Txi",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = RecurrenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SequenceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| RecurrenceError::UnknownKind(s.to_string()))
    }
}

/// `x_n = multiplier·x_{n−lag} − x_{n−2·lag} + constant`, started from
/// `x_0 … x_{2·lag−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    pub kind: SequenceKind,
    pub multiplier: BigInt,
    pub constant: BigInt,
    pub lag: usize,
    pub window: Vec<BigInt>,
}

pub fn build_spec(
    p: &MultiplierParams,
    kind: SequenceKind,
) -> Result<RecurrenceSpec, RecurrenceError> {
    let xis = || -> Result<Vec<BigInt>, RecurrenceError> {
        p.seeds
            .iter()
            .map(|t| {
                t.to_biguint()
                    .and_then(|tu| oracle::xi_for_t(p.k, &tu))
                    .map(BigInt::from)
                    .ok_or_else(|| RecurrenceError::InvalidSeed {
                        k: p.k,
                        t: t.clone(),
                    })
            })
            .collect()
    };
    let tri = |xs: Vec<BigInt>| -> Vec<BigInt> {
        xs.iter()
            .map(|x| BigInt::from(oracle::triangular(x)))
            .collect()
    };
    let (multiplier, constant, window) = match kind {
        SequenceKind::TIndex => (p.index_multiplier(), p.kappa.clone(), p.seeds.clone()),
        SequenceKind::XiIndex => (p.index_multiplier(), p.kappa.clone(), xis()?),
        SequenceKind::TValue => (
            p.value_multiplier(),
            p.value_constant(),
            tri(p.seeds.clone()),
        ),
        SequenceKind::XiValue => (p.value_multiplier(), p.value_constant() * p.k, tri(xis()?)),
    };
    Ok(RecurrenceSpec {
        kind,
        multiplier,
        constant,
        lag: p.r,
        window,
    })
}

impl RecurrenceSpec {
    pub fn terms(&self) -> Terms<'_> {
        Terms {
            spec: self,
            n: 0,
            recent: VecDeque::with_capacity(2 * self.lag),
        }
    }

    /// Values at `n = −lag … −1`, by reflection: `x_{−(j+1)} = x_j` for `t`
    /// and the triangular values, and `ξ_{−(j+1)} = −1 − ξ_j` (the other
    /// root of `ξ(ξ+1) = k·t(t+1)`).
    pub fn reflected_prefix(&self) -> Vec<BigInt> {
        (1..=self.lag)
            .rev()
            .map(|j| {
                let x = &self.window[j - 1];
                match self.kind {
                    SequenceKind::XiIndex => -x - 1,
                    _ => x.clone(),
                }
            })
            .collect()
    }

    /// Runs the recurrence from the reflected prefix and `x_0 … x_{lag−1}`
    /// and reports whether it reproduces `x_lag … x_{2·lag−1}`.
    pub fn window_regenerates(&self) -> bool {
        let r = self.lag;
        let mut xs = self.reflected_prefix();
        xs.extend_from_slice(&self.window[..r]);
        for i in 2 * r..3 * r {
            let next = &self.multiplier * &xs[i - r] - &xs[i - 2 * r] + &self.constant;
            xs.push(next);
        }
        xs[r..] == self.window[..]
    }
}

/// Streaming generator; holds only the last `2·lag` terms.
pub struct Terms<'a> {
    spec: &'a RecurrenceSpec,
    n: usize,
    recent: VecDeque<BigInt>,
}

impl Iterator for Terms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let r = self.spec.lag;
        let next = if self.n < 2 * r {
            self.spec.window[self.n].clone()
        } else {
            let back_r = &self.recent[r];
            let back_2r = &self.recent[0];
            &self.spec.multiplier * back_r - back_2r + &self.spec.constant
        };
        if self.recent.len() == 2 * r {
            self.recent.pop_front();
        }
        self.recent.push_back(next.clone());
        self.n += 1;
        Some(next)
    }
}

/// The first `count` terms.
pub fn generate(spec: &RecurrenceSpec, count: usize) -> Vec<BigInt> {
    spec.terms().take(count).collect()
}

/// The `n`-th term by iterating; `O(n)` big-integer operations.
pub fn term_at(spec: &RecurrenceSpec, n: usize) -> BigInt {
    spec.terms().nth(n).expect("the generator is infinite")
}
