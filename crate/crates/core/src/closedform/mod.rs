//! Closed forms for the four sequences.
//!
//! The exact engine splits `n = q·r + s` and writes each residue class as
//! `a·u^q + conj(a)·conj(u)^q + τ` with `a, u ∈ Q(√D)`, so any term costs
//! `O(log n)` field multiplications and no floating point. The trigonometric
//! form in [`constants`] is kept as a numeric cross-check.

mod charpoly;
mod constants;
mod residue;

pub use charpoly::{char_poly_root_check, CharPolyReport};
pub use constants::{
    audit_constant_sets, reconstruct_via_trig, round_guarded, trig_constants, trig_constants_with,
    ConstantAudit, ConstantSet, TrigConstants, ROUNDING_GUARD_LOG2,
};
pub use residue::{
    build_residue_forms, eval_at, forms_from_json, forms_to_json, particular_identity_holds,
    ParticularConstants, ResidueForm, ResidueFormDoc,
};

use thiserror::Error;

use crate::exactmath::{BigRat, ExactError};
use crate::recurrence::RecurrenceError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("unit has no irrational part")]
    Degenerate,
    #[error("no residue forms to evaluate")]
    EmptyForms,
    #[error("residue sum at n = {n} is not rational")]
    IrrationalResidue { n: u64 },
    #[error("closed form at n = {n} gave non-integer {value}")]
    NonInteger { n: u64, value: BigRat },
    #[error("explicit constants exist only for ranks 1 to 4, not {0}")]
    UnsupportedRank(usize),
    #[error("value at n = {n} is 2^{distance_log2:.1} from an integer; raise the precision")]
    PrecisionExhausted { n: u64, distance_log2: f64 },
    #[error("malformed closed form: {0}")]
    Malformed(String),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
