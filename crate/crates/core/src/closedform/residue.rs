use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ClosedFormError;
use crate::exactmath::{BigRat, QuadElem};
use crate::params::MultiplierParams;
use crate::recurrence::{build_spec, RecurrenceSpec, SequenceKind};

/// Constant offsets `τ` that solve each non-homogeneous recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticularConstants {
    /// `−1/2`, shared by `t` and `ξ`.
    pub tau_index: BigRat,
    /// `−(T_κ − γ) / (4κ(κ+2))`
    pub tau_t_value: BigRat,
    /// `k · tau_t_value`
    pub tau_xi_value: BigRat,
}

impl ParticularConstants {
    pub fn for_params(p: &MultiplierParams) -> Self {
        let denom = &p.kappa * (&p.kappa + 2u32) * 4u32;
        let tau_t_value =
            BigRat::new(-p.value_constant(), denom).expect("κ > 0 for validated parameters");
        ParticularConstants {
            tau_index: BigRat::new((-1).into(), 2.into()).expect("nonzero"),
            tau_xi_value: &tau_t_value * &BigRat::from_int(p.k),
            tau_t_value,
        }
    }

    pub fn for_kind(&self, kind: SequenceKind) -> &BigRat {
        match kind {
            SequenceKind::TIndex | SequenceKind::XiIndex => &self.tau_index,
            SequenceKind::TValue => &self.tau_t_value,
            SequenceKind::XiValue => &self.tau_xi_value,
        }
    }
}

/// Whether the constant `tau`, substituted for all three terms, satisfies
/// the recurrence exactly: `τ = m·τ − τ + c`.
pub fn particular_identity_holds(spec: &RecurrenceSpec, tau: &BigRat) -> bool {
    let m = BigRat::from_int(spec.multiplier.clone());
    let c = BigRat::from_int(spec.constant.clone());
    *tau == &(&(&m * tau) - tau) + &c
}

/// `x_{q·r+s} = a·u^q + conj(a)·conj(u)^q + τ` for one residue class `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueForm {
    pub kind: SequenceKind,
    pub s: usize,
    pub a: QuadElem,
    /// `θ` for index sequences, `θ²` for value sequences.
    pub unit: QuadElem,
    pub particular: BigRat,
}

impl ResidueForm {
    /// The coefficient on `conj(unit)^q`; always `conj(a)`.
    pub fn b(&self) -> QuadElem {
        self.a.conj()
    }
}

/// One two-term form per residue class `s = 0 … r−1`.
pub fn build_residue_forms(
    p: &MultiplierParams,
    kind: SequenceKind,
) -> Result<Vec<ResidueForm>, ClosedFormError> {
    let spec = build_spec(p, kind)?;
    let tau = ParticularConstants::for_params(p).for_kind(kind).clone();
    let unit = if kind.is_index() {
        p.theta.clone()
    } else {
        p.theta.mul(&p.theta)?
    };
    // With a = u + v√D and unit = P + F√D:
    //   a + conj(a)                  = 2u           = y_0
    //   a·unit + conj(a·unit)        = 2(uP + vFD)  = y_1
    let big_p = unit.p();
    let f_d = unit.q() * &BigRat::from_int(unit.d().clone());
    if f_d.is_zero() {
        return Err(ClosedFormError::Degenerate);
    }
    let half = BigRat::new(1.into(), 2.into()).expect("nonzero");
    let r = p.r;
    (0..r)
        .map(|s| {
            let y0 = &BigRat::from_int(spec.window[s].clone()) - &tau;
            let y1 = &BigRat::from_int(spec.window[s + r].clone()) - &tau;
            let u = &y0 * &half;
            let v = (&(&y1 * &half) - &(&u * big_p)).checked_div(&f_d)?;
            Ok(ResidueForm {
                kind,
                s,
                a: QuadElem::new(u, v, unit.d().clone())?,
                unit: unit.clone(),
                particular: tau.clone(),
            })
        })
        .collect()
}

/// The `n`-th term in `O(log n)` multiplications in Q(√D).
pub fn eval_at(forms: &[ResidueForm], n: u64) -> Result<BigInt, ClosedFormError> {
    if forms.is_empty() {
        return Err(ClosedFormError::EmptyForms);
    }
    let r = forms.len() as u64;
    let form = &forms[(n % r) as usize];
    let w = form.a.mul(&form.unit.pow(n / r))?;
    let sum = w.add(&w.conj())?;
    if !sum.is_rational() {
        return Err(ClosedFormError::IrrationalResidue { n });
    }
    let value = sum.p() + &form.particular;
    value
        .to_integer()
        .ok_or(ClosedFormError::NonInteger { n, value })
}

/// Wire form of one [`ResidueForm`]; rationals are written `num/den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFormDoc {
    pub kind: String,
    pub s: usize,
    pub a_p: String,
    pub a_q: String,
    #[serde(rename = "D")]
    pub d: String,
    pub unit_p: String,
    pub unit_q: String,
    pub particular_num: String,
    pub particular_den: String,
}

impl From<&ResidueForm> for ResidueFormDoc {
    fn from(f: &ResidueForm) -> Self {
        ResidueFormDoc {
            kind: f.kind.name().to_string(),
            s: f.s,
            a_p: f.a.p().to_string(),
            a_q: f.a.q().to_string(),
            d: f.a.d().to_string(),
            unit_p: f.unit.p().to_string(),
            unit_q: f.unit.q().to_string(),
            particular_num: f.particular.numer().to_string(),
            particular_den: f.particular.denom().to_string(),
        }
    }
}

impl TryFrom<&ResidueFormDoc> for ResidueForm {
    type Error = ClosedFormError;

    fn try_from(doc: &ResidueFormDoc) -> Result<Self, ClosedFormError> {
        let int = |v: &str| {
            v.parse::<BigInt>()
                .map_err(|_| ClosedFormError::Malformed(format!("{v:?} is not an integer")))
        };
        let d = int(&doc.d)?;
        Ok(ResidueForm {
            kind: doc.kind.parse()?,
            s: doc.s,
            a: QuadElem::new(doc.a_p.parse()?, doc.a_q.parse()?, d.clone())?,
            unit: QuadElem::new(doc.unit_p.parse()?, doc.unit_q.parse()?, d)?,
            particular: BigRat::new(int(&doc.particular_num)?, int(&doc.particular_den)?)?,
        })
    }
}

pub fn forms_to_json(forms: &[ResidueForm]) -> String {
    let docs: Vec<ResidueFormDoc> = forms.iter().map(ResidueFormDoc::from).collect();
    serde_json::to_string_pretty(&docs).expect("plain structs serialize")
}

pub fn forms_from_json(s: &str) -> Result<Vec<ResidueForm>, ClosedFormError> {
    let docs: Vec<ResidueFormDoc> =
        serde_json::from_str(s).map_err(|e| ClosedFormError::Malformed(e.to_string()))?;
    docs.iter().map(ResidueForm::try_from).collect()
}
