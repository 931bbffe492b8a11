use std::cell::Cell;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{is_squarefree, BigRat, ExactError};

thread_local! {
    static QUAD_MULS: Cell<u64> = const { Cell::new(0) };
}

/// Number of [`QuadElem`] multiplications performed on this thread since the
/// last [`reset_mul_count`].
pub fn mul_count() -> u64 {
    QUAD_MULS.with(Cell::get)
}

pub fn reset_mul_count() {
    QUAD_MULS.with(|c| c.set(0));
}

/// An element `p + q·√d` of the real quadratic field Q(√d), with `d`
/// squarefree and greater than one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    p: BigRat,
    q: BigRat,
    d: BigInt,
}

impl QuadElem {
    pub fn new(p: BigRat, q: BigRat, d: BigInt) -> Result<Self, ExactError> {
        if d <= BigInt::one() || !is_squarefree(&d) {
            return Err(ExactError::BadDiscriminant(d));
        }
        Ok(QuadElem { p, q, d })
    }

    pub fn from_ints(p: i64, q: i64, d: i64) -> Result<Self, ExactError> {
        Self::new(p.into(), q.into(), d.into())
    }

    /// The rational number `p` embedded in Q(√d).
    pub fn rational(p: BigRat, d: &BigInt) -> Self {
        QuadElem {
            p,
            q: BigRat::zero(),
            d: d.clone(),
        }
    }

    pub fn one(d: &BigInt) -> Self {
        Self::rational(BigRat::one(), d)
    }

    pub fn p(&self) -> &BigRat {
        &self.p
    }

    pub fn q(&self) -> &BigRat {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            p: self.p.clone(),
            q: -&self.q,
            d: self.d.clone(),
        }
    }

    /// `p² − q²·d`.
    pub fn norm(&self) -> BigRat {
        &(&self.p * &self.p) - &(&(&self.q * &self.q) * &BigRat::from_int(self.d.clone()))
    }

    /// `2p`, the sum of the element and its conjugate.
    pub fn trace(&self) -> BigRat {
        &self.p + &self.p
    }

    fn check_field(&self, other: &Self) -> Result<(), ExactError> {
        if self.d != other.d {
            return Err(ExactError::FieldMismatch {
                left: self.d.clone(),
                right: other.d.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        Ok(QuadElem {
            p: &self.p + &other.p,
            q: &self.q + &other.q,
            d: self.d.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadElem {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        QUAD_MULS.with(|c| c.set(c.get() + 1));
        let d = BigRat::from_int(self.d.clone());
        let p = &(&self.p * &other.p) + &(&(&self.q * &other.q) * &d);
        let q = &(&self.p * &other.q) + &(&self.q * &other.p);
        QuadElem {
            p,
            q,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        QuadElem {
            p: &self.p * k,
            q: &self.q * k,
            d: self.d.clone(),
        }
    }

    /// `self^e` by square-and-multiply: at most `2·⌊log₂ e⌋ + 1`
    /// multiplications.
    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Self::one(&self.d);
        }
        let mut acc: Option<QuadElem> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_unchecked(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_unchecked(&base);
        }
        acc.expect("e > 0 sets at least one bit")
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        let inv = n.recip()?;
        Ok(self.conj().scale(&inv))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.q.signum() < 0 { '-' } else { '+' };
        let q = if self.q.signum() < 0 {
            -&self.q
        } else {
            self.q.clone()
        };
        write!(f, "{} {} {}·√{}", self.p, sign, q, self.d)
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
