//! Binary floating point at a caller-chosen precision.
//!
//! A value is `mant · 2^exp` with `|mant|` holding at most `prec` bits. Binary
//! operations run at the larger of the two operand precisions, so precision is
//! never lost by mixing values. Used only for numeric cross-checks; every
//! production path is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

pub const DEFAULT_PRECISION: u32 = 256;

/// Guard bits carried by the fixed-point series (π, sin, cos).
const SERIES_GUARD: u32 = 32;

#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        BigFloat { mant, exp, prec }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        // Trailing zero bits carry no information; dropping them keeps
        // mantissas short for values like small integers.
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        let bits = self.mant.bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            let neg = self.mant.is_negative();
            let mag = self.mant.magnitude();
            let half = BigUint::one() << (shift - 1);
            let rounded = (mag + half) >> shift;
            self.mant = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, rounded);
            self.exp += shift as i64;
            return self.normalized();
        }
        self
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::from_parts(n.clone(), 0, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rat(r: &BigRat, prec: u32) -> Self {
        Self::from_int(r.numer(), prec) / Self::from_int(r.denom(), prec)
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64, prec: u32) -> Self {
        BigFloat {
            mant: BigInt::one(),
            exp: e,
            prec,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Re-rounds to `prec` bits. Lowering precision is an explicit request.
    pub fn with_precision(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Position just above the most significant bit: `|x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    /// Approximate `log₂|x|`; `-∞` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(60);
        let lead = (self.mant.magnitude() >> shift)
            .to_f64()
            .unwrap_or(f64::MAX);
        lead.log2() + shift as f64 + self.exp as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * self.log2_abs().exp2()
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        let neg = self.mant.is_negative();
        let half = BigUint::one() << (shift - 1);
        let mag = (self.mant.magnitude() + half) >> shift;
        BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag)
    }

    /// `|x − round(x)|`.
    pub fn distance_to_nearest_integer(&self) -> BigFloat {
        (self - &BigFloat::from_int(&self.round(), self.prec)).abs()
    }

    pub fn powi(&self, e: u64) -> Self {
        let mut acc = BigFloat::from_i64(1, self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi_signed(&self, e: i64) -> Self {
        let p = self.powi(e.unsigned_abs());
        if e < 0 {
            BigFloat::from_i64(1, self.prec) / p
        } else {
            p
        }
    }

    pub fn sqrt(&self) -> Self {
        self.nth_root(2)
    }

    /// Positive real `n`-th root of a nonnegative value.
    ///
    /// # Panics
    /// If the value is negative.
    pub fn nth_root(&self, n: u32) -> Self {
        assert!(!self.is_negative(), "nth_root of a negative value");
        assert!(n >= 1);
        if self.is_zero() || n == 1 {
            return self.clone();
        }
        let want = n as i64 * (self.prec as i64 + 2);
        let mut shift = (want - self.mant.bits() as i64).max(0);
        let n64 = n as i64;
        shift += (self.exp - shift).rem_euclid(n64);
        let scaled = self.mant.magnitude() << shift as u64;
        let root = scaled.nth_root(n);
        Self::from_parts(BigInt::from(root), (self.exp - shift) / n64, self.prec)
    }

    /// π by Machin's formula.
    pub fn pi(prec: u32) -> Self {
        let scale = prec + SERIES_GUARD;
        let atan_inv = |x: u32| -> BigInt {
            let x2 = BigInt::from(x) * x;
            let mut power = (BigInt::one() << scale) / x;
            let mut sum = BigInt::zero();
            let mut k: u32 = 0;
            while !power.is_zero() {
                let term = &power / (2 * k + 1);
                if k.is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &x2;
                k += 1;
            }
            sum
        };
        let fixed = atan_inv(5) * 16 - atan_inv(239) * 4;
        Self::from_parts(fixed, -(scale as i64), prec)
    }

    /// `(cos x, sin x)` by Taylor series after reduction into [−π, π].
    pub fn cos_sin(&self) -> (Self, Self) {
        let prec = self.prec;
        let two_pi = &BigFloat::pi(prec + 16) * &BigFloat::from_i64(2, prec + 16);
        let turns = (self / &two_pi).round();
        let reduced = self - &(&two_pi * &BigFloat::from_int(&turns, prec + 16));

        let scale = prec + SERIES_GUARD;
        let y = reduced.to_fixed(scale);
        let one = BigInt::one() << scale;
        let mut term = one;
        let (mut c, mut s) = (BigInt::zero(), BigInt::zero());
        let mut n: u32 = 0;
        while !term.is_zero() {
            match n % 4 {
                0 => c += &term,
                1 => s += &term,
                2 => c -= &term,
                _ => s -= &term,
            }
            term = ((term * &y) >> scale) / (n + 1);
            n += 1;
        }
        let e = -(scale as i64);
        (Self::from_parts(c, e, prec), Self::from_parts(s, e, prec))
    }

    /// `round(x · 2^scale)` as an integer.
    fn to_fixed(&self, scale: u32) -> BigInt {
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + scale as i64,
            prec: self.prec,
        }
        .round()
    }

    /// Decimal rendering with `digits` digits after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = self * &BigFloat::from_int(&BigInt::from(10).pow(digits), self.prec);
        let n = scaled.round();
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let digits = digits as usize;
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl<'a> Add<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        let prec = self.prec.max(rhs.prec);
        if rhs.is_zero() {
            return self.clone().with_precision(prec);
        }
        if self.is_zero() {
            return rhs.clone().with_precision(prec);
        }
        // Far below the rounding point: the smaller operand cannot matter.
        let gap = prec as i64 + 2;
        if self.top() > rhs.top() + gap {
            return self.clone().with_precision(prec);
        }
        if rhs.top() > self.top() + gap {
            return rhs.clone().with_precision(prec);
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        BigFloat::from_parts(a + b, e, prec)
    }
}

impl<'a> Sub<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        BigFloat::from_parts(
            &self.mant * &rhs.mant,
            self.exp + rhs.exp,
            self.prec.max(rhs.prec),
        )
    }
}

impl<'a> Div<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    /// # Panics
    /// On division by zero.
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = (prec as i64 + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as u64) / &rhs.mant;
        BigFloat::from_parts(q, self.exp - rhs.exp - shift, prec)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && (self.mant.is_zero() || self.exp == other.exp)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self - other;
        Some(match diff.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20) as u32;
        f.write_str(&self.to_decimal(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = DEFAULT_PRECISION;

    fn bf(n: i64) -> BigFloat {
        BigFloat::from_i64(n, P)
    }

    fn close(a: &BigFloat, b: &BigFloat, log2_tol: f64) -> bool {
        (a - b).abs().log2_abs() < log2_tol
    }

    #[test]
    fn integer_arithmetic_is_exact() {
        assert_eq!((&bf(12) * &bf(-7)).round(), BigInt::from(-84));
        assert_eq!((&bf(12) + &bf(-7)).round(), BigInt::from(5));
        assert_eq!((&bf(1) / &bf(4)).to_decimal(3), "0.250");
        assert_eq!(bf(-3).to_decimal(2), "-3.00");
    }

    #[test]
    fn sqrt_two_squared() {
        let r = bf(2).sqrt();
        assert!(close(&(&r * &r), &bf(2), -250.0));
        assert_eq!(r.to_decimal(10), "1.4142135624");
    }

    #[test]
    fn nth_roots() {
        let theta = &bf(649) + &(&bf(180) * &bf(13).sqrt());
        let alpha = theta.nth_root(4);
        assert!(close(&alpha.powi(4), &theta, -240.0));
        let c = bf(19).nth_root(3);
        assert!(close(&c.powi(3), &bf(19), -248.0));
    }

    #[test]
    fn pi_digits() {
        assert_eq!(
            BigFloat::pi(P).to_decimal(40),
            "3.1415926535897932384626433832795028841972"
        );
    }

    #[test]
    fn cos_sin_of_third_turn() {
        let x = &(&BigFloat::pi(P) * &bf(2)) / &bf(3);
        let (c, s) = x.cos_sin();
        assert!(close(
            &c,
            &BigFloat::from_rat(&"-1/2".parse().unwrap(), P),
            -250.0
        ));
        assert!(close(&s, &(&bf(3).sqrt() / &bf(2)), -250.0));
        let (c, s) = (&x * &bf(7)).cos_sin();
        assert!(close(
            &c,
            &BigFloat::from_rat(&"-1/2".parse().unwrap(), P),
            -245.0
        ));
        assert!(close(&s, &(&bf(3).sqrt() / &bf(2)), -245.0));
    }

    #[test]
    fn precision_is_never_lowered_by_mixing() {
        let lo = BigFloat::from_i64(3, 64);
        let hi = BigFloat::from_i64(7, 512);
        assert_eq!((&lo / &hi).precision(), 512);
        assert_eq!((&lo + &hi).precision(), 512);
    }

    #[test]
    fn tiny_addend_is_absorbed_at_precision() {
        let big = bf(1);
        let tiny = BigFloat::pow2(-400, P);
        assert_eq!(&big + &tiny, big);
        let tiny = BigFloat::pow2(-200, P);
        assert!(&big + &tiny > big);
    }

    #[test]
    fn rounding_and_distance() {
        let x = &bf(7) / &bf(2);
        assert_eq!(x.round(), BigInt::from(4));
        assert_eq!((-&x).round(), BigInt::from(-4));
        assert_eq!(x.distance_to_nearest_integer().to_decimal(2), "0.50");
        assert_eq!(BigFloat::pow2(-150, P).log2_abs(), -150.0);
    }

    #[test]
    fn negative_powers() {
        let x = bf(3);
        assert!(close(&(&x.powi_signed(-2) * &bf(9)), &bf(1), -250.0));
    }
}
