use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::ExactError;

/// Integer square root by Newton iteration.
///
/// Returns `(⌊√n⌋, exact)` where `exact` tells whether `n` is a perfect square.
pub fn isqrt(n: &BigInt) -> Result<(BigInt, bool), ExactError> {
    if n.sign() == Sign::Minus {
        return Err(ExactError::NegativeInput(n.clone()));
    }
    let (root, exact) = isqrt_unsigned(n.magnitude());
    Ok((BigInt::from(root), exact))
}

pub fn isqrt_unsigned(n: &BigUint) -> (BigUint, bool) {
    if n.is_zero() {
        return (BigUint::zero(), true);
    }
    if let Some(small) = n.to_u128() {
        let r = isqrt_u128(small);
        return (BigUint::from(r), r * r == small);
    }
    // Start above the root; the iteration then decreases monotonically.
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            break;
        }
        x = y;
    }
    let exact = &x * &x == *n;
    (x, exact)
}

/// `⌊√n⌋` for machine integers: a float estimate corrected by at most a few
/// steps.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    matches!(isqrt(n), Ok((_, true)))
}

/// Splits `m ≥ 1` as `d·f²` with `d` squarefree, by trial division.
pub fn squarefree_core(m: &BigUint) -> Result<(BigUint, BigUint), ExactError> {
    if m.is_zero() {
        return Err(ExactError::NegativeInput(BigInt::zero()));
    }
    let mut rest = m.clone();
    let mut d = BigUint::one();
    let mut f = BigUint::one();
    let mut p: u64 = 2;
    loop {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            f *= pb.pow(e / 2);
            if e % 2 == 1 {
                d *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // Whatever survives has no prime factor ≤ its square root: it is 1 or prime.
    d *= rest;
    Ok((d, f))
}

pub fn is_squarefree(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(m) if !m.is_zero() => squarefree_core(&m)
            .map(|(_, f)| f.is_one())
            .unwrap_or(false),
        _ => false,
    }
}
