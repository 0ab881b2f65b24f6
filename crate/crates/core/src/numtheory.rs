//! Integer helpers for multiplicative orders and base-b digits.

use crate::error::{Error, Result};

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or_else(|| Error::Overflow("lcm".into()))
}

pub fn checked_pow(base: u128, exp: u64) -> Result<u128> {
    let exp32 = u32::try_from(exp).map_err(|_| Error::Overflow(format!("{base}^{exp}")))?;
    base.checked_pow(exp32).ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

/// `b^e mod m` for `m < 2^64`.
pub fn pow_mod(b: u128, mut e: u128, m: u128) -> u128 {
    assert!(m > 0 && m <= u64::MAX as u128, "modulus must fit in 64 bits");
    let mut acc = 1 % m;
    let mut base = b % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Smallest `1 ≤ l ≤ m` with `a^l ≡ 1 (mod m)`, by brute force.
pub fn mul_order(a: u128, m: u128) -> Result<u128> {
    if m == 0 || m > u64::MAX as u128 {
        return Err(Error::Overflow(format!("modulus {m} outside 64 bits")));
    }
    if m == 1 {
        return Ok(1);
    }
    if gcd(a, m) != 1 {
        return Err(Error::NotCoprime);
    }
    let a = a % m;
    let mut cur = a;
    for l in 1..=m {
        if cur == 1 {
            return Ok(l);
        }
        cur = cur * a % m;
    }
    Err(Error::BoundExceeded(m as u64))
}

/// Base-`b` digits of `n`, least significant first (empty for `n = 0`).
pub fn digits(mut n: u128, b: u32) -> Vec<u32> {
    let b = b as u128;
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % b) as u32);
        n /= b;
    }
    out
}

/// Number of base-`b` digits of `n` (0 for `n = 0`).
pub fn digit_count(mut n: u128, b: u32) -> usize {
    let mut c = 0;
    while n > 0 {
        n /= b as u128;
        c += 1;
    }
    c
}
