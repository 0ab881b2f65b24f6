//! Nonnegative rationals with `u128` parts, compared exactly through a
//! 256-bit widening product.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A 256-bit unsigned integer as `(hi, lo)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct U256 {
    pub hi: u128,
    pub lo: u128,
}

impl U256 {
    pub fn mul(a: u128, b: u128) -> U256 {
        const MASK: u128 = u64::MAX as u128;
        let (a1, a0) = (a >> 64, a & MASK);
        let (b1, b0) = (b >> 64, b & MASK);
        let p00 = a0 * b0;
        let p01 = a0 * b1;
        let p10 = a1 * b0;
        let p11 = a1 * b1;
        let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
        let lo = (p00 & MASK) | (mid << 64);
        let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
        U256 { hi, lo }
    }

    /// `floor(self / d)`, or `None` if the quotient does not fit in `u128`.
    pub fn div_u128(self, d: u128) -> Option<u128> {
        assert!(d != 0, "division by zero");
        if self.hi >= d {
            return None;
        }
        // restoring long division, one bit at a time
        let mut rem = self.hi;
        let mut quot = 0u128;
        for i in (0..128).rev() {
            let carry = rem >> 127;
            rem = (rem << 1) | ((self.lo >> i) & 1);
            quot <<= 1;
            if carry == 1 || rem >= d {
                rem = rem.wrapping_sub(d);
                quot |= 1;
            }
        }
        Some(quot)
    }
}

/// `floor(a · b / c)` for `a < c`, which always fits.
pub fn mul_div_floor(a: u128, b: u128, c: u128) -> u128 {
    U256::mul(a, b).div_u128(c).expect("quotient fits when a < c and b fits")
}

/// Exact nonnegative rational `num / den`, not necessarily reduced.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Result<Ratio> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Ratio { num, den })
    }

    pub const fn zero() -> Ratio {
        Ratio { num: 0, den: 1 }
    }

    /// The exact value of a finite nonnegative double, if its denominator
    /// fits in `u128`.
    pub fn from_f64(x: f64) -> Option<Ratio> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        if x == 0.0 {
            return Some(Ratio::zero());
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mut mant, mut e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        while mant & 1 == 0 && e < 0 {
            mant >>= 1;
            e += 1;
        }
        if e >= 0 {
            let num = (mant as u128).checked_shl(e as u32).filter(|v| v >> e == mant as u128)?;
            Some(Ratio { num, den: 1 })
        } else if -e < 128 {
            Some(Ratio { num: mant as u128, den: 1u128 << (-e) })
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self / k` for a positive integer `k`.
    pub fn div_int(self, k: u128) -> Result<Ratio> {
        let den = self.den.checked_mul(k).ok_or_else(|| Error::Overflow("ratio denominator".into()))?;
        Ratio::new(self.num, den)
    }

    pub fn checked_add(self, other: Ratio) -> Result<Ratio> {
        let of = || Error::Overflow("ratio sum".into());
        if self.den == other.den {
            return Ratio::new(self.num.checked_add(other.num).ok_or_else(of)?, self.den);
        }
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|a| other.num.checked_mul(self.den).and_then(|b| a.checked_add(b)))
            .ok_or_else(of)?;
        Ratio::new(num, self.den.checked_mul(other.den).ok_or_else(of)?)
    }

    /// `self − other`, which must be nonnegative.
    pub fn checked_sub(self, other: Ratio) -> Result<Ratio> {
        let of = || Error::Overflow("ratio difference".into());
        let (a, b, den) = if self.den == other.den {
            (self.num, other.num, self.den)
        } else {
            (
                self.num.checked_mul(other.den).ok_or_else(of)?,
                other.num.checked_mul(self.den).ok_or_else(of)?,
                self.den.checked_mul(other.den).ok_or_else(of)?,
            )
        };
        let num = a.checked_sub(b).ok_or_else(|| Error::InvalidArgument("negative ratio".into()))?;
        Ratio::new(num, den)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        U256::mul(self.num, other.den).cmp(&U256::mul(other.num, self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
