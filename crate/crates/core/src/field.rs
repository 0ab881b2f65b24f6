//! Arithmetic in the finite field F_q, q = p^k.
//!
//! Elements are stored by their digit under the fixed bijection
//! φ: F_q → {0, …, q−1}. For a prime field φ is the residue map; for an
//! extension field the coefficient vector (c_0, …, c_{k−1}) in the power
//! basis of the modulus maps to Σ c_i p^i. In both cases φ(0) = 0 and the
//! stored digit is canonical, so equality is plain integer equality.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest extension field order supported by the table arithmetic.
pub const MAX_EXTENSION_ORDER: u32 = 256;
/// Largest supported characteristic.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// An element of F_q, identified with its digit φ(element).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// The digit φ(self).
    #[inline]
    pub fn digit(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over F_p, low degree first, length k + 1. Empty for k = 1.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// The field F_q. Cheap to clone; immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Builds F_{p^k}. For `k > 1` a monic irreducible modulus of degree `k`
    /// over F_p is required; there is no built-in table of moduli.
    pub fn new(p: u64, k: u32, modulus: Option<&Poly>) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::BadDegree(k));
        }
        let p32 = p as u32;
        if k == 1 {
            if modulus.is_some() {
                return Err(Error::BadModulus("prime fields take no modulus".into()));
            }
            return Ok(FieldSpec(Arc::new(Inner {
                p: p32,
                k: 1,
                q: p32,
                modulus: Vec::new(),
                tables: None,
            })));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_EXTENSION_ORDER as u64)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(k)))?;
        let m = modulus.ok_or_else(|| Error::BadModulus(format!("degree {k} extension needs a modulus")))?;
        if m.field().q() != p32 || m.field().k() != 1 {
            return Err(Error::BadModulus("modulus must have coefficients in the prime field".into()));
        }
        if m.degree() != Some(k as usize) {
            return Err(Error::BadModulus(format!("modulus {m} does not have degree {k}")));
        }
        if !m.is_monic() {
            return Err(Error::BadModulus(format!("modulus {m} is not monic")));
        }
        if !m.is_irreducible()? {
            return Err(Error::BadModulus(format!("modulus {m} is reducible")));
        }
        let modulus: Vec<u32> = m.coeffs().iter().map(|c| c.digit()).collect();
        let tables = build_tables(p32, k, q as u32, &modulus);
        Ok(FieldSpec(Arc::new(Inner {
            p: p32,
            k,
            q: q as u32,
            modulus,
            tables: Some(tables),
        })))
    }

    /// F_q for a prime power `q`. Extension fields use the first monic
    /// irreducible modulus of degree k in digit order.
    pub fn of_order(q: u64) -> Result<Self> {
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or(Error::NotPrime(q))?;
        let (mut rest, mut k) = (q, 0u32);
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrime(q));
        }
        if k == 1 {
            return Self::prime(p);
        }
        if q > MAX_EXTENSION_ORDER as u64 {
            return Err(Error::FieldTooLarge(q));
        }
        let base = Self::prime(p)?;
        for code in 0..p.pow(k) {
            let mut digits: Vec<u32> = (0..k).map(|i| ((code / p.pow(i)) % p) as u32).collect();
            digits.push(1);
            let m = Poly::from_digits(&base, &digits)?;
            if m.is_irreducible()? {
                return Self::new(p, k, Some(&m));
            }
        }
        Err(Error::BadModulus(format!("no irreducible polynomial of degree {k} over F_{p}")))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// The modulus as a polynomial over F_p, or `None` for a prime field.
    pub fn modulus(&self) -> Option<Poly> {
        if self.0.k == 1 {
            return None;
        }
        let fp = FieldSpec::prime(self.0.p as u64).expect("characteristic was validated");
        Some(Poly::from_digits(&fp, &self.0.modulus).expect("modulus digits are in range"))
    }

    /// Element with digit `d`, i.e. φ^{-1}(d).
    pub fn elem(&self, d: u64) -> Result<FieldElem> {
        if d < self.0.q as u64 {
            Ok(FieldElem(d as u32))
        } else {
            Err(Error::DigitOutOfRange { digit: d, q: self.0.q })
        }
    }

    /// Element from its coefficient vector in the power basis (length k).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.0.k as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.0.k,
                coeffs.len()
            )));
        }
        let mut d = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(Error::DigitOutOfRange { digit: c as u64, q: self.0.p });
            }
            d = d * self.0.p as u64 + c as u64;
        }
        Ok(FieldElem(d as u32))
    }

    /// Coefficient vector of `a` in the power basis, length k.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut d = a.0;
        (0..self.0.k)
            .map(|_| {
                let c = d % self.0.p;
                d /= self.0.p;
                c
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.0.q).map(FieldElem)
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    #[inline]
    fn idx(&self, a: FieldElem, b: FieldElem) -> usize {
        a.0 as usize * self.0.q as usize + b.0 as usize
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.0.tables {
            None => {
                let s = a.0 as u64 + b.0 as u64;
                let p = self.0.p as u64;
                FieldElem(if s >= p { s - p } else { s } as u32)
            }
            Some(t) => FieldElem(t.add[self.idx(a, b)]),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match &self.0.tables {
            None => FieldElem(if a.0 == 0 { 0 } else { self.0.p - a.0 }),
            Some(t) => FieldElem(t.neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.0.tables {
            None => FieldElem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Some(t) => FieldElem(t.mul[self.idx(a, b)]),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.0.tables {
            None => Ok(FieldElem(pow_mod_u64(a.0 as u64, self.0.p as u64 - 2, self.0.p as u64) as u32)),
            Some(t) => Ok(FieldElem(t.inv[a.0 as usize])),
        }
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// φ(a).
    #[inline]
    pub fn to_digit(&self, a: FieldElem) -> u32 {
        a.0
    }

    /// φ^{-1}(d).
    pub fn from_digit(&self, d: u64) -> Result<FieldElem> {
        self.elem(d)
    }

    /// max over α of |φ(α + φ^{-1}(1)) − φ(α)|.
    pub fn max_unit_step(&self) -> u32 {
        self.elements()
            .map(|a| {
                let b = self.add(a, FieldElem::ONE);
                b.0.abs_diff(a.0)
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

pub(crate) fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn build_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> Tables {
    let k = k as usize;
    let qs = q as usize;
    let to_vec = |mut d: u32| -> Vec<u32> {
        (0..k)
            .map(|_| {
                let c = d % p;
                d /= p;
                c
            })
            .collect()
    };
    let from_vec = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
    let vecs: Vec<Vec<u32>> = (0..q).map(to_vec).collect();

    let mut add = vec![0; qs * qs];
    let mut mul = vec![0; qs * qs];
    for a in 0..qs {
        for b in 0..qs {
            let s: Vec<u32> = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| (x + y) % p).collect();
            add[a * qs + b] = from_vec(&s);
            // schoolbook product, then reduce by the monic modulus from the top
            let mut prod = vec![0u64; 2 * k - 1];
            for (i, &x) in vecs[a].iter().enumerate() {
                for (j, &y) in vecs[b].iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
                }
            }
            for top in (k..2 * k - 1).rev() {
                let c = prod[top];
                if c == 0 {
                    continue;
                }
                for (i, &mc) in modulus[..k].iter().enumerate() {
                    let idx = top - k + i;
                    prod[idx] = (prod[idx] + (p as u64 - c) * mc as u64) % p as u64;
                }
                prod[top] = 0;
            }
            let r: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
            mul[a * qs + b] = from_vec(&r);
        }
    }
    let mut neg = vec![0; qs];
    let mut inv = vec![0; qs];
    for a in 0..qs {
        neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u32;
        if a != 0 {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u32;
        }
    }
    Tables { add, mul, neg, inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn of_order() {
        assert_eq!(FieldSpec::of_order(7).unwrap().q(), 7);
        let f4 = FieldSpec::of_order(4).unwrap();
        assert_eq!((f4.p(), f4.k()), (2, 2));
        assert_eq!(f4.modulus().unwrap().to_string(), "1+x+x^2");
        assert_eq!(FieldSpec::of_order(9).unwrap().modulus().unwrap().to_string(), "1+x^2");
        assert!(FieldSpec::of_order(6).is_err());
        assert!(FieldSpec::of_order(1).is_err());
    }

    fn gf4() -> FieldSpec {
        let f2 = FieldSpec::prime(2).unwrap();
        let m = Poly::from_digits(&f2, &[1, 1, 1]).unwrap();
        FieldSpec::new(2, 2, Some(&m)).unwrap()
    }

    fn gf9() -> FieldSpec {
        let f3 = FieldSpec::prime(3).unwrap();
        // x^2 + 1 has no roots mod 3
        let m = Poly::from_digits(&f3, &[1, 0, 1]).unwrap();
        FieldSpec::new(3, 2, Some(&m)).unwrap()
    }

    fn small_fields() -> Vec<FieldSpec> {
        vec![
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7).unwrap(),
            gf4(),
            gf9(),
        ]
    }

    #[test]
    fn construction() {
        assert_eq!(FieldSpec::prime(2).unwrap().q(), 2);
        assert_eq!(FieldSpec::prime(3).unwrap().q(), 3);
        let f = gf4();
        assert_eq!((f.p(), f.k(), f.q()), (2, 2, 4));
        assert_eq!(f.modulus().unwrap().to_string(), "1+x+x^2");
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::prime(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::new(2, 0, None), Err(Error::BadDegree(0)));
        assert!(matches!(FieldSpec::new(2, 2, None), Err(Error::BadModulus(_))));
        let f2 = FieldSpec::prime(2).unwrap();
        let reducible = Poly::from_digits(&f2, &[1, 0, 1]).unwrap();
        assert!(matches!(FieldSpec::new(2, 2, Some(&reducible)), Err(Error::BadModulus(_))));
        let wrong_degree = Poly::from_digits(&f2, &[1, 1, 0, 1]).unwrap();
        assert!(matches!(FieldSpec::new(2, 2, Some(&wrong_degree)), Err(Error::BadModulus(_))));
        let f3 = FieldSpec::prime(3).unwrap();
        let non_monic = Poly::from_digits(&f3, &[1, 0, 2]).unwrap();
        assert!(matches!(FieldSpec::new(3, 2, Some(&non_monic)), Err(Error::BadModulus(_))));
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(f2.add(FieldElem::ONE, FieldElem::ONE), FieldElem::ZERO);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.inv(f3.elem(2).unwrap()).unwrap(), f3.elem(2).unwrap());
        let f4 = gf4();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        let x_plus_1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.mul(x, x), x_plus_1);
        assert_eq!(f4.inv(FieldElem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn digit_bijection_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(f2.to_digit(FieldElem::ONE), 1);
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.to_digit(f5.from_digit(3).unwrap()), 3);
        let f4 = gf4();
        assert_eq!(f4.from_coeffs(&[1, 1]).unwrap().digit(), 3);
        assert_eq!(f4.coeffs(f4.elem(2).unwrap()), vec![0, 1]);
        assert_eq!(f4.from_digit(4), Err(Error::DigitOutOfRange { digit: 4, q: 4 }));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE, "{f}");
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn bijection_roundtrip_exhaustive() {
        for f in small_fields() {
            for d in 0..f.q() as u64 {
                let there = f.from_digit(d).unwrap();
                assert_eq!(f.to_digit(there) as u64, d);
                assert_eq!(f.from_coeffs(&f.coeffs(f.elem(d).unwrap())).unwrap().digit() as u64, d);
            }
            assert_eq!(f.elem(0).unwrap(), FieldElem::ZERO);
        }
    }

    #[test]
    fn frobenius_exhaustive() {
        for f in small_fields() {
            let p = f.p() as u64;
            for u in [p, p * p] {
                for a in f.elements() {
                    for b in f.elements() {
                        assert_eq!(f.pow(f.add(a, b), u), f.add(f.pow(a, u), f.pow(b, u)));
                    }
                }
            }
        }
    }

    #[test]
    fn max_unit_step() {
        assert_eq!(FieldSpec::prime(2).unwrap().max_unit_step(), 1);
        assert_eq!(FieldSpec::prime(3).unwrap().max_unit_step(), 2);
    }
}
