//! Polynomials over F_q.
//!
//! Besides ring arithmetic this module carries the two expansions the
//! generating-matrix constructions are built from: the formal Laurent
//! expansion of `x^r / q(x)^s` in F_q((x^{-1})) and the base-`q(x)` digit
//! expansion of `x^k`.
//!
//! Text form: `+`-joined monomials `c*x^k`, coefficients written as digits
//! via φ. `x` and `x^k` stand for coefficient 1; a bare integer is a
//! constant; `0` is the zero polynomial. Whitespace is ignored and
//! repeated degrees are summed. Display prints terms in increasing degree,
//! e.g. `1+x+x^2` or `2+2*x^3`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    /// `coeffs[i]` is the coefficient of x^i; no trailing zeros.
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Polynomial from φ-digits, lowest degree first.
    pub fn from_digits(field: &FieldSpec, digits: &[u32]) -> Result<Self> {
        let coeffs = digits
            .iter()
            .map(|&d| field.elem(d as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, coeffs))
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(field, FieldElem::ONE)
    }

    pub fn constant(field: &FieldSpec, c: FieldElem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(field: &FieldSpec, c: FieldElem, k: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn x(field: &FieldSpec) -> Self {
        Self::monomial(field, FieldElem::ONE, 1)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn digits(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.digit()).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElem::ONE
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FieldElem::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn assert_field(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    /// # Panics
    /// If the operands live over different fields.
    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, coeffs)
    }

    /// # Panics
    /// If the operands live over different fields.
    pub fn sub(&self, other: &Poly) -> Poly {
        self.assert_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, coeffs)
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// # Panics
    /// If the operands live over different fields.
    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder with `self = q·divisor + r`, `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `self` scaled to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => self.scale(self.field.inv(lead).expect("nonzero leading coefficient")),
        }
    }

    /// True iff gcd(self, other) is a constant.
    pub fn is_coprime(&self, other: &Poly) -> Result<bool> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::BadPolynomial("coprimality of the zero polynomial".into()));
        }
        Ok(self.gcd(other)?.degree() == Some(0))
    }

    /// Irreducibility by exhaustive trial division with every monic
    /// polynomial of degree 1..=deg/2. Meant for small degrees and fields.
    pub fn is_irreducible(&self) -> Result<bool> {
        let deg = match self.degree() {
            Some(d) if d >= 1 && self.is_monic() => d,
            _ => {
                return Err(Error::BadPolynomial(format!(
                    "irreducibility needs a monic non-constant polynomial, got {self}"
                )))
            }
        };
        let q = self.field.q() as u64;
        for d in 1..=deg / 2 {
            let count = q.pow(d as u32);
            for code in 0..count {
                let mut digits = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    digits.push((c % q) as u32);
                    c /= q;
                }
                digits.push(1);
                let cand = Poly::from_digits(&self.field, &digits)?;
                if self.rem(&cand)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// The order bound q^{deg g}, saturating.
    pub fn default_order_bound(g: &Poly) -> u64 {
        let deg = g.degree().unwrap_or(0) as u32;
        (g.field.q() as u64).saturating_pow(deg)
    }

    /// Smallest `r ≥ 1` with `self^r ≡ 1 (mod g)`, searched by repeated
    /// multiplication up to `bound`.
    pub fn mul_order(&self, g: &Poly, bound: u64) -> Result<u64> {
        self.check_field(g)?;
        if g.is_constant() {
            return Err(Error::BadPolynomial(format!("order modulo constant {g}")));
        }
        if !self.is_coprime(g)? {
            return Err(Error::NotCoprime);
        }
        let base = self.rem(g)?;
        let mut cur = base.clone();
        let mut r = 1u64;
        while !cur.is_one() {
            if r >= bound {
                return Err(Error::BoundExceeded(bound));
            }
            cur = cur.mul_mod(&base, g)?;
            r += 1;
        }
        Ok(r)
    }

    fn check_expansion_modulus(&self) -> Result<usize> {
        match self.degree() {
            Some(e) if e >= 1 && self.is_monic() => Ok(e),
            _ => Err(Error::BadPolynomial(format!("expected a monic non-constant polynomial, got {self}"))),
        }
    }

    /// Coefficients `a(s, r, k)`, `k = 0..count`, of
    /// `x^r / self^s = Σ_k a(s, r, k) x^{-k-1}`.
    pub fn laurent_coeffs(&self, s: usize, r: usize, count: usize) -> Result<Vec<FieldElem>> {
        if s < 1 {
            return Err(Error::InvalidArgument("laurent expansion needs s >= 1".into()));
        }
        let mut rows = self.laurent_rows(r, s, count)?;
        Ok(rows.pop().expect("s >= 1 rows"))
    }

    /// Expansions of `x^r / self^s` for every `s = 1..=s_max`, each truncated
    /// to `count` coefficients. Each power is obtained from the previous one by
    /// one more synthetic division by `self`, so `self^s` is never formed.
    pub fn laurent_rows(&self, r: usize, s_max: usize, count: usize) -> Result<Vec<Vec<FieldElem>>> {
        let e = self.check_expansion_modulus()?;
        if r >= e {
            return Err(Error::OutOfRange { index: r, limit: e });
        }
        let f = &self.field;
        let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(s_max);
        for stage in 0..s_max {
            // b_n = a_{n-e} − Σ_{i<e} q_i b_{n-e+i}; a is x^r on the first stage
            let mut b = vec![FieldElem::ZERO; count];
            for n in 0..count {
                let mut acc = if stage == 0 {
                    if n + r + 1 == e {
                        FieldElem::ONE
                    } else {
                        FieldElem::ZERO
                    }
                } else if n >= e {
                    rows[stage - 1][n - e]
                } else {
                    FieldElem::ZERO
                };
                for i in 0..e {
                    if n + i >= e {
                        let prev = b[n + i - e];
                        if !prev.is_zero() {
                            acc = f.sub(acc, f.mul(self.coeffs[i], prev));
                        }
                    }
                }
                b[n] = acc;
            }
            rows.push(b);
        }
        Ok(rows)
    }

    /// Digits `(b_0, …, b_S)` with `x^k = Σ b_s(x) self^s` and
    /// `deg b_s < deg self`; trailing zero digits are dropped.
    pub fn base_expansion(&self, k: usize) -> Result<Vec<Poly>> {
        self.check_expansion_modulus()?;
        let mut cur = Poly::monomial(&self.field, FieldElem::ONE, k);
        let mut out = Vec::new();
        while !cur.is_zero() {
            let (quot, rem) = cur.divmod(self)?;
            out.push(rem);
            cur = quot;
        }
        Ok(out)
    }

    /// Parses the `+`-joined monomial form described in the module docs.
    pub fn parse(field: &FieldSpec, text: &str) -> Result<Poly> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut coeffs: Vec<FieldElem> = Vec::new();
        for term in compact.split('+') {
            let (c, k) = parse_term(field, term)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, FieldElem::ZERO);
            }
            coeffs[k] = field.add(coeffs[k], c);
        }
        Ok(Poly::new(field, coeffs))
    }
}

fn parse_term(field: &FieldSpec, term: &str) -> Result<(FieldElem, usize)> {
    let bad = || Error::Parse(format!("malformed term '{term}'"));
    if term.is_empty() {
        return Err(bad());
    }
    let (coef_part, mono_part) = match term.find('x') {
        None => (Some(term), None),
        Some(pos) => {
            let (head, tail) = term.split_at(pos);
            let coef = if head.is_empty() {
                None
            } else {
                Some(head.strip_suffix('*').filter(|c| !c.is_empty()).ok_or_else(bad)?)
            };
            (coef, Some(tail))
        }
    };
    let c = match coef_part {
        None => FieldElem::ONE,
        Some(s) => {
            let d: u64 = s.parse().map_err(|_| bad())?;
            field.elem(d).map_err(|_| Error::Parse(format!("coefficient {d} is not a digit of F_{}", field.q())))?
        }
    };
    let k = match mono_part {
        None => 0,
        Some("x") => 1,
        Some(m) => {
            let exp = m.strip_prefix("x^").ok_or_else(bad)?;
            exp.parse::<usize>().map_err(|_| bad())?
        }
    };
    Ok((c, k))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c.digit()) {
                (0, d) => write!(f, "{d}")?,
                (1, 1) => write!(f, "x")?,
                (1, d) => write!(f, "{d}*x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, d) => write!(f, "{d}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Parses a `;`-separated list of polynomials.
pub fn parse_poly_list(field: &FieldSpec, text: &str) -> Result<Vec<Poly>> {
    text.split(';').map(|t| Poly::parse(field, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn poly(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn divmod_examples() {
        let f2 = f(2);
        let (q, r) = poly(&f2, "x^3").divmod(&poly(&f2, "x")).unwrap();
        assert_eq!((q, r), (poly(&f2, "x^2"), Poly::zero(&f2)));
        let (q, r) = poly(&f2, "x^2").divmod(&poly(&f2, "x+1")).unwrap();
        assert_eq!((q, r), (poly(&f2, "x+1"), poly(&f2, "1")));
        let f3 = f(3);
        let (q, r) = poly(&f3, "x^2+1").divmod(&poly(&f3, "x^2+1")).unwrap();
        assert_eq!((q, r), (Poly::one(&f3), Poly::zero(&f3)));
    }

    #[test]
    fn divmod_errors() {
        let f2 = f(2);
        assert_eq!(poly(&f2, "x").divmod(&Poly::zero(&f2)), Err(Error::DivisionByZero));
        assert_eq!(poly(&f2, "x").divmod(&poly(&f(3), "x")), Err(Error::FieldMismatch));
    }

    #[test]
    fn coprime_examples() {
        let f2 = f(2);
        assert!(poly(&f2, "x").is_coprime(&poly(&f2, "x+1")).unwrap());
        assert!(!poly(&f2, "x^2").is_coprime(&poly(&f2, "x")).unwrap());
        let f3 = f(3);
        assert!(poly(&f3, "x^2+1").is_coprime(&poly(&f3, "x+1")).unwrap());
        assert!(Poly::zero(&f3).is_coprime(&poly(&f3, "x")).is_err());
    }

    #[test]
    fn irreducible_examples() {
        let f2 = f(2);
        assert!(poly(&f2, "x^2+x+1").is_irreducible().unwrap());
        assert!(!poly(&f2, "x^2+1").is_irreducible().unwrap());
        assert!(poly(&f2, "x").is_irreducible().unwrap());
        assert!(poly(&f2, "x^4+x+1").is_irreducible().unwrap());
        assert!(!poly(&f2, "x^4+x^2+1").is_irreducible().unwrap());
        assert!(Poly::one(&f2).is_irreducible().is_err());
        assert!(poly(&f(3), "2*x^2+1").is_irreducible().is_err());
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // monic irreducibles over F_2: 2, 1, 2, 3, 6 for degrees 1..=5
        let f2 = f(2);
        let counts: Vec<usize> = (1..=5u32)
            .map(|d| {
                (0..1u32 << d)
                    .filter(|&code| {
                        let mut digits: Vec<u32> = (0..d).map(|i| (code >> i) & 1).collect();
                        digits.push(1);
                        Poly::from_digits(&f2, &digits).unwrap().is_irreducible().unwrap()
                    })
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6]);
    }

    #[test]
    fn laurent_examples() {
        let f2 = f(2);
        let digits = |v: Vec<FieldElem>| v.into_iter().map(|c| c.digit()).collect::<Vec<_>>();
        assert_eq!(digits(poly(&f2, "x").laurent_coeffs(1, 0, 4).unwrap()), vec![1, 0, 0, 0]);
        assert_eq!(digits(poly(&f2, "x+1").laurent_coeffs(1, 0, 4).unwrap()), vec![1, 1, 1, 1]);
        assert_eq!(
            digits(poly(&f2, "x^2+x+1").laurent_coeffs(1, 1, 6).unwrap()),
            vec![1, 1, 0, 1, 1, 0]
        );
        assert_eq!(
            poly(&f2, "x+1").laurent_coeffs(1, 1, 3),
            Err(Error::OutOfRange { index: 1, limit: 1 })
        );
    }

    #[test]
    fn base_expansion_examples() {
        let f2 = f(2);
        let x = poly(&f2, "x");
        let got = x.base_expansion(3).unwrap();
        let zero = Poly::zero(&f2);
        let one = Poly::one(&f2);
        assert_eq!(got, vec![zero.clone(), zero.clone(), zero.clone(), one.clone()]);
        assert_eq!(poly(&f2, "x+1").base_expansion(2).unwrap(), vec![one.clone(), zero, one]);
        let f3 = f(3);
        assert_eq!(poly(&f3, "x").base_expansion(0).unwrap(), vec![Poly::one(&f3)]);
    }

    #[test]
    fn base_expansion_reconstructs() {
        let f2 = f(2);
        let f3 = f(3);
        let moduli = [poly(&f2, "x"), poly(&f2, "x+1"), poly(&f2, "x^2+x+1"), poly(&f3, "x^2+1"), poly(&f3, "x+2")];
        for m in &moduli {
            let field = m.field();
            for k in 0..=64 {
                let digits = m.base_expansion(k).unwrap();
                let mut acc = Poly::zero(field);
                let mut power = Poly::one(field);
                for b in &digits {
                    assert!(b.degree().is_none_or(|d| d < m.degree().unwrap()));
                    acc = acc.add(&b.mul(&power));
                    power = power.mul(m);
                }
                assert_eq!(acc, Poly::monomial(field, FieldElem::ONE, k), "{m} k={k}");
                assert!(digits.last().is_none_or(|b| !b.is_zero()));
            }
        }
    }

    #[test]
    fn mul_order_examples() {
        let f2 = f(2);
        let bound = 1 << 10;
        assert_eq!(poly(&f2, "x").mul_order(&poly(&f2, "x+1"), bound), Ok(1));
        assert_eq!(poly(&f2, "x").mul_order(&poly(&f2, "x^2+x+1"), bound), Ok(3));
        assert_eq!(poly(&f2, "x+1").mul_order(&poly(&f2, "x"), bound), Ok(1));
        assert_eq!(poly(&f2, "x").mul_order(&poly(&f2, "x^2"), bound), Err(Error::NotCoprime));
        assert_eq!(poly(&f2, "x").mul_order(&poly(&f2, "x^4+x+1"), 3), Err(Error::BoundExceeded(3)));
    }

    #[test]
    fn mul_order_divides_group_order() {
        for (p, g) in [(2, "x^3+x+1"), (2, "x^4+x^3+1"), (3, "x^2+1"), (5, "x^2+2")] {
            let field = f(p);
            let g = poly(&field, g);
            assert!(g.is_irreducible().unwrap());
            let group = Poly::default_order_bound(&g) - 1;
            for digits in [[0u32, 1], [1, 1], [2 % p as u32, 1]] {
                let fpoly = Poly::from_digits(&field, &digits).unwrap();
                let ord = fpoly.mul_order(&g, group + 1).unwrap();
                assert_eq!(group % ord, 0, "{fpoly} mod {g}");
            }
        }
    }

    #[test]
    fn display_and_parse() {
        let f3 = f(3);
        let p = poly(&f3, "2*x^3 + x + 2");
        assert_eq!(p.to_string(), "2+x+2*x^3");
        assert_eq!(poly(&f3, "x+x"), poly(&f3, "2*x"));
        assert_eq!(poly(&f3, "0").to_string(), "0");
        for bad in ["", "x^", "3*x", "*x", "x^a", "2x", "1++x", "y"] {
            assert!(Poly::parse(&f3, bad).is_err(), "{bad:?}");
        }
        let list = parse_poly_list(&f(2), "x;x+1").unwrap();
        assert_eq!(list.len(), 2);
    }

    fn arb_poly(field: FieldSpec, max_deg: usize) -> impl Strategy<Value = Poly> {
        let q = field.q();
        prop::collection::vec(0..q, 0..=max_deg + 1)
            .prop_map(move |d| Poly::from_digits(&field, &d).unwrap())
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop::sample::select(vec![2u64, 3, 5]).prop_map(|p| FieldSpec::prime(p).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn divmod_roundtrip((a, b) in arb_field().prop_flat_map(|f| (arb_poly(f.clone(), 10), arb_poly(f, 10)))) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn display_parse_roundtrip(a in arb_field().prop_flat_map(|f| arb_poly(f, 12))) {
            prop_assert_eq!(Poly::parse(a.field(), &a.to_string()).unwrap(), a);
        }
    }
}
