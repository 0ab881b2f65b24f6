//! Point generation.
//!
//! Points from digital and radical-inverse sequences are exact: each coordinate is a
//! base-b digit vector (most significant first) and its value is
//! `Σ y_i b^{-i}`. Floating values are views derived from the digits.
//! Kronecker and i.i.d. uniform points are double-only baselines.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Ratio;
use crate::field::{FieldElem, FieldSpec};
use crate::genmat::{GenMatrix, SeqDef};
use crate::numtheory::{self, checked_pow};

/// One exact coordinate: `Σ_i digits[i] · base^{-(i+1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactCoord {
    base: u32,
    digits: Vec<u32>,
}

impl ExactCoord {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} < 2")));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::DigitOutOfRange { digit: d as u64, q: base });
        }
        Ok(ExactCoord { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.base as f64;
        self.digits.iter().rev().fold(0.0, |acc, &d| (acc + d as f64) / b)
    }

    /// `base^precision`.
    pub fn denominator(&self) -> Result<u128> {
        checked_pow(self.base as u128, self.digits.len() as u64)
    }

    /// The integer whose base-b digits are `digits`, i.e. value · base^precision.
    pub fn numerator(&self) -> Result<u128> {
        self.denominator()?;
        Ok(self.digits.iter().fold(0u128, |acc, &d| acc * self.base as u128 + d as u128))
    }

    pub fn to_ratio(&self) -> Result<Ratio> {
        Ratio::new(self.numerator()?, self.denominator()?)
    }

    /// The first `m` digits.
    pub fn truncate(&self, m: usize) -> Result<ExactCoord> {
        if m > self.digits.len() {
            return Err(Error::OutOfRange { index: m, limit: self.digits.len() });
        }
        Ok(ExactCoord { base: self.base, digits: self.digits[..m].to_vec() })
    }

    /// Zero-padded to `prec` digits; never drops digits.
    pub fn padded(&self, prec: usize) -> Result<ExactCoord> {
        if prec < self.digits.len() {
            return Err(Error::InvalidArgument(format!(
                "precision {prec} would drop digits of a {}-digit coordinate",
                self.digits.len()
            )));
        }
        let mut digits = self.digits.clone();
        digits.resize(prec, 0);
        Ok(ExactCoord { base: self.base, digits })
    }

    /// Index `a` of the interval `[a / b^v, (a+1) / b^v)` holding this coordinate.
    pub fn interval_index(&self, v: usize) -> u128 {
        (0..v).fold(0u128, |acc, i| acc * self.base as u128 + self.digits.get(i).copied().unwrap_or(0) as u128)
    }
}

/// A d-dimensional point with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactPoint {
    coords: Vec<ExactCoord>,
}

impl ExactPoint {
    pub fn new(coords: Vec<ExactCoord>) -> Self {
        ExactPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[ExactCoord] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> &ExactCoord {
        &self.coords[j]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(ExactCoord::to_f64).collect()
    }

    /// Coordinate-wise m-digit truncation [x]_m.
    pub fn truncate(&self, m: usize) -> Result<ExactPoint> {
        Ok(ExactPoint { coords: self.coords.iter().map(|c| c.truncate(m)).collect::<Result<_>>()? })
    }

    /// Indices `(a_1, …, a_d)` of the elementary interval I(v_1, …, v_d).
    pub fn interval_index(&self, shape: &[usize]) -> Result<Vec<u128>> {
        if shape.len() != self.coords.len() {
            return Err(Error::Shape(format!("shape of length {} for dimension {}", shape.len(), self.dim())));
        }
        Ok(self.coords.iter().zip(shape).map(|(c, &v)| c.interval_index(v)).collect())
    }
}

/// A digital sequence given by generating-matrix slices over one field.
#[derive(Clone, Debug)]
pub struct DigitalSeq {
    field: FieldSpec,
    matrices: Vec<GenMatrix>,
}

impl DigitalSeq {
    pub fn new(matrices: Vec<GenMatrix>) -> Result<Self> {
        let field = matrices
            .first()
            .ok_or_else(|| Error::InvalidArgument("no generating matrices".into()))?
            .field()
            .clone();
        if matrices.iter().any(|m| m.field() != &field) {
            return Err(Error::FieldMismatch);
        }
        Ok(DigitalSeq { field, matrices })
    }

    /// Square slices of size `size` for every coordinate of `def`.
    pub fn from_def(def: &SeqDef, size: usize) -> Result<Self> {
        Self::new(def.matrices(size)?)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn matrices(&self) -> &[GenMatrix] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    /// Largest precision every slice supports.
    pub fn max_precision(&self) -> usize {
        self.matrices.iter().map(GenMatrix::rows).min().unwrap_or(0)
    }

    /// φ^{-1} of the base-q digits of `n`, least significant first.
    pub fn index_vector(&self, n: u128) -> Vec<FieldElem> {
        numtheory::digits(n, self.field.q())
            .into_iter()
            .map(|d| self.field.elem(d as u64).expect("digit below q"))
            .collect()
    }

    /// The first `prec` entries of C^(j) · (φ^{-1}(n_0), φ^{-1}(n_1), …).
    pub fn coordinate_digits(&self, j: usize, n: u128, prec: usize) -> Result<Vec<FieldElem>> {
        let c = self
            .matrices
            .get(j)
            .ok_or(Error::OutOfRange { index: j, limit: self.matrices.len() })?;
        self.product(c, &self.index_vector(n), prec)
    }

    fn product(&self, c: &GenMatrix, v: &[FieldElem], prec: usize) -> Result<Vec<FieldElem>> {
        if v.len() > c.cols() {
            return Err(Error::Shape(format!(
                "index needs {} columns, slice has {}",
                v.len(),
                c.cols()
            )));
        }
        if prec > c.rows() {
            return Err(Error::Shape(format!("precision {prec} exceeds {} rows", c.rows())));
        }
        let f = &self.field;
        Ok((0..prec)
            .map(|r| {
                c.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| if b.is_zero() { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect())
    }

    /// The exact point x_n with `prec` digits per coordinate.
    pub fn point(&self, n: u128, prec: usize) -> Result<ExactPoint> {
        let v = self.index_vector(n);
        let q = self.field.q();
        let coords = self
            .matrices
            .iter()
            .map(|c| {
                let y = self.product(c, &v, prec)?;
                Ok(ExactCoord { base: q, digits: y.into_iter().map(|e| e.digit()).collect() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactPoint { coords })
    }
}

/// φ_b(n) as an exact coordinate whose precision is the digit count of n.
pub fn radical_inverse(b: u32, n: u128) -> Result<ExactCoord> {
    ExactCoord::new(b, numtheory::digits(n, b))
}

fn check_halton_bases(bases: &[u32]) -> Result<()> {
    if bases.is_empty() {
        return Err(Error::InvalidArgument("no Halton bases".into()));
    }
    for (i, &a) in bases.iter().enumerate() {
        if a < 2 {
            return Err(Error::InvalidArgument(format!("Halton base {a} < 2")));
        }
        for &b in &bases[i + 1..] {
            if numtheory::gcd(a as u128, b as u128) != 1 {
                return Err(Error::InvalidArgument(format!("Halton bases {a} and {b} are not coprime")));
            }
        }
    }
    Ok(())
}

/// Halton point with per-coordinate precisions.
pub fn halton_point_with(bases: &[u32], n: u128, precs: &[usize]) -> Result<ExactPoint> {
    check_halton_bases(bases)?;
    let coords = bases
        .iter()
        .zip(precs)
        .map(|(&b, &p)| radical_inverse(b, n)?.padded(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactPoint { coords })
}

/// `(φ_{b_1}(n), …, φ_{b_d}(n))`, each coordinate padded to `prec` digits.
/// A precision below the natural digit count of `n` is rejected.
pub fn halton_point(bases: &[u32], n: u128, prec: usize) -> Result<ExactPoint> {
    halton_point_with(bases, n, &vec![prec; bases.len()])
}

/// Keeps the first `m` digits of every coordinate.
pub fn truncate_point(p: &ExactPoint, m: usize) -> Result<ExactPoint> {
    p.truncate(m)
}

/// `({n α_1}, …, {n α_d})` in double precision.
pub fn kronecker_point(alpha: &[f64], n: u128) -> Vec<f64> {
    let nf = n as f64;
    alpha.iter().map(|&a| (nf * a).rem_euclid(1.0)).collect()
}

/// Where points come from.
#[derive(Clone, Debug)]
pub enum SeqSource {
    Digital { seq: DigitalSeq },
    Halton { bases: Vec<u32> },
    VanDerCorput { base: u32 },
    Kronecker { alpha: Vec<f64> },
    /// i.i.d. uniform points from a seeded ChaCha8 stream.
    Random { dim: usize, seed: u64 },
}

impl SeqSource {
    pub fn halton(bases: Vec<u32>) -> Result<Self> {
        check_halton_bases(&bases)?;
        Ok(SeqSource::Halton { bases })
    }

    pub fn van_der_corput(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} < 2")));
        }
        Ok(SeqSource::VanDerCorput { base })
    }

    pub fn dim(&self) -> usize {
        match self {
            SeqSource::Digital { seq } => seq.dim(),
            SeqSource::Halton { bases } => bases.len(),
            SeqSource::VanDerCorput { .. } => 1,
            SeqSource::Kronecker { alpha } => alpha.len(),
            SeqSource::Random { dim, .. } => *dim,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SeqSource::Digital { .. } | SeqSource::Halton { .. } | SeqSource::VanDerCorput { .. })
    }

    /// The first `count` points exactly. Each coordinate carries just enough
    /// digits to be exact for every index below `count` (digital sources use
    /// the digit count of `count − 1` in base q).
    pub fn exact_points(&self, count: usize) -> Result<Vec<ExactPoint>> {
        let last = count.saturating_sub(1) as u128;
        match self {
            SeqSource::Digital { seq } => {
                let prec = numtheory::digit_count(last, seq.field().q()).max(1);
                (0..count as u128).into_par_iter().map(|n| seq.point(n, prec)).collect()
            }
            SeqSource::Halton { bases } => {
                let precs: Vec<usize> = bases.iter().map(|&b| numtheory::digit_count(last, b)).collect();
                (0..count as u128)
                    .into_par_iter()
                    .map(|n| halton_point_with(bases, n, &precs))
                    .collect()
            }
            SeqSource::VanDerCorput { base } => {
                let prec = numtheory::digit_count(last, *base);
                (0..count as u128)
                    .into_par_iter()
                    .map(|n| Ok(ExactPoint { coords: vec![radical_inverse(*base, n)?.padded(prec)?] }))
                    .collect()
            }
            SeqSource::Kronecker { .. } | SeqSource::Random { .. } => {
                Err(Error::InvalidArgument("source has no exact representation".into()))
            }
        }
    }

    /// The first `count` points as doubles, flattened row-major.
    pub fn float_points(&self, count: usize) -> Result<Vec<f64>> {
        match self {
            SeqSource::Kronecker { alpha } => Ok((0..count as u128).flat_map(|n| kronecker_point(alpha, n)).collect()),
            SeqSource::Random { dim, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..count * dim).map(|_| rng.gen::<f64>()).collect())
            }
            _ => Ok(self.exact_points(count)?.iter().flat_map(ExactPoint::to_f64).collect()),
        }
    }
}

/// Occupancy of the elementary intervals I(shape) by `points`.
pub fn interval_counts(points: &[ExactPoint], shape: &[usize]) -> Result<HashMap<Vec<u128>, usize>> {
    let mut counts = HashMap::new();
    for p in points {
        *counts.entry(p.interval_index(shape)?).or_insert(0) += 1;
    }
    Ok(counts)
}

/// True iff every one of the Π b_j^{v_j} intervals I(shape) holds exactly
/// `per_interval` of the points.
pub fn intervals_evenly_filled(points: &[ExactPoint], shape: &[usize], per_interval: usize) -> Result<bool> {
    let Some(first) = points.first() else {
        return Ok(false);
    };
    let mut total: u128 = 1;
    for (c, &v) in first.coords().iter().zip(shape) {
        total = total
            .checked_mul(checked_pow(c.base() as u128, v as u64)?)
            .ok_or_else(|| Error::Overflow("interval count".into()))?;
    }
    let counts = interval_counts(points, shape)?;
    Ok(counts.len() as u128 == total && counts.values().all(|&c| c == per_interval))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmat::Construction;
    use crate::poly::parse_poly_list;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn nied() -> DigitalSeq {
        let f = f2();
        let def = SeqDef::new(&f, parse_poly_list(&f, "x;x+1").unwrap(), Construction::Niederreiter).unwrap();
        DigitalSeq::from_def(&def, 8).unwrap()
    }

    #[test]
    fn digital_examples() {
        let f = f2();
        let vdc = DigitalSeq::new(vec![GenMatrix::identity(&f, 4)]).unwrap();
        let p = vdc.point(3, 4).unwrap();
        assert_eq!(p.coord(0).digits(), &[1, 1, 0, 0]);
        assert_eq!(p.to_f64(), vec![0.75]);

        let s = nied();
        let p0 = s.point(0, 4).unwrap();
        assert!(p0.coords().iter().all(|c| c.digits().iter().all(|&d| d == 0)));
        let p1 = s.point(1, 4).unwrap();
        assert_eq!(p1.coord(0).digits(), &[1, 0, 0, 0]);
        assert_eq!(p1.coord(1).digits(), &[1, 0, 0, 0]);
        assert_eq!(p1.to_f64(), vec![0.5, 0.5]);
        let p2 = s.point(2, 4).unwrap();
        assert_eq!(p2.coord(1).digits(), &[1, 1, 0, 0]);
        assert!(s.point(256, 4).is_err());
        assert!(s.point(1, 9).is_err());
    }

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(2, 1).unwrap().to_ratio().unwrap(), Ratio { num: 1, den: 2 });
        assert_eq!(radical_inverse(3, 5).unwrap().to_ratio().unwrap(), Ratio { num: 7, den: 9 });
        assert_eq!(radical_inverse(2, 576).unwrap().to_ratio().unwrap(), Ratio { num: 9, den: 1024 });
        assert_eq!(radical_inverse(5, 0).unwrap().to_ratio().unwrap(), Ratio::zero());
    }

    #[test]
    fn halton_examples() {
        let p = halton_point(&[2, 3], 0, 3).unwrap();
        assert_eq!(p.to_f64(), vec![0.0, 0.0]);
        let p = halton_point(&[2, 3], 5, 3).unwrap();
        assert_eq!(p.coord(0).to_ratio().unwrap(), Ratio { num: 5, den: 8 });
        assert_eq!(p.coord(1).to_ratio().unwrap(), Ratio { num: 7, den: 9 });
        let p = halton_point(&[2, 3, 5], 1, 1).unwrap();
        let vals: Vec<Ratio> = p.coords().iter().map(|c| c.to_ratio().unwrap()).collect();
        assert_eq!(vals, vec![Ratio { num: 1, den: 2 }, Ratio { num: 1, den: 3 }, Ratio { num: 1, den: 5 }]);
        assert!(halton_point(&[2, 3], 5, 2).is_err());
        assert!(halton_point(&[2, 4], 1, 3).is_err());
    }

    #[test]
    fn truncate_examples() {
        let c = ExactCoord::new(2, vec![1, 1, 1, 1]).unwrap();
        let p = ExactPoint::new(vec![c.clone()]);
        assert_eq!(truncate_point(&p, 2).unwrap().coord(0).digits(), &[1, 1]);
        assert_eq!(c.truncate(3).unwrap().to_ratio().unwrap(), Ratio { num: 7, den: 8 });
        let zero = ExactPoint::new(vec![ExactCoord::new(3, vec![0; 5]).unwrap()]);
        assert!(truncate_point(&zero, 3).unwrap().coord(0).digits().iter().all(|&d| d == 0));
        assert!(c.truncate(5).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_point(&[0.5], 4), vec![0.0]);
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        assert!((kronecker_point(&[s2], 1)[0] - 0.414_213_562_373_095).abs() < 1e-12);
        let p = kronecker_point(&[s2, s3], 2);
        assert!((p[0] - (2.0 * s2 - 2.0)).abs() < 1e-12);
        assert!((p[1] - (2.0 * s3 - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn identity_digital_is_van_der_corput() {
        let f = f2();
        let seq = DigitalSeq::new(vec![GenMatrix::identity(&f, 10)]).unwrap();
        for n in 0..1024u128 {
            let d = seq.point(n, 10).unwrap();
            let v = radical_inverse(2, n).unwrap().padded(10).unwrap();
            assert_eq!(d.coord(0), &v);
        }
    }

    #[test]
    fn radical_inverse_injective_below_one() {
        for b in [2u32, 3, 5] {
            let prec = 6;
            let total = (b as u128).pow(prec);
            let mut seen = std::collections::HashSet::new();
            for n in 0..total {
                let r = radical_inverse(b, n).unwrap().padded(prec as usize).unwrap();
                let ratio = r.to_ratio().unwrap();
                assert!(ratio < Ratio { num: 1, den: 1 });
                assert!(seen.insert(ratio.num));
            }
        }
    }

    #[test]
    fn source_prefixes() {
        let src = SeqSource::halton(vec![2, 3]).unwrap();
        let pts = src.exact_points(8).unwrap();
        assert_eq!(pts[5].coord(0).to_ratio().unwrap(), Ratio { num: 5, den: 8 });
        let rnd = SeqSource::Random { dim: 2, seed: 7 };
        let a = rnd.float_points(10).unwrap();
        let b = rnd.float_points(20).unwrap();
        assert_eq!(a[..], b[..20]);
        assert!(rnd.exact_points(3).is_err());
    }
}
