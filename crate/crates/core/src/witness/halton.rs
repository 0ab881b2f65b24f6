//! Witnesses for Halton sequences in pairwise coprime bases `b_1 < b_j`.
//!
//! For an exponent vector `k`, the shift `M` by which `x_n` and `x_{n+M}`
//! stay in the same interval `I(uτ_1k_1, 2τ_2k_2, …)` has base-`b_1` digits
//! `0…0 1 0…0` (`uτ_1k_1` zeros, a one, then `u − 1` zeros) and
//! base-`b_j` digits `0…0 1 0`. For most `n < L` this fixes the distance of
//! the pair to a narrow window around `1 / b_1^{uτ_1k_1+1}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::Serialize;

use super::{gap_value, DistanceRange, WitnessReport};
use crate::error::{Error, Result};
use crate::exact::Ratio;
use crate::numtheory::{checked_pow, digits, gcd, mul_order};
use crate::paircorr::{torus_dist_exact, ExactCloud};
use crate::sequences::{halton_point_with, intervals_evenly_filled, ExactPoint};

pub const DEFAULT_HALTON_BUDGET: u128 = 1 << 22;

/// Parameters of a Halton witness for one exponent vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaltonWitness {
    pub bases: Vec<u32>,
    pub u: u32,
    /// Moduli `P_i`.
    pub p: Vec<u128>,
    pub tau: Vec<u64>,
    pub kvec: Vec<u64>,
    /// Digit counts `(uτ_1k_1, 2τ_2k_2, …)` of the intervals.
    pub shape: Vec<usize>,
    #[serde(rename = "M")]
    pub big_m: u128,
    #[serde(rename = "L")]
    pub l: u128,
    #[serde(rename = "N")]
    pub n: u128,
    pub f_u: f64,
    pub gamma_d: f64,
    /// `ξ_j` for `j ≥ 2`.
    pub xi: Vec<f64>,
    /// The case (0 or 1) each `k_j` realises, `None` if neither.
    pub delta: Vec<Option<u8>>,
    /// The two-sided estimate on `b_j^{2τ_jk_j+1} / b_1^{uτ_1k_1+1}`, checked exactly.
    pub ratio_bounds_ok: Vec<bool>,
    pub a_pow: f64,
    pub b_pow: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub gap: f64,
    pub gap_ok: bool,
    /// The coordinate-1 window lies strictly above every other coordinate's.
    pub separation_ok: bool,
}

pub(crate) fn check_bases(bases: &[u32]) -> Result<()> {
    if bases.len() < 2 {
        return Err(Error::InvalidArgument("need at least two bases".into()));
    }
    if bases.iter().any(|&b| b < 2) {
        return Err(Error::InvalidArgument("bases must be at least 2".into()));
    }
    if bases[1..].iter().any(|&b| b <= bases[0]) {
        return Err(Error::InvalidArgument("b_1 must be strictly smallest".into()));
    }
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            if gcd(bases[i] as u128, bases[j] as u128) != 1 {
                return Err(Error::InvalidArgument(format!("bases {} and {} share a factor", bases[i], bases[j])));
            }
        }
    }
    Ok(())
}

/// Moduli `P_i` and orders `τ_i`.
pub fn halton_taus(bases: &[u32], u: u32) -> Result<(Vec<u128>, Vec<u64>)> {
    check_bases(bases)?;
    if u < 2 {
        return Err(Error::InvalidArgument(format!("u = {u} must be at least 2")));
    }
    let sq = |j: usize| (bases[j] as u128).pow(2);
    let b1u = checked_pow(bases[0] as u128, u as u64)?;
    let mut p = Vec::with_capacity(bases.len());
    let mut tau = Vec::with_capacity(bases.len());
    for i in 0..bases.len() {
        let mut pi = if i == 0 { 1u128 } else { b1u };
        for j in 1..bases.len() {
            if j != i {
                pi = pi.checked_mul(sq(j)).ok_or_else(|| Error::Overflow(format!("P_{}", i + 1)))?;
            }
        }
        let unit = if i == 0 { b1u } else { sq(i) };
        let order = mul_order(unit % pi, pi)?;
        p.push(pi);
        tau.push(u64::try_from(order).map_err(|_| Error::Overflow("tau".into()))?);
    }
    Ok((p, tau))
}

/// `(b_1^{u-1} + 1) / (b_1^{u-1} − 1)`, whose `d/(d−1)` power is f(u).
fn f_base(b1: u32, u: u32) -> BigRational {
    let t = BigInt::from(b1).pow(u - 1);
    BigRational::new(&t + 1, t - 1)
}

fn rat(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact check of `ξ_j ≤ b_j^{2τ_jk_j+1} / b_1^{uτ_1k_1+1} ≤ ξ_j f(u)` for the
/// given case, with both sides raised to the power `d − 1`.
pub fn ratio_bounds_hold(bases: &[u32], u: u32, tau: &[u64], kvec: &[u64], j: usize, delta: u8) -> bool {
    let d = bases.len();
    let e1 = u as u64 * tau[0] * kvec[0] + 1;
    let ej = 2 * tau[j] * kvec[j] + 1;
    let x = BigRational::new(BigInt::from(bases[j]).pow(ej), BigInt::from(bases[0]).pow(e1));
    let ratio = rat(bases[j] as u128, bases[0] as u128);
    let rd = f_base(bases[0], u).pow(d as i32);
    let pw = (d - 1) as i32;
    match delta {
        // ξ = (b_j/b_1) / f: need (b_j/b_1)^{d-1} ≤ X^{d-1} R^d and X ≤ b_j/b_1
        0 => ratio.clone().pow(pw) <= x.clone().pow(pw) * rd && x <= ratio,
        // ξ = b_j/b_1: need ξ ≤ X and (X/ξ)^{d-1} ≤ R^d
        1 => ratio <= x && (x / ratio).pow(pw) <= rd,
        _ => false,
    }
}

/// Largest integer `k` with `β_j^k ≤ β_1^{k_1}`, i.e. `⌊k_1 log_{β_j} β_1⌋`.
pub(crate) fn floor_log_multiple(beta1: &BigInt, k1: u64, beta_j: &BigInt) -> u64 {
    let target = Pow::pow(beta1, k1);
    let mut k = 0u64;
    let mut acc = BigInt::one();
    loop {
        let next = &acc * beta_j;
        if next > target {
            return k;
        }
        acc = next;
        k += 1;
    }
}

/// Derives the witness parameters for exponent vector `kvec`.
pub fn halton_witness_params(bases: &[u32], u: u32, kvec: &[u64]) -> Result<HaltonWitness> {
    let (p, tau) = halton_taus(bases, u)?;
    let d = bases.len();
    if kvec.len() != d {
        return Err(Error::Shape(format!("k has {} entries for {d} bases", kvec.len())));
    }
    let to_usize = |x: u64| usize::try_from(x).map_err(|_| Error::Overflow("exponent".into()));
    let mut shape = Vec::with_capacity(d);
    shape.push(to_usize(u as u64 * tau[0] * kvec[0])?);
    for j in 1..d {
        shape.push(to_usize(2 * tau[j] * kvec[j])?);
    }
    let mut big_m = 1u128;
    let mut l = 1u128;
    for (j, &s) in shape.iter().enumerate() {
        let b = bases[j] as u128;
        let of = || Error::Overflow("M or L".into());
        big_m = big_m.checked_mul(checked_pow(b, s as u64)?).ok_or_else(of)?;
        l = l.checked_mul(checked_pow(b, s as u64 + 1)?).ok_or_else(of)?;
    }
    let n = l.checked_add(big_m).ok_or_else(|| Error::Overflow("N".into()))?;

    let b1 = bases[0] as f64;
    let beta = b1.powi(1 - u as i32);
    let f_u = ((1.0 + beta) / (1.0 - beta)).powf(d as f64 / (d - 1) as f64);
    let gamma_d = 1.0 + bases.iter().map(|&b| 1.0 / b as f64).product::<f64>();
    let beta1 = BigInt::from(bases[0]).pow(u as u64 * tau[0]);
    let mut xi = Vec::with_capacity(d - 1);
    let mut delta = Vec::with_capacity(d - 1);
    let mut ratio_bounds_ok = Vec::with_capacity(d - 1);
    for j in 1..d {
        let beta_j = BigInt::from(bases[j]).pow(2 * tau[j]);
        let fl = floor_log_multiple(&beta1, kvec[0], &beta_j);
        let case = if kvec[j] == fl {
            Some(0)
        } else if kvec[j] == fl + 1 {
            Some(1)
        } else {
            None
        };
        let ratio = bases[j] as f64 / b1;
        xi.push(if case == Some(1) { ratio } else { ratio / f_u });
        ratio_bounds_ok.push(case.is_some_and(|c| ratio_bounds_hold(bases, u, &tau, kvec, j, c)));
        delta.push(case);
    }
    let xi_prod: f64 = xi.iter().product();
    let a_pow = (1.0 - beta).powi(d as i32) * xi_prod * gamma_d;
    let b_pow = (1.0 + beta).powi(2 * d as i32) / (1.0 - beta).powi(d as i32) * xi_prod * gamma_d;
    let c = 2.0 * bases.iter().map(|&b| (b as f64 - 1.0) / b as f64).product::<f64>() / gamma_d;
    let a = a_pow.powf(1.0 / d as f64);
    let b = b_pow.powf(1.0 / d as f64);
    let gap = gap_value(a, b, d);

    // 1/b_1^{A_1+1} − 1/b_1^{A_1+u} > 1/b_j^{A_j+1} + 1/b_j^{A_j+2} for all j ≥ 2
    let lower1 = rat(
        checked_pow(bases[0] as u128, u as u64 - 1)? - 1,
        checked_pow(bases[0] as u128, shape[0] as u64 + u as u64)?,
    );
    let mut separation_ok = true;
    for j in 1..d {
        let upper = rat(bases[j] as u128 + 1, checked_pow(bases[j] as u128, shape[j] as u64 + 2)?);
        separation_ok &= lower1 > upper;
    }

    Ok(HaltonWitness {
        bases: bases.to_vec(),
        u,
        p,
        tau,
        kvec: kvec.to_vec(),
        shape,
        big_m,
        l,
        n,
        f_u,
        gamma_d,
        xi,
        delta,
        ratio_bounds_ok,
        a_pow,
        b_pow,
        a,
        b,
        c,
        gap,
        gap_ok: gap > 0.0 && gap < c,
        separation_ok,
    })
}

/// `a^d / N` and `b^d / N` exactly, when every `ξ_j` is rational: always for
/// `d = 2`, otherwise only when every coordinate is in case 1.
fn exact_range_pows(wit: &HaltonWitness) -> Option<(BigRational, BigRational)> {
    let d = wit.bases.len();
    let b1 = wit.bases[0];
    let r = f_base(b1, wit.u);
    let mut xi_prod = BigRational::one();
    for (j, case) in wit.delta.iter().enumerate() {
        let ratio = rat(wit.bases[j + 1] as u128, b1 as u128);
        xi_prod *= match case {
            Some(1) => ratio,
            _ if d == 2 => ratio / r.clone().pow(2),
            _ => return None,
        };
    }
    let beta = BigRational::new(BigInt::one(), BigInt::from(b1).pow(wit.u - 1));
    let prod_b: BigInt = wit.bases.iter().map(|&b| BigInt::from(b)).product();
    let gamma_d = BigRational::new(&prod_b + 1, prod_b);
    let one = BigRational::one();
    let n = BigRational::from_integer(BigInt::from(wit.n));
    let minus = &one - &beta;
    let plus = &one + &beta;
    let a_pow = minus.clone().pow(d as i32) * &xi_prod * &gamma_d;
    let b_pow = plus.pow(2 * d as i32) / minus.pow(d as i32) * &xi_prod * &gamma_d;
    Some((a_pow / &n, b_pow / n))
}

/// `(0,…,0, 1, 0,…,0)` with `zeros` leading zeros and `tail` zeros after the 1.
fn digit_pattern_ok(value: u128, base: u32, zeros: usize, tail: usize) -> bool {
    let ds = digits(value, base);
    (0..zeros + 1 + tail).all(|i| ds.get(i).copied().unwrap_or(0) == u32::from(i == zeros))
}

/// Runs the structural checks and the pair count for a Halton witness.
pub fn halton_witness_verify(wit: &HaltonWitness, budget: u128) -> Result<WitnessReport> {
    if wit.n > budget {
        return Err(Error::BudgetExceeded { n: wit.n, budget });
    }
    let bases = &wit.bases;
    let d = bases.len();
    let (big_m, l) = (wit.big_m as usize, wit.l as usize);
    let mut checks = BTreeMap::new();
    let mut notes = Vec::new();

    let mut digits_ok = digit_pattern_ok(wit.big_m, bases[0], wit.shape[0], wit.u as usize - 1);
    for j in 1..d {
        digits_ok &= digit_pattern_ok(wit.big_m, bases[j], wit.shape[j], 1);
    }
    checks.insert("m_digit_patterns".to_string(), digits_ok);

    let last = wit.n - 1;
    let precs: Vec<usize> = bases.iter().map(|&b| crate::numtheory::digit_count(last, b).max(1)).collect();
    let points: Vec<ExactPoint> = (0..wit.n)
        .into_par_iter()
        .map(|n| halton_point_with(bases, n, &precs))
        .collect::<Result<_>>()?;

    let per_first: usize = bases.iter().map(|&b| b as usize).product();
    checks.insert(
        "first_L_fill".to_string(),
        intervals_evenly_filled(&points[..l], &wit.shape, per_first)?,
    );
    checks.insert(
        "next_M_fill".to_string(),
        intervals_evenly_filled(&points[l..], &wit.shape, 1)?,
    );
    let shift_ok = (0..l).into_par_iter().all(|n| {
        points[n].interval_index(&wit.shape).ok() == points[n + big_m].interval_index(&wit.shape).ok()
    });
    checks.insert("shift_preserves_interval".to_string(), shift_ok);

    // windows for coordinate 1 and for each j ≥ 2
    let u = wit.u as u64;
    let den1 = checked_pow(bases[0] as u128, wit.shape[0] as u64 + u)?;
    let t = checked_pow(bases[0] as u128, u - 1)?;
    let win1 = (Ratio::new(t - 1, den1)?, Ratio::new(t + 1, den1)?);
    let mut wins = vec![win1];
    for j in 1..d {
        let den = checked_pow(bases[j] as u128, wit.shape[j] as u64 + 2)?;
        let b = bases[j] as u128;
        wins.push((Ratio::new(b - 1, den)?, Ratio::new(b + 1, den)?));
    }

    let lo = wit.a * (wit.n as f64).powf(-1.0 / d as f64);
    let hi = wit.b * (wit.n as f64).powf(-1.0 / d as f64);
    let range = DistanceRange { d, lo, hi, exact_pows: exact_range_pows(wit) };

    // (qualifies, windows hold, coordinate 1 dominates, sup distance in (lo, hi])
    let rows: Vec<(bool, bool, bool, bool)> = (0..l)
        .into_par_iter()
        .map(|n| {
            let qualifies = (0..d).all(|j| {
                let ds = digits(n as u128, bases[j]);
                ds.get(wit.shape[j]).copied().unwrap_or(0) != bases[j] - 1
            });
            if !qualifies {
                return Ok((false, true, true, false));
            }
            let (x, y) = (&points[n], &points[n + big_m]);
            let mut in_windows = true;
            let mut axis = Vec::with_capacity(d);
            for j in 0..d {
                let dj = torus_dist_exact(
                    &ExactPoint::new(vec![x.coord(j).clone()]),
                    &ExactPoint::new(vec![y.coord(j).clone()]),
                )?;
                in_windows &= dj > wins[j].0 && dj < wins[j].1;
                axis.push(dj);
            }
            let sup = axis.iter().copied().max().unwrap_or(Ratio::zero());
            Ok((true, in_windows, sup == axis[0], range.contains(sup)))
        })
        .collect::<Result<_>>()?;
    let qualifying = rows.iter().filter(|r| r.0).count() as u128;
    let expected = bases.iter().try_fold(wit.l, |acc, &b| {
        let b = b as u128;
        if acc % b == 0 {
            Some(acc / b * (b - 1))
        } else {
            None
        }
    });
    checks.insert("qualifying_count_exact".to_string(), expected == Some(qualifying));
    checks.insert("distance_windows".to_string(), rows.iter().all(|r| r.1));
    if wit.separation_ok {
        checks.insert("coordinate_1_dominates".to_string(), rows.iter().all(|r| r.2));
    } else {
        notes.push("separation inequality fails at this (u, k); coordinate-1 dominance not checked".into());
    }
    let in_range = rows.iter().filter(|r| r.3).count();
    notes.push(format!("{in_range} of {qualifying} qualifying pairs have sup distance in (lo, hi]"));
    if !wit.gap_ok {
        notes.push(format!(
            "gap condition fails: (2b)^d - (2a)^d = {} >= c = {}; the full verdict needs larger u",
            wit.gap, wit.c
        ));
    }
    for (j, ok) in wit.ratio_bounds_ok.iter().enumerate() {
        if !ok {
            notes.push(format!("ratio estimate for coordinate {} does not hold for this k", j + 2));
        }
    }

    let cloud = ExactCloud::new(&points)?;
    let (measured, exact) = range.count(&cloud)?;
    checks.insert("range_count_exact".to_string(), exact);
    WitnessReport::assemble(wit.n, (wit.a, wit.b, wit.c), d, measured, qualifying as u64, checks, notes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_2_3_u2() {
        let w = halton_witness_params(&[2, 3], 2, &[1, 1]).unwrap();
        assert_eq!(w.p, vec![9, 4]);
        assert_eq!(w.tau, vec![3, 1]);
        assert_eq!((w.big_m, w.l, w.n), (576, 3456, 4032));
        assert_eq!(w.shape, vec![6, 2]);
        assert!((w.gamma_d - 7.0 / 6.0).abs() < 1e-15);
        assert!((w.f_u - 9.0).abs() < 1e-12);
        assert!((w.c - 4.0 / 7.0).abs() < 1e-15);
        assert_eq!(w.delta, vec![Some(0)]);
        assert!((w.xi[0] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(w.ratio_bounds_ok, vec![true]);
        assert!((w.a_pow - 7.0 / 144.0).abs() < 1e-15);
        assert!((w.b_pow - 567.0 / 144.0).abs() < 1e-12);
        assert!(!w.gap_ok);
        assert!(!w.separation_ok);
        // L + M = L·γ^d, checked as (L + M)·b_1·b_2 = L·(b_1·b_2 + 1)
        assert_eq!(w.n * 6, w.l * 7);
    }

    #[test]
    fn params_more() {
        let w = halton_witness_params(&[2, 3], 4, &[1, 1]).unwrap();
        assert_eq!(w.tau, vec![3, 2]);
        let w = halton_witness_params(&[2, 3], 2, &[0, 0]).unwrap();
        assert_eq!((w.big_m, w.l, w.n), (1, 6, 7));
        assert!(halton_witness_params(&[3, 2], 2, &[1, 1]).is_err());
        assert!(halton_witness_params(&[2, 4], 2, &[1, 1]).is_err());
        assert!(halton_witness_params(&[2, 3], 1, &[1, 1]).is_err());
    }

    #[test]
    fn congruences_hold() {
        for u in 2..6u32 {
            let (p, tau) = halton_taus(&[2, 3, 5], u).unwrap();
            let bases = [2u128, 3, 5];
            assert_eq!(crate::numtheory::pow_mod(bases[0], u as u128 * tau[0] as u128, p[0]), 1);
            for i in 1..3 {
                assert_eq!(crate::numtheory::pow_mod(bases[i], 2 * tau[i] as u128, p[i]), 1);
            }
        }
    }

    #[test]
    fn verify_2_3_u2() {
        let w = halton_witness_params(&[2, 3], 2, &[1, 1]).unwrap();
        let rep = halton_witness_verify(&w, DEFAULT_HALTON_BUDGET).unwrap();
        assert!(rep.structural_ok, "{:?}", rep.structural_checks);
        assert_eq!(rep.qualifying_n, 1152);
        assert!(!rep.gap_ok && !rep.verdict);
        assert!(!rep.structural_checks.contains_key("coordinate_1_dominates"));
        let (lo, hi) = exact_range_pows(&w).unwrap();
        assert_eq!(lo, BigRational::new(1.into(), 288u32.pow(2).into()));
        assert_eq!(hi, BigRational::new(1.into(), 1024.into()));
    }

    #[test]
    fn pair_zero_distances() {
        let x0 = halton_point_with(&[2, 3], 0, &[12, 8]).unwrap();
        let x576 = halton_point_with(&[2, 3], 576, &[12, 8]).unwrap();
        let d1 = torus_dist_exact(&ExactPoint::new(vec![x0.coord(0).clone()]), &ExactPoint::new(vec![x576.coord(0).clone()])).unwrap();
        let d2 = torus_dist_exact(&ExactPoint::new(vec![x0.coord(1).clone()]), &ExactPoint::new(vec![x576.coord(1).clone()])).unwrap();
        assert_eq!(d1, Ratio { num: 9, den: 1024 });
        assert_eq!(d2, Ratio { num: 32, den: 729 });
        assert!(d1 > Ratio { num: 1, den: 256 } && d1 < Ratio { num: 3, den: 256 });
    }

    #[test]
    fn budget() {
        let w = halton_witness_params(&[2, 3], 2, &[1, 1]).unwrap();
        assert!(matches!(halton_witness_verify(&w, 1000), Err(Error::BudgetExceeded { .. })));
    }
}
