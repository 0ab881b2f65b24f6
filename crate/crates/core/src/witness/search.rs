//! Searches for exponent vectors and near-integer multiples.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use super::halton::{ratio_bounds_hold, floor_log_multiple, halton_taus};
use crate::error::{Error, Result};

/// Width of the band around each interval end inside which a floating
/// fractional part is treated as a candidate and decided exactly.
pub const GUARD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KCandidate {
    pub k1: u64,
    pub kvec: Vec<u64>,
    /// Case per coordinate `j ≥ 2`.
    pub delta: Vec<u8>,
    /// Fractional parts `{k_1 log_{β_j} β_1}`.
    pub frac: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSearch {
    pub bases: Vec<u32>,
    pub u: u32,
    pub tau: Vec<u64>,
    /// `log_{β_j} β_1` for `j ≥ 2`.
    pub alpha: Vec<f64>,
    /// `log_{β_j} f(u)` for `j ≥ 2`.
    pub log_f: Vec<f64>,
    pub candidates: Vec<KCandidate>,
    pub notes: Vec<String>,
}

/// Scans `k_1 = 0..=k1_max` for exponent vectors satisfying the two-sided
/// ratio estimate in every coordinate simultaneously. Fractional parts are
/// screened in double precision and every survivor is confirmed exactly.
pub fn halton_k_search(bases: &[u32], u: u32, k1_max: u64) -> Result<KSearch> {
    let (_, tau) = halton_taus(bases, u)?;
    let d = bases.len();
    let b1 = bases[0] as f64;
    let beta1_log = (u as f64) * tau[0] as f64 * b1.ln();
    let t = b1.powi(1 - u as i32);
    let f_log = (d as f64 / (d - 1) as f64) * ((1.0 + t) / (1.0 - t)).ln();
    let beta_logs: Vec<f64> = (1..d).map(|j| 2.0 * tau[j] as f64 * (bases[j] as f64).ln()).collect();
    let alpha: Vec<f64> = beta_logs.iter().map(|l| beta1_log / l).collect();
    let log_f: Vec<f64> = beta_logs.iter().map(|l| f_log / l).collect();

    let beta1 = BigInt::from(bases[0]).pow(u as u64 * tau[0]);
    let betas: Vec<BigInt> = (1..d).map(|j| BigInt::from(bases[j]).pow(2 * tau[j])).collect();

    let mut notes = Vec::new();
    if log_f.iter().any(|&lf| lf >= 1.0) {
        notes.push("log_{β_j} f(u) >= 1: the case intervals cover [0, 1), so every k_1 qualifies".into());
    }
    let mut candidates = Vec::new();
    'k1: for k1 in 0..=k1_max {
        let mut kvec = vec![k1];
        let mut delta = Vec::with_capacity(d - 1);
        let mut frac = Vec::with_capacity(d - 1);
        for j in 1..d {
            let x = k1 as f64 * alpha[j - 1];
            let fr = x - x.floor();
            frac.push(fr);
            let lf = log_f[j - 1];
            let mut cases = Vec::new();
            if fr <= lf + GUARD || fr >= 1.0 - GUARD {
                cases.push(0u8);
            }
            if fr >= 1.0 - lf - GUARD || fr <= GUARD {
                cases.push(1u8);
            }
            if cases.is_empty() {
                continue 'k1;
            }
            let fl = floor_log_multiple(&beta1, k1, &betas[j - 1]);
            let mut probe = vec![k1; d];
            let chosen = cases.into_iter().find(|&c| {
                probe[j] = fl + c as u64;
                ratio_bounds_hold(bases, u, &tau, &probe, j, c)
            });
            match chosen {
                Some(c) => {
                    kvec.push(fl + c as u64);
                    delta.push(c);
                }
                None => continue 'k1,
            }
        }
        candidates.push(KCandidate { k1, kvec, delta, frac });
    }
    Ok(KSearch { bases: bases.to_vec(), u, tau, alpha, log_f, candidates, notes })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearInteger {
    pub n: u64,
    pub frac: Vec<f64>,
}

/// All `1 ≤ n ≤ n_max` with every `{n α_j}` in `(0, eps] ∪ [1 − eps, 1)`.
/// Values within [`GUARD`] of 0 or 1 are rejected as indistinguishable from
/// an exact integer.
pub fn near_integer_search(alphas: &[f64], eps: f64, n_max: u64) -> Result<Vec<NearInteger>> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, 1/2)")));
    }
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidArgument("alphas must be finite".into()));
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let frac: Vec<f64> = alphas.iter().map(|&a| (n as f64 * a).rem_euclid(1.0)).collect();
        let near = frac.iter().all(|&f| (f > GUARD && f <= eps) || (f >= 1.0 - eps && f < 1.0 - GUARD));
        if near {
            out.push(NearInteger { n, frac });
        }
    }
    Ok(out)
}
