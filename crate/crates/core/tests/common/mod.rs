//! Independent reference implementations shared by the integration tests.
//! Everything here works on plain digit vectors over a prime field and never
//! calls into the library's polynomial or matrix code.

#![allow(dead_code)]

use std::collections::HashSet;

use qmc_ppc::genmat::GenMatrix;
use qmc_ppc::sequences::ExactPoint;

/// Polynomial as coefficients, lowest degree first, over F_p.
pub type P = Vec<u32>;

pub fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn add(a: &[u32], b: &[u32], p: u32) -> P {
    let n = a.len().max(b.len());
    let out = (0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p).collect();
    trim(out)
}

pub fn mul(a: &[u32], b: &[u32], p: u32) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub fn pow(a: &[u32], e: usize, p: u32) -> P {
    (0..e).fold(vec![1], |acc, _| mul(&acc, a, p))
}

/// Quotient of schoolbook division by a monic divisor.
pub fn quotient(dividend: &[u32], divisor: &[u32], p: u32) -> P {
    let dd = divisor.len() - 1;
    assert_eq!(divisor[dd], 1, "monic divisor");
    let mut rem = dividend.to_vec();
    if rem.len() <= dd {
        return Vec::new();
    }
    let mut q = vec![0u32; rem.len() - dd];
    for top in (dd..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        q[top - dd] = c;
        for (i, &dc) in divisor.iter().enumerate() {
            let idx = top - dd + i;
            rem[idx] = (rem[idx] + p - (c * dc) % p) % p;
        }
    }
    q
}

/// Coefficients of x^{-1}, …, x^{-count} in x^r / g^s, read off the
/// polynomial quotient of x^{r+count} by g^s.
pub fn laurent_by_long_division(g: &[u32], s: usize, r: usize, count: usize, p: u32) -> Vec<u32> {
    let gs = pow(g, s, p);
    let mut num = vec![0u32; r + count + 1];
    num[r + count] = 1;
    let q = quotient(&num, &gs, p);
    (0..count).map(|k| q.get(count - 1 - k).copied().unwrap_or(0)).collect()
}

/// Evaluates Σ b_s g^s.
pub fn eval_base_digits(digits: &[P], g: &[u32], p: u32) -> P {
    let mut acc = Vec::new();
    let mut power = vec![1];
    for b in digits {
        acc = add(&acc, &mul(b, &power, p), p);
        power = mul(&power, g, p);
    }
    acc
}

/// The (t, e, d) property over F_2 by enumerating every nonzero combination
/// of the selected rows. Returns the first failing `(m, r)` in the same order
/// as the library's search.
pub fn tse_brute_force_f2(mats: &[GenMatrix], e: &[usize], t: usize, m_max: usize) -> Option<(usize, Vec<usize>)> {
    for weight in 0..=m_max.saturating_sub(t) {
        for r in shapes(e, weight) {
            let cols = t + weight;
            let mut rows: Vec<u64> = Vec::new();
            for (j, m) in mats.iter().enumerate() {
                for i in 0..e[j] * r[j] {
                    let bits = (0..cols).fold(0u64, |acc, c| acc | ((m.get(i, c).digit() as u64) << c));
                    rows.push(bits);
                }
            }
            let dependent = (1u64..1 << rows.len()).any(|mask| {
                rows.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(0u64, |a, (_, &b)| a ^ b) == 0
            });
            if dependent {
                return Some((t + weight, r));
            }
        }
    }
    None
}

fn shapes(e: &[usize], weight: usize) -> Vec<Vec<usize>> {
    if e.is_empty() {
        return if weight == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for r0 in 0..=weight / e[0] {
        for mut rest in shapes(&e[1..], weight - r0 * e[0]) {
            rest.insert(0, r0);
            out.push(rest);
        }
    }
    out
}

/// Whether every elementary interval with `v_j` leading digits per coordinate
/// holds exactly one of `points`, read straight off the digit vectors.
pub fn one_point_per_interval(points: &[ExactPoint], v: &[usize]) -> bool {
    let cells: u32 = v.iter().sum::<usize>() as u32;
    let base = points[0].coord(0).base() as u128;
    if points.len() as u128 != base.pow(cells) {
        return false;
    }
    let mut seen = HashSet::new();
    points.iter().all(|pt| {
        let key: Vec<Vec<u32>> = v
            .iter()
            .enumerate()
            .map(|(j, &vj)| {
                let digits = pt.coord(j).digits();
                (0..vj).map(|i| digits.get(i).copied().unwrap_or(0)).collect()
            })
            .collect();
        seen.insert(key)
    })
}

/// Ordered pairs within torus sup-distance `r`, by direct double loop.
pub fn naive_pairs_leq(coords: &[f64], dim: usize, r: f64) -> u64 {
    let n = coords.len() / dim;
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = (0..dim)
                .map(|k| {
                    let t = (coords[i * dim + k] - coords[j * dim + k]).abs();
                    t.min(1.0 - t)
                })
                .fold(0.0, f64::max);
            if d <= r {
                count += 1;
            }
        }
    }
    count
}
