//! Pair correlations on the torus under the sup-norm.
//!
//! Counts are over ordered pairs `(n, l)`, `n ≠ l`, so every unordered pair
//! contributes twice. A pair is within radius `r` when its torus distance is
//! `≤ r`; range counts use the half-open interval `(lo, hi]`.
//!
//! The grid counter buckets points into `G^d` cells of side `1/G ≥ r` and
//! scans the (wrapped) 3^d neighbourhood of each point's cell. It applies
//! exactly the same pair predicate as the naive O(N²) counter, so both
//! return identical counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{mul_div_floor, Ratio, U256};
use crate::sequences::{ExactPoint, SeqSource};

/// Counting strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountMode {
    #[default]
    Grid,
    Naive,
}

/// A point set on the torus [0,1)^d together with its number type.
pub trait TorusCloud: Sync {
    type Radius: Copy + Send + Sync + PartialOrd;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn dim(&self) -> usize;

    /// Largest `G ≥ 1` with `1/G ≥ r` (saturating for `r = 0`).
    fn cells_for(&self, r: Self::Radius) -> usize;

    /// Cell of point `i` along `axis` in a grid with `g` cells per axis.
    fn cell(&self, i: usize, axis: usize, g: usize) -> usize;

    /// Whether the torus sup-norm distance of points `i` and `j` is `≤ r`.
    fn within(&self, i: usize, j: usize, r: Self::Radius) -> bool;

    /// The radius `s · N^{-1/d}` for this cloud's size.
    fn radius_at(&self, s: f64) -> Result<Self::Radius>;
}

/// Points as doubles, row-major.
#[derive(Clone, Debug)]
pub struct FloatCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl FloatCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::Shape(format!("{} values for dimension {dim}", coords.len())));
        }
        if let Some(x) = coords.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!("coordinate {x} outside [0, 1)")));
        }
        Ok(FloatCloud { dim, coords })
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> Result<FloatCloud> {
        if n > self.len() {
            return Err(Error::OutOfRange { index: n, limit: self.len() });
        }
        Ok(FloatCloud { dim: self.dim, coords: self.coords[..n * self.dim].to_vec() })
    }
}

/// `‖x − y‖_∞` on the torus in double precision.
pub fn torus_dist(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("dimensions {} and {}", x.len(), y.len())));
    }
    Ok(x.iter().zip(y).map(|(a, b)| axis_dist(*a, *b)).fold(0.0, f64::max))
}

#[inline]
fn axis_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Exact `‖x − y‖_∞` on the torus. Points must agree on the base of each
/// coordinate; precisions may differ.
pub fn torus_dist_exact(x: &ExactPoint, y: &ExactPoint) -> Result<Ratio> {
    if x.dim() != y.dim() {
        return Err(Error::Shape(format!("dimensions {} and {}", x.dim(), y.dim())));
    }
    let mut best = Ratio::zero();
    for (a, b) in x.coords().iter().zip(y.coords()) {
        if a.base() != b.base() {
            return Err(Error::InvalidArgument(format!("bases {} and {} on one axis", a.base(), b.base())));
        }
        let prec = a.precision().max(b.precision());
        let (a, b) = (a.padded(prec)?, b.padded(prec)?);
        let den = a.denominator()?;
        let delta = a.numerator()?.abs_diff(b.numerator()?);
        let d = Ratio::new(delta.min(den - delta), den)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

impl TorusCloud for FloatCloud {
    type Radius = f64;

    fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn cells_for(&self, r: f64) -> usize {
        if r <= 0.0 {
            return usize::MAX;
        }
        // a relative margin keeps rounding in x·G from separating true neighbours
        let g = (1.0 / (r * (1.0 + 1e-9))).floor();
        if g >= usize::MAX as f64 {
            usize::MAX
        } else {
            (g as usize).max(1)
        }
    }

    #[inline]
    fn cell(&self, i: usize, axis: usize, g: usize) -> usize {
        ((self.coords[i * self.dim + axis] * g as f64) as usize).min(g - 1)
    }

    #[inline]
    fn within(&self, i: usize, j: usize, r: f64) -> bool {
        let (a, b) = (self.point(i), self.point(j));
        a.iter().zip(b).all(|(x, y)| axis_dist(*x, *y) <= r)
    }

    fn radius_at(&self, s: f64) -> Result<f64> {
        Ok(s * (self.len() as f64).powf(-1.0 / self.dim as f64))
    }
}

/// Exact points packed as integer numerators over a per-axis denominator
/// `base^precision`.
#[derive(Clone, Debug)]
pub struct ExactCloud {
    dim: usize,
    dens: Vec<u128>,
    nums: Vec<u128>,
}

impl ExactCloud {
    pub fn new(points: &[ExactPoint]) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
        let dim = first.dim();
        let mut dens = Vec::with_capacity(dim);
        let mut precs = Vec::with_capacity(dim);
        for axis in 0..dim {
            let base = first.coord(axis).base();
            let mut prec = 0;
            for p in points {
                if p.dim() != dim {
                    return Err(Error::Shape("points of mixed dimension".into()));
                }
                if p.coord(axis).base() != base {
                    return Err(Error::InvalidArgument(format!("mixed bases on axis {axis}")));
                }
                prec = prec.max(p.coord(axis).precision());
            }
            dens.push(crate::numtheory::checked_pow(base as u128, prec as u64)?);
            precs.push(prec);
        }
        let mut nums = Vec::with_capacity(points.len() * dim);
        for p in points {
            for (axis, c) in p.coords().iter().enumerate() {
                nums.push(c.padded(precs[axis])?.numerator()?);
            }
        }
        Ok(ExactCloud { dim, dens, nums })
    }

    /// Exact torus sup-norm distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> Ratio {
        (0..self.dim)
            .map(|axis| {
                let den = self.dens[axis];
                let delta = self.nums[i * self.dim + axis].abs_diff(self.nums[j * self.dim + axis]);
                Ratio { num: delta.min(den - delta), den }
            })
            .max()
            .unwrap_or(Ratio::zero())
    }

    /// Per-axis denominators `base^precision`.
    pub fn denominators(&self) -> &[u128] {
        &self.dens
    }

    pub fn to_float(&self) -> FloatCloud {
        let coords = self
            .nums
            .iter()
            .enumerate()
            .map(|(k, &n)| n as f64 / self.dens[k % self.dim] as f64)
            .collect();
        FloatCloud { dim: self.dim, coords }
    }
}

impl TorusCloud for ExactCloud {
    type Radius = Ratio;

    fn len(&self) -> usize {
        self.nums.len() / self.dim
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn cells_for(&self, r: Ratio) -> usize {
        if r.num == 0 {
            return usize::MAX;
        }
        usize::try_from(r.den / r.num).unwrap_or(usize::MAX).max(1)
    }

    #[inline]
    fn cell(&self, i: usize, axis: usize, g: usize) -> usize {
        mul_div_floor(self.nums[i * self.dim + axis], g as u128, self.dens[axis]) as usize
    }

    #[inline]
    fn within(&self, i: usize, j: usize, r: Ratio) -> bool {
        (0..self.dim).all(|axis| {
            let den = self.dens[axis];
            let delta = self.nums[i * self.dim + axis].abs_diff(self.nums[j * self.dim + axis]);
            let d = delta.min(den - delta);
            U256::mul(d, r.den) <= U256::mul(r.num, den)
        })
    }

    /// Exact only when N is a perfect d-th power; otherwise the radius is
    /// irrational and an error is returned.
    fn radius_at(&self, s: f64) -> Result<Ratio> {
        let n = self.len() as u128;
        let root = int_root_ceil(n, self.dim);
        if root.checked_pow(self.dim as u32) != Some(n) {
            return Err(Error::InvalidArgument(format!(
                "N = {n} is not a perfect power of {}; radius is irrational",
                self.dim
            )));
        }
        let s = Ratio::from_f64(s).ok_or_else(|| Error::InvalidArgument(format!("s = {s} is not exact")))?;
        s.div_int(root)
    }
}

/// Smallest `g ≥ 1` with `g^d ≥ n`.
fn int_root_ceil(n: u128, d: usize) -> u128 {
    if n <= 1 {
        return 1;
    }
    let mut g = (n as f64).powf(1.0 / d as f64).round().max(1.0) as u128;
    let reaches = |g: u128| g.checked_pow(d as u32).is_none_or(|v| v >= n);
    while g > 1 && reaches(g - 1) {
        g -= 1;
    }
    while !reaches(g) {
        g += 1;
    }
    g
}

/// Ordered pairs `(n, l)`, `n ≠ l`, with torus distance `≤ r`.
///
/// With `r ≥ 1/2` every pair qualifies and the count is `N(N−1)`.
pub fn count_pairs_leq<C: TorusCloud>(cloud: &C, r: C::Radius, mode: CountMode) -> u64 {
    match mode {
        CountMode::Naive => count_naive(cloud, r),
        CountMode::Grid => count_grid(cloud, r),
    }
}

/// Ordered pairs with torus distance in `(lo, hi]`.
pub fn count_pairs_in<C: TorusCloud>(cloud: &C, lo: C::Radius, hi: C::Radius, mode: CountMode) -> Result<u64> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument("empty range: need lo < hi".into()));
    }
    Ok(count_pairs_leq(cloud, hi, mode) - count_pairs_leq(cloud, lo, mode))
}

fn count_naive<C: TorusCloud>(cloud: &C, r: C::Radius) -> u64 {
    let n = cloud.len();
    (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && cloud.within(i, j, r)).count() as u64)
        .sum()
}

/// Points bucketed into `g^d` cells, `g` chosen so that any pair within the
/// radius lies in neighbouring (wrapped) cells.
struct GridIndex {
    g: usize,
    start: Vec<usize>,
    order: Vec<usize>,
    offsets: Vec<usize>,
}

impl GridIndex {
    fn build<C: TorusCloud>(cloud: &C, r: C::Radius) -> GridIndex {
        let n = cloud.len();
        let d = cloud.dim();
        let cap = usize::try_from(int_root_ceil(n as u128, d)).unwrap_or(usize::MAX);
        let g = cloud.cells_for(r).min(cap).max(1);
        let total = g.pow(d as u32);

        let cell_id = |i: usize| (0..d).rev().fold(0usize, |acc, axis| acc * g + cloud.cell(i, axis, g));
        let ids: Vec<usize> = (0..n).into_par_iter().map(cell_id).collect();
        let mut start = vec![0usize; total + 1];
        for &id in &ids {
            start[id + 1] += 1;
        }
        for c in 0..total {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut order = vec![0usize; n];
        for (i, &id) in ids.iter().enumerate() {
            order[fill[id]] = i;
            fill[id] += 1;
        }

        // distinct wrapped neighbour offsets per axis: {-1, 0, 1} mod g
        let mut offsets = vec![0usize, 1 % g, (g - 1) % g];
        offsets.sort_unstable();
        offsets.dedup();
        GridIndex { g, start, order, offsets }
    }

    /// Calls `f(j)` for every point `j ≠ i` in the cells around point `i`.
    fn for_each_candidate<C: TorusCloud>(&self, cloud: &C, i: usize, mut f: impl FnMut(usize)) {
        let d = cloud.dim();
        let g = self.g;
        let home: Vec<usize> = (0..d).map(|axis| cloud.cell(i, axis, g)).collect();
        let mut idx = vec![0usize; d];
        loop {
            let cell = (0..d)
                .rev()
                .fold(0usize, |acc, axis| acc * g + (home[axis] + self.offsets[idx[axis]]) % g);
            for &j in &self.order[self.start[cell]..self.start[cell + 1]] {
                if j != i {
                    f(j);
                }
            }
            // odometer over offset indices
            let mut axis = 0;
            while axis < d {
                idx[axis] += 1;
                if idx[axis] < self.offsets.len() {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
            if axis == d {
                break;
            }
        }
    }
}

fn count_grid<C: TorusCloud>(cloud: &C, r: C::Radius) -> u64 {
    if cloud.len() < 2 {
        return 0;
    }
    let grid = GridIndex::build(cloud, r);
    (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            grid.for_each_candidate(cloud, i, |j| {
                if cloud.within(i, j, r) {
                    count += 1;
                }
            });
            count
        })
        .sum()
}

/// The ordered pairs with torus distance in `(lo, hi]`, sorted.
pub fn pairs_in<C: TorusCloud>(cloud: &C, lo: C::Radius, hi: C::Radius) -> Result<Vec<(usize, usize)>> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument("empty range: need lo < hi".into()));
    }
    if cloud.len() < 2 {
        return Ok(Vec::new());
    }
    let grid = GridIndex::build(cloud, hi);
    let mut pairs: Vec<(usize, usize)> = (0..cloud.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut found = Vec::new();
            grid.for_each_candidate(cloud, i, |j| {
                if cloud.within(i, j, hi) && !cloud.within(i, j, lo) {
                    found.push((i, j));
                }
            });
            found
        })
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PpcEntry {
    pub s: f64,
    pub count: u64,
    /// count / N.
    pub f: f64,
    /// (2s)^d.
    pub target: f64,
}

/// F_N(s) evaluated on a grid of s values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PpcCurve {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<PpcEntry>,
}

fn check_s_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::InvalidArgument("s values must be finite and nonnegative".into()));
    }
    if s_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("s grid must be sorted".into()));
    }
    Ok(())
}

/// For each s: count pairs within `s · N^{-1/d}`, `F = count / N`, target `(2s)^d`.
pub fn ppc_curve<C: TorusCloud>(cloud: &C, s_grid: &[f64], mode: CountMode) -> Result<PpcCurve> {
    check_s_grid(s_grid)?;
    let n = cloud.len();
    let d = cloud.dim();
    let entries = s_grid
        .iter()
        .map(|&s| {
            let count = count_pairs_leq(cloud, cloud.radius_at(s)?, mode);
            Ok(PpcEntry { s, count, f: count as f64 / n as f64, target: (2.0 * s).powi(d as i32) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PpcCurve { n, d, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub s: f64,
    pub count: u64,
    pub f: f64,
    pub target: f64,
    pub abs_err: f64,
}

/// One F_N curve per prefix length in `n_list`, computed on double views of
/// the points.
pub fn ppc_convergence(source: &SeqSource, n_list: &[usize], s_grid: &[f64], mode: CountMode) -> Result<Vec<ConvergenceRow>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("N list must be strictly increasing".into()));
    }
    let Some(&max_n) = n_list.last() else {
        return Ok(Vec::new());
    };
    let all = FloatCloud::new(source.dim(), source.float_points(max_n)?)?;
    let mut rows = Vec::new();
    for &n in n_list {
        let curve = ppc_curve(&all.prefix(n)?, s_grid, mode)?;
        rows.extend(curve.entries.into_iter().map(|e| ConvergenceRow {
            n,
            s: e.s,
            count: e.count,
            f: e.f,
            target: e.target,
            abs_err: (e.f - e.target).abs(),
        }));
    }
    Ok(rows)
}
