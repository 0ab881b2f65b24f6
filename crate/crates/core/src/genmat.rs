//! Generating matrices of digital sequences.
//!
//! Only finite upper-left slices of the conceptually infinite matrices are
//! ever materialised. Rows are indexed from 0 here, so "row i" of the usual
//! 1-based description is `row(i - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::numtheory;
use crate::poly::Poly;

/// Upper-left `rows × cols` slice of a generating matrix over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl GenMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        GenMatrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    /// Matrix from φ-digits, row-major.
    pub fn from_digits(field: &FieldSpec, rows: usize, cols: usize, digits: &[u32]) -> Result<Self> {
        if digits.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", digits.len())));
        }
        let entries = digits
            .iter()
            .map(|&d| field.elem(d as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(GenMatrix { field: field.clone(), rows, cols, entries })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn digits(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.digit()).collect()
    }

    /// The leading `rows × cols` sub-slice.
    pub fn slice(&self, rows: usize, cols: usize) -> Result<GenMatrix> {
        if rows > self.rows || cols > self.cols {
            return Err(Error::Shape(format!(
                "cannot take {rows}x{cols} from a {}x{} slice",
                self.rows, self.cols
            )));
        }
        let mut out = GenMatrix::zeros(&self.field, rows, cols);
        for r in 0..rows {
            out.entries[r * cols..(r + 1) * cols].copy_from_slice(&self.row(r)[..cols]);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &GenMatrix) -> Result<GenMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = GenMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] = f.add(out.entries[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product over F_q; `v` may be shorter than `cols`
    /// (missing entries are zero).
    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() > self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// Non-singular upper triangular: zeros below, nonzero diagonal.
    pub fn is_nut(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("NUT check on a {}x{} slice", self.rows, self.cols)));
        }
        for r in 0..self.rows {
            if self.get(r, r).is_zero() || (0..r).any(|c| !self.get(r, c).is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rank over F_q by Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_of(&self.field, self.rows, self.cols, self.entries.clone())
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            q: self.field.q(),
            rows: self.rows,
            cols: self.cols,
            entries: self.digits(),
        }
    }
}

/// JSON form of a matrix: entries are φ-digits, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

impl MatrixRecord {
    pub fn into_matrix(self, field: &FieldSpec) -> Result<GenMatrix> {
        if self.q != field.q() {
            return Err(Error::FieldMismatch);
        }
        GenMatrix::from_digits(field, self.rows, self.cols, &self.entries)
    }
}

fn rank_of(f: &FieldSpec, rows: usize, cols: usize, mut m: Vec<FieldElem>) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                m.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = f.inv(m[rank * cols + c]).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let factor = f.mul(m[r * cols + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = f.mul(factor, m[rank * cols + j]);
                m[r * cols + j] = f.sub(m[r * cols + j], v);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Which construction produces the generating matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Niederreiter,
    ColumnByColumn,
}

/// A sequence definition: d monic, non-constant, pairwise coprime
/// polynomials over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqDef {
    field: FieldSpec,
    polys: Vec<Poly>,
    degrees: Vec<usize>,
    method: Construction,
}

impl SeqDef {
    pub fn new(field: &FieldSpec, polys: Vec<Poly>, method: Construction) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidArgument("at least one polynomial is required".into()));
        }
        let mut degrees = Vec::with_capacity(polys.len());
        for p in &polys {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            match p.degree() {
                Some(e) if e >= 1 && p.is_monic() => degrees.push(e),
                _ => return Err(Error::BadPolynomial(format!("{p} is not monic and non-constant"))),
            }
        }
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                if !polys[i].is_coprime(&polys[j])? {
                    return Err(Error::BadPolynomial(format!("{} and {} are not coprime", polys[i], polys[j])));
                }
            }
        }
        Ok(SeqDef { field: field.clone(), polys, degrees, method })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// The degree vector e.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn method(&self) -> Construction {
        self.method
    }

    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    /// v = lcm(e_1, …, e_d).
    pub fn v(&self) -> usize {
        self.degrees
            .iter()
            .fold(1u128, |acc, &e| numtheory::lcm(acc, e as u128).expect("small degrees"))
            as usize
    }

    fn check_coord(&self, j: usize) -> Result<&Poly> {
        self.polys.get(j).ok_or(Error::OutOfRange { index: j, limit: self.polys.len() })
    }

    /// The `size × size` slice of C^(j) for the configured construction.
    pub fn matrix(&self, j: usize, size: usize) -> Result<GenMatrix> {
        match self.method {
            Construction::Niederreiter => niederreiter_matrix(self, j, size, size),
            Construction::ColumnByColumn => cbc_matrix(self, j, size),
        }
    }

    /// All d slices of size `size × size`.
    pub fn matrices(&self, size: usize) -> Result<Vec<GenMatrix>> {
        (0..self.dim()).map(|j| self.matrix(j, size)).collect()
    }
}

/// Niederreiter slice for coordinate `j` (0-based): 1-based row `i = e·s − r`
/// holds the Laurent coefficients of `x^r / q_j(x)^s`.
pub fn niederreiter_matrix(def: &SeqDef, j: usize, rows: usize, cols: usize) -> Result<GenMatrix> {
    let qj = def.check_coord(j)?;
    let e = def.degrees[j];
    let s_max = rows.div_ceil(e);
    let mut m = GenMatrix::zeros(&def.field, rows, cols);
    for r in 0..e {
        let series = qj.laurent_rows(r, s_max, cols)?;
        for (s_idx, coeffs) in series.iter().enumerate() {
            let s = s_idx + 1;
            let i = e * s - r;
            if i > rows {
                continue;
            }
            m.entries[(i - 1) * cols..i * cols].copy_from_slice(coeffs);
        }
    }
    Ok(m)
}

/// Column-by-column slice for coordinate `j` (0-based): column k holds the
/// coefficients of the base-q_j(x) digits of x^k, digit s filling rows
/// `e·s .. e·s + e` (0-based).
pub fn cbc_matrix(def: &SeqDef, j: usize, size: usize) -> Result<GenMatrix> {
    let qj = def.check_coord(j)?;
    let e = def.degrees[j];
    let mut m = GenMatrix::zeros(&def.field, size, size);
    for k in 0..size {
        for (s, b) in qj.base_expansion(k)?.iter().enumerate() {
            for t in 0..e {
                let row = e * s + t;
                if row < size {
                    m.set(row, k, b.coeff(t));
                }
            }
        }
    }
    Ok(m)
}

/// The polynomial p_k(x) = x^{r_1} Π_i q_i(x)^{(s_i + … + s_d) v / e_i}
/// from the mixed-radix split `k = d v s_d + r_d`, `r_d = (d−1) v s_{d−1} + r_{d−1}`, …,
/// `r_2 = v s_1 + r_1`.
pub fn scrambler_poly(def: &SeqDef, k: usize) -> Poly {
    let d = def.dim();
    let v = def.v();
    let mut s = vec![0usize; d];
    let mut rest = k;
    for i in (0..d).rev() {
        let radix = (i + 1) * v;
        s[i] = rest / radix;
        rest %= radix;
    }
    let mut p = Poly::monomial(&def.field, FieldElem::ONE, rest);
    let mut tail = 0usize;
    for i in (0..d).rev() {
        tail += s[i];
        let exp = tail * v / def.degrees[i];
        if exp > 0 {
            p = p.mul(&def.polys[i].pow(exp as u64));
        }
    }
    p
}

/// The scrambler S: column k carries the coefficients of the monic
/// degree-k polynomial p_k(x), constant term in row 0.
pub fn scrambler_matrix(def: &SeqDef, size: usize) -> GenMatrix {
    let mut m = GenMatrix::zeros(&def.field, size, size);
    for k in 0..size {
        let p = scrambler_poly(def, k);
        debug_assert_eq!(p.degree(), Some(k));
        for (n, &c) in p.coeffs().iter().enumerate() {
            m.set(n, k, c);
        }
    }
    m
}

/// `C^(j) · S` for every coordinate, all `size × size`.
pub fn scrambled(matrices: &[GenMatrix], scrambler: &GenMatrix) -> Result<Vec<GenMatrix>> {
    matrices.iter().map(|c| c.mul(scrambler)).collect()
}

/// First failing shape of a (t, e, d) rank check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TseCertificate {
    pub m: usize,
    pub r: Vec<usize>,
}

/// For every `m ≤ m_max` and every `(r_1, …, r_d)` with `Σ e_j r_j ≤ m − t`,
/// the first `e_j r_j` rows of each C^(j), cut to `t + Σ e_j r_j` columns,
/// must be linearly independent. Shapes are visited by increasing
/// `m = t + Σ e_j r_j`, then lexicographically; the first dependent shape is
/// returned.
pub fn tse_check(matrices: &[GenMatrix], e: &[usize], t: usize, m_max: usize) -> Result<Option<TseCertificate>> {
    if matrices.len() != e.len() || matrices.is_empty() {
        return Err(Error::Shape(format!("{} matrices for {} degrees", matrices.len(), e.len())));
    }
    if e.contains(&0) {
        return Err(Error::InvalidArgument("degrees must be positive".into()));
    }
    let field = matrices[0].field().clone();
    for m in matrices {
        if m.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if m.rows() < m_max || m.cols() < m_max {
            return Err(Error::Shape(format!(
                "slice {}x{} is smaller than m_max = {m_max}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if t > m_max {
        return Ok(None);
    }
    for weight in 0..=m_max - t {
        for r in shapes_with_weight(e, weight) {
            let cols = t + weight;
            let mut stack = Vec::with_capacity(weight * cols);
            for (j, mat) in matrices.iter().enumerate() {
                for row in 0..e[j] * r[j] {
                    stack.extend_from_slice(&mat.row(row)[..cols]);
                }
            }
            if rank_of(&field, weight, cols, stack) < weight {
                return Ok(Some(TseCertificate { m: t + weight, r }));
            }
        }
    }
    Ok(None)
}

/// All `r` with `Σ e_j r_j = weight`, in lexicographic order.
fn shapes_with_weight(e: &[usize], weight: usize) -> Vec<Vec<usize>> {
    fn rec(e: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == e.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let ej = e[cur.len()];
        for rj in 0..=left / ej {
            cur.push(rj);
            rec(e, left - rj * ej, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, weight, &mut Vec::new(), &mut out);
    out
}

/// L_f: one plus the index of the last nonzero column among the first `f`
/// rows of all matrices (0 if those rows vanish). A nonzero entry in the
/// final column of a slice makes the answer undecidable from the slice.
pub fn row_length(matrices: &[GenMatrix], f: usize) -> Result<usize> {
    let mut len = 0;
    for m in matrices {
        if f > m.rows() {
            return Err(Error::Shape(format!("f = {f} exceeds {} rows", m.rows())));
        }
        for r in 0..f {
            if let Some(c) = m.row(r).iter().rposition(|x| !x.is_zero()) {
                if c + 1 == m.cols() {
                    return Err(Error::Inconclusive(c));
                }
                len = len.max(c + 1);
            }
        }
    }
    Ok(len)
}

/// The matrix whose rows are the first `rows_each` rows of every matrix,
/// cut to `cols` columns (matrix D in the digital witness argument).
pub fn stack_leading_rows(matrices: &[GenMatrix], rows_each: usize, cols: usize) -> Result<GenMatrix> {
    let field = matrices
        .first()
        .ok_or_else(|| Error::InvalidArgument("no matrices".into()))?
        .field()
        .clone();
    let mut out = GenMatrix::zeros(&field, rows_each * matrices.len(), cols);
    for (j, m) in matrices.iter().enumerate() {
        let part = m.slice(rows_each, cols)?;
        let start = j * rows_each * cols;
        out.entries[start..start + rows_each * cols].copy_from_slice(&part.entries);
    }
    Ok(out)
}
