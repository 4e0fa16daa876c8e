//! Sparse exact linear algebra: rank, kernels, particular solutions and
//! quotient bases. Every output is a function of the reduced echelon form, so
//! results do not depend on elimination order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Sparse vector as sorted `(index, value)` pairs with no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `x - a·y` for sorted sparse vectors.
pub fn axpy(x: &[(usize, Scalar)], a: &Scalar, y: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, -(a * &y[j].1)));
            j += 1;
        } else {
            let v = &x[i].1 - &(a * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(x: &[(usize, Scalar)], a: &Scalar) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, a * v)).collect()
}

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(i, s)| (i, s.clone()))
        .collect()
}

pub fn to_dense(field: FieldSpec, len: usize, v: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, s) in v {
        out[*i] = s.clone();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix {
            field,
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> SparseMatrix {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix {
            field,
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds from columns given as unsorted `(row, value)` lists; repeated rows are summed.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> SparseMatrix {
        let columns = columns
            .into_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (r, v) in col {
                    assert!(r < rows, "row index {r} out of range");
                    let e = acc.entry(r).or_insert_with(|| field.zero());
                    *e += &v;
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect::<Vec<SparseVec>>();
        SparseMatrix {
            field,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Builds from a dense row-major array.
    pub fn from_rows(field: FieldSpec, rows: &[Vec<Scalar>]) -> SparseMatrix {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[c].push((r, v.clone()));
                }
            }
        }
        SparseMatrix {
            field,
            rows: rows.len(),
            cols: ncols,
            columns,
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> SparseMatrix {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_i64(field, x)).collect())
            .collect();
        SparseMatrix::from_rows(field, &rows)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .iter()
            .find(|(i, _)| *i == r)
            .map_or_else(|| self.field.zero(), |(_, v)| v.clone())
    }

    /// Row-major sparse rows.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c, v.clone()));
            }
        }
        rows
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            columns: self.row_vectors(),
        }
    }

    pub fn mul_sparse(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, xc) in x {
            for (r, v) in &self.columns[*c] {
                let e = acc.entry(*r).or_insert_with(|| self.field.zero());
                *e += &(v * xc);
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(to_dense(self.field, self.rows, &self.mul_sparse(&to_sparse(x))))
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let columns = other.columns.iter().map(|c| self.mul_sparse(c)).collect();
        Ok(SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: columns.len(),
            columns,
        })
    }
}

/// Row echelon form built incrementally. Stored rows have leading coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Default for Echelon {
    fn default() -> Self {
        Self::new()
    }
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon {
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Eliminates leading entries against stored pivots.
    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, a)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &a, p),
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce_leading(v);
        match v.first() {
            None => false,
            Some((lead, a)) => {
                let inv = a.inv().unwrap();
                let lead = *lead;
                self.pivots.insert(lead, scale(&v, &inv));
                true
            }
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce_leading(v).is_empty()
    }

    /// Back-substitutes to the unique reduced row echelon form.
    pub fn into_reduced(mut self) -> BTreeMap<usize, SparseVec> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for c in cols {
            let pivot = self.pivots[&c].clone();
            for (&other, row) in self.pivots.range_mut(..c) {
                debug_assert!(other < c);
                if let Some((_, a)) = row.iter().find(|(i, _)| *i == c) {
                    let a = a.clone();
                    *row = axpy(row, &a, &pivot);
                }
            }
        }
        self.pivots
    }
}

fn echelon_of_rows(rows: Vec<SparseVec>) -> Echelon {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e
}

pub fn rank(m: &SparseMatrix) -> usize {
    // eliminate along the shorter side
    if m.rows <= m.cols {
        echelon_of_rows(m.columns.clone()).rank()
    } else {
        echelon_of_rows(m.row_vectors()).rank()
    }
}

/// Null space basis in reduced echelon normal form, as sparse vectors.
/// One vector per non-pivot column `f`, with coordinate 1 at `f`.
pub fn kernel_basis_sparse(m: &SparseMatrix) -> Vec<SparseVec> {
    let rref = echelon_of_rows(m.row_vectors()).into_reduced();
    // column f -> list of (pivot column, coefficient R[pivot][f])
    let mut in_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (&pc, row) in &rref {
        for (c, v) in row.iter().skip(1) {
            in_col.entry(*c).or_default().push((pc, v.clone()));
        }
    }
    let one = m.field.one();
    (0..m.cols)
        .filter(|f| !rref.contains_key(f))
        .map(|f| {
            let mut v: SparseVec = in_col
                .get(&f)
                .map(|es| es.iter().map(|(pc, a)| (*pc, -a)).collect())
                .unwrap_or_default();
            v.push((f, one.clone()));
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect()
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    kernel_basis_sparse(m)
        .iter()
        .map(|v| to_dense(m.field, m.cols, v))
        .collect()
}

/// Solves `m·x = b_k` for every right-hand side at once. Free variables are
/// zero and pivot variables read off the reduced echelon form.
pub fn solve_many_sparse(m: &SparseMatrix, bs: &[SparseVec]) -> Vec<Option<SparseVec>> {
    let n = m.cols;
    let mut rows = m.row_vectors();
    for (k, b) in bs.iter().enumerate() {
        for (r, v) in b {
            rows[*r].push((n + k, v.clone()));
        }
    }
    let rref = echelon_of_rows(rows).into_reduced();
    let mut sols: Vec<Option<SparseVec>> = vec![Some(Vec::new()); bs.len()];
    for (&pc, row) in &rref {
        if pc < n {
            for (c, v) in row {
                if *c >= n {
                    if let Some(s) = sols[c - n].as_mut() {
                        s.push((pc, v.clone()));
                    }
                }
            }
        } else {
            // a row with zero m-part: every right-hand side it touches is inconsistent
            for (c, _) in row {
                sols[c - n] = None;
            }
        }
    }
    sols
}

pub fn solve_particular_sparse(m: &SparseMatrix, b: &[(usize, Scalar)]) -> Option<SparseVec> {
    solve_many_sparse(m, &[b.to_vec()]).pop().unwrap()
}

pub fn solve_particular(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            got: b.len(),
        });
    }
    Ok(solve_particular_sparse(m, &to_sparse(b)).map(|x| to_dense(m.field, m.cols, &x)))
}

/// A basis of `span(generators) / span(image)` with coordinates.
///
/// Image vectors are inserted first; candidates independent of everything
/// stored become basis elements ("representatives") in insertion order.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    field: FieldSpec,
    // pivot column -> (normalized row, its coordinates in the representatives)
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
    reps: Vec<SparseVec>,
}

impl QuotientBasis {
    pub fn new(field: FieldSpec) -> QuotientBasis {
        QuotientBasis {
            field,
            pivots: BTreeMap::new(),
            reps: Vec::new(),
        }
    }

    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut track: SparseVec = Vec::new();
        while let Some((lead, a)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some((p, t)) => {
                    v = axpy(&v, &a, p);
                    track = axpy(&track, &-&a, t);
                }
                None => break,
            }
        }
        (v, track)
    }

    fn store(&mut self, rem: SparseVec, track: SparseVec) {
        let (lead, a) = rem[0].clone();
        let inv = a.inv().unwrap();
        self.pivots.insert(lead, (scale(&rem, &inv), scale(&track, &inv)));
    }

    pub fn add_image(&mut self, v: SparseVec) {
        let (rem, track) = self.reduce(v);
        if !rem.is_empty() {
            self.store(rem, track);
        }
    }

    /// Adds `v` as a new representative if it is independent modulo what is stored.
    pub fn add_candidate(&mut self, v: SparseVec) -> bool {
        let (rem, track) = self.reduce(v.clone());
        if rem.is_empty() {
            return false;
        }
        let j = self.reps.len();
        // v ≡ rem + track, so rem ≡ e_j − track
        let t = axpy(&[(j, self.field.one())], &self.field.one(), &track);
        self.reps.push(v);
        self.store(rem, t);
        true
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of `v` in the representatives, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: SparseVec) -> Option<SparseVec> {
        let (rem, track) = self.reduce(v);
        if rem.is_empty() {
            Some(track)
        } else {
            None
        }
    }
}
