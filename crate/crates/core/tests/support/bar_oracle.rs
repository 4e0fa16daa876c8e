//! Dense Hochschild cochains on the bar model, coded independently of the
//! operad machinery. Cochains of arity p and degree q are all homogeneous
//! maps (a_1, …, a_p) ↦ A with deg(out) = Σ deg(a_i) + q, and
//!
//! (δf)(a_1..a_{p+1}) = (−1)^{|a_1||f|} a_1 f(a_2..) + Σ_i (−1)^i f(.., a_i a_{i+1}, ..)
//!                      + (−1)^{p+1} f(a_1..a_p) a_{p+1}.
//!
//! With a module part the algebra is the square-zero extension and the
//! cochains are restricted to those with exactly one module input and a
//! module output.

#![allow(dead_code)]

use massey_core::algebra::{Bimodule, GradedAlgebra};
use massey_core::{FieldSpec, Scalar};

pub struct BarAlgebra {
    pub field: FieldSpec,
    pub degrees: Vec<i64>,
    /// first index of the module part (= dim for a plain algebra)
    pub module_from: usize,
    /// product[i][j] = dense vector of e_i e_j
    pub product: Vec<Vec<Vec<Scalar>>>,
}

impl BarAlgebra {
    pub fn plain(a: &GradedAlgebra) -> BarAlgebra {
        let f = a.field();
        let n = a.space().dim();
        let degrees = (0..n).map(|i| a.space().degree(i)).collect();
        let mut product = vec![vec![vec![f.zero(); n]; n]; n];
        for ((i, j), v) in a.product() {
            for (k, c) in v {
                product[*i][*j][*k] = c.clone();
            }
        }
        BarAlgebra { field: f, degrees, module_from: n, product }
    }

    pub fn square_zero(a: &GradedAlgebra, m: &Bimodule) -> BarAlgebra {
        let f = a.field();
        let na = a.space().dim();
        let n = na + m.space().dim();
        let mut degrees: Vec<i64> = (0..na).map(|i| a.space().degree(i)).collect();
        degrees.extend((0..m.space().dim()).map(|i| m.space().degree(i)));
        let mut product = vec![vec![vec![f.zero(); n]; n]; n];
        for ((i, j), v) in a.product() {
            for (k, c) in v {
                product[*i][*j][*k] = c.clone();
            }
        }
        for ((i, j), v) in m.left() {
            for (k, c) in v {
                product[*i][na + *j][na + *k] = c.clone();
            }
        }
        for ((j, i), v) in m.right() {
            for (k, c) in v {
                product[na + *j][*i][na + *k] = c.clone();
            }
        }
        BarAlgebra { field: f, degrees, module_from: na, product }
    }

    fn dim(&self) -> usize {
        self.degrees.len()
    }

    fn is_module(&self, i: usize) -> bool {
        i >= self.module_from
    }

    fn restricted(&self) -> bool {
        self.module_from < self.dim()
    }

    /// Coordinates (input tuple, output) of the cochain space of arity p, degree q.
    pub fn basis(&self, p: usize, q: i64) -> Vec<(Vec<usize>, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut tuple = vec![0usize; p];
        loop {
            if n == 0 {
                break;
            }
            let s: i64 = tuple.iter().map(|&i| self.degrees[i]).sum();
            let mods = tuple.iter().filter(|&&i| self.is_module(i)).count();
            for o in 0..n {
                if self.degrees[o] != s + q {
                    continue;
                }
                if self.restricted() && (mods != 1 || !self.is_module(o)) {
                    continue;
                }
                out.push((tuple.clone(), o));
            }
            let mut k = 0;
            while k < p {
                tuple[k] += 1;
                if tuple[k] < n {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == p {
                break;
            }
        }
        out
    }

    fn sign(&self, e: i64) -> Scalar {
        self.field.sign(e)
    }

    /// Dense matrix of δ from (p, q) to (p + 1, q), rows indexed by the target basis.
    pub fn differential(&self, p: usize, q: i64) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let src = self.basis(p, q);
        let tgt = self.basis(p + 1, q);
        let n = self.dim();
        let mut m = vec![vec![f.zero(); src.len()]; tgt.len()];
        let src_index: std::collections::HashMap<(Vec<usize>, usize), usize> =
            src.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        for (row, (a, o)) in tgt.iter().enumerate() {
            // value of δ(e_col) at (a, o) for every column
            // left term: a_1 · f(a_2..)
            for mid in 0..n {
                let c = &self.product[a[0]][mid][*o];
                if c.is_zero() {
                    continue;
                }
                if let Some(&col) = src_index.get(&(a[1..].to_vec(), mid)) {
                    let s = self.sign(self.degrees[a[0]] * q);
                    m[row][col] += &(&s * c);
                }
            }
            // inner terms
            for i in 0..p {
                for (k, c) in self.product[a[i]][a[i + 1]].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut t = a[..i].to_vec();
                    t.push(k);
                    t.extend_from_slice(&a[i + 2..]);
                    if let Some(&col) = src_index.get(&(t, *o)) {
                        let s = self.sign(i as i64 + 1);
                        m[row][col] += &(&s * c);
                    }
                }
            }
            // right term: f(a_1..a_p) · a_{p+1}
            for mid in 0..n {
                let c = &self.product[mid][a[p]][*o];
                if c.is_zero() {
                    continue;
                }
                if let Some(&col) = src_index.get(&(a[..p].to_vec(), mid)) {
                    let s = self.sign(p as i64 + 1);
                    m[row][col] += &(&s * c);
                }
            }
        }
        m
    }
}

/// Rank by dense Gaussian elimination.
pub fn dense_rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = m[r][c].inv().unwrap();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = &m[i][c] * &inv;
                for j in c..cols {
                    let t = &factor * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn dense_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], field: FieldSpec) -> Vec<Vec<Scalar>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut s = field.zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            s += &(x * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Cohomology dimension at arity p, degree q.
pub fn cohomology_dim(alg: &BarAlgebra, p: usize, q: i64) -> usize {
    let dim = alg.basis(p, q).len();
    let out = dense_rank(alg.differential(p, q));
    let inc = if p == 0 { 0 } else { dense_rank(alg.differential(p - 1, q)) };
    dim - out - inc
}
