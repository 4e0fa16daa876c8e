//! Strict graded algebras and bimodules given by structure constants, and
//! their multiplications as operad cochains.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::GradedSpace;
use crate::linalg::{axpy, solve_particular_sparse, SparseMatrix, SparseVec};
use crate::operad::{Cochain, Key, OperadHandle};

/// Bilinear table `(i, j) ↦ Σ c_k e_k`.
pub type ProductTable = BTreeMap<(usize, usize), SparseVec>;

fn add_row(table: &mut ProductTable, key: (usize, usize), k: usize, c: Scalar) {
    let v = table.entry(key).or_default();
    let one = c.field().one();
    *v = axpy(v, &-c, &[(k, one)]);
    v.retain(|(_, s)| !s.is_zero());
}

/// Applies a bilinear table to sparse vectors.
fn apply(table: &ProductTable, x: &SparseVec, y: &SparseVec) -> SparseVec {
    let mut acc: SparseVec = Vec::new();
    for (i, a) in x {
        for (j, b) in y {
            if let Some(v) = table.get(&(*i, *j)) {
                acc = axpy(&acc, &-(a * b), v);
            }
        }
    }
    acc
}

fn basis_vec(field: FieldSpec, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    space: GradedSpace,
    product: ProductTable,
}

impl GradedAlgebra {
    /// Rows `(a, b, c, coeff)` meaning `a·b += coeff·c`. Checks degrees and associativity.
    pub fn new(space: GradedSpace, rows: &[(String, String, String, Scalar)]) -> Result<GradedAlgebra> {
        let idx = |l: &str| space.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()));
        let mut product = ProductTable::new();
        for (a, b, c, s) in rows {
            let (i, j, k) = (idx(a)?, idx(b)?, idx(c)?);
            if space.degree(k) != space.degree(i) + space.degree(j) {
                return Err(Error::Inhomogeneous {
                    entry: format!("{a}·{b} -> {c}"),
                });
            }
            add_row(&mut product, (i, j), k, s.clone());
        }
        let alg = GradedAlgebra { space, product };
        alg.check_associative()?;
        Ok(alg)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_table(space: GradedSpace, rows: &[(&str, &str, &str, i64)]) -> Result<GradedAlgebra> {
        let f = space.field();
        let rows: Vec<_> = rows
            .iter()
            .map(|(a, b, c, n)| (a.to_string(), b.to_string(), c.to_string(), Scalar::from_i64(f, *n)))
            .collect();
        GradedAlgebra::new(space, &rows)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field()
    }

    pub fn product(&self) -> &ProductTable {
        &self.product
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        apply(&self.product, x, y)
    }

    fn check_associative(&self) -> Result<()> {
        let f = self.field();
        let n = self.space.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.multiply(&basis_vec(f, i), &basis_vec(f, j));
                for k in 0..n {
                    let lhs = self.multiply(&ij, &basis_vec(f, k));
                    let jk = self.multiply(&basis_vec(f, j), &basis_vec(f, k));
                    let rhs = self.multiply(&basis_vec(f, i), &jk);
                    if lhs != rhs {
                        return Err(Error::NotAssociative(format!(
                            "({}·{})·{} != {}·({}·{})",
                            self.space.label(i),
                            self.space.label(j),
                            self.space.label(k),
                            self.space.label(i),
                            self.space.label(j),
                            self.space.label(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The two-sided unit, if there is one.
    pub fn unit(&self) -> Option<SparseVec> {
        let f = self.field();
        let n = self.space.dim();
        // unknown u ∈ A: u·e_j = e_j and e_j·u = e_j for all j; n² rows per side
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        let mut rhs: SparseVec = Vec::new();
        for j in 0..n {
            for base in [0, n * n] {
                for i in 0..n {
                    let prod = if base == 0 {
                        self.multiply(&basis_vec(f, i), &basis_vec(f, j))
                    } else {
                        self.multiply(&basis_vec(f, j), &basis_vec(f, i))
                    };
                    for (k, c) in prod {
                        cols[i].push((base + j * n + k, c));
                    }
                }
                rhs.push((base + j * n + j, f.one()));
            }
        }
        rhs.sort_by_key(|(r, _)| *r);
        let m = SparseMatrix::from_columns(f, 2 * n * n, cols);
        solve_particular_sparse(&m, &rhs)
    }

    /// `m2(a, b) = a·b` as a cochain of bidegree (2, 0) over an endomorphism
    /// handle whose first basis elements are those of `A`.
    pub fn multiplication(&self, handle: &OperadHandle) -> Result<Cochain> {
        table_cochain(handle, &self.product, 0, 0, 0)
    }
}

/// Cochain of a bilinear table with label offsets for the two inputs and output.
fn table_cochain(handle: &OperadHandle, table: &ProductTable, off_a: usize, off_b: usize, off_c: usize) -> Result<Cochain> {
    let mut entries: Vec<(Key, Scalar)> = Vec::new();
    for ((i, j), v) in table {
        for (k, c) in v {
            entries.push((vec![(i + off_a) as u16, (j + off_b) as u16, (k + off_c) as u16], c.clone()));
        }
    }
    Cochain::new(handle, 2, 0, entries)
}

/// A strict graded bimodule over a graded algebra.
#[derive(Clone, Debug)]
pub struct Bimodule {
    space: GradedSpace,
    left: ProductTable,
    right: ProductTable,
}

impl Bimodule {
    /// Rows: left `(a, m, n, coeff)` for `a·m += coeff·n`; right `(m, a, n, coeff)` for `m·a += coeff·n`.
    pub fn new(
        algebra: &GradedAlgebra,
        space: GradedSpace,
        left: &[(String, String, String, Scalar)],
        right: &[(String, String, String, Scalar)],
    ) -> Result<Bimodule> {
        let a_idx = |l: &str| algebra.space.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()));
        let m_idx = |l: &str| space.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()));
        for (l, _) in space.basis() {
            if algebra.space.index_of(l).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut lt = ProductTable::new();
        for (a, m, n, c) in left {
            let (i, j, k) = (a_idx(a)?, m_idx(m)?, m_idx(n)?);
            if space.degree(k) != algebra.space.degree(i) + space.degree(j) {
                return Err(Error::Inhomogeneous {
                    entry: format!("{a}·{m} -> {n}"),
                });
            }
            add_row(&mut lt, (i, j), k, c.clone());
        }
        let mut rt = ProductTable::new();
        for (m, a, n, c) in right {
            let (j, i, k) = (m_idx(m)?, a_idx(a)?, m_idx(n)?);
            if space.degree(k) != algebra.space.degree(i) + space.degree(j) {
                return Err(Error::Inhomogeneous {
                    entry: format!("{m}·{a} -> {n}"),
                });
            }
            add_row(&mut rt, (j, i), k, c.clone());
        }
        let b = Bimodule {
            space,
            left: lt,
            right: rt,
        };
        b.check_axioms(algebra)?;
        Ok(b)
    }

    pub fn from_tables(
        algebra: &GradedAlgebra,
        space: GradedSpace,
        left: &[(&str, &str, &str, i64)],
        right: &[(&str, &str, &str, i64)],
    ) -> Result<Bimodule> {
        let f = space.field();
        let conv = |rows: &[(&str, &str, &str, i64)]| -> Vec<(String, String, String, Scalar)> {
            rows.iter()
                .map(|(a, b, c, n)| (a.to_string(), b.to_string(), c.to_string(), Scalar::from_i64(f, *n)))
                .collect()
        };
        Bimodule::new(algebra, space, &conv(left), &conv(right))
    }

    /// `A` acting on itself; module labels are the algebra labels with `suffix` appended.
    pub fn diagonal(algebra: &GradedAlgebra, suffix: &str) -> Result<Bimodule> {
        let sp = &algebra.space;
        let space = GradedSpace::new(
            sp.field(),
            sp.basis().iter().map(|(l, d)| (format!("{l}{suffix}"), *d)).collect(),
        )?;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for ((i, j), v) in &algebra.product {
            for (k, c) in v {
                let (a, b, o) = (sp.label(*i), sp.label(*j), sp.label(*k));
                left.push((a.to_string(), format!("{b}{suffix}"), format!("{o}{suffix}"), c.clone()));
                right.push((format!("{a}{suffix}"), b.to_string(), format!("{o}{suffix}"), c.clone()));
            }
        }
        Bimodule::new(algebra, space, &left, &right)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn left(&self) -> &ProductTable {
        &self.left
    }

    pub fn right(&self) -> &ProductTable {
        &self.right
    }

    fn check_axioms(&self, algebra: &GradedAlgebra) -> Result<()> {
        let f = algebra.field();
        let (na, nm) = (algebra.space.dim(), self.space.dim());
        let la = |i: usize| algebra.space.label(i).to_string();
        let lm = |i: usize| self.space.label(i).to_string();
        for i in 0..na {
            for j in 0..na {
                let ab = algebra.multiply(&basis_vec(f, i), &basis_vec(f, j));
                for m in 0..nm {
                    let mv = basis_vec(f, m);
                    // (ab)m = a(bm)
                    let l1 = apply(&self.left, &ab, &mv);
                    let l2 = apply(&self.left, &basis_vec(f, i), &apply(&self.left, &basis_vec(f, j), &mv));
                    if l1 != l2 {
                        return Err(Error::ModuleAxiom(format!("({}·{})·{} != {}·({}·{})", la(i), la(j), lm(m), la(i), la(j), lm(m))));
                    }
                    // m(ab) = (ma)b
                    let r1 = apply(&self.right, &mv, &ab);
                    let r2 = apply(&self.right, &apply(&self.right, &mv, &basis_vec(f, i)), &basis_vec(f, j));
                    if r1 != r2 {
                        return Err(Error::ModuleAxiom(format!("{}·({}·{}) != ({}·{})·{}", lm(m), la(i), la(j), lm(m), la(i), la(j))));
                    }
                    // (a m) b = a (m b)
                    let c1 = apply(&self.right, &apply(&self.left, &basis_vec(f, i), &mv), &basis_vec(f, j));
                    let c2 = apply(&self.left, &basis_vec(f, i), &apply(&self.right, &mv, &basis_vec(f, j)));
                    if c1 != c2 {
                        return Err(Error::ModuleAxiom(format!("({}·{})·{} != {}·({}·{})", la(i), lm(m), la(j), la(i), lm(m), la(j))));
                    }
                }
            }
        }
        // units act as identities when A has a unit
        if let Some(u) = algebra.unit() {
            for m in 0..nm {
                let mv = basis_vec(f, m);
                if apply(&self.left, &u, &mv) != mv || apply(&self.right, &mv, &u) != mv {
                    return Err(Error::ModuleAxiom(format!("the unit does not act as the identity on {}", lm(m))));
                }
            }
        }
        Ok(())
    }

    /// The module part `m^M_2` (left plus right action) over a handle for `A ⊕ M`.
    pub fn action(&self, algebra: &GradedAlgebra, handle: &OperadHandle) -> Result<Cochain> {
        let na = algebra.space.dim();
        let l = table_cochain(handle, &self.left, 0, na, na)?;
        let r = table_cochain(handle, &self.right, na, 0, na)?;
        l.try_add(&r)
    }

    /// Identity of `M` as an arity-1 cochain over a handle for `A ⊕ M`.
    pub fn identity(&self, algebra: &GradedAlgebra, handle: &OperadHandle) -> Result<Cochain> {
        let na = algebra.space.dim();
        let one = handle.field().one();
        Cochain::new(
            handle,
            1,
            0,
            (0..self.space.dim()).map(|i| (vec![(na + i) as u16, (na + i) as u16], one.clone())),
        )
    }
}
