use std::collections::BTreeMap;

use super::{Cochain, Key};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::GradedSpace;
use crate::linalg::{axpy, scale, SparseVec};

/// Structure constants: `(p, i, r, a, b) ↦ a ∘_i b` with `a ∈ O(p)`, `b ∈ O(r)`,
/// the result a sparse vector in the basis of `O(p + r − 1)`. Missing entries are zero.
pub type CompositionTable = BTreeMap<(usize, usize, usize, usize, usize), SparseVec>;

/// A finite graded operad, carrying arities `0..=max_arity` explicitly.
#[derive(Debug)]
pub struct FiniteOperad {
    field: FieldSpec,
    arities: Vec<GradedSpace>,
    unit: usize,
    comp: CompositionTable,
}

impl FiniteOperad {
    /// Validates degrees, unit and associativity axioms before returning.
    pub fn new(field: FieldSpec, arities: Vec<GradedSpace>, unit: usize, comp: CompositionTable) -> Result<FiniteOperad> {
        if arities.len() < 2 || unit >= arities[1].dim() || arities[1].degree(unit) != 0 {
            return Err(Error::OperadAxiom("unit must be a degree-0 element of arity 1".into()));
        }
        let op = FiniteOperad {
            field,
            arities,
            unit,
            comp,
        };
        op.check_table()?;
        op.check_unit()?;
        op.check_associativity()?;
        Ok(op)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn max_arity(&self) -> usize {
        self.arities.len() - 1
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn arity_space(&self, p: usize) -> Option<&GradedSpace> {
        self.arities.get(p)
    }

    fn check_table(&self) -> Result<()> {
        for (&(p, i, r, a, b), v) in &self.comp {
            let n = p + r;
            if i == 0 || i > p || n == 0 || n - 1 > self.max_arity() || p > self.max_arity() || r > self.max_arity() {
                return Err(Error::ArityOutOfRange(n.saturating_sub(1)));
            }
            if a >= self.arities[p].dim() || b >= self.arities[r].dim() {
                return Err(Error::OperadAxiom(format!("basis index out of range in ({p},{i},{r},{a},{b})")));
            }
            let d = self.arities[p].degree(a) + self.arities[r].degree(b);
            for (c, _) in v {
                if *c >= self.arities[n - 1].dim() || self.arities[n - 1].degree(*c) != d {
                    return Err(Error::OperadAxiom(format!("composite ({p},{i},{r},{a},{b}) is not of degree {d}")));
                }
            }
        }
        Ok(())
    }

    /// Unsuspended `a ∘_i b` on basis elements.
    fn comp_basis(&self, p: usize, i: usize, r: usize, a: usize, b: usize) -> SparseVec {
        self.comp.get(&(p, i, r, a, b)).cloned().unwrap_or_default()
    }

    /// Unsuspended composition extended bilinearly.
    fn comp_vec(&self, p: usize, i: usize, r: usize, x: &SparseVec, y: &SparseVec) -> Result<SparseVec> {
        if p + r - 1 > self.max_arity() && !x.is_empty() && !y.is_empty() {
            return Err(Error::ArityOutOfRange(p + r - 1));
        }
        let mut acc: SparseVec = Vec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let v = self.comp_basis(p, i, r, *a, *b);
                acc = axpy(&acc, &-(ca * cb), &v);
            }
        }
        Ok(acc)
    }

    fn check_unit(&self) -> Result<()> {
        let one = self.field.one();
        for p in 0..=self.max_arity() {
            for x in 0..self.arities[p].dim() {
                let xv = vec![(x, one.clone())];
                if self.comp_basis(1, 1, p, self.unit, x) != xv {
                    return Err(Error::OperadAxiom(format!("id ∘_1 x != x for arity {p} basis {x}")));
                }
                for i in 1..=p {
                    if self.comp_basis(p, i, 1, x, self.unit) != xv {
                        return Err(Error::OperadAxiom(format!("x ∘_{i} id != x for arity {p} basis {x}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.max_arity();
        let one = self.field.one();
        for p in 1..=n {
            for q in 0..=n {
                for r in 0..=n {
                    // every intermediate composite must be carried as well
                    if p + q + r < 2 || p + q + r - 2 > n || p + q - 1 > n || p + r - 1 > n || (q + r).saturating_sub(1) > n {
                        continue;
                    }
                    for x in 0..self.arities[p].dim() {
                        for y in 0..self.arities[q].dim() {
                            for z in 0..self.arities[r].dim() {
                                let (xv, yv, zv) = (vec![(x, one.clone())], vec![(y, one.clone())], vec![(z, one.clone())]);
                                let dy = self.arities[q].degree(y);
                                let dz = self.arities[r].degree(z);
                                let swap = self.field.sign(dy * dz);
                                for i in 1..=p {
                                    let xy = self.comp_vec(p, i, q, &xv, &yv)?;
                                    for j in 1..p + q {
                                        let lhs = self.comp_vec(p + q - 1, j, r, &xy, &zv)?;
                                        let rhs = if j < i {
                                            let xz = self.comp_vec(p, j, r, &xv, &zv)?;
                                            scale(&self.comp_vec(p + r - 1, i + r - 1, q, &xz, &yv)?, &swap)
                                        } else if j < i + q {
                                            let yz = self.comp_vec(q, j - i + 1, r, &yv, &zv)?;
                                            self.comp_vec(p, i, q + r - 1, &xv, &yz)?
                                        } else {
                                            let xz = self.comp_vec(p, j - q + 1, r, &xv, &zv)?;
                                            scale(&self.comp_vec(p + r - 1, i, q, &xz, &yv)?, &swap)
                                        };
                                        if lhs != rhs {
                                            return Err(Error::OperadAxiom(format!(
                                                "associativity fails for arities ({p},{q},{r}), basis ({x},{y},{z}), slots ({i},{j})"
                                            )));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(super) fn basis_keys(&self, p: usize, q: i64) -> Vec<Key> {
        match self.arities.get(p) {
            None => Vec::new(),
            Some(s) => (0..s.dim()).filter(|&b| s.degree(b) == q).map(|b| vec![b as u16]).collect(),
        }
    }

    pub(super) fn check_key(&self, p: usize, q: i64, key: &Key) -> Result<()> {
        let s = self.arities.get(p).ok_or(Error::ArityOutOfRange(p))?;
        match key.as_slice() {
            [b] if (*b as usize) < s.dim() && s.degree(*b as usize) == q => Ok(()),
            _ => Err(Error::Inhomogeneous {
                entry: format!("{key:?} in arity {p}"),
            }),
        }
    }

    /// Suspended composition: `(−1)^{(p−i)(q_y+r+1) + q_y(i−1)}` times the composition of `O`.
    pub(super) fn compose(&self, x: &Cochain, y: &Cochain, i: usize) -> Result<BTreeMap<Key, Scalar>> {
        let (p, r) = (x.arity(), y.arity());
        let xv: SparseVec = x.terms().iter().map(|(k, c)| (k[0] as usize, c.clone())).collect();
        let yv: SparseVec = y.terms().iter().map(|(k, c)| (k[0] as usize, c.clone())).collect();
        let e = (p - i) as i64 * (y.degree() + r as i64 + 1) + y.degree() * (i as i64 - 1);
        let v = scale(&self.comp_vec(p, i, r, &xv, &yv)?, &self.field.sign(e));
        Ok(v.into_iter().map(|(b, c)| (vec![b as u16], c)).collect())
    }

    /// `E(V)` restricted to arities `0..=max_arity`, with the plain Koszul rule
    /// `(f ∘_i g)(a) = (−1)^{|g| Σ_{j<i} |a_j|} f(a_1, …, g(a_i, …), …)`.
    ///
    /// The basis of `O(p)` consists of the elementary maps `"a,b->c"` in key
    /// order, except in arity 1 where the identity `"id"` replaces the first
    /// diagonal map `v_0 -> v_0`.
    pub fn endomorphism_truncation(v: &GradedSpace, max_arity: usize) -> Result<FiniteOperad> {
        let field = v.field();
        let dim = v.dim();
        if dim == 0 {
            return Err(Error::OperadAxiom("E(0) has no unit".into()));
        }
        let one = field.one();
        let mut keys: Vec<Vec<Vec<usize>>> = Vec::new();
        for p in 0..=max_arity {
            let mut ks: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..=p {
                ks = ks
                    .into_iter()
                    .flat_map(|k| {
                        (0..dim).map(move |l| {
                            let mut k = k.clone();
                            k.push(l);
                            k
                        })
                    })
                    .collect();
            }
            keys.push(ks);
        }
        let index: Vec<BTreeMap<Vec<usize>, usize>> = keys
            .iter()
            .map(|ks| ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
            .collect();
        let key_degree = |k: &[usize]| {
            let p = k.len() - 1;
            v.degree(k[p]) - k[..p].iter().map(|&l| v.degree(l)).sum::<i64>()
        };
        let describe = |k: &[usize]| {
            let p = k.len() - 1;
            let ins: Vec<&str> = k[..p].iter().map(|&l| v.label(l)).collect();
            format!("{}->{}", ins.join(","), v.label(k[p]))
        };
        // arity-1 key index of the first diagonal map, replaced by the identity
        let first_diag = index[1][&vec![0, 0]];
        let diagonals: Vec<usize> = (0..dim).map(|l| index[1][&vec![l, l]]).collect();
        let to_keys = |p: usize, b: usize| -> SparseVec {
            if p != 1 {
                return vec![(b, one.clone())];
            }
            if b == 0 {
                let mut d: SparseVec = diagonals.iter().map(|&k| (k, one.clone())).collect();
                d.sort_by_key(|(k, _)| *k);
                return d;
            }
            let k = if b - 1 < first_diag { b - 1 } else { b };
            vec![(k, one.clone())]
        };
        let from_keys = |p: usize, x: SparseVec| -> SparseVec {
            if p != 1 {
                return x;
            }
            let c0 = x
                .iter()
                .find(|(k, _)| *k == first_diag)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| field.zero());
            let mut out: SparseVec = Vec::new();
            if !c0.is_zero() {
                out.push((0, c0.clone()));
            }
            let mut rest: BTreeMap<usize, Scalar> = x.into_iter().filter(|(k, _)| *k != first_diag).collect();
            for &d in diagonals.iter().skip(1) {
                let e = rest.entry(d).or_insert_with(|| field.zero());
                *e -= &c0;
            }
            for (k, c) in rest {
                if !c.is_zero() {
                    out.push((if k < first_diag { k + 1 } else { k }, c));
                }
            }
            out
        };
        let mut arities = Vec::new();
        for (p, ks) in keys.iter().enumerate() {
            let basis = if p == 1 {
                std::iter::once(("id".to_string(), 0))
                    .chain(ks.iter().filter(|k| **k != vec![0, 0]).map(|k| (describe(k), key_degree(k))))
                    .collect()
            } else {
                ks.iter().map(|k| (describe(k), key_degree(k))).collect()
            };
            arities.push(GradedSpace::new(field, basis)?);
        }
        let compose_keys = |p: usize, i: usize, r: usize, a: usize, b: usize| -> Option<(usize, Scalar)> {
            let (xk, yk) = (&keys[p][a], &keys[r][b]);
            if xk[i - 1] != yk[r] {
                return None;
            }
            let mut w = xk[..i - 1].to_vec();
            w.extend_from_slice(&yk[..r]);
            w.extend_from_slice(&xk[i..]);
            let prefix: i64 = xk[..i - 1].iter().map(|&l| v.degree(l)).sum();
            Some((index[p + r - 1][&w], field.sign(key_degree(yk) * prefix)))
        };
        let mut comp = CompositionTable::new();
        for p in 1..=max_arity {
            for r in 0..=max_arity + 1 - p {
                for a in 0..arities[p].dim() {
                    for b in 0..arities[r].dim() {
                        for i in 1..=p {
                            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                            for (ka, ca) in to_keys(p, a) {
                                for (kb, cb) in to_keys(r, b) {
                                    if let Some((w, s)) = compose_keys(p, i, r, ka, kb) {
                                        let e = acc.entry(w).or_insert_with(|| field.zero());
                                        *e += &(&(&ca * &cb) * &s);
                                    }
                                }
                            }
                            let v: SparseVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                            let v = from_keys(p + r - 1, v);
                            if !v.is_empty() {
                                comp.insert((p, i, r, a, b), v);
                            }
                        }
                    }
                }
            }
        }
        FiniteOperad::new(field, arities, 0, comp)
    }
}
