//! Finite-dimensional integer-graded vector spaces with named bases.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    field: FieldSpec,
    basis: Vec<(String, i64)>,
}

impl GradedSpace {
    pub fn new(field: FieldSpec, basis: Vec<(String, i64)>) -> Result<GradedSpace> {
        let mut seen = BTreeSet::new();
        for (l, _) in &basis {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(GradedSpace { field, basis })
    }

    pub fn from_pairs(field: FieldSpec, basis: &[(&str, i64)]) -> Result<GradedSpace> {
        GradedSpace::new(field, basis.iter().map(|(l, d)| (l.to_string(), *d)).collect())
    }

    pub fn zero(field: FieldSpec) -> GradedSpace {
        GradedSpace {
            field,
            basis: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, i64)] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].1
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|(l, _)| l == label)
    }

    pub fn support(&self) -> BTreeSet<i64> {
        self.basis.iter().map(|(_, d)| *d).collect()
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        self.basis.iter().filter(|(_, e)| *e == d).count()
    }

    /// Degree → dimension.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (_, d) in &self.basis {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    /// `self ⊕ other`, basis of `self` first.
    pub fn direct_sum(&self, other: &GradedSpace) -> Result<GradedSpace> {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        GradedSpace::new(self.field, basis)
    }
}

/// Suspension by `n`: a degree `d` element moves to degree `d - n`.
pub fn shift(v: &GradedSpace, n: i64) -> GradedSpace {
    GradedSpace {
        field: v.field,
        basis: v.basis.iter().map(|(l, d)| (l.clone(), d - n)).collect(),
    }
}

/// Koszul sign of a sequence of adjacent block swaps.
///
/// `degrees` are the (already shifted) block degrees in their initial order;
/// swap `i` exchanges the blocks currently at positions `i` and `i + 1`.
pub fn koszul_sign(field: FieldSpec, degrees: &[i64], swaps: &[usize]) -> Scalar {
    let mut d = degrees.to_vec();
    let mut e = 0i64;
    for &i in swaps {
        assert!(i + 1 < d.len(), "swap position {i} out of range");
        e += d[i] * d[i + 1];
        d.swap(i, i + 1);
    }
    field.sign(e)
}

/// Dimension of `Hom(S_1 ⊗ … ⊗ S_p, T)^q`. Saturates at `usize::MAX` for
/// long tensor words; zero-ness is always exact.
pub fn hom_component_dim(sources: &[&GradedSpace], target: &GradedSpace, q: i64) -> usize {
    let mut sums: BTreeMap<i64, usize> = BTreeMap::from([(0, 1)]);
    for s in sources {
        let mut next = BTreeMap::new();
        for (acc, n) in &sums {
            for (d, m) in s.dims() {
                let e = next.entry(acc + d).or_insert(0usize);
                *e = e.saturating_add(n.saturating_mul(m));
            }
        }
        sums = next;
    }
    sums.iter()
        .map(|(s, n)| n.saturating_mul(target.dim_in_degree(s + q)))
        .fold(0usize, usize::saturating_add)
}

/// Finite bidegree region `[p_min, p_max] × [q_min, q_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DegreeWindow {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl DegreeWindow {
    pub fn new(p_min: i64, p_max: i64, q_min: i64, q_max: i64) -> Result<DegreeWindow> {
        if p_min < 0 || p_min > p_max || q_min > q_max {
            return Err(Error::Unsupported(format!(
                "bad window {p_min}:{p_max},{q_min}:{q_max}"
            )));
        }
        Ok(DegreeWindow {
            p_min,
            p_max,
            q_min,
            q_max,
        })
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        (self.p_min..=self.p_max).contains(&p) && (self.q_min..=self.q_max).contains(&q)
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.p_min..=self.p_max).flat_map(move |p| (self.q_min..=self.q_max).map(move |q| (p, q)))
    }
}

impl std::fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{},{}:{}", self.p_min, self.p_max, self.q_min, self.q_max)
    }
}
