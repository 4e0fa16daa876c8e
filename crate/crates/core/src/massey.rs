//! Massey complexes: cohomology of an operad-type complex with the
//! differential `x ↦ [c, x]` for a class `c` of bidegree `(d + 2, −d)`
//! satisfying `Sq(c) = 0`.
//!
//! The complex is the cohomology of a base window from horizontal degree
//! `floor` on (`2`, or `1` for `Ext`), with maps `(s, t) → (s + d + 1, t − d)`
//! computed on the echelon cohomology representatives of the base window.
//! Over `𝔽₂` the source bidegree `(d + 1, −d)` of a non-ideal complex uses
//! `x ↦ x·x + [c, x]` instead.

use std::collections::BTreeMap;

use crate::braces::{cup, gerstenhaber_bracket, gerstenhaber_square};
use crate::complexes::{CohomologyClass, ComplexKind, ComplexWindow};
use crate::error::{Error, Result};
use crate::graded::DegreeWindow;
use crate::linalg::{kernel_basis_sparse, rank, SparseMatrix};
use crate::operad::Cochain;

/// `⟨[c, x]⟩` for cocycles `c` and `x`; the result is classified in `window`.
pub fn bracket_with_class(c: &CohomologyClass, x: &CohomologyClass, window: &ComplexWindow) -> Result<CohomologyClass> {
    let rep = gerstenhaber_bracket(&c.representative, &x.representative)?;
    let (p, q) = window.bidegree_of(&rep);
    if !window.is_interior(p, q) {
        return Err(if window.contains(p, q) { Error::Partial(p, q) } else { Error::OutsideWindow(p, q) });
    }
    window.class_of(&rep)
}

/// Horizontal degree below which a Massey complex is zero.
pub fn floor_for(kind: ComplexKind) -> i64 {
    match kind {
        ComplexKind::Bimodule => 1,
        _ => 2,
    }
}

/// Kind of the complex the class of a Massey complex over `base` lives in.
fn class_home(kind: ComplexKind) -> ComplexKind {
    match kind {
        ComplexKind::Ideal => ComplexKind::Operad,
        ComplexKind::Bimodule => ComplexKind::BimoduleHochschild,
        other => other,
    }
}

#[derive(Clone, Debug)]
pub struct MasseyComplex {
    base: ComplexWindow,
    class: Cochain,
    d: usize,
    floor: i64,
    /// Whether the char-2 map is in use at `(d + 1, −d)`.
    special: bool,
    diffs: BTreeMap<(i64, i64), SparseMatrix>,
}

/// Checks that `Sq(c)` is exact; on failure returns the square as witness.
pub fn check_square(base: &ComplexWindow, class: &Cochain) -> Result<()> {
    let sq = gerstenhaber_square(class)?;
    let (p, q) = (sq.arity() as i64, sq.degree());
    let window = DegreeWindow::new(p - 1, p + 1, q, q)?;
    let home = ComplexWindow::build(class_home(base.kind()), window, base.handle().clone(), None, 0, base.multiplication().clone())?;
    if home.is_coboundary(&sq)?.is_none() {
        return Err(Error::SquareNonzero(p, q, sq.to_string()));
    }
    Ok(())
}

/// Checks the class and returns `(d, special)`.
fn validate(base: &ComplexWindow, class: &Cochain) -> Result<(i64, bool)> {
    if class.handle() != base.handle() {
        return Err(Error::MismatchedHandles);
    }
    let d = class.arity() as i64 - 2;
    if d < 1 || class.degree() != -d {
        return Err(Error::BadOperation {
            arity: class.arity(),
            p: class.arity(),
            q: class.degree(),
            expected_q: 2 - class.arity() as i64,
        });
    }
    if !gerstenhaber_bracket(base.multiplication(), class)?.is_zero() {
        return Err(Error::NotCocycle);
    }
    check_square(base, class)?;
    let field = base.field();
    let special = field.characteristic() == 2 && !matches!(base.kind(), ComplexKind::Ideal | ComplexKind::Bimodule);
    if special && field != crate::field::FieldSpec::Prime(2) {
        // unreachable with prime fields only; kept as the contract for larger char-2 fields
        return Err(Error::Unsupported("the char-2 squaring map needs 𝔽₂".into()));
    }
    Ok((d, special))
}

/// Matrix of the Massey map from `H^{s,t}` of `source` to `H^{s+d+1,t−d}` of `target`.
fn massey_map(source: &ComplexWindow, target: &ComplexWindow, class: &Cochain, (s, t): (i64, i64), d: i64, special: bool) -> Result<SparseMatrix> {
    let use_square = special && (s, t) == (d + 1, -d);
    let rows = target.cohomology_dim(s + d + 1, t - d)?;
    let mut cols = Vec::new();
    for x in source.cohomology_basis(s, t)? {
        let mut img = gerstenhaber_bracket(class, &x)?;
        if use_square {
            img = img.try_add(&cup(source.multiplication(), &x, &x)?)?;
        }
        cols.push(target.class_coordinates(&img)?);
    }
    Ok(SparseMatrix::from_columns(source.field(), rows, cols))
}

/// Builds the Massey complex of `base` for the class represented by `class`.
pub fn build_massey_complex(base: &ComplexWindow, class: &Cochain) -> Result<MasseyComplex> {
    let (d, special) = validate(base, class)?;
    let floor = floor_for(base.kind());
    let mut diffs = BTreeMap::new();
    let w = base.window();
    for (s, t) in w.bidegrees() {
        if s < floor || !base.is_interior(s, t) || !base.is_interior(s + d + 1, t - d) {
            continue;
        }
        diffs.insert((s, t), massey_map(base, base, class, (s, t), d, special)?);
    }
    Ok(MasseyComplex {
        base: base.clone(),
        class: class.clone(),
        d: d as usize,
        floor,
        special,
        diffs,
    })
}

/// Massey cohomology at a single bidegree, built from three one-row windows
/// of the same kind as `base` instead of one rectangle.
pub fn massey_cohomology_dim_at(base: &ComplexWindow, class: &Cochain, s: i64, t: i64) -> Result<usize> {
    let (d, special) = validate(base, class)?;
    let floor = floor_for(base.kind());
    if s < floor {
        return Ok(0);
    }
    let row = |p: i64, q: i64| base.rebuilt(DegreeWindow::new(p - 1, p + 1, q, q).expect("valid window"));
    let here = row(s, t)?;
    let out = massey_map(&here, &row(s + d + 1, t - d)?, class, (s, t), d, special)?;
    let kernel = kernel_basis_sparse(&out).len();
    let (ps, pt) = (s - d - 1, t + d);
    let image = if ps < floor { 0 } else { rank(&massey_map(&row(ps, pt)?, &here, class, (ps, pt), d, special)?) };
    Ok(kernel - image)
}

impl MasseyComplex {
    pub fn base(&self) -> &ComplexWindow {
        &self.base
    }

    pub fn class(&self) -> &Cochain {
        &self.class
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn uses_square(&self) -> bool {
        self.special
    }

    /// Matrix from `(s, t)` to `(s + d + 1, t − d)` in cohomology bases.
    pub fn differential(&self, s: i64, t: i64) -> Option<&SparseMatrix> {
        self.diffs.get(&(s, t))
    }

    /// Sources `(s, t)` where the composite of two consecutive maps is nonzero.
    pub fn d_squared_defects(&self) -> Result<Vec<(i64, i64)>> {
        let step = self.d as i64;
        let mut bad = Vec::new();
        for (&(s, t), first) in &self.diffs {
            if let Some(second) = self.diffs.get(&(s + step + 1, t - step)) {
                if !second.mul(first)?.is_zero() {
                    bad.push((s, t));
                }
            }
        }
        Ok(bad)
    }

    /// Number of composable pairs checked by [`MasseyComplex::d_squared_defects`].
    pub fn composable_pairs(&self) -> usize {
        let step = self.d as i64;
        self.diffs.keys().filter(|(s, t)| self.diffs.contains_key(&(s + step + 1, t - step))).count()
    }

    pub fn massey_cohomology_dim(&self, s: i64, t: i64) -> Result<usize> {
        if s < self.floor {
            return Ok(0);
        }
        let out = self.diffs.get(&(s, t)).ok_or(Error::Partial(s, t))?;
        let kernel = kernel_basis_sparse(out).len();
        let step = self.d as i64;
        let (ps, pt) = (s - step - 1, t + step);
        let image = if ps < self.floor {
            0
        } else {
            rank(self.diffs.get(&(ps, pt)).ok_or(Error::Partial(s, t))?)
        };
        Ok(kernel - image)
    }
}

#[cfg(test)]
mod tests;
