//! Small algebras and bimodules used by tests, the acceptance suite and the CLI examples.

use crate::algebra::{Bimodule, GradedAlgebra};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::graded::GradedSpace;

/// Exterior algebra on one generator: `e0` (unit, degree 0), `e1` (degree 1), `e1² = 0`.
pub fn exterior(field: FieldSpec) -> GradedAlgebra {
    let sp = GradedSpace::from_pairs(field, &[("e0", 0), ("e1", 1)]).unwrap();
    GradedAlgebra::from_table(sp, &[("e0", "e0", "e0", 1), ("e0", "e1", "e1", 1), ("e1", "e0", "e1", 1)]).unwrap()
}

/// Dual numbers with the nilpotent generator in degree `deg`: `u` (unit), `x`, `x² = 0`.
pub fn dual_numbers(field: FieldSpec, deg: i64) -> GradedAlgebra {
    let sp = GradedSpace::from_pairs(field, &[("u", 0), ("x", deg)]).unwrap();
    GradedAlgebra::from_table(sp, &[("u", "u", "u", 1), ("u", "x", "x", 1), ("x", "u", "x", 1)]).unwrap()
}

/// The ground field as a one-dimensional algebra.
pub fn ground(field: FieldSpec) -> GradedAlgebra {
    let sp = GradedSpace::from_pairs(field, &[("1", 0)]).unwrap();
    GradedAlgebra::from_table(sp, &[("1", "1", "1", 1)]).unwrap()
}

/// The zero algebra.
pub fn zero_algebra(field: FieldSpec) -> GradedAlgebra {
    GradedAlgebra::from_table(GradedSpace::zero(field), &[]).unwrap()
}

/// Path algebra of `1 → 2` with the arrow in degree `deg`: idempotents `e1`, `e2`
/// and `a` with `e1·a = a = a·e2`. Not commutative.
pub fn path_algebra(field: FieldSpec, deg: i64) -> GradedAlgebra {
    let sp = GradedSpace::from_pairs(field, &[("e1", 0), ("e2", 0), ("a", deg)]).unwrap();
    GradedAlgebra::from_table(
        sp,
        &[("e1", "e1", "e1", 1), ("e2", "e2", "e2", 1), ("e1", "a", "a", 1), ("a", "e2", "a", 1)],
    )
    .unwrap()
}

/// `k[x]/(x^n)` with `|x| = deg`; basis `1, x, x2, …`.
pub fn truncated_polynomial(field: FieldSpec, n: usize, deg: i64) -> GradedAlgebra {
    assert!(n >= 1);
    let label = |i: usize| match i {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x{i}"),
    };
    let basis: Vec<(String, i64)> = (0..n).map(|i| (label(i), deg * i as i64)).collect();
    let sp = GradedSpace::new(field, basis).unwrap();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n - i {
            rows.push((label(i), label(j), label(i + j), crate::field::Scalar::from_i64(field, 1)));
        }
    }
    GradedAlgebra::new(sp, &rows).unwrap()
}

/// `A` as a bimodule over itself; module labels carry a trailing `'`.
pub fn diagonal(algebra: &GradedAlgebra) -> Bimodule {
    Bimodule::diagonal(algebra, "'").unwrap()
}

/// The exterior algebra as a bimodule over itself with the left action of
/// `e1` switched off. Both actions stay associative and commute, but the
/// bimodule is not symmetric.
pub fn exterior_half_twisted(field: FieldSpec) -> Result<(GradedAlgebra, Bimodule)> {
    let a = exterior(field);
    let m = GradedSpace::from_pairs(field, &[("e0'", 0), ("e1'", 1)])?;
    let b = Bimodule::from_tables(
        &a,
        m,
        &[("e0", "e0'", "e0'", 1), ("e0", "e1'", "e1'", 1)],
        &[("e0'", "e0", "e0'", 1), ("e1'", "e0", "e1'", 1), ("e0'", "e1", "e1'", 1)],
    )?;
    Ok((a, b))
}

/// The zero bimodule over `A`.
pub fn zero_bimodule(algebra: &GradedAlgebra) -> Bimodule {
    Bimodule::from_tables(algebra, GradedSpace::zero(algebra.field()), &[], &[]).unwrap()
}

/// `𝕜·1 ⊕ I` with `I` spanned by the given labels and all products in `I` zero.
pub fn square_zero(field: FieldSpec, augmentation: &[(&str, i64)]) -> GradedAlgebra {
    let mut basis = vec![("1", 0)];
    basis.extend_from_slice(augmentation);
    let sp = GradedSpace::from_pairs(field, &basis).unwrap();
    let mut rows = vec![("1", "1", "1", 1)];
    for (l, _) in augmentation {
        rows.push(("1", l, l, 1));
        rows.push((l, "1", l, 1));
    }
    GradedAlgebra::from_table(sp, &rows).unwrap()
}
