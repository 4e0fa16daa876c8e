use super::*;
use crate::ainfty::AkAlgebra;
use crate::braces::{brace, differential};
use crate::complexes::{assemble_bimodule_complexes, hochschild_complex};
use crate::field::{FieldSpec, Scalar};
use crate::fixtures;
use crate::linalg::SparseVec;
use crate::obstruction::{extend_loop, Structure};
use crate::testutil::{random_cochain, rng, scalar, FIELDS};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rational;
const F2: FieldSpec = FieldSpec::Prime(2);

fn single(s: &AkAlgebra, ins: &[&str], out: &str) -> Cochain {
    Cochain::from_labels(s.handle(), ins.len(), 2 - ins.len() as i64, &[(ins, out, Scalar::from_i64(s.field(), 1))]).unwrap()
}

/// `𝕜 ⊕ ⟨x, y⟩` in degrees `0, 1` with `m3 = [x, y, x → x]`, a nonzero class with `Sq = 0`.
fn massey_fixture(field: FieldSpec) -> AkAlgebra {
    let a = fixtures::square_zero(field, &[("x", 0), ("y", 1)]);
    let s = AkAlgebra::new(&a, 4).unwrap();
    let m3 = single(&s, &["x", "y", "x"], "x");
    s.with_op(3, m3).unwrap()
}

fn window(p_min: i64, p_max: i64, q_min: i64, q_max: i64) -> DegreeWindow {
    DegreeWindow::new(p_min, p_max, q_min, q_max).unwrap()
}

/// A random cocycle: random cohomology combination plus a random coboundary.
fn random_cocycle(r: &mut ChaCha8Rng, w: &ComplexWindow, p: i64, q: i64) -> Cochain {
    let f = w.field();
    let mut x = Cochain::zero(w.handle(), w.arity_of(p).unwrap(), q);
    for b in w.cohomology_basis(p, q).unwrap() {
        x = x.try_add(&b.scale(&scalar(r, f))).unwrap();
    }
    let c = random_cochain(r, w.handle(), w.arity_of(p - 1).unwrap(), q, 0.6);
    x.try_add(&differential(w.multiplication(), &c).unwrap()).unwrap()
}

#[test]
fn bracket_with_zero_class_is_zero() {
    let s = massey_fixture(Q);
    let w = s.hochschild_window(window(1, 6, -2, 0)).unwrap();
    let zero = w.class_of(&Cochain::zero(s.handle(), 3, -1)).unwrap();
    let mut r = rng(1);
    let x = w.class_of(&random_cocycle(&mut r, &w, 2, -1)).unwrap();
    assert!(bracket_with_class(&zero, &x, &w).unwrap().is_zero());
}

#[test]
fn bracket_with_class_matches_the_cochain_bracket() {
    let s = massey_fixture(Q);
    let w = s.hochschild_window(window(1, 6, -2, 0)).unwrap();
    let c = w.class_of(&s.op(3)).unwrap();
    let mut r = rng(2);
    for _ in 0..5 {
        let x = w.class_of(&random_cocycle(&mut r, &w, 2, -1)).unwrap();
        let out = bracket_with_class(&c, &x, &w).unwrap();
        let direct = gerstenhaber_bracket(&s.op(3), &x.representative).unwrap();
        assert_eq!(out.representative, direct);
        assert_eq!(out.bidegree, (4, -2));
    }
}

#[test]
fn bracket_with_class_is_independent_of_representatives() {
    let mut r = rng(3);
    for f in FIELDS {
        let s = massey_fixture(f);
        let w = s.hochschild_window(window(1, 6, -2, 0)).unwrap();
        let c = w.class_of(&s.op(3)).unwrap();
        let shifted_c = {
            let e = random_cochain(&mut r, s.handle(), 2, -1, 0.6);
            w.class_of(&s.op(3).try_add(&differential(s.m2(), &e).unwrap()).unwrap()).unwrap()
        };
        for _ in 0..20 {
            let x = random_cocycle(&mut r, &w, 2, -1);
            let e = random_cochain(&mut r, s.handle(), 1, -1, 0.6);
            let y = x.try_add(&differential(s.m2(), &e).unwrap()).unwrap();
            let a = bracket_with_class(&c, &w.class_of(&x).unwrap(), &w).unwrap();
            let b = bracket_with_class(&shifted_c, &w.class_of(&y).unwrap(), &w).unwrap();
            assert_eq!(a.coordinates, b.coordinates, "over {f}");
        }
    }
}

#[test]
fn bracket_outside_the_window_is_refused() {
    let s = massey_fixture(Q);
    let w = s.hochschild_window(window(1, 4, -1, 0)).unwrap();
    let c = w.class_of(&s.op(3)).unwrap();
    let x = w.class_of(&Cochain::zero(s.handle(), 3, -1)).unwrap();
    assert_eq!(bracket_with_class(&c, &x, &w).unwrap_err(), Error::OutsideWindow(5, -2));
}

#[test]
fn zero_class_reproduces_base_cohomology() {
    for f in [Q, FieldSpec::Prime(3)] {
        let a = fixtures::exterior(f);
        let base = hochschild_complex(&a, window(0, 6, -3, 1)).unwrap();
        let zero = Cochain::zero(base.handle(), 3, -1);
        let mc = build_massey_complex(&base, &zero).unwrap();
        assert!(!mc.uses_square());
        let mut compared = 0;
        for (s, t) in base.window().bidegrees() {
            if let Ok(dim) = mc.massey_cohomology_dim(s, t) {
                let expect = if s < 2 { 0 } else { base.cohomology_dim(s, t).unwrap() };
                assert_eq!(dim, expect, "({s}, {t}) over {f}");
                compared += 1;
            }
        }
        assert!(compared > 5);
        for m in mc.diffs.values() {
            assert!(m.is_zero());
        }
    }
}

#[test]
fn massey_differential_squares_to_zero() {
    for f in FIELDS {
        let s = massey_fixture(f);
        let base = s.hochschild_window(window(1, 7, -3, 1)).unwrap();
        let mc = build_massey_complex(&base, &s.op(3)).unwrap();
        assert!(mc.composable_pairs() >= 3, "over {f}");
        assert!(mc.d_squared_defects().unwrap().is_empty(), "over {f}");
        assert!(mc.diffs.values().any(|m| !m.is_zero()), "over {f}");
    }
}

#[test]
fn massey_dims_subtract_ranks() {
    let s = massey_fixture(Q);
    let base = s.hochschild_window(window(1, 7, -3, 1)).unwrap();
    let mc = build_massey_complex(&base, &s.op(3)).unwrap();
    let mut nontrivial = 0;
    for (&(src, t), out) in &mc.diffs {
        let into = mc.diffs.get(&(src - 2, t + 1));
        if src - 2 >= mc.floor() && into.is_none() {
            continue;
        }
        let r_out = rank(out);
        let r_in = into.map(rank).unwrap_or(0);
        let dim = mc.massey_cohomology_dim(src, t).unwrap();
        assert_eq!(dim, base.cohomology_dim(src, t).unwrap() - r_out - r_in, "({src}, {t})");
        nontrivial += (r_out > 0) as usize;
        // the single-bidegree path agrees with the assembled complex
        assert_eq!(massey_cohomology_dim_at(&base, &s.op(3), src, t).unwrap(), dim);
    }
    assert!(nontrivial > 0);
}

#[test]
fn square_nonzero_is_refused_with_witness() {
    let a = fixtures::square_zero(Q, &[("x", -1), ("y", 2)]);
    let s = AkAlgebra::new(&a, 4).unwrap();
    let m3 = single(&s, &["x", "x", "y"], "x");
    let base = s.hochschild_window(window(1, 5, -2, 0)).unwrap();
    let sq = gerstenhaber_square(&m3).unwrap();
    assert_eq!(build_massey_complex(&base, &m3).unwrap_err(), Error::SquareNonzero(5, -2, sq.to_string()));
    assert!(massey_cohomology_dim_at(&base, &m3, 3, -1).is_err());
}

#[test]
fn non_cocycles_and_wrong_bidegrees_are_refused() {
    let s = massey_fixture(Q);
    let base = s.hochschild_window(window(1, 5, -2, 0)).unwrap();
    let mut r = rng(4);
    let c = random_cochain(&mut r, s.handle(), 2, -1, 1.0);
    let not_closed = differential(s.m2(), &c).unwrap().try_add(&s.op(3)).unwrap();
    let bump = (0..50)
        .map(|_| random_cochain(&mut r, s.handle(), 3, -1, 0.5))
        .find(|x| !differential(s.m2(), x).unwrap().is_zero())
        .unwrap();
    assert_eq!(build_massey_complex(&base, &not_closed.try_add(&bump).unwrap()).unwrap_err(), Error::NotCocycle);
    assert!(matches!(build_massey_complex(&base, &Cochain::zero(s.handle(), 3, 0)), Err(Error::BadOperation { .. })));
}

#[test]
fn floors_depend_on_the_kind() {
    let a = fixtures::exterior(Q);
    let m = fixtures::diagonal(&a);
    let cx = assemble_bimodule_complexes(&a, &m, window(0, 5, -3, 1)).unwrap();
    let class = Cochain::zero(cx.hce.handle(), 3, -1);
    let bim = build_massey_complex(&cx.bc, &class).unwrap();
    let hh = build_massey_complex(&cx.hce, &class).unwrap();
    assert_eq!(bim.floor(), 1);
    assert_eq!(hh.floor(), 2);
    assert_eq!(bim.massey_cohomology_dim(0, 0).unwrap(), 0);
    assert_eq!(hh.massey_cohomology_dim(1, 0).unwrap(), 0);
    assert_eq!(bim.massey_cohomology_dim(1, 0).unwrap(), cx.bc.cohomology_dim(1, 0).unwrap());
}

#[test]
fn square_map_is_used_only_over_f2_on_non_ideal_kinds() {
    let a = fixtures::exterior(F2);
    let m = fixtures::diagonal(&a);
    let cx = assemble_bimodule_complexes(&a, &m, window(1, 5, -2, 0)).unwrap();
    let class = Cochain::zero(cx.hce.handle(), 3, -1);
    assert!(build_massey_complex(&cx.hce, &class).unwrap().uses_square());
    assert!(!build_massey_complex(&cx.bc, &class).unwrap().uses_square());
    let q = assemble_bimodule_complexes(&fixtures::exterior(Q), &fixtures::diagonal(&fixtures::exterior(Q)), window(1, 5, -2, 0)).unwrap();
    assert!(!build_massey_complex(&q.hce, &Cochain::zero(q.hce.handle(), 3, -1)).unwrap().uses_square());
}

#[test]
fn square_map_over_f2_matches_the_cup_square() {
    let s = massey_fixture(F2);
    let base = s.hochschild_window(window(1, 5, -2, 0)).unwrap();
    let mc = build_massey_complex(&base, &s.op(3)).unwrap();
    let m = mc.differential(2, -1).unwrap();
    for (j, x) in base.cohomology_basis(2, -1).unwrap().iter().enumerate() {
        let img = gerstenhaber_bracket(&s.op(3), x).unwrap().try_add(&cup(s.m2(), x, x).unwrap()).unwrap();
        let expect: SparseVec = base.class_coordinates(&img).unwrap();
        assert_eq!(m.column(j), expect.as_slice());
    }
}

#[test]
fn extendable_structures_pass_the_square_gate() {
    let mut r = rng(5);
    let a = fixtures::truncated_polynomial(Q, 3, -1);
    let seed = AkAlgebra::new(&a, 3).unwrap();
    let m3 = random_cochain(&mut r, seed.handle(), 3, -1, 0.7);
    let out = extend_loop(&Structure::Algebra(seed.with_op(3, m3).unwrap()), 5, 0).unwrap();
    let Structure::Algebra(s) = out.structure else { unreachable!() };
    assert_eq!(s.k(), 5);
    let base = s.hochschild_window(window(1, 5, -2, 0)).unwrap();
    build_massey_complex(&base, &s.op(3)).unwrap();
}

fn random_pair(r: &mut ChaCha8Rng, h: &crate::operad::OperadHandle, arity: usize, degree: i64) -> (Cochain, Cochain) {
    (random_cochain(r, h, arity, degree, 0.5), random_cochain(r, h, arity, degree, 0.5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn f2_square_is_quadratic_with_the_bracket_as_cross_term(seed in any::<u64>(), which in 0usize..2) {
        let mut r = rng(seed);
        let a = [fixtures::exterior(F2), fixtures::square_zero(F2, &[("x", 0), ("y", 1)])][which].clone();
        let h = AkAlgebra::new(&a, 2).unwrap().handle().clone();
        let (x, y) = random_pair(&mut r, &h, 2, -1);
        let lhs = gerstenhaber_square(&x.try_add(&y).unwrap()).unwrap();
        let rhs = gerstenhaber_square(&x).unwrap()
            .try_add(&gerstenhaber_square(&y).unwrap()).unwrap()
            .try_add(&gerstenhaber_bracket(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracketing_twice_is_bracketing_with_the_square(seed in any::<u64>(), field in 0usize..3, p in 1usize..=3, q in -2i64..=0) {
        let mut r = rng(seed);
        let f = FIELDS[field];
        let a = fixtures::square_zero(f, &[("x", 0), ("y", 1)]);
        let h = AkAlgebra::new(&a, 2).unwrap().handle().clone();
        let c = random_cochain(&mut r, &h, 3, -1, 0.5);
        let x = random_cochain(&mut r, &h, p, q, 0.5);
        let lhs = gerstenhaber_bracket(&c, &gerstenhaber_bracket(&c, &x).unwrap()).unwrap();
        let sq = brace(&c, std::slice::from_ref(&c)).unwrap();
        prop_assert_eq!(lhs, gerstenhaber_bracket(&sq, &x).unwrap());
    }
}
