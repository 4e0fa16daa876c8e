//! Cohomology dimensions of the hom-model windows against the dense bar model.

mod support {
    pub mod bar_oracle;
}

use massey_core::complexes::{assemble_bimodule_complexes, hochschild_complex};
use massey_core::{fixtures, DegreeWindow, FieldSpec};
use support::bar_oracle::{cohomology_dim, dense_mul, BarAlgebra};

const FIELDS: [FieldSpec; 3] = [FieldSpec::Rational, FieldSpec::Prime(2), FieldSpec::Prime(3)];

#[test]
fn oracle_differential_squares_to_zero() {
    for f in FIELDS {
        let a = fixtures::exterior(f);
        let bars = [BarAlgebra::plain(&a), BarAlgebra::square_zero(&a, &fixtures::diagonal(&a))];
        for bar in &bars {
            for p in 0..3 {
                for q in -3..=1 {
                    let d0 = bar.differential(p, q);
                    let d1 = bar.differential(p + 1, q);
                    let prod = dense_mul(&d1, &d0, f);
                    assert!(prod.iter().flatten().all(|x| x.is_zero()), "p={p} q={q} over {f}");
                }
            }
        }
    }
}

#[test]
fn oracle_knows_the_exterior_center() {
    let a = fixtures::exterior(FieldSpec::Rational);
    let bar = BarAlgebra::plain(&a);
    assert_eq!(cohomology_dim(&bar, 0, 0), 1);
    assert_eq!(cohomology_dim(&bar, 1, 0), 1);
}

#[test]
fn hochschild_dims_match_oracle() {
    for f in FIELDS {
        for a in [fixtures::exterior(f), fixtures::path_algebra(f, 1), fixtures::dual_numbers(f, 2)] {
            let bar = BarAlgebra::plain(&a);
            let hc = hochschild_complex(&a, DegreeWindow::new(0, 4, -4, 2).unwrap()).unwrap();
            for p in 0..4 {
                for q in -4..=2 {
                    assert_eq!(
                        hc.cohomology_dim(p, q).unwrap(),
                        cohomology_dim(&bar, p as usize, q),
                        "HH^({p},{q}) over {f}"
                    );
                }
            }
        }
    }
}

#[test]
fn bimodule_dims_match_oracle() {
    for f in FIELDS {
        let a = fixtures::exterior(f);
        let (ta, tm) = fixtures::exterior_half_twisted(f).unwrap();
        for (a, m) in [(a.clone(), fixtures::diagonal(&a)), (ta, tm)] {
            let bar = BarAlgebra::square_zero(&a, &m);
            let cx = assemble_bimodule_complexes(&a, &m, DegreeWindow::new(0, 3, -4, 1).unwrap()).unwrap();
            for p in 0..3 {
                for q in -4..=1 {
                    assert_eq!(
                        cx.bc.cohomology_dim(p, q).unwrap(),
                        cohomology_dim(&bar, p as usize + 1, q),
                        "Ext^({p},{q}) over {f}"
                    );
                }
            }
        }
    }
}
