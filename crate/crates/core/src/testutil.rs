use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldSpec, Scalar};
use crate::operad::{Cochain, OperadHandle, OperadIdeal};

pub const FIELDS: [FieldSpec; 3] = [FieldSpec::Rational, FieldSpec::Prime(2), FieldSpec::Prime(3)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    Scalar::from_i64(field, rng.gen_range(-3..=3))
}

/// Random cochain of the given shape, each basis key kept with probability `density`.
pub fn random_cochain(rng: &mut ChaCha8Rng, h: &OperadHandle, arity: usize, degree: i64, density: f64) -> Cochain {
    let f = h.field();
    let entries: Vec<_> = h
        .basis_keys(arity, degree)
        .into_iter()
        .filter_map(|k| rng.gen_bool(density).then(|| (k, scalar(rng, f))))
        .collect();
    Cochain::new(h, arity, degree, entries).unwrap()
}

pub fn random_ideal_cochain(rng: &mut ChaCha8Rng, ideal: &OperadIdeal, arity: usize, degree: i64, density: f64) -> Cochain {
    let h = ideal.parent();
    let f = h.field();
    let entries: Vec<_> = ideal
        .basis_keys(arity, degree)
        .into_iter()
        .filter_map(|k| rng.gen_bool(density).then(|| (k, scalar(rng, f))))
        .collect();
    Cochain::new(h, arity, degree, entries).unwrap()
}
