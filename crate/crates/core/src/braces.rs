//! Brace operations and the structure they induce on the operad complex:
//! Gerstenhaber bracket, cup product, differential, square and circle product.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::operad::{compose_at, Cochain, OperadIdeal};

/// `x0{x1, …, xn}`: the sum over `1 ≤ i_1 < … < i_n ≤ p0` of
/// `(…(x0 ∘_{i_1} x1) ∘_{i_2 + p_1 − 1} x2 …) ∘_{i_n + Σ_{l<n}(p_l − 1)} xn`.
pub fn brace(x0: &Cochain, args: &[Cochain]) -> Result<Cochain> {
    for a in args {
        if a.handle() != x0.handle() {
            return Err(Error::MismatchedHandles);
        }
    }
    let n = args.len();
    let p0 = x0.arity();
    let degree = x0.degree() + args.iter().map(Cochain::degree).sum::<i64>();
    if n > p0 {
        let arity = (p0 + args.iter().map(Cochain::arity).sum::<usize>()).saturating_sub(n);
        return Ok(Cochain::zero(x0.handle(), arity, degree));
    }
    let arity = p0 + args.iter().map(Cochain::arity).sum::<usize>() - n;
    let mut total = Cochain::zero(x0.handle(), arity, degree);
    if x0.is_zero() || args.iter().any(Cochain::is_zero) {
        return Ok(total);
    }
    let mut positions: Vec<usize> = (1..=n).collect();
    loop {
        let mut acc = x0.clone();
        let mut offset = 0i64;
        for (k, a) in args.iter().enumerate() {
            acc = compose_at(&acc, a, (positions[k] as i64 + offset) as usize)?;
            offset += a.arity() as i64 - 1;
            if acc.is_zero() {
                break;
            }
        }
        if !acc.is_zero() {
            // compositions can stop early on zero; re-shape before adding
            total = total.try_add(&acc)?;
        }
        if !next_combination(&mut positions, p0) {
            break;
        }
    }
    Ok(total)
}

/// Advances an increasing tuple in `1..=max`; false when exhausted.
fn next_combination(c: &mut [usize], max: usize) -> bool {
    let n = c.len();
    if n == 0 {
        return false;
    }
    let mut k = n;
    while k > 0 {
        k -= 1;
        if c[k] < max - (n - 1 - k) {
            c[k] += 1;
            for j in k + 1..n {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `[x, y] = x{y} − (−1)^{|x||y|} y{x}` in shifted total degrees.
pub fn gerstenhaber_bracket(x: &Cochain, y: &Cochain) -> Result<Cochain> {
    let xy = brace(x, std::slice::from_ref(y))?;
    let yx = brace(y, std::slice::from_ref(x))?;
    let s = x.field().sign(x.shifted_degree() * y.shifted_degree());
    xy.try_add(&yx.scale(&-s))
}

pub(crate) fn check_multiplication(m2: &Cochain) -> Result<()> {
    if m2.arity() != 2 || m2.degree() != 0 {
        return Err(Error::NotMultiplication);
    }
    if !brace(m2, std::slice::from_ref(m2))?.is_zero() {
        return Err(Error::NotMultiplication);
    }
    Ok(())
}

/// `x·y = (−1)^{p+q−1} m2{x, y}` for `x` of bidegree `(p, q)`.
pub fn cup(m2: &Cochain, x: &Cochain, y: &Cochain) -> Result<Cochain> {
    check_multiplication(m2)?;
    cup_unchecked(m2, x, y)
}

pub(crate) fn cup_unchecked(m2: &Cochain, x: &Cochain, y: &Cochain) -> Result<Cochain> {
    let s = x.field().sign(x.shifted_degree());
    Ok(brace(m2, &[x.clone(), y.clone()])?.scale(&s))
}

/// `d(x) = [m2, x]`.
pub fn differential(m2: &Cochain, x: &Cochain) -> Result<Cochain> {
    check_multiplication(m2)?;
    gerstenhaber_bracket(m2, x)
}

/// `Sq(x)`: `x{x}` in characteristic 2, `½[x, x]` otherwise (even total degree only).
pub fn gerstenhaber_square(x: &Cochain) -> Result<Cochain> {
    let field = x.field();
    if field.characteristic() == 2 {
        return brace(x, std::slice::from_ref(x));
    }
    let total = x.arity() as i64 + x.degree();
    if total.rem_euclid(2) != 0 {
        return Err(Error::OddSquare(total));
    }
    let half = Scalar::from_i64(field, 2).inv().unwrap();
    Ok(gerstenhaber_bracket(x, x)?.scale(&half))
}

/// `x ∘ y = x{y}` for `x, y` in an associative ideal.
pub fn circle(ideal: &OperadIdeal, x: &Cochain, y: &Cochain) -> Result<Cochain> {
    if !ideal.contains(x) || !ideal.contains(y) {
        return Err(Error::NotInIdeal);
    }
    brace(x, std::slice::from_ref(y))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::field::FieldSpec;
    use crate::fixtures;
    use crate::graded::GradedSpace;
    use crate::operad::{endomorphism_operad, linear_endomorphism_operad, OperadHandle};
    use crate::testutil::{random_cochain, random_ideal_cochain, rng, FIELDS};

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = vec![1, 2];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
    }

    fn exterior_handle(f: FieldSpec) -> (OperadHandle, Cochain) {
        let a = fixtures::exterior(f);
        let h = endomorphism_operad(a.space());
        let m2 = a.multiplication(&h).unwrap();
        (h, m2)
    }

    /// Right-hand side of the brace relation for `x{ys}{zs}`, summed directly.
    fn brace_relation_rhs(x: &Cochain, ys: &[Cochain], zs: &[Cochain]) -> Cochain {
        let (p, q) = (ys.len(), zs.len());
        let arity = x.arity() + ys.iter().map(Cochain::arity).sum::<usize>() + zs.iter().map(Cochain::arity).sum::<usize>();
        let degree = x.degree() + ys.iter().chain(zs).map(Cochain::degree).sum::<i64>();
        let mut total = Cochain::zero(x.handle(), arity.saturating_sub(p + q), degree);
        // bounds[2s], bounds[2s+1] = i_s, j_s
        let mut bounds = vec![0usize; 2 * p];
        loop {
            let monotone = bounds.windows(2).all(|w| w[0] <= w[1]);
            // terms with a brace of too many arguments are zero
            let fits = (0..p).all(|s| bounds[2 * s + 1] - bounds[2 * s].min(bounds[2 * s + 1]) <= ys[s].arity())
                && p + q - (0..p).map(|s| bounds[2 * s + 1].saturating_sub(bounds[2 * s])).sum::<usize>() <= x.arity();
            if monotone && fits {
                let mut args = Vec::new();
                let mut next = 0;
                let mut sign = 0i64;
                for s in 0..p {
                    let (i, j) = (bounds[2 * s], bounds[2 * s + 1]);
                    args.extend_from_slice(&zs[next..i]);
                    args.push(brace(&ys[s], &zs[i..j]).unwrap());
                    next = j;
                    for z in &zs[..i] {
                        sign += ys[s].shifted_degree() * z.shifted_degree();
                    }
                }
                args.extend_from_slice(&zs[next..]);
                let term = brace(x, &args).unwrap().scale(&x.field().sign(sign));
                total = total.try_add(&term).unwrap();
            }
            let mut k = 0;
            while k < bounds.len() {
                bounds[k] += 1;
                if bounds[k] <= q {
                    break;
                }
                bounds[k] = 0;
                k += 1;
            }
            if k == bounds.len() {
                break;
            }
        }
        total
    }

    #[test]
    fn multiplication_identities() {
        for f in FIELDS {
            let (h, m2) = exterior_handle(f);
            assert!(brace(&m2, &[]).unwrap() == m2);
            assert!(brace(&m2, std::slice::from_ref(&m2)).unwrap().is_zero());
            assert!(gerstenhaber_bracket(&m2, &m2).unwrap().is_zero());
            let id = h.unit().unwrap();
            assert_eq!(differential(&m2, &id).unwrap(), m2);
            assert!(differential(&m2, &m2).unwrap().is_zero());
            let c = cup(&m2, &id, &id).unwrap();
            assert_eq!(c.bidegree(), (2, 0));
            assert!(cup(&m2, &Cochain::zero(&h, 1, 0), &id).unwrap().is_zero());
            assert!(gerstenhaber_square(&Cochain::zero(&h, 2, 0)).unwrap().is_zero());
        }
    }

    #[test]
    fn arity_zero_base_gives_zero_brace() {
        let (h, m2) = exterior_handle(FieldSpec::Rational);
        let mut r = rng(1);
        let x = random_cochain(&mut r, &h, 0, 1, 1.0);
        let b = brace(&x, std::slice::from_ref(&m2)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn non_multiplications_are_rejected() {
        let (h, m2) = exterior_handle(FieldSpec::Rational);
        assert!(cup(&m2.scale(&Scalar::from_i64(FieldSpec::Rational, 3)), &m2, &m2).is_ok());
        let mut r = rng(3);
        let junk = random_cochain(&mut r, &h, 2, 0, 1.0);
        if !brace(&junk, std::slice::from_ref(&junk)).unwrap().is_zero() {
            assert!(matches!(differential(&junk, &m2), Err(Error::NotMultiplication)));
        }
        assert!(matches!(cup(&h.unit().unwrap(), &m2, &m2), Err(Error::NotMultiplication)));
    }

    #[test]
    fn odd_square_is_refused() {
        let (_, m2) = exterior_handle(FieldSpec::Rational);
        assert!(gerstenhaber_square(&m2).unwrap().is_zero());
        let (h, _) = exterior_handle(FieldSpec::Rational);
        let mut r = rng(4);
        let odd = random_cochain(&mut r, &h, 2, 1, 1.0);
        assert!(matches!(gerstenhaber_square(&odd), Err(Error::OddSquare(3))));
    }

    fn space(f: FieldSpec) -> GradedSpace {
        GradedSpace::from_pairs(f, &[("v0", 0), ("v1", 1), ("v2", -1)]).unwrap()
    }

    /// Equal, or both zero (zero braces of too many arguments carry no meaningful arity).
    fn same(a: &Cochain, b: &Cochain) -> bool {
        (a.is_zero() && b.is_zero()) || a == b
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn brace_relation_and_jacobi(seed in any::<u64>(), fi in 0usize..3, ar in (0usize..4, 0usize..4, 0usize..4), dg in (-1i64..2, -1i64..2, -1i64..2)) {
            let f = FIELDS[fi];
            let h = endomorphism_operad(&space(f));
            let mut r = rng(seed);
            let x = random_cochain(&mut r, &h, ar.0.max(1), dg.0, 0.3);
            let y = random_cochain(&mut r, &h, ar.1, dg.1, 0.3);
            let z = random_cochain(&mut r, &h, ar.2, dg.2, 0.3);
            // x{y}{z} and x{y, z}{w}-style relations with one and two inner arguments
            let lhs = brace(&brace(&x, std::slice::from_ref(&y)).unwrap(), std::slice::from_ref(&z)).unwrap();
            prop_assert!(same(&lhs, &brace_relation_rhs(&x, std::slice::from_ref(&y), std::slice::from_ref(&z))));
            let lhs2 = brace(&brace(&x, &[y.clone(), z.clone()]).unwrap(), std::slice::from_ref(&y)).unwrap();
            prop_assert!(same(&lhs2, &brace_relation_rhs(&x, &[y.clone(), z.clone()], std::slice::from_ref(&y))));
            let lhs3 = brace(&brace(&x, std::slice::from_ref(&y)).unwrap(), &[z.clone(), x.clone()]).unwrap();
            prop_assert!(same(&lhs3, &brace_relation_rhs(&x, std::slice::from_ref(&y), &[z.clone(), x.clone()])));

            let s = |a: &Cochain, b: &Cochain| f.sign(a.shifted_degree() * b.shifted_degree());
            let xy = gerstenhaber_bracket(&x, &y).unwrap();
            let yx = gerstenhaber_bracket(&y, &x).unwrap();
            prop_assert!(same(&xy, &yx.scale(&-s(&x, &y))));
            let left = gerstenhaber_bracket(&x, &gerstenhaber_bracket(&y, &z).unwrap()).unwrap();
            let r1 = gerstenhaber_bracket(&xy, &z).unwrap();
            let r2 = gerstenhaber_bracket(&y, &gerstenhaber_bracket(&x, &z).unwrap()).unwrap().scale(&s(&x, &y));
            let right = if r1.is_zero() { r2 } else if r2.is_zero() { r1 } else { r1.try_add(&r2).unwrap() };
            prop_assert!(same(&left, &right));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn differential_squares_to_zero(seed in any::<u64>(), fi in 0usize..3, p in 0usize..5, q in -3i64..2) {
            let (h, m2) = exterior_handle(FIELDS[fi]);
            let mut r = rng(seed);
            let x = random_cochain(&mut r, &h, p, q, 0.5);
            let dx = differential(&m2, &x).unwrap();
            prop_assert_eq!(dx.bidegree(), (p + 1, q));
            prop_assert!(differential(&m2, &dx).unwrap().is_zero());
        }

        #[test]
        fn square_matches_self_brace(seed in any::<u64>(), fi in 0usize..3, p in 0usize..4, q in -2i64..3) {
            let f = FIELDS[fi];
            let h = endomorphism_operad(&space(f));
            let mut r = rng(seed);
            let x = random_cochain(&mut r, &h, p, q, 0.4);
            let y = random_cochain(&mut r, &h, p, q, 0.4);
            if f.characteristic() == 2 {
                let lhs = gerstenhaber_square(&x.try_add(&y).unwrap()).unwrap();
                let rhs = gerstenhaber_square(&x).unwrap().try_add(&gerstenhaber_square(&y).unwrap()).unwrap()
                    .try_add(&gerstenhaber_bracket(&x, &y).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
                prop_assert!(gerstenhaber_bracket(&x, &x).unwrap().is_zero());
            } else if (p as i64 + q).rem_euclid(2) == 0 {
                prop_assert_eq!(gerstenhaber_square(&x).unwrap(), brace(&x, std::slice::from_ref(&x)).unwrap());
            } else {
                prop_assert!(gerstenhaber_bracket(&x, &x).unwrap().is_zero());
            }
        }

        #[test]
        fn circle_product_in_module_ideal(seed in any::<u64>(), fi in 0usize..3, ar in (1usize..3, 1usize..3, 1usize..3), dg in (-1i64..2, -1i64..2, -1i64..2)) {
            let f = FIELDS[fi];
            let a = fixtures::exterior(f);
            let m = fixtures::diagonal(&a);
            let (h, ideal) = linear_endomorphism_operad(a.space(), m.space()).unwrap();
            let mut r = rng(seed);
            let x = random_ideal_cochain(&mut r, &ideal, ar.0, dg.0, 0.3);
            let y = random_ideal_cochain(&mut r, &ideal, ar.1, dg.1, 0.3);
            let z = random_ideal_cochain(&mut r, &ideal, ar.2, dg.2, 0.3);
            let xy = circle(&ideal, &x, &y).unwrap();
            prop_assert_eq!(circle(&ideal, &xy, &z).unwrap(), circle(&ideal, &x, &circle(&ideal, &y, &z).unwrap()).unwrap());
            let sign = f.sign(x.shifted_degree() * y.shifted_degree());
            let comm = xy.try_add(&circle(&ideal, &y, &x).unwrap().scale(&-sign)).unwrap();
            prop_assert_eq!(gerstenhaber_bracket(&x, &y).unwrap(), comm);
            let id_m = m.identity(&a, &h).unwrap();
            prop_assert_eq!(circle(&ideal, &id_m, &x).unwrap(), x.clone());
            // ideal cochains multiply to zero
            let m2 = a.multiplication(&h).unwrap().try_add(&m.action(&a, &h).unwrap()).unwrap();
            prop_assert!(cup(&m2, &x, &y).unwrap().is_zero());
        }
    }

    #[test]
    fn circle_refuses_outside_ideal() {
        let f = FieldSpec::Rational;
        let a = fixtures::exterior(f);
        let m = fixtures::diagonal(&a);
        let (h, ideal) = linear_endomorphism_operad(a.space(), m.space()).unwrap();
        let ma = a.multiplication(&h).unwrap();
        let id_m = m.identity(&a, &h).unwrap();
        assert!(matches!(circle(&ideal, &ma, &id_m), Err(Error::NotInIdeal)));
    }
}
