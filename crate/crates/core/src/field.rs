//! Exact scalars over ℚ and prime fields 𝔽_p.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    /// 𝔽_p for a machine-word prime p.
    Prime(u64),
}

impl FieldSpec {
    /// 𝔽_p, checking that `p` is prime.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(self, 1)
    }

    /// `(-1)^e`.
    pub fn sign(self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            -self.one()
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms (the `num-rational`
/// invariant), residues in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(field: FieldSpec, n: i64) -> Scalar {
        match field {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Prime {
                value: (n as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`. Over 𝔽_p a fraction means `a·b⁻¹`.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar(text.to_string());
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (text, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match field {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let reduce = |x: &BigInt| {
                    let m = BigInt::from(p);
                    (((x % &m) + &m) % &m).to_u64().unwrap()
                };
                let a = Scalar::Prime { value: reduce(&num), p };
                let b = Scalar::Prime { value: reduce(&den), p };
                let inv = b.inv().ok_or_else(bad)?;
                Ok(a * inv)
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    /// Integer view for residues and integral rationals (used by serializers).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) if r.is_integer() => r.to_integer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Prime { value, .. } => i64::try_from(*value).ok(),
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalars from different fields");
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: mul_mod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_and_primality() {
        assert_eq!(FieldSpec::Rational.characteristic(), 0);
        assert_eq!(FieldSpec::prime(3).unwrap().characteristic(), 3);
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
    }

    #[test]
    fn rational_canonical_form() {
        let q = FieldSpec::Rational;
        let x = Scalar::parse(q, "6/-4").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(Scalar::parse(q, "4/2").unwrap().to_string(), "2");
        assert!(Scalar::parse(q, "1/0").is_err());
        assert!(Scalar::parse(q, "x").is_err());
    }

    #[test]
    fn prime_arithmetic() {
        let f = FieldSpec::Prime(7);
        let a = Scalar::from_i64(f, -1);
        assert_eq!(a.to_string(), "6");
        assert_eq!((&a * &a).to_string(), "1");
        assert_eq!(Scalar::parse(f, "1/3").unwrap().to_string(), "5");
        assert!(Scalar::from_i64(f, 14).is_zero());
        let two = Scalar::from_i64(FieldSpec::Prime(2), 3);
        assert!((&two + &two).is_zero());
    }

    #[test]
    fn sign_in_char_two_is_one() {
        let f = FieldSpec::Prime(2);
        assert!(f.sign(1).is_one());
        assert_eq!(FieldSpec::Rational.sign(3), -FieldSpec::Rational.one());
    }

    proptest::proptest! {
        #[test]
        fn rational_print_parse_round_trip(a in -1000i64..1000, b in 1i64..1000) {
            let q = FieldSpec::Rational;
            let x = Scalar::parse(q, &format!("{a}/{b}")).unwrap();
            let y = Scalar::parse(q, &x.to_string()).unwrap();
            proptest::prop_assert_eq!(x, y);
        }

        #[test]
        fn prime_inverse(a in 1u64..10_006) {
            let f = FieldSpec::Prime(10_007);
            let x = Scalar::from_i64(f, a as i64);
            proptest::prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }
}
