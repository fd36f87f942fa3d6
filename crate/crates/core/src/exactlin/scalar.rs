use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime for `Field::Prime`.
pub const MAX_PRIME: u32 = 1 << 16;

/// The base field every matrix, algebra and module is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Field {
    /// GF(p) for a prime `p < 2^16`.
    #[serde(rename = "gf")]
    Prime {
        p: u32,
    },
    Rationals,
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "{p} is not a prime below 2^16"
            )));
        }
        Ok(Field::Prime { p })
    }

    /// GF(2), the field most fixtures live over.
    pub const fn gf2() -> Self {
        Field::Prime { p: 2 }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime { p } => *p,
            Field::Rationals => 0,
        }
    }

    /// Number of elements, or `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime { p } => Some(*p as u64),
            Field::Rationals => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime { .. })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Prime { p } => Scalar::Mod {
                value: v.rem_euclid(*p as i64) as u32,
                p: *p,
            },
            Field::Rationals => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    /// Builds `num/den`; for GF(p) the denominator is inverted mod p.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::Parse(format!(
                "denominator {den} vanishes in {self}"
            )));
        }
        Ok(self.from_i64(num) / d)
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let parse = |s: &str| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
        };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (parse(n)?, parse(d)?),
            None => (parse(text)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        match self {
            Field::Rationals => Ok(Scalar::Rat(Box::new(BigRational::new(num, den)))),
            Field::Prime { p } => {
                let reduce = |x: &BigInt| -> i64 {
                    let m = BigInt::from(*p);
                    let r = ((x % &m) + &m) % &m;
                    i64::try_from(r).expect("residue fits")
                };
                let d = self.from_i64(reduce(&den));
                if d.is_zero() {
                    return Err(Error::Parse(format!(
                        "denominator vanishes mod {p} in {text:?}"
                    )));
                }
                Ok(self.from_i64(reduce(&num)) / d)
            }
        }
    }

    /// Every element of a finite field, in the order 0, 1, ..., p-1.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Prime { p } => Some((0..*p as i64).map(|v| self.from_i64(v)).collect()),
            Field::Rationals => None,
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Prime { p }, Scalar::Mod { p: q, .. }) => p == q,
            (Field::Rationals, Scalar::Rat(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime { p } => write!(f, "GF({p})"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`Field`].
///
/// Prime-field elements carry their modulus so arithmetic needs no context;
/// mixing elements of different fields is a logic error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, p: u32 },
    Rat(Box<BigRational>),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime { p: *p },
            Scalar::Rat(_) => Field::Rationals,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: pow_mod(*value, *p - 2, *p),
                p: *p,
            },
            Scalar::Rat(r) => Scalar::Rat(Box::new(r.recip())),
        })
    }

    /// Canonical text form: `"3"` for GF(p), `"a/b"` or `"a"` for rationals.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Integer value of a prime-field element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rat(_) => None,
        }
    }

    /// Height of a rational (max bit length of numerator and denominator).
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Mod { .. } => 0,
            Scalar::Rat(r) => r.numer().bits().max(r.denom().bits()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Mod { .. } => false,
            Scalar::Rat(r) => r.is_negative(),
        }
    }
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let m = p as u64;
    let mut b = base as u64 % m;
    let mut acc = 1u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("arithmetic between {} and {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() + b.as_ref())),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() - b.as_ref())),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() * b.as_ref())),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (*p - *value) % *p,
                p: *p,
            },
            Scalar::Rat(r) => Scalar::Rat(Box::new(-r.as_ref().clone())),
        }
    }
}

macro_rules! forward_owned {
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
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

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
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a - &b, f.from_i64(4));
        assert_eq!(&a * &b, f.from_i64(2));
        assert_eq!(a.inv().unwrap(), f.from_i64(2));
        assert_eq!(-&a, f.from_i64(2));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rejects_composite_and_large_moduli() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(65537).is_err());
        assert!(Field::prime(65521).is_ok());
    }

    #[test]
    fn parses_fractions() {
        let q = Field::Rationals;
        let x = q.parse_scalar("-6/4").unwrap();
        assert_eq!(x.to_text(), "-3/2");
        assert_eq!(q.parse_scalar("7").unwrap().to_text(), "7");
        let f = Field::prime(7).unwrap();
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(4));
        assert_eq!(f.parse_scalar("-1").unwrap(), f.from_i64(6));
        assert!(f.parse_scalar("1/7").is_err());
        assert!(q.parse_scalar("1/0").is_err());
    }
}
