//! Exact scalars over the rationals or a prime field.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Checked constructor for `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { value: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// `(-1)^k` as a scalar.
    pub fn sign(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    pub fn zeros(self, n: usize) -> Vec<Scalar> {
        vec![self.zero(); n]
    }

    /// Parses the textual form used by the file formats: `"p/q"` or `"p"`
    /// over the rationals, a (possibly negative) integer over `F_p`.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            Field::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(Scalar::Q(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let n = BigInt::from_str(s)
                    .map_err(|_| Error::Parse(format!("bad F_{p} element `{s}`")))?;
                let r = ((n % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Ok(Scalar::Fp {
                    value: r.to_u64().unwrap_or(0),
                    p,
                })
            }
        }
    }

    /// `"Q"` or `"Fp:<p>"`.
    pub fn tag(self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("Fp:{p}"),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Field> {
        let tag = tag.trim();
        if tag == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = tag.strip_prefix("Fp:") {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad field tag `{tag}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("bad field tag `{tag}`")))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// An exact field element. Arithmetic between elements of different fields
/// panics; every public constructor of higher-level objects checks fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: pow_mod(*value, *p as u64 - 2, *p as u64),
                p: *p,
            },
        })
    }

    /// Canonical text: `"p/q"` in lowest terms (`"p"` when integral) for
    /// rationals, the residue in `[0, p)` for `F_p`.
    pub fn to_canonical(&self) -> String {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { value, .. } => value.to_string(),
        }
    }

    /// Serializes into JSON the way the file formats expect it.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Q(_) => serde_json::Value::String(self.to_canonical()),
            Scalar::Fp { value, .. } => serde_json::Value::from(*value),
        }
    }

    fn check(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!("field mismatch: {} vs {}", self.field(), other.field());
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: (a + b) % *p as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: (a + *p as u64 - b) % *p as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: a * b % *p as u64,
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
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: (*p as u64 - value) % *p as u64,
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

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                *a = (*a + b) % *p as u64
            }
            _ => panic!("field mismatch in +="),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a -= b,
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                *a = (*a + *p as u64 - b) % *p as u64
            }
            _ => panic!("field mismatch in -="),
        }
    }
}

impl Scalar {
    /// `self += a * b`, the inner loop of every product.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (&mut *self, a, b) {
            (Scalar::Fp { value, p }, Scalar::Fp { value: x, .. }, Scalar::Fp { value: y, .. }) => {
                *value = (*value + x * y) % *p as u64
            }
            (Scalar::Q(s), Scalar::Q(x), Scalar::Q(y)) => {
                if !x.is_zero() && !y.is_zero() {
                    *s += x * y
                }
            }
            _ => panic!("field mismatch in add_mul"),
        }
    }

    /// Absolute size of a rational (numerator bits plus denominator bits);
    /// zero for prime-field elements. Used only for diagnostics.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Q(q) => q.numer().abs().bits() + q.denom().bits(),
            Scalar::Fp { .. } => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(Field::prime(101).is_ok());
        assert!(Field::prime(100).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2147483647).is_ok());
        assert!(Field::prime(4294967291).is_err());
    }

    #[test]
    fn fp_inverse() {
        let f = Field::Prime(101);
        for n in 1..101 {
            let a = f.from_i64(n);
            assert!((&a * &a.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_text_round_trip() {
        let f = Field::Rational;
        let a = f.parse_scalar("-6/4").unwrap();
        assert_eq!(a.to_canonical(), "-3/2");
        assert_eq!(f.parse_scalar("7").unwrap().to_canonical(), "7");
        assert!(f.parse_scalar("1/0").is_err());
    }

    #[test]
    fn fp_parse_negative() {
        let f = Field::Prime(5);
        assert_eq!(f.parse_scalar("-1").unwrap(), f.from_i64(4));
    }

    #[test]
    fn tags() {
        assert_eq!(Field::from_tag("Fp:7").unwrap(), Field::Prime(7));
        assert_eq!(Field::from_tag("Q").unwrap(), Field::Rational);
        assert!(Field::from_tag("Fp:8").is_err());
    }
}
