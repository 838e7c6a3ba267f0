//! Exact scalars: arbitrary-precision rationals and word-sized prime fields.
//!
//! Every computation in this crate is exact. A [`Scalar`] carries its field
//! so that mixed-field arithmetic is caught immediately.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field: the rationals, or a prime field `F_p` with
/// `p < 2^31` so that products fit in a machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl FieldTag {
    pub fn prime(p: u64) -> Result<FieldTag> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(FieldTag::Prime(p))
    }

    pub fn parse(s: &str) -> Result<FieldTag> {
        if s == "Q" {
            return Ok(FieldTag::Rational);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.parse().map_err(|_| Error::BadScalar(s.to_string()))?;
            return FieldTag::prime(p);
        }
        Err(Error::BadScalar(s.to_string()))
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are stored in lowest terms with a
/// positive denominator; prime-field values are reduced to `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rat(_) => FieldTag::Rational,
            Scalar::Fp { modulus, .. } => FieldTag::Prime(*modulus),
        }
    }

    pub fn zero(field: FieldTag) -> Scalar {
        Scalar::from_int(0, field)
    }

    pub fn one(field: FieldTag) -> Scalar {
        Scalar::from_int(1, field)
    }

    pub fn from_int(n: i64, field: FieldTag) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldTag::Prime(p) => {
                let v = n.rem_euclid(p as i64) as u64;
                Scalar::Fp {
                    value: v,
                    modulus: p,
                }
            }
        }
    }

    pub fn from_ratio(num: i64, den: i64, field: FieldTag) -> Scalar {
        assert!(den != 0, "zero denominator");
        match field {
            FieldTag::Rational => {
                Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
            FieldTag::Prime(_) => {
                let n = Scalar::from_int(num, field);
                let d = Scalar::from_int(den, field);
                n.div(&d)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Scalar) {
        assert!(
            self.field() == other.field(),
            "mixed fields: {} vs {}",
            self.field(),
            other.field()
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (
                Scalar::Fp {
                    value: a,
                    modulus: p,
                },
                Scalar::Fp { value: b, .. },
            ) => Scalar::Fp {
                value: (a + b) % p,
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (
                Scalar::Fp {
                    value: a,
                    modulus: p,
                },
                Scalar::Fp { value: b, .. },
            ) => Scalar::Fp {
                value: (a * b) % p,
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: fp_inv(*value, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Reduce a rational scalar modulo `p`; errors when `p` divides the
    /// denominator.
    pub fn to_prime(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Fp { modulus, .. } if *modulus == p => Ok(self.clone()),
            Scalar::Fp { modulus, .. } => Err(Error::FieldMismatch(
                format!("Fp:{modulus}"),
                format!("Fp:{p}"),
            )),
            Scalar::Rat(r) => {
                let pb = BigInt::from(p);
                let den = r.denom().clone() % &pb;
                if den.is_zero() {
                    return Err(Error::BadReduction {
                        p,
                        why: "denominator divisible by p".into(),
                    });
                }
                let num = ((r.numer() % &pb) + &pb) % &pb;
                let den = ((den + &pb) % &pb)
                    .to_u64_digits()
                    .1
                    .first()
                    .copied()
                    .unwrap_or(0);
                let num = num.to_u64_digits().1.first().copied().unwrap_or(0);
                let v = num * fp_inv(den, p) % p;
                Ok(Scalar::Fp {
                    value: v,
                    modulus: p,
                })
            }
        }
    }

    pub fn parse(s: &str, field: FieldTag) -> Result<Scalar> {
        let s = s.trim();
        match field {
            FieldTag::Rational => {
                let parts: Vec<&str> = s.split('/').collect();
                match parts.as_slice() {
                    [n] => {
                        let num: BigInt = n.parse().map_err(|_| Error::BadScalar(s.into()))?;
                        Ok(Scalar::Rat(BigRational::from(num)))
                    }
                    [n, d] => {
                        let num: BigInt = n.parse().map_err(|_| Error::BadScalar(s.into()))?;
                        let den: BigInt = d.parse().map_err(|_| Error::BadScalar(s.into()))?;
                        if den.is_zero() {
                            return Err(Error::BadScalar(s.into()));
                        }
                        Ok(Scalar::Rat(BigRational::new(num, den)))
                    }
                    _ => Err(Error::BadScalar(s.into())),
                }
            }
            FieldTag::Prime(p) => {
                let v: i64 = s.parse().map_err(|_| Error::BadScalar(s.into()))?;
                Ok(Scalar::Fp {
                    value: v.rem_euclid(p as i64) as u64,
                    modulus: p,
                })
            }
        }
    }

    /// Absolute numerator/denominator size, used when sampling pivots.
    pub fn is_negative_rat(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        self.check(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => a.cmp(b),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Inverse mod p by Fermat (p prime, p < 2^31 so products fit in u64).
pub fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "division by zero mod {p}");
    fp_pow(a % p, p - 2, p)
}

pub fn fp_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let a = Scalar::from_ratio(4, -6, FieldTag::Rational);
        assert_eq!(a.to_string(), "-2/3");
        let b = Scalar::parse("6/-9", FieldTag::Rational).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prime_field_reduction() {
        let f = FieldTag::prime(101).unwrap();
        let a = Scalar::from_int(-1, f);
        assert_eq!(a.to_string(), "100");
        assert!(a.mul(&a).is_one());
        assert_eq!(
            Scalar::from_int(7, f).inv().mul(&Scalar::from_int(7, f)),
            Scalar::one(f)
        );
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(FieldTag::prime(91).is_err());
        assert!(FieldTag::prime(1 << 32).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let a = Scalar::from_ratio(1, 3, FieldTag::Rational);
        let r = a.to_prime(101).unwrap();
        assert_eq!(
            r.mul(&Scalar::from_int(3, FieldTag::Prime(101))),
            Scalar::one(FieldTag::Prime(101))
        );
        assert!(Scalar::from_ratio(1, 101, FieldTag::Rational)
            .to_prime(101)
            .is_err());
    }
}
