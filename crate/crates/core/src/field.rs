//! Exact scalar arithmetic over the rationals and prime fields.
//!
//! Every computation in this crate runs over a [`FieldSpec`], fixed at input
//! time: either `Q` (arbitrary-precision rationals) or `F_p` for a prime `p`.
//! Scalars are immutable values; there is no floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest admissible prime modulus. Products of two residues must fit in u64.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The ambient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    /// The field of rational numbers.
    Rational,
    /// The prime field F_p.
    Prime { p: u64 },
}

/// An exact scalar in some field. The owning context knows which.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} exceeds the supported maximum {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rational
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime { p } => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime { .. } => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime { .. } => Scalar::Fp(1),
        }
    }

    /// The image of the integer `n` in this field.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime { p } => {
                let r = n.rem_euclid(*p as i64);
                Scalar::Fp(r as u64)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime { p }, Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (FieldSpec::Prime { p }, Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x + p - y) % p)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime { p }, Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => {
                if x.is_zero() || y.is_zero() {
                    self.zero()
                } else {
                    Scalar::Rat(x * y)
                }
            }
            (FieldSpec::Prime { p }, Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x * y) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    /// Multiplicative inverse. Panics on zero; callers guard.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rational, Scalar::Rat(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rat(x.recip())
            }
            (FieldSpec::Prime { p }, Scalar::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                // Fermat: x^(p-2) mod p
                let mut base = *x % p;
                let mut exp = p - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar::Fp(acc)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// a + c*b, the inner-loop primitive of row reduction.
    pub fn mul_add(&self, a: &Scalar, c: &Scalar, b: &Scalar) -> Scalar {
        if self.is_zero(c) || self.is_zero(b) {
            return a.clone();
        }
        self.add(a, &self.mul(c, b))
    }

    /// Canonical string form: "n" or "n/d" over Q, the representative
    /// "0".."p-1" over F_p.
    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(x) => x.to_string(),
        }
    }

    /// Parses the format produced by [`FieldSpec::render`]. Over F_p a
    /// fraction "n/d" is accepted and resolved by modular inversion.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::BadScalar(s.to_string());
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num: BigInt = num_str.parse().map_err(|_| bad())?;
        let den: Option<BigInt> = match den_str {
            Some(d) => Some(d.parse().map_err(|_| bad())?),
            None => None,
        };
        match self {
            FieldSpec::Rational => {
                let den = den.unwrap_or_else(BigInt::one);
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rat(BigRational::new(num, den)))
            }
            FieldSpec::Prime { p } => {
                let pb = BigInt::from(*p);
                let red = |n: &BigInt| -> u64 {
                    let r = ((n % &pb) + &pb) % &pb;
                    let (_, digits) = r.to_u64_digits();
                    digits.first().copied().unwrap_or(0)
                };
                let n = red(&num);
                match den {
                    None => Ok(Scalar::Fp(n)),
                    Some(d) => {
                        let d = red(&d);
                        if d == 0 {
                            return Err(bad());
                        }
                        Ok(self.mul(&Scalar::Fp(n), &self.inv(&Scalar::Fp(d))))
                    }
                }
            }
        }
    }

    /// Reduces a rational scalar mod p. Fails if a denominator is divisible
    /// by p (bad reduction); the cross-field consistency suite relies on
    /// picking primes of good reduction.
    pub fn reduce_rational(&self, a: &Scalar, p: u64) -> Option<Scalar> {
        match a {
            Scalar::Rat(r) => {
                let pb = BigInt::from(p);
                let red = |n: &BigInt| -> u64 {
                    let m = ((n % &pb) + &pb) % &pb;
                    let (_, digits) = m.to_u64_digits();
                    digits.first().copied().unwrap_or(0)
                };
                let d = red(r.denom());
                if d == 0 {
                    return None;
                }
                let fp = FieldSpec::Prime { p };
                Some(fp.mul(&Scalar::Fp(red(r.numer())), &fp.inv(&Scalar::Fp(d))))
            }
            Scalar::Fp(_) => None,
        }
    }

    /// Magnitude proxy used only to pick small pivots for readable output;
    /// never affects correctness.
    pub fn pivot_weight(&self, a: &Scalar) -> u64 {
        match a {
            Scalar::Rat(r) => {
                (r.numer().abs().bits() + r.denom().bits()).min(u64::MAX as u64)
            }
            Scalar::Fp(_) => 1,
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
            Scalar::Fp(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(101).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err());
    }

    #[test]
    fn rational_roundtrip() {
        let f = FieldSpec::rationals();
        let a = f.parse("-3/6").unwrap();
        assert_eq!(f.render(&a), "-1/2");
        let b = f.parse("4").unwrap();
        assert_eq!(f.render(&f.mul(&a, &b)), "-2");
    }

    #[test]
    fn fp_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.parse("5").unwrap();
        let b = f.parse("3").unwrap();
        assert_eq!(f.render(&f.mul(&a, &b)), "1");
        assert_eq!(f.render(&f.inv(&b)), "5");
        assert_eq!(f.render(&f.parse("10/3").unwrap()), "1");
    }

    #[test]
    fn good_reduction() {
        let q = FieldSpec::rationals();
        let a = q.parse("1/2").unwrap();
        let r = q.reduce_rational(&a, 101).unwrap();
        let f101 = FieldSpec::prime(101).unwrap();
        assert_eq!(f101.render(&r), "51");
        assert!(q.reduce_rational(&a, 2).is_none());
    }
}
