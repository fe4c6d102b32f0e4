//! Scalar arithmetic: a prime field GF(p) or the rationals.
//!
//! Every matrix carries a [`FieldSpec`]; scalars of the two backends are
//! never mixed. GF(p) elements are kept reduced to `0..p`, rationals are
//! arbitrary-precision and stored normalized (lowest terms, positive
//! denominator), so scalar equality is plain structural equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Which field the computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FieldSpec {
    /// GF(p) for a prime p with 2 <= p < 2^31.
    Prime(u64),
    /// The rational numbers with arbitrary-precision arithmetic.
    Rationals,
}

/// A field element. `Fp` values are always reduced modulo the prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u64),
    Rat(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// Extended Euclid; p is prime and a is nonzero mod p.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of zero or non-prime modulus");
    t.rem_euclid(p as i64) as u64
}

impl FieldSpec {
    /// GF(p). Primality is checked by trial division.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn rationals() -> FieldSpec {
        FieldSpec::Rationals
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Fp(0),
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Fp(1),
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
        }
    }

    /// Embed a signed integer.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Fp(n.rem_euclid(*p as i64) as u64),
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::InvalidComplex("zero denominator".into()));
        }
        match self {
            FieldSpec::Prime(_) => {
                let d = self.from_i64(den);
                let inv = self.inv(&d)?;
                Ok(self.mul(&self.from_i64(num), &inv))
            }
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(x) => *x == 0,
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("mixed scalar backends"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + p - y) % p),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => panic!("mixed scalar backends"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            // p < 2^31, so the product fits in u64.
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x * y) % p),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("mixed scalar backends"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Rationals, Scalar::Rat(q)) => Scalar::Rat(-q),
            _ => panic!("mixed scalar backends"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::NotInvertible);
        }
        Ok(match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(mod_inverse(*x, *p)),
            (FieldSpec::Rationals, Scalar::Rat(q)) => Scalar::Rat(q.recip()),
            _ => panic!("mixed scalar backends"),
        })
    }

    /// Signed display form, used by the text printer.
    pub fn scalar_to_string(&self, a: &Scalar) -> String {
        a.to_string()
    }

    /// True if `a` is a rational whose denominator is one, or any GF element.
    pub fn is_integral(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(_) => true,
            Scalar::Rat(q) => q.denom().is_one(),
        }
    }

    /// Reduce a rational scalar into this prime field (numerator times the
    /// inverse of the denominator). The denominator must be nonzero mod p.
    pub fn reduce_scalar(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (FieldSpec::Prime(_), Scalar::Rat(q)) => {
                let to_i64 = |n: &BigInt| -> Result<i64> {
                    i64::try_from(n.clone())
                        .map_err(|_| Error::InvalidComplex("rational entry too large".into()))
                };
                self.from_ratio(to_i64(q.numer())?, to_i64(q.denom())?)
            }
            (FieldSpec::Prime(_), Scalar::Fp(x)) => Ok(self.from_i64(*x as i64)),
            _ => Err(Error::InvalidComplex(
                "reduction targets a prime field".into(),
            )),
        }
    }

    /// Absolute value of the numerator as i128 when small; used by the
    /// cross-backend agreement tests.
    pub fn numer_i128(&self, a: &Scalar) -> Option<i128> {
        match a {
            Scalar::Fp(x) => Some(*x as i128),
            Scalar::Rat(q) => {
                let n = q.numer();
                let abs = n.abs();
                let digits: Vec<u32> = abs.iter_u32_digits().collect();
                if digits.len() > 3 {
                    return None;
                }
                let mut v: i128 = 0;
                for d in digits.iter().rev() {
                    v = (v << 32) | *d as i128;
                }
                Some(if n.is_negative() { -v } else { v })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(101).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err()); // 7 * 13
        assert!(FieldSpec::prime(2147483647).is_ok()); // 2^31 - 1, still in range
        assert!(FieldSpec::prime(4294967291).is_err()); // prime but >= 2^31
    }

    #[test]
    fn gf7_inverse() {
        let f = FieldSpec::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!(f.inv(&three).unwrap(), f.from_i64(5)); // 3 * 5 = 15 = 1 mod 7
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn rational_normalization() {
        let f = FieldSpec::rationals();
        let a = f.from_ratio(2, 4).unwrap();
        let b = f.from_ratio(-1, -2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(f.from_ratio(4, 2).unwrap().to_string(), "2");
    }

    #[test]
    fn negative_embedding() {
        let f = FieldSpec::prime(7).unwrap();
        assert_eq!(f.from_i64(-1), f.from_i64(6));
    }
}
