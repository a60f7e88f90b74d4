//! Exact scalars in the Gaussian rationals Q(i).
//!
//! Every scalar is a pair of arbitrary-precision rationals `re + im*i`.
//! A scalar with `im = 0` is rational; conjugation is entry-wise negation
//! of the imaginary part. [`num::BigRational`] keeps fractions reduced with
//! positive denominators, so equality is representation equality.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An element of Q(i), stored exactly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// Builds `p/q`. Panics if `q = 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar { re: BigRational::new(BigInt::from(p), BigInt::from(q)), im: BigRational::zero() }
    }

    /// Builds `a + b*i` from integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(a)),
            im: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True iff the scalar lies in Q.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|^2 = z * conj(z), a nonnegative rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        let n = self.norm_sq();
        Scalar { re: &self.re / &n, im: -&self.im / &n }
    }

    /// i^k for any integer k (period 4).
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => -Scalar::one(),
            _ => -Scalar::i(),
        }
    }

    /// Sign of a real scalar: -1, 0, or 1. Panics on non-real input.
    pub fn real_sign(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real scalar");
        if self.re.is_zero() {
            0
        } else if self.re.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = (&*self).mul(rhs);
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs.inv())
    }
}

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(BigRational::new(p, q))
    } else {
        let p = BigInt::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(BigRational::from_integer(p))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_rational(&self.im))
        } else if self.im.is_positive() {
            write!(f, "{}+{}i", fmt_rational(&self.re), fmt_rational(&self.im))
        } else {
            write!(f, "{}{}i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Wire format: rationals are strings "p/q" (or "p" when q = 1, the canonical
// form); Gaussian scalars are {"re":"p/q","im":"p/q"}.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_real() {
            serializer.serialize_str(&fmt_rational(&self.re))
        } else {
            let mut s = serializer.serialize_struct("Scalar", 2)?;
            s.serialize_field("re", &fmt_rational(&self.re))?;
            s.serialize_field("im", &fmt_rational(&self.im))?;
            s.end()
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(String),
            Complex { re: String, im: String },
        }
        match Repr::deserialize(deserializer)? {
            Repr::Real(s) => Ok(Scalar::from_rational(parse_rational(&s).map_err(de::Error::custom)?)),
            Repr::Complex { re, im } => Ok(Scalar {
                re: parse_rational(&re).map_err(de::Error::custom)?,
                im: parse_rational(&im).map_err(de::Error::custom)?,
            }),
        }
    }
}

impl FromStr for Scalar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(Scalar::from_rational(parse_rational(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(p: i64, q: i64) -> Scalar {
        Scalar::from_ratio(p, q)
    }

    #[test]
    fn canonical_form_reduced_positive_denominator() {
        let x = sc(4, -6);
        assert_eq!(x, sc(-2, 3));
        assert_eq!(x.to_string(), "-2/3");
        assert_eq!(sc(6, 3).to_string(), "2");
    }

    #[test]
    fn conjugation_involution() {
        let z = Scalar::gaussian(3, -5);
        assert_eq!(z.conj().conj(), z);
        assert!(sc(7, 2).conj() == sc(7, 2));
        assert!(z.conj() != z);
    }

    #[test]
    fn field_operations() {
        let z = Scalar::gaussian(1, 2);
        let w = Scalar::gaussian(3, -1);
        assert_eq!(z.clone() * w.clone(), Scalar::gaussian(5, 5));
        assert_eq!(z.clone() / z.clone(), Scalar::one());
        assert_eq!((&z * &z.conj()).re, z.norm_sq());
        assert_eq!(Scalar::i() * Scalar::i(), -Scalar::one());
    }

    #[test]
    fn i_pow_cycle() {
        assert_eq!(Scalar::i_pow(0), Scalar::one());
        assert_eq!(Scalar::i_pow(2), -Scalar::one());
        assert_eq!(Scalar::i_pow(-1), -Scalar::i());
        assert_eq!(Scalar::i_pow(-2), -Scalar::one());
        assert_eq!(Scalar::i_pow(5), Scalar::i());
    }

    #[test]
    fn serialization_round_trip() {
        let real = sc(-7, 3);
        let json = serde_json::to_string(&real).unwrap();
        assert_eq!(json, "\"-7/3\"");
        assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), real);

        let z = Scalar { re: sc(1, 2).re, im: sc(-3, 1).re };
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"re":"1/2","im":"-3"}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), z);

        // integers parse without a denominator and keep canonical form
        assert_eq!(serde_json::from_str::<Scalar>("\"5\"").unwrap(), sc(5, 1));
    }

    proptest! {
        #[test]
        fn prop_field_axioms(a in -20i64..20, b in -20i64..20, c in 1i64..9, d in -20i64..20, e in -20i64..20) {
            let z = Scalar { re: BigRational::new(BigInt::from(a), BigInt::from(c)), im: BigRational::new(BigInt::from(b), BigInt::from(c)) };
            let w = Scalar::gaussian(d, e);
            // conj is a ring homomorphism
            prop_assert_eq!((&z * &w).conj(), &z.conj() * &w.conj());
            prop_assert_eq!((&z + &w).conj(), &z.conj() + &w.conj());
            if !z.is_zero() {
                prop_assert_eq!(&(&z * &w) / &z, w);
            }
        }
    }
}
