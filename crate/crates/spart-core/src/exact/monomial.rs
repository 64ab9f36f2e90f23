use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `coeff * q^{eq/2} d^{ed/2} K^{ek/2}`.
///
/// Exponents are stored doubled. The derived order compares exponents first,
/// so it is also the order used to normalize binomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    pub eq: i32,
    pub ed: i32,
    pub ek: i32,
    pub coeff: Rational64,
}

/// A point at which `q^{1/2}`, `d^{1/2}`, `K^{1/2}` are given rational values.
#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub q_half: BigRational,
    pub d_half: BigRational,
    pub k_half: BigRational,
}

impl Monomial {
    pub fn new(coeff: Rational64, eq: i32, ed: i32, ek: i32) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Monomial { eq, ed, ek, coeff }
        }
    }

    pub fn zero() -> Self {
        Monomial { eq: 0, ed: 0, ek: 0, coeff: Rational64::zero() }
    }

    pub fn one() -> Self {
        Self::constant(Rational64::one())
    }

    pub fn constant(c: Rational64) -> Self {
        Self::new(c, 0, 0, 0)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational64::from_integer(c))
    }

    /// `q^{n/2}`.
    pub fn q_half(n: i32) -> Self {
        Monomial { eq: n, ..Self::one() }
    }

    /// `q^n`.
    pub fn q(n: i32) -> Self {
        Self::q_half(2 * n)
    }

    /// `d^{n/2}`.
    pub fn d_half(n: i32) -> Self {
        Monomial { ed: n, ..Self::one() }
    }

    /// `K^{n/2}`.
    pub fn k_half(n: i32) -> Self {
        Monomial { ek: n, ..Self::one() }
    }

    /// `K^n`.
    pub fn k(n: i32) -> Self {
        Self::k_half(2 * n)
    }

    /// `q1^{n/2}` with `q1 = d q^{-1}`.
    pub fn q1_half(n: i32) -> Self {
        Monomial { eq: -n, ed: n, ..Self::one() }
    }

    pub fn q1(n: i64) -> Self {
        Self::q1_half(2 * n as i32)
    }

    /// `q2 = q^2`.
    pub fn q2(n: i64) -> Self {
        Self::q(2 * n as i32)
    }

    /// `q3^{n/2}` with `q3 = d^{-1} q^{-1}`.
    pub fn q3_half(n: i32) -> Self {
        Monomial { eq: -n, ed: -n, ..Self::one() }
    }

    pub fn q3(n: i64) -> Self {
        Self::q3_half(2 * n as i32)
    }

    /// `d^n`.
    pub fn d(n: i32) -> Self {
        Self::d_half(2 * n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// True when all exponents vanish.
    pub fn is_constant(&self) -> bool {
        self.eq == 0 && self.ed == 0 && self.ek == 0
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.coeff.is_one()
    }

    /// The monomial with coefficient 1 and the same exponents.
    pub fn unit_part(&self) -> Self {
        Monomial { coeff: Rational64::one(), ..*self }
    }

    pub fn exponents(&self) -> (i32, i32, i32) {
        (self.eq, self.ed, self.ek)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Monomial { eq: -self.eq, ed: -self.ed, ek: -self.ek, coeff: self.coeff.recip() })
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            Monomial {
                eq: self.eq * e,
                ed: self.ed * e,
                ek: self.ek * e,
                coeff: Pow::pow(self.coeff, e as u32),
            }
        } else {
            self.inv().expect("negative power of zero").pow(-e)
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|o| *self * o)
    }

    /// Substitutes `q -> q^{-1}` with `d`, `K` fixed.
    pub fn invert_q(&self) -> Self {
        Monomial { eq: -self.eq, ..*self }
    }

    /// Substitutes `K -> q`.
    pub fn set_k_to_q(&self) -> Self {
        Monomial { eq: self.eq + self.ek, ek: 0, ..*self }
    }

    /// Substitutes `K -> q^n`.
    pub fn set_k_to_q_pow(&self, n: i32) -> Self {
        Monomial { eq: self.eq + n * self.ek, ek: 0, ..*self }
    }

    pub fn eval(&self, at: &EvalPoint) -> BigRational {
        let to_big = |r: Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        let pw = |b: &BigRational, e: i32| -> BigRational {
            if e >= 0 {
                Pow::pow(b, e as u32)
            } else {
                Pow::pow(b.recip(), (-e) as u32)
            }
        };
        to_big(self.coeff) * pw(&at.q_half, self.eq) * pw(&at.d_half, self.ed) * pw(&at.k_half, self.ek)
    }

    fn fmt_exp(f: &mut fmt::Formatter<'_>, sym: &str, doubled: i32, first: &mut bool) -> fmt::Result {
        if doubled == 0 {
            return Ok(());
        }
        if !*first {
            f.write_str(" ")?;
        }
        *first = false;
        if doubled == 2 {
            write!(f, "{sym}")
        } else if doubled % 2 == 0 {
            write!(f, "{sym}^{}", doubled / 2)
        } else {
            write!(f, "{sym}^({}/2)", doubled)
        }
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.coeff * rhs.coeff, self.eq + rhs.eq, self.ed + rhs.ed, self.ek + rhs.ek)
    }
}

impl Neg for Monomial {
    type Output = Monomial;

    fn neg(self) -> Monomial {
        Monomial { coeff: -self.coeff, ..self }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let c = self.coeff;
        if self.is_constant() {
            return write!(f, "{c}");
        }
        if c == -Rational64::one() {
            f.write_str("-")?;
        } else if !c.is_one() {
            if c.is_negative() || !c.is_integer() {
                write!(f, "({c})")?;
            } else {
                write!(f, "{c}")?;
            }
            first = false;
        }
        Self::fmt_exp(f, "q", self.eq, &mut first)?;
        Self::fmt_exp(f, "d", self.ed, &mut first)?;
        Self::fmt_exp(f, "K", self.ek, &mut first)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("c", &format!("{}/{}", self.coeff.numer(), self.coeff.denom()))?;
        map.serialize_entry("q", &self.eq)?;
        map.serialize_entry("d", &self.ed)?;
        map.serialize_entry("K", &self.ek)?;
        map.end()
    }
}

#[derive(Deserialize)]
struct RawMonomial {
    c: String,
    q: i32,
    d: i32,
    #[serde(rename = "K")]
    k: i32,
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMonomial::deserialize(deserializer)?;
        let coeff: Rational64 = raw.c.parse().map_err(serde::de::Error::custom)?;
        Ok(Monomial::new(coeff, raw.q, raw.d, raw.k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_relation() {
        let q123 = Monomial::q1(1) * Monomial::q2(1) * Monomial::q3(1);
        assert!(q123.is_one());
        assert_eq!(Monomial::q1_half(1).pow(2), Monomial::q1(1));
    }

    #[test]
    fn zero_is_canonical() {
        let z = Monomial::new(Rational64::zero(), 3, 1, 2);
        assert_eq!(z, Monomial::zero());
        assert_eq!(Monomial::q(3) * Monomial::zero(), Monomial::zero());
    }

    #[test]
    fn json_round_trip() {
        let m = Monomial::new(Rational64::new(-3, 2), 3, -1, 2);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"c":"-3/2","q":3,"d":-1,"K":2}"#);
        let back: Monomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::q1(1).to_string(), "q^-1 d");
        assert_eq!((-Monomial::q_half(1)).to_string(), "-q^(1/2)");
        assert_eq!(Monomial::int(-2).to_string(), "-2");
    }
}
