use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::monomial::{EvalPoint, Monomial};
use crate::error::{Error, Result};

/// `prefactor * prod (1 - m)^e` over non-constant monomials `m`.
///
/// Each binomial key is oriented so that its exponent triple is
/// lexicographically positive; with formal `q, d, K` two expressions are equal
/// exactly when their canonical forms agree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarExpr {
    prefactor: Monomial,
    binomials: BTreeMap<Monomial, i32>,
}

fn lex_positive(m: &Monomial) -> bool {
    (m.eq, m.ed, m.ek) > (0, 0, 0)
}

impl ScalarExpr {
    pub fn zero() -> Self {
        Self::from_monomial(Monomial::zero())
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        ScalarExpr { prefactor: m, binomials: BTreeMap::new() }
    }

    pub fn int(c: i64) -> Self {
        Self::from_monomial(Monomial::int(c))
    }

    /// The difference `a - b`.
    pub fn binomial(a: Monomial, b: Monomial) -> Self {
        if a.is_zero() {
            return Self::from_monomial(-b);
        }
        if b.is_zero() {
            return Self::from_monomial(a);
        }
        // a - b = a (1 - b/a)
        let ratio = b * a.inv().expect("nonzero");
        let mut out = Self::from_monomial(a);
        out.mul_one_minus(ratio, 1);
        out
    }

    /// Multiplies in `(1 - m)^e`.
    fn mul_one_minus(&mut self, m: Monomial, e: i32) {
        if e == 0 || self.is_zero() {
            return;
        }
        if m.is_zero() {
            return;
        }
        if m.is_constant() {
            let c = Rational64::one() - m.coeff;
            if c.is_zero() {
                if e > 0 {
                    *self = Self::zero();
                    return;
                }
                panic!("division by zero constant binomial");
            }
            self.prefactor = self.prefactor * Monomial::constant(c).pow(e);
            return;
        }
        let (key, extra) = if lex_positive(&m) {
            (m, Monomial::one())
        } else {
            // 1 - m = -m (1 - 1/m)
            (m.inv().expect("nonzero"), -m)
        };
        self.prefactor = self.prefactor * extra.pow(e);
        let entry = self.binomials.entry(key).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.binomials.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.prefactor.is_one() && self.binomials.is_empty()
    }

    pub fn prefactor(&self) -> Monomial {
        self.prefactor
    }

    pub fn binomials(&self) -> impl Iterator<Item = (&Monomial, &i32)> {
        self.binomials.iter()
    }

    /// A monomial when no binomials remain.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.binomials.is_empty() {
            Some(self.prefactor)
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let prefactor = self.prefactor.inv().ok_or(Error::DivisionByZero)?;
        let binomials = self.binomials.iter().map(|(k, e)| (*k, -e)).collect();
        Ok(ScalarExpr { prefactor, binomials })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Self {
        if e == 0 {
            return Self::one();
        }
        if self.is_zero() {
            assert!(e > 0, "negative power of zero");
            return Self::zero();
        }
        let binomials = self.binomials.iter().map(|(k, x)| (*k, x * e)).collect();
        ScalarExpr { prefactor: self.prefactor.pow(e), binomials }
    }

    pub fn neg(&self) -> Self {
        ScalarExpr { prefactor: -self.prefactor, binomials: self.binomials.clone() }
    }

    pub fn scale(&self, m: Monomial) -> Self {
        if m.is_zero() {
            return Self::zero();
        }
        ScalarExpr { prefactor: self.prefactor * m, binomials: self.binomials.clone() }
    }

    /// Value at a numeric point; `None` when a binomial with negative
    /// multiplicity vanishes there.
    pub fn eval(&self, at: &EvalPoint) -> Option<BigRational> {
        let mut acc = self.prefactor.eval(at);
        for (m, &e) in &self.binomials {
            let v = BigRational::one() - m.eval(at);
            if v.is_zero() {
                if e < 0 {
                    return None;
                }
                return Some(BigRational::zero());
            }
            acc *= if e >= 0 { Pow::pow(v, e as u32) } else { Pow::pow(v.recip(), (-e) as u32) };
        }
        Some(acc)
    }

    /// Applies a monomial substitution and renormalizes.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut out = Self::from_monomial(f(&self.prefactor));
        for (m, &e) in &self.binomials {
            out.mul_one_minus(f(m), e);
        }
        out
    }

    pub fn invert_q(&self) -> Self {
        self.map_monomials(Monomial::invert_q)
    }

    pub fn set_k_to_q(&self) -> Self {
        self.map_monomials(Monomial::set_k_to_q)
    }

    /// Substitutes `K -> q^n`; a binomial that becomes `1 - 1` with a
    /// negative exponent is a pole.
    pub fn specialize_k(&self, n: i32) -> Result<Self> {
        let mut out = Self::from_monomial(self.prefactor.set_k_to_q_pow(n));
        for (m, &e) in &self.binomials {
            let m = m.set_k_to_q_pow(n);
            if e < 0 && m.is_one() {
                return Err(Error::DivisionByZero);
            }
            out.mul_one_minus(m, e);
        }
        Ok(out)
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;

    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        let mut out = self.clone();
        out.prefactor = out.prefactor * rhs.prefactor;
        for (k, e) in &rhs.binomials {
            let entry = out.binomials.entry(*k).or_insert(0);
            *entry += e;
            if *entry == 0 {
                out.binomials.remove(k);
            }
        }
        out
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;

    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        &self * &rhs
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefactor)?;
        for (m, e) in &self.binomials {
            if *e == 1 {
                write!(f, " (1 - {m})")?;
            } else {
                write!(f, " (1 - {m})^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for ScalarExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("prefactor", &self.prefactor)?;
        let bins: Vec<(Monomial, i32)> = self.binomials.iter().map(|(k, e)| (*k, *e)).collect();
        map.serialize_entry("binomials", &bins)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_orientation_is_canonical() {
        let q = Monomial::q(1);
        // q - q^{-1} and -(q^{-1} - q) agree
        let a = ScalarExpr::binomial(q, q.inv().unwrap());
        let b = ScalarExpr::binomial(q.inv().unwrap(), q).neg();
        assert_eq!(a, b);
        // (q^2 - 1)/(q - q^{-1}) = q
        let c = ScalarExpr::binomial(Monomial::q(2), Monomial::one());
        assert_eq!(c.div(&a).unwrap(), ScalarExpr::from_monomial(q));
    }

    #[test]
    fn constant_binomials_absorb() {
        let z = ScalarExpr::binomial(Monomial::q(1), Monomial::q(1));
        assert!(z.is_zero());
        let two = ScalarExpr::binomial(Monomial::int(3), Monomial::int(1));
        assert_eq!(two, ScalarExpr::int(2));
    }
}
