use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::monomial::Monomial;
use super::scalar::ScalarExpr;
use crate::error::{Error, Result};

/// A rational function of `x = u/z` kept as `prefactor * prod (1 - c x)^e`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpectralFunction {
    prefactor: Monomial,
    factors: BTreeMap<Monomial, i32>,
}

impl SpectralFunction {
    pub fn one() -> Self {
        Self::constant(Monomial::one())
    }

    pub fn constant(m: Monomial) -> Self {
        assert!(!m.is_zero(), "spectral functions are nonzero");
        SpectralFunction { prefactor: m, factors: BTreeMap::new() }
    }

    /// `(1 - c x)^e`.
    pub fn one_minus(c: Monomial, e: i32) -> Self {
        let mut out = Self::one();
        out.push(c, e);
        out
    }

    fn push(&mut self, c: Monomial, e: i32) {
        if c.is_zero() || e == 0 {
            return;
        }
        let entry = self.factors.entry(c).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.remove(&c);
        }
    }

    /// `(a - b x)^e` for `a` nonzero.
    pub fn linear(a: Monomial, b: Monomial, e: i32) -> Result<Self> {
        let inv = a.inv().ok_or_else(|| Error::Degenerate(format!("({a}) - ({b}) x")))?;
        let mut out = Self::constant(a.pow(e));
        out.push(b * inv, e);
        Ok(out)
    }

    /// `psi_k(c x) = (q^k - q^{-k} c x) / (1 - c x)`.
    pub fn psi(k: i64, c: Monomial) -> Self {
        if k == 0 {
            return Self::one();
        }
        let k32 = k as i32;
        let mut out = Self::constant(Monomial::q(k32));
        out.push(Monomial::q(-2 * k32) * c, 1);
        out.push(c, -1);
        out
    }

    /// `f^{(r)}(K, c x) = (K - K^{-1} c x) / (q^r - q^{-r} c x)`.
    pub fn f_level(r: i64, c: Monomial) -> Self {
        let r32 = r as i32;
        let mut out = Self::constant(Monomial::k(1) * Monomial::q(-r32));
        out.push(Monomial::k(-2) * c, 1);
        out.push(Monomial::q(-2 * r32) * c, -1);
        out
    }

    pub fn prefactor(&self) -> Monomial {
        self.prefactor
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Monomial, &i32)> {
        self.factors.iter()
    }

    pub fn is_one(&self) -> bool {
        self.prefactor.is_one() && self.factors.is_empty()
    }

    pub fn inv(&self) -> Self {
        SpectralFunction {
            prefactor: self.prefactor.inv().expect("nonzero"),
            factors: self.factors.iter().map(|(c, e)| (*c, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self * &other.inv()
    }

    pub fn pow(&self, e: i32) -> Self {
        SpectralFunction {
            prefactor: self.prefactor.pow(e),
            factors: if e == 0 { BTreeMap::new() } else { self.factors.iter().map(|(c, x)| (*c, x * e)).collect() },
        }
    }

    pub fn scale(&self, m: Monomial) -> Self {
        let mut out = self.clone();
        out.prefactor = out.prefactor * m;
        out
    }

    /// `x -> c x`.
    pub fn rescale(&self, c: Monomial) -> Self {
        SpectralFunction {
            prefactor: self.prefactor,
            factors: self.factors.iter().map(|(m, e)| (*m * c, *e)).collect(),
        }
    }

    /// Poles `x0` (with their multiplicities as positive numbers).
    pub fn poles(&self) -> Vec<(Monomial, i32)> {
        self.factors
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|(c, e)| (c.inv().expect("nonzero"), -e))
            .collect()
    }

    pub fn zeros(&self) -> Vec<(Monomial, i32)> {
        self.factors
            .iter()
            .filter(|(_, e)| **e > 0)
            .map(|(c, e)| (c.inv().expect("nonzero"), *e))
            .collect()
    }

    pub fn value_at_zero(&self) -> Monomial {
        self.prefactor
    }

    pub fn value_at_infinity(&self) -> Result<Monomial> {
        let mut acc = self.prefactor;
        let mut degree = 0;
        for (c, e) in &self.factors {
            acc = acc * (-*c).pow(*e);
            degree += e;
        }
        if degree != 0 {
            return Err(Error::Degenerate(format!("function of degree {degree} at infinity")));
        }
        Ok(acc)
    }

    pub fn degree(&self) -> i32 {
        self.factors.values().sum()
    }

    pub fn evaluate(&self, x0: Monomial) -> Result<ScalarExpr> {
        let mut acc = ScalarExpr::from_monomial(self.prefactor);
        let mut zero = false;
        for (c, &e) in &self.factors {
            let v = ScalarExpr::binomial(Monomial::one(), *c * x0);
            if v.is_zero() {
                if e < 0 {
                    return Err(Error::Pole(x0.to_string()));
                }
                zero = true;
                continue;
            }
            acc = &acc * &v.pow(e);
        }
        Ok(if zero { ScalarExpr::zero() } else { acc })
    }

    /// `lim_{x -> x0} (1 - x/x0) f(x)`; zero when `x0` is not a pole.
    pub fn delta_coefficient(&self, x0: Monomial) -> Result<ScalarExpr> {
        let key = x0.inv().ok_or(Error::DivisionByZero)?;
        match self.factors.get(&key) {
            None => Ok(ScalarExpr::zero()),
            Some(&e) if e >= 0 => Ok(ScalarExpr::zero()),
            Some(&-1) => {
                let mut rest = self.clone();
                rest.factors.remove(&key);
                rest.evaluate(x0)
            }
            Some(_) => Err(Error::NonSimplePole(x0.to_string())),
        }
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut out = Self::constant(f(&self.prefactor));
        for (c, &e) in &self.factors {
            out.push(f(c), e);
        }
        out
    }

    pub fn invert_q(&self) -> Self {
        self.map_monomials(Monomial::invert_q)
    }

    /// Substitutes `K -> q`; factors of the form `(1 - m x)` that collide are merged.
    pub fn set_k_to_q(&self) -> Self {
        self.map_monomials(Monomial::set_k_to_q)
    }

    /// Substitutes `K -> q^n`.
    pub fn specialize_k(&self, n: i32) -> Self {
        self.map_monomials(|m| m.set_k_to_q_pow(n))
    }

    /// Numerator and denominator `(A, B)` pairs for `(A - B x)`.
    pub fn factor_pairs(&self) -> (Vec<(Monomial, Monomial)>, Vec<(Monomial, Monomial)>) {
        let mut num = vec![(self.prefactor, Monomial::zero())];
        let mut den = Vec::new();
        for (c, &e) in &self.factors {
            let target = if e > 0 { &mut num } else { &mut den };
            for _ in 0..e.abs() {
                target.push((Monomial::one(), *c));
            }
        }
        (num, den)
    }
}

impl Mul for &SpectralFunction {
    type Output = SpectralFunction;

    fn mul(self, rhs: &SpectralFunction) -> SpectralFunction {
        let mut out = self.clone();
        out.prefactor = out.prefactor * rhs.prefactor;
        for (c, e) in &rhs.factors {
            out.push(*c, *e);
        }
        out
    }
}

impl Mul for SpectralFunction {
    type Output = SpectralFunction;

    fn mul(self, rhs: SpectralFunction) -> SpectralFunction {
        &self * &rhs
    }
}

impl std::iter::Product for SpectralFunction {
    fn product<I: Iterator<Item = SpectralFunction>>(iter: I) -> Self {
        iter.fold(SpectralFunction::one(), |a, b| &a * &b)
    }
}

impl fmt::Display for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefactor)?;
        for (c, e) in &self.factors {
            let cx = if c.is_one() { "x".to_string() } else { format!("{c} x") };
            if *e == 1 {
                write!(f, " (1 - {cx})")?;
            } else {
                write!(f, " (1 - {cx})^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SpectralFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (num, den) = self.factor_pairs();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("num", &num)?;
        map.serialize_entry("den", &den)?;
        map.end()
    }
}
