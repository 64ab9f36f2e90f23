use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// A truncated power series in `z_0..z_{N-1}` with integer coefficients.
///
/// Terms of total degree above `trunc` are dropped on construction and under
/// multiplication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharSeries {
    width: usize,
    trunc: u32,
    coeffs: BTreeMap<Vec<u32>, i64>,
}

impl CharSeries {
    pub fn zero(width: usize, trunc: u32) -> Self {
        CharSeries { width, trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(width: usize, trunc: u32) -> Self {
        let mut s = Self::zero(width, trunc);
        s.add_term(vec![0; width], 1);
        s
    }

    /// The monomial `z^e` with coefficient `c`.
    pub fn monomial(width: usize, trunc: u32, e: Vec<u32>, c: i64) -> Self {
        let mut s = Self::zero(width, trunc);
        s.add_term(e, c);
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> i64 {
        self.coeffs.get(e).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: i64) {
        assert_eq!(e.len(), self.width, "exponent width");
        if c == 0 || e.iter().sum::<u32>() > self.trunc {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &CharSeries) -> CharSeries {
        assert_eq!(self.width, other.width);
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.coeffs.retain(|e, _| e.iter().sum::<u32>() <= out.trunc);
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &CharSeries) {
        *self = self.add(other);
    }

    pub fn mul(&self, other: &CharSeries) -> CharSeries {
        assert_eq!(self.width, other.width);
        let trunc = self.trunc.min(other.trunc);
        let mut out = CharSeries::zero(self.width, trunc);
        for (a, ca) in &self.coeffs {
            let da: u32 = a.iter().sum();
            for (b, cb) in &other.coeffs {
                if da + b.iter().sum::<u32>() > trunc {
                    continue;
                }
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> CharSeries {
        let mut out = CharSeries::zero(self.width, self.trunc);
        for (e, v) in &self.coeffs {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// `1 / (1 - z^e)` truncated.
    pub fn geometric(width: usize, trunc: u32, e: &[u32]) -> CharSeries {
        let deg: u32 = e.iter().sum();
        assert!(deg > 0, "geometric series of a constant");
        let mut out = CharSeries::zero(width, trunc);
        let mut k = 0u32;
        while k * deg <= trunc {
            out.add_term(e.iter().map(|x| x * k).collect(), 1);
            k += 1;
        }
        out
    }

    /// `(p)_a^{-1} = prod_{s=1}^a 1/(1 - p^s)` with `p = z_0 ... z_{N-1}`.
    pub fn inverse_pochhammer(width: usize, a: u32, trunc: u32) -> CharSeries {
        let mut out = CharSeries::one(width, trunc);
        for s in 1..=a {
            if s as usize * width > trunc as usize {
                break;
            }
            out = out.mul(&CharSeries::geometric(width, trunc, &vec![s; width]));
        }
        out
    }

    /// `z_i = q`: the coefficient list up to `q^trunc`.
    pub fn principal(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.trunc as usize + 1];
        for (e, c) in &self.coeffs {
            out[e.iter().sum::<u32>() as usize] += c;
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| *c > 0)
    }
}

/// Truncated expansion of `1/(p)_a`; see [`CharSeries::inverse_pochhammer`].
pub fn series_expand_inverse_pochhammer(a: u32, p_degree: usize, trunc: u32) -> CharSeries {
    CharSeries::inverse_pochhammer(p_degree, a, trunc)
}

/// Principal specialization `z_i -> q`.
pub fn principal_specialize(s: &CharSeries) -> Vec<i64> {
    s.principal()
}

impl fmt::Display for CharSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Vec<u32>, &i64)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(i, x)| if *x == 1 { format!("z{i}") } else { format!("z{i}^{x}") })
                .collect();
            let sign = if *c < 0 { "-" } else if idx > 0 { "+" } else { "" };
            if idx > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            if mono.is_empty() {
                write!(f, "{sign}{mag}")?;
            } else if mag == 1 {
                write!(f, "{sign}{}", mono.join("*"))?;
            } else {
                write!(f, "{sign}{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for CharSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(&Vec<u32>, &i64)> = self.coeffs.iter().collect();
        terms.serialize(serializer)
    }
}
