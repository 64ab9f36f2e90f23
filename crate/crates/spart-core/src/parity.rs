//! Parity sequences of gl(m|n), the bar map and Cartan data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parity sequence `s_1..s_N` extended N-periodically to all integers.
///
/// Stored as the window `s_0..s_{N-1}`; every accessor reduces its index with
/// Euclidean remainder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityContext {
    m: usize,
    n: usize,
    s: Vec<i8>,
    // bar(0..=N), cached
    bar_window: Vec<i64>,
}

/// A sign `+1` or `-1`, as returned by [`ParityContext::root_sign`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSign(i8);

impl RootSign {
    pub fn value(self) -> i8 {
        self.0
    }
}

impl ParityContext {
    /// Builds a context from `s_1..s_N` in reading order.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let size = signs.len();
        if signs.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::Parity("entries must be +1 or -1".into()));
        }
        let m = signs.iter().filter(|&&x| x == 1).count();
        let n = size - m;
        if size < 3 {
            return Err(Error::Parity(format!("need m+n >= 3, got {size}")));
        }
        if m == n {
            return Err(Error::Parity(format!("need m != n, got m = n = {m}")));
        }
        let mut s = vec![0i8; size];
        for (t, &x) in signs.iter().enumerate() {
            s[(t + 1) % size] = x;
        }
        let mut bar_window = vec![0i64; size + 1];
        for j in 1..=size {
            bar_window[j] = bar_window[j - 1] + i64::from(signs[j - 1]);
        }
        Ok(ParityContext { m, n, s, bar_window })
    }

    /// The standard parity `(+,...,+,-,...,-)` of gl(m|n).
    pub fn standard(m: usize, n: usize) -> Result<Self> {
        let mut signs = vec![1i8; m];
        signs.extend(std::iter::repeat_n(-1i8, n));
        Self::from_signs(&signs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// N = m + n.
    pub fn size(&self) -> usize {
        self.s.len()
    }

    pub fn big_n(&self) -> i64 {
        self.s.len() as i64
    }

    /// Reduces an integer to a node in `0..N`.
    pub fn node(&self, j: i64) -> usize {
        j.rem_euclid(self.big_n()) as usize
    }

    /// `s_j` for any integer `j`.
    pub fn s(&self, j: i64) -> i8 {
        self.s[self.node(j)]
    }

    /// `s_1..s_N` in reading order.
    pub fn signs(&self) -> Vec<i8> {
        (1..=self.big_n()).map(|t| self.s(t)).collect()
    }

    pub fn is_standard(&self) -> bool {
        let signs = self.signs();
        signs.windows(2).all(|w| w[0] >= w[1])
    }

    /// The bar map, `bar(j) = s_1 + ... + s_j` extended by `bar(j+1) = bar(j) + s_{j+1}`.
    pub fn bar(&self, j: i64) -> i64 {
        let size = self.big_n();
        let (q, r) = (j.div_euclid(size), j.rem_euclid(size));
        q * (self.m as i64 - self.n as i64) + self.bar_window[r as usize]
    }

    /// Node parity `|i| = (1 - s_i s_{i+1}) / 2`.
    pub fn node_parity(&self, i: i64) -> u8 {
        if self.s(i) == self.s(i + 1) {
            0
        } else {
            1
        }
    }

    pub fn is_odd(&self, i: i64) -> bool {
        self.node_parity(i) == 1
    }

    /// Entries `A_{ij}` of the affine Cartan matrix and `M_{ij}`.
    pub fn cartan_entries(&self, i: i64, j: i64) -> (i64, i64) {
        let (ni, nj) = (self.node(i), self.node(j));
        let next = |a: usize| (a + 1) % self.size();
        let si = i64::from(self.s(i));
        let si1 = i64::from(self.s(i + 1));
        let sj = i64::from(self.s(j));
        let mut a = 0;
        if ni == nj {
            a += si + si1;
        }
        if ni == next(nj) {
            a -= si;
        }
        if next(ni) == nj {
            a -= sj;
        }
        let mut mm = 0;
        if ni == next(nj) {
            // M_{j+1,j} = s_{j+1} = s_i
            mm += si;
        }
        if next(ni) == nj {
            // M_{i,i+1} = -s_{i+1}
            mm -= si1;
        }
        (a, mm)
    }

    /// `sigma(i,j) = (-1)^{|i| + ... + |j|}` for `i <= j`.
    pub fn root_sign(&self, i: i64, j: i64) -> Result<RootSign> {
        if i > j {
            return Err(Error::Parity(format!("root_sign needs i <= j, got ({i}, {j})")));
        }
        let odd: i64 = (i..=j).map(|k| i64::from(self.node_parity(k))).sum();
        Ok(RootSign(if odd % 2 == 0 { 1 } else { -1 }))
    }

    /// The parity `s'_i = -s_{1-i}` used by the twist isomorphism between
    /// gl(m|n) and gl(n|m).
    pub fn twist_parity(&self) -> ParityContext {
        let signs: Vec<i8> = (1..=self.big_n()).map(|i| -self.s(1 - i)).collect();
        Self::from_signs(&signs).expect("twist of a valid parity is valid")
    }

    /// The parity `s'_i = s_{1-i}` carried by the second tableau of the
    /// MacMahon bijection.
    pub fn tableau_parity(&self) -> ParityContext {
        let signs: Vec<i8> = (1..=self.big_n()).map(|i| self.s(1 - i)).collect();
        Self::from_signs(&signs).expect("reflection of a valid parity is valid")
    }
}

impl FromStr for ParityContext {
    type Err = Error;

    /// Accepts `"+++--"` (positions `s_1..s_N`) or `"m|n"` for the standard parity.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('|') {
            let m = a.trim().parse().map_err(|_| Error::Parity(format!("bad m in {text:?}")))?;
            let n = b.trim().parse().map_err(|_| Error::Parity(format!("bad n in {text:?}")))?;
            return Self::standard(m, n);
        }
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parity(format!("unexpected character {other:?} in parity {text:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_signs(&signs)
    }
}

impl fmt::Display for ParityContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.signs() {
            f.write_str(if x > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}
