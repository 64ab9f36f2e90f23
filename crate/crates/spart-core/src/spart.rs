//! Fock-type state spaces: s-partitions of every Fock family, finite wedges
//! of vector and covector representations, colors, contents and degrees.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Monomial;
use crate::parity::ParityContext;

/// One entry of a generalized partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Fin(u32),
    Inf,
}

impl Part {
    pub fn is_zero(self) -> bool {
        self == Part::Fin(0)
    }
}

/// A weakly decreasing sequence with an optional prefix of infinite parts.
///
/// Only nonzero parts are stored; `len` counts infinite and nonzero parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenPartition {
    pub inf: usize,
    pub parts: Vec<u32>,
}

impl GenPartition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// From finite parts; trailing zeros are dropped.
    pub fn new(parts: &[u32]) -> Self {
        let mut parts = parts.to_vec();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        GenPartition { inf: 0, parts }
    }

    pub fn with_inf(inf: usize, parts: &[u32]) -> Self {
        GenPartition { inf, ..Self::new(parts) }
    }

    pub fn len(&self) -> usize {
        self.inf + self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entry `j` (1-based); zero past the end.
    pub fn get(&self, j: usize) -> Part {
        assert!(j >= 1, "parts are 1-based");
        if j <= self.inf {
            Part::Inf
        } else {
            Part::Fin(self.parts.get(j - self.inf - 1).copied().unwrap_or(0))
        }
    }

    /// Entry `j` as a finite number; panics on infinite parts.
    pub fn fin(&self, j: usize) -> u32 {
        match self.get(j) {
            Part::Fin(v) => v,
            Part::Inf => panic!("infinite part {j}"),
        }
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1]) && self.parts.iter().all(|&p| p > 0)
    }

    /// The partition with entry `j` changed by `delta`; `None` if negative or
    /// if `j` addresses an infinite part.
    pub fn bumped(&self, j: usize, delta: i32) -> Option<Self> {
        if j <= self.inf {
            return None;
        }
        let idx = j - self.inf - 1;
        let mut parts = self.parts.clone();
        if parts.len() <= idx {
            parts.resize(idx + 1, 0);
        }
        let v = parts[idx] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        parts[idx] = v as u32;
        Some(GenPartition::with_inf(self.inf, &parts))
    }
}

impl Serialize for GenPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut out: Vec<serde_json::Value> = vec![serde_json::Value::from("inf"); self.inf];
        out.extend(self.parts.iter().map(|&p| serde_json::Value::from(p)));
        out.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GenPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(deserializer)?;
        let mut inf = 0;
        let mut parts = Vec::new();
        for v in raw {
            match v {
                serde_json::Value::String(s) if s == "inf" => {
                    if !parts.is_empty() {
                        return Err(D::Error::custom("infinite parts must form a prefix"));
                    }
                    inf += 1;
                }
                serde_json::Value::Number(n) => {
                    parts.push(n.as_u64().ok_or_else(|| D::Error::custom("parts are nonnegative"))? as u32)
                }
                other => return Err(D::Error::custom(format!("bad part {other}"))),
            }
        }
        Ok(GenPartition::with_inf(inf, &parts))
    }
}

impl fmt::Display for GenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = vec!["inf".into(); self.inf];
        items.extend(self.parts.iter().map(|p| p.to_string()));
        write!(f, "({})", items.join(","))
    }
}

/// The Fock-type families. The parity context is passed separately to every
/// operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FockFamily {
    /// `F_{Λi}` (`sign = +1`) or `F_{-Λi}` (`sign = -1`).
    Pure { sign: i8, node: usize },
    /// `F_{s_{i+1}(rΛ_{i+1} - (r+1)Λ_i)}`: `r` extra vector factors.
    NonPureVector { node: usize, r: usize },
    /// `F_{s_i(rΛ_{i-1} - (r+1)Λ_i)}`: `r` extra covector factors.
    NonPureCovector { node: usize, r: usize },
    /// `V(u) ⊗ V(u q2^dir) ⊗ ...` with `k` factors.
    VectorWedge { k: usize, dir: i8 },
    /// `W(u) ⊗ W(u q2^dir) ⊗ ...` with `k` factors.
    CovectorWedge { k: usize, dir: i8 },
}

impl FockFamily {
    pub fn pure(sign: i8, node: usize) -> Self {
        FockFamily::Pure { sign, node }
    }

    /// The stacking direction `s` of the tensor product.
    pub fn direction(&self, ctx: &ParityContext) -> i8 {
        match *self {
            FockFamily::Pure { sign, .. } => sign,
            FockFamily::NonPureVector { node, .. } => -ctx.s(node as i64 + 1),
            FockFamily::NonPureCovector { node, .. } => -ctx.s(node as i64),
            FockFamily::VectorWedge { dir, .. } | FockFamily::CovectorWedge { dir, .. } => dir,
        }
    }

    /// The color of the box at the origin.
    pub fn origin(&self) -> usize {
        match *self {
            FockFamily::Pure { node, .. }
            | FockFamily::NonPureVector { node, .. }
            | FockFamily::NonPureCovector { node, .. } => node,
            _ => 0,
        }
    }

    pub fn is_wedge(&self) -> bool {
        matches!(self, FockFamily::VectorWedge { .. } | FockFamily::CovectorWedge { .. })
    }

    pub fn nu_len(&self) -> usize {
        match *self {
            FockFamily::NonPureVector { r, .. } | FockFamily::NonPureCovector { r, .. } => r,
            _ => 0,
        }
    }

    pub fn validate(&self, ctx: &ParityContext) -> Result<()> {
        let size = ctx.size();
        match *self {
            FockFamily::Pure { sign, node } => {
                if sign != 1 && sign != -1 {
                    return Err(Error::InvalidFamily(format!("sign must be +1 or -1, got {sign}")));
                }
                if node >= size {
                    return Err(Error::InvalidFamily(format!("node {node} out of range 0..{size}")));
                }
            }
            FockFamily::NonPureVector { node, r } | FockFamily::NonPureCovector { node, r } => {
                if node >= size {
                    return Err(Error::InvalidFamily(format!("node {node} out of range 0..{size}")));
                }
                if r == 0 {
                    return Err(Error::InvalidFamily("r must be at least 1".into()));
                }
            }
            FockFamily::VectorWedge { dir, .. } | FockFamily::CovectorWedge { dir, .. } => {
                if dir != 1 && dir != -1 {
                    return Err(Error::InvalidFamily(format!("direction must be +1 or -1, got {dir}")));
                }
            }
        }
        Ok(())
    }

    /// Parses a descriptor: `fock:{+|-}:{node}[:{r}:{vec|cov}]`,
    /// `vec:{k}:{+|-}` or `cov:{k}:{+|-}`.
    pub fn parse(text: &str, ctx: &ParityContext) -> Result<Self> {
        let bad = |why: &str| Error::InvalidFamily(format!("{text:?}: {why}"));
        let fields: Vec<&str> = text.split(':').collect();
        let sign_of = |s: &str| match s {
            "+" => Ok(1i8),
            "-" => Ok(-1i8),
            _ => Err(bad("sign must be + or -")),
        };
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("expected a nonnegative integer"));
        let fam = match fields.as_slice() {
            ["fock", sign, node] => FockFamily::Pure { sign: sign_of(sign)?, node: num(node)? },
            ["fock", sign, node, r, kind] => {
                let (node, r) = (num(node)?, num(r)?);
                let fam = match *kind {
                    "vec" => FockFamily::NonPureVector { node, r },
                    "cov" => FockFamily::NonPureCovector { node, r },
                    _ => return Err(bad("non-pure kind must be vec or cov")),
                };
                fam.validate(ctx)?;
                let want = fam.direction(ctx);
                if sign_of(sign)? != want {
                    let w = if want > 0 { "+" } else { "-" };
                    return Err(bad(&format!("this family is built in direction {w}; use fock:{w}:...")));
                }
                fam
            }
            ["vec", k, dir] => FockFamily::VectorWedge { k: num(k)?, dir: sign_of(dir)? },
            ["cov", k, dir] => FockFamily::CovectorWedge { k: num(k)?, dir: sign_of(dir)? },
            _ => return Err(bad("unknown descriptor")),
        };
        fam.validate(ctx)?;
        Ok(fam)
    }

    pub fn descriptor(&self, ctx: &ParityContext) -> String {
        let sg = |s: i8| if s > 0 { "+" } else { "-" };
        match *self {
            FockFamily::Pure { sign, node } => format!("fock:{}:{node}", sg(sign)),
            FockFamily::NonPureVector { node, r } => format!("fock:{}:{node}:{r}:vec", sg(self.direction(ctx))),
            FockFamily::NonPureCovector { node, r } => format!("fock:{}:{node}:{r}:cov", sg(self.direction(ctx))),
            FockFamily::VectorWedge { k, dir } => format!("vec:{k}:{}", sg(dir)),
            FockFamily::CovectorWedge { k, dir } => format!("cov:{k}:{}", sg(dir)),
        }
    }
}

/// A basis vector of a Fock-type module.
///
/// For wedge families `wedge` holds the indices `r_1..r_k` (the covector
/// wedge stores `r_t` for the factor `[u q2^{dir(t-1)}]^{-r_t}`) and the
/// partitions are empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockState {
    pub family: FockFamily,
    pub lambda: GenPartition,
    pub mu: GenPartition,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nu: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wedge: Vec<i64>,
}

impl FockState {
    pub fn new(family: FockFamily, lambda: &[u32], mu: &[u32]) -> Self {
        let nu = vec![0; family.nu_len()];
        FockState { family, lambda: GenPartition::new(lambda), mu: GenPartition::new(mu), nu, wedge: Vec::new() }
    }

    pub fn with_nu(family: FockFamily, nu: &[u32], lambda: &[u32], mu: &[u32]) -> Self {
        FockState { nu: nu.to_vec(), ..Self::new(family, lambda, mu) }
    }

    pub fn wedge(family: FockFamily, parts: &[i64]) -> Self {
        FockState { family, lambda: GenPartition::empty(), mu: GenPartition::empty(), nu: Vec::new(), wedge: parts.to_vec() }
    }

    pub fn vacuum(family: FockFamily) -> Self {
        Self::new(family, &[], &[])
    }

    /// Number of boxes above the vacuum.
    pub fn boxes(&self) -> u32 {
        self.lambda.size() + self.mu.size() + self.nu.iter().sum::<u32>()
    }
}

/// Allowed repeat of a nonzero value `v` in a sequence, per family.
fn repeat_ok(ctx: &ParityContext, at: i64, want: i8) -> bool {
    ctx.s(at) == want
}

fn admissible_pure(ctx: &ParityContext, sign: i8, node: usize, lambda: &GenPartition, mu: &GenPartition) -> bool {
    let i = node as i64;
    if lambda.inf > 0 || mu.inf > 0 || !lambda.is_weakly_decreasing() || !mu.is_weakly_decreasing() {
        return false;
    }
    if mu.len() > lambda.len() {
        return false;
    }
    for w in lambda.parts.windows(2) {
        if w[0] == w[1] && !repeat_ok(ctx, i + w[0] as i64, -sign) {
            return false;
        }
    }
    for w in mu.parts.windows(2) {
        if w[0] == w[1] && !repeat_ok(ctx, i - w[0] as i64, -sign) {
            return false;
        }
    }
    // Consecutive zero columns under nonzero rows count as a repeat at 0.
    if ctx.s(i) == sign && mu.len() + 1 < lambda.len() {
        return false;
    }
    true
}

/// The admissibility predicate of every family.
pub fn is_admissible(ctx: &ParityContext, state: &FockState) -> bool {
    let fam = state.family;
    if fam.validate(ctx).is_err() {
        return false;
    }
    match fam {
        FockFamily::Pure { sign, node } => {
            state.nu.is_empty() && state.wedge.is_empty() && admissible_pure(ctx, sign, node, &state.lambda, &state.mu)
        }
        FockFamily::NonPureVector { node, r } => {
            let s = ctx.s(node as i64 + 1);
            if state.nu.len() != r || !state.wedge.is_empty() {
                return false;
            }
            if !admissible_pure(ctx, -s, node, &state.lambda, &state.mu) {
                return false;
            }
            // (nu + 1, lambda) is an s-partition with repeats at v allowed iff s_{i+v} = s
            let mut seq: Vec<u32> = state.nu.iter().map(|v| v + 1).collect();
            seq.extend(state.lambda.parts.iter().copied());
            seq.windows(2).all(|w| w[0] > w[1] || (w[0] == w[1] && repeat_ok(ctx, node as i64 + w[0] as i64, s)))
        }
        FockFamily::NonPureCovector { node, r } => {
            let s = ctx.s(node as i64);
            if state.nu.len() != r || !state.wedge.is_empty() {
                return false;
            }
            if !admissible_pure(ctx, -s, node, &state.lambda, &state.mu) {
                return false;
            }
            let mut seq: Vec<u32> = state.nu.clone();
            seq.push(state.mu.get(1).fin_or_zero());
            seq.windows(2).all(|w| w[0] > w[1] || (w[0] == w[1] && repeat_ok(ctx, node as i64 - w[0] as i64, s)))
        }
        FockFamily::VectorWedge { k, dir } => {
            state.wedge.len() == k
                && state.lambda.is_empty()
                && state.mu.is_empty()
                && state
                    .wedge
                    .windows(2)
                    .all(|w| w[0] > w[1] || (w[0] == w[1] && ctx.s(w[0] + 1) == -dir))
        }
        FockFamily::CovectorWedge { k, dir } => {
            state.wedge.len() == k
                && state.lambda.is_empty()
                && state.mu.is_empty()
                && state.wedge.windows(2).all(|w| w[0] > w[1] || (w[0] == w[1] && ctx.s(-w[0]) == -dir))
        }
    }
}

trait FinOrZero {
    fn fin_or_zero(self) -> u32;
}

impl FinOrZero for Part {
    fn fin_or_zero(self) -> u32 {
        match self {
            Part::Fin(v) => v,
            Part::Inf => u32::MAX,
        }
    }
}

/// Which side of the diagonal rail a box lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    /// A box of a row (`λ` or the `ν` rows of a vector non-pure family).
    Row,
    /// A box of a column (`μ` or the `ν` columns of a covector non-pure family).
    Column,
}

/// A box of a Fock-type picture.
///
/// `index` is the 1-based row or column of the tensor factor the box belongs
/// to and `position` is its 1-based place within that row or column.
/// Coordinates `(a, b)` follow the picture axes: `a` grows to the right and
/// `b` downwards; `k` is the layer height in 3D pictures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoxRef {
    pub side: Side,
    pub index: usize,
    pub position: i64,
    pub color: usize,
    pub a: i64,
    pub b: i64,
    pub k: i64,
}

/// q-content of a box, as the argument multiplier `c` in `psi(c u/z)`.
///
/// `q1^{-(bar(c) - bar(l))} q2^{s(b-k)}` on the row side and
/// `q3^{bar(c) - bar(l)} q2^{s(a-k)}` on the column side, where `c` is the
/// box color and `l` the origin color.
pub fn q_content(ctx: &ParityContext, dir: i8, origin: usize, a: i64, b: i64, k: i64) -> Monomial {
    let side = if a >= b { Side::Row } else { Side::Column };
    q_content_on(ctx, side, dir, origin, a, b, k)
}

/// [`q_content`] with the side given explicitly; wedge rows and columns of
/// negative length put row boxes left of the diagonal and vice versa.
pub fn q_content_on(ctx: &ParityContext, side: Side, dir: i8, origin: usize, a: i64, b: i64, k: i64) -> Monomial {
    let color = a - b + origin as i64;
    let rel = ctx.bar(color) - ctx.bar(origin as i64);
    match side {
        Side::Row => Monomial::q1(-rel) * Monomial::q2(i64::from(dir) * (b - k)),
        Side::Column => Monomial::q3(rel) * Monomial::q2(i64::from(dir) * (a - k)),
    }
}

impl BoxRef {
    /// Row-side box at 0-based row `b`, column coordinate `a`.
    pub fn row(ctx: &ParityContext, origin: usize, index: usize, position: i64, a: i64, b: i64) -> Self {
        BoxRef { side: Side::Row, index, position, color: ctx.node(a - b + origin as i64), a, b, k: 0 }
    }

    pub fn column(ctx: &ParityContext, origin: usize, index: usize, position: i64, a: i64, b: i64) -> Self {
        BoxRef { side: Side::Column, index, position, color: ctx.node(a - b + origin as i64), a, b, k: 0 }
    }

    pub fn content(&self, ctx: &ParityContext, dir: i8, origin: usize) -> Monomial {
        q_content(ctx, dir, origin, self.a, self.b, self.k)
    }
}

/// Per-color box counts relative to the vacuum.
pub fn degree(ctx: &ParityContext, state: &FockState) -> Vec<u32> {
    let size = ctx.size();
    let mut out = vec![0u32; size];
    let i = state.family.origin() as i64;
    for &p in &state.lambda.parts {
        for c in 0..p as i64 {
            out[ctx.node(i + c)] += 1;
        }
    }
    for &p in &state.mu.parts {
        for c in 1..=p as i64 {
            out[ctx.node(i - c)] += 1;
        }
    }
    match state.family {
        FockFamily::NonPureVector { .. } => {
            for &p in &state.nu {
                for c in 1..=p as i64 {
                    out[ctx.node(i + c)] += 1;
                }
            }
        }
        FockFamily::NonPureCovector { .. } => {
            for &p in &state.nu {
                for c in 1..=p as i64 {
                    out[ctx.node(i - c)] += 1;
                }
            }
        }
        _ => {}
    }
    out
}

/// All weakly decreasing sequences of positive parts with sum at most
/// `budget`, at most `max_len` parts, first part at most `max_first`,
/// where a repeat of value `v` is allowed iff `repeat(v)`.
pub(crate) fn spartitions(
    budget: u32,
    max_len: usize,
    max_first: u32,
    repeat: &dyn Fn(u32) -> bool,
) -> Vec<Vec<u32>> {
    fn go(
        prefix: &mut Vec<u32>,
        budget: u32,
        max_len: usize,
        cap: u32,
        cap_inclusive: bool,
        repeat: &dyn Fn(u32) -> bool,
        out: &mut Vec<Vec<u32>>,
    ) {
        out.push(prefix.clone());
        if prefix.len() == max_len {
            return;
        }
        let top = cap.min(budget);
        for v in 1..=top {
            if v == cap && !cap_inclusive {
                continue;
            }
            let inclusive = repeat(v);
            prefix.push(v);
            go(prefix, budget - v, max_len, v, inclusive, repeat, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), budget, max_len, max_first, true, repeat, &mut out);
    out
}

/// Every admissible state with at most `max_boxes` boxes, ordered by
/// `(boxes, lambda, mu, nu)`.
pub fn enumerate(ctx: &ParityContext, family: FockFamily, max_boxes: u32) -> Result<Vec<FockState>> {
    family.validate(ctx)?;
    let mut out = Vec::new();
    match family {
        FockFamily::Pure { sign, node } => {
            pure_states(ctx, sign, node, max_boxes, u32::MAX, &mut |lam, mu| {
                out.push(FockState::new(family, lam, mu));
            });
        }
        FockFamily::NonPureVector { node, r } => {
            let s = ctx.s(node as i64 + 1);
            let i = node as i64;
            let rep = |v: u32| ctx.s(i + v as i64) == s;
            // nu + 1 as an s-partition of exactly r parts, each >= 1
            for shifted in spartitions(max_boxes + r as u32, r, max_boxes + 1, &rep) {
                if shifted.len() != r {
                    continue;
                }
                let nu: Vec<u32> = shifted.iter().map(|v| v - 1).collect();
                let used: u32 = nu.iter().sum();
                if used > max_boxes {
                    continue;
                }
                let last = shifted[r - 1];
                let cap = if rep(last) { last } else { last - 1 };
                pure_states(ctx, -s, node, max_boxes - used, cap, &mut |lam, mu| {
                    out.push(FockState::with_nu(family, &nu, lam, mu));
                });
            }
        }
        FockFamily::NonPureCovector { node, r } => {
            let s = ctx.s(node as i64);
            let i = node as i64;
            let rep = |v: u32| ctx.s(i - v as i64) == s;
            for nu_parts in spartitions(max_boxes, r, max_boxes, &rep) {
                // zero parts of nu may repeat freely since s_i = s
                let mut nu = nu_parts.clone();
                nu.resize(r, 0);
                let used: u32 = nu.iter().sum();
                let last = nu[r - 1];
                pure_states(ctx, -s, node, max_boxes - used, u32::MAX, &mut |lam, mu| {
                    let m1 = mu.first().copied().unwrap_or(0);
                    if m1 < last || (m1 == last && (m1 == 0 || rep(m1))) {
                        out.push(FockState::with_nu(family, &nu, lam, mu));
                    }
                });
            }
        }
        FockFamily::VectorWedge { .. } | FockFamily::CovectorWedge { .. } => {
            return Err(Error::InvalidFamily("finite wedges are not graded from below and cannot be enumerated".into()));
        }
    }
    out.retain(|st| is_admissible(ctx, st));
    out.sort_by(|a, b| (a.boxes(), &a.lambda, &a.mu, &a.nu).cmp(&(b.boxes(), &b.lambda, &b.mu, &b.nu)));
    Ok(out)
}

fn pure_states(
    ctx: &ParityContext,
    sign: i8,
    node: usize,
    budget: u32,
    max_first: u32,
    sink: &mut dyn FnMut(&[u32], &[u32]),
) {
    let i = node as i64;
    let rep_l = |v: u32| ctx.s(i + v as i64) == -sign;
    let rep_m = |v: u32| ctx.s(i - v as i64) == -sign;
    for lam in spartitions(budget, usize::MAX, max_first, &rep_l) {
        let rest = budget - lam.iter().sum::<u32>();
        let min_mu_len = if ctx.s(i) == sign { lam.len().saturating_sub(1) } else { 0 };
        for mu in spartitions(rest, lam.len(), rest, &rep_m) {
            if mu.len() >= min_mu_len {
                sink(&lam, &mu);
            }
        }
    }
}

/// Renders a state as a grid of colors.
///
/// The first line names the family; Fock diagrams follow, one line per
/// 0-based row `b`, with the column-side cells `a < b` left of the `|` rail
/// and the row-side cells right of it. Empty cells are `.`.
pub fn render_ascii(ctx: &ParityContext, state: &FockState) -> String {
    let mut out = format!("{} {}\n", state.family.descriptor(ctx), ctx);
    if state.family.is_wedge() {
        let items: Vec<String> = state.wedge.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("wedge {}\n", items.join(" ")));
        return out;
    }
    if !state.nu.is_empty() {
        let items: Vec<String> = state.nu.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("nu {}\n", items.join(" ")));
    }
    let origin = state.family.origin() as i64;
    let rows = state.lambda.len().max((1..=state.mu.len()).map(|j| j + state.mu.fin(j) as usize).max().unwrap_or(0));
    let glyph = |c: i64| -> char {
        let v = ctx.node(c) as u32;
        std::char::from_digit(v, 36).unwrap_or('?')
    };
    for b in 0..rows as i64 {
        let mut line = String::new();
        for a in 0..b {
            let present = state.mu.fin(a as usize + 1) as i64 >= b - a;
            line.push(if present { glyph(a - b + origin) } else { '.' });
            line.push(' ');
        }
        line.push('|');
        let len = state.lambda.fin(b as usize + 1) as i64;
        for t in 0..len {
            line.push(' ');
            line.push(glyph(t + origin));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Inverse of [`render_ascii`].
pub fn parse_ascii(ctx: &ParityContext, text: &str) -> Result<FockState> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty diagram".into()))?;
    let descriptor = header.split_whitespace().next().ok_or_else(|| Error::Parse("missing family".into()))?;
    let family = FockFamily::parse(descriptor, ctx)?;
    let mut nu = vec![0; family.nu_len()];
    let mut lambda = Vec::new();
    let mut columns: Vec<u32> = Vec::new();
    let mut wedge = Vec::new();
    for (b, line) in lines.enumerate().map(|(b, l)| (b, l.trim_end())) {
        if let Some(rest) = line.strip_prefix("wedge") {
            wedge = rest
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad wedge index {t:?}"))))
                .collect::<Result<_>>()?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("nu") {
            nu = rest
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad nu part {t:?}"))))
                .collect::<Result<_>>()?;
            continue;
        }
        let row = b - usize::from(!nu.is_empty());
        let (left, right) = line.split_once('|').ok_or_else(|| Error::Parse(format!("missing rail in {line:?}")))?;
        let cells: Vec<&str> = left.split_whitespace().collect();
        if cells.len() != row {
            return Err(Error::Parse(format!("row {row} has {} column cells", cells.len())));
        }
        for (a, cell) in cells.iter().enumerate() {
            if *cell != "." {
                if columns.len() <= a {
                    columns.resize(a + 1, 0);
                }
                columns[a] = columns[a].max((row - a) as u32);
            }
        }
        lambda.push(right.split_whitespace().count() as u32);
    }
    if family.is_wedge() {
        return Ok(FockState::wedge(family, &wedge));
    }
    let state = FockState::with_nu(family, &nu, &lambda, &columns);
    if !is_admissible(ctx, &state) {
        return Err(Error::InvalidState(format!("parsed diagram is not admissible: {state:?}")));
    }
    Ok(state)
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_wedge() {
            let items: Vec<String> = self.wedge.iter().map(|r| r.to_string()).collect();
            return write!(f, "[{}]", items.join(","));
        }
        if !self.nu.is_empty() {
            let items: Vec<String> = self.nu.iter().map(|r| r.to_string()).collect();
            write!(f, "nu=({}) ", items.join(","))?;
        }
        write!(f, "{} {}", self.lambda, self.mu)
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" => Ok(Side::Row),
            "column" => Ok(Side::Column),
            _ => Err(Error::Parse(format!("bad side {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std32() -> ParityContext {
        "+++--".parse().unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let ctx = std32();
        let f0 = FockFamily::pure(1, 0);
        assert!(is_admissible(&ctx, &FockState::new(f0, &[8, 5, 5, 4, 4, 1], &[7, 5, 5, 1])));
        assert!(!is_admissible(&ctx, &FockState::new(f0, &[2, 2], &[])));
        assert!(is_admissible(&ctx, &FockState::vacuum(f0)));
        assert!(!is_admissible(&ctx, &FockState::new(f0, &[1], &[1, 1])));
    }

    #[test]
    fn small_enumerations() {
        let ctx = std32();
        let states = enumerate(&ctx, FockFamily::pure(1, 0), 1).unwrap();
        assert_eq!(states.len(), 2);
        assert_eq!(states[1].lambda.parts, vec![1]);
        let counts = |fam| {
            let mut c = vec![0; 4];
            for st in enumerate(&ctx, fam, 3).unwrap() {
                c[st.boxes() as usize] += 1;
            }
            c
        };
        assert_eq!(counts(FockFamily::pure(1, 0)), vec![1, 1, 2, 4]);
    }

    #[test]
    fn degree_of_partition_picture() {
        let ctx = std32();
        let st = FockState::new(FockFamily::pure(1, 0), &[8, 5, 5, 4, 4, 2], &[7, 2, 1, 1]);
        let deg = degree(&ctx, &st);
        assert_eq!(deg.iter().sum::<u32>(), 39);
        // walk colors box by box on the grid
        let mut grid = vec![0u32; 5];
        for b in 0..12i64 {
            for a in 0..12i64 {
                let on_row = a >= b && (a - b) < st.lambda.fin(b as usize + 1) as i64;
                let on_col = a < b && (b - a) <= st.mu.fin(a as usize + 1) as i64;
                if on_row || on_col {
                    grid[ctx.node(a - b)] += 1;
                }
            }
        }
        assert_eq!(deg, grid);
    }

    #[test]
    fn contents_match_explicit_supports() {
        let ctx = std32();
        for j in 1..5i64 {
            for lam in 1..7i64 {
                let c = q_content(&ctx, 1, 0, j - 1 + lam - 1, j - 1, 0);
                assert_eq!(c, Monomial::q1(-ctx.bar(lam - 1)) * Monomial::q2(j - 1));
            }
            for mu in 1..7i64 {
                let c = q_content(&ctx, 1, 0, j - 1, j - 1 + mu, 0);
                assert_eq!(c, Monomial::q3(ctx.bar(-mu)) * Monomial::q2(j - 1));
            }
        }
    }

    #[test]
    fn render_round_trip() {
        let ctx = std32();
        let st = FockState::new(FockFamily::pure(1, 0), &[8, 5, 5, 4, 4, 1], &[7, 5, 5, 1]);
        let text = render_ascii(&ctx, &st);
        let first_row: String = text.lines().nth(1).unwrap().split('|').nth(1).unwrap().split_whitespace().collect();
        assert_eq!(first_row, "01234012");
        assert_eq!(parse_ascii(&ctx, &text).unwrap(), st);
        let vac = FockState::vacuum(FockFamily::pure(-1, 2));
        assert_eq!(render_ascii(&ctx, &vac).lines().count(), 1);
        assert_eq!(parse_ascii(&ctx, &render_ascii(&ctx, &vac)).unwrap(), vac);
    }

    #[test]
    fn descriptors() {
        let ctx = std32();
        assert_eq!(FockFamily::parse("fock:+:0", &ctx).unwrap(), FockFamily::pure(1, 0));
        // s_1 = +1, so the vector family at node 0 runs in direction -
        let fam = FockFamily::parse("fock:-:0:2:vec", &ctx).unwrap();
        assert_eq!(fam, FockFamily::NonPureVector { node: 0, r: 2 });
        assert!(FockFamily::parse("fock:+:0:2:vec", &ctx).is_err());
        assert!(FockFamily::parse("fock:+:7", &ctx).is_err());
        for fam in [fam, FockFamily::pure(-1, 3), FockFamily::VectorWedge { k: 5, dir: 1 }] {
            assert_eq!(FockFamily::parse(&fam.descriptor(&ctx), &ctx).unwrap(), fam);
        }
    }
}
