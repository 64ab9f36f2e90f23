//! Plane s-partitions: stacks of Fock layers related by `≥_i`, the MacMahon
//! modules with vertical and horizontal boundaries, their eigenvalues and
//! matrix coefficients, and the bijection with pairs of super-tableaux.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Monomial, SpectralFunction};
use crate::fock::{apply_role, k_eigenvalue, push_pure, ChainItem, Ladder, MatrixCoeff, TensorChain};
use crate::parity::ParityContext;
use crate::spart::{degree, enumerate, is_admissible, q_content, FockFamily, FockState, GenPartition, Part};

/// One layer `(λ, μ)` of a plane s-partition; may carry an infinite prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LayerPair {
    pub lambda: GenPartition,
    pub mu: GenPartition,
}

impl LayerPair {
    pub fn new(lambda: &[u32], mu: &[u32]) -> Self {
        LayerPair { lambda: GenPartition::new(lambda), mu: GenPartition::new(mu) }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Finite boxes.
    pub fn size(&self) -> u32 {
        self.lambda.size() + self.mu.size()
    }

    fn from_fock(inf: usize, st: &FockState) -> Self {
        LayerPair {
            lambda: GenPartition::with_inf(inf, &st.lambda.parts),
            mu: GenPartition::with_inf(inf, &st.mu.parts),
        }
    }

    /// The finite part as a Fock state of `family`.
    fn fock(&self, family: FockFamily) -> FockState {
        FockState {
            family,
            lambda: GenPartition::new(&self.lambda.parts),
            mu: GenPartition::new(&self.mu.parts),
            nu: Vec::new(),
            wedge: Vec::new(),
        }
    }

    /// Whether cell `(a, b)` of the layer is filled, in the unified
    /// coordinates of the Fock pictures (row `b` starts at `(b, b)`).
    pub fn contains(&self, a: i64, b: i64) -> bool {
        if a < 0 || b < 0 {
            return false;
        }
        let reaches = |p: Part, need: i64| match p {
            Part::Inf => true,
            Part::Fin(v) => i64::from(v) >= need,
        };
        if a >= b {
            reaches(self.lambda.get(b as usize + 1), a - b + 1)
        } else {
            reaches(self.mu.get(a as usize + 1), b - a)
        }
    }
}

impl fmt::Display for LayerPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.lambda, self.mu)
    }
}

fn part_ge(a: Part, b: Part, equal_ok: bool) -> bool {
    match (a, b) {
        (Part::Inf, _) => true,
        (Part::Fin(_), Part::Inf) => false,
        (Part::Fin(x), Part::Fin(y)) => x > y || (x == y && equal_ok),
    }
}

/// The relation `a ≥_j b` between consecutive layers.
pub fn layer_dominates(ctx: &ParityContext, a: &LayerPair, b: &LayerPair, j: usize) -> bool {
    let j = j as i64;
    let sj = ctx.s(j);
    let lb = b.lambda.len();
    if lb > a.mu.len() || lb > a.lambda.len() || b.mu.len() > a.mu.len() {
        return false;
    }
    for t in 1..=lb {
        let x = a.lambda.get(t);
        let ok = match x {
            Part::Inf => true,
            Part::Fin(v) => v == 0 || ctx.s(i64::from(v) + j) == -sj,
        };
        if !part_ge(x, b.lambda.get(t), ok) {
            return false;
        }
    }
    for t in 1..=b.mu.len() {
        let x = a.mu.get(t);
        let ok = match x {
            Part::Inf => true,
            Part::Fin(v) => v == 0 || ctx.s(j - i64::from(v)) == -sj,
        };
        if !part_ge(x, b.mu.get(t), ok) {
            return false;
        }
    }
    true
}

/// Row-end and column-end color counts `(a, b)`: `a_c` rows of `λ` end with
/// color `c`, `b_c` nonzero columns of `μ` end with color `c`; `zero_columns`
/// adds the zero parts of `μ` up to `ℓ(λ)` (which end with color `j`).
pub fn end_counts(ctx: &ParityContext, pair: &LayerPair, j: usize, zero_columns: bool) -> (Vec<u32>, Vec<u32>) {
    let n = ctx.size();
    let j = j as i64;
    let mut a = vec![0; n];
    let mut b = vec![0; n];
    for &p in &pair.lambda.parts {
        a[ctx.node(j + i64::from(p) - 1)] += 1;
    }
    for &p in &pair.mu.parts {
        b[ctx.node(j - i64::from(p))] += 1;
    }
    if zero_columns {
        b[ctx.node(j)] += pair.lambda.len().saturating_sub(pair.mu.len()) as u32;
    }
    (a, b)
}

/// Equal numbers of boxes of every color.
pub fn is_colorless(ctx: &ParityContext, pair: &LayerPair, j: usize) -> bool {
    let st = pair.fock(FockFamily::pure(1, j));
    let deg = degree(ctx, &st);
    deg.iter().all(|&c| c == deg[0])
}

/// Self-comparability read off the end colors: equal lengths, no row ending
/// in a color `c` with `s_{c+1} = s_j`, no column ending in `c` with `s_c = s_j`.
pub fn is_self_comparable_by_counts(ctx: &ParityContext, pair: &LayerPair, j: usize) -> bool {
    if pair.lambda.inf > 0 || pair.mu.inf > 0 || pair.lambda.len() > pair.mu.len() {
        return false;
    }
    let sj = ctx.s(j as i64);
    let (a, b) = end_counts(ctx, pair, j, false);
    (0..ctx.size()).all(|c| {
        let c64 = c as i64;
        (a[c] == 0 || ctx.s(c64 + 1) != sj) && (b[c] == 0 || ctx.s(c64) != sj)
    })
}

/// A valid vertical boundary: colorless and `j`-self-comparable.
pub fn is_colorless_self_comparable(ctx: &ParityContext, pair: &LayerPair, j: usize) -> bool {
    let direct = layer_dominates(ctx, pair, pair, j);
    debug_assert!(
        pair.lambda.len() < pair.mu.len() || direct == is_self_comparable_by_counts(ctx, pair, j),
        "self-comparability criteria disagree on {pair}"
    );
    direct && is_colorless(ctx, pair, j)
}

/// A MacMahon module `M_i^{(γ,ε),α}` with optional prohibited boxes.
///
/// Prohibited boxes are `(a, b, k)` with `k` the layer height: `0` is the
/// first layer of the vertical part, the horizontal-boundary layers sit at
/// `k = -ℓ(α) .. -1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MacMahonModule {
    pub node: usize,
    #[serde(default)]
    pub gamma: GenPartition,
    #[serde(default)]
    pub epsilon: GenPartition,
    #[serde(default)]
    pub alpha: Vec<u32>,
    #[serde(default)]
    pub forbidden: Vec<[i64; 3]>,
}

impl MacMahonModule {
    pub fn pure(node: usize) -> Self {
        MacMahonModule { node, ..Self::default() }
    }

    pub fn with_boundary(node: usize, gamma: &[u32], epsilon: &[u32], alpha: &[u32]) -> Self {
        MacMahonModule {
            node,
            gamma: GenPartition::new(gamma),
            epsilon: GenPartition::new(epsilon),
            alpha: alpha.to_vec(),
            forbidden: Vec::new(),
        }
    }

    pub fn forbid(mut self, cell: [i64; 3]) -> Self {
        if !self.forbidden.contains(&cell) {
            self.forbidden.push(cell);
            self.forbidden.sort();
        }
        self
    }

    pub fn is_pure(&self) -> bool {
        self.gamma.is_empty() && self.epsilon.is_empty() && self.alpha.is_empty() && self.forbidden.is_empty()
    }

    pub fn boundary(&self) -> LayerPair {
        LayerPair { lambda: self.gamma.clone(), mu: self.epsilon.clone() }
    }

    /// Layers are `F_{-s_i Λ_i}` stacked in direction `s_i`.
    pub fn layer_family(&self, ctx: &ParityContext) -> FockFamily {
        FockFamily::pure(-ctx.s(self.node as i64), self.node)
    }

    /// Number of horizontal-boundary layers.
    pub fn alpha_len(&self) -> usize {
        self.alpha.len()
    }

    /// Evaluation shift of layer `t` (0-based over all layers).
    pub fn layer_shift(&self, ctx: &ParityContext, t: usize) -> Monomial {
        let s = i64::from(ctx.s(self.node as i64));
        let ka = self.alpha.len();
        if t < ka {
            let i = t as i64 + 1;
            Monomial::q2(-s * (i64::from(self.alpha[t]) + ka as i64 - i + 1))
        } else {
            Monomial::q2(s * (t - ka) as i64)
        }
    }

    pub fn descriptor(&self) -> String {
        let mut out = format!("macmahon:{}", self.node);
        let join = |p: &[u32]| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        if !self.gamma.is_empty() {
            out += &format!(":gamma={}", join(&self.gamma.parts));
        }
        if !self.epsilon.is_empty() {
            out += &format!(":eps={}", join(&self.epsilon.parts));
        }
        if !self.alpha.is_empty() {
            out += &format!(":alpha={}", join(&self.alpha));
        }
        for c in &self.forbidden {
            out += &format!(":forbid={},{},{}", c[0], c[1], c[2]);
        }
        out
    }

    /// Parses `macmahon:{node}[:gamma=..][:eps=..][:alpha=..][:forbid=a,b,k]`.
    pub fn parse(text: &str, ctx: &ParityContext) -> Result<Self> {
        let mut fields = text.split(':');
        if fields.next() != Some("macmahon") {
            return Err(Error::Parse(format!("not a MacMahon descriptor: {text}")));
        }
        let node: usize = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("missing node in {text}")))?;
        let list = |v: &str| -> Result<Vec<u32>> {
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad part {x}")))).collect()
        };
        let mut out = MacMahonModule::pure(node);
        for field in fields {
            let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {field}")))?;
            match key {
                "gamma" => out.gamma = GenPartition::new(&list(value)?),
                "eps" | "epsilon" => out.epsilon = GenPartition::new(&list(value)?),
                "alpha" => out.alpha = list(value)?,
                "forbid" => {
                    let c: Vec<i64> = value
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad coordinate {x}"))))
                        .collect::<Result<_>>()?;
                    let cell: [i64; 3] = c.try_into().map_err(|_| Error::Parse(format!("forbid needs a,b,k: {value}")))?;
                    out = out.forbid(cell);
                }
                _ => return Err(Error::Parse(format!("unknown field {key}"))),
            }
        }
        out.validate(ctx)?;
        Ok(out)
    }

    pub fn validate(&self, ctx: &ParityContext) -> Result<()> {
        if self.node >= ctx.size() {
            return Err(Error::InvalidFamily(format!("node {} out of range", self.node)));
        }
        let bad = |m: String| Err(Error::InvalidBoundary(m));
        if !self.gamma.is_weakly_decreasing() || !self.epsilon.is_weakly_decreasing() {
            return bad("boundary parts must be weakly decreasing".into());
        }
        if self.gamma.len() < self.epsilon.len() {
            return bad(format!("ℓ(γ) < ℓ(ε) for {}", self.boundary()));
        }
        let b = self.boundary();
        if !is_admissible(ctx, &b.fock(self.layer_family(ctx))) {
            return bad(format!("{b} is not a layer of {}", self.descriptor()));
        }
        if !is_colorless_self_comparable(ctx, &b, self.node) {
            return bad(format!("{b} is not colorless and {}-self-comparable", self.node));
        }
        if self.alpha.windows(2).any(|w| w[0] < w[1]) || self.alpha.contains(&0) {
            return bad(format!("α = {:?} is not a partition", self.alpha));
        }
        self.special_level(ctx)?;
        Ok(())
    }

    /// q-content of the 3D box `(a, b, k)`, `k` counted from the vertical part.
    pub fn box_content(&self, ctx: &ParityContext, [a, b, k]: [i64; 3]) -> Monomial {
        let t = k + self.alpha_len() as i64;
        let shift = if t >= 0 { self.layer_shift(ctx, t as usize) } else { Monomial::q2(i64::from(ctx.s(self.node as i64)) * k) };
        shift * q_content(ctx, -ctx.s(self.node as i64), self.node, a, b, 0)
    }

    /// The level `K = q^n` at which the states holding a prohibited box
    /// form a submodule: `K^2 u/v = 1` for the box content `v/u`.
    pub fn special_level(&self, ctx: &ParityContext) -> Result<Option<i32>> {
        let mut level = None;
        for &cell in &self.forbidden {
            let c = self.box_content(ctx, cell);
            if c.ed != 0 || c.ek != 0 || c.eq % 4 != 0 || c.coeff != num_rational::Rational64::from_integer(1) {
                return Err(Error::InvalidBoundary(format!("no level makes {cell:?} with content {c} prohibitable")));
            }
            let n = -c.eq / 4;
            if level.is_some_and(|l| l != n) {
                return Err(Error::InvalidBoundary("prohibited boxes need different levels".into()));
            }
            level = Some(n);
        }
        Ok(level)
    }
}

/// A basis vector of a MacMahon module.
///
/// `layers` lists the horizontal-boundary layers (infinite prefixes of
/// length `α_t`) followed by the layers of the vertical part; trailing
/// layers equal to the boundary `(γ, ε)` are dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlaneState {
    #[serde(flatten)]
    pub module: MacMahonModule,
    pub layers: Vec<LayerPair>,
}

impl PlaneState {
    /// Normalizes the layer list; validity is checked separately.
    pub fn new(module: MacMahonModule, layers: Vec<LayerPair>) -> Self {
        let mut st = PlaneState { module, layers };
        st.trim();
        st
    }

    /// A pure MacMahon state from its finite layers.
    pub fn pure(node: usize, layers: &[(&[u32], &[u32])]) -> Self {
        let layers = layers.iter().map(|(l, m)| LayerPair::new(l, m)).collect();
        Self::new(MacMahonModule::pure(node), layers)
    }

    fn trim(&mut self) {
        let b = self.module.boundary();
        while self.layers.len() > self.module.alpha_len() && self.layers.last() == Some(&b) {
            self.layers.pop();
        }
    }

    /// Layer `t` (0-based), including the implicit boundary tail.
    pub fn layer(&self, t: usize) -> LayerPair {
        self.layers.get(t).cloned().unwrap_or_else(|| self.module.boundary())
    }

    /// Explicit layers of the vertical part.
    pub fn vertical_len(&self) -> usize {
        self.layers.len().saturating_sub(self.module.alpha_len())
    }

    /// Whether the 3D box `(a, b, k)` is present.
    pub fn contains(&self, cell: [i64; 3]) -> bool {
        let t = cell[2] + self.module.alpha_len() as i64;
        t >= 0 && self.layer(t as usize).contains(cell[0], cell[1])
    }

    pub fn check(&self, ctx: &ParityContext) -> Result<()> {
        let m = &self.module;
        m.validate(ctx)?;
        let fam = m.layer_family(ctx);
        let ka = m.alpha_len();
        if self.layers.len() < ka {
            return Err(Error::InvalidState(format!("{self}: missing horizontal-boundary layers")));
        }
        for (t, layer) in self.layers.iter().enumerate() {
            let inf = if t < ka { m.alpha[t] as usize } else { 0 };
            if layer.lambda.inf != inf || layer.mu.inf != inf {
                return Err(Error::InvalidState(format!("{self}: layer {t} must have {inf} infinite parts")));
            }
            if !is_admissible(ctx, &layer.fock(fam)) {
                return Err(Error::InvalidState(format!("{self}: layer {t} = {layer} is not admissible")));
            }
        }
        for t in 0..self.layers.len() {
            if !layer_dominates(ctx, &self.layer(t), &self.layer(t + 1), m.node) {
                return Err(Error::InvalidState(format!("{self}: layer {t} does not dominate layer {}", t + 1)));
            }
        }
        if let Some(c) = m.forbidden.iter().find(|c| self.contains(**c)) {
            return Err(Error::InvalidState(format!("{self} contains the prohibited box {c:?}")));
        }
        Ok(())
    }

    pub fn is_valid(&self, ctx: &ParityContext) -> bool {
        self.check(ctx).is_ok()
    }
}

impl fmt::Display for PlaneState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.layers.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", items.join(" "))
    }
}

/// Smallest layers over the given one among `candidates`; must be unique.
fn minimal_over(ctx: &ParityContext, node: usize, candidates: &[LayerPair], below: &LayerPair) -> Result<LayerPair> {
    let fitting: Vec<&LayerPair> = candidates.iter().filter(|c| layer_dominates(ctx, c, below, node)).collect();
    let Some(best) = fitting.iter().map(|c| c.size()).min() else {
        return Err(Error::InvalidBoundary(format!("no layer fits over {below}")));
    };
    let minimal: Vec<&&LayerPair> = fitting.iter().filter(|c| c.size() == best).collect();
    if minimal.len() != 1 {
        return Err(Error::InvalidBoundary(format!("several minimal layers over {below}")));
    }
    Ok((*minimal[0]).clone())
}

/// Horizontal-boundary layer candidates: layers with `inf` infinite parts
/// and at most `budget` finite boxes.
fn alpha_candidates(ctx: &ParityContext, fam: FockFamily, inf: usize, budget: u32) -> Result<Vec<LayerPair>> {
    Ok(enumerate(ctx, fam, budget)?.iter().map(|st| LayerPair::from_fock(inf, st)).collect())
}

/// The highest weight vector: every horizontal-boundary layer as small as
/// the chain allows, the vertical part equal to `(γ, ε)`.
pub fn plane_vacuum(ctx: &ParityContext, module: &MacMahonModule) -> Result<PlaneState> {
    module.validate(ctx)?;
    let fam = module.layer_family(ctx);
    let ka = module.alpha_len();
    let mut layers = vec![LayerPair::empty(); ka];
    let mut below = module.boundary();
    for t in (0..ka).rev() {
        let budget = below.size() + 2 * (below.lambda.len() + below.mu.len()) as u32 + 2;
        let cands = alpha_candidates(ctx, fam, module.alpha[t] as usize, budget)?;
        below = minimal_over(ctx, module.node, &cands, &below)?;
        layers[t] = below.clone();
    }
    let vac = PlaneState::new(module.clone(), layers);
    vac.check(ctx)?;
    Ok(vac)
}

/// Boxes above the vacuum.
pub fn plane_boxes(st: &PlaneState, vacuum: &PlaneState) -> i64 {
    let n = st.layers.len().max(vacuum.layers.len());
    (0..n).map(|t| i64::from(st.layer(t).size()) - i64::from(vacuum.layer(t).size())).sum()
}

/// Per-color box counts above the vacuum.
pub fn plane_degree(ctx: &ParityContext, st: &PlaneState, vacuum: &PlaneState) -> Result<Vec<u32>> {
    let fam = st.module.layer_family(ctx);
    let n = st.layers.len().max(vacuum.layers.len());
    let mut acc = vec![0i64; ctx.size()];
    for t in 0..n {
        let plus = degree(ctx, &st.layer(t).fock(fam));
        let minus = degree(ctx, &vacuum.layer(t).fock(fam));
        for c in 0..ctx.size() {
            acc[c] += i64::from(plus[c]) - i64::from(minus[c]);
        }
    }
    acc.into_iter()
        .map(|v| u32::try_from(v).map_err(|_| Error::InvalidBoundary(format!("{st} lies below the vacuum"))))
        .collect()
}

/// Every state with at most `max_boxes` boxes above the vacuum, ordered by
/// box count and then by layers.
pub fn enumerate_plane(ctx: &ParityContext, module: &MacMahonModule, max_boxes: u32) -> Result<Vec<PlaneState>> {
    let vac = plane_vacuum(ctx, module)?;
    let fam = module.layer_family(ctx);
    let ka = module.alpha_len();
    let boundary = module.boundary();
    let bsize = boundary.size();
    let regular: Vec<LayerPair> = enumerate(ctx, fam, bsize + max_boxes)?
        .iter()
        .map(|st| LayerPair::from_fock(0, st))
        .filter(|p| p.size() > bsize && layer_dominates_partwise(p, &boundary))
        .collect();
    let mut alpha_cands = Vec::with_capacity(ka);
    for t in 0..ka {
        alpha_cands.push(alpha_candidates(ctx, fam, module.alpha[t] as usize, vac.layer(t).size() + max_boxes)?);
    }
    struct Search<'a> {
        ctx: &'a ParityContext,
        module: &'a MacMahonModule,
        vac: &'a PlaneState,
        alpha: &'a [Vec<LayerPair>],
        regular: &'a [LayerPair],
        boundary: &'a LayerPair,
        max: i64,
    }
    impl Search<'_> {
        fn go(&self, acc: &mut Vec<LayerPair>, used: i64, out: &mut Vec<(i64, PlaneState)>) {
            let t = acc.len();
            let node = self.module.node;
            let fits = |c: &LayerPair, acc: &Vec<LayerPair>| acc.last().is_none_or(|p| layer_dominates(self.ctx, p, c, node));
            if t < self.alpha.len() {
                let base = i64::from(self.vac.layer(t).size());
                for c in &self.alpha[t] {
                    let extra = i64::from(c.size()) - base;
                    if fits(c, acc) {
                        acc.push(c.clone());
                        self.go(acc, used + extra, out);
                        acc.pop();
                    }
                }
                return;
            }
            if fits(self.boundary, acc) && (0..=self.max).contains(&used) {
                let st = PlaneState::new(self.module.clone(), acc.clone());
                if !self.module.forbidden.iter().any(|c| st.contains(*c)) {
                    out.push((used, st));
                }
            }
            let bsize = i64::from(self.boundary.size());
            for c in self.regular {
                let extra = i64::from(c.size()) - bsize;
                if used + extra <= self.max && fits(c, acc) {
                    acc.push(c.clone());
                    self.go(acc, used + extra, out);
                    acc.pop();
                }
            }
        }
    }
    let search = Search {
        ctx,
        module,
        vac: &vac,
        alpha: &alpha_cands,
        regular: &regular,
        boundary: &boundary,
        max: i64::from(max_boxes),
    };
    // split on the first layer
    let firsts: Vec<Option<LayerPair>> = if ka > 0 {
        alpha_cands[0].iter().cloned().map(Some).collect()
    } else {
        std::iter::once(None).chain(regular.iter().cloned().map(Some)).collect()
    };
    let parts: Vec<Vec<(i64, PlaneState)>> = firsts
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            match first {
                None => {
                    let st = PlaneState::new(module.clone(), Vec::new());
                    if !module.forbidden.iter().any(|c| st.contains(*c)) {
                        out.push((0, st));
                    }
                }
                Some(c) => {
                    let base = if ka > 0 { vac.layer(0).size() } else { bsize };
                    let extra = i64::from(c.size()) - i64::from(base);
                    if ka > 0 || extra <= i64::from(max_boxes) {
                        search.go(&mut vec![c.clone()], extra, &mut out);
                    }
                }
            }
            out
        })
        .collect();
    let mut all: Vec<(i64, PlaneState)> = parts.into_iter().flatten().collect();
    if all.iter().any(|(n, _)| *n < 0) {
        return Err(Error::InvalidBoundary(format!("{} has states below its vacuum", module.descriptor())));
    }
    all.sort();
    all.dedup();
    Ok(all.into_iter().map(|(_, st)| st).collect())
}

/// `λ_t ≥ γ_t` and `μ_t ≥ ε_t` for all `t` (a necessary condition).
fn layer_dominates_partwise(a: &LayerPair, b: &LayerPair) -> bool {
    let ge = |x: &GenPartition, y: &GenPartition| (1..=y.len()).all(|t| part_ge(x.get(t), y.get(t), true));
    ge(&a.lambda, &b.lambda) && ge(&a.mu, &b.mu)
}

/// Graded counts `[#states with d boxes]` for `d = 0..=max_boxes`.
pub fn plane_counts(ctx: &ParityContext, module: &MacMahonModule, max_boxes: u32) -> Result<Vec<u64>> {
    let vac = plane_vacuum(ctx, module)?;
    let mut out = vec![0u64; max_boxes as usize + 1];
    for st in enumerate_plane(ctx, module, max_boxes)? {
        out[plane_boxes(&st, &vac) as usize] += 1;
    }
    Ok(out)
}

/// The stacking rules read on 3D boxes: boxes rest on boxes, a diagonal box
/// rests on the column cell next to it, and two stacked boxes ending a row
/// (column) of color `c` need `s_{c+1} = -s_i` (`s_c = -s_i`).
pub fn vertical_rule_check(ctx: &ParityContext, st: &PlaneState) -> bool {
    let i = st.module.node as i64;
    let si = ctx.s(i);
    let n = st.layers.len() + 1;
    let finite_max = (0..=n)
        .map(|t| {
            let l = st.layer(t);
            let m = l.lambda.parts.first().copied().unwrap_or(0).max(l.mu.parts.first().copied().unwrap_or(0));
            m as i64 + l.lambda.len().max(l.mu.len()) as i64
        })
        .max()
        .unwrap_or(0);
    let w = finite_max + 3;
    for t in 0..n {
        let lower = st.layer(t);
        let upper = st.layer(t + 1);
        for b in 0..w {
            for a in 0..w {
                if !upper.contains(a, b) {
                    continue;
                }
                if !lower.contains(a, b) {
                    return false;
                }
                if a == b && !lower.contains(a, a + 1) {
                    return false;
                }
                let edge = a + 1 >= w || b + 1 >= w;
                if edge {
                    continue;
                }
                let c = a - b + i;
                if a >= b && !lower.contains(a + 1, b) && ctx.s(c + 1) != -si {
                    return false;
                }
                if a < b && !lower.contains(a, b + 1) && ctx.s(c) != -si {
                    return false;
                }
            }
        }
    }
    true
}

fn sqrt_monomial(m: Monomial) -> Result<Monomial> {
    if m.eq % 2 != 0 || m.ed % 2 != 0 || m.ek % 2 != 0 || m.coeff != num_rational::Rational64::from_integer(1) {
        return Err(Error::InvalidBoundary(format!("no monomial square root of {m}")));
    }
    Ok(Monomial::new(m.coeff, m.eq / 2, m.ed / 2, m.ek / 2))
}

/// Solves `ρ(y) = c h(q2^s y) / h(y)` on the factors of `ρ`: returns the
/// exponents of `h`, one `q2`-orbit at a time.
fn telescope(rho: &SpectralFunction, s: i8) -> Result<BTreeMap<Monomial, i32>> {
    let mut orbits: BTreeMap<(i32, i32, i32), BTreeMap<i32, i32>> = BTreeMap::new();
    for (m, &e) in rho.factors() {
        if m.coeff != num_rational::Rational64::from_integer(1) {
            return Err(Error::InvalidBoundary(format!("factor (1 - {m} x) off the q-lattice")));
        }
        orbits.entry((m.eq.rem_euclid(4), m.ed, m.ek)).or_default().insert(m.eq.div_euclid(4), e);
    }
    let mut h = BTreeMap::new();
    for ((r, ed, ek), terms) in orbits {
        if terms.values().sum::<i32>() != 0 {
            return Err(Error::InvalidBoundary("boundary is not colorless: tail does not telescope".into()));
        }
        let lo = *terms.keys().next().expect("nonempty") - 1;
        let hi = *terms.keys().last().expect("nonempty") + 1;
        let sum_from = |n: i32| -> i32 {
            terms.iter().filter(|(j, _)| if s > 0 { **j <= n } else { **j >= n }).map(|(_, e)| *e).sum()
        };
        for n in lo..=hi {
            let f = -sum_from(n);
            if f != 0 {
                h.insert(Monomial::new(num_rational::Rational64::from_integer(1), r + 4 * n, ed, ek), f);
            }
        }
    }
    Ok(h)
}

/// The stable value `S_c` of the renormalized vertical part on its vacuum
/// at node `c`, written with symmetric factors `(b^{-1/2} - b^{1/2} x)`.
pub fn vertical_highest_weight(ctx: &ParityContext, module: &MacMahonModule, c: usize) -> Result<SpectralFunction> {
    let fam = module.layer_family(ctx);
    let node = module.node;
    let s = ctx.s(node as i64);
    let c = ctx.node(c as i64);
    let b = k_eigenvalue(ctx, &module.boundary().fock(fam), c)?;
    let rho = if c == node { b.div(&SpectralFunction::psi(-i64::from(s), Monomial::one())) } else { b };
    let mut out = if c == node { SpectralFunction::f_level(0, Monomial::one()) } else { SpectralFunction::one() };
    for (m, f) in telescope(&rho, s)? {
        let half = sqrt_monomial(m)?;
        let inv = half.inv().expect("nonzero");
        out = &out * &SpectralFunction::linear(inv, half, -f)?;
    }
    Ok(out)
}

/// Cutoffs: explicit vertical layers plus `extra`, each layer with three
/// slot pairs beyond its length plus `slots`.
struct PlaneChain {
    chain: TensorChain,
    /// The trailing items that renormalize the vertical part.
    renorm: TensorChain,
}

fn plane_chain(ctx: &ParityContext, st: &PlaneState, extra: usize, slots: usize) -> Result<PlaneChain> {
    let m = &st.module;
    let fam = m.layer_family(ctx);
    let sign = -ctx.s(m.node as i64);
    let total = m.alpha_len() + st.vertical_len() + extra;
    let mut chain = TensorChain::default();
    let boundary = m.boundary();
    let bstate = boundary.fock(fam);
    let mut tail: Vec<SpectralFunction> = vec![SpectralFunction::one(); ctx.size()];
    for t in 0..total {
        let layer = st.layer(t);
        let f = layer.fock(fam);
        let shift = m.layer_shift(ctx, t);
        let mut local = Vec::new();
        push_pure(ctx, &mut chain, &mut local, sign, m.node, &f.lambda, &f.mu, shift, f.lambda.len() + 3 + slots);
        if t >= m.alpha_len() {
            for (c, acc) in tail.iter_mut().enumerate() {
                *acc = &*acc * &k_eigenvalue(ctx, &bstate, c)?.rescale(shift);
            }
        }
    }
    let mut renorm = TensorChain::default();
    for (c, vac) in tail.iter().enumerate() {
        let r = vertical_highest_weight(ctx, m, c)?.div(vac);
        if !r.is_one() {
            chain.push_renorm(c, r.clone());
            renorm.push_renorm(c, r);
        }
    }
    Ok(PlaneChain { chain, renorm })
}

/// `K_i^±(z)` eigenvalue, certified by one more layer and one more slot
/// pair per layer.
pub fn macmahon_k_eigenvalue(ctx: &ParityContext, st: &PlaneState, i: usize) -> Result<SpectralFunction> {
    st.check(ctx)?;
    let value = plane_chain(ctx, st, 3, 0)?.chain.eigenvalue(ctx, i);
    let witness = plane_chain(ctx, st, 4, 1)?.chain.eigenvalue(ctx, i);
    if value != witness {
        return Err(Error::Unstable(format!("K_{i} on {st}: {value} versus {witness}")));
    }
    Ok(match st.module.special_level(ctx)? {
        Some(n) => value.specialize_k(n),
        None => value,
    })
}

pub fn macmahon_k_eigenvalues(ctx: &ParityContext, st: &PlaneState) -> Result<Vec<SpectralFunction>> {
    (0..ctx.size()).map(|i| macmahon_k_eigenvalue(ctx, st, i)).collect()
}

/// Two levels: the move inside its Fock layer, then the coproduct over
/// whole layers. Flattening all slots into one chain would let a pole of an
/// earlier layer's eigenvalue cancel a zero that keeps the layer a Fock state.
fn plane_moves(
    ctx: &ParityContext,
    st: &PlaneState,
    i: usize,
    dir: Ladder,
    extra: usize,
    slots: usize,
) -> Result<Vec<MatrixCoeff<PlaneState>>> {
    let m = &st.module;
    let fam = m.layer_family(ctx);
    let sign = -ctx.s(m.node as i64);
    let odd_generator = ctx.is_odd(i as i64);
    let level = m.special_level(ctx)?;
    // the cutoff layers above the first empty one only reach unordered stacks
    let reach = m.alpha_len() + st.vertical_len();
    let total = reach + extra;
    let mut layers = Vec::with_capacity(total);
    for t in 0..total {
        let f = st.layer(t).fock(fam);
        let mut chain = TensorChain::default();
        let mut roles = Vec::new();
        push_pure(ctx, &mut chain, &mut roles, sign, m.node, &f.lambda, &f.mu, m.layer_shift(ctx, t), f.lambda.len() + 3 + slots);
        let parity: u32 = chain.items.iter().map(|it| match it {
            ChainItem::Factor(lf) => u32::from(lf.parity(ctx)),
            ChainItem::Renorm { .. } => 0,
        }).sum();
        layers.push((f, chain, roles, parity));
    }
    let renorm = plane_chain(ctx, st, extra, slots)?.renorm;
    let delta = if dir == Ladder::F { 1 } else { -1 };
    let mut out = Vec::new();
    let mut parity_before = 0u32;
    for t in 0..total {
        let (f, chain, roles, parity) = &layers[t];
        if t <= reach {
            let env = match dir {
                Ladder::F => layers[..t].iter().map(|l| l.1.eigenvalue(ctx, i)).product::<SpectralFunction>(),
                Ladder::E => &layers[t + 1..].iter().map(|l| l.1.eigenvalue(ctx, i)).product::<SpectralFunction>()
                    * &renorm.eigenvalue(ctx, i),
            };
            for mv in chain.moves(ctx, i, dir)? {
                let Some(moved) = apply_role(f, roles[mv.item], delta).filter(|g| is_admissible(ctx, g)) else {
                    return Err(Error::IllDefined(format!("{dir:?}_{i} on {st} leaves the Fock layer {t} with {}", mv.scalar)));
                };
                let x0 = mv.support.inv().expect("nonzero support");
                let value = env.evaluate(x0).map_err(|e| {
                    Error::IllDefined(format!("{dir:?}_{i} on {st} at layer {t}: environment {env} at x = {x0}: {e}"))
                })?;
                if value.is_zero() {
                    continue;
                }
                let mut scalar = value * mv.scalar;
                if let Some(n) = level {
                    scalar = scalar.specialize_k(n).map_err(|_| {
                        Error::IllDefined(format!("{dir:?}_{i} on {st} at layer {t} has a pole at K = q^{n}"))
                    })?;
                    if scalar.is_zero() {
                        continue;
                    }
                }
                if odd_generator && parity_before % 2 == 1 {
                    scalar = scalar.scale(Monomial::int(-1));
                }
                let mut new_layers: Vec<LayerPair> = (0..st.layers.len().max(t + 1)).map(|u| st.layer(u)).collect();
                new_layers[t] = LayerPair::from_fock(st.layer(t).lambda.inf, &moved);
                out.push(MatrixCoeff { support: mv.support, scalar, target: PlaneState::new(m.clone(), new_layers) });
            }
        }
        parity_before += parity;
    }
    out.sort_by(|a, b| a.target.cmp(&b.target).then(a.support.cmp(&b.support)));
    Ok(out)
}

/// Moves of `E_i(z)` or `F_i(z)` in the tensor product of layers, including
/// those into stacks that are not plane states, up to the first empty layer.
/// `st` need not be valid.
pub fn stack_moves(ctx: &ParityContext, st: &PlaneState, i: usize, dir: Ladder) -> Result<Vec<MatrixCoeff<PlaneState>>> {
    let out = plane_moves(ctx, st, i, dir, 3, 0)?;
    if out != plane_moves(ctx, st, i, dir, 4, 1)? {
        return Err(Error::Unstable(format!("{dir:?}_{i} on {st} changes with the cutoff")));
    }
    Ok(out)
}

/// Nonzero matrix coefficients of `E_i(z)` or `F_i(z)` on a plane state.
///
/// Plane states span a submodule of the layer tensor product. With
/// prohibited boxes `K` is set to [`MacMahonModule::special_level`], where
/// the states holding them span a smaller one; moves into it are dropped.
pub fn plane_ladder_coeffs(ctx: &ParityContext, st: &PlaneState, i: usize, dir: Ladder) -> Result<Vec<MatrixCoeff<PlaneState>>> {
    st.check(ctx)?;
    let mut out = Vec::new();
    for c in stack_moves(ctx, st, i, dir)? {
        if st.module.forbidden.iter().any(|cell| c.target.contains(*cell)) {
            continue;
        }
        if !c.target.is_valid(ctx) {
            return Err(Error::IllDefined(format!("{dir:?}_{i} on {st} leaves the module: {} with {}", c.target, c.scalar)));
        }
        out.push(c);
    }
    Ok(out)
}

/// Which parity governs a tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableauRole {
    /// Parity `s`.
    First,
    /// Parity `s'` with `s'_i = s_{1-i}`.
    Second,
}

/// A reverse semistandard super-tableau, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperTableau {
    pub rows: Vec<Vec<u32>>,
    pub role: TableauRole,
}

impl SuperTableau {
    pub fn shape(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.len() as u32).collect()
    }

    /// The row and column rules under the parity of its role.
    pub fn is_valid(&self, ctx: &ParityContext) -> bool {
        let s = |v: u32| match self.role {
            TableauRole::First => ctx.s(i64::from(v)),
            TableauRole::Second => ctx.s(1 - i64::from(v)),
        };
        if self.rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return false;
        }
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 0 {
                    return false;
                }
                if let Some(&right) = row.get(c + 1) {
                    if v < right || (v == right && s(v) != 1) {
                        return false;
                    }
                }
                if let Some(&down) = self.rows.get(r + 1).and_then(|n| n.get(c)) {
                    if v < down || (v == down && s(v) != -1) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `prod z_0 .. z_{a-1}` for the first role, `prod z_{-1} .. z_{-(a-1)}`
    /// for the second, per box of value `a`.
    pub fn weight(&self, ctx: &ParityContext) -> Vec<u32> {
        let mut out = vec![0u32; ctx.size()];
        for &v in self.rows.iter().flatten() {
            let v = i64::from(v);
            match self.role {
                TableauRole::First => (0..v).for_each(|c| out[ctx.node(c)] += 1),
                TableauRole::Second => (1..v).for_each(|c| out[ctx.node(-c)] += 1),
            }
        }
        out
    }
}

fn check_tableau_module(ctx: &ParityContext, module: &MacMahonModule) -> Result<()> {
    if !module.is_pure() || module.node != 0 || ctx.s(0) != -1 {
        return Err(Error::InvalidState("tableaux need the pure module at node 0 with s_0 = -1".into()));
    }
    Ok(())
}

/// Columns of the first tableau are the `λ` layers; columns of the second
/// are the `μ` layers (padded with zeros to `ℓ(λ)`) plus one.
pub fn to_tableaux(ctx: &ParityContext, st: &PlaneState) -> Result<(SuperTableau, SuperTableau)> {
    check_tableau_module(ctx, &st.module)?;
    st.check(ctx)?;
    let height = st.layers.first().map_or(0, |l| l.lambda.len());
    let mut t1 = vec![Vec::new(); height];
    let mut t2 = vec![Vec::new(); height];
    for layer in &st.layers {
        for r in 0..layer.lambda.len() {
            t1[r].push(layer.lambda.fin(r + 1));
            t2[r].push(layer.mu.fin(r + 1) + 1);
        }
    }
    Ok((SuperTableau { rows: t1, role: TableauRole::First }, SuperTableau { rows: t2, role: TableauRole::Second }))
}

pub fn from_tableaux(ctx: &ParityContext, t1: &SuperTableau, t2: &SuperTableau) -> Result<PlaneState> {
    if t1.shape() != t2.shape() || t1.role != TableauRole::First || t2.role != TableauRole::Second {
        return Err(Error::InvalidState("tableaux must have equal shapes and roles (first, second)".into()));
    }
    if !t1.is_valid(ctx) || !t2.is_valid(ctx) {
        return Err(Error::InvalidState("tableau rules violated".into()));
    }
    let width = t1.rows.first().map_or(0, |r| r.len());
    let mut layers = Vec::with_capacity(width);
    for c in 0..width {
        let lambda: Vec<u32> = t1.rows.iter().filter_map(|r| r.get(c).copied()).collect();
        let mu: Vec<u32> = t2.rows.iter().filter_map(|r| r.get(c).map(|v| v - 1)).collect();
        layers.push(LayerPair::new(&lambda, &mu));
    }
    let st = PlaneState::new(MacMahonModule::pure(0), layers);
    check_tableau_module(ctx, &st.module)?;
    st.check(ctx)?;
    Ok(st)
}

/// Triples `a ≥_j b ≥_j c` of layers with at most `max_boxes` boxes where
/// `a ≥_j c` fails; transitivity needs `ℓ(μ_b) ≤ ℓ(λ_b)` and more.
pub fn transitivity_counterexamples(ctx: &ParityContext, j: usize, max_boxes: u32) -> Result<Vec<[LayerPair; 3]>> {
    let fam = FockFamily::pure(-ctx.s(j as i64), j);
    let layers: Vec<LayerPair> = enumerate(ctx, fam, max_boxes)?.iter().map(|st| LayerPair::from_fock(0, st)).collect();
    let mut out = BTreeSet::new();
    for a in &layers {
        for b in layers.iter().filter(|b| layer_dominates(ctx, a, b, j)) {
            for c in layers.iter().filter(|c| layer_dominates(ctx, b, c, j)) {
                if !layer_dominates(ctx, a, c, j) {
                    out.insert([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}
