//! Characters: direct enumeration, the fermionic sums for Fock modules, the
//! MacMahon product and its restricted version, the tableaux count, and the
//! windowed characters of the vector and covector representations.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::CharSeries;
use crate::parity::ParityContext;
use crate::plane::{enumerate_plane, plane_degree, plane_vacuum, MacMahonModule};
use crate::spart::{degree, enumerate, FockFamily};

/// Which Fock module a fermionic sum describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FermionicVariant {
    /// `F_{Λk}`.
    PurePlus,
    /// `F_{-Λk}`.
    PureMinus,
    /// `F_{s_{k+1}(rΛ_{k+1} - (r+1)Λ_k)}`.
    NonPureVector(usize),
    /// `F_{s_k(rΛ_{k-1} - (r+1)Λ_k)}`.
    NonPureCovector(usize),
    /// The second form of the `F_{Λk}` sum, built on `k` extra rows.
    Rewritten,
}

impl FermionicVariant {
    /// The family whose direct character the sum should reproduce.
    pub fn family(self, k: usize) -> FockFamily {
        match self {
            FermionicVariant::PurePlus | FermionicVariant::Rewritten => FockFamily::pure(1, k),
            FermionicVariant::PureMinus => FockFamily::pure(-1, k),
            FermionicVariant::NonPureVector(r) => FockFamily::NonPureVector { node: k, r },
            FermionicVariant::NonPureCovector(r) => FockFamily::NonPureCovector { node: k, r },
        }
    }

    /// The variant for a family, if it has a fermionic formula.
    pub fn for_family(fam: FockFamily) -> Option<(usize, Self)> {
        match fam {
            FockFamily::Pure { sign, node } => Some((node, if sign > 0 { Self::PurePlus } else { Self::PureMinus })),
            FockFamily::NonPureVector { node, r } => Some((node, Self::NonPureVector(r))),
            FockFamily::NonPureCovector { node, r } => Some((node, Self::NonPureCovector(r))),
            _ => None,
        }
    }
}

/// A module whose character can be requested.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharFamily {
    Fock { family: FockFamily },
    MacMahon { module: MacMahonModule },
    /// Pure `M_k` with the first layer inside an `L1 x L2` box.
    Restricted { node: usize, l1: u32, l2: u32 },
    /// `V` (`covector = false`) or `W` over `T` periods on each side.
    Window { covector: bool, periods: u32 },
}

impl CharFamily {
    /// Parses the Fock and MacMahon descriptors plus
    /// `restricted:{node}:{L1}:{L2}` and `window:{v|w}:{T}`.
    pub fn parse(text: &str, ctx: &ParityContext) -> Result<Self> {
        let bad = |why: &str| Error::InvalidFamily(format!("{text:?}: {why}"));
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad("expected a nonnegative integer"));
        let fields: Vec<&str> = text.split(':').collect();
        match fields.as_slice() {
            ["macmahon", ..] => Ok(CharFamily::MacMahon { module: MacMahonModule::parse(text, ctx)? }),
            ["restricted", node, l1, l2] => {
                let node = num(node)? as usize;
                if node >= ctx.size() {
                    return Err(bad("node out of range"));
                }
                Ok(CharFamily::Restricted { node, l1: num(l1)?, l2: num(l2)? })
            }
            ["window", kind, t] => {
                let covector = match *kind {
                    "v" | "V" => false,
                    "w" | "W" => true,
                    _ => return Err(bad("window kind must be v or w")),
                };
                Ok(CharFamily::Window { covector, periods: num(t)?.max(1) })
            }
            _ => Ok(CharFamily::Fock { family: FockFamily::parse(text, ctx)? }),
        }
    }

    pub fn descriptor(&self, ctx: &ParityContext) -> String {
        match self {
            CharFamily::Fock { family } => family.descriptor(ctx),
            CharFamily::MacMahon { module } => module.descriptor(),
            CharFamily::Restricted { node, l1, l2 } => format!("restricted:{node}:{l1}:{l2}"),
            CharFamily::Window { covector, periods } => format!("window:{}:{periods}", if *covector { "w" } else { "v" }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Direct,
    Fermionic,
    Product,
    Restricted,
    Rewritten,
    Tableaux,
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "direct" => Formula::Direct,
            "fermionic" => Formula::Fermionic,
            "product" => Formula::Product,
            "restricted" => Formula::Restricted,
            "rewritten" => Formula::Rewritten,
            "tableaux" => Formula::Tableaux,
            _ => return Err(Error::InvalidFamily(format!("unknown formula {s:?}"))),
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Formula::Direct => "direct",
            Formula::Fermionic => "fermionic",
            Formula::Product => "product",
            Formula::Restricted => "restricted",
            Formula::Rewritten => "rewritten",
            Formula::Tableaux => "tableaux",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CharRequest {
    pub ctx: ParityContext,
    pub family: CharFamily,
    pub trunc: u32,
    pub formula: Formula,
}

/// Dispatches a request; the window family returns its Laurent character
/// through [`char_vector_window`] instead.
pub fn character(req: &CharRequest) -> Result<CharSeries> {
    let (ctx, d) = (&req.ctx, req.trunc);
    let mismatch = || Error::Formula(format!("formula {} does not apply to {}", req.formula, req.family.descriptor(ctx)));
    match (&req.family, req.formula) {
        (CharFamily::Window { .. }, _) => Err(mismatch()),
        (fam, Formula::Direct) => char_direct(ctx, fam, d),
        (CharFamily::Fock { family }, Formula::Fermionic) => {
            let (k, v) = FermionicVariant::for_family(*family).ok_or_else(mismatch)?;
            char_fock_fermionic(ctx, k, v, d)
        }
        (CharFamily::Fock { family: FockFamily::Pure { sign: 1, node } }, Formula::Rewritten) => {
            char_fock_fermionic(ctx, *node, FermionicVariant::Rewritten, d)
        }
        (CharFamily::MacMahon { module }, Formula::Product) if module.is_pure() && module.forbidden.is_empty() => {
            char_macmahon_product(ctx, module.node, d)
        }
        (CharFamily::MacMahon { module }, Formula::Tableaux) if module.is_pure() && module.forbidden.is_empty() => {
            char_tableaux(ctx, module.node, d)
        }
        (CharFamily::Restricted { node, l1, l2 }, Formula::Restricted | Formula::Product) => {
            char_restricted(ctx, *node, *l1, *l2, d)
        }
        _ => Err(mismatch()),
    }
}

fn series_from_degrees(width: usize, d: u32, degrees: impl IntoIterator<Item = Vec<u32>>) -> CharSeries {
    let mut out = CharSeries::zero(width, d);
    for e in degrees {
        out.add_term(e, 1);
    }
    out
}

/// The sum of degrees of all states up to `d` boxes.
pub fn char_direct(ctx: &ParityContext, family: &CharFamily, d: u32) -> Result<CharSeries> {
    let n = ctx.size();
    match family {
        CharFamily::Fock { family } => {
            let states = enumerate(ctx, *family, d)?;
            Ok(series_from_degrees(n, d, states.iter().map(|s| degree(ctx, s))))
        }
        CharFamily::MacMahon { module } => {
            let vac = plane_vacuum(ctx, module)?;
            let states = enumerate_plane(ctx, module, d)?;
            let degs: Result<Vec<_>> = states.iter().map(|s| plane_degree(ctx, s, &vac)).collect();
            Ok(series_from_degrees(n, d, degs?))
        }
        CharFamily::Restricted { node, l1, l2 } => char_restricted_direct(ctx, *node, *l1, *l2, d),
        CharFamily::Window { .. } => Err(Error::InvalidFamily("window characters are Laurent; use char_vector_window".into())),
    }
}

/// Per-index data of a fermionic sum: weights of `a_j` and `b_j` in the
/// exponent of each `z`, and the quadratic `p`-exponent flags.
struct Fermionic {
    n: usize,
    /// `za[j][c]`: exponent of `z_c` contributed by one unit of `a_j`.
    za: Vec<Vec<i64>>,
    zb: Vec<Vec<i64>>,
    offset: Vec<i64>,
    /// `a_j (a_j - 1) qa[j] / 2` is the quadratic `p`-exponent.
    qa: Vec<i64>,
    qb: Vec<i64>,
    /// `|a| - |b|`.
    excess: i64,
}

fn z_range(ctx: &ParityContext, lo: i64, hi: i64) -> Vec<i64> {
    let mut v = vec![0i64; ctx.size()];
    for c in lo..=hi {
        v[ctx.node(c)] += 1;
    }
    v
}

fn fermionic_data(ctx: &ParityContext, k: usize, variant: FermionicVariant) -> Fermionic {
    let n = ctx.size();
    let ki = k as i64;
    let ni = n as i64;
    let s = |j: i64| i64::from(ctx.s(j));
    let half = |x: i64| {
        debug_assert!(x % 2 == 0);
        x / 2
    };
    // position t = j - k in 0..N; arrays indexed by the residue j mod N
    let mut za = vec![vec![0; n]; n];
    let mut zb = vec![vec![0; n]; n];
    let mut qa = vec![0; n];
    let mut qb = vec![0; n];
    let mut offset = vec![0i64; n];
    let excess;
    if variant == FermionicVariant::Rewritten {
        for i in 0..ni {
            // z_j^{sum_{i >= j} a_i}: a_i reaches z_0..z_i; b_i reaches z_i..z_{N-1} for i >= 1
            za[i as usize] = z_range(ctx, 0, i);
            if i >= 1 {
                zb[i as usize] = z_range(ctx, i, ni - 1);
            }
            qa[i as usize] = if i <= ni - 2 { half(s(i + 1) + 1) } else { 0 };
            qb[i as usize] = if i >= 1 { half(s(i) + 1) } else { 0 };
        }
        for j in 0..ki {
            offset[ctx.node(j)] -= ki - j;
        }
        excess = ki;
    } else {
        let (sa, sb): (Box<dyn Fn(i64) -> i64>, Box<dyn Fn(i64) -> i64>) = match variant {
            FermionicVariant::PurePlus => (Box::new(move |j| 1 + s(j + 1)), Box::new(move |j| 1 + s(j))),
            FermionicVariant::PureMinus => (Box::new(move |j| 1 - s(j + 1)), Box::new(move |j| 1 - s(j))),
            FermionicVariant::NonPureVector(_) => {
                let sk = s(ki + 1);
                (Box::new(move |j| 1 - sk * s(j + 1)), Box::new(move |j| 1 - sk * s(j)))
            }
            FermionicVariant::NonPureCovector(_) => {
                let sk = s(ki);
                (Box::new(move |j| 1 - sk * s(j + 1)), Box::new(move |j| 1 - sk * s(j)))
            }
            FermionicVariant::Rewritten => unreachable!(),
        };
        for j in ki..ki + ni {
            let r = ctx.node(j);
            za[r] = z_range(ctx, ki, j);
            zb[r] = z_range(ctx, j, ni + ki - 1);
            qa[r] = half(sa(j));
            qb[r] = half(sb(j));
        }
        // p^{-b_k}
        for c in zb[k].iter_mut() {
            *c -= 1;
        }
        excess = match variant {
            FermionicVariant::NonPureVector(r) => {
                offset[k] -= r as i64;
                r as i64
            }
            FermionicVariant::NonPureCovector(r) => -(r as i64),
            _ => 0,
        };
    }
    Fermionic { n, za, zb, offset, qa, qb, excess }
}

/// `prod 1/(p)_{a}` as a univariate series in `p` up to `p^top`.
fn inv_pochhammer_product(parts: &[u32], top: usize) -> Vec<i64> {
    let mut out = vec![0i64; top + 1];
    out[0] = 1;
    for &a in parts {
        for s in 1..=a as usize {
            if s > top {
                break;
            }
            // multiply by 1/(1 - p^s)
            for t in s..=top {
                out[t] += out[t - s];
            }
        }
    }
    out
}

fn compositions(len: usize, total_weight: i64, weights: &[i64], out: &mut Vec<Vec<u32>>, acc: &mut Vec<u32>) {
    if acc.len() == len {
        out.push(acc.clone());
        return;
    }
    let w = weights[acc.len()];
    let mut x = 0u32;
    loop {
        let used: i64 = acc.iter().zip(weights).map(|(a, w)| i64::from(*a) * w).sum::<i64>() + i64::from(x) * w;
        if used > total_weight {
            break;
        }
        acc.push(x);
        compositions(len, total_weight, weights, out, acc);
        acc.pop();
        if w == 0 {
            break;
        }
        x += 1;
    }
}

/// The fermionic character sum for the Fock module of `variant` at node `k`,
/// truncated at total degree `d`.
pub fn char_fock_fermionic(ctx: &ParityContext, k: usize, variant: FermionicVariant, d: u32) -> Result<CharSeries> {
    if k >= ctx.size() {
        return Err(Error::InvalidFamily(format!("node {k} out of range")));
    }
    if variant == FermionicVariant::Rewritten && (!ctx.is_standard() || ctx.n() == 0 || k > ctx.m()) {
        // the extra-row form drops the a_{N-1} and b_0 quadratic terms, which vanish only for s_0 = -1
        return Err(Error::Formula(format!("the rewritten sum needs standard parity with n > 0 and k <= m, got k = {k}")));
    }
    let data = fermionic_data(ctx, k, variant);
    let n = data.n;
    let deg = |v: &[i64]| v.iter().sum::<i64>();
    let wa: Vec<i64> = data.za.iter().map(|v| deg(v)).collect();
    let wb: Vec<i64> = data.zb.iter().map(|v| deg(v)).collect();
    let off = deg(&data.offset);
    // every a_j costs at least one box; the b with zero weight is fixed by |a| - |b| = excess
    if wa.iter().any(|w| *w < 1) || wb.iter().filter(|w| **w == 0).count() > 1 || wb.iter().any(|w| *w < 0) {
        return Err(Error::Formula("fermionic weights out of range".into()));
    }
    let free = wb.iter().position(|w| *w == 0);
    let budget = i64::from(d) - off;
    let mut avecs = Vec::new();
    compositions(n, budget, &wa, &mut avecs, &mut Vec::new());
    let terms: Result<Vec<Vec<(Vec<u32>, i64)>>> = avecs
        .par_iter()
        .map(|a| {
            let mut local = Vec::new();
            let da: i64 = a.iter().zip(&wa).map(|(x, w)| i64::from(*x) * w).sum();
            let asum: i64 = a.iter().map(|x| i64::from(*x)).sum();
            let bsum = asum - data.excess;
            if bsum < 0 {
                return Ok(local);
            }
            let mut bvecs = Vec::new();
            compositions(n, budget - da, &wb, &mut bvecs, &mut Vec::new());
            for mut b in bvecs {
                let rest: i64 = b.iter().map(|x| i64::from(*x)).sum();
                match free {
                    Some(f) if rest <= bsum => b[f] = (bsum - rest) as u32,
                    None if rest == bsum => {}
                    _ => continue,
                }
                let mut e = data.offset.clone();
                for j in 0..n {
                    for c in 0..n {
                        e[c] += i64::from(a[j]) * data.za[j][c] + i64::from(b[j]) * data.zb[j][c];
                    }
                }
                let quad: i64 = (0..n)
                    .map(|j| {
                        let (x, y) = (i64::from(a[j]), i64::from(b[j]));
                        x * (x - 1) * data.qa[j] / 2 + y * (y - 1) * data.qb[j] / 2
                    })
                    .sum();
                for c in e.iter_mut() {
                    *c += quad;
                }
                if let Some(c) = e.iter().position(|x| *x < 0) {
                    return Err(Error::Formula(format!(
                        "fermionic term a = {a:?}, b = {b:?} has z_{c} exponent {}",
                        e[c]
                    )));
                }
                let base = deg(&e);
                if base > i64::from(d) {
                    continue;
                }
                let top = ((i64::from(d) - base) / n as i64) as usize;
                let parts: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
                for (t, c) in inv_pochhammer_product(&parts, top).into_iter().enumerate() {
                    if c != 0 {
                        local.push((e.iter().map(|x| (*x + t as i64) as u32).collect(), c));
                    }
                }
            }
            Ok(local)
        })
        .collect();
    let mut out = CharSeries::zero(n, d);
    for chunk in terms? {
        for (e, c) in chunk {
            out.add_term(e, c);
        }
    }
    Ok(out)
}

/// `z_{i..j}` as an exponent vector.
fn z_root(ctx: &ParityContext, i: i64, j: i64) -> Vec<u32> {
    z_range(ctx, i, j).into_iter().map(|x| x as u32).collect()
}

fn root_factor(ctx: &ParityContext, i: i64, j: i64, d: u32) -> Result<CharSeries> {
    let n = ctx.size();
    let e = z_root(ctx, i, j);
    Ok(if ctx.root_sign(i, j)?.value() > 0 {
        CharSeries::geometric(n, d, &e)
    } else {
        let mut s = CharSeries::one(n, d);
        s.add_term(e, 1);
        s
    })
}

fn root_product(ctx: &ParityContext, iv: std::ops::RangeInclusive<i64>, jv: std::ops::RangeInclusive<i64>, d: u32) -> Result<CharSeries> {
    let pairs: Vec<(i64, i64)> = iv
        .flat_map(|i| jv.clone().map(move |j| (i, j)))
        .filter(|(i, j)| j - i < i64::from(d))
        .collect();
    let factors: Result<Vec<CharSeries>> = pairs.par_iter().map(|&(i, j)| root_factor(ctx, i, j, d)).collect();
    Ok(factors?.into_iter().fold(CharSeries::one(ctx.size(), d), |acc, f| acc.mul(&f)))
}

/// `prod_{i <= k <= j} (1 - σ(i,j) z_{i,j})^{-σ(i,j)}` up to degree `d`.
pub fn char_macmahon_product(ctx: &ParityContext, k: usize, d: u32) -> Result<CharSeries> {
    let k = k as i64;
    let span = i64::from(d);
    root_product(ctx, k - span..=k, k..=k + span, d)
}

/// The product over `k - L1 <= i <= k <= j <= k + L2`.
pub fn char_restricted(ctx: &ParityContext, k: usize, l1: u32, l2: u32, d: u32) -> Result<CharSeries> {
    let k = k as i64;
    root_product(ctx, k - i64::from(l1)..=k, k..=k + i64::from(l2), d)
}

/// Bounds `(λ^{(1)}_1, μ^{(1)}_1)` of the first layer that the restricted
/// product counts: `λ_1 <= L2 + 1`, `μ_1 <= L1`, for every parity and node.
/// The product runs over colors `k - L1 .. k + L2`; first-layer rows reach
/// colors `k ..` and columns `k - 1 ..` downwards.
pub fn restricted_bounds(l1: u32, l2: u32) -> (u32, u32) {
    (l2 + 1, l1)
}

/// Direct count of restricted plane states under [`restricted_bounds`].
pub fn char_restricted_direct(ctx: &ParityContext, k: usize, l1: u32, l2: u32, d: u32) -> Result<CharSeries> {
    let module = MacMahonModule::pure(k);
    let vac = plane_vacuum(ctx, &module)?;
    let (lb, mb) = restricted_bounds(l1, l2);
    let mut out = CharSeries::zero(ctx.size(), d);
    for st in enumerate_plane(ctx, &module, d)? {
        let first = st.layer(0);
        if first.lambda.fin(1) <= lb && first.mu.fin(1) <= mb {
            out.add_term(plane_degree(ctx, &st, &vac)?, 1);
        }
    }
    Ok(out)
}

/// The parity seen from node `k`: `s'_t = s_{k+t}`.
fn shifted(ctx: &ParityContext, k: usize) -> ParityContext {
    let signs: Vec<i8> = (1..=ctx.size() as i64).map(|t| ctx.s(k as i64 + t)).collect();
    ParityContext::from_signs(&signs).expect("a rotation of a valid parity is valid")
}

/// Generating series of reverse semistandard super-tableaux of shape `shape`,
/// by the multiset of values; `weight(v)` is the exponent vector of a box.
fn tableau_series(
    shape: &[usize],
    repeat_in_row: &dyn Fn(u32) -> bool,
    weight: &dyn Fn(u32) -> Vec<u32>,
    cost: &dyn Fn(u32) -> u32,
    width: usize,
    d: u32,
) -> BTreeMap<Vec<u32>, i64> {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut grid: Vec<Vec<u32>> = shape.iter().map(|&l| vec![0; l]).collect();
    let mut out = BTreeMap::new();
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<u32>>,
        budget: u32,
        acc: &mut Vec<u32>,
        f: &(&dyn Fn(u32) -> bool, &dyn Fn(u32) -> Vec<u32>, &dyn Fn(u32) -> u32),
        out: &mut BTreeMap<Vec<u32>, i64>,
    ) {
        if idx == cells.len() {
            *out.entry(acc.clone()).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[idx];
        let remaining = (cells.len() - idx - 1) as u32;
        let mut hi = u32::MAX;
        if c > 0 {
            let left = grid[r][c - 1];
            hi = hi.min(if (f.0)(left) { left } else { left - 1 });
        }
        if r > 0 {
            let up = grid[r - 1][c];
            hi = hi.min(if !(f.0)(up) { up } else { up - 1 });
        }
        let mut v = 1u32;
        while v <= hi {
            let cv = (f.2)(v);
            // remaining cells cost at least cost(1)
            if cv + remaining * (f.2)(1) > budget {
                break;
            }
            if c > 0 && v == grid[r][c - 1] && !(f.0)(v) {
                v += 1;
                continue;
            }
            if r > 0 && v == grid[r - 1][c] && (f.0)(v) {
                v += 1;
                continue;
            }
            grid[r][c] = v;
            let w = (f.1)(v);
            for (a, b) in acc.iter_mut().zip(&w) {
                *a += b;
            }
            go(idx + 1, cells, grid, budget - cv, acc, f, out);
            for (a, b) in acc.iter_mut().zip(&w) {
                *a -= b;
            }
            v += 1;
        }
    }
    go(0, &cells, &mut grid, d, &mut vec![0; width], &(repeat_in_row, weight, cost), &mut out);
    out
}

fn partitions_up_to(n: u32) -> Vec<Vec<usize>> {
    fn go(left: u32, max: u32, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(acc.clone());
        for p in 1..=max.min(left) {
            acc.push(p as usize);
            go(left - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Counts admissible pairs of reverse super-tableaux of equal shape, for a node
/// with `s_k = -1`.
pub fn char_tableaux(ctx: &ParityContext, k: usize, d: u32) -> Result<CharSeries> {
    if ctx.s(k as i64) != -1 {
        return Err(Error::InvalidFamily(format!("the tableaux count needs s_{k} = -1")));
    }
    let n = ctx.size();
    let sh = shifted(ctx, k);
    let color = |c: i64| ctx.node(c + k as i64);
    let w1 = |v: u32| {
        let mut e = vec![0u32; n];
        (0..i64::from(v)).for_each(|c| e[color(c)] += 1);
        e
    };
    let w2 = |v: u32| {
        let mut e = vec![0u32; n];
        (1..i64::from(v)).for_each(|c| e[color(-c)] += 1);
        e
    };
    let r1 = |v: u32| sh.s(i64::from(v)) == 1;
    let r2 = |v: u32| sh.s(1 - i64::from(v)) == 1;
    let (c1, c2) = (|v: u32| v, |v: u32| v - 1);
    let mut out = CharSeries::zero(n, d);
    for shape in partitions_up_to(d) {
        let boxes: u32 = shape.iter().sum::<usize>() as u32;
        let t1 = tableau_series(&shape, &r1, &w1, &c1, n, d);
        let t2 = tableau_series(&shape, &r2, &w2, &c2, n, d - boxes);
        for (e1, x) in &t1 {
            for (e2, y) in &t2 {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), x * y);
            }
        }
    }
    Ok(out)
}

/// A finite Laurent polynomial in `z_0..z_{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct LaurentSeries {
    pub terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentSeries {
    pub fn add_term(&mut self, e: Vec<i64>, c: i64) {
        let v = self.terms.entry(e.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&e);
        }
    }

    /// `z_i -> z_i^{-1}`.
    pub fn invert(&self) -> Self {
        LaurentSeries { terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), *c)).collect() }
    }
}

/// Degree of `[u]_j` with `deg [u]_{-1} = 0`, or of `[u]^j` with `deg [u]^0 = 0`.
pub fn basis_degree(ctx: &ParityContext, covector: bool, j: i64) -> Vec<i64> {
    let n = ctx.size();
    let mut e = vec![0i64; n];
    if !covector {
        if j >= 0 {
            (0..=j).for_each(|c| e[ctx.node(c)] += 1);
        } else {
            (j + 1..=-1).for_each(|c| e[ctx.node(c)] -= 1);
        }
    } else if j >= 0 {
        (1..=j).for_each(|i| e[ctx.node(-i)] += 1);
    } else {
        (j + 1..=0).for_each(|i| e[ctx.node(-i)] -= 1);
    }
    e
}

/// The character of `V` over `[u]_j`, `-NT-1 <= j <= NT-2`, or of `W` over
/// `[u]^j`, `-NT+1 <= j <= NT` (the image of the `V` window under `j -> -1-j`).
pub fn char_vector_window(ctx: &ParityContext, covector: bool, periods: u32) -> LaurentSeries {
    let nt = (ctx.size() as u32 * periods) as i64;
    let range = if covector { -nt + 1..=nt } else { -nt - 1..=nt - 2 };
    let mut out = LaurentSeries::default();
    for j in range {
        out.add_term(basis_degree(ctx, covector, j), 1);
    }
    out
}

/// One row per exponent vector, header `z0,..,z{N-1},coeff`.
pub fn series_csv(s: &CharSeries) -> String {
    let mut out: Vec<String> = vec![(0..s.width()).map(|i| format!("z{i}")).chain(["coeff".to_string()]).collect::<Vec<_>>().join(",")];
    for (e, c) in s.terms() {
        out.push(e.iter().map(u32::to_string).chain([c.to_string()]).collect::<Vec<_>>().join(","));
    }
    out.join("\n") + "\n"
}

/// Same layout with signed exponents.
pub fn laurent_csv(s: &LaurentSeries, width: usize) -> String {
    let mut out: Vec<String> = vec![(0..width).map(|i| format!("z{i}")).chain(["coeff".to_string()]).collect::<Vec<_>>().join(",")];
    for (e, c) in &s.terms {
        out.push(e.iter().map(i64::to_string).chain([c.to_string()]).collect::<Vec<_>>().join(","));
    }
    out.join("\n") + "\n"
}

/// The principal series as a plain comma-separated coefficient list.
pub fn principal_csv(s: &CharSeries) -> String {
    s.principal().iter().map(i64::to_string).collect::<Vec<_>>().join(",") + "\n"
}
