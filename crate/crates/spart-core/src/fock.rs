//! The stabilized tensor engine: K-eigenvalues and E/F matrix coefficients of
//! vector, covector and Fock modules, computed from the local
//! representations and the coproduct.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Monomial, ScalarExpr, SpectralFunction};
use crate::parity::ParityContext;
use crate::spart::{is_admissible, FockFamily, FockState};

/// A basis vector `[c u]_j` of `V(c u)` or `[c u]^j` of `W(c u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalKind {
    Vector(i64),
    Covector(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFactor {
    pub kind: LocalKind,
    /// Evaluation parameter divided by `u`.
    pub shift: Monomial,
}

/// Raising (`F`) or lowering (`E`) generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ladder {
    E,
    F,
}

impl LocalFactor {
    pub fn vector(j: i64, shift: Monomial) -> Self {
        LocalFactor { kind: LocalKind::Vector(j), shift }
    }

    pub fn covector(j: i64, shift: Monomial) -> Self {
        LocalFactor { kind: LocalKind::Covector(j), shift }
    }

    /// `|[u]_j| = (1 - s_{j+1})/2`, `|[u]^j| = (1 - s_j)/2`.
    pub fn parity(&self, ctx: &ParityContext) -> u8 {
        let s = match self.kind {
            LocalKind::Vector(j) => ctx.s(j + 1),
            LocalKind::Covector(j) => ctx.s(j),
        };
        u8::from(s < 0)
    }
}

/// The `K_i^±(z)` eigenvalue of a local basis vector, as a function of `u/z`.
pub fn local_eigenvalue(ctx: &ParityContext, f: &LocalFactor, i: usize) -> SpectralFunction {
    let i = ctx.node(i as i64);
    match f.kind {
        LocalKind::Vector(j) => {
            let mut out = SpectralFunction::one();
            if ctx.node(j) == i {
                out = &out * &SpectralFunction::psi(-i64::from(ctx.s(j + 1)), Monomial::q1(-ctx.bar(j)) * f.shift);
            }
            if ctx.node(j + 1) == i {
                out = &out * &SpectralFunction::psi(i64::from(ctx.s(j + 1)), Monomial::q1(-ctx.bar(j + 1)) * f.shift);
            }
            out
        }
        LocalKind::Covector(j) => {
            let mut out = SpectralFunction::one();
            if ctx.node(j) == i {
                out = &out * &SpectralFunction::psi(-i64::from(ctx.s(j)), Monomial::q3(ctx.bar(j)) * f.shift);
            }
            if ctx.node(j - 1) == i {
                out = &out * &SpectralFunction::psi(i64::from(ctx.s(j)), Monomial::q3(ctx.bar(j - 1)) * f.shift);
            }
            out
        }
    }
}

/// The one-step transition of color `i`: new factor, support `c` of
/// `delta(c u/z)` and local sign.
pub fn local_ladder(ctx: &ParityContext, f: &LocalFactor, i: usize, dir: Ladder) -> Option<(LocalFactor, Monomial, i8)> {
    let i = ctx.node(i as i64);
    match (f.kind, dir) {
        (LocalKind::Vector(j), Ladder::E) if ctx.node(j) == i => {
            Some((LocalFactor::vector(j - 1, f.shift), Monomial::q1(-ctx.bar(j)) * f.shift, 1))
        }
        (LocalKind::Vector(j), Ladder::F) if ctx.node(j + 1) == i => {
            Some((LocalFactor::vector(j + 1, f.shift), Monomial::q1(-ctx.bar(j + 1)) * f.shift, ctx.s(j + 1)))
        }
        (LocalKind::Covector(j), Ladder::E) if ctx.node(j) == i => {
            Some((LocalFactor::covector(j + 1, f.shift), Monomial::q3(ctx.bar(j)) * f.shift, 1))
        }
        (LocalKind::Covector(j), Ladder::F) if ctx.node(j - 1) == i => {
            Some((LocalFactor::covector(j - 1, f.shift), Monomial::q3(ctx.bar(j - 1)) * f.shift, ctx.s(j)))
        }
        _ => None,
    }
}

/// An entry of a tensor chain: a local factor, or an even scalar
/// renormalization that multiplies `E_i` and `K_i` of everything before it.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainItem {
    Factor(LocalFactor),
    Renorm { node: usize, f: SpectralFunction },
}

/// One nonzero term of `E_i(z)` or `F_i(z)` on a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMove {
    pub item: usize,
    pub factor: LocalFactor,
    pub support: Monomial,
    pub scalar: ScalarExpr,
}

/// A finite ordered tensor product with renormalizations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TensorChain {
    pub items: Vec<ChainItem>,
}

impl TensorChain {
    pub fn push_factor(&mut self, f: LocalFactor) {
        self.items.push(ChainItem::Factor(f));
    }

    pub fn push_renorm(&mut self, node: usize, f: SpectralFunction) {
        self.items.push(ChainItem::Renorm { node, f });
    }

    fn item_eigenvalue(ctx: &ParityContext, item: &ChainItem, i: usize) -> SpectralFunction {
        match item {
            ChainItem::Factor(f) => local_eigenvalue(ctx, f, i),
            ChainItem::Renorm { node, f } if ctx.node(*node as i64) == ctx.node(i as i64) => f.clone(),
            ChainItem::Renorm { .. } => SpectralFunction::one(),
        }
    }

    fn range_eigenvalue(&self, ctx: &ParityContext, range: std::ops::Range<usize>, i: usize) -> SpectralFunction {
        self.items[range].iter().map(|it| Self::item_eigenvalue(ctx, it, i)).product()
    }

    pub fn eigenvalue(&self, ctx: &ParityContext, i: usize) -> SpectralFunction {
        self.range_eigenvalue(ctx, 0..self.items.len(), i)
    }

    /// All nonzero terms of `E_i` or `F_i`, following the coproduct: `E`
    /// at an item is followed by `K^-` of later items, `F` is preceded by
    /// `K^+` of earlier ones, and passing earlier odd factors costs a sign.
    pub fn moves(&self, ctx: &ParityContext, i: usize, dir: Ladder) -> Result<Vec<ChainMove>> {
        let odd_generator = ctx.is_odd(i as i64);
        let mut out = Vec::new();
        let mut parity_before = 0u32;
        for (t, item) in self.items.iter().enumerate() {
            let ChainItem::Factor(f) = item else { continue };
            if let Some((nf, support, sign)) = local_ladder(ctx, f, i, dir) {
                let x0 = support.inv().expect("nonzero support");
                let env = match dir {
                    Ladder::E => self.range_eigenvalue(ctx, t + 1..self.items.len(), i),
                    Ladder::F => self.range_eigenvalue(ctx, 0..t, i),
                };
                let value = env.evaluate(x0).map_err(|e| {
                    Error::IllDefined(format!("{dir:?}_{i} at item {t}: environment {env} at x = {x0}: {e}"))
                })?;
                if !value.is_zero() {
                    let koszul = odd_generator && parity_before % 2 == 1;
                    let sign = if koszul { -sign } else { sign };
                    let scalar = value.scale(Monomial::int(i64::from(sign)));
                    out.push(ChainMove { item: t, factor: nf, support, scalar });
                }
            }
            parity_before += u32::from(f.parity(ctx));
        }
        Ok(out)
    }
}

/// Which part of a state a chain factor encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Lambda(usize),
    Mu(usize),
    Nu(usize),
    Wedge(usize),
    None,
}

/// Appends the `k` slot pairs of the pure Fock module of the given sign at
/// node `i`, evaluated at `base u`, plus its renormalization.
pub(crate) fn push_pure(
    ctx: &ParityContext,
    chain: &mut TensorChain,
    roles: &mut Vec<Role>,
    sign: i8,
    node: usize,
    lambda: &crate::spart::GenPartition,
    mu: &crate::spart::GenPartition,
    base: Monomial,
    k: usize,
) {
    let i = node as i64;
    let sg = i64::from(sign);
    let v0 = base * Monomial::q1(ctx.bar(i));
    let w0 = v0 * Monomial::q2(ctx.bar(i));
    for j in 1..=k {
        let step = Monomial::q2(sg * (j as i64 - 1));
        chain.push_factor(LocalFactor::vector(i64::from(lambda.fin(j)) + i - 1, v0 * step));
        roles.push(Role::Lambda(j));
        chain.push_factor(LocalFactor::covector(i - i64::from(mu.fin(j)), w0 * step));
        roles.push(Role::Mu(j));
    }
    let renorm = if sign > 0 {
        SpectralFunction::psi(1, base * Monomial::q2(k as i64))
    } else {
        SpectralFunction::psi(-1, base * Monomial::q2(-(k as i64)))
    };
    chain.push_renorm(node, renorm);
    roles.push(Role::None);
}

/// The chain of a state truncated to `k` pure slot pairs.
pub(crate) fn build_chain(ctx: &ParityContext, state: &FockState, k: usize) -> (TensorChain, Vec<Role>) {
    let mut chain = TensorChain::default();
    let mut roles = Vec::new();
    match state.family {
        FockFamily::Pure { sign, node } => {
            push_pure(ctx, &mut chain, &mut roles, sign, node, &state.lambda, &state.mu, Monomial::one(), k)
        }
        FockFamily::NonPureVector { node, r } => {
            let i = node as i64;
            let s = i64::from(ctx.s(i + 1));
            let base = Monomial::q1(ctx.bar(i));
            for t in 1..=r {
                let shift = base * Monomial::q2(-s * (t as i64 - 1));
                chain.push_factor(LocalFactor::vector(i64::from(state.nu[t - 1]) + i, shift));
                roles.push(Role::Nu(t));
            }
            let inner = Monomial::q2(-s * r as i64);
            push_pure(ctx, &mut chain, &mut roles, -s as i8, node, &state.lambda, &state.mu, inner, k);
        }
        FockFamily::NonPureCovector { node, r } => {
            let i = node as i64;
            let s = i64::from(ctx.s(i));
            let base = Monomial::q3(-ctx.bar(i));
            for t in 1..=r {
                let shift = base * Monomial::q2(-s * (t as i64 - 1));
                chain.push_factor(LocalFactor::covector(i - i64::from(state.nu[t - 1]), shift));
                roles.push(Role::Nu(t));
            }
            let inner = Monomial::q2(-s * r as i64);
            push_pure(ctx, &mut chain, &mut roles, -s as i8, node, &state.lambda, &state.mu, inner, k);
        }
        FockFamily::VectorWedge { dir, .. } => {
            for (t, &r) in state.wedge.iter().enumerate() {
                chain.push_factor(LocalFactor::vector(r, Monomial::q2(i64::from(dir) * t as i64)));
                roles.push(Role::Wedge(t + 1));
            }
        }
        FockFamily::CovectorWedge { dir, .. } => {
            for (t, &r) in state.wedge.iter().enumerate() {
                chain.push_factor(LocalFactor::covector(-r, Monomial::q2(i64::from(dir) * t as i64)));
                roles.push(Role::Wedge(t + 1));
            }
        }
    }
    (chain, roles)
}

/// The state with the part behind `role` changed by `delta` (`+1` adds a box).
pub(crate) fn apply_role(state: &FockState, role: Role, delta: i32) -> Option<FockState> {
    let mut out = state.clone();
    match role {
        Role::Lambda(j) => out.lambda = state.lambda.bumped(j, delta)?,
        Role::Mu(j) => out.mu = state.mu.bumped(j, delta)?,
        Role::Nu(t) => {
            let v = i64::from(out.nu[t - 1]) + i64::from(delta);
            out.nu[t - 1] = u32::try_from(v).ok()?;
        }
        Role::Wedge(t) => out.wedge[t - 1] += i64::from(delta),
        Role::None => return None,
    }
    Some(out)
}

/// Pure slot pairs used for a state: three beyond its length.
pub fn cutoff(state: &FockState) -> usize {
    state.lambda.len() + 3
}

fn check_admissible(ctx: &ParityContext, state: &FockState) -> Result<()> {
    if !is_admissible(ctx, state) {
        return Err(Error::InvalidState(format!("{} is not admissible in {}", state, state.family.descriptor(ctx))));
    }
    Ok(())
}

/// `K_i^±(z)` eigenvalue, certified by recomputing one slot pair deeper.
pub fn k_eigenvalue(ctx: &ParityContext, state: &FockState, i: usize) -> Result<SpectralFunction> {
    check_admissible(ctx, state)?;
    let k = cutoff(state);
    let (chain, _) = build_chain(ctx, state, k);
    let value = chain.eigenvalue(ctx, i);
    if state.family.is_wedge() {
        return Ok(value);
    }
    let (deeper, _) = build_chain(ctx, state, k + 1);
    let witness = deeper.eigenvalue(ctx, i);
    if witness != value {
        return Err(Error::Unstable(format!("K_{i} on {state}: {value} at cutoff {k}, {witness} at {}", k + 1)));
    }
    Ok(value)
}

/// All eigenvalues `K_0..K_{N-1}`.
pub fn k_eigenvalues(ctx: &ParityContext, state: &FockState) -> Result<Vec<SpectralFunction>> {
    (0..ctx.size()).map(|i| k_eigenvalue(ctx, state, i)).collect()
}

/// A matrix coefficient `<target| X_i(z) |source> = scalar * delta(support u/z)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixCoeff<S> {
    pub support: Monomial,
    pub scalar: ScalarExpr,
    pub target: S,
}

fn chain_coeffs(ctx: &ParityContext, state: &FockState, i: usize, dir: Ladder, k: usize) -> Result<Vec<MatrixCoeff<FockState>>> {
    let (chain, roles) = build_chain(ctx, state, k);
    let delta = if dir == Ladder::F { 1 } else { -1 };
    let mut out = Vec::new();
    for mv in chain.moves(ctx, i, dir)? {
        let target = apply_role(state, roles[mv.item], delta)
            .filter(|t| is_admissible(ctx, t))
            .ok_or_else(|| {
                Error::IllDefined(format!("{dir:?}_{i} on {state} leaves the module at item {} with {}", mv.item, mv.scalar))
            })?;
        out.push(MatrixCoeff { support: mv.support, scalar: mv.scalar, target });
    }
    Ok(out)
}

/// Nonzero matrix coefficients of `E_i(z)` or `F_i(z)` on a state.
pub fn ladder_coeffs(ctx: &ParityContext, state: &FockState, i: usize, dir: Ladder) -> Result<Vec<MatrixCoeff<FockState>>> {
    check_admissible(ctx, state)?;
    let k = cutoff(state);
    let out = chain_coeffs(ctx, state, i, dir, k)?;
    if !state.family.is_wedge() {
        let witness = chain_coeffs(ctx, state, i, dir, k + 1)?;
        if witness != out {
            return Err(Error::Unstable(format!("{dir:?}_{i} on {state} changes between cutoffs {k} and {}", k + 1)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std32() -> ParityContext {
        "+++--".parse().unwrap()
    }

    fn x_psi(k: i64, c: Monomial) -> SpectralFunction {
        SpectralFunction::psi(k, c)
    }

    #[test]
    fn local_examples() {
        let ctx = std32();
        let v0 = LocalFactor::vector(0, Monomial::one());
        assert!(local_eigenvalue(&ctx, &v0, 3).is_one());
        assert_eq!(local_eigenvalue(&ctx, &v0, 0), x_psi(-1, Monomial::one()));
        let w1 = LocalFactor::covector(1, Monomial::one());
        assert_eq!(local_eigenvalue(&ctx, &w1, 0), x_psi(1, Monomial::one()));
        let (nf, c, sg) = local_ladder(&ctx, &LocalFactor::vector(3, Monomial::one()), 3, Ladder::E).unwrap();
        assert_eq!((nf.kind, c, sg), (LocalKind::Vector(2), Monomial::q1(-3), 1));
        let (nf, c, sg) = local_ladder(&ctx, &LocalFactor::vector(3, Monomial::one()), 4, Ladder::F).unwrap();
        assert_eq!((nf.kind, c, sg), (LocalKind::Vector(4), Monomial::q1(-2), -1));
        assert!(local_ladder(&ctx, &v0, 2, Ladder::E).is_none());
    }

    #[test]
    fn periodicity() {
        let ctx = std32();
        for j in -6..6 {
            for i in 0..5 {
                let a = local_eigenvalue(&ctx, &LocalFactor::vector(j - 5, Monomial::one()), i);
                let b = local_eigenvalue(&ctx, &LocalFactor::vector(j, Monomial::q1(1)), i);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn highest_weights() {
        for parity in ["+++--", "+-++-", "--+"] {
            let ctx: ParityContext = parity.parse().unwrap();
            let n = ctx.size();
            for node in 0..n {
                for sign in [1i8, -1] {
                    let vac = FockState::vacuum(FockFamily::pure(sign, node));
                    for i in 0..n {
                        let ev = k_eigenvalue(&ctx, &vac, i).unwrap();
                        let want = if i == node { x_psi(i64::from(sign), Monomial::one()) } else { SpectralFunction::one() };
                        assert_eq!(ev, want, "{parity} sign {sign} node {node} K_{i}");
                    }
                    assert!(ladder_coeffs(&ctx, &vac, node, Ladder::E).unwrap().is_empty());
                }
                for r in 1..3usize {
                    let i = node as i64;
                    let s = i64::from(ctx.s(i + 1));
                    let vac = FockState::vacuum(FockFamily::NonPureVector { node, r });
                    let ri = r as i64;
                    for c in 0..n {
                        let ev = k_eigenvalue(&ctx, &vac, c).unwrap();
                        let want = if c == node {
                            x_psi(-s * (ri + 1), Monomial::q2(-s * ri))
                        } else if c == ctx.node(i + 1) {
                            x_psi(s * ri, Monomial::q1(-s))
                        } else {
                            SpectralFunction::one()
                        };
                        assert_eq!(ev, want, "{parity} vec node {node} r {r} K_{c}");
                    }
                    let s = i64::from(ctx.s(i));
                    let vac = FockState::vacuum(FockFamily::NonPureCovector { node, r });
                    for c in 0..n {
                        let ev = k_eigenvalue(&ctx, &vac, c).unwrap();
                        let want = if c == node {
                            x_psi(-s * (ri + 1), Monomial::q2(-s * ri))
                        } else if c == ctx.node(i - 1) {
                            x_psi(s * ri, Monomial::q3(-s))
                        } else {
                            SpectralFunction::one()
                        };
                        assert_eq!(ev, want, "{parity} cov node {node} r {r} K_{c}");
                    }
                }
            }
        }
    }
}
