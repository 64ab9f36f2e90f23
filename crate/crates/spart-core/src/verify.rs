//! Checks of the defining relations on finite truncations of the modules, the
//! covector twist, and tameness.
//!
//! Every matrix coefficient is `scalar * delta(c u/z)`, so after evaluating the
//! delta functions each relation becomes an identity between exact scalars at
//! the supports. Serre relations are not checked.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{EvalPoint, Monomial, ScalarExpr, SpectralFunction};
use crate::fock::{k_eigenvalue, ladder_coeffs, local_eigenvalue, local_ladder, Ladder, LocalFactor, LocalKind};
use crate::parity::ParityContext;
use crate::plane::{enumerate_plane, macmahon_k_eigenvalue, plane_boxes, plane_ladder_coeffs, plane_vacuum, MacMahonModule, PlaneState};
use crate::spart::{enumerate, FockFamily, FockState};

/// A module the verifier can walk.
#[derive(Clone, Debug, PartialEq)]
pub enum Module {
    Fock(FockFamily),
    MacMahon(MacMahonModule),
}

/// A basis vector of a [`Module`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum State {
    Fock(FockState),
    Plane(PlaneState),
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Fock(s) => s.fmt(f),
            State::Plane(s) => s.fmt(f),
        }
    }
}

/// A nonzero term `scalar * delta(support u/z) |target>`.
#[derive(Clone, Debug)]
pub struct Move {
    pub support: Monomial,
    pub scalar: ScalarExpr,
    pub target: State,
}

impl Module {
    /// `fock:..`, `vec:..`, `cov:..` or `macmahon:..` descriptors.
    pub fn parse(text: &str, ctx: &ParityContext) -> Result<Self> {
        if text.starts_with("macmahon") {
            Ok(Module::MacMahon(MacMahonModule::parse(text, ctx)?))
        } else {
            Ok(Module::Fock(FockFamily::parse(text, ctx)?))
        }
    }

    pub fn descriptor(&self, ctx: &ParityContext) -> String {
        match self {
            Module::Fock(f) => f.descriptor(ctx),
            Module::MacMahon(m) => m.descriptor(),
        }
    }

    pub fn vacuum(&self, ctx: &ParityContext) -> Result<State> {
        Ok(match self {
            Module::Fock(f) => State::Fock(FockState::vacuum(*f)),
            Module::MacMahon(m) => State::Plane(plane_vacuum(ctx, m)?),
        })
    }

    /// All states with at most `max_boxes` boxes, in enumeration order.
    pub fn states(&self, ctx: &ParityContext, max_boxes: u32) -> Result<Vec<State>> {
        Ok(match self {
            Module::Fock(f) => enumerate(ctx, *f, max_boxes)?.into_iter().map(State::Fock).collect(),
            Module::MacMahon(m) => enumerate_plane(ctx, m, max_boxes)?.into_iter().map(State::Plane).collect(),
        })
    }

    pub fn boxes(&self, ctx: &ParityContext, st: &State) -> Result<i64> {
        Ok(match st {
            State::Fock(s) => i64::from(s.boxes()),
            State::Plane(s) => plane_boxes(s, &self.vacuum(ctx).and_then(|v| match v {
                State::Plane(v) => Ok(v),
                State::Fock(_) => Err(Error::InvalidState("plane state in a Fock module".into())),
            })?),
        })
    }

    pub fn eigenvalue(&self, ctx: &ParityContext, st: &State, i: usize) -> Result<SpectralFunction> {
        match st {
            State::Fock(s) => k_eigenvalue(ctx, s, i),
            State::Plane(s) => macmahon_k_eigenvalue(ctx, s, i),
        }
    }

    pub fn eigenvalues(&self, ctx: &ParityContext, st: &State) -> Result<Vec<SpectralFunction>> {
        (0..ctx.size()).map(|i| self.eigenvalue(ctx, st, i)).collect()
    }

    pub fn moves(&self, ctx: &ParityContext, st: &State, i: usize, dir: Ladder) -> Result<Vec<Move>> {
        Ok(match st {
            State::Fock(s) => ladder_coeffs(ctx, s, i, dir)?
                .into_iter()
                .map(|m| Move { support: m.support, scalar: m.scalar, target: State::Fock(m.target) })
                .collect(),
            State::Plane(s) => plane_ladder_coeffs(ctx, s, i, dir)?
                .into_iter()
                .map(|m| Move { support: m.support, scalar: m.scalar, target: State::Plane(m.target) })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub state: String,
    pub nodes: Vec<usize>,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub relation: String,
    pub module: String,
    pub states_checked: usize,
    pub failures: Vec<Failure>,
    /// Wall time; not serialized so that reports are reproducible.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn report(relation: &str, module: String, states: usize, failures: Vec<Failure>, start: Instant) -> VerificationReport {
    VerificationReport { relation: relation.into(), module, states_checked: states, failures, elapsed_ms: start.elapsed().as_millis() }
}

fn fail(st: &State, nodes: &[usize], witness: impl Into<String>) -> Failure {
    Failure { state: st.to_string(), nodes: nodes.to_vec(), witness: witness.into() }
}

/// Runs `check` on every state in parallel and concatenates the failures in
/// enumeration order; an engine error on a state is recorded as a failure.
fn per_state(states: &[State], nodes: &[usize], check: impl Fn(&State) -> Result<Vec<Failure>> + Sync) -> Vec<Failure> {
    states
        .par_iter()
        .map(|st| check(st).unwrap_or_else(|e| vec![fail(st, nodes, format!("error: {e}"))]))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// `(d^M - q^{±A} c x)` and `(d^M q^{±A} - c x)`: the two sides of the K-E
/// (`+`) or K-F (`-`) exchange at support `c`.
fn exchange_factors(ctx: &ParityContext, i: usize, j: usize, dir: Ladder, c: Monomial) -> Result<(SpectralFunction, SpectralFunction)> {
    let (a, m) = ctx.cartan_entries(i as i64, j as i64);
    let a = if dir == Ladder::E { a } else { -a } as i32;
    let dm = Monomial::d(m as i32);
    let qa = Monomial::q(a);
    Ok((SpectralFunction::linear(dm, qa * c, 1)?, SpectralFunction::linear(dm * qa, c, 1)?))
}

/// `φ_i^{v'} (d^M - q^{±A} c x) = φ_i^{v} (d^M q^{±A} - c x)` for every
/// `E_j`/`F_j` transition `v -> v'` with support `c`.
pub fn check_k_ladder_ratio(ctx: &ParityContext, module: &Module, i: usize, j: usize, max_boxes: u32) -> Result<VerificationReport> {
    k_ladder(ctx, module, i, j, max_boxes, &[Ladder::E, Ladder::F])
}

fn k_ladder(ctx: &ParityContext, module: &Module, i: usize, j: usize, max_boxes: u32, dirs: &[Ladder]) -> Result<VerificationReport> {
    let start = Instant::now();
    let states = module.states(ctx, max_boxes)?;
    let failures = per_state(&states, &[i, j], |st| {
        let mut out = Vec::new();
        let before = module.eigenvalue(ctx, st, i)?;
        for &dir in dirs {
            for mv in module.moves(ctx, st, j, dir)? {
                let after = module.eigenvalue(ctx, &mv.target, i)?;
                let (l, r) = exchange_factors(ctx, i, j, dir, mv.support)?;
                if &after * &l != &before * &r {
                    out.push(fail(st, &[i, j], format!("{dir:?}_{j} to {} at {}: {after} vs {before}", mv.target, mv.support)));
                }
            }
        }
        Ok(out)
    });
    let tag = match dirs {
        [Ladder::E] => "ke",
        [Ladder::F] => "kf",
        _ => "k_ladder_ratio",
    };
    Ok(report(&format!("{tag}[{i},{j}]"), module.descriptor(ctx), states.len(), failures, start))
}

/// The Koszul sign `ε(i) = -(-1)^{|i|}` carried by the removable-box terms of
/// the E-F residue identity. Fixed on `F_{Λ0}` at three boxes, both parities of
/// the node.
pub fn ef_removal_sign(ctx: &ParityContext, i: usize) -> i64 {
    if ctx.is_odd(i as i64) {
        1
    } else {
        -1
    }
}

fn q_minus_q_inv() -> ScalarExpr {
    ScalarExpr::binomial(Monomial::q(1), Monomial::q(-1))
}

/// Sums of products are compared at fixed generic rational points.
fn eval_points() -> Vec<EvalPoint> {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    vec![
        EvalPoint { q_half: r(7, 5), d_half: r(11, 13), k_half: r(17, 19) },
        EvalPoint { q_half: r(23, 29), d_half: r(31, 7), k_half: r(5, 37) },
    ]
}

fn sums_agree(lhs: &[ScalarExpr], rhs: &[ScalarExpr]) -> bool {
    match (lhs, rhs) {
        ([], []) => true,
        ([a], [b]) => a == b,
        ([a], []) | ([], [a]) => a.is_zero(),
        _ => eval_points().iter().all(|p| {
            let total = |xs: &[ScalarExpr]| xs.iter().try_fold(BigRational::zero(), |acc, x| x.eval(p).map(|v| acc + v));
            matches!((total(lhs), total(rhs)), (Some(a), Some(b)) if a == b)
        }),
    }
}

/// For every state `v` and node `i`: at each pole `x0` of `φ_i^v`,
/// `(q - q^{-1}) (Σ_add f e + ε(i) Σ_rem e f) = lim (1 - x/x0) φ_i^v`;
/// every pole carries a box and every box sits at a pole. The off-diagonal
/// terms of `[E_i, F_j]` cancel: `E_i F_j` and `(-1)^{|i||j|} F_j E_i` agree
/// on every target other than `v`.
pub fn check_ef_residues(ctx: &ParityContext, module: &Module, i: usize, max_boxes: u32) -> Result<VerificationReport> {
    check_ef_residues_with_sign(ctx, module, i, max_boxes, ef_removal_sign(ctx, i))
}

/// [`check_ef_residues`] with an explicit removable-side sign, for calibration.
pub fn check_ef_residues_with_sign(ctx: &ParityContext, module: &Module, i: usize, max_boxes: u32, eps: i64) -> Result<VerificationReport> {
    let start = Instant::now();
    let states = module.states(ctx, max_boxes)?;
    let failures = per_state(&states, &[i], |st| {
        let mut out = Vec::new();
        let phi = module.eigenvalue(ctx, st, i)?;
        // support -> (addable terms, removable terms)
        let mut at: BTreeMap<Monomial, (Vec<ScalarExpr>, Vec<ScalarExpr>)> = BTreeMap::new();
        let mut mixed: BTreeMap<(State, Monomial, Monomial), (Vec<ScalarExpr>, Vec<ScalarExpr>)> = BTreeMap::new();
        for j in 0..ctx.size() {
            let sign = if ctx.is_odd(i as i64) && ctx.is_odd(j as i64) { -1 } else { 1 };
            for f in module.moves(ctx, st, j, Ladder::F)? {
                for e in module.moves(ctx, &f.target, i, Ladder::E)? {
                    let prod = &f.scalar * &e.scalar;
                    if e.target == *st && j == i && e.support == f.support {
                        at.entry(f.support).or_default().0.push(prod);
                    } else {
                        mixed.entry((e.target, e.support, f.support)).or_default().0.push(prod);
                    }
                }
            }
            for e in module.moves(ctx, st, i, Ladder::E)? {
                for f in module.moves(ctx, &e.target, j, Ladder::F)? {
                    let prod = &e.scalar * &f.scalar;
                    if f.target == *st && j == i && e.support == f.support {
                        at.entry(e.support).or_default().1.push(prod.scale(Monomial::int(eps)));
                    } else {
                        mixed.entry((f.target, e.support, f.support)).or_default().1.push(prod.scale(Monomial::int(sign)));
                    }
                }
            }
        }
        let poles: BTreeMap<Monomial, i32> = phi.poles().into_iter().collect();
        for (&c, (add, rem)) in &at {
            if !add.is_empty() && !rem.is_empty() {
                return Err(Error::IllDefined(format!("addable and removable boxes share support {c} on {st}")));
            }
            let x0 = c.inv().ok_or(Error::DivisionByZero)?;
            let res = phi.delta_coefficient(x0)?;
            let lhs: Vec<ScalarExpr> = add.iter().chain(rem).map(|t| &q_minus_q_inv() * t).collect();
            if !sums_agree(&lhs, std::slice::from_ref(&res)) {
                out.push(fail(st, &[i], format!("support {c}: residue {res}, coefficients {}", lhs.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" + "))));
            }
        }
        for x0 in poles.keys() {
            let c = x0.inv().ok_or(Error::DivisionByZero)?;
            if !at.contains_key(&c) {
                out.push(fail(st, &[i], format!("pole at x = {x0} carries no box")));
            }
        }
        for ((target, ce, cf), (ef, fe)) in &mixed {
            if !sums_agree(ef, fe) {
                out.push(fail(st, &[i], format!("[E_{i}, F] not zero towards {target} at supports {ce}, {cf}")));
            }
        }
        Ok(out)
    });
    Ok(report(&format!("ef_residues[{i}]"), module.descriptor(ctx), states.len(), failures, start))
}

/// The quadratic exchange relations of `E_i(z) E_j(w)` and `F_i(z) F_j(w)`,
/// evaluated at the supports `z = c_i u`, `w = c_j u`. For `A_{ij} = 0` the
/// plain super-commutator is checked.
pub fn check_quadratic_ee_ff(ctx: &ParityContext, module: &Module, i: usize, j: usize, max_boxes: u32) -> Result<VerificationReport> {
    let start = Instant::now();
    let states = module.states(ctx, max_boxes)?;
    let (a, m) = ctx.cartan_entries(i as i64, j as i64);
    let sign = if ctx.is_odd(i as i64) && ctx.is_odd(j as i64) { -1 } else { 1 };
    let failures = per_state(&states, &[i, j], |st| {
        let mut out = Vec::new();
        for dir in [Ladder::E, Ladder::F] {
            let a = if dir == Ladder::E { a } else { -a } as i32;
            let (dm, qa) = (Monomial::d(m as i32), Monomial::q(a));
            // (target, c_i, c_j) -> (X_i X_j terms, X_j X_i terms)
            let mut paths: BTreeMap<(State, Monomial, Monomial), (Vec<ScalarExpr>, Vec<ScalarExpr>)> = BTreeMap::new();
            for first in module.moves(ctx, st, j, dir)? {
                for second in module.moves(ctx, &first.target, i, dir)? {
                    let key = (second.target, second.support, first.support);
                    paths.entry(key).or_default().0.push(&first.scalar * &second.scalar);
                }
            }
            for first in module.moves(ctx, st, i, dir)? {
                for second in module.moves(ctx, &first.target, j, dir)? {
                    let key = (second.target, first.support, second.support);
                    paths.entry(key).or_default().1.push(&first.scalar * &second.scalar);
                }
            }
            for ((target, ci, cj), (ij, ji)) in paths {
                let (l, r) = if a == 0 {
                    (ScalarExpr::one(), ScalarExpr::int(sign))
                } else {
                    (ScalarExpr::binomial(dm * ci, qa * cj), ScalarExpr::binomial(dm * qa * ci, cj).scale(Monomial::int(sign)))
                };
                let lhs: Vec<_> = ij.iter().map(|t| &l * t).collect();
                let rhs: Vec<_> = ji.iter().map(|t| &r * t).collect();
                if !sums_agree(&lhs, &rhs) {
                    out.push(fail(st, &[i, j], format!("{dir:?}{dir:?} towards {target} at ({ci}, {cj})")));
                }
            }
        }
        Ok(out)
    });
    Ok(report(&format!("quadratic_ee_ff[{i},{j}]"), module.descriptor(ctx), states.len(), failures, start))
}

/// The covector representation against the vector representation of the
/// twisted parity `s'_i = -s_{1-i}` with `q -> q^{-1}`: `[u]^j -> [u]'_{-j}`,
/// `E_i -> E_{-i}`, `F_i -> -F_{-i}`, `K_i -> K_{-i}`, for `|j| <= T N`.
pub fn check_covector_twist(ctx: &ParityContext, periods: u32) -> Result<VerificationReport> {
    let start = Instant::now();
    let tw = ctx.twist_parity();
    let n = ctx.size();
    let span = i64::from(periods.max(1)) * n as i64;
    let shift = Monomial::one();
    let mut failures = Vec::new();
    let mut checked = 0;
    for j in -span..=span {
        checked += 1;
        let w = LocalFactor::covector(j, shift);
        let v = LocalFactor::vector(-j, shift);
        let mut push = |i: usize, why: String| failures.push(Failure { state: format!("[u]^{j}"), nodes: vec![i], witness: why });
        for i in 0..n {
            let ti = tw.node(-(i as i64));
            let kw = local_eigenvalue(ctx, &w, i);
            let kv = local_eigenvalue(&tw, &v, ti).invert_q();
            if kw != kv {
                push(i, format!("K: {kw} vs {kv}"));
            }
            for (dir, flip) in [(Ladder::E, 1), (Ladder::F, -1)] {
                let a = local_ladder(ctx, &w, i, dir);
                let b = local_ladder(&tw, &v, ti, dir);
                let same = match (a, b) {
                    (None, None) => true,
                    (Some((fw, cw, sw)), Some((fv, cv, sv))) => {
                        let target_ok = match (fw.kind, fv.kind) {
                            (LocalKind::Covector(x), LocalKind::Vector(y)) => x == -y,
                            _ => false,
                        };
                        target_ok && cw == cv.invert_q() && i64::from(sw) == flip * i64::from(sv)
                    }
                    _ => false,
                };
                if !same {
                    push(i, format!("{dir:?}: {a:?} vs {b:?}"));
                }
            }
        }
    }
    Ok(report("covector_twist", format!("W over {ctx}"), checked, failures, start))
}

/// Recovers a state from its eigenvalue tuple and box count alone: every
/// removable box shows as a pole of `φ_i` at its support, dividing out its
/// K-F factor gives the tuple one box down, and the walk recurses to the
/// vacuum, then climbs back with `F_i` at the same supports.
pub struct Reconstructor<'a> {
    ctx: &'a ParityContext,
    module: &'a Module,
    vacuum: State,
    vacuum_tuple: Vec<SpectralFunction>,
    memo: HashMap<(Vec<SpectralFunction>, i64), Option<State>>,
}

impl<'a> Reconstructor<'a> {
    pub fn new(ctx: &'a ParityContext, module: &'a Module) -> Result<Self> {
        let vacuum = module.vacuum(ctx)?;
        let vacuum_tuple = module.eigenvalues(ctx, &vacuum)?;
        Ok(Reconstructor { ctx, module, vacuum, vacuum_tuple, memo: HashMap::new() })
    }

    pub fn reconstruct(&mut self, tuple: &[SpectralFunction], boxes: i64) -> Result<Option<State>> {
        if boxes == 0 {
            return Ok((tuple == self.vacuum_tuple.as_slice()).then(|| self.vacuum.clone()));
        }
        if boxes < 0 {
            return Ok(None);
        }
        let key = (tuple.to_vec(), boxes);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let n = self.ctx.size();
        let mut candidates = Vec::new();
        for i in 0..n {
            for (x0, _) in tuple[i].poles() {
                let c = x0.inv().ok_or(Error::DivisionByZero)?;
                let below: Vec<SpectralFunction> = (0..n)
                    .map(|k| exchange_factors(self.ctx, k, i, Ladder::F, c).map(|(l, r)| tuple[k].div(&r) * l))
                    .collect::<Result<_>>()?;
                let size: usize = below.iter().map(|f| f.factors().count()).sum();
                candidates.push((size, i, c, below));
            }
        }
        // a true removal cancels factors, a spurious one at an addable box adds them;
        // trying small tuples first keeps the search complete but rarely backtracks
        candidates.sort_by_key(|t| t.0);
        let mut found = None;
        'outer: for (_, i, c, below) in candidates {
            if let Some(prev) = self.reconstruct(&below, boxes - 1)? {
                for mv in self.module.moves(self.ctx, &prev, i, Ladder::F)? {
                    if mv.support == c && self.module.eigenvalues(self.ctx, &mv.target)? == tuple {
                        found = Some(mv.target);
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert(key, found.clone());
        Ok(found)
    }
}

/// Injectivity of `v -> (φ_0, .., φ_{N-1})` on all states up to `max_boxes`,
/// and recovery of each state by the [`Reconstructor`] walk.
pub fn check_tameness(ctx: &ParityContext, module: &Module, max_boxes: u32) -> Result<VerificationReport> {
    let start = Instant::now();
    let states = module.states(ctx, max_boxes)?;
    let tuples: Vec<Vec<SpectralFunction>> =
        states.par_iter().map(|st| module.eigenvalues(ctx, st)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut seen: HashMap<&Vec<SpectralFunction>, &State> = HashMap::new();
    for (st, t) in states.iter().zip(&tuples) {
        if let Some(other) = seen.insert(t, st) {
            failures.push(fail(st, &[], format!("same eigenvalues as {other}")));
        }
    }
    let mut walk = Reconstructor::new(ctx, module)?;
    for (st, t) in states.iter().zip(&tuples) {
        let boxes = module.boxes(ctx, st)?;
        match walk.reconstruct(t, boxes)? {
            Some(back) if &back == st => {}
            Some(back) => failures.push(fail(st, &[], format!("walk recovered {back}"))),
            None => failures.push(fail(st, &[], "walk found no state")),
        }
    }
    Ok(report("tameness", module.descriptor(ctx), states.len(), failures, start))
}

/// The suites by name: `ke`, `kf`, `ladder` (both), `ef`, `eeff`, `twist` (window `max(max_boxes, 1)`), `tame`.
pub fn run_suite(ctx: &ParityContext, module: &Module, suite: &str, max_boxes: u32) -> Result<Vec<VerificationReport>> {
    let n = ctx.size();
    let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));
    Ok(match suite {
        "ke" => pairs().map(|(i, j)| k_ladder(ctx, module, i, j, max_boxes, &[Ladder::E])).collect::<Result<_>>()?,
        "kf" => pairs().map(|(i, j)| k_ladder(ctx, module, i, j, max_boxes, &[Ladder::F])).collect::<Result<_>>()?,
        "ladder" => pairs().map(|(i, j)| check_k_ladder_ratio(ctx, module, i, j, max_boxes)).collect::<Result<_>>()?,
        "ef" => (0..n).map(|i| check_ef_residues(ctx, module, i, max_boxes)).collect::<Result<_>>()?,
        "eeff" | "quadratic" => pairs().map(|(i, j)| check_quadratic_ee_ff(ctx, module, i, j, max_boxes)).collect::<Result<_>>()?,
        "twist" => vec![check_covector_twist(ctx, max_boxes.max(1))?],
        "tame" => vec![check_tameness(ctx, module, max_boxes)?],
        _ => return Err(Error::Parse(format!("unknown suite {suite:?}"))),
    })
}
