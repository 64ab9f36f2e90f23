//! Combinatorial description of the K-eigenvalues: convex and concave boxes
//! with their orders, and the violet box accounting for the tail.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Monomial, SpectralFunction};
use crate::fock::{apply_role, Role};
use crate::parity::ParityContext;
use crate::spart::{is_admissible, q_content_on, BoxRef, FockFamily, FockState, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BoxKind {
    /// Present and removable.
    Convex,
    /// Absent and addable.
    Concave,
}

/// An entry of [`movable_boxes`]; contributes `psi_exponent(content u/z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MovableBox {
    pub cell: BoxRef,
    pub kind: BoxKind,
    pub order: u32,
    pub exponent: i64,
    pub content: Monomial,
    /// The violet box: enters the eigenvalue but is not a move.
    pub violet: bool,
}

/// Rows and columns of a picture in unified coordinates.
///
/// Row `b` holds the boxes `(b, b) .. (b + R - 1, b)`; column `a` holds
/// `(a, a + 1) .. (a, a + C)`. Missing entries have no tensor factor.
struct Picture {
    sigma: i8,
    origin: usize,
    rows: Vec<Option<(i64, Role)>>,
    cols: Vec<Option<(i64, Role)>>,
    /// Coordinate of the violet box on the diagonal.
    violet: Option<i64>,
}

fn picture(ctx: &ParityContext, state: &FockState) -> Picture {
    let fam = state.family;
    let sigma = fam.direction(ctx);
    match fam {
        FockFamily::VectorWedge { .. } => Picture {
            sigma,
            origin: 0,
            rows: state.wedge.iter().enumerate().map(|(t, &r)| Some((r + 1, Role::Wedge(t + 1)))).collect(),
            cols: Vec::new(),
            violet: None,
        },
        FockFamily::CovectorWedge { .. } => Picture {
            sigma,
            origin: 0,
            rows: Vec::new(),
            cols: state.wedge.iter().enumerate().map(|(t, &r)| Some((r, Role::Wedge(t + 1)))).collect(),
            violet: None,
        },
        _ => {
            let r = fam.nu_len();
            let len = state.lambda.len();
            let v = r + len;
            let mut rows = Vec::with_capacity(v + 1);
            let mut cols = Vec::with_capacity(v + 1);
            let vector = matches!(fam, FockFamily::NonPureVector { .. });
            for t in 0..r {
                let part = i64::from(state.nu[t]);
                if vector {
                    rows.push(Some((part + 1, Role::Nu(t + 1))));
                    cols.push(None);
                } else {
                    rows.push(None);
                    cols.push(Some((part, Role::Nu(t + 1))));
                }
            }
            for j in 1..=len + 1 {
                rows.push(Some((i64::from(state.lambda.fin(j)), Role::Lambda(j))));
                if j <= len {
                    cols.push(Some((i64::from(state.mu.fin(j)), Role::Mu(j))));
                }
            }
            Picture {
                sigma,
                origin: fam.origin(),
                rows,
                cols,
                violet: Some(v as i64),
                }
        }
    }
}

fn count_run(seq: &[Option<(i64, Role)>], start: usize, step: isize, value: i64) -> u32 {
    let mut n = 0;
    let mut idx = start as isize + step;
    while idx >= 0 && (idx as usize) < seq.len() {
        match seq[idx as usize] {
            Some((x, _)) if x == value => n += 1,
            _ => break,
        }
        idx += step;
    }
    n
}

fn legal(ctx: &ParityContext, state: &FockState, role: Role, delta: i32) -> bool {
    apply_role(state, role, delta).is_some_and(|t| is_admissible(ctx, &t))
}

/// Every convex and concave box of color `i`, with orders, plus the violet
/// box when `i` is the origin color of a Fock family.
pub fn movable_boxes(ctx: &ParityContext, state: &FockState, i: usize) -> Result<Vec<MovableBox>> {
    if !is_admissible(ctx, state) {
        return Err(Error::InvalidState(format!("{state} is not admissible")));
    }
    let i = ctx.node(i as i64);
    let pic = picture(ctx, state);
    let sigma = pic.sigma;
    let origin = pic.origin as i64;
    let color = |a: i64, b: i64| ctx.node(a - b + origin);
    let s = |c: i64| ctx.s(c);
    let mut out = Vec::new();
    let mut push = |side: Side, index: usize, a: i64, b: i64, kind: BoxKind, order: u32, exponent: i64, violet: bool| {
        let cell = BoxRef { side, index, position: if side == Side::Row { a - b + 1 } else { b - a }, color: color(a, b), a, b, k: 0 };
        let content = q_content_on(ctx, side, sigma, pic.origin, a, b, 0);
        out.push(MovableBox { cell, kind, order, exponent, content, violet });
    };
    let violet_at = pic.violet;
    // the empty row at the violet box only offers additions; runs stop above it
    let runs = &pic.rows[..violet_at.map_or(pic.rows.len(), |v| v as usize)];

    for (b, row) in pic.rows.iter().enumerate() {
        let Some((len, role)) = *row else { continue };
        let bi = b as i64;
        // convex: last box of the row
        let a = bi + len - 1;
        let c = a - bi + origin;
        if ctx.node(c) == i && legal(ctx, state, role, -1) {
            let d = if s(c + 1) == sigma {
                1 + count_run(runs, b, 1, len - 1)
            } else {
                1 + count_run(runs, b, -1, len)
            };
            push(Side::Row, b + 1, a, bi, BoxKind::Convex, d, -i64::from(s(c + 1)) * i64::from(d), false);
        }
        // concave: first missing box
        let a = bi + len;
        let c = a - bi + origin;
        let at_violet = violet_at == Some(bi) && a == bi;
        if ctx.node(c) == i && legal(ctx, state, role, 1) && !at_violet {
            let d = if s(c) == -sigma {
                1 + count_run(runs, b, 1, len)
            } else {
                1 + count_run(runs, b, -1, len + 1)
            };
            push(Side::Row, b + 1, a, bi, BoxKind::Concave, d, i64::from(s(c)) * i64::from(d), false);
        }
    }
    for (a, col) in pic.cols.iter().enumerate() {
        let Some((len, role)) = *col else { continue };
        let ai = a as i64;
        let b = ai + len;
        let c = ai - b + origin;
        if len > 0 || state.family.is_wedge() {
            if ctx.node(c) == i && legal(ctx, state, role, -1) {
                let d = if s(c) == sigma {
                    1 + count_run(&pic.cols, a, 1, len - 1)
                } else {
                    1 + count_run(&pic.cols, a, -1, len)
                };
                push(Side::Column, a + 1, ai, b, BoxKind::Convex, d, -i64::from(s(c)) * i64::from(d), false);
            }
        }
        let b = ai + len + 1;
        let c = ai - b + origin;
        if ctx.node(c) == i && legal(ctx, state, role, 1) {
            let d = if s(c + 1) == -sigma {
                1 + count_run(&pic.cols, a, 1, len)
            } else {
                1 + count_run(&pic.cols, a, -1, len + 1)
            };
            push(Side::Column, a + 1, ai, b, BoxKind::Concave, d, i64::from(s(c + 1)) * i64::from(d), false);
        }
    }
    if let Some(v) = violet_at {
        if ctx.node(origin) == i {
            let vu = v as usize;
            // trailing empty columns, else trailing single-box rows
            let mut zeros = 0i64;
            for col in pic.cols[..vu].iter().rev() {
                match col {
                    Some((0, _)) => zeros += 1,
                    _ => break,
                }
            }
            let d = if zeros > 0 {
                1 - i64::from(sigma * s(origin)) * zeros
            } else {
                1 - i64::from(sigma * s(origin + 1)) * i64::from(count_run(runs, vu, -1, 1))
            };
            if d > 0 {
                let kind = if s(origin) == sigma { BoxKind::Concave } else { BoxKind::Convex };
                push(Side::Row, vu + 1, v, v, kind, d as u32, i64::from(sigma) * d, true);
            }
        }
    }
    Ok(out)
}

/// The K-eigenvalue read off the movable boxes.
pub fn box_rule_eigenvalue(ctx: &ParityContext, state: &FockState, i: usize) -> Result<SpectralFunction> {
    Ok(movable_boxes(ctx, state, i)?.iter().map(|mb| SpectralFunction::psi(mb.exponent, mb.content)).product())
}
