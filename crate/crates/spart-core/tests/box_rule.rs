use std::collections::BTreeSet;

use proptest::prelude::*;
use spart_core::boxrule::{box_rule_eigenvalue, movable_boxes, BoxKind};
use spart_core::fock::k_eigenvalue;
use spart_core::spart::{enumerate, is_admissible};
use spart_core::{FockFamily, FockState, Monomial, ParityContext, SpectralFunction};

const PARITIES: [&str; 6] = ["+++--", "+-++-", "--+", "+--", "++-+-", "-+++"];

fn families(ctx: &ParityContext) -> Vec<FockFamily> {
    let mut out = Vec::new();
    for node in 0..ctx.size() {
        out.push(FockFamily::pure(1, node));
        out.push(FockFamily::pure(-1, node));
        for r in 1..3 {
            out.push(FockFamily::NonPureVector { node, r });
            out.push(FockFamily::NonPureCovector { node, r });
        }
    }
    out
}

fn wedge_states(ctx: &ParityContext) -> Vec<FockState> {
    let mut out = Vec::new();
    for k in 1..=3usize {
        for dir in [1i8, -1] {
            for fam in [FockFamily::VectorWedge { k, dir }, FockFamily::CovectorWedge { k, dir }] {
                let mut parts = vec![-3i64; k];
                loop {
                    let st = FockState::wedge(fam, &parts);
                    if is_admissible(ctx, &st) {
                        out.push(st);
                    }
                    let mut t = 0;
                    while t < k && parts[t] == 3 {
                        parts[t] = -3;
                        t += 1;
                    }
                    if t == k {
                        break;
                    }
                    parts[t] += 1;
                }
            }
        }
    }
    out
}

fn all_states(ctx: &ParityContext, max_boxes: u32) -> Vec<FockState> {
    let mut out: Vec<FockState> = families(ctx).into_iter().flat_map(|f| enumerate(ctx, f, max_boxes).unwrap()).collect();
    out.extend(wedge_states(ctx));
    out
}

#[test]
fn box_rule_matches_engine_exhaustively() {
    for p in PARITIES {
        let ctx: ParityContext = p.parse().unwrap();
        for st in all_states(&ctx, 5) {
            for i in 0..ctx.size() {
                let engine = k_eigenvalue(&ctx, &st, i).unwrap();
                let rule = box_rule_eigenvalue(&ctx, &st, i).unwrap();
                assert_eq!(engine, rule, "{p} {} {st} at node {i}", st.family.descriptor(&ctx));
            }
        }
    }
}

#[test]
fn movable_contents_are_distinct() {
    for p in PARITIES {
        let ctx: ParityContext = p.parse().unwrap();
        for st in all_states(&ctx, 4) {
            for i in 0..ctx.size() {
                let boxes = movable_boxes(&ctx, &st, i).unwrap();
                let contents: BTreeSet<_> = boxes.iter().map(|b| b.content).collect();
                assert_eq!(contents.len(), boxes.len(), "{p} {st} node {i}");
            }
        }
    }
}

#[test]
fn added_box_is_removable_afterwards() {
    for p in PARITIES {
        let ctx: ParityContext = p.parse().unwrap();
        let states = all_states(&ctx, 4);
        for st in &states {
            for i in 0..ctx.size() {
                let here = movable_boxes(&ctx, st, i).unwrap();
                let concave: Vec<_> = here.iter().filter(|b| b.kind == BoxKind::Concave && !b.violet).collect();
                // each concave box is convex in some state one box up
                for b in &concave {
                    let found = states.iter().filter(|t| t.family == st.family).any(|t| {
                        movable_boxes(&ctx, t, i)
                            .unwrap()
                            .iter()
                            .any(|c| c.kind == BoxKind::Convex && !c.violet && c.content == b.content && t.boxes() == st.boxes() + 1)
                    });
                    if st.boxes() < 4 && !st.family.is_wedge() {
                        assert!(found, "{p} {st} node {i}: concave {:?} has no partner", b.cell);
                    }
                }
            }
        }
    }
}

fn parity_strategy() -> impl Strategy<Value = ParityContext> {
    prop::collection::vec(prop::bool::ANY, 2..6).prop_filter_map("m = n", |bits| {
        let text: String = bits.iter().map(|b| if *b { '+' } else { '-' }).collect();
        text.parse().ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_rule_matches_engine(ctx in parity_strategy(), pick in 0usize..10_000, node in 0usize..6, choice in 0usize..6) {
        let node = node % ctx.size();
        let fam = match choice {
            0 => FockFamily::pure(1, node),
            1 => FockFamily::pure(-1, node),
            2 => FockFamily::NonPureVector { node, r: 1 },
            3 => FockFamily::NonPureVector { node, r: 2 },
            4 => FockFamily::NonPureCovector { node, r: 1 },
            _ => FockFamily::NonPureCovector { node, r: 3 },
        };
        let states = enumerate(&ctx, fam, 6).unwrap();
        let st = &states[pick % states.len()];
        for i in 0..ctx.size() {
            prop_assert_eq!(k_eigenvalue(&ctx, st, i).unwrap(), box_rule_eigenvalue(&ctx, st, i).unwrap());
        }
    }
}

fn summary(ctx: &ParityContext, st: &FockState) -> BTreeSet<(usize, BoxKind, u32, usize)> {
    (0..ctx.size())
        .flat_map(|i| movable_boxes(ctx, st, i).unwrap())
        .map(|b| (b.cell.color, b.kind, b.order, b.cell.index))
        .collect()
}

#[test]
fn vector_wedge_eigenvalues() {
    let ctx: ParityContext = "+++--".parse().unwrap();
    let st = FockState::wedge(FockFamily::VectorWedge { k: 5, dir: 1 }, &[4, 4, 4, 3, 2]);
    let expect: BTreeSet<_> = [
        (4, BoxKind::Convex, 3, 3),
        (2, BoxKind::Convex, 1, 5),
        (0, BoxKind::Concave, 3, 1),
        (4, BoxKind::Concave, 1, 4),
        (3, BoxKind::Concave, 2, 5),
    ]
    .into_iter()
    .collect();
    assert_eq!(summary(&ctx, &st), expect);
    let psi = SpectralFunction::psi;
    let golden = [
        psi(-3, Monomial::q1(-1)),
        SpectralFunction::one(),
        psi(-1, Monomial::q1(-2) * Monomial::q2(4)),
        psi(2, Monomial::q1(-3) * Monomial::q2(4)),
        psi(3, Monomial::q1(-2) * Monomial::q2(2)) * psi(-1, Monomial::q1(-2) * Monomial::q2(3)),
    ];
    for (i, g) in golden.iter().enumerate() {
        assert_eq!(&box_rule_eigenvalue(&ctx, &st, i).unwrap(), g, "K_{i}");
        assert_eq!(&k_eigenvalue(&ctx, &st, i).unwrap(), g, "K_{i}");
    }
}

#[test]
fn covector_wedge_eigenvalues() {
    let ctx: ParityContext = "+++--".parse().unwrap();
    let st = FockState::wedge(FockFamily::CovectorWedge { k: 4, dir: 1 }, &[3, 1, 1, 0]);
    let expect: BTreeSet<_> = [
        (0, BoxKind::Convex, 1, 4),
        (2, BoxKind::Convex, 1, 1),
        (4, BoxKind::Convex, 2, 3),
        (1, BoxKind::Concave, 1, 1),
        (3, BoxKind::Concave, 2, 2),
        (4, BoxKind::Concave, 1, 4),
    ]
    .into_iter()
    .collect();
    assert_eq!(summary(&ctx, &st), expect);
    let psi = SpectralFunction::psi;
    let golden = [
        psi(1, Monomial::q2(3)),
        psi(1, Monomial::one()),
        // q3 exponents follow bar(-1) = -s_0; the printed list negates them
        psi(-1, Monomial::q3(1)),
        psi(-2, Monomial::q3(2) * Monomial::q2(1)),
        psi(2, Monomial::q3(1) * Monomial::q2(2)) * psi(-1, Monomial::q3(1) * Monomial::q2(3)),
    ];
    for (i, g) in golden.iter().enumerate() {
        assert_eq!(&box_rule_eigenvalue(&ctx, &st, i).unwrap(), g, "K_{i}");
        assert_eq!(&k_eigenvalue(&ctx, &st, i).unwrap(), g, "K_{i}");
    }
}

#[test]
fn vacuum_violet_box() {
    let ctx: ParityContext = "+++--".parse().unwrap();
    let boxes = movable_boxes(&ctx, &FockState::vacuum(FockFamily::pure(1, 0)), 0).unwrap();
    assert_eq!(boxes.len(), 1);
    assert!(boxes[0].violet && boxes[0].kind == BoxKind::Convex && boxes[0].order == 1);
    assert_eq!(boxes[0].content, Monomial::one());
}
