use proptest::prelude::*;
use spart_core::characters::{
    char_direct, char_fock_fermionic, char_macmahon_product, char_restricted, char_restricted_direct, char_tableaux,
    char_vector_window, CharFamily, FermionicVariant,
};
use spart_core::{FockFamily, MacMahonModule, ParityContext};

fn ctx(p: &str) -> ParityContext {
    p.parse().unwrap()
}

fn fock_direct(c: &ParityContext, fam: FockFamily, d: u32) -> spart_core::CharSeries {
    char_direct(c, &CharFamily::Fock { family: fam }, d).unwrap()
}

#[test]
fn fermionic_matches_direct() {
    for p in ["+++--", "++-", "+-++-", "+--", "-+++"] {
        let c = ctx(p);
        let d = 8;
        for k in 0..c.size() {
            let mut variants = vec![FermionicVariant::PurePlus, FermionicVariant::PureMinus];
            for r in 1..3 {
                variants.push(FermionicVariant::NonPureVector(r));
                variants.push(FermionicVariant::NonPureCovector(r));
            }
            for v in variants {
                let ferm = char_fock_fermionic(&c, k, v, d).unwrap();
                assert_eq!(ferm, fock_direct(&c, v.family(k), d), "{p} node {k} {v:?}");
            }
        }
    }
}

#[test]
fn rewritten_matches_pure() {
    for p in ["+++--", "++-", "+--", "++++-"] {
        let c = ctx(p);
        for k in 0..=c.m() {
            let a = char_fock_fermionic(&c, k, FermionicVariant::Rewritten, 8).unwrap();
            let b = char_fock_fermionic(&c, k, FermionicVariant::PurePlus, 8).unwrap();
            assert_eq!(a, b, "{p} k = {k}");
        }
    }
    assert!(char_fock_fermionic(&ctx("+++"), 0, FermionicVariant::Rewritten, 4).is_err());
    assert!(char_fock_fermionic(&ctx("+-++-"), 0, FermionicVariant::Rewritten, 4).is_err());
}

#[test]
fn printed_fock_series() {
    let c = ctx("+++--");
    let f0 = [1, 1, 2, 4, 6, 10, 15, 22, 33, 48, 70];
    let f1 = [1, 1, 2, 3, 5, 8, 12, 19, 28, 41, 60];
    let f4 = [1, 1, 3, 6, 10, 17, 27, 42, 63, 94, 139];
    for (k, want) in [(0, &f0), (3, &f0), (1, &f1), (2, &f1), (4, &f4)] {
        let s = char_fock_fermionic(&c, k, FermionicVariant::PurePlus, 10).unwrap();
        assert_eq!(s.principal(), want.to_vec(), "F_{k}");
    }
}

#[test]
fn printed_macmahon_series() {
    let c = ctx("+++--");
    let m0 = [1, 1, 2, 5, 8, 16, 29, 50, 88, 150, 254];
    let m1 = [1, 1, 3, 6, 12, 23, 42, 77, 136, 238, 410];
    let m4 = [1, 1, 3, 6, 11, 22, 40, 72, 127, 221, 379];
    for (k, want) in [(0, &m0), (3, &m0), (1, &m1), (2, &m1), (4, &m4)] {
        let s = char_macmahon_product(&c, k, 10).unwrap();
        assert_eq!(s.principal(), want.to_vec(), "M_{k}");
    }
}

#[test]
fn product_direct_tableaux_agree() {
    for p in ["+++--", "+-++-", "--+", "++-"] {
        let c = ctx(p);
        for k in 0..c.size() {
            let d = 7;
            let prod = char_macmahon_product(&c, k, d).unwrap();
            let direct = char_direct(&c, &CharFamily::MacMahon { module: MacMahonModule::pure(k) }, d).unwrap();
            assert_eq!(prod, direct, "{p} M_{k}");
            if c.s(k as i64) == -1 {
                assert_eq!(char_tableaux(&c, k, d).unwrap(), prod, "{p} tableaux at {k}");
            }
        }
    }
}

#[test]
fn all_even_plane_partitions() {
    let c = ctx("+++");
    let want = [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500];
    assert_eq!(char_macmahon_product(&c, 0, 10).unwrap().principal(), want.to_vec());
}

#[test]
fn restricted_convention() {
    for p in ["+++--", "+-++-", "--+"] {
        let c = ctx(p);
        for k in 0..c.size() {
            for l1 in 0..4 {
                for l2 in 0..4 {
                    if l1 + l2 == 0 || l1 + l2 > 3 {
                        continue;
                    }
                    let d = 6;
                    assert_eq!(
                        char_restricted(&c, k, l1, l2, d).unwrap(),
                        char_restricted_direct(&c, k, l1, l2, d).unwrap(),
                        "{p} k = {k} L = ({l1},{l2})"
                    );
                }
            }
        }
    }
}

#[test]
fn non_pure_sums_stay_nonnegative() {
    // the vector sum carries z_k^{-r}; a negative exponent would be a hard error
    let c = ctx("+++--");
    for k in 0..c.size() {
        for r in 1..5 {
            for v in [FermionicVariant::NonPureVector(r), FermionicVariant::NonPureCovector(r)] {
                assert!(char_fock_fermionic(&c, k, v, 6).unwrap().is_nonnegative());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fermionic_matches_direct_random(bits in prop::collection::vec(prop::bool::ANY, 3..6), k in 0usize..6, choice in 0usize..4) {
        let text: String = bits.iter().map(|b| if *b { '+' } else { '-' }).collect();
        let Ok(c) = text.parse::<ParityContext>() else { return Ok(()) };
        let k = k % c.size();
        let v = [FermionicVariant::PurePlus, FermionicVariant::PureMinus, FermionicVariant::NonPureVector(1), FermionicVariant::NonPureCovector(2)][choice];
        prop_assert_eq!(char_fock_fermionic(&c, k, v, 6).unwrap(), fock_direct(&c, v.family(k), 6));
    }
}

#[test]
fn vector_window() {
    let c = ctx("+++--");
    let v = char_vector_window(&c, false, 1);
    let w = char_vector_window(&c, true, 1);
    assert_eq!(v.terms.len(), 10);
    assert_eq!(w, v.invert());
    assert_eq!(v.terms.get(&vec![0; 5]), Some(&1));
}

#[test]
fn small_cases() {
    use spart_core::characters::{basis_degree, character, CharRequest, Formula};
    let c = ctx("+++--");
    let one_box = char_macmahon_product(&c, 2, 1).unwrap();
    assert_eq!(one_box.len(), 2);
    assert_eq!(one_box.coeff(&[0, 0, 1, 0, 0]), 1);
    assert_eq!(char_restricted(&c, 0, 1, 1, 1).unwrap(), char_macmahon_product(&c, 0, 1).unwrap());
    assert_eq!(char_restricted(&c, 0, 6, 6, 6).unwrap(), char_macmahon_product(&c, 0, 6).unwrap());
    let vac = fock_direct(&c, FockFamily::pure(1, 0), 0);
    assert_eq!(vac.principal(), vec![1]);
    for j in -7..7 {
        let (a, b) = (basis_degree(&c, false, j), basis_degree(&c, false, j + 5));
        assert!(b.iter().zip(&a).all(|(x, y)| x - y == 1), "j = {j}");
    }
    let req = CharRequest { ctx: c.clone(), family: CharFamily::parse("macmahon:0", &c).unwrap(), trunc: 10, formula: Formula::Product };
    assert_eq!(character(&req).unwrap().principal(), vec![1, 1, 2, 5, 8, 16, 29, 50, 88, 150, 254]);
    let bad = CharRequest { formula: Formula::Fermionic, ..req };
    assert!(character(&bad).is_err());
}
