use std::collections::BTreeSet;

use proptest::prelude::*;

use pbd3::arith::admissible;
use pbd3::design::{canonicalize, validate_gdd, validate_pbd, Design, Gdd, KSet};
use pbd3::error::Error;
use pbd3::fill::{fill_groups, FillMode, Fillers};
use pbd3::flats::closure;
use pbd3::format::{parse_design, parse_latin, pbd_to_string, latin_to_string, DesignFile};
use pbd3::geometry::{affine_space, projective_space};
use pbd3::ingredients::IngredientCatalog;
use pbd3::latin::back_circulant;
use pbd3::truncate::{delete_point, truncate};
use pbd3::wfc::{wfc, Weighting};

fn base(i: usize) -> Design {
    match i % 4 {
        0 => projective_space(2, 2),
        1 => affine_space(2, 3),
        2 => projective_space(3, 2),
        _ => affine_space(3, 3),
    }
    .unwrap()
    .into_design()
}

fn permuted(d: &Design, perm: &[usize]) -> Design {
    let blocks = d.blocks().iter().map(|b| b.iter().map(|&p| perm[p]).collect::<Vec<_>>());
    Design::new(d.v(), d.k().clone(), blocks).unwrap()
}

fn permutation(v: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..v).collect::<Vec<_>>()).prop_shuffle()
}

fn design_and_subsets() -> impl Strategy<Value = (Design, Vec<usize>, Vec<usize>)> {
    (0..4usize).prop_flat_map(|i| {
        let d = base(i);
        let v = d.v();
        (Just(d), proptest::collection::vec(0..v, 0..5), proptest::collection::vec(0..v, 0..5))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_closure_operator((d, a, b) in design_and_subsets()) {
        let ca = closure(&d, a.iter().copied());
        for &p in &a {
            prop_assert!(ca.contains(p));
        }
        prop_assert_eq!(closure(&d, ca.iter()), ca.clone());
        let ab = closure(&d, a.iter().chain(&b).copied());
        prop_assert!(ca.is_subset(&ab));
    }

    #[test]
    fn relabelled_geometries_stay_valid(
        (d, perm) in (0..4usize).prop_flat_map(|i| {
            let d = base(i);
            let v = d.v();
            (Just(d), permutation(v))
        })
    ) {
        let e = permuted(&d, &perm);
        prop_assert!(validate_pbd(&e).passed);
        prop_assert_eq!(canonicalize(&canonicalize(&e)), canonicalize(&e));
        prop_assert_eq!(e.num_blocks(), d.num_blocks());
    }

    #[test]
    fn design_text_round_trips(perm in permutation(15)) {
        let d = permuted(&projective_space(3, 2).unwrap().into_design(), &perm);
        let text = pbd_to_string(&d, &["relabelled".to_string()]);
        match parse_design(&text).unwrap() {
            DesignFile::Pbd(e) => {
                prop_assert_eq!(&e, &d);
                prop_assert_eq!(pbd_to_string(&e, &["relabelled".to_string()]), text);
            }
            DesignFile::Gdd(_) => prop_assert!(false, "parsed a PBD as a GDD"),
        }
    }

    #[test]
    fn truncation_is_valid_or_reports_a_pair((d, a, _) in design_and_subsets()) {
        match truncate(&d, &a) {
            Ok(t) => {
                let removed: BTreeSet<usize> = a.iter().copied().collect();
                prop_assert_eq!(t.v(), d.v() - removed.len());
                prop_assert!(validate_pbd(&t).passed);
                prop_assert!(admissible(t.v(), &t.effective_k()));
            }
            Err(Error::PairBlock(pair)) => prop_assert_eq!(pair.len(), 2),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn delete_then_refill_restores_pairs(i in 0..4usize, x in 0..27usize) {
        let d = base(i);
        let x = x % d.v();
        let g = delete_point(&d, x).unwrap();
        prop_assert!(validate_gdd(&g).passed);
        let back = fill_groups(&g, FillMode::PlusPoint, &Fillers::single_blocks()).unwrap();
        prop_assert!(validate_pbd(&back).passed);
        // undo the relabelling: the new point is last, the rest shift down past x
        let old = |p: usize| if p == back.v() - 1 { x } else if p >= x { p + 1 } else { p };
        let restored: BTreeSet<Vec<usize>> = back
            .blocks()
            .iter()
            .map(|b| {
                let mut b: Vec<usize> = b.iter().map(|&p| old(p)).collect();
                b.sort_unstable();
                b
            })
            .collect();
        let original: BTreeSet<Vec<usize>> = d.blocks().iter().cloned().collect();
        prop_assert_eq!(restored, original);
    }

    #[test]
    fn uniform_weighting_gives_a_gdd(i in 0..3usize, w in 2u32..5) {
        let d = base(i);
        let cat = IngredientCatalog::new(&KSet::new([3])).unwrap();
        let g = wfc(&Gdd::from_pbd(&d), &Weighting::uniform(d.v(), w), &cat).unwrap();
        prop_assert!(validate_gdd(&g).passed);
        prop_assert_eq!(g.v(), d.v() * w as usize);
        prop_assert_eq!(g.group_type().to_string(), format!("{w}^{}", d.v()));
    }

    #[test]
    fn back_circulants(half in 1usize..20) {
        let n = 2 * half + 1;
        let l = back_circulant(n).unwrap();
        prop_assert!(l.is_latin() && l.is_symmetric() && l.is_idempotent());
        prop_assert_eq!(parse_latin(&latin_to_string(&l)).unwrap(), l);
    }
}
