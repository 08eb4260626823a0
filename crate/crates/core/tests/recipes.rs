use pbd3::arith::admissible;
use pbd3::coverage::{build_all, claim, Claim, CoverageStatus};
use pbd3::design::{GroupType, KSet};
use pbd3::format::pbd_to_string;
use pbd3::recipes::Builder;
use pbd3::search::{find_gdd, SearchOutcome, DEFAULT_NODE_BUDGET};

#[test]
fn builds_are_reproducible() {
    for id in ["pbd46-34", "pbd53-35", "pg3-3"] {
        let a = Builder::new().build(id).unwrap();
        let b = Builder::new().build(id).unwrap();
        assert_eq!(pbd_to_string(&a.design, &a.provenance()), pbd_to_string(&b.design, &b.provenance()), "{id}");
    }
}

#[test]
fn every_in_scope_order_is_built() {
    let builder = Builder::new();
    for k in [KSet::new([3, 4]), KSet::new([3, 5])] {
        let table = build_all(&builder, &k, 150).unwrap();
        let failed: Vec<String> = table.failures().map(|r| r.describe(&k)).collect();
        assert!(failed.is_empty(), "{failed:?}");
        for r in &table.rows {
            if let CoverageStatus::Constructed { .. } = r.status {
                assert_eq!(claim(r.v, &k).unwrap(), Claim::Exists, "v={}", r.v);
            }
        }
    }
    let t34 = build_all(&builder, &KSet::new([3, 4]), 150).unwrap();
    assert!(matches!(t34.row(15).unwrap().status, CoverageStatus::Constructed { .. }));
    assert!(matches!(t34.row(33).unwrap().claim, Claim::Open));
}

// Admissibility is necessary but not sufficient: every PBD found by search
// is admissible, and the admissible orders with no PBD are exactly these.
#[test]
fn existence_implies_admissibility() {
    let mut gaps = Vec::new();
    for ks in [&[3][..], &[4], &[5], &[3, 4], &[3, 5], &[4, 5], &[3, 4, 5]] {
        let k = KSet::new(ks.iter().copied());
        for v in 1..=11 {
            let outcome = find_gdd(&GroupType::from_sizes(vec![1; v]), &k, DEFAULT_NODE_BUDGET).unwrap();
            match outcome {
                SearchOutcome::Found(_) => assert!(admissible(v, &k), "v={v} K={{{k}}}"),
                SearchOutcome::Nonexistent { .. } if admissible(v, &k) => gaps.push(format!("{v}:{{{k}}}")),
                SearchOutcome::Nonexistent { .. } => {}
                SearchOutcome::BudgetExceeded { .. } => panic!("undecided v={v} K={{{k}}}"),
            }
        }
    }
    assert_eq!(gaps, ["6:{3,4}", "8:{4,5}", "9:{4,5}", "2:{3,4,5}", "6:{3,4,5}", "8:{3,4,5}"]);
}
