//! Exhaustive search for small GDDs, and the cached ingredient catalog.
//!
//! Set `PBD3_CACHE_DIR` to keep found ingredients between runs.

use pbd3::design::{GroupType, KSet};
use pbd3::ingredients::{ingredient_catalog, Lookup};
use pbd3::search::{find_gdd, SearchOutcome, DEFAULT_NODE_BUDGET};

fn main() -> pbd3::Result<()> {
    // PBD(v,{3,4,5}) exists for v ≤ 11 exactly when v ∉ {2,6,8}
    let k345 = KSet::new([3, 4, 5]);
    for v in 2..=11 {
        let t = GroupType::from_sizes(vec![1; v]);
        match find_gdd(&t, &k345, DEFAULT_NODE_BUDGET)? {
            SearchOutcome::Found(g) => println!("PBD({v},{{3,4,5}}): found, {} blocks", g.blocks().len()),
            SearchOutcome::Nonexistent { nodes } => println!("PBD({v},{{3,4,5}}): none ({nodes} nodes)"),
            SearchOutcome::BudgetExceeded { nodes } => println!("PBD({v},{{3,4,5}}): undecided after {nodes} nodes"),
        }
    }

    let t: GroupType = "2^1 4^3".parse()?;
    if let SearchOutcome::Found(g) = find_gdd(&t, &KSet::new([3]), DEFAULT_NODE_BUDGET)? {
        println!("\n3-GDD of type {t}:");
        for grp in g.groups() {
            println!("  group {grp:?}");
        }
        for b in g.blocks() {
            println!("  {b:?}");
        }
    }

    println!();
    for k in [KSet::new([3]), KSet::new([3, 4]), KSet::new([3, 5])] {
        let cat = ingredient_catalog(&k)?;
        let found: Vec<String> = cat
            .warm()?
            .into_iter()
            .map(|(t, l)| match l {
                Lookup::Found(_) => t.compact(),
                _ => format!("{}(missing)", t.compact()),
            })
            .collect();
        println!("{{{k}}} ingredients: {}", found.join(" "));
    }
    Ok(())
}
