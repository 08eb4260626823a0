//! A construction done by hand: weight PG_3(3), apply Wilson's fundamental
//! construction, add a point and fill the groups. The result is a
//! PBD(83,{3,5}) of dimension three.

use pbd3::design::{validate_pbd, Gdd, KSet};
use pbd3::fill::{fill_groups, FillMode, Fillers};
use pbd3::flats::{dimension, nondegenerate, DimensionMode};
use pbd3::geometry::projective_space;
use pbd3::ingredients::ingredient_catalog;
use pbd3::wfc::{wfc, Weighting};

fn main() -> pbd3::Result<()> {
    let master = projective_space(3, 3)?.into_design();
    let mut w = Weighting::uniform(master.v(), 2);
    w.set(0, 4);
    println!("weights: 2 on {} points, 4 on point 0; total {}", master.v() - 1, w.total());
    println!("nondegenerate: {}", nondegenerate(&master, &w));

    let ingredients = ingredient_catalog(&KSet::new([3]))?;
    let gdd = wfc(&Gdd::from_pbd(&master), &w, &ingredients)?;
    println!("WFC output: {}-point GDD of type {} with {} blocks", gdd.v(), gdd.group_type(), gdd.blocks().len());

    let pbd = fill_groups(&gdd, FillMode::PlusPoint, &Fillers::single_blocks())?.with_k(KSet::new([3, 5]));
    let report = validate_pbd(&pbd);
    println!("{}", report.message);
    let cert = dimension(&pbd, DimensionMode::AtLeast(3));
    println!("dimension at least 3: {}", cert.passed);
    Ok(())
}
