//! Flat closure and dimension certificates on a few small linear spaces.

use pbd3::design::{Design, KSet};
use pbd3::flats::{closure, deleted_block_partition, dimension, is_flat, DimensionMode};
use pbd3::geometry::projective_space;

fn show(name: &str, d: &Design) {
    let cert = dimension(d, DimensionMode::Exact);
    println!("{name}: v={} dimension {}", d.v(), cert.dimension);
    for w in &cert.witnesses {
        println!("  {:?} generate the proper flat {:?}", w.generators, w.flat);
    }
    if let Some(cx) = &cert.counterexample {
        println!("  {cx:?} generate everything");
    }
}

fn main() -> pbd3::Result<()> {
    let fano = projective_space(2, 2)?.into_design();
    show("Fano plane", &fano);

    let pg32 = projective_space(3, 2)?.into_design();
    show("PG_3(2)", &pg32);

    // a plane of PG_3(2) is the closure of three non-collinear points
    let plane = closure(&pg32, [0, 1, 3]);
    println!("closure of {{0,1,3}} in PG_3(2): {:?} (flat: {})", plane.to_vec(), is_flat(&pg32, &plane));

    let at_least = dimension(&pg32, DimensionMode::AtLeast(3));
    println!("PG_3(2) has dimension at least 3: {}", at_least.passed);

    // the trivial design has dimension 1: two points span the one block
    let one_block = Design::new(5, KSet::new([5]), [vec![0, 1, 2, 3, 4]])?;
    show("single block", &one_block);

    // deleting a line and the planes through it leaves a GDD
    let pg34 = projective_space(3, 4)?.into_design();
    let line = pg34.blocks()[0].clone();
    let deleted = deleted_block_partition(&pg34, &line)?;
    println!(
        "PG_3(4) minus the line {line:?} and its {} planes: GDD of type {}",
        deleted.flats.len(),
        deleted.gdd.group_type()
    );
    Ok(())
}
