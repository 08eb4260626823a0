//! The recipe catalog: build one recipe, then tabulate coverage for a K.
//!
//! ```text
//! cargo run --release --example recipes -- pbd126-34
//! ```

use pbd3::coverage::build_all;
use pbd3::design::KSet;
use pbd3::recipes::{catalog, describe, Builder, Status};

fn main() -> pbd3::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "pbd53-35".into());

    let in_scope = catalog().iter().filter(|r| r.status == Status::InScope).count();
    println!("{in_scope} in-scope recipes\n");
    print!("{}", describe(&id)?);

    let builder = Builder::new();
    let built = builder.build(&id)?;
    println!("\nbuilt PBD({},{{{}}}) with {} blocks", built.design.v(), built.design.k(), built.design.num_blocks());
    for line in built.provenance() {
        println!("  {line}");
    }

    let k = KSet::new([3, 5]);
    let table = build_all(&builder, &k, 100)?;
    println!();
    for row in &table.rows {
        println!("{}", row.describe(&k));
    }
    Ok(())
}
