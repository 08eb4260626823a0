//! Projective and affine spaces as PBDs, with their planes and dimension.
//!
//! ```text
//! cargo run --example geometry -- 3 3
//! ```

use pbd3::flats::{dimension, DimensionMode};
use pbd3::geometry::{affine_space, lines_in_subspace, projective_space};

fn main() -> pbd3::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (d, q) = match args[..] {
        [d, q, ..] => (d, q),
        _ => (3, 3),
    };

    for g in [projective_space(d, q)?, affine_space(d, q)?] {
        let design = g.design();
        println!("{}: {} points, {} lines of size {}", g.name(), design.v(), design.num_blocks(), design.k());
        let planes = g.planes();
        if let Some(p) = planes.first() {
            let lines = lines_in_subspace(&g, p)?;
            println!("  {} planes; the first has {} points and {} lines", planes.len(), p.points.len(), lines.len());
        }
        let cert = dimension(design, DimensionMode::Exact);
        println!("  dimension {} (flats per level {:?})", cert.dimension, cert.flats_per_level);
        if let Some(cx) = &cert.counterexample {
            println!("  points {cx:?} generate the whole space");
        }
    }
    Ok(())
}
