//! (v,3,λ)-designs of dimension three obtained by replacing each block of a
//! PBD with all its triples.

use pbd3::bibd::{bibd_dimension, expand_to_bibd};
use pbd3::design::validate_bibd;
use pbd3::flats::DimensionMode;
use pbd3::recipes::Builder;

fn main() -> pbd3::Result<()> {
    let builder = Builder::new();
    for (id, lambda) in [("pg3-2", 2), ("pg3-3", 2), ("pbd53-35", 3), ("pbd53-35", 6)] {
        let d = &builder.build(id)?.design;
        let t = expand_to_bibd(d, lambda)?;
        let report = validate_bibd(&t);
        let cert = bibd_dimension(&t, DimensionMode::AtLeast(3));
        println!(
            "{id} with λ={lambda}: {} triples; {}; admissible {}; dimension ≥ 3: {}",
            t.triples().len(),
            report.report.message,
            report.admissible,
            cert.passed
        );
    }
    Ok(())
}
