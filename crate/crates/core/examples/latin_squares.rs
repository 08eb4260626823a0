//! Symmetric idempotent latin squares glued along a PBD, and the check that
//! every cell lies in a proper subsquare.

use pbd3::geometry::{affine_space, projective_space};
use pbd3::latin::{back_circulant, back_circulant_ingredients, glue_latin, subsquare_coverage, CoverageOptions};

fn main() -> pbd3::Result<()> {
    let l5 = back_circulant(5)?;
    println!("back circulant of order 5:");
    for r in 0..5 {
        println!("  {:?}", l5.row(r));
    }

    let ag = affine_space(3, 3)?.into_design();
    let l = glue_latin(&ag, &back_circulant_ingredients(&ag)?)?;
    let report = subsquare_coverage(&l, &ag, CoverageOptions::default())?;
    println!(
        "\nglued over AG_3(3): order {}, symmetric {}, idempotent {}; {} triples checked, all covered: {}",
        l.order(),
        l.is_symmetric(),
        l.is_idempotent(),
        report.triples_checked,
        report.passed
    );
    for w in report.witnesses.iter().take(3) {
        println!("  {:?} lies in the subsquare on {:?}", w.triple, w.points);
    }

    // a plane has dimension 2, so some triples escape every proper subsquare
    let fano = projective_space(2, 2)?.into_design();
    let lf = glue_latin(&fano, &back_circulant_ingredients(&fano)?)?;
    let report = subsquare_coverage(&lf, &fano, CoverageOptions::default())?;
    println!("glued over the Fano plane: counterexample {:?}", report.counterexample);
    Ok(())
}
