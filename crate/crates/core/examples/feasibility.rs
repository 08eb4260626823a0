//! Block count congruences and the GDD types that can remain after deleting
//! a block of size 5 from a dimension-three PBD(v,{3,5}).

use pbd3::arith::{admissible, block_count_congruence};
use pbd3::design::KSet;
use pbd3::feasibility::candidate_group_types;

fn main() -> pbd3::Result<()> {
    let k = KSet::new([3, 5]);
    for v in [11, 13, 15, 33, 35] {
        let cs: Vec<String> = block_count_congruence(v, &k)?.iter().map(ToString::to_string).collect();
        println!("v={v}: admissible {}, {}", admissible(v, &k), cs.join("; "));
    }
    println!();
    print!("{}", candidate_group_types(35, &k, 5, &[11, 13, 15, 17])?);
    println!();
    print!("{}", candidate_group_types(33, &k, 5, &[11, 13, 15])?);
    Ok(())
}
