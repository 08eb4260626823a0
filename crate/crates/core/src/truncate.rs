//! Truncation and the two ways of turning a PBD into a GDD.

use crate::design::{Block, Design, Gdd};
use crate::error::{Error, Result};
use crate::flats::is_flat;
use crate::pointset::PointSet;

fn reindex(v: usize, removed: &PointSet) -> (Vec<usize>, usize) {
    let mut new_id = vec![usize::MAX; v];
    let mut next = 0;
    for (p, slot) in new_id.iter_mut().enumerate() {
        if !removed.contains(p) {
            *slot = next;
            next += 1;
        }
    }
    (new_id, next)
}

/// Deletes the points `a`, shrinking every block to `B \ A`.
///
/// Blocks left with at most one point disappear; a block left with exactly
/// two points is an error.
pub fn truncate(d: &Design, a: &[usize]) -> Result<Design> {
    let removed = PointSet::from_points(d.v(), a.iter().copied());
    if let Some(&p) = a.iter().find(|&&p| p >= d.v()) {
        return Err(Error::PointOutOfRange { point: p, v: d.v() });
    }
    let (new_id, v) = reindex(d.v(), &removed);
    let mut blocks = Vec::new();
    for b in d.blocks() {
        let kept: Block = b.iter().copied().filter(|&p| !removed.contains(p)).collect();
        match kept.len() {
            0 | 1 => {}
            2 => return Err(Error::PairBlock(kept)),
            _ => blocks.push(kept.iter().map(|&p| new_id[p]).collect()),
        }
    }
    Design::with_effective_k(v, blocks)
}

/// Turns a partition of the points into flats (singletons, blocks or larger
/// subdesigns) into the groups of a GDD.
pub fn blocks_to_groups(d: &Design, parts: &[Vec<usize>]) -> Result<Gdd> {
    let sets: Vec<PointSet> = parts
        .iter()
        .map(|p| PointSet::from_points(d.v(), p.iter().copied()))
        .collect();
    if let Some(i) = sets.iter().position(|s| !is_flat(d, s)) {
        return Err(Error::arg(format!("part {:?} is not a flat", parts[i])));
    }
    let blocks: Vec<Block> = d
        .blocks()
        .iter()
        .filter(|b| !sets.iter().any(|s| b.iter().all(|&p| s.contains(p))))
        .cloned()
        .collect();
    Gdd::new(d.v(), parts.iter().cloned(), d.k().clone(), blocks).map_err(|e| match e {
        Error::NotAPartition(m) => Error::arg(format!("parts are not a partition: {m}")),
        e => e,
    })
}

/// Deletes `x` and the blocks through it; the rest of those blocks become
/// the groups.
pub fn delete_point(d: &Design, x: usize) -> Result<Gdd> {
    if x >= d.v() {
        return Err(Error::PointOutOfRange { point: x, v: d.v() });
    }
    let removed = PointSet::from_points(d.v(), [x]);
    let (new_id, v) = reindex(d.v(), &removed);
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    for b in d.blocks() {
        if b.contains(&x) {
            groups.push(b.iter().filter(|&&p| p != x).map(|&p| new_id[p]).collect());
        } else {
            blocks.push(b.iter().map(|&p| new_id[p]).collect());
        }
    }
    Gdd::new(v, groups, d.k().clone(), blocks)
}
