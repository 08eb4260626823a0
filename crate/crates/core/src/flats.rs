//! Flat closure, flat testing and dimension.
//!
//! Closure works on any [`LinearSpace`]: a point set together with a rule that
//! says which points a subdesign containing two given points must contain. For
//! a PBD that is the block through the pair; for a triple system it is the
//! union of the triples through the pair.
//!
//! Dimension is computed level by level. The flats generated by `t` points are
//! exactly the closures `⟨F ∪ {x}⟩` with `F` generated by `t-1` points and
//! `x ∉ F`, together with the level `t-1` flats that have at least `t` points.
//! Points of `X \ F` are partitioned by the flats they generate with `F`, so
//! each level costs one closure per (flat, extension) rather than one per
//! `t`-subset.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::design::{Block, Design, Gdd, KSet};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::wfc::Weighting;

/// A point set with a pair-span rule.
pub trait LinearSpace: Sync {
    fn num_points(&self) -> usize;

    /// Points forced into any subdesign containing the distinct points `x`, `y`.
    fn span(&self, x: usize, y: usize) -> &[usize];
}

impl LinearSpace for Design {
    fn num_points(&self) -> usize {
        self.v()
    }

    fn span(&self, x: usize, y: usize) -> &[usize] {
        self.block_through(x, y).unwrap_or(&[])
    }
}

/// Extends a flat `base` by `extra` points and closes the result.
///
/// Pairs inside `base` are assumed closed already.
pub fn closure_extend<S: LinearSpace + ?Sized>(
    space: &S,
    base: &PointSet,
    extra: impl IntoIterator<Item = usize>,
) -> PointSet {
    let mut set = base.clone();
    let mut members: Vec<usize> = base.iter().collect();
    let closed = members.len();
    for p in extra {
        if set.insert(p) {
            members.push(p);
        }
    }
    let mut i = closed;
    while i < members.len() {
        let x = members[i];
        for j in 0..i {
            for &p in space.span(members[j], x) {
                if set.insert(p) {
                    members.push(p);
                }
            }
        }
        i += 1;
    }
    set
}

/// The smallest flat containing `points`.
pub fn closure<S: LinearSpace + ?Sized>(space: &S, points: impl IntoIterator<Item = usize>) -> PointSet {
    closure_extend(space, &PointSet::empty(space.num_points()), points)
}

pub fn is_flat<S: LinearSpace + ?Sized>(space: &S, points: &PointSet) -> bool {
    let members: Vec<usize> = points.iter().collect();
    members.iter().enumerate().all(|(i, &x)| {
        members[i + 1..]
            .iter()
            .all(|&y| space.span(x, y).iter().all(|&p| points.contains(p)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionMode {
    Exact,
    AtLeast(usize),
}

/// A generating set and the flat it generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub generators: Vec<usize>,
    pub flat: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCertificate {
    pub mode: DimensionMode,
    /// Exact mode: the dimension. At-least mode: the largest level checked
    /// that passed (so `passed` iff `dimension >= t`).
    pub dimension: usize,
    pub passed: bool,
    /// Proper flats generated by `dimension` points (a sample).
    pub witnesses: Vec<Witness>,
    /// A set of `dimension + 1` points generating everything.
    pub counterexample: Option<Vec<usize>>,
    /// Number of distinct flats found at each level, starting at level 1.
    pub flats_per_level: Vec<usize>,
}

const WITNESS_SAMPLE: usize = 3;

#[derive(Clone)]
struct Generated {
    flat: PointSet,
    gens: Vec<usize>,
}

/// Flats generated with `f` by one more point, or the first point whose
/// addition generates everything.
fn extensions<S: LinearSpace + ?Sized>(space: &S, f: &Generated) -> std::result::Result<Vec<Generated>, Vec<usize>> {
    let v = space.num_points();
    let mut seen = f.flat.clone();
    let mut out = Vec::new();
    for x in 0..v {
        if seen.contains(x) {
            continue;
        }
        let g = closure_extend(space, &f.flat, [x]);
        if g.is_full() {
            let mut gens = f.gens.clone();
            gens.push(x);
            return Err(gens);
        }
        seen.union_with(&g);
        let mut gens = f.gens.clone();
        gens.push(x);
        out.push(Generated { flat: g, gens });
    }
    Ok(out)
}

/// Dimension of a linear space: the largest `d` such that every `d` points
/// generate a proper flat.
pub fn dimension<S: LinearSpace + ?Sized>(space: &S, mode: DimensionMode) -> DimensionCertificate {
    let v = space.num_points();
    let limit = match mode {
        DimensionMode::Exact => usize::MAX,
        DimensionMode::AtLeast(t) => t,
    };
    let witnesses_of = |level: &[Generated]| -> Vec<Witness> {
        level
            .iter()
            .take(WITNESS_SAMPLE)
            .map(|g| Witness { generators: g.gens.clone(), flat: g.flat.to_vec() })
            .collect()
    };
    let finish = |dimension: usize, witnesses, counterexample, flats_per_level| DimensionCertificate {
        mode,
        dimension,
        passed: match mode {
            DimensionMode::Exact => true,
            DimensionMode::AtLeast(t) => dimension >= t,
        },
        witnesses,
        counterexample,
        flats_per_level,
    };

    if v < 2 {
        return finish(0, Vec::new(), (v == 1).then(|| vec![0]), Vec::new());
    }
    let mut level: Vec<Generated> = (0..v)
        .map(|x| Generated { flat: PointSet::from_points(v, [x]), gens: vec![x] })
        .collect();
    let mut flats_per_level = vec![v];
    let mut t = 1;
    while t < limit {
        let next_t = t + 1;
        let first_bad = AtomicUsize::new(usize::MAX);
        let results: Vec<std::result::Result<Vec<Generated>, Vec<usize>>> = level
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                if i > first_bad.load(Ordering::Relaxed) {
                    return Ok(Vec::new());
                }
                let r = extensions(space, f);
                if r.is_err() {
                    first_bad.fetch_min(i, Ordering::Relaxed);
                }
                r
            })
            .collect();
        if let Some(cx) = results.iter().find_map(|r| r.as_ref().err()) {
            return finish(t, witnesses_of(&level), Some(cx.clone()), flats_per_level);
        }
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        let carried = level.into_iter().filter(|g| g.flat.len() >= next_t).map(|mut g| {
            let extra = g.flat.iter().find(|p| !g.gens.contains(p)).expect("flat has a spare point");
            g.gens.push(extra);
            g
        });
        let grown = results.into_iter().flat_map(|r| r.unwrap_or_default());
        for g in carried.chain(grown) {
            if seen.insert(g.flat.clone()) {
                next.push(g);
            }
        }
        flats_per_level.push(next.len());
        level = next;
        t = next_t;
    }
    finish(t, witnesses_of(&level), None, flats_per_level)
}

/// Whether the positive-weight points lie in no proper flat.
pub fn nondegenerate(d: &Design, w: &Weighting) -> bool {
    closure(d, w.support()).is_full()
}

/// A proper flat of size `w` in a PBD on `v` points with blocks of size at
/// least three needs `v ≥ 2w + 1`.
pub fn subsystem_bound(v: usize, w: usize) -> bool {
    v > 2 * w
}

/// Flats `⟨B, x⟩` for `x ∉ B`, which partition `X \ B` when the design has
/// dimension at least three.
pub fn flats_through_block(d: &Design, block: &[usize]) -> Result<Vec<PointSet>> {
    let v = d.v();
    let base = PointSet::from_points(v, block.iter().copied());
    if !is_flat(d, &base) {
        return Err(Error::arg(format!("{block:?} is not a block")));
    }
    let mut seen = base.clone();
    let mut flats = Vec::new();
    for x in 0..v {
        if seen.contains(x) {
            continue;
        }
        let f = closure_extend(d, &base, [x]);
        if f.is_full() {
            return Err(Error::ImproperFlat { block: block.to_vec(), point: x });
        }
        if f.intersection_len(&seen) != block.len() {
            return Err(Error::arg(format!(
                "flats through {block:?} do not meet exactly in the block"
            )));
        }
        seen.union_with(&f);
        flats.push(f);
    }
    Ok(flats)
}

/// GDD left after deleting a block `B` and the flats through it.
#[derive(Clone, Debug)]
pub struct DeletedBlock {
    pub gdd: Gdd,
    /// Original point id of each GDD point.
    pub points: Vec<usize>,
    /// The flats `⟨B, x⟩`, in original ids.
    pub flats: Vec<Vec<usize>>,
}

pub fn deleted_block_partition(d: &Design, block: &[usize]) -> Result<DeletedBlock> {
    let flats = flats_through_block(d, block)?;
    let points: Vec<usize> = (0..d.v()).filter(|p| block.binary_search(p).is_err()).collect();
    let mut new_id = vec![usize::MAX; d.v()];
    for (i, &p) in points.iter().enumerate() {
        new_id[p] = i;
    }
    let groups: Vec<Block> = flats
        .iter()
        .map(|f| f.iter().filter(|p| new_id[*p] != usize::MAX).map(|p| new_id[p]).collect())
        .collect();
    let blocks: Vec<Block> = d
        .blocks()
        .iter()
        .filter(|b| !flats.iter().any(|f| b.iter().all(|&p| f.contains(p))))
        .map(|b| b.iter().map(|&p| new_id[p]).collect())
        .collect();
    let k = KSet::new(blocks.iter().map(Vec::len));
    let gdd = Gdd::new(points.len(), groups, k.union(d.k()), blocks)?;
    Ok(DeletedBlock {
        gdd,
        points,
        flats: flats.iter().map(PointSet::to_vec).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate_gdd;
    use crate::geometry::{affine_space, projective_space};

    fn fano() -> Design {
        projective_space(2, 2).unwrap().into_design()
    }

    #[test]
    fn small_closures() {
        let f = fano();
        assert_eq!(closure(&f, [3]).to_vec(), vec![3]);
        let b = f.block_through(0, 1).unwrap().to_vec();
        assert_eq!(closure(&f, [0, 1]).to_vec(), b);
        // pick a point off the block
        let x = (0..7).find(|p| !b.contains(p)).unwrap();
        assert!(closure(&f, [0, 1, x]).is_full());
    }

    #[test]
    fn flat_tests() {
        let pg = projective_space(3, 3).unwrap();
        let d = pg.design();
        for b in d.blocks().iter().take(10) {
            assert!(is_flat(d, &PointSet::from_points(40, b.iter().copied())));
            let extra = (0..40).find(|p| !b.contains(p)).unwrap();
            let grown = PointSet::from_points(40, b.iter().copied().chain([extra]));
            assert!(!is_flat(d, &grown));
        }
        for plane in pg.planes() {
            assert_eq!(plane.points.len(), 13);
            assert!(is_flat(d, &PointSet::from_points(40, plane.points.iter().copied())));
        }
    }

    #[test]
    fn all_on_one_block_has_dimension_one() {
        let d = Design::new(5, KSet::new([5]), [vec![0, 1, 2, 3, 4]]).unwrap();
        let c = dimension(&d, DimensionMode::Exact);
        assert_eq!(c.dimension, 1);
        assert_eq!(c.counterexample.as_ref().map(Vec::len), Some(2));
    }

    #[test]
    fn fano_has_dimension_two() {
        let c = dimension(&fano(), DimensionMode::Exact);
        assert_eq!(c.dimension, 2);
        let cx = c.counterexample.unwrap();
        assert_eq!(cx.len(), 3);
        assert!(closure(&fano(), cx).is_full());
        assert!(!dimension(&fano(), DimensionMode::AtLeast(3)).passed);
        assert!(dimension(&fano(), DimensionMode::AtLeast(2)).passed);
    }

    #[test]
    fn geometric_dimensions() {
        assert_eq!(dimension(projective_space(3, 2).unwrap().design(), DimensionMode::Exact).dimension, 3);
        assert_eq!(dimension(affine_space(3, 3).unwrap().design(), DimensionMode::Exact).dimension, 3);
        assert_eq!(dimension(affine_space(2, 3).unwrap().design(), DimensionMode::Exact).dimension, 2);
    }

    #[test]
    fn witnesses_are_proper_and_contain_generators() {
        let d = projective_space(3, 2).unwrap().into_design();
        let c = dimension(&d, DimensionMode::Exact);
        assert!(!c.witnesses.is_empty());
        for w in &c.witnesses {
            assert_eq!(w.generators.len(), 3);
            assert!(w.flat.len() < 15);
            assert!(w.generators.iter().all(|g| w.flat.contains(g)));
            assert_eq!(closure(&d, w.generators.iter().copied()).to_vec(), w.flat);
        }
    }

    #[test]
    fn nondegenerate_weightings() {
        let d = projective_space(3, 3).unwrap().into_design();
        assert!(nondegenerate(&d, &Weighting::uniform(40, 1)));
        let block = d.blocks()[0].clone();
        let mut on_block = vec![0; 40];
        for &p in &block {
            on_block[p] = 1;
        }
        assert!(!nondegenerate(&d, &Weighting::new(on_block)));
        let mut partial_line = vec![1; 40];
        for &p in &block[..3] {
            partial_line[p] = 0;
        }
        assert!(nondegenerate(&d, &Weighting::new(partial_line)));
    }

    #[test]
    fn subsystem_bounds() {
        assert!(subsystem_bound(15, 7));
        assert!(!subsystem_bound(33, 17));
        assert!(subsystem_bound(33, 15));
    }

    #[test]
    fn deleting_a_block_of_pg32() {
        let d = projective_space(3, 2).unwrap().into_design();
        let b = d.blocks()[0].clone();
        let del = deleted_block_partition(&d, &b).unwrap();
        assert_eq!(del.gdd.v(), 12);
        assert_eq!(del.gdd.group_type().to_string(), "4^3");
        assert!(validate_gdd(&del.gdd).passed);
        for f in &del.flats {
            assert_eq!(f.len(), 7);
            assert!(is_flat(&d, &PointSet::from_points(15, f.iter().copied())));
        }
    }

    #[test]
    fn deleting_a_block_of_pg34() {
        let d = projective_space(3, 4).unwrap().into_design();
        let b = d.blocks()[100].clone();
        let del = deleted_block_partition(&d, &b).unwrap();
        assert_eq!(del.gdd.group_type().to_string(), "16^5");
        assert!(validate_gdd(&del.gdd).passed);
    }

    #[test]
    fn deleting_a_block_of_a_plane_fails() {
        let f = fano();
        let b = f.blocks()[0].clone();
        assert!(matches!(deleted_block_partition(&f, &b), Err(Error::ImproperFlat { .. })));
    }
}
