//! Filling the groups of a GDD with PBDs.

use std::collections::BTreeMap;

use crate::design::{validate_pbd, Block, Design, Gdd, KSet};
use crate::error::{Error, Result};
use crate::flats::is_flat;
use crate::pointset::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillMode {
    /// A PBD(g, K) on each group.
    Plain,
    /// One new point; a PBD(g+1, K) on each group plus the new point.
    PlusPoint,
    /// `h` new points shared by every filler PBD(g+h, K), each of which must
    /// carry the new points as a flat.
    PlusFlat { h: usize },
}

/// A filler design, optionally with a distinguished flat (for `PlusFlat`).
#[derive(Clone, Debug)]
pub struct Filler {
    pub design: Design,
    pub flat: Option<Vec<usize>>,
}

/// Filler designs keyed by their number of points.
#[derive(Clone, Debug, Default)]
pub struct Fillers {
    by_order: BTreeMap<usize, Filler>,
    single_blocks: bool,
}

impl Fillers {
    pub fn new() -> Self {
        Self::default()
    }

    /// Falls back to a single block on `n ≥ 3` points (and the empty design
    /// on one point) whenever no explicit filler is registered.
    pub fn single_blocks() -> Self {
        Fillers { by_order: BTreeMap::new(), single_blocks: true }
    }

    pub fn with(mut self, design: Design) -> Self {
        self.by_order.insert(design.v(), Filler { design, flat: None });
        self
    }

    pub fn with_flat(mut self, design: Design, flat: Vec<usize>) -> Self {
        self.by_order.insert(design.v(), Filler { design, flat: Some(flat) });
        self
    }

    fn get(&self, order: usize) -> Option<Filler> {
        if let Some(f) = self.by_order.get(&order) {
            return Some(f.clone());
        }
        if !self.single_blocks {
            return None;
        }
        let design = match order {
            1 => Design::new(1, KSet::default(), []).ok()?,
            n if n >= 3 => Design::new(n, KSet::new([n]), [(0..n).collect()]).ok()?,
            _ => return None,
        };
        Some(Filler { design, flat: None })
    }
}

pub fn fill_groups(g: &Gdd, mode: FillMode, fillers: &Fillers) -> Result<Design> {
    let extra = match mode {
        FillMode::Plain => 0,
        FillMode::PlusPoint => 1,
        FillMode::PlusFlat { h } => h,
    };
    let v = g.v() + extra;
    let new_points: Vec<usize> = (g.v()..v).collect();
    let mut blocks: Vec<Block> = g.blocks().to_vec();
    let mut k = g.k().clone();
    let mut flat_blocks_added = false;

    for group in g.groups() {
        let size = group.len();
        let filler = fillers.get(size + extra).ok_or(Error::MissingFiller(size))?;
        let fd = &filler.design;
        let bad = |reason: String| Error::BadFiller { size, reason };
        if fd.v() != size + extra {
            return Err(bad(format!("filler has {} points, need {}", fd.v(), size + extra)));
        }
        let report = validate_pbd(&fd.clone().with_k(fd.effective_k()));
        if !report.passed {
            return Err(bad(report.message));
        }
        // filler point -> output point
        let (image, shared): (Vec<usize>, PointSet) = match mode {
            FillMode::Plain => (group.clone(), PointSet::empty(fd.v())),
            FillMode::PlusPoint => {
                let mut img = group.clone();
                img.push(g.v());
                (img, PointSet::from_points(fd.v(), [size]))
            }
            FillMode::PlusFlat { h } => {
                let flat = filler
                    .flat
                    .clone()
                    .ok_or_else(|| bad("no distinguished flat".into()))?;
                let flat_set = PointSet::from_points(fd.v(), flat.iter().copied());
                if flat_set.len() != h || !is_flat(fd, &flat_set) {
                    return Err(bad(format!("distinguished set {flat:?} is not a flat of order {h}")));
                }
                let mut img = vec![0; fd.v()];
                let mut rest = group.iter();
                let mut fresh = new_points.iter();
                for p in 0..fd.v() {
                    img[p] = if flat_set.contains(p) { *fresh.next().unwrap() } else { *rest.next().unwrap() };
                }
                (img, flat_set)
            }
        };
        for b in fd.blocks() {
            let inside_shared = b.iter().all(|&p| shared.contains(p));
            if inside_shared
                && flat_blocks_added {
                    continue;
                }
            blocks.push(b.iter().map(|&p| image[p]).collect());
        }
        if !shared.is_empty() {
            flat_blocks_added = true;
        }
        k = k.union(&fd.effective_k());
    }

    let mut labels = BTreeMap::new();
    if mode == FillMode::PlusPoint {
        labels.insert(g.v(), "∞".to_string());
    }
    Ok(Design::new(v, k, blocks)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{validate_gdd, validate_pbd};
    use crate::geometry::projective_space;
    use crate::truncate::delete_point;

    fn two_cubed() -> Gdd {
        Gdd::new(
            6,
            [vec![0, 1], vec![2, 3], vec![4, 5]],
            KSet::new([3]),
            [vec![0, 2, 4], vec![0, 3, 5], vec![1, 2, 5], vec![1, 3, 4]],
        )
        .unwrap()
    }

    #[test]
    fn plus_point_completes_2_cubed_to_the_fano_plane() {
        let d = fill_groups(&two_cubed(), FillMode::PlusPoint, &Fillers::single_blocks()).unwrap();
        assert_eq!(d.v(), 7);
        assert!(validate_pbd(&d.clone().with_k(KSet::new([3]))).passed);
        assert_eq!(d.label(6), Some("∞"));
    }

    #[test]
    fn single_group_plain_fill_is_the_filler() {
        let filler = projective_space(2, 2).unwrap().into_design();
        let g = Gdd::new(7, [(0..7).collect()], KSet::new([3]), []).unwrap();
        let d = fill_groups(&g, FillMode::Plain, &Fillers::new().with(filler.clone())).unwrap();
        assert_eq!(d.blocks(), filler.blocks());
    }

    #[test]
    fn delete_then_refill_restores_coverage() {
        let d = projective_space(3, 2).unwrap().into_design();
        let g = delete_point(&d, 0).unwrap();
        assert!(validate_gdd(&g).passed);
        let back = fill_groups(&g, FillMode::PlusPoint, &Fillers::single_blocks()).unwrap();
        assert!(validate_pbd(&back.clone().with_k(KSet::new([3]))).passed);
        assert_eq!(back.num_blocks(), d.num_blocks());
    }

    #[test]
    fn plus_flat_shares_the_flat() {
        // PG_3(2) minus a line is a 3-GDD of type 4^3; Fano planes sharing
        // a line put it back together on 15 points
        let fano = projective_space(2, 2).unwrap().into_design();
        let line = fano.blocks()[0].clone();
        let pg = projective_space(3, 2).unwrap().into_design();
        let del = crate::flats::deleted_block_partition(&pg, &pg.blocks()[0]).unwrap();
        let fillers = Fillers::new().with_flat(fano, line);
        let d = fill_groups(&del.gdd, FillMode::PlusFlat { h: 3 }, &fillers).unwrap();
        assert_eq!(d.v(), 15);
        assert!(validate_pbd(&d.clone().with_k(KSet::new([3]))).passed);
    }

    #[test]
    fn filler_errors() {
        let g = two_cubed();
        assert!(matches!(
            fill_groups(&g, FillMode::Plain, &Fillers::single_blocks()),
            Err(Error::MissingFiller(2))
        ));
        let fano = projective_space(2, 2).unwrap().into_design();
        let not_flat = vec![0, 1, 3, 5, 6];
        let pg = projective_space(3, 2).unwrap().into_design();
        let del = crate::flats::deleted_block_partition(&pg, &pg.blocks()[0]).unwrap();
        let fillers = Fillers::new().with_flat(fano, not_flat);
        assert!(matches!(
            fill_groups(&del.gdd, FillMode::PlusFlat { h: 3 }, &fillers),
            Err(Error::BadFiller { .. })
        ));
    }
}
