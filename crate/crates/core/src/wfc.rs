//! Wilson's fundamental construction: inflate every point of a master GDD to
//! a fiber of `ω(x)` copies and replace each master block by an ingredient
//! GDD whose groups are the fibers of the block's points.

use std::sync::Arc;

use crate::design::{Block, Gdd, GroupType, KSet};
use crate::error::{Error, Result};

/// Nonnegative point weights over a master design.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weighting(Vec<u32>);

impl Weighting {
    pub fn new(weights: Vec<u32>) -> Self {
        Weighting(weights)
    }

    pub fn uniform(v: usize, w: u32) -> Self {
        Weighting(vec![w; v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, p: usize) -> u32 {
        self.0[p]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn set(&mut self, p: usize, w: u32) {
        self.0[p] = w;
    }

    /// Points of positive weight, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &w)| w > 0).map(|(p, _)| p)
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&w| w as usize).sum()
    }

    /// Multiset of the positive weights on `block`.
    pub fn block_type(&self, block: &[usize]) -> GroupType {
        GroupType::from_sizes(block.iter().map(|&p| self.0[p] as usize).filter(|&w| w > 0))
    }
}

/// Supplies a verified K-GDD for each requested group type.
pub trait IngredientProvider {
    fn k(&self) -> &KSet;
    fn ingredient(&self, t: &GroupType) -> Result<Arc<Gdd>>;
}

/// Runs Wilson's fundamental construction.
///
/// Ingredient groups are matched to the block's positive-weight points in
/// ascending point order (first unused group of the right size), and each
/// ingredient group's points, ascending, go to the fiber copies in order.
/// Master groups of total weight zero vanish.
pub fn wfc(master: &Gdd, w: &Weighting, ing: &dyn IngredientProvider) -> Result<Gdd> {
    if w.len() != master.v() {
        return Err(Error::arg(format!(
            "weighting has {} entries for a master on {} points",
            w.len(),
            master.v()
        )));
    }
    if w.support().nth(1).is_none() {
        return Err(Error::arg("weighting needs at least two points of positive weight"));
    }
    let mut offset = Vec::with_capacity(master.v());
    let mut total = 0usize;
    for p in 0..master.v() {
        offset.push(total);
        total += w.weight(p) as usize;
    }
    let fiber = |p: usize| offset[p]..offset[p] + w.weight(p) as usize;

    let groups: Vec<Block> = master
        .groups()
        .iter()
        .map(|g| g.iter().flat_map(|&p| fiber(p)).collect::<Block>())
        .filter(|g| !g.is_empty())
        .collect();

    let mut blocks = Vec::new();
    for b in master.blocks() {
        let positive: Vec<usize> = b.iter().copied().filter(|&p| w.weight(p) > 0).collect();
        match positive.len() {
            0 | 1 => continue,
            2 => return Err(Error::WouldCreatePair { block: b.clone() }),
            _ => {}
        }
        let t = w.block_type(&positive);
        let ingredient = ing.ingredient(&t)?;
        if ingredient.group_type() != t {
            return Err(Error::MissingIngredient {
                group_type: t.to_string(),
                k: ing.k().to_string(),
                reason: format!("provider returned type {}", ingredient.group_type()),
            });
        }
        let mut image = vec![usize::MAX; ingredient.v()];
        let mut used = vec![false; ingredient.groups().len()];
        for &p in &positive {
            let want = w.weight(p) as usize;
            let gi = (0..used.len())
                .find(|&gi| !used[gi] && ingredient.groups()[gi].len() == want)
                .expect("ingredient type matches block weights");
            used[gi] = true;
            for (ip, target) in ingredient.groups()[gi].iter().zip(fiber(p)) {
                image[*ip] = target;
            }
        }
        blocks.extend(
            ingredient
                .blocks()
                .iter()
                .map(|ib| ib.iter().map(|&ip| image[ip]).collect::<Block>()),
        );
    }
    Gdd::new(total, groups, ing.k().clone(), blocks)
}
