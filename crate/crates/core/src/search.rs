//! Exhaustive backtracking search for small K-GDDs.
//!
//! Points are laid out group by group. Each step takes the uncovered pair
//! `{a, b}` with `a` smallest and then `b` smallest, and tries every block
//! through it built from points still uncovered with all chosen points. The
//! search is complete: when the node budget is not exhausted, failure proves
//! nonexistence.

use crate::design::{validate_gdd, Block, Gdd, GroupType, KSet};
use crate::error::{Error, Result};

/// Largest number of points the bitmask search handles.
pub const MAX_SEARCH_POINTS: usize = 30;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Gdd),
    Nonexistent { nodes: u64 },
    BudgetExceeded { nodes: u64 },
}

impl SearchOutcome {
    pub fn gdd(&self) -> Option<&Gdd> {
        match self {
            SearchOutcome::Found(g) => Some(g),
            _ => None,
        }
    }
}

struct Search {
    uncovered: Vec<u32>,
    /// `degree_ok[n]`: `n` is a sum of values `k - 1`, `k ∈ K`.
    degree_ok: Vec<bool>,
    sizes: Vec<usize>,
    blocks: Vec<Block>,
    nodes: u64,
    budget: u64,
}

enum Stop {
    Found,
    Budget,
}

impl Search {
    fn place(&mut self, block: &[usize]) {
        for (i, &x) in block.iter().enumerate() {
            for &y in &block[i + 1..] {
                self.uncovered[x] &= !(1 << y);
                self.uncovered[y] &= !(1 << x);
            }
        }
    }

    fn unplace(&mut self, block: &[usize]) {
        for (i, &x) in block.iter().enumerate() {
            for &y in &block[i + 1..] {
                self.uncovered[x] |= 1 << y;
                self.uncovered[y] |= 1 << x;
            }
        }
    }

    fn degrees_ok(&self, block: &[usize]) -> bool {
        block
            .iter()
            .all(|&x| self.degree_ok[self.uncovered[x].count_ones() as usize])
    }

    fn run(&mut self) -> std::result::Result<(), Stop> {
        let Some(a) = self.uncovered.iter().position(|&m| m != 0) else {
            return Err(Stop::Found);
        };
        let b = self.uncovered[a].trailing_zeros() as usize;
        let common = self.uncovered[a] & self.uncovered[b];
        let mut block = vec![a, b];
        for size in self.sizes.clone() {
            self.extend(&mut block, size, common, b)?;
        }
        Ok(())
    }

    /// Adds points above `last` drawn from `cand` until the block has `size` points.
    fn extend(&mut self, block: &mut Block, size: usize, cand: u32, last: usize) -> std::result::Result<(), Stop> {
        if block.len() == size {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Stop::Budget);
            }
            self.place(block);
            let r = if self.degrees_ok(block) { self.run() } else { Ok(()) };
            if r.is_err() {
                if let Err(Stop::Found) = r {
                    self.blocks.push(block.clone());
                }
                return r;
            }
            self.unplace(block);
            return Ok(());
        }
        let mut rest = cand & !((2u32 << last) - 1);
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            block.push(x);
            let r = self.extend(block, size, cand & self.uncovered[x], x);
            block.pop();
            r?;
        }
        Ok(())
    }
}

/// Searches for a K-GDD of type `t`, groups laid out in ascending size.
pub fn find_gdd(t: &GroupType, k: &KSet, budget: u64) -> Result<SearchOutcome> {
    find_gdd_with_layout(&t.sizes(), k, budget)
}

/// Searches with the groups laid out in the given order.
pub fn find_gdd_with_layout(group_sizes: &[usize], k: &KSet, budget: u64) -> Result<SearchOutcome> {
    let v: usize = group_sizes.iter().sum();
    if v > MAX_SEARCH_POINTS {
        return Err(Error::arg(format!(
            "search handles at most {MAX_SEARCH_POINTS} points, type has {v}"
        )));
    }
    if k.is_empty() || k.iter().any(|s| s < 2) {
        return Err(Error::arg(format!("bad block size set {{{k}}}")));
    }
    if group_sizes.contains(&0) {
        return Err(Error::arg("group of size zero"));
    }
    let mut groups: Vec<Block> = Vec::new();
    let mut group_mask = vec![0u32; v];
    let mut next = 0;
    for &g in group_sizes {
        let members: Block = (next..next + g).collect();
        let mask = members.iter().fold(0u32, |m, &p| m | 1 << p);
        for &p in &members {
            group_mask[p] = mask;
        }
        groups.push(members);
        next += g;
    }
    let all = (1u32 << v) - 1;
    let uncovered = group_mask.iter().map(|&gm| all & !gm).collect();
    let mut degree_ok = vec![false; v + 1];
    degree_ok[0] = true;
    for n in 1..=v {
        degree_ok[n] = k.iter().any(|s| s - 1 <= n && degree_ok[n - (s - 1)]);
    }
    let mut s = Search {
        uncovered,
        degree_ok,
        sizes: k.iter().collect(),
        blocks: Vec::new(),
        nodes: 0,
        budget,
    };
    if !(0..v).all(|x| s.degree_ok[s.uncovered[x].count_ones() as usize]) {
        return Ok(SearchOutcome::Nonexistent { nodes: 0 });
    }
    match s.run() {
        Ok(()) => Ok(SearchOutcome::Nonexistent { nodes: s.nodes }),
        Err(Stop::Budget) => Ok(SearchOutcome::BudgetExceeded { nodes: s.nodes }),
        Err(Stop::Found) => {
            let gdd = Gdd::new(v, groups, k.clone(), s.blocks)?;
            let report = validate_gdd(&gdd);
            assert!(report.passed, "search produced an invalid GDD: {}", report.message);
            Ok(SearchOutcome::Found(gdd))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn search(t: &str, k: &[usize]) -> SearchOutcome {
        find_gdd(&t.parse().unwrap(), &KSet::new(k.iter().copied()), DEFAULT_NODE_BUDGET).unwrap()
    }

    #[test]
    fn small_three_gdds() {
        for t in ["2^3", "3^3", "2^4", "1^7", "1^9", "4^3", "2^1 4^3"] {
            let out = search(t, &[3]);
            let g = out.gdd().unwrap_or_else(|| panic!("{t}: {out:?}"));
            assert_eq!(g.group_type(), t.parse().unwrap());
        }
    }

    #[test]
    fn small_nonexistence() {
        for (t, k) in [("2^2", vec![3]), ("1^6", vec![3]), ("1^8", vec![3, 4]), ("2^3", vec![4]), ("1^2", vec![3])] {
            assert!(matches!(search(t, &k), SearchOutcome::Nonexistent { .. }), "{t}");
        }
    }

    #[test]
    fn budget_is_reported() {
        let out = find_gdd(&"3^5".parse().unwrap(), &KSet::new([3]), 3).unwrap();
        assert!(matches!(out, SearchOutcome::BudgetExceeded { nodes: 4 }));
    }

    #[test]
    fn layout_does_not_change_the_verdict() {
        let k = KSet::new([3, 4]);
        let a = find_gdd_with_layout(&[2, 2, 2, 3], &k, DEFAULT_NODE_BUDGET).unwrap();
        let b = find_gdd_with_layout(&[3, 2, 2, 2], &k, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(a.gdd().unwrap().group_type(), b.gdd().unwrap().group_type());
    }

    #[test]
    fn too_large() {
        assert!(find_gdd(&"4^8".parse().unwrap(), &KSet::new([3]), 10).is_err());
    }
}
