use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the points `0..v` of some design.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn empty(v: usize) -> Self {
        PointSet(FixedBitSet::with_capacity(v))
    }

    pub fn full(v: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(v);
        bits.insert_range(..);
        PointSet(bits)
    }

    pub fn from_points(v: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(v);
        for p in points {
            s.insert(p);
        }
        s
    }

    /// Size of the ambient point set.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(p)
    }

    /// Inserts `p`, returning true if it was not already present.
    pub fn insert(&mut self, p: usize) -> bool {
        !self.0.put(p)
    }

    pub fn remove(&mut self, p: usize) {
        self.0.set(p, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.0.intersection_count(&other.0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        PointSet(bits)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.0.union_with(&other.0);
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut bits = self.0.clone();
        bits.difference_with(&other.0);
        PointSet(bits)
    }

    pub fn complement(&self) -> PointSet {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        PointSet(bits)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
