//! Core design types: pairwise balanced designs, group divisible designs and
//! triple systems, with exhaustive axiom verification.
//!
//! Points are dense ids `0..v`. Blocks are kept canonical at all times: each
//! block sorted ascending, the block list sorted lexicographically. Designs
//! are never mutated after construction, so the lazily built pair index can be
//! shared freely between threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Block = Vec<usize>;

const NO_BLOCK: u32 = u32::MAX;

/// Index of the unordered pair `{i, j}` (`i < j`) among the `v(v-1)/2` pairs.
#[inline]
pub fn pair_id(v: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < v);
    i * (2 * v - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(v: usize) -> usize {
    v * v.saturating_sub(1) / 2
}

/// A set of allowed block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KSet(BTreeSet<usize>);

impl KSet {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Self {
        KSet(sizes.into_iter().collect())
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }

    pub fn is_subset(&self, other: &KSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &KSet) -> KSet {
        KSet(self.0.union(&other.0).copied().collect())
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for KSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let k: usize = part
                .parse()
                .map_err(|_| Error::arg(format!("bad block size {part:?}")))?;
            set.insert(k);
        }
        if set.is_empty() {
            return Err(Error::arg("empty block size set"));
        }
        Ok(KSet(set))
    }
}

/// Multiset of group sizes, written in exponential notation (`6^3 10^1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupType(BTreeMap<usize, usize>);

impl GroupType {
    pub fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut map = BTreeMap::new();
        for s in sizes {
            *map.entry(s).or_insert(0) += 1;
        }
        GroupType(map)
    }

    /// `(size, multiplicity)` pairs in ascending size order.
    pub fn parts(&self) -> impl DoubleEndedIterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&g, &u)| (g, u))
    }

    /// All group sizes, ascending, with repetition.
    pub fn sizes(&self) -> Vec<usize> {
        self.parts()
            .flat_map(|(g, u)| std::iter::repeat_n(g, u))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.parts().map(|(g, u)| g * u).sum()
    }

    pub fn num_groups(&self) -> usize {
        self.0.values().sum()
    }

    /// Filename-safe rendering, e.g. `2^3_4^1`.
    pub fn compact(&self) -> String {
        let parts: Vec<String> = self.parts().map(|(g, u)| format!("{g}^{u}")).collect();
        parts.join("_")
    }

    /// Rendering with the largest sizes first, the usual way types are quoted
    /// (`10^1 8^1 6^2`).
    pub fn descending(&self) -> String {
        let parts: Vec<String> = self.parts().rev().map(|(g, u)| format!("{g}^{u}")).collect();
        parts.join(" ")
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().map(|(g, u)| format!("{g}^{u}")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for GroupType {
    type Err = Error;

    /// Accepts `2^3,4^1`, `2^3 4^1`, `2^3_4^1` and bare sizes (`5` = `5^1`).
    fn from_str(s: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in s
            .split(|c: char| c == ',' || c == '_' || c.is_whitespace())
            .filter(|p| !p.is_empty())
        {
            let (g, u) = match part.split_once('^') {
                Some((g, u)) => (g, u),
                None => (part, "1"),
            };
            let bad = || Error::arg(format!("bad group type component {part:?}"));
            let g: usize = g.parse().map_err(|_| bad())?;
            let u: usize = u.parse().map_err(|_| bad())?;
            if g == 0 {
                return Err(bad());
            }
            if u > 0 {
                *map.entry(g).or_insert(0) += u;
            }
        }
        if map.is_empty() {
            return Err(Error::arg("empty group type"));
        }
        Ok(GroupType(map))
    }
}

fn check_block(v: usize, block: &[usize]) -> Result<Block> {
    let mut b = block.to_vec();
    b.sort_unstable();
    if let Some(&p) = b.iter().find(|&&p| p >= v) {
        return Err(Error::PointOutOfRange { point: p, v });
    }
    if b.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RepeatedPoint { block: block.to_vec() });
    }
    Ok(b)
}

/// Sorts each block, sorts the block list and drops exact duplicates.
pub fn canonical_blocks(blocks: impl IntoIterator<Item = Block>) -> Vec<Block> {
    let mut out: Vec<Block> = blocks
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A candidate pairwise balanced design PBD(v, K).
///
/// Construction only enforces structure (ids in range, no repeated point in
/// a block); the PBD axiom itself is checked by [`validate_pbd`].
#[derive(Clone)]
pub struct Design {
    v: usize,
    k: KSet,
    blocks: Vec<Block>,
    labels: BTreeMap<usize, String>,
    pair_index: OnceLock<Vec<u32>>,
}

impl Design {
    pub fn new(v: usize, k: KSet, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let checked = blocks
            .into_iter()
            .map(|b| check_block(v, &b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Design {
            v,
            k,
            blocks: canonical_blocks(checked),
            labels: BTreeMap::new(),
            pair_index: OnceLock::new(),
        })
    }

    /// Design whose declared K is the set of block sizes actually present.
    pub fn with_effective_k(v: usize, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let mut d = Design::new(v, KSet::default(), blocks)?;
        d.k = d.effective_k();
        Ok(d)
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn with_k(mut self, k: KSet) -> Self {
        self.k = k;
        self
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> &KSet {
        &self.k
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn label(&self, p: usize) -> Option<&str> {
        self.labels.get(&p).map(String::as_str)
    }

    /// Block sizes that actually occur.
    pub fn effective_k(&self) -> KSet {
        KSet::new(self.blocks.iter().map(Vec::len))
    }

    fn pair_index(&self) -> &[u32] {
        self.pair_index.get_or_init(|| {
            let mut index = vec![NO_BLOCK; pair_count(self.v)];
            for (bi, b) in self.blocks.iter().enumerate() {
                for (i, &x) in b.iter().enumerate() {
                    for &y in &b[i + 1..] {
                        let slot = &mut index[pair_id(self.v, x, y)];
                        if *slot == NO_BLOCK {
                            *slot = bi as u32;
                        }
                    }
                }
            }
            index
        })
    }

    /// Index of the block containing the distinct points `x` and `y`.
    pub fn block_index(&self, x: usize, y: usize) -> Option<usize> {
        let (i, j) = if x < y { (x, y) } else { (y, x) };
        if i == j || j >= self.v {
            return None;
        }
        match self.pair_index()[pair_id(self.v, i, j)] {
            NO_BLOCK => None,
            bi => Some(bi as usize),
        }
    }

    pub fn block_through(&self, x: usize, y: usize) -> Option<&[usize]> {
        self.block_index(x, y).map(|bi| self.blocks[bi].as_slice())
    }

    /// Blocks incident with `x`, in canonical order.
    pub fn blocks_at(&self, x: usize) -> impl Iterator<Item = &Block> + '_ {
        self.blocks.iter().filter(move |b| b.binary_search(&x).is_ok())
    }
}

impl PartialEq for Design {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.k == other.k && self.blocks == other.blocks
    }
}

impl Eq for Design {}

impl fmt::Debug for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Design")
            .field("v", &self.v)
            .field("k", &self.k.to_string())
            .field("blocks", &self.blocks.len())
            .finish()
    }
}

/// Re-sorts the blocks of `d`. Designs are canonical on construction, so
/// this is the identity on anything built through [`Design::new`].
pub fn canonicalize(d: &Design) -> Design {
    Design {
        v: d.v,
        k: d.k.clone(),
        blocks: canonical_blocks(d.blocks.iter().cloned()),
        labels: d.labels.clone(),
        pair_index: OnceLock::new(),
    }
}

/// A candidate K-GDD: a partition of `0..v` into groups plus blocks.
#[derive(Clone, PartialEq, Eq)]
pub struct Gdd {
    v: usize,
    groups: Vec<Block>,
    k: KSet,
    blocks: Vec<Block>,
    group_of: Vec<usize>,
}

impl Gdd {
    pub fn new(
        v: usize,
        groups: impl IntoIterator<Item = Block>,
        k: KSet,
        blocks: impl IntoIterator<Item = Block>,
    ) -> Result<Self> {
        let mut groups = groups
            .into_iter()
            .map(|g| check_block(v, &g))
            .collect::<Result<Vec<_>>>()?;
        if let Some(g) = groups.iter().find(|g| g.is_empty()) {
            return Err(Error::NotAPartition(format!("empty group {g:?}")));
        }
        groups.sort();
        let mut group_of = vec![usize::MAX; v];
        for (gi, g) in groups.iter().enumerate() {
            for &p in g {
                if group_of[p] != usize::MAX {
                    return Err(Error::NotAPartition(format!("point {p} lies in two groups")));
                }
                group_of[p] = gi;
            }
        }
        if let Some(p) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::NotAPartition(format!("point {p} lies in no group")));
        }
        let blocks = blocks
            .into_iter()
            .map(|b| check_block(v, &b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Gdd {
            v,
            groups,
            k,
            blocks: canonical_blocks(blocks),
            group_of,
        })
    }

    /// A PBD viewed as a GDD of type `1^v`.
    pub fn from_pbd(d: &Design) -> Self {
        Gdd {
            v: d.v,
            groups: (0..d.v).map(|p| vec![p]).collect(),
            k: d.k.clone(),
            blocks: d.blocks.clone(),
            group_of: (0..d.v).collect(),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn groups(&self) -> &[Block] {
        &self.groups
    }

    pub fn k(&self) -> &KSet {
        &self.k
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn group_of(&self, p: usize) -> usize {
        self.group_of[p]
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::from_sizes(self.groups.iter().map(Vec::len))
    }
}

impl From<&Design> for Gdd {
    fn from(d: &Design) -> Self {
        Gdd::from_pbd(d)
    }
}

impl fmt::Debug for Gdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gdd")
            .field("v", &self.v)
            .field("type", &self.group_type().to_string())
            .field("k", &self.k.to_string())
            .field("blocks", &self.blocks.len())
            .finish()
    }
}

/// A (v, 3, λ) candidate: a multiset of triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    v: usize,
    lambda: usize,
    triples: Vec<[usize; 3]>,
}

impl TripleSystem {
    pub fn new(v: usize, lambda: usize, triples: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut out = Vec::new();
        for t in triples {
            let b = check_block(v, &t)?;
            out.push([b[0], b[1], b[2]]);
        }
        out.sort_unstable();
        Ok(TripleSystem { v, lambda, triples: out })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Triples in sorted order; repeated triples appear repeatedly.
    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDefect {
    pub pair: (usize, usize),
    pub count: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSizeDefect {
    pub block: Block,
    pub size: usize,
}

/// Outcome of an exhaustive axiom check. Every violation is listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub pair_defects: Vec<PairDefect>,
    pub block_size_defects: Vec<BlockSizeDefect>,
    pub message: String,
}

impl VerificationReport {
    fn from_defects(what: &str, pair_defects: Vec<PairDefect>, block_size_defects: Vec<BlockSizeDefect>) -> Self {
        let passed = pair_defects.is_empty() && block_size_defects.is_empty();
        let message = if passed {
            format!("{what}: all axioms hold")
        } else {
            format!(
                "{what}: {} pair defect(s), {} block-size defect(s)",
                pair_defects.len(),
                block_size_defects.len()
            )
        };
        VerificationReport {
            passed,
            pair_defects,
            block_size_defects,
            message,
        }
    }

    /// Multi-line rendering of every defect.
    pub fn render(&self) -> String {
        let mut out = self.message.clone();
        for d in &self.pair_defects {
            out.push_str(&format!(
                "\n  pair {{{}, {}}} covered {} time(s), expected {}",
                d.pair.0, d.pair.1, d.count, d.expected
            ));
        }
        for d in &self.block_size_defects {
            out.push_str(&format!("\n  block {:?} has size {} not in K", d.block, d.size));
        }
        out
    }
}

fn pair_counts<'a>(v: usize, blocks: impl Iterator<Item = &'a [usize]>) -> Vec<usize> {
    let mut counts = vec![0usize; pair_count(v)];
    for b in blocks {
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                counts[pair_id(v, x, y)] += 1;
            }
        }
    }
    counts
}

fn size_defects<'a>(k: &KSet, blocks: impl Iterator<Item = &'a [usize]>) -> Vec<BlockSizeDefect> {
    blocks
        .filter(|b| !k.contains(b.len()))
        .map(|b| BlockSizeDefect { block: b.to_vec(), size: b.len() })
        .collect()
}

fn coverage_defects(v: usize, counts: &[usize], expected: impl Fn(usize, usize) -> usize) -> Vec<PairDefect> {
    let mut defects = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            let count = counts[pair_id(v, i, j)];
            let want = expected(i, j);
            if count != want {
                defects.push(PairDefect { pair: (i, j), count, expected: want });
            }
        }
    }
    defects
}

/// Checks the PBD axioms: block sizes in K, every pair in exactly one block.
pub fn validate_pbd(d: &Design) -> VerificationReport {
    let counts = pair_counts(d.v, d.blocks.iter().map(Vec::as_slice));
    let pairs = coverage_defects(d.v, &counts, |_, _| 1);
    let sizes = size_defects(&d.k, d.blocks.iter().map(Vec::as_slice));
    VerificationReport::from_defects(&format!("PBD({}, {{{}}})", d.v, d.k), pairs, sizes)
}

/// Checks the GDD axioms: same-group pairs uncovered, cross pairs covered once.
pub fn validate_gdd(g: &Gdd) -> VerificationReport {
    let counts = pair_counts(g.v, g.blocks.iter().map(Vec::as_slice));
    let pairs = coverage_defects(g.v, &counts, |i, j| usize::from(g.group_of[i] != g.group_of[j]));
    let sizes = size_defects(&g.k, g.blocks.iter().map(Vec::as_slice));
    VerificationReport::from_defects(
        &format!("{{{}}}-GDD of type {}", g.k, g.group_type()),
        pairs,
        sizes,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BibdReport {
    pub report: VerificationReport,
    /// Whether (v, 3, λ) satisfies the necessary divisibility conditions.
    pub admissible: bool,
}

/// Checks that every pair lies in exactly λ triples.
pub fn validate_bibd(t: &TripleSystem) -> BibdReport {
    let counts = pair_counts(t.v, t.triples.iter().map(|b| b.as_slice()));
    let pairs = coverage_defects(t.v, &counts, |_, _| t.lambda);
    let report = VerificationReport::from_defects(&format!("({}, 3, {})-design", t.v, t.lambda), pairs, Vec::new());
    BibdReport {
        report,
        admissible: crate::arith::bibd_admissible(t.v, 3, t.lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fano() -> Design {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        Design::new(7, KSet::new([3]), lines.iter().map(|l| l.to_vec())).unwrap()
    }

    #[test]
    fn fano_is_a_pbd() {
        let r = validate_pbd(&fano());
        assert!(r.passed, "{}", r.render());
    }

    #[test]
    fn single_block_design() {
        for v in 3..9 {
            let d = Design::new(v, KSet::new([v]), [(0..v).collect()]).unwrap();
            assert!(validate_pbd(&d).passed);
        }
    }

    #[test]
    fn fano_minus_a_block_has_three_uncovered_pairs() {
        let f = fano();
        let blocks = f.blocks()[1..].to_vec();
        let removed = &f.blocks()[0];
        let d = Design::new(7, KSet::new([3]), blocks).unwrap();
        let r = validate_pbd(&d);
        assert!(!r.passed);
        assert_eq!(r.pair_defects.len(), 3);
        for defect in &r.pair_defects {
            assert_eq!(defect.count, 0);
            assert!(removed.contains(&defect.pair.0) && removed.contains(&defect.pair.1));
        }
    }

    #[test]
    fn out_of_range_point_is_structural() {
        let err = Design::new(3, KSet::new([3]), [vec![0, 1, 3]]).unwrap_err();
        assert!(matches!(err, Error::PointOutOfRange { point: 3, v: 3 }));
        let err = Design::new(4, KSet::new([3]), [vec![0, 1, 1]]).unwrap_err();
        assert!(matches!(err, Error::RepeatedPoint { .. }));
    }

    #[test]
    fn block_size_outside_k_is_a_defect() {
        let d = Design::new(3, KSet::new([4]), [vec![0, 1, 2]]).unwrap();
        let r = validate_pbd(&d);
        assert!(!r.passed);
        assert!(r.pair_defects.is_empty());
        assert_eq!(r.block_size_defects.len(), 1);
    }

    #[test]
    fn gdd_type_2_cubed() {
        // groups {0,1},{2,3},{4,5}
        let g = Gdd::new(
            6,
            [vec![0, 1], vec![2, 3], vec![4, 5]],
            KSet::new([3]),
            [vec![0, 2, 4], vec![0, 3, 5], vec![1, 2, 5], vec![1, 3, 4]],
        )
        .unwrap();
        assert!(validate_gdd(&g).passed);
        assert_eq!(g.group_type().to_string(), "2^3");

        let bad = Gdd::new(
            6,
            [vec![0, 1], vec![2, 3], vec![4, 5]],
            KSet::new([3]),
            [vec![0, 1, 4], vec![0, 3, 5], vec![1, 2, 5], vec![1, 3, 4]],
        )
        .unwrap();
        let r = validate_gdd(&bad);
        assert!(!r.passed);
        assert!(r.pair_defects.iter().any(|d| d.pair == (0, 1) && d.expected == 0));
    }

    #[test]
    fn pbd_as_type_one_gdd() {
        let g = Gdd::from_pbd(&fano());
        assert_eq!(g.group_type().to_string(), "1^7");
        assert!(validate_gdd(&g).passed);
    }

    #[test]
    fn non_partition_groups() {
        let e = Gdd::new(4, [vec![0, 1], vec![1, 2]], KSet::new([3]), []).unwrap_err();
        assert!(matches!(e, Error::NotAPartition(_)));
        let e = Gdd::new(4, [vec![0, 1], vec![2]], KSet::new([3]), []).unwrap_err();
        assert!(matches!(e, Error::NotAPartition(_)));
    }

    #[test]
    fn bibd_checks() {
        let all5: Vec<[usize; 3]> = (0..5)
            .flat_map(|a| (a + 1..5).flat_map(move |b| (b + 1..5).map(move |c| [a, b, c])))
            .collect();
        assert_eq!(all5.len(), 10);
        let r = validate_bibd(&TripleSystem::new(5, 3, all5).unwrap());
        assert!(r.report.passed && r.admissible);

        let all4 = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        let r = validate_bibd(&TripleSystem::new(4, 2, all4).unwrap());
        assert!(r.report.passed && r.admissible);

        let r = validate_bibd(&TripleSystem::new(3, 2, [[0, 1, 2]]).unwrap());
        assert!(!r.report.passed);
        assert_eq!(r.report.pair_defects.len(), 3);
    }

    #[test]
    fn group_type_notation() {
        let t: GroupType = "2^3,4^1".parse().unwrap();
        assert_eq!(t.sizes(), vec![2, 2, 2, 4]);
        assert_eq!(t.total(), 10);
        assert_eq!(t.to_string(), "2^3 4^1");
        assert_eq!(t.compact(), "2^3_4^1");
        assert_eq!(t.compact().parse::<GroupType>().unwrap(), t);
        let t2 = GroupType::from_sizes([10, 8, 6, 6]);
        assert_eq!(t2.descending(), "10^1 8^1 6^2");
        assert!("".parse::<GroupType>().is_err());
        assert!("0^2".parse::<GroupType>().is_err());
    }

    #[test]
    fn kset_parse() {
        let k: KSet = "3,4,5".parse().unwrap();
        assert_eq!(k, KSet::new([3, 4, 5]));
        assert_eq!("{3,5}".parse::<KSet>().unwrap().to_string(), "3,5");
        assert!("".parse::<KSet>().is_err());
    }
}
