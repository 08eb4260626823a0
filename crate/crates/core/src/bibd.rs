//! (v, 3, λ)-designs from PBDs with block sizes in {3, 4, 5}.

use crate::design::{pair_id, pair_count, Design, KSet, TripleSystem};
use crate::error::{Error, Result};
use crate::flats::{dimension, DimensionCertificate, DimensionMode, LinearSpace};

/// Copies of each 3-subset of a `k`-block in a (k, 3, λ)-design built from
/// all triples of the block, or `None` when λ is not a multiple of `k - 2`.
fn copies(k: usize, lambda: usize) -> Option<usize> {
    lambda.is_multiple_of(k - 2).then(|| lambda / (k - 2))
}

/// Replaces every block by a (k, 3, λ)-design on its points: all 3-subsets
/// of the block, each repeated λ/(k−2) times.
pub fn expand_to_bibd(d: &Design, lambda: usize) -> Result<TripleSystem> {
    let allowed = match lambda {
        2 => KSet::new([3, 4]),
        3 => KSet::new([3, 5]),
        6 => KSet::new([3, 4, 5]),
        _ => return Err(Error::arg(format!("index must be 2, 3 or 6, got {lambda}"))),
    };
    let k = d.effective_k();
    if !k.is_subset(&allowed) {
        return Err(Error::arg(format!(
            "index {lambda} needs block sizes in {{{allowed}}}, design has {{{k}}}"
        )));
    }
    let mut triples = Vec::new();
    for b in d.blocks() {
        let reps = copies(b.len(), lambda).expect("block size checked against the index");
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                for l in j + 1..b.len() {
                    for _ in 0..reps {
                        triples.push([b[i], b[j], b[l]]);
                    }
                }
            }
        }
    }
    TripleSystem::new(d.v(), lambda, triples)
}

/// Pair spans of a triple system: the distinct third points of the triples
/// through each pair. Multiplicity plays no part in flat membership.
pub struct TripleSpans {
    v: usize,
    spans: Vec<Vec<usize>>,
}

impl TripleSpans {
    pub fn new(t: &TripleSystem) -> Self {
        let v = t.v();
        let mut spans = vec![Vec::new(); pair_count(v)];
        for &[a, b, c] in t.triples() {
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                spans[pair_id(v, x, y)].push(z);
            }
        }
        for s in &mut spans {
            s.sort_unstable();
            s.dedup();
        }
        TripleSpans { v, spans }
    }
}

impl LinearSpace for TripleSpans {
    fn num_points(&self) -> usize {
        self.v
    }

    fn span(&self, x: usize, y: usize) -> &[usize] {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        &self.spans[pair_id(self.v, x, y)]
    }
}

pub fn bibd_dimension(t: &TripleSystem, mode: DimensionMode) -> DimensionCertificate {
    dimension(&TripleSpans::new(t), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate_bibd;
    use crate::flats::closure;
    use crate::geometry::projective_space;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn doubling_pg32() {
        let d = projective_space(3, 2).unwrap().into_design();
        let t = expand_to_bibd(&d, 2).unwrap();
        assert_eq!(t.triples().len(), 70);
        assert!(validate_bibd(&t).report.passed);
        assert_eq!(bibd_dimension(&t, DimensionMode::Exact).dimension, 3);
    }

    #[test]
    fn single_blocks() {
        let four = Design::new(4, KSet::new([4]), [vec![0, 1, 2, 3]]).unwrap();
        let t = expand_to_bibd(&four, 2).unwrap();
        assert_eq!(t.triples().len(), 4);
        assert!(validate_bibd(&t).report.passed);
        let five = Design::new(5, KSet::new([5]), [vec![0, 1, 2, 3, 4]]).unwrap();
        let t = expand_to_bibd(&five, 3).unwrap();
        assert_eq!(t.triples().len(), 10);
        assert!(validate_bibd(&t).report.passed);
        let t = expand_to_bibd(&five, 6).unwrap();
        assert_eq!(t.triples().len(), 20);
        assert!(validate_bibd(&t).report.passed);
    }

    #[test]
    fn index_mismatch() {
        let five = Design::new(5, KSet::new([5]), [vec![0, 1, 2, 3, 4]]).unwrap();
        assert!(expand_to_bibd(&five, 2).is_err());
        let four = Design::new(4, KSet::new([4]), [vec![0, 1, 2, 3]]).unwrap();
        assert!(expand_to_bibd(&four, 3).is_err());
        assert!(expand_to_bibd(&four, 4).is_err());
    }

    #[test]
    fn doubled_fano_has_dimension_two() {
        let d = projective_space(2, 2).unwrap().into_design();
        let t = expand_to_bibd(&d, 2).unwrap();
        assert_eq!(bibd_dimension(&t, DimensionMode::Exact).dimension, 2);
    }

    #[test]
    fn expansion_preserves_flats() {
        let d = projective_space(3, 3).unwrap().into_design();
        let t = expand_to_bibd(&d, 6).unwrap();
        let spans = TripleSpans::new(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let size = rng.gen_range(1..5);
            let s: Vec<usize> = (0..size).map(|_| rng.gen_range(0..40)).collect();
            assert_eq!(closure(&d, s.iter().copied()), closure(&spans, s.iter().copied()));
        }
    }
}
