//! Idempotent symmetric latin squares glued along the blocks of a PBD, and
//! the check that every (row, column, symbol) triple sits in a proper
//! subsquare.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::flats::closure;

/// An `n × n` array over the symbols `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<usize>,
}

impl LatinSquare {
    /// Checks shape and symbol range only; use [`is_latin`](Self::is_latin)
    /// for the permutation property.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::arg(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&s) = row.iter().find(|&&s| s >= n) {
                return Err(Error::arg(format!("symbol {s} out of range in row {i}")));
            }
            cells.extend(row);
        }
        Ok(LatinSquare { n, cells })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> usize {
        self.cells[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn is_latin(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            (0..n).all(|j| {
                let a = std::mem::replace(&mut row[self.get(i, j)], true);
                let b = std::mem::replace(&mut col[self.get(j, i)], true);
                !a && !b
            })
        })
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == i)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Whether rows, columns and symbols indexed by `y` form a latin subsquare.
    /// Rows are injective, so closure of `y` under the square suffices.
    pub fn is_subsquare(&self, y: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &p in y {
            member[p] = true;
        }
        y.iter().all(|&r| y.iter().all(|&c| member[self.get(r, c)]))
    }
}

/// The back circulant idempotent symmetric square of odd order `n`:
/// `L[i][j] = (i + j)(n + 1)/2 mod n`.
///
/// For `n = 3` this is `[0 2 1; 2 1 0; 1 0 2]`, the usual 1-based display
/// shifted down by one.
pub fn back_circulant(n: usize) -> Result<LatinSquare> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::arg(format!(
            "idempotent symmetric latin squares need odd order, got {n}"
        )));
    }
    let half = n.div_ceil(2);
    let rows = (0..n).map(|i| (0..n).map(|j| (i + j) * half % n).collect()).collect();
    LatinSquare::from_rows(rows)
}

/// Back circulant ingredients for every block size of `d`.
pub fn back_circulant_ingredients(d: &Design) -> Result<BTreeMap<usize, LatinSquare>> {
    d.effective_k().iter().map(|k| Ok((k, back_circulant(k)?))).collect()
}

/// Glues one ingredient square per block: `L[i][i] = i`, and for `i ≠ j` in
/// block `B = {b_0 < … < b_{k-1}}`, `L[b_a][b_c] = b_{M[a][c]}` with `M` the
/// ingredient of order `k`.
pub fn glue_latin(d: &Design, ingredients: &BTreeMap<usize, LatinSquare>) -> Result<LatinSquare> {
    let n = d.v();
    let mut cells = vec![usize::MAX; n * n];
    for i in 0..n {
        cells[i * n + i] = i;
    }
    for b in d.blocks() {
        let m = ingredients.get(&b.len()).ok_or_else(|| {
            Error::arg(format!("no idempotent symmetric ingredient square of order {}", b.len()))
        })?;
        if !(m.is_latin() && m.is_idempotent()) {
            return Err(Error::arg(format!("ingredient of order {} is not an idempotent latin square", b.len())));
        }
        for (a, &r) in b.iter().enumerate() {
            for (c, &col) in b.iter().enumerate() {
                if a != c {
                    cells[r * n + col] = b[m.get(a, c)];
                }
            }
        }
    }
    if let Some(pos) = cells.iter().position(|&s| s == usize::MAX) {
        return Err(Error::arg(format!(
            "cell ({}, {}) lies in no block; the design does not cover every pair",
            pos / n,
            pos % n
        )));
    }
    Ok(LatinSquare { n, cells })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsquareWitness {
    pub triple: (usize, usize, usize),
    pub points: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct CoverageOptions {
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions { exhaustive: false, samples: 10_000, seed: 0 }
    }
}

/// Orders above this are sampled unless exhaustive checking is requested.
pub const EXHAUSTIVE_LIMIT: usize = 40;

#[derive(Clone, Debug)]
pub struct CoverageReport {
    pub passed: bool,
    pub exhaustive: bool,
    /// Number of (row, column, symbol) triples covered by the check.
    pub triples_checked: usize,
    pub counterexample: Option<(usize, usize, usize)>,
    /// Witnesses for the first few triples checked.
    pub witnesses: Vec<SubsquareWitness>,
}

const WITNESS_SAMPLE: usize = 5;

/// Witness subsquare for one triple: the flat generated by its points, or a
/// block through the point when all three coincide.
pub fn witness(l: &LatinSquare, d: &Design, (r, c, s): (usize, usize, usize)) -> Option<SubsquareWitness> {
    let mut y = closure(d, [r, c, s]).to_vec();
    if y.len() == 1 {
        if let Some(b) = d.blocks_at(r).next() {
            y = b.clone();
        }
    }
    (y.len() < l.order() && l.is_subsquare(&y)).then_some(SubsquareWitness { triple: (r, c, s), points: y })
}

/// Smallest triple `(r, c, s)` whose point set is exactly `set`.
fn first_triple(set: &[usize]) -> (usize, usize, usize) {
    match *set {
        [a] => (a, a, a),
        [a, b] => (a, a, b),
        [a, b, c] => (a, b, c),
        _ => unreachable!(),
    }
}

pub fn subsquare_coverage(l: &LatinSquare, d: &Design, opts: CoverageOptions) -> Result<CoverageReport> {
    let n = l.order();
    if d.v() != n {
        return Err(Error::arg(format!("square of order {n} over a design on {} points", d.v())));
    }
    let exhaustive = opts.exhaustive || n <= EXHAUSTIVE_LIMIT;
    if exhaustive {
        // every triple's point set is a 1-, 2- or 3-subset; check each once
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            sets.push(vec![a]);
            for b in a + 1..n {
                sets.push(vec![a, b]);
                for c in b + 1..n {
                    sets.push(vec![a, b, c]);
                }
            }
        }
        let failures: Vec<(usize, usize, usize)> = sets
            .par_iter()
            .filter_map(|s| {
                let t = first_triple(s);
                witness(l, d, t).is_none().then_some(t)
            })
            .collect();
        let counterexample = failures.into_iter().min();
        let witnesses = (0..WITNESS_SAMPLE.min(n))
            .filter_map(|s| witness(l, d, (0, 1.min(n - 1), s)))
            .collect();
        return Ok(CoverageReport {
            passed: counterexample.is_none(),
            exhaustive,
            triples_checked: n * n * n,
            counterexample,
            witnesses,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let triples: Vec<(usize, usize, usize)> = (0..opts.samples)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let mut cache: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut counterexample = None;
    let mut witnesses = Vec::new();
    for &(r, c, s) in &triples {
        let mut key = vec![r, c, s];
        key.sort_unstable();
        key.dedup();
        let ok = match cache.get(&key) {
            Some(&ok) => ok,
            None => {
                let w = witness(l, d, (r, c, s));
                let ok = w.is_some();
                if let Some(w) = w {
                    if witnesses.len() < WITNESS_SAMPLE {
                        witnesses.push(w);
                    }
                }
                cache.insert(key, ok);
                ok
            }
        };
        if !ok {
            counterexample = Some((r, c, s));
            break;
        }
    }
    Ok(CoverageReport {
        passed: counterexample.is_none(),
        exhaustive: false,
        triples_checked: triples.len(),
        counterexample,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{affine_space, projective_space};

    fn one_based(l: &LatinSquare) -> Vec<Vec<usize>> {
        (0..l.order()).map(|r| l.row(r).iter().map(|s| s + 1).collect()).collect()
    }

    #[test]
    fn back_circulant_small_orders() {
        let l3 = back_circulant(3).unwrap();
        assert_eq!(one_based(&l3), vec![vec![1, 3, 2], vec![3, 2, 1], vec![2, 1, 3]]);
        let l5 = back_circulant(5).unwrap();
        assert_eq!(
            one_based(&l5),
            vec![
                vec![1, 4, 2, 5, 3],
                vec![4, 2, 5, 3, 1],
                vec![2, 5, 3, 1, 4],
                vec![5, 3, 1, 4, 2],
                vec![3, 1, 4, 2, 5],
            ]
        );
        assert_eq!(back_circulant(1).unwrap().row(0), &[0]);
        for n in (1..30).step_by(2) {
            let l = back_circulant(n).unwrap();
            assert!(l.is_latin() && l.is_idempotent() && l.is_symmetric());
        }
        assert!(back_circulant(4).is_err());
        assert!(back_circulant(0).is_err());
    }

    /// Exhaustive search for an idempotent symmetric latin square of order `n`.
    fn exists_idempotent_symmetric(n: usize) -> bool {
        fn fill(n: usize, cells: &mut Vec<usize>, pos: usize) -> bool {
            let (i, j) = (pos / n, pos % n);
            if i == n {
                return true;
            }
            if j <= i {
                return fill(n, cells, pos + 1);
            }
            for s in 0..n {
                let clash = (0..n).any(|t| cells[i * n + t] == s || cells[t * n + j] == s || cells[j * n + t] == s);
                if !clash {
                    cells[i * n + j] = s;
                    cells[j * n + i] = s;
                    if fill(n, cells, pos + 1) {
                        return true;
                    }
                    cells[i * n + j] = usize::MAX;
                    cells[j * n + i] = usize::MAX;
                }
            }
            false
        }
        let mut cells = vec![usize::MAX; n * n];
        for i in 0..n {
            cells[i * n + i] = i;
        }
        fill(n, &mut cells, 0)
    }

    #[test]
    fn no_even_idempotent_symmetric_squares() {
        assert!(!exists_idempotent_symmetric(2));
        assert!(!exists_idempotent_symmetric(4));
        assert!(exists_idempotent_symmetric(3));
        assert!(exists_idempotent_symmetric(5));
    }

    #[test]
    fn glued_fano_square() {
        let d = projective_space(2, 2).unwrap().into_design();
        let l = glue_latin(&d, &back_circulant_ingredients(&d).unwrap()).unwrap();
        assert!(l.is_latin() && l.is_idempotent() && l.is_symmetric());
        for b in d.blocks() {
            assert!(l.is_subsquare(b));
        }
        let rep = subsquare_coverage(&l, &d, CoverageOptions::default()).unwrap();
        assert!(!rep.passed);
        let (r, c, s) = rep.counterexample.unwrap();
        assert!(closure(&d, [r, c, s]).is_full());
    }

    #[test]
    fn single_block_glue_is_the_ingredient() {
        let d = Design::new(5, crate::design::KSet::new([5]), [vec![0, 1, 2, 3, 4]]).unwrap();
        let l = glue_latin(&d, &back_circulant_ingredients(&d).unwrap()).unwrap();
        assert_eq!(l, back_circulant(5).unwrap());
    }

    #[test]
    fn even_blocks_have_no_ingredient() {
        let d = projective_space(2, 3).unwrap().into_design();
        assert!(back_circulant_ingredients(&d).is_err());
        assert!(glue_latin(&d, &BTreeMap::new()).is_err());
    }

    #[test]
    fn ag33_square_is_covered() {
        let d = affine_space(3, 3).unwrap().into_design();
        let l = glue_latin(&d, &back_circulant_ingredients(&d).unwrap()).unwrap();
        assert!(l.is_latin() && l.is_idempotent() && l.is_symmetric());
        let rep = subsquare_coverage(&l, &d, CoverageOptions::default()).unwrap();
        assert!(rep.passed && rep.exhaustive);
        assert_eq!(rep.triples_checked, 27 * 27 * 27);
        let w = witness(&l, &d, (4, 4, 4)).unwrap();
        assert_eq!(w.points.len(), 3);
    }
}
