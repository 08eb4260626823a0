//! Point-line designs of the finite projective and affine spaces PG_d(q) and
//! AG_d(q).
//!
//! Projective points are normalised homogeneous vectors (first nonzero
//! coordinate 1), affine points are plain coordinate vectors. Both are numbered
//! in lexicographic order of their coordinates, so point ids are stable across
//! runs. Hyperplanes are stored and sorted by their point lists; for `d = 3`
//! they are exactly the planes.

use std::collections::HashMap;
use std::fmt;

use crate::design::{pair_count, pair_id, Block, Design, KSet};
use crate::error::{Error, Result};
use crate::field::FiniteField;

/// Default cap on `v(v-1)/2` for generated geometries.
pub const DEFAULT_PAIR_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    Projective,
    Affine,
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryKind::Projective => "PG",
            GeometryKind::Affine => "AG",
        })
    }
}

/// Point set of a subspace together with its (projective or affine) dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub points: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Geometry {
    kind: GeometryKind,
    d: usize,
    field: FiniteField,
    coords: Vec<Vec<usize>>,
    design: Design,
    hyperplanes: Vec<Subspace>,
}

impl Geometry {
    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn into_design(self) -> Design {
        self.design
    }

    pub fn coords(&self, p: usize) -> &[usize] {
        &self.coords[p]
    }

    pub fn name(&self) -> String {
        format!("{}_{}({})", self.kind, self.d, self.q())
    }

    pub fn hyperplanes(&self) -> &[Subspace] {
        &self.hyperplanes
    }

    /// All planes, in lexicographic order. Stored only for `d ≤ 3`.
    pub fn planes(&self) -> Vec<Subspace> {
        match self.d {
            2 => vec![Subspace { points: (0..self.design.v()).collect(), dim: 2 }],
            3 => self.hyperplanes.clone(),
            _ => Vec::new(),
        }
    }

    /// Lines as dimension-1 subspaces, in canonical block order.
    pub fn lines(&self) -> impl Iterator<Item = Subspace> + '_ {
        self.design.blocks().iter().map(|b| Subspace { points: b.clone(), dim: 1 })
    }

    fn knows(&self, s: &Subspace) -> bool {
        match s.dim {
            1 => self.design.blocks().binary_search(&s.points).is_ok(),
            d if d == self.d => s.points.len() == self.design.v(),
            d if d + 1 == self.d => self.hyperplanes.binary_search(s).is_ok(),
            _ => false,
        }
    }
}

fn vectors(q: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = q.pow(len as u32);
    (0..total).map(move |mut n| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = n % q;
            n /= q;
        }
        v
    })
}

fn is_normalised(v: &[usize]) -> bool {
    v.iter().find(|&&c| c != 0) == Some(&1)
}

fn normalise(f: &FiniteField, v: &[usize]) -> Option<Vec<usize>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = f.inv(lead)?;
    Some(v.iter().map(|&c| f.mul(c, inv)).collect())
}

fn dot(f: &FiniteField, a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn check_budget(v: usize, budget: usize) -> Result<()> {
    let pairs = pair_count(v);
    if pairs > budget {
        return Err(Error::TooLarge { pairs, budget });
    }
    Ok(())
}

/// Builds lines by spanning every not-yet-covered pair.
fn collect_lines(v: usize, mut line_through: impl FnMut(usize, usize) -> Vec<usize>) -> Vec<Block> {
    let mut covered = vec![false; pair_count(v)];
    let mut lines = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            if covered[pair_id(v, i, j)] {
                continue;
            }
            let mut line = line_through(i, j);
            line.sort_unstable();
            line.dedup();
            for (a, &x) in line.iter().enumerate() {
                for &y in &line[a + 1..] {
                    covered[pair_id(v, x, y)] = true;
                }
            }
            lines.push(line);
        }
    }
    lines
}

pub fn projective_space(d: usize, q: usize) -> Result<Geometry> {
    projective_space_with_budget(d, q, DEFAULT_PAIR_BUDGET)
}

pub fn projective_space_with_budget(d: usize, q: usize, budget: usize) -> Result<Geometry> {
    if d < 2 {
        return Err(Error::arg(format!("projective dimension {d} < 2")));
    }
    let field = FiniteField::new(q)?;
    let v = (q.pow(d as u32 + 1) - 1) / (q - 1);
    check_budget(v, budget)?;

    let coords: Vec<Vec<usize>> = vectors(q, d + 1).filter(|x| is_normalised(x)).collect();
    debug_assert_eq!(coords.len(), v);
    let index: HashMap<&[usize], usize> = coords.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();

    let lines = collect_lines(v, |i, j| {
        let mut pts = vec![i, j];
        for a in 0..q {
            for b in 1..q {
                let comb: Vec<usize> = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(&x, &y)| field.add(field.mul(a, x), field.mul(b, y)))
                    .collect();
                if let Some(n) = normalise(&field, &comb) {
                    pts.push(index[n.as_slice()]);
                }
            }
        }
        pts
    });

    let mut hyperplanes: Vec<Subspace> = coords
        .iter()
        .map(|a| Subspace {
            points: (0..v).filter(|&p| dot(&field, a, &coords[p]) == 0).collect(),
            dim: d - 1,
        })
        .collect();
    hyperplanes.sort();

    let design = Design::new(v, KSet::new([q + 1]), lines)?;
    Ok(Geometry {
        kind: GeometryKind::Projective,
        d,
        field,
        coords,
        design,
        hyperplanes,
    })
}

pub fn affine_space(d: usize, q: usize) -> Result<Geometry> {
    affine_space_with_budget(d, q, DEFAULT_PAIR_BUDGET)
}

pub fn affine_space_with_budget(d: usize, q: usize, budget: usize) -> Result<Geometry> {
    if d < 2 {
        return Err(Error::arg(format!("affine dimension {d} < 2")));
    }
    if q < 3 {
        return Err(Error::arg(format!("AG_{d}({q}) has lines of size {q} < 3")));
    }
    let field = FiniteField::new(q)?;
    let v = q.pow(d as u32);
    check_budget(v, budget)?;

    let coords: Vec<Vec<usize>> = vectors(q, d).collect();
    let index: HashMap<&[usize], usize> = coords.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();

    let lines = collect_lines(v, |i, j| {
        let dir: Vec<usize> = coords[j]
            .iter()
            .zip(&coords[i])
            .map(|(&y, &x)| field.add(y, field.neg(x)))
            .collect();
        (0..q)
            .map(|t| {
                let p: Vec<usize> = coords[i]
                    .iter()
                    .zip(&dir)
                    .map(|(&x, &e)| field.add(x, field.mul(t, e)))
                    .collect();
                index[p.as_slice()]
            })
            .collect()
    });

    let mut hyperplanes: Vec<Subspace> = vectors(q, d)
        .filter(|a| is_normalised(a))
        .flat_map(|a| {
            let coords = &coords;
            let field = &field;
            (0..q).map(move |c| Subspace {
                points: (0..v).filter(|&p| dot(field, &a, &coords[p]) == c).collect(),
                dim: d - 1,
            })
        })
        .collect();
    hyperplanes.sort();

    let design = Design::new(v, KSet::new([q]), lines)?;
    Ok(Geometry {
        kind: GeometryKind::Affine,
        d,
        field,
        coords,
        design,
        hyperplanes,
    })
}

/// The lines of the geometry lying wholly inside `s`.
pub fn lines_in_subspace(geometry: &Geometry, s: &Subspace) -> Result<Vec<Block>> {
    if !geometry.knows(s) {
        return Err(Error::arg(format!(
            "subspace of dimension {} with {} points is not in the index of {}",
            s.dim,
            s.points.len(),
            geometry.name()
        )));
    }
    Ok(geometry
        .design
        .blocks()
        .iter()
        .filter(|b| b.iter().all(|p| s.points.binary_search(p).is_ok()))
        .cloned()
        .collect())
}
