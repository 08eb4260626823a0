//! Executable catalog of the dimension-three constructions.
//!
//! A recipe names a base (a finite geometry or another recipe), a layout of
//! distinguished subspaces whose regions receive weights, the block sizes of
//! the ingredient GDDs, and how groups are filled. Building runs
//!
//! ```text
//! base → layout choice → weighting → (truncate | WFC → fill) → verify
//! ```
//!
//! Zero weights play the role of truncation, so nondegeneracy is always
//! checked against the untruncated base. A recipe whose weights are all 0 or
//! 1 is carried out by plain truncation.
//!
//! Layout choices are enumerated in a fixed lexicographic order; when one
//! fails verification the next is tried, and the choice used is recorded.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use crate::arith::admissible;
use crate::design::{validate_pbd, Design, Gdd, GroupType, KSet};
use crate::error::{Error, Result};
use crate::fill::{fill_groups, FillMode, Fillers};
use crate::flats::{dimension, nondegenerate, DimensionCertificate, DimensionMode};
use crate::geometry::{affine_space, lines_in_subspace, projective_space, Geometry};
use crate::ingredients::{ingredient_catalog, IngredientCatalog};
use crate::truncate::truncate;
use crate::wfc::{wfc, IngredientProvider, Weighting};

/// Exact dimension is computed for outputs up to this many points.
pub const EXACT_DIMENSION_LIMIT: usize = 90;

/// Layout choices tried before a recipe is declared failed.
pub const MAX_CHOICES: usize = 24;

/// Derived (doubling, tripling) recipes are listed up to this order.
pub const DERIVED_LIMIT: usize = 150;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Pg { d: usize, q: usize },
    Ag { d: usize, q: usize },
    Recipe(String),
}

impl Base {
    fn name(&self) -> String {
        match self {
            Base::Pg { d, q } => format!("PG_{d}({q})"),
            Base::Ag { d, q } => format!("AG_{d}({q})"),
            Base::Recipe(id) => format!("recipe {id}"),
        }
    }
}

/// Distinguished structure on a three-dimensional base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Uniform,
    /// A line; its first `n` points are `Marked`, the rest `Line`.
    Line { n: usize },
    /// A plane `P` and a line `ℓ ⊂ P`: `n` points of `ℓ` are `Marked`, the
    /// rest of `ℓ` is `Line`, and `P \ ℓ` is `Plane`.
    PlaneLine { n: usize },
    /// Two planes meeting in the line `m`: `m` is `Common`, the rest of both
    /// planes `Removed`.
    TwoPlanesCommonLine,
    /// Two planes `P1`, `P2` meeting in `m`: three points of a line of `P1`
    /// off `m` are `Kept`, the four points off `m` of a line of `P2` are
    /// `KeptSecond`, the rest of `P1 ∪ P2` is `Removed`.
    TwoPlanesCollinear,
    /// As above, but `Kept` is a Fano subplane of `P1` meeting `m` in one
    /// point `p`, and `KeptSecond` is the rest of a line of `P2` through `p`.
    TwoPlanesFano,
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Layout::Uniform => f.write_str("no distinguished points"),
            Layout::Line { n } => write!(f, "a line with {n} marked points"),
            Layout::PlaneLine { n } => write!(f, "a plane and a line in it with {n} marked points"),
            Layout::TwoPlanesCommonLine => f.write_str("two planes and their common line"),
            Layout::TwoPlanesCollinear => {
                f.write_str("two planes, 3 collinear points of one and 4 of the other off their common line")
            }
            Layout::TwoPlanesFano => {
                f.write_str("two planes, a Fano subplane of one and a line of the other through a common point")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Marked,
    Line,
    Plane,
    Common,
    Kept,
    KeptSecond,
    Removed,
    Rest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    pub default: u32,
    pub exceptions: Vec<(Region, u32)>,
}

impl WeightSpec {
    fn uniform(w: u32) -> Self {
        WeightSpec { default: w, exceptions: Vec::new() }
    }

    fn with(mut self, r: Region, w: u32) -> Self {
        self.exceptions.push((r, w));
        self
    }

    fn weight(&self, r: Region) -> u32 {
        self.exceptions.iter().find(|(e, _)| *e == r).map_or(self.default, |&(_, w)| w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fill {
    /// The base itself (geometric bases) or a truncation: no WFC.
    None,
    /// Groups become blocks (groups of size 1 vanish).
    Plain,
    /// One new point; each group plus the point becomes a block.
    PlusPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    InScope,
    /// Needs a base design not constructed here.
    ExternalBase { source: String },
}

#[derive(Clone, Debug)]
pub struct Recipe {
    pub id: String,
    pub v: usize,
    pub k: KSet,
    /// Short human description of the construction.
    pub anchor: String,
    pub base: Base,
    pub layout: Layout,
    pub weights: WeightSpec,
    pub ingredient_k: KSet,
    pub fill: Fill,
    pub status: Status,
    pub notes: String,
}

fn k(sizes: &[usize]) -> KSet {
    KSet::new(sizes.iter().copied())
}

fn geometric(id: &str, v: usize, base: Base, anchor: &str) -> Recipe {
    Recipe {
        id: id.into(),
        v,
        k: KSet::default(),
        anchor: anchor.into(),
        base,
        layout: Layout::Uniform,
        weights: WeightSpec::uniform(1),
        ingredient_k: KSet::default(),
        fill: Fill::None,
        status: Status::InScope,
        notes: String::new(),
    }
}

struct Spec {
    v: usize,
    kk: &'static [usize],
    base: Base,
    layout: Layout,
    weights: WeightSpec,
    ing: &'static [usize],
    fill: Fill,
    anchor: &'static str,
}

fn recipe(s: Spec) -> Recipe {
    let kk = k(s.kk);
    let digits: String = kk.iter().map(|x| x.to_string()).collect();
    Recipe {
        id: format!("pbd{}-{}", s.v, digits),
        v: s.v,
        k: kk,
        anchor: s.anchor.into(),
        base: s.base,
        layout: s.layout,
        weights: s.weights,
        ingredient_k: k(s.ing),
        fill: s.fill,
        status: Status::InScope,
        notes: String::new(),
    }
}

const PG33: Base = Base::Pg { d: 3, q: 3 };
const PG34: Base = Base::Pg { d: 3, q: 4 };
const AG34: Base = Base::Ag { d: 3, q: 4 };

fn geometric_bases() -> Vec<Recipe> {
    vec![
        geometric("pg3-2", 15, Base::Pg { d: 3, q: 2 }, "Steiner space PG_3(2)"),
        geometric("ag3-3", 27, Base::Ag { d: 3, q: 3 }, "Steiner space AG_3(3)"),
        geometric("pg4-2", 31, Base::Pg { d: 4, q: 2 }, "Steiner space PG_4(2) (dimension 4)"),
        geometric("pg3-3", 40, PG33, "PG_3(3), blocks of size 4"),
        geometric("ag3-4", 64, AG34, "AG_3(4), blocks of size 4"),
        geometric("pg3-4", 85, PG34, "PG_3(4), blocks of size 5"),
    ]
}

fn constructions() -> Vec<Recipe> {
    use Layout::*;
    use Region::*;
    let w = WeightSpec::uniform;
    let mut out = Vec::new();

    // K = {3,4}, weighted truncations of PG_3(4) and AG_3(4)
    let pg34_two_planes = "K={3,4}: PG_3(4) with two planes truncated to 3 collinear points (or a Fano subplane) and 4 collinear points; weight 3 on the first, 2 elsewhere; add a point";
    let mut r = recipe(Spec {
        v: 114,
        kk: &[3, 4],
        base: PG34,
        layout: TwoPlanesCollinear,
        weights: w(2).with(Kept, 3).with(Removed, 0),
        ing: &[3, 4],
        fill: Fill::PlusPoint,
        anchor: pg34_two_planes,
    });
    r.notes = "the kept points of both planes avoid their common line".into();
    out.push(r);
    let mut r = recipe(Spec {
        v: 126,
        kk: &[3, 4],
        base: PG34,
        layout: TwoPlanesFano,
        weights: w(2).with(Kept, 3).with(Removed, 0),
        ing: &[3, 4],
        fill: Fill::PlusPoint,
        anchor: pg34_two_planes,
    });
    r.notes = "the Fano subplane meets the common line in one point p; the second plane keeps a line through p, whose point p carries weight 3".into();
    out.push(r);
    out.push(recipe(Spec {
        v: 130,
        kk: &[3, 4],
        base: AG34,
        layout: Layout::Line { n: 1 },
        weights: w(2).with(Marked, 3),
        ing: &[3, 4],
        fill: Fill::PlusPoint,
        anchor: "K={3,4}: AG_3(4), weight 2 except one point of weight 3; add a point",
    }));
    out.push(recipe(Spec {
        v: 142,
        kk: &[3, 4],
        base: AG34,
        layout: PlaneLine { n: 3 },
        weights: w(2).with(Line, 3).with(Plane, 3),
        ing: &[3, 4],
        fill: Fill::PlusPoint,
        anchor: "K={3,4}: AG_3(4), weight 3 on a plane except 3 collinear points, 2 elsewhere; add a point",
    }));
    out.push(recipe(Spec {
        v: 124,
        kk: &[3, 4],
        base: Base::Pg { d: 4, q: 2 },
        layout: Uniform,
        weights: w(4),
        ing: &[3],
        fill: Fill::Plain,
        anchor: "K={3,4}: weight 4 on a Steiner space of order 31; groups become blocks",
    }));

    // K = {3,4}, PG_3(3) = AG_3(3) + plane
    for (v, zeros) in [(106, 1), (102, 3), (100, 4)] {
        out.push(recipe(Spec {
            v,
            kk: &[3, 4],
            base: PG33,
            layout: PlaneLine { n: zeros },
            weights: w(3).with(Marked, 0).with(Line, 2).with(Plane, 2),
            ing: &[3, 4],
            fill: Fill::PlusPoint,
            anchor: "K={3,4}: PG_3(3), weight 3 off a plane, 2 on it except 1, 3 or 4 collinear zeros; add a point",
        }));
    }
    out.push(recipe(Spec {
        v: 96,
        kk: &[3, 4],
        base: PG33,
        layout: PlaneLine { n: 3 },
        weights: w(3).with(Marked, 4).with(Plane, 0),
        ing: &[3, 4],
        fill: Fill::Plain,
        anchor: "K={3,4}: PG_3(3) with a plane truncated to a line; weight 3, and 4 on three points of the line; groups become blocks",
    }));
    out.push(recipe(Spec {
        v: 76,
        kk: &[3, 4],
        base: PG33,
        layout: Layout::Line { n: 3 },
        weights: w(2).with(Marked, 0).with(Line, 3),
        ing: &[3, 4],
        fill: Fill::PlusPoint,
        anchor: "K={3,4}: PG_3(3) minus 3 collinear points; weight 3 on the last point of that line, 2 elsewhere; add a point",
    }));
    out.push(recipe(Spec {
        v: 58,
        kk: &[3, 4],
        base: PG33,
        layout: PlaneLine { n: 1 },
        weights: w(2).with(Marked, 3).with(Line, 0).with(Plane, 0),
        ing: &[3, 4],
        fill: Fill::PlusPoint,
        anchor: "K={3,4}: PG_3(3) with a plane truncated to one point of weight 3, weight 2 elsewhere; add a point",
    }));
    for (v, marked) in [(66, 3), (67, 4)] {
        out.push(recipe(Spec {
            v,
            kk: &[3, 4],
            base: PG33,
            layout: PlaneLine { n: marked },
            weights: w(2).with(Marked, 3).with(Plane, 0),
            ing: &[3, 4],
            fill: Fill::PlusPoint,
            anchor: "K={3,4}: PG_3(3) with a plane truncated to 4 collinear points, 3 or 4 of them weight 3, weight 2 elsewhere; add a point",
        }));
    }

    // K = {3,5}
    out.push(recipe(Spec {
        v: 83,
        kk: &[3, 5],
        base: PG33,
        layout: Layout::Line { n: 1 },
        weights: w(2).with(Marked, 4),
        ing: &[3],
        fill: Fill::PlusPoint,
        anchor: "K={3,5}: PG_3(3), one point of weight 4, weight 2 elsewhere; add a point",
    }));
    out.push(recipe(Spec {
        v: 77,
        kk: &[3, 5],
        base: PG33,
        layout: Layout::Line { n: 3 },
        weights: w(2).with(Marked, 0).with(Line, 4),
        ing: &[3],
        fill: Fill::PlusPoint,
        anchor: "K={3,5}: PG_3(3) minus 3 collinear points; weight 4 on the last point of that line, 2 elsewhere; add a point",
    }));
    out.push(recipe(Spec {
        v: 67,
        kk: &[3, 5],
        base: PG33,
        layout: PlaneLine { n: 3 },
        weights: w(2).with(Marked, 4).with(Line, 0).with(Plane, 0),
        ing: &[3],
        fill: Fill::PlusPoint,
        anchor: "K={3,5}: PG_3(3) with a plane truncated to 3 collinear points of weight 4, weight 2 elsewhere; add a point",
    }));
    for (v, marked) in [(65, 1), (69, 3), (71, 4)] {
        out.push(recipe(Spec {
            v,
            kk: &[3, 5],
            base: PG33,
            layout: PlaneLine { n: marked },
            weights: w(2).with(Marked, 4).with(Plane, 0),
            ing: &[3],
            fill: Fill::PlusPoint,
            anchor: "K={3,5}: PG_3(3) with a plane truncated to 4 collinear points, 1, 3 or 4 of them weight 4, weight 2 elsewhere; add a point",
        }));
    }
    for (v, i) in [(89, 2), (95, 5)] {
        out.push(recipe(Spec {
            v,
            kk: &[3, 5],
            base: PG34,
            layout: Layout::Line { n: i },
            weights: w(1).with(Marked, 3),
            ing: &[3, 5],
            fill: Fill::Plain,
            anchor: "K={3,5}: PG_3(4), weight 3 on 2 or 5 points, 1 elsewhere; groups of size 3 become blocks",
        }));
    }
    out.push(recipe(Spec {
        v: 53,
        kk: &[3, 5],
        base: PG34,
        layout: TwoPlanesCommonLine,
        weights: w(1).with(Removed, 0),
        ing: &[],
        fill: Fill::None,
        anchor: "K={3,5}: PG_3(4) with two planes truncated down to their common line",
    }));
    out
}

/// Doubling (K = {3,5}) and tripling (K = {3,4}) of the in-repo bases.
fn derived(bases: &[Recipe]) -> Vec<Recipe> {
    let mut out: Vec<Recipe> = Vec::new();
    let mut taken: Vec<(usize, KSet)> = bases.iter().map(|r| (r.v, r.k.clone())).collect();
    for b in bases {
        let mut add = |v: usize, kk: &'static [usize], weight: u32, ing: &'static [usize], fill: Fill, anchor: &str| {
            let kset = k(kk);
            if v > DERIVED_LIMIT || taken.contains(&(v, kset.clone())) {
                return;
            }
            taken.push((v, kset));
            let mut r = recipe(Spec {
                v,
                kk,
                base: Base::Recipe(b.id.clone()),
                layout: Layout::Uniform,
                weights: WeightSpec::uniform(weight),
                ing,
                fill,
                anchor: "",
            });
            r.anchor = format!("{anchor} {} (order {})", b.id, b.v);
            out.push(r);
        };
        add(2 * b.v + 1, &[3, 5], 2, &[3, 5], Fill::PlusPoint, "K={3,5}: weight 2 with {3,5}-GDDs of types 2^3, 2^4, 2^5 and a point added, on");
        add(3 * b.v, &[3, 4], 3, &[3, 4], Fill::Plain, "K={3,4}: weight 3 with {3,4}-GDDs of types 3^3, 3^4, 3^5, on");
        add(3 * b.v + 1, &[3, 4], 3, &[3, 4], Fill::PlusPoint, "K={3,4}: weight 3 with {3,4}-GDDs of types 3^3, 3^4, 3^5 and a point added, on");
    }
    out
}

fn external() -> Vec<Recipe> {
    let mut out = Vec::new();
    let mut ext = |v: usize, kk: &[usize], source: &str, anchor: &str| {
        let kset = k(kk);
        let digits: String = kset.iter().map(|x| x.to_string()).collect();
        out.push(Recipe {
            id: format!("pbd{v}-{digits}"),
            v,
            k: kset,
            anchor: anchor.into(),
            base: Base::Recipe("external".into()),
            layout: Layout::Uniform,
            weights: WeightSpec::uniform(1),
            ingredient_k: KSet::default(),
            fill: Fill::None,
            status: Status::ExternalBase { source: source.into() },
            notes: String::new(),
        });
    };
    for v in [28, 30, 36, 37, 39, 60, 61, 63] {
        ext(v, &[3, 4], "Dukes-Niezen", "K={3,4}: truncations of projective and affine spaces");
    }
    for v in [48, 51, 52] {
        ext(v, &[3, 4], "Niezen thesis", "K={3,4}: planes truncated from PG_3(4)");
    }
    for v in [29, 59] {
        ext(v, &[3, 5], "Dukes-Niezen", "K={3,5}: weight 2 on a dimension-three PBD(u,{3,4,5})");
    }
    out
}

/// All recipes: geometric bases, constructions, derived and external entries.
pub fn catalog() -> Vec<Recipe> {
    let mut all = geometric_bases();
    all.extend(constructions());
    let in_repo = all.clone();
    all.extend(derived(&in_repo));
    let known: Vec<String> = all.iter().map(|r| r.id.clone()).collect();
    all.extend(external().into_iter().filter(|r| !known.contains(&r.id)));
    all
}

pub fn find(id: &str) -> Result<Recipe> {
    catalog()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownRecipe(id.to_string()))
}

/// Does `r` produce a design whose block sizes lie in `target`? Geometric
/// bases qualify whenever their block sizes do.
pub fn serves(r: &Recipe, target: &KSet) -> bool {
    if r.k.is_empty() {
        base_block_sizes(&r.base).is_subset(target)
    } else {
        r.k == *target
    }
}

/// Block sizes of a geometric base.
pub fn base_block_sizes(b: &Base) -> KSet {
    match *b {
        Base::Pg { q, .. } => KSet::new([q + 1]),
        Base::Ag { q, .. } => KSet::new([q]),
        Base::Recipe(_) => KSet::default(),
    }
}

// ---------------------------------------------------------------------------
// layout resolution

/// One resolution of a layout: a region per base point.
#[derive(Clone, Debug)]
pub struct Choice {
    pub regions: Vec<Region>,
    pub description: String,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn fmt_points(ps: &[usize]) -> String {
    let s: Vec<String> = ps.iter().map(usize::to_string).collect();
    format!("{{{}}}", s.join(","))
}

fn paint(v: usize, parts: &[(Region, &[usize])]) -> Vec<Region> {
    let mut regions = vec![Region::Rest; v];
    for (r, ps) in parts {
        for &p in *ps {
            regions[p] = *r;
        }
    }
    regions
}

/// A Fano subplane of a plane of order 4 generated by the quadrangle
/// `a, b, c, d`: the four points and the three diagonal points.
fn fano_subplane(d: &Design, q: [usize; 4]) -> Option<Vec<usize>> {
    let line = |x: usize, y: usize| d.block_through(x, y).map(<[usize]>::to_vec);
    let meet = |l1: Vec<usize>, l2: Vec<usize>| -> Option<usize> {
        let i = intersect(&l1, &l2);
        (i.len() == 1).then(|| i[0])
    };
    let [a, b, c, e] = q;
    let d1 = meet(line(a, b)?, line(c, e)?)?;
    let d2 = meet(line(a, c)?, line(b, e)?)?;
    let d3 = meet(line(a, e)?, line(b, c)?)?;
    let mut pts = vec![a, b, c, e, d1, d2, d3];
    pts.sort_unstable();
    pts.dedup();
    if pts.len() != 7 {
        return None;
    }
    // every line through two of the points holds exactly three of them
    let ok = pts.iter().enumerate().all(|(i, &x)| {
        pts[i + 1..].iter().all(|&y| {
            let l = d.block_through(x, y).unwrap_or(&[]);
            pts.iter().filter(|p| l.contains(p)).count() == 3
        })
    });
    ok.then_some(pts)
}

fn resolve(layout: Layout, geo: Option<&Geometry>, v: usize) -> Result<Vec<Choice>> {
    let need_geo = || {
        geo.filter(|g| g.dim() == 3)
            .ok_or_else(|| Error::arg(format!("layout {layout:?} needs a three-dimensional geometry as base")))
    };
    let mut out = Vec::new();
    match layout {
        Layout::Uniform => out.push(Choice { regions: vec![Region::Rest; v], description: "uniform".into() }),
        Layout::Line { n } => {
            let g = need_geo()?;
            for l in g.design().blocks().iter().take(MAX_CHOICES) {
                if l.len() < n {
                    continue;
                }
                out.push(Choice {
                    regions: paint(v, &[(Region::Line, &l[n..]), (Region::Marked, &l[..n])]),
                    description: format!("line {}, marked {}", fmt_points(l), fmt_points(&l[..n])),
                });
            }
        }
        Layout::PlaneLine { n } => {
            let g = need_geo()?;
            'planes: for (pi, plane) in g.planes().iter().enumerate() {
                for l in lines_in_subspace(g, plane)? {
                    if out.len() == MAX_CHOICES {
                        break 'planes;
                    }
                    out.push(Choice {
                        regions: paint(
                            v,
                            &[(Region::Plane, &plane.points), (Region::Line, &l[n..]), (Region::Marked, &l[..n])],
                        ),
                        description: format!(
                            "plane #{pi} {}, line {}, marked {}",
                            fmt_points(&plane.points),
                            fmt_points(&l),
                            fmt_points(&l[..n])
                        ),
                    });
                }
            }
        }
        Layout::TwoPlanesCommonLine | Layout::TwoPlanesCollinear | Layout::TwoPlanesFano => {
            let g = need_geo()?;
            let planes = g.planes();
            let p1 = &planes[0];
            'pairs: for (j, p2) in planes.iter().enumerate().skip(1) {
                let m = intersect(&p1.points, &p2.points);
                let both: Vec<usize> = {
                    let mut u = p1.points.clone();
                    u.extend(&p2.points);
                    u.sort_unstable();
                    u.dedup();
                    u
                };
                let head = format!("planes #0 and #{j}, common line {}", fmt_points(&m));
                match layout {
                    Layout::TwoPlanesCommonLine => out.push(Choice {
                        regions: paint(v, &[(Region::Removed, &both), (Region::Common, &m)]),
                        description: head,
                    }),
                    Layout::TwoPlanesCollinear => {
                        let lines1 = lines_in_subspace(g, p1)?;
                        let lines2 = lines_in_subspace(g, p2)?;
                        for l1 in lines1.iter().filter(|l| **l != m) {
                            let off1: Vec<usize> = l1.iter().copied().filter(|p| !m.contains(p)).collect();
                            let kept1 = &off1[..3];
                            for l2 in lines2.iter().filter(|l| **l != m) {
                                if out.len() == MAX_CHOICES {
                                    break 'pairs;
                                }
                                let kept2: Vec<usize> = l2.iter().copied().filter(|p| !m.contains(p)).collect();
                                out.push(Choice {
                                    regions: paint(
                                        v,
                                        &[(Region::Removed, &both), (Region::Kept, kept1), (Region::KeptSecond, &kept2)],
                                    ),
                                    description: format!(
                                        "{head}, kept {} in the first, {} in the second",
                                        fmt_points(kept1),
                                        fmt_points(&kept2)
                                    ),
                                });
                            }
                        }
                    }
                    Layout::TwoPlanesFano => {
                        let d = g.design();
                        let pts = &p1.points;
                        let lines2 = lines_in_subspace(g, p2)?;
                        let collinear = |x: usize, y: usize, z: usize| d.block_through(x, y).is_some_and(|l| l.contains(&z));
                        for (ia, &a) in pts.iter().enumerate() {
                            for (ib, &b) in pts.iter().enumerate().skip(ia + 1) {
                                for (ic, &c) in pts.iter().enumerate().skip(ib + 1) {
                                    if collinear(a, b, c) {
                                        continue;
                                    }
                                    for &e in &pts[ic + 1..] {
                                        if collinear(a, b, e) || collinear(a, c, e) || collinear(b, c, e) {
                                            continue;
                                        }
                                        let Some(fano) = fano_subplane(d, [a, b, c, e]) else { continue };
                                        let on_m = intersect(&fano, &m);
                                        if on_m.len() != 1 {
                                            continue;
                                        }
                                        let p = on_m[0];
                                        for l2 in lines2.iter().filter(|l| **l != m && l.contains(&p)) {
                                            if out.len() == MAX_CHOICES {
                                                break 'pairs;
                                            }
                                            let kept2: Vec<usize> = l2.iter().copied().filter(|&x| x != p).collect();
                                            out.push(Choice {
                                                regions: paint(
                                                    v,
                                                    &[(Region::Removed, &both), (Region::KeptSecond, &kept2), (Region::Kept, &fano)],
                                                ),
                                                description: format!(
                                                    "{head}, Fano subplane {} through {p}, second-plane line {}",
                                                    fmt_points(&fano),
                                                    fmt_points(l2)
                                                ),
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// building

/// A verified recipe output.
#[derive(Clone, Debug)]
pub struct Built {
    pub recipe: Recipe,
    pub design: Design,
    pub certificate: DimensionCertificate,
    /// Exact dimension, when `v` is small enough to compute it by default.
    pub exact_dimension: Option<usize>,
    pub choice: String,
    /// Layout choices that failed before `choice` succeeded.
    pub failed_choices: Vec<String>,
    pub ingredient_types: Vec<GroupType>,
}

impl Built {
    /// Comment lines recording how the design was made.
    pub fn provenance(&self) -> Vec<String> {
        let mut lines = vec![
            format!("recipe {}: PBD({},{{{}}})", self.recipe.id, self.design.v(), self.design.k()),
            self.recipe.anchor.clone(),
            format!("layout: {}", self.choice),
        ];
        if !self.ingredient_types.is_empty() {
            let ts: Vec<String> = self.ingredient_types.iter().map(|t| t.to_string()).collect();
            lines.push(format!("ingredients {{{}}}-GDDs: {}", self.recipe.ingredient_k, ts.join(", ")));
        }
        lines.push(match self.exact_dimension {
            Some(d) => format!("dimension {d}"),
            None => "dimension at least 3".into(),
        });
        lines
    }
}

/// Records which ingredient types a WFC run asked for.
struct Recording<'a> {
    inner: &'a IngredientCatalog,
    seen: Mutex<Vec<GroupType>>,
}

impl IngredientProvider for Recording<'_> {
    fn k(&self) -> &KSet {
        self.inner.k()
    }

    fn ingredient(&self, t: &GroupType) -> Result<Arc<Gdd>> {
        let mut seen = self.seen.lock().unwrap();
        if !seen.contains(t) {
            seen.push(t.clone());
        }
        drop(seen);
        self.inner.ingredient(t)
    }
}

/// Shared state for building recipes: ingredient catalogs and finished builds.
pub struct Builder {
    cache_dir: Option<PathBuf>,
    exact_dimension: bool,
    catalogs: Mutex<HashMap<KSet, Arc<IngredientCatalog>>>,
    built: Mutex<HashMap<String, Arc<Built>>>,
}

impl Default for Builder {
    fn default() -> Self {
        Self::new()
    }
}

impl Builder {
    /// Builder whose ingredient cache follows `$PBD3_CACHE_DIR`.
    pub fn new() -> Self {
        Builder {
            cache_dir: None,
            exact_dimension: false,
            catalogs: Mutex::new(HashMap::new()),
            built: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.cache_dir = dir;
        self
    }

    /// Computes the exact dimension of every output, not only small ones.
    pub fn with_exact_dimension(mut self, on: bool) -> Self {
        self.exact_dimension = on;
        self
    }

    pub fn catalog(&self, k: &KSet) -> Result<Arc<IngredientCatalog>> {
        let mut cats = self.catalogs.lock().unwrap();
        if let Some(c) = cats.get(k) {
            return Ok(c.clone());
        }
        let c = match &self.cache_dir {
            Some(dir) => IngredientCatalog::new(k)?.with_cache_dir(dir.clone()),
            None => ingredient_catalog(k)?,
        };
        let c = Arc::new(c);
        cats.insert(k.clone(), c.clone());
        Ok(c)
    }

    pub fn build(&self, id: &str) -> Result<Arc<Built>> {
        if let Some(b) = self.built.lock().unwrap().get(id) {
            return Ok(b.clone());
        }
        let r = find(id)?;
        let built = Arc::new(self.run(&r)?);
        self.built.lock().unwrap().insert(id.to_string(), built.clone());
        Ok(built)
    }

    fn run(&self, r: &Recipe) -> Result<Built> {
        if let Status::ExternalBase { source } = &r.status {
            return Err(Error::NotBuildable { recipe: r.id.clone(), reason: format!("base design from {source}") });
        }
        let fail = |stage: &str, detail: String| Error::Pipeline {
            recipe: r.id.clone(),
            stage: stage.into(),
            detail,
        };
        let (geo, master): (Option<Geometry>, Design) = match &r.base {
            Base::Pg { d, q } => {
                let g = projective_space(*d, *q).map_err(|e| fail("base", e.to_string()))?;
                let m = g.design().clone();
                (Some(g), m)
            }
            Base::Ag { d, q } => {
                let g = affine_space(*d, *q).map_err(|e| fail("base", e.to_string()))?;
                let m = g.design().clone();
                (Some(g), m)
            }
            Base::Recipe(id) => {
                let b = self.build(id).map_err(|e| fail("base", e.to_string()))?;
                (None, b.design.clone())
            }
        };
        let choices = resolve(r.layout, geo.as_ref(), master.v()).map_err(|e| fail("layout", e.to_string()))?;
        if choices.is_empty() {
            return Err(fail("layout", "no subspace of the required kind".into()));
        }
        let mut failures: Vec<String> = Vec::new();
        let mut first_error = None;
        for choice in choices {
            match self.attempt(r, &master, &choice) {
                Ok(mut built) => {
                    built.failed_choices = failures;
                    return Ok(built);
                }
                Err(e) => {
                    failures.push(format!("{}: {e}", choice.description));
                    first_error.get_or_insert(e);
                }
            }
        }
        Err(first_error.expect("at least one choice was tried"))
    }

    fn attempt(&self, r: &Recipe, master: &Design, choice: &Choice) -> Result<Built> {
        let fail = |stage: &str, detail: String| Error::Pipeline {
            recipe: r.id.clone(),
            stage: stage.into(),
            detail,
        };
        let w = Weighting::new(choice.regions.iter().map(|&reg| r.weights.weight(reg)).collect());
        if !nondegenerate(master, &w) {
            return Err(fail("weighting", "positive-weight points lie in a proper flat".into()));
        }
        let mut ingredient_types = Vec::new();
        let unit = w.as_slice().iter().all(|&x| x <= 1);
        let design = if r.fill == Fill::None || unit {
            let zeros: Vec<usize> = (0..master.v()).filter(|&p| w.weight(p) == 0).collect();
            truncate(master, &zeros).map_err(|e| fail("truncate", e.to_string()))?
        } else {
            let cat = self.catalog(&r.ingredient_k).map_err(|e| fail("ingredients", e.to_string()))?;
            let rec = Recording { inner: &cat, seen: Mutex::new(Vec::new()) };
            let gdd = wfc(&Gdd::from_pbd(master), &w, &rec).map_err(|e| fail("wfc", e.to_string()))?;
            ingredient_types = rec.seen.into_inner().unwrap();
            ingredient_types.sort();
            let mode = if r.fill == Fill::PlusPoint { FillMode::PlusPoint } else { FillMode::Plain };
            fill_groups(&gdd, mode, &Fillers::single_blocks()).map_err(|e| fail("fill", e.to_string()))?
        };
        let target_k = if r.k.is_empty() { design.effective_k() } else { r.k.clone() };
        let design = design.with_k(target_k.clone());
        if design.v() != r.v {
            return Err(fail("verify", format!("built {} points, expected {}", design.v(), r.v)));
        }
        let report = validate_pbd(&design);
        if !report.passed {
            return Err(fail("verify", report.message));
        }
        if !admissible(design.v(), &target_k) {
            return Err(fail("verify", "output violates the admissibility congruences".into()));
        }
        let certificate = dimension(&design, DimensionMode::AtLeast(3));
        if !certificate.passed {
            return Err(fail(
                "dimension",
                format!("points {:?} generate the whole design", certificate.counterexample.clone().unwrap_or_default()),
            ));
        }
        let exact_dimension = (self.exact_dimension || design.v() <= EXACT_DIMENSION_LIMIT)
            .then(|| dimension(&design, DimensionMode::Exact).dimension);
        Ok(Built {
            recipe: r.clone(),
            design,
            certificate,
            exact_dimension,
            choice: choice.description.clone(),
            failed_choices: Vec::new(),
            ingredient_types,
        })
    }
}

/// Multi-line rendering of a recipe's pipeline.
pub fn describe(id: &str) -> Result<String> {
    let r = find(id)?;
    let mut out = String::new();
    let k_text = if r.k.is_empty() { base_block_sizes(&r.base).to_string() } else { r.k.to_string() };
    let _ = writeln!(out, "{}: PBD({},{{{}}}) of dimension three", r.id, r.v, k_text);
    let _ = writeln!(out, "  {}", r.anchor);
    if let Status::ExternalBase { source } = &r.status {
        let _ = writeln!(out, "  status: external base ({source}); not buildable here");
        return Ok(out);
    }
    let mut step = 0;
    let mut line = |text: String| {
        step += 1;
        let _ = writeln!(out, "  {step}. {text}");
    };
    line(format!("base: {}", r.base.name()));
    if r.layout != Layout::Uniform {
        line(format!("select: {} (first in lexicographic order that verifies)", r.layout));
    }
    let mut ws = vec![format!("default {}", r.weights.default)];
    ws.extend(r.weights.exceptions.iter().map(|(reg, w)| format!("{reg:?} {w}")));
    let zeros = r.weights.default == 0 || r.weights.exceptions.iter().any(|&(_, w)| w == 0);
    let unit = r.weights.default <= 1 && r.weights.exceptions.iter().all(|&(_, w)| w <= 1);
    if r.fill == Fill::None || unit {
        if zeros {
            line(format!("truncate: points of weight 0 ({})", ws.join(", ")));
        }
    } else {
        line(format!("weight: {}", ws.join(", ")));
        line(format!("wfc: ingredient {{{}}}-GDDs of each block's weight type", r.ingredient_k));
        line(match r.fill {
            Fill::PlusPoint => "fill: add a point; each group plus the point becomes a block".into(),
            _ => "fill: groups become blocks".into(),
        });
    }
    line(format!("verify: PBD axioms on {} points, block sizes, admissibility", r.v));
    line("certify: every 3 points lie in a proper flat (dimension at least 3)".into());
    if !r.notes.is_empty() {
        let _ = writeln!(out, "  note: {}", r.notes);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let all = catalog();
        let mut ids: Vec<&str> = all.iter().map(|r| r.id.as_str()).collect();
        ids.sort_unstable();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn describe_renders_steps() {
        let d = describe("pbd53-35").unwrap();
        assert_eq!(d.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 5);
        assert!(describe("pbd124-34").unwrap().contains("Steiner space of order 31"));
        assert!(matches!(describe("nope"), Err(Error::UnknownRecipe(_))));
    }

    #[test]
    fn fano_subplanes_of_pg24() {
        let g = projective_space(2, 4).unwrap();
        let d = g.design();
        let quad = {
            let pts: Vec<usize> = (0..21).collect();
            let mut found = None;
            'outer: for &a in &pts {
                for &b in &pts[a + 1..] {
                    for &c in &pts[b + 1..] {
                        if d.block_through(a, b).unwrap().contains(&c) {
                            continue;
                        }
                        for &e in &pts[c + 1..] {
                            let col = |x: usize, y: usize, z: usize| d.block_through(x, y).unwrap().contains(&z);
                            if !col(a, b, e) && !col(a, c, e) && !col(b, c, e) {
                                found = Some([a, b, c, e]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            found.unwrap()
        };
        let fano = fano_subplane(d, quad).unwrap();
        // every line of the plane meets the subplane in 1 or 3 points
        for l in d.blocks() {
            let n = l.iter().filter(|p| fano.contains(p)).count();
            assert!(n == 1 || n == 3);
        }
    }

    #[test]
    fn small_builds() {
        let b = Builder::new();
        let pg = b.build("pg3-2").unwrap();
        assert_eq!(pg.design.v(), 15);
        assert_eq!(pg.exact_dimension, Some(3));
        let t = b.build("pbd46-34").unwrap();
        assert_eq!(t.design.v(), 46);
        assert_eq!(t.design.k(), &KSet::new([3, 4]));
        assert!(matches!(b.build("pbd48-34"), Err(Error::NotBuildable { .. })));
    }
}
