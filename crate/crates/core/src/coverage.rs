//! Which orders of dimension-three PBD(v, K) are claimed, and which of them
//! the recipe catalog actually builds, for K = {3,4} and K = {3,5}.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::arith::admissible;
use crate::design::KSet;
use crate::error::{Error, Result};
use crate::recipes::{catalog, serves, Builder, Recipe, Status};

/// Largest order tabulated by default.
pub const DEFAULT_MAX_V: usize = 150;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Exists,
    Open,
    Nonexistent,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Exists => "exists",
            Claim::Open => "open",
            Claim::Nonexistent => "nonexistent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverageStatus {
    /// Built and verified here.
    Constructed { recipe: String, exact_dimension: Option<usize> },
    /// Existence rests on a design not built here.
    External { source: String },
    /// An in-scope recipe exists but failed.
    Failed { recipe: String, error: String },
    /// Nonexistence or an open case: nothing to build.
    NotApplicable { source: String },
    /// Claimed to exist but nothing in the catalog covers it.
    Missing,
}

impl CoverageStatus {
    fn label(&self) -> &'static str {
        match self {
            CoverageStatus::Constructed { .. } => "constructed",
            CoverageStatus::External { .. } => "external",
            CoverageStatus::Failed { .. } => "failed",
            CoverageStatus::NotApplicable { .. } => "n/a",
            CoverageStatus::Missing => "missing",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageRow {
    pub v: usize,
    pub claim: Claim,
    pub status: CoverageStatus,
}

impl CoverageRow {
    pub fn recipe_id(&self) -> Option<&str> {
        match &self.status {
            CoverageStatus::Constructed { recipe, .. } | CoverageStatus::Failed { recipe, .. } => Some(recipe),
            _ => None,
        }
    }

    pub fn dimension_checked(&self) -> bool {
        matches!(self.status, CoverageStatus::Constructed { .. })
    }

    /// One-line human description.
    pub fn describe(&self, k: &KSet) -> String {
        let head = format!("v={} K={{{k}}}", self.v);
        match (&self.claim, &self.status) {
            (_, CoverageStatus::Constructed { recipe, exact_dimension }) => match exact_dimension {
                Some(d) => format!("{head}: constructed by {recipe}, dimension {d} verified"),
                None => format!("{head}: constructed by {recipe}, dim≥3 verified"),
            },
            (Claim::Nonexistent, CoverageStatus::NotApplicable { source }) => {
                format!("{head}: nonexistent ({source}; not machine-verified)")
            }
            (Claim::Open, _) => format!("{head}: open"),
            (_, CoverageStatus::External { source }) => format!("{head}: exists, external ({source})"),
            (_, CoverageStatus::Failed { recipe, error }) => format!("{head}: FAILED {recipe}: {error}"),
            (_, CoverageStatus::NotApplicable { source }) => format!("{head}: {} ({source})", self.claim),
            (_, CoverageStatus::Missing) => format!("{head}: claimed to exist, not covered"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoverageTable {
    pub k: KSet,
    pub rows: Vec<CoverageRow>,
}

const OPEN_34: &[usize] = &[33, 34, 42, 43, 54, 69, 70, 72, 78];
const OPEN_35: &[usize] = &[35, 37, 41, 43, 47, 51];
const TRIPLED_34: &[usize] = &[
    45, 46, 81, 82, 84, 85, 87, 88, 90, 91, 93, 94, 108, 109, 111, 112, 117, 118, 120, 121, 132, 133, 135, 136, 138,
    139,
];
const DN_34: &[usize] = &[28, 30, 31, 36, 37, 39, 40, 60, 61, 63, 64];
const NIEZEN_34: &[usize] = &[48, 51, 52];

fn supported(k: &KSet) -> Result<bool> {
    if *k == KSet::new([3, 4]) {
        Ok(true)
    } else if *k == KSet::new([3, 5]) {
        Ok(false)
    } else {
        Err(Error::arg(format!("coverage is tabulated for K = {{3,4}} and {{3,5}}, not {{{k}}}")))
    }
}

/// The claimed existence status of a dimension-three PBD(v, K).
pub fn claim(v: usize, k: &KSet) -> Result<Claim> {
    let is34 = supported(k)?;
    let open = if is34 { OPEN_34 } else { OPEN_35 };
    Ok(if v != 15 && v < 27 || !is34 && v == 33 {
        Claim::Nonexistent
    } else if open.contains(&v) {
        Claim::Open
    } else {
        Claim::Exists
    })
}

fn steiner_space(v: usize) -> bool {
    matches!(v % 6, 1 | 3) && ([15, 27, 31, 39].contains(&v) || v >= 45 && ![51, 67, 69, 145].contains(&v))
}

/// Where existence comes from when nothing here builds it.
fn external_source(v: usize, k: &KSet) -> Result<Option<&'static str>> {
    let is34 = supported(k)?;
    Ok(if steiner_space(v) {
        Some("Steiner space of order v")
    } else if is34 && DN_34.contains(&v) {
        Some("truncated projective and affine spaces of Dukes and Niezen")
    } else if is34 && NIEZEN_34.contains(&v) {
        Some("planes truncated from PG_3(4), Niezen")
    } else if is34 && (TRIPLED_34.contains(&v) || v >= 144) {
        Some("weight 3 on a dimension-three PBD(u,{3,4,5}) of Dukes and Niezen")
    } else if !is34 && (v == 29 || v == 59 || v >= 97) {
        Some("weight 2 on a dimension-three PBD(u,{3,4,5}) of Dukes and Niezen")
    } else {
        None
    })
}

fn nonexistence_source(v: usize, k: &KSet) -> &'static str {
    if v == 33 && *k == KSet::new([3, 5]) {
        "published proof by flat counting"
    } else {
        "published proof for block sizes in {3,4,5}"
    }
}

/// Admissible orders up to `max_v`, for a tabulated K.
pub fn admissible_orders(k: &KSet, max_v: usize) -> Result<Vec<usize>> {
    supported(k)?;
    Ok((7..=max_v).filter(|&v| admissible(v, k)).collect())
}

/// In-scope recipes producing designs for `k`, with at most `max_v` points.
pub fn recipes_for(k: &KSet, max_v: usize) -> Vec<Recipe> {
    catalog()
        .into_iter()
        .filter(|r| r.status == Status::InScope && r.v <= max_v && serves(r, k))
        .collect()
}

/// Builds every in-scope recipe for `k` and tabulates the result. A failing
/// recipe is recorded in its row.
pub fn build_all(builder: &Builder, k: &KSet, max_v: usize) -> Result<CoverageTable> {
    let orders = admissible_orders(k, max_v)?;
    let recipes = recipes_for(k, max_v);
    let outcomes: Vec<(Recipe, std::result::Result<Option<usize>, String>)> = recipes
        .into_par_iter()
        .map(|r| {
            let out = builder.build(&r.id).map(|b| b.exact_dimension).map_err(|e| e.to_string());
            (r, out)
        })
        .collect();
    let mut rows = Vec::new();
    for v in orders {
        let claim = claim(v, k)?;
        let mut at_v = outcomes.iter().filter(|(r, _)| r.v == v);
        let built = at_v.clone().find(|(_, o)| o.is_ok());
        let status = if let Some((r, Ok(d))) = built {
            CoverageStatus::Constructed { recipe: r.id.clone(), exact_dimension: *d }
        } else if let Some((r, Err(e))) = at_v.next() {
            CoverageStatus::Failed { recipe: r.id.clone(), error: e.clone() }
        } else if claim == Claim::Nonexistent {
            CoverageStatus::NotApplicable { source: nonexistence_source(v, k).into() }
        } else if claim == Claim::Open {
            CoverageStatus::NotApplicable { source: "no construction known".into() }
        } else if let Some(src) = external_source(v, k)? {
            CoverageStatus::External { source: src.into() }
        } else {
            CoverageStatus::Missing
        };
        rows.push(CoverageRow { v, claim, status });
    }
    Ok(CoverageTable { k: k.clone(), rows })
}

impl CoverageTable {
    pub fn row(&self, v: usize) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.v == v)
    }

    /// TSV with columns v, K, claim, status, recipe-id, dimension-checked.
    pub fn to_tsv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str(TSV_HEADER);
        }
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{{{}}}\t{}\t{}\t{}\t{}",
                r.v,
                self.k,
                r.claim,
                r.status.label(),
                r.recipe_id().unwrap_or("-"),
                if r.dimension_checked() { "yes" } else { "no" }
            );
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &CoverageRow> {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, CoverageStatus::Failed { .. } | CoverageStatus::Missing))
    }
}

pub const TSV_HEADER: &str = "v\tK\tclaim\tstatus\trecipe-id\tdimension-checked\n";
