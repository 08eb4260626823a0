//! Verified ingredient GDDs, found by search and cached on disk.
//!
//! Cache layout: `<dir>/K<k,...>/<type>.gdd` in the design text format, or
//! `<type>.none` holding the node count of an exhausted search. Entries are
//! re-verified whenever they are loaded.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::design::{validate_gdd, Gdd, GroupType, KSet};
use crate::error::{Error, Result};
use crate::format::{gdd_to_string, parse_design};
use crate::search::{find_gdd, SearchOutcome, DEFAULT_NODE_BUDGET};
use crate::wfc::IngredientProvider;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "PBD3_CACHE_DIR";

/// Result of looking up one type.
#[derive(Clone, Debug)]
pub enum Lookup {
    Found(Arc<Gdd>),
    Nonexistent { nodes: u64 },
    BudgetExceeded { nodes: u64 },
}

/// The small GDDs used as ingredients throughout, by block size set.
pub fn standard_types(k: &KSet) -> Vec<GroupType> {
    let list: &[&str] = match k.iter().collect::<Vec<_>>().as_slice() {
        [3] => &["2^3", "3^3", "3^5", "4^3", "2^4", "4^4", "2^1 4^3", "2^3 4^1"],
        [3, 4] => &["3^4", "2^3 3^1", "2^1 3^3", "3^3 4^1", "3^1 4^3", "2^4 3^1"],
        [3, 5] => &["2^5", "3^5", "1^1 3^4", "1^2 3^3", "1^3 3^2", "1^4 3^1", "1^5"],
        _ => &[],
    };
    list.iter().map(|t| t.parse().expect("valid type literal")).collect()
}

pub struct IngredientCatalog {
    k: KSet,
    cache_dir: Option<PathBuf>,
    budget: u64,
    memo: Mutex<HashMap<GroupType, Lookup>>,
}

/// Catalog for `K ⊆ {3,4,5}`, cached under `$PBD3_CACHE_DIR` when set.
pub fn ingredient_catalog(k: &KSet) -> Result<IngredientCatalog> {
    let cat = IngredientCatalog::new(k)?;
    Ok(match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => cat.with_cache_dir(PathBuf::from(dir)),
        _ => cat,
    })
}

impl IngredientCatalog {
    /// In-memory catalog.
    pub fn new(k: &KSet) -> Result<Self> {
        if k.is_empty() || !k.is_subset(&KSet::new([3, 4, 5])) {
            return Err(Error::arg(format!("ingredient block sizes must lie in {{3,4,5}}, got {{{k}}}")));
        }
        Ok(IngredientCatalog {
            k: k.clone(),
            cache_dir: None,
            budget: DEFAULT_NODE_BUDGET,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_cache_dir(mut self, dir: PathBuf) -> Self {
        self.cache_dir = Some(dir);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    fn entry_path(&self, t: &GroupType, ext: &str) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("K{}", self.k)).join(format!("{}.{ext}", t.compact())))
    }

    fn verified(&self, g: Gdd, t: &GroupType) -> Option<Gdd> {
        (g.group_type() == *t && g.k().is_subset(&self.k) && validate_gdd(&g).passed).then_some(g)
    }

    fn load(&self, t: &GroupType) -> Option<Lookup> {
        let gdd_path = self.entry_path(t, "gdd")?;
        if let Ok(text) = std::fs::read_to_string(&gdd_path) {
            let g = parse_design(&text).ok()?.into_gdd();
            return self.verified(g, t).map(|g| Lookup::Found(Arc::new(g)));
        }
        let text = std::fs::read_to_string(self.entry_path(t, "none")?).ok()?;
        let nodes = text.trim().strip_prefix("nodes=")?.parse().ok()?;
        Some(Lookup::Nonexistent { nodes })
    }

    fn store(&self, t: &GroupType, found: &Lookup) -> Result<()> {
        let (path, text) = match found {
            Lookup::Found(g) => (
                self.entry_path(t, "gdd"),
                gdd_to_string(g, &[format!("{{{}}}-GDD of type {}", self.k, t)]),
            ),
            Lookup::Nonexistent { nodes } => (self.entry_path(t, "none"), format!("nodes={nodes}\n")),
            Lookup::BudgetExceeded { .. } => return Ok(()),
        };
        let Some(path) = path else { return Ok(()) };
        let dir = path.parent().expect("entry path has a parent");
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
        tmp.write_all(text.as_bytes()).map_err(|e| Error::io(tmp.path(), e))?;
        tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
        Ok(())
    }

    /// Looks `t` up in memory, then on disk, then by search.
    pub fn lookup(&self, t: &GroupType) -> Result<Lookup> {
        if let Some(hit) = self.memo.lock().unwrap().get(t) {
            return Ok(hit.clone());
        }
        let found = match self.load(t) {
            Some(hit) => hit,
            None => {
                let found = self.search(t)?;
                self.store(t, &found)?;
                found
            }
        };
        self.memo.lock().unwrap().insert(t.clone(), found.clone());
        Ok(found)
    }

    fn search(&self, t: &GroupType) -> Result<Lookup> {
        // a single block needs no search
        if t.parts().all(|(g, _)| g == 1) && self.k.contains(t.num_groups()) {
            let n = t.num_groups();
            let g = Gdd::new(n, (0..n).map(|p| vec![p]), self.k.clone(), [(0..n).collect()])?;
            return Ok(Lookup::Found(Arc::new(g)));
        }
        Ok(match find_gdd(t, &self.k, self.budget)? {
            SearchOutcome::Found(g) => Lookup::Found(Arc::new(g)),
            SearchOutcome::Nonexistent { nodes } => Lookup::Nonexistent { nodes },
            SearchOutcome::BudgetExceeded { nodes } => Lookup::BudgetExceeded { nodes },
        })
    }

    /// Looks up every standard type for this block size set.
    pub fn warm(&self) -> Result<Vec<(GroupType, Lookup)>> {
        standard_types(&self.k)
            .into_iter()
            .map(|t| Ok((t.clone(), self.lookup(&t)?)))
            .collect()
    }
}

impl IngredientProvider for IngredientCatalog {
    fn k(&self) -> &KSet {
        &self.k
    }

    fn ingredient(&self, t: &GroupType) -> Result<Arc<Gdd>> {
        let missing = |reason: String| Error::MissingIngredient {
            group_type: t.to_string(),
            k: self.k.to_string(),
            reason,
        };
        match self.lookup(t)? {
            Lookup::Found(g) => Ok(g),
            Lookup::Nonexistent { nodes } => Err(missing(format!("search exhausted after {nodes} nodes"))),
            Lookup::BudgetExceeded { nodes } => Err(missing(format!("search budget exhausted after {nodes} nodes"))),
        }
    }
}
