//! Which GDD types can arise from deleting a block of a dimension-three PBD.
//!
//! Deleting a block `B` and the flats `⟨B, x⟩` through it leaves a GDD on
//! `v − |B|` points whose groups are the flats minus `B`. Given the possible
//! flat sizes, the candidates are the partitions of `v − |B|` into parts
//! `f − |B|`, cut down by two arguments:
//!
//! * subsystem equality: a flat of size `w` with `v = 2w + 1` forces every
//!   point outside it onto triples only, each meeting the flat once, so every
//!   other flat through `B` has exactly `2|B| + 1` points;
//! * block counts: with fewer groups than `|B|`, every block of size `|B|`
//!   other than `B` lies in one flat, so the design's count of such blocks is
//!   `1 + Σ_F (b(F) − 1)` and must agree with its congruence class.

use std::fmt;

use crate::arith::{block_count_congruence, BlockCountConstraint};
use crate::design::{GroupType, KSet};
use crate::error::{Error, Result};

/// A type removed by a filter, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub group_type: GroupType,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateTypes {
    pub v: usize,
    pub k: KSet,
    pub block_size: usize,
    pub flat_sizes: Vec<usize>,
    /// All partitions of `v − |B|` into parts `f − |B|`.
    pub raw: Vec<GroupType>,
    /// After the subsystem-equality argument.
    pub structural: Vec<GroupType>,
    /// After the block count congruences.
    pub filtered: Vec<GroupType>,
    pub rejections: Vec<Rejection>,
    /// Congruences on the number of blocks of size `|B|` that were applied.
    pub congruences: Vec<BlockCountConstraint>,
    /// Set when a published list for these parameters differs from `structural`.
    pub discrepancy: Option<String>,
}

/// Published candidate lists, as `(v, K, block size, types)`.
const PUBLISHED: &[(usize, &[usize], usize, &[&str])] = &[
    (35, &[3, 5], 5, &["6^5", "6^1 8^3", "6^2 8^1 10^1", "6^3 12^1", "10^3"]),
    (33, &[3, 5], 5, &["6^2 8^2", "6^3 10^1"]),
];

fn published(v: usize, k: &KSet, block_size: usize) -> Option<Vec<GroupType>> {
    PUBLISHED
        .iter()
        .find(|(pv, pk, pb, _)| *pv == v && KSet::new(pk.iter().copied()) == *k && *pb == block_size)
        .map(|(_, _, _, ts)| ts.iter().map(|t| t.parse().expect("valid type literal")).collect())
}

/// Partitions of `total` into the given parts (each usable repeatedly).
fn partitions(total: usize, parts: &[usize]) -> Vec<Vec<usize>> {
    fn go(rest: usize, parts: &[usize], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..parts.len() {
            if parts[i] <= rest {
                cur.push(parts[i]);
                go(rest - parts[i], parts, i, cur, out);
                cur.pop();
            }
        }
    }
    let mut parts: Vec<usize> = parts.to_vec();
    parts.sort_unstable();
    parts.dedup();
    let mut out = Vec::new();
    go(total, &parts, 0, &mut Vec::new(), &mut out);
    out
}

fn residue_for(v: usize, k: &KSet, block_size: usize, modulus: usize) -> Result<Option<usize>> {
    for c in block_count_congruence(v, k)? {
        match c {
            BlockCountConstraint::Congruent { block_size: b, modulus: m, residue } if b == block_size && m == modulus => {
                return Ok(Some(residue));
            }
            BlockCountConstraint::Exact { block_size: b, count } if b == block_size => {
                return Ok(Some(count % modulus));
            }
            BlockCountConstraint::Infeasible { .. } => return Ok(None),
            _ => {}
        }
    }
    Err(Error::arg(format!("no congruence mod {modulus} on blocks of size {block_size} at v={v}")))
}

pub fn candidate_group_types(v: usize, k: &KSet, block_size: usize, flat_sizes: &[usize]) -> Result<CandidateTypes> {
    if !k.contains(block_size) {
        return Err(Error::arg(format!("block size {block_size} not in {{{k}}}")));
    }
    if let Some(&f) = flat_sizes.iter().find(|&&f| f <= block_size || f >= v) {
        return Err(Error::arg(format!("flat size {f} must lie strictly between {block_size} and {v}")));
    }
    if v <= block_size {
        return Err(Error::arg(format!("v={v} leaves no points outside a block of size {block_size}")));
    }
    let group_sizes: Vec<usize> = flat_sizes.iter().map(|f| f - block_size).collect();
    let raw: Vec<GroupType> = {
        let mut ts: Vec<GroupType> = partitions(v - block_size, &group_sizes)
            .into_iter()
            .map(GroupType::from_sizes)
            .collect();
        ts.sort();
        ts
    };
    let mut rejections = Vec::new();

    let small = block_size + 1;
    let structural: Vec<GroupType> = raw
        .iter()
        .filter(|t| {
            let sizes = t.sizes();
            for (i, &g) in sizes.iter().enumerate() {
                if v == 2 * (g + block_size) + 1 {
                    let others_small = sizes.iter().enumerate().all(|(j, &h)| j == i || h == small);
                    if !others_small {
                        rejections.push(Rejection {
                            group_type: (*t).clone(),
                            reason: format!(
                                "a flat of size {} has v = 2w+1, so every other flat through the block has {} points",
                                g + block_size,
                                2 * block_size + 1
                            ),
                        });
                        return false;
                    }
                }
            }
            true
        })
        .cloned()
        .collect();

    let mut congruences = Vec::new();
    for c in block_count_congruence(v, k)? {
        if let BlockCountConstraint::Congruent { block_size: b, .. } = c {
            if b == block_size {
                congruences.push(c);
            }
        }
    }
    let mut filtered = Vec::new();
    'types: for t in &structural {
        if t.num_groups() >= block_size {
            filtered.push(t.clone());
            continue;
        }
        for c in &congruences {
            let BlockCountConstraint::Congruent { modulus, residue, .. } = *c else { unreachable!() };
            let mut predicted = 1i64;
            for g in t.sizes() {
                let f = g + block_size;
                match residue_for(f, k, block_size, modulus)? {
                    Some(r) => predicted += r as i64 - 1,
                    None => {
                        rejections.push(Rejection {
                            group_type: t.clone(),
                            reason: format!("no PBD({f},{{{k}}}) exists by the block count congruences"),
                        });
                        continue 'types;
                    }
                }
            }
            let predicted = predicted.rem_euclid(modulus as i64) as usize;
            if predicted != residue {
                rejections.push(Rejection {
                    group_type: t.clone(),
                    reason: format!(
                        "blocks of size {block_size} number {predicted} mod {modulus}, but must be {residue} mod {modulus}"
                    ),
                });
                continue 'types;
            }
        }
        filtered.push(t.clone());
    }

    let discrepancy = published(v, k, block_size).and_then(|mut list| {
        list.sort();
        (list != structural).then(|| {
            let extra: Vec<String> = structural.iter().filter(|t| !list.contains(t)).map(GroupType::descending).collect();
            let missing: Vec<String> = list.iter().filter(|t| !structural.contains(t)).map(GroupType::descending).collect();
            let mut msg = String::from("published candidate list differs from the enumeration:");
            if !extra.is_empty() {
                msg += &format!(" not listed: {};", extra.join(", "));
            }
            if !missing.is_empty() {
                msg += &format!(" listed but not enumerated: {};", missing.join(", "));
            }
            let removed: Vec<&String> = extra
                .iter()
                .filter(|e| !filtered.iter().any(|t| &t.descending() == *e))
                .collect();
            if !removed.is_empty() && removed.len() == extra.len() {
                msg += " the block count filter removes every unlisted type";
            }
            msg.trim_end_matches(';').to_string()
        })
    });

    Ok(CandidateTypes {
        v,
        k: k.clone(),
        block_size,
        flat_sizes: flat_sizes.to_vec(),
        raw,
        structural,
        filtered,
        rejections,
        congruences,
        discrepancy,
    })
}

fn list(ts: &[GroupType]) -> String {
    let strs: Vec<String> = ts.iter().map(GroupType::descending).collect();
    format!("{{{}}}", strs.join(", "))
}

impl fmt::Display for CandidateTypes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flats: Vec<String> = self.flat_sizes.iter().map(usize::to_string).collect();
        writeln!(
            f,
            "v={} K={{{}}} block size {} flats {{{}}}",
            self.v,
            self.k,
            self.block_size,
            flats.join(",")
        )?;
        writeln!(f, "  enumerated:         {}", list(&self.raw))?;
        writeln!(f, "  subsystem equality: {}", list(&self.structural))?;
        for c in &self.congruences {
            writeln!(f, "  congruence:         {c}")?;
        }
        writeln!(f, "  after congruences:  {}", list(&self.filtered))?;
        for r in &self.rejections {
            writeln!(f, "  rejected {}: {}", r.group_type.descending(), r.reason)?;
        }
        if let Some(d) = &self.discrepancy {
            writeln!(f, "  DISCREPANCY: {d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn types(ts: &[&str]) -> Vec<GroupType> {
        let mut v: Vec<GroupType> = ts.iter().map(|t| t.parse().unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(28, &[6, 8, 10]).len(), 3);
        assert_eq!(partitions(30, &[6, 8, 10, 12]).len(), 7);
        assert!(partitions(7, &[6]).is_empty());
    }

    #[test]
    fn v35() {
        let c = candidate_group_types(35, &KSet::new([3, 5]), 5, &[11, 13, 15, 17]).unwrap();
        assert_eq!(c.raw.len(), 7);
        assert_eq!(c.structural, types(&["6^5", "8^3 6^1", "10^1 8^1 6^2", "12^1 6^3", "10^3"]));
        assert_eq!(c.filtered, types(&["6^5", "8^3 6^1", "12^1 6^3", "10^3"]));
        assert!(c.discrepancy.is_none());
        assert!(c.congruences.contains(&BlockCountConstraint::Congruent { block_size: 5, modulus: 3, residue: 1 }));
    }

    #[test]
    fn v33() {
        let c = candidate_group_types(33, &KSet::new([3, 5]), 5, &[11, 13, 15]).unwrap();
        assert_eq!(c.raw, types(&["6^2 8^2", "6^3 10^1", "8^1 10^2"]));
        assert_eq!(c.structural, c.raw);
        assert!(c.congruences.contains(&BlockCountConstraint::Congruent { block_size: 5, modulus: 3, residue: 0 }));
        assert_eq!(c.filtered, types(&["6^3 10^1"]));
        let d = c.discrepancy.unwrap();
        assert!(d.contains("10^2 8^1"), "{d}");
    }

    #[test]
    fn bad_arguments() {
        let k = KSet::new([3, 5]);
        assert!(candidate_group_types(35, &k, 4, &[11]).is_err());
        assert!(candidate_group_types(35, &k, 5, &[5]).is_err());
        assert!(candidate_group_types(35, &k, 5, &[35]).is_err());
    }
}
