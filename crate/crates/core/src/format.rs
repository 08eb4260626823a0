//! Line-oriented text formats for designs, latin squares and triple systems.
//!
//! ```text
//! # comment
//! PBD v=7 K=3
//! 0 1 2
//! ...
//! ```
//!
//! A GDD file starts `GDD v=<v> K=<k,...>` and lists one `group: i j ...`
//! line per group before its blocks. Named points are written as
//! `label: <id> <name>`. Writers emit canonical order; readers accept blocks
//! in any order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::design::{Block, Design, Gdd, KSet, TripleSystem};
use crate::error::{Error, Result};
use crate::latin::LatinSquare;

/// A design read from a file.
#[derive(Clone, Debug)]
pub enum DesignFile {
    Pbd(Design),
    Gdd(Gdd),
}

impl DesignFile {
    /// The file as a GDD; a PBD becomes a GDD of type `1^v`.
    pub fn into_gdd(self) -> Gdd {
        match self {
            DesignFile::Pbd(d) => Gdd::from_pbd(&d),
            DesignFile::Gdd(g) => g,
        }
    }

    pub fn into_pbd(self) -> Result<Design> {
        match self {
            DesignFile::Pbd(d) => Ok(d),
            DesignFile::Gdd(_) => Err(Error::arg("expected a PBD file, found a GDD")),
        }
    }
}

fn push_comments(out: &mut String, comments: &[String]) {
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
}

fn push_line(out: &mut String, points: &[usize]) {
    let strs: Vec<String> = points.iter().map(usize::to_string).collect();
    out.push_str(&strs.join(" "));
    out.push('\n');
}

pub fn pbd_to_string(d: &Design, comments: &[String]) -> String {
    let mut out = String::new();
    push_comments(&mut out, comments);
    let _ = writeln!(out, "PBD v={} K={}", d.v(), d.k());
    for (p, name) in d.labels() {
        let _ = writeln!(out, "label: {p} {name}");
    }
    for b in d.blocks() {
        push_line(&mut out, b);
    }
    out
}

pub fn gdd_to_string(g: &Gdd, comments: &[String]) -> String {
    let mut out = String::new();
    push_comments(&mut out, comments);
    let _ = writeln!(out, "GDD v={} K={}", g.v(), g.k());
    for group in g.groups() {
        out.push_str("group: ");
        push_line(&mut out, group);
    }
    for b in g.blocks() {
        push_line(&mut out, b);
    }
    out
}

/// Content lines with their 1-based line numbers, comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses `key=value` fields of a header line.
fn header_fields(line: usize, rest: &str, keys: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut fields = BTreeMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected key=value, found {tok:?}")))?;
        if !keys.contains(&k) {
            return Err(parse_err(line, format!("unknown header field {k:?}")));
        }
        fields.insert(k.to_string(), v.to_string());
    }
    for k in keys {
        if !fields.contains_key(*k) {
            return Err(parse_err(line, format!("header is missing {k}=")));
        }
    }
    Ok(fields)
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("expected a nonnegative integer, found {s:?}")))
}

fn parse_points(line: usize, s: &str) -> Result<Block> {
    s.split_whitespace().map(|t| parse_usize(line, t)).collect()
}

fn parse_k(line: usize, s: &str) -> Result<KSet> {
    if s.is_empty() {
        return Ok(KSet::default());
    }
    s.parse().map_err(|e: Error| parse_err(line, e.to_string()))
}

pub fn parse_design(text: &str) -> Result<DesignFile> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (kind, rest) = header.split_once(char::is_whitespace).unwrap_or((header, ""));
    if kind != "PBD" && kind != "GDD" {
        return Err(parse_err(hl, format!("expected PBD or GDD header, found {kind:?}")));
    }
    let fields = header_fields(hl, rest, &["v", "K"])?;
    let v = parse_usize(hl, &fields["v"])?;
    let k = parse_k(hl, &fields["K"])?;
    let mut groups = Vec::new();
    let mut labels = BTreeMap::new();
    let mut blocks = Vec::new();
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("group:") {
            if kind != "GDD" {
                return Err(parse_err(ln, "group line in a PBD file"));
            }
            groups.push(parse_points(ln, rest)?);
        } else if let Some(rest) = l.strip_prefix("label:") {
            let rest = rest.trim();
            let (id, name) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let id = parse_usize(ln, id)?;
            if id >= v {
                return Err(parse_err(ln, format!("label for point {id} out of range")));
            }
            labels.insert(id, name.trim().to_string());
        } else {
            let b = parse_points(ln, l)?;
            blocks.push(b);
        }
    }
    let located = |e: Error| match e {
        Error::Parse { .. } => e,
        other => parse_err(hl, other.to_string()),
    };
    if kind == "PBD" {
        let d = Design::new(v, k, blocks).map_err(located)?;
        Ok(DesignFile::Pbd(d.with_labels(labels)))
    } else {
        Ok(DesignFile::Gdd(Gdd::new(v, groups, k, blocks).map_err(located)?))
    }
}

pub fn read_design(path: &Path) -> Result<DesignFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_design(&text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn latin_to_string(l: &LatinSquare) -> String {
    let mut out = format!("LATIN n={}\n", l.order());
    for r in 0..l.order() {
        push_line(&mut out, l.row(r));
    }
    out
}

pub fn parse_latin(text: &str) -> Result<LatinSquare> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let rest = header
        .strip_prefix("LATIN")
        .ok_or_else(|| parse_err(hl, "expected LATIN header"))?;
    let n = parse_usize(hl, &header_fields(hl, rest, &["n"])?["n"])?;
    let mut rows = Vec::with_capacity(n);
    for (ln, l) in lines {
        let row = parse_points(ln, l)?;
        if row.len() != n {
            return Err(parse_err(ln, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(parse_err(hl, format!("found {} rows, expected {n}", rows.len())));
    }
    LatinSquare::from_rows(rows).map_err(|e| parse_err(hl, e.to_string()))
}

pub fn triple_system_to_string(t: &TripleSystem, comments: &[String]) -> String {
    let mut out = String::new();
    push_comments(&mut out, comments);
    let _ = writeln!(out, "TS v={} lambda={}", t.v(), t.lambda());
    for tr in t.triples() {
        push_line(&mut out, tr);
    }
    out
}

pub fn parse_triple_system(text: &str) -> Result<TripleSystem> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let rest = header
        .strip_prefix("TS")
        .ok_or_else(|| parse_err(hl, "expected TS header"))?;
    let fields = header_fields(hl, rest, &["v", "lambda"])?;
    let v = parse_usize(hl, &fields["v"])?;
    let lambda = parse_usize(hl, &fields["lambda"])?;
    let mut triples = Vec::new();
    for (ln, l) in lines {
        let p = parse_points(ln, l)?;
        if p.len() != 3 {
            return Err(parse_err(ln, format!("expected a triple, found {} points", p.len())));
        }
        triples.push([p[0], p[1], p[2]]);
    }
    TripleSystem::new(v, lambda, triples).map_err(|e| parse_err(hl, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::projective_space;

    #[test]
    fn pbd_round_trip() {
        let d = projective_space(2, 2).unwrap().into_design();
        let text = pbd_to_string(&d, &["Fano plane".into()]);
        assert!(text.starts_with("# Fano plane\nPBD v=7 K=3\n0 1 2\n"));
        let back = parse_design(&text).unwrap().into_pbd().unwrap();
        assert_eq!(back, d);
        assert_eq!(pbd_to_string(&back, &["Fano plane".into()]), text);
    }

    #[test]
    fn readers_accept_any_order() {
        let text = "PBD v=3 K=3\n2 0 1\n";
        let d = parse_design(text).unwrap().into_pbd().unwrap();
        assert_eq!(d.blocks(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn gdd_round_trip_with_labels() {
        let g = Gdd::new(6, [vec![0, 1], vec![2, 3], vec![4, 5]], KSet::new([3]), [vec![0, 2, 4], vec![1, 3, 5], vec![0, 3, 5], vec![1, 2, 4]])
            .unwrap();
        let text = gdd_to_string(&g, &[]);
        assert_eq!(parse_design(&text).unwrap().into_gdd(), g);

        let mut labels = BTreeMap::new();
        labels.insert(2, "∞".to_string());
        let d = Design::new(3, KSet::new([3]), [vec![0, 1, 2]]).unwrap().with_labels(labels);
        let back = parse_design(&pbd_to_string(&d, &[])).unwrap().into_pbd().unwrap();
        assert_eq!(back.label(2), Some("∞"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "# header next\nPBD v=3 K=3\n0 1 x\n";
        assert!(matches!(parse_design(bad), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_design("PBD v=3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_design("STS v=3 K=3\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_design("PBD v=3 K=3\n0 1 5\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_design(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn triple_system_round_trip() {
        let t = TripleSystem::new(3, 2, [[0, 1, 2], [0, 1, 2]]).unwrap();
        let text = triple_system_to_string(&t, &[]);
        assert_eq!(text, "TS v=3 lambda=2\n0 1 2\n0 1 2\n");
        assert_eq!(parse_triple_system(&text).unwrap(), t);
    }

    #[test]
    fn latin_round_trip() {
        let l = LatinSquare::from_rows(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap();
        let text = latin_to_string(&l);
        assert_eq!(text, "LATIN n=3\n0 2 1\n2 1 0\n1 0 2\n");
        assert_eq!(parse_latin(&text).unwrap(), l);
        assert!(parse_latin("LATIN n=2\n0 1\n").is_err());
    }
}
