//! The bundled prime-knot table and its line-oriented file format.
//!
//! ```text
//! 3_1 | 3 | pd = X(1,5,2,4) X(5,3,6,2) X(3,1,4,6) BASE 1 + | dt = 4 6 2 | tangle = 1 3 / 2 / 2 6 3 5 | chiral = 1
//! mutant = 11n42 V 11n34
//! ```
//!
//! Every record is checked when loaded; see [`load_table`].

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::codes::{extract_dt, parse_dt, DtCode};
use crate::diagram::{is_alternating, parse_pd_unchecked, ArcId, Diagram};
use crate::tangle::{mutate, close_presentation, Compass, RotationKind, Tangle, TanglePresentation};

pub const BUNDLED: &str = include_str!("../data/knots.tbl");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("entry {name}: {message}")]
    Invariant { name: String, message: String },
    #[error("cannot read table {path}: {message}")]
    Io { path: String, message: String },
}

/// Which crossings of the PD form the outer and inner tangle, and the
/// shared boundary arcs in NW, NE, SE, SW order. Crossing ids are 1-based
/// positions in the PD list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleSplit {
    pub outer: Vec<usize>,
    pub inner: Vec<usize>,
    pub boundary: [ArcId; 4],
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub name: String,
    pub crossing_number: usize,
    pub index: u32,
    pub pd: Diagram,
    pub dt: DtCode,
    pub split: TangleSplit,
    pub tangle: TanglePresentation,
    pub chiral: bool,
    pub alternating: bool,
}

/// A recorded mutation: rotating the inner tangle of `source` by
/// `rotation` yields the diagram of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantWitness {
    pub source: String,
    pub rotation: RotationKind,
    pub target: String,
}

#[derive(Clone, Debug)]
pub struct KnotTable {
    entries: Vec<TableEntry>,
    mutants: Vec<MutantWitness>,
}

impl KnotTable {
    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        load_table(BUNDLED).expect("bundled table is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self, TableError> {
        let text = std::fs::read_to_string(path).map_err(|e| TableError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        load_table(&text)
    }

    /// Entries sorted by crossing number, then index.
    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn mutants(&self) -> &[MutantWitness] {
        &self.mutants
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Exact match on the presentation code.
    pub fn lookup_dt(&self, dt: &DtCode) -> Option<&TableEntry> {
        self.entries.iter().find(|e| &e.dt == dt)
    }

    /// Entries whose diagram is a recorded mutant of `name`'s, or of which
    /// `name`'s diagram is a recorded mutant.
    pub fn mutant_partners(&self, name: &str) -> Vec<&str> {
        self.mutants
            .iter()
            .filter_map(|m| {
                if m.source == name {
                    Some(m.target.as_str())
                } else if m.target == name {
                    Some(m.source.as_str())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Serializes to the file format, without comments.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format_entry(e));
            out.push('\n');
        }
        for m in &self.mutants {
            let _ = writeln!(out, "mutant = {} {} {}", m.source, m.rotation, m.target);
        }
        out
    }
}

pub fn format_entry(e: &TableEntry) -> String {
    let ids = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let b = e.split.boundary;
    format!(
        "{} | {} | pd = {} | dt = {} | tangle = {} / {} / {} {} {} {} | chiral = {}",
        e.name,
        e.crossing_number,
        e.pd.to_inline(),
        e.dt,
        ids(&e.split.outer),
        ids(&e.split.inner),
        b[0],
        b[1],
        b[2],
        b[3],
        u8::from(e.chiral)
    )
}

/// Crossing number and index from names like `5_2` or `11n34`.
fn parse_name(name: &str) -> Option<(usize, u32)> {
    let split = name.find(|c: char| !c.is_ascii_digit())?;
    let (n, rest) = name.split_at(split);
    let mut chars = rest.chars();
    let sep = chars.next()?;
    if !matches!(sep, '_' | 'a' | 'n') {
        return None;
    }
    let idx = chars.as_str();
    if idx.is_empty() || !idx.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((n.parse().ok()?, idx.parse().ok()?))
}

fn field<'a>(part: &'a str, key: &str) -> Option<&'a str> {
    let rest = part.trim().strip_prefix(key)?;
    Some(rest.trim_start().strip_prefix('=')?.trim())
}

fn parse_ids(text: &str) -> Result<Vec<usize>, String> {
    text.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad crossing id {t:?}")))
        .collect()
}

fn parse_split(text: &str) -> Result<TangleSplit, String> {
    let parts: Vec<&str> = text.split('/').collect();
    let [outer, inner, boundary] = parts[..] else {
        return Err("tangle needs `outer / inner / NW NE SE SW`".into());
    };
    let b: Vec<ArcId> = boundary
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad arc {t:?}")))
        .collect::<Result<_, _>>()?;
    let boundary: [ArcId; 4] = b
        .try_into()
        .map_err(|_| "tangle boundary needs four arcs".to_string())?;
    Ok(TangleSplit {
        outer: parse_ids(outer)?,
        inner: parse_ids(inner)?,
        boundary,
    })
}

fn build_presentation(pd: &Diagram, split: &TangleSplit) -> Result<TanglePresentation, String> {
    let n = pd.crossing_count();
    let mut used = vec![false; n];
    for &id in split.outer.iter().chain(&split.inner) {
        if id == 0 || id > n || std::mem::replace(&mut used[id - 1], true) {
            return Err(format!("crossing id {id} is out of range or repeated"));
        }
    }
    if used.iter().any(|u| !u) {
        return Err("tangle split does not cover every crossing".into());
    }
    let pick = |ids: &[usize]| ids.iter().map(|&i| pd.crossings()[i - 1]).collect::<Vec<_>>();
    let outer = Tangle::new(pick(&split.outer), split.boundary).map_err(|e| e.to_string())?;
    let inner = Tangle::new(pick(&split.inner), split.boundary).map_err(|e| e.to_string())?;
    TanglePresentation::new(outer, inner, Compass::ALL, pd.basepoint()).map_err(|e| e.to_string())
}

enum RecordError {
    Syntax(String),
    Invariant(String, String),
}

impl From<String> for RecordError {
    fn from(s: String) -> Self {
        RecordError::Syntax(s)
    }
}

impl From<&str> for RecordError {
    fn from(s: &str) -> Self {
        RecordError::Syntax(s.to_string())
    }
}

fn parse_record(line: &str) -> Result<TableEntry, RecordError> {
    let parts: Vec<&str> = line.split('|').collect();
    if parts.len() != 6 {
        return Err(format!("expected 6 `|`-separated fields, found {}", parts.len()).into());
    }
    let name = parts[0].trim().to_string();
    let (crossing_number, index) =
        parse_name(&name).ok_or_else(|| format!("bad knot name {name:?}"))?;
    let declared: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad crossing count {:?}", parts[1].trim()))?;
    let pd_text = field(parts[2], "pd").ok_or("missing `pd =` field")?;
    let dt_text = field(parts[3], "dt").ok_or("missing `dt =` field")?;
    let tangle_text = field(parts[4], "tangle").ok_or("missing `tangle =` field")?;
    let chiral = match field(parts[5], "chiral").ok_or("missing `chiral =` field")? {
        "0" => false,
        "1" => true,
        other => return Err(format!("chiral must be 0 or 1, got {other:?}").into()),
    };
    let pd = parse_pd_unchecked(pd_text)
        .map_err(|e| format!("pd: {e}"))?
        .with_name(&name);
    let dt = parse_dt(dt_text).map_err(|e| format!("dt: {e}"))?;
    let split = parse_split(tangle_text)?;
    let bad = |message: String| RecordError::Invariant(name.clone(), message);
    let report = pd.validate();
    if !report.is_ok() {
        return Err(bad(format!("invalid pd: {report}")));
    }
    if declared != crossing_number || pd.crossing_count() != crossing_number {
        return Err(bad(format!(
            "name says {crossing_number} crossings, record says {declared}, pd has {}",
            pd.crossing_count()
        )));
    }
    let tangle = build_presentation(&pd, &split).map_err(|e| bad(format!("tangle: {e}")))?;
    let alternating = is_alternating(&pd).map_err(|e| bad(e.to_string()))?;
    Ok(TableEntry {
        name,
        crossing_number,
        index,
        pd,
        dt,
        split,
        tangle,
        chiral,
        alternating,
    })
}

fn invariant(name: &str, message: impl Into<String>) -> TableError {
    TableError::Invariant {
        name: name.to_string(),
        message: message.into(),
    }
}

/// Parses and verifies a table: every PD is a valid knot diagram, its code
/// matches the recorded one, the tangle split closes back to the same
/// diagram, names and codes are unique, no code is a proper prefix of
/// another, and every mutant witness holds.
pub fn load_table(text: &str) -> Result<KnotTable, TableError> {
    let mut entries = Vec::new();
    let mut mutants = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(rest) = field(content, "mutant") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let [source, rot, target] = words[..] else {
                return Err(TableError::Parse {
                    line,
                    message: "mutant line needs `source rotation target`".into(),
                });
            };
            let rotation = rot.parse().map_err(|e: crate::tangle::TangleError| TableError::Parse {
                line,
                message: e.to_string(),
            })?;
            mutants.push(MutantWitness {
                source: source.to_string(),
                rotation,
                target: target.to_string(),
            });
            continue;
        }
        match parse_record(content) {
            Ok(entry) => entries.push(entry),
            Err(RecordError::Syntax(message)) => return Err(TableError::Parse { line, message }),
            Err(RecordError::Invariant(name, message)) => return Err(invariant(&name, message)),
        }
    }
    let mut names = HashSet::new();
    let mut codes = HashSet::new();
    for e in &entries {
        if !names.insert(e.name.clone()) {
            return Err(invariant(&e.name, "duplicate name"));
        }
        if !codes.insert(e.dt.clone()) {
            return Err(invariant(&e.name, format!("duplicate dt code {}", e.dt)));
        }
        let dt = extract_dt(&e.pd).map_err(|err| invariant(&e.name, err.to_string()))?;
        if dt != e.dt {
            return Err(invariant(
                &e.name,
                format!("dt {} does not match the pd, which gives {dt}", e.dt),
            ));
        }
        let closed = close_presentation(&e.tangle).map_err(|err| invariant(&e.name, err.to_string()))?;
        if !closed.is_isomorphic(&e.pd) {
            return Err(invariant(&e.name, "tangle does not close to the pd"));
        }
    }
    for a in &entries {
        for b in &entries {
            if a.name != b.name && a.dt.is_prefix_of(&b.dt) {
                return Err(invariant(
                    &b.name,
                    format!("dt starts with the code of {}", a.name),
                ));
            }
        }
    }
    entries.sort_by_key(|e| (e.crossing_number, e.index));
    let table = KnotTable { entries, mutants };
    for m in &table.mutants {
        let (Some(src), Some(dst)) = (table.get(&m.source), table.get(&m.target)) else {
            return Err(invariant(&m.source, "mutant witness names an unknown entry"));
        };
        let d = mutate(&src.tangle, m.rotation).map_err(|e| invariant(&m.source, e.to_string()))?;
        if !d.is_isomorphic(&dst.pd) {
            return Err(invariant(
                &m.source,
                format!("rotation {} does not produce {}", m.rotation, m.target),
            ));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(parse_name("3_1"), Some((3, 1)));
        assert_eq!(parse_name("11n34"), Some((11, 34)));
        assert_eq!(parse_name("19_999"), Some((19, 999)));
        assert_eq!(parse_name("x_1"), None);
        assert_eq!(parse_name("3_"), None);
        assert_eq!(parse_name("3-1"), None);
    }

    #[test]
    fn bundled_loads() {
        let t = KnotTable::bundled();
        assert_eq!(t.len(), 37);
        assert_eq!(t.get("3_1").unwrap().dt.to_string(), "4 6 2");
        assert!(t.get("19_999").is_none());
        assert_eq!(t.mutant_partners("11n42"), vec!["11n34"]);
    }

    #[test]
    fn duplicate_name_is_rejected() {
        let line = BUNDLED.lines().find(|l| l.starts_with("3_1 ")).unwrap();
        let text = format!("{line}\n{line}\n");
        let err = load_table(&text).unwrap_err();
        assert_eq!(
            err,
            TableError::Invariant {
                name: "3_1".into(),
                message: "duplicate name".into()
            }
        );
    }

    #[test]
    fn wrong_dt_is_rejected() {
        let line = BUNDLED.lines().find(|l| l.starts_with("3_1 ")).unwrap();
        let bad = line.replace("dt = 4 6 2", "dt = 6 4 2");
        let err = load_table(&bad).unwrap_err();
        assert!(matches!(err, TableError::Invariant { ref name, .. } if name == "3_1"), "{err}");
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = load_table("# comment\n3_1 | 3 | pd = X(1,5,2,4)\n").unwrap_err();
        assert!(matches!(err, TableError::Parse { line: 2, .. }));
        let err = load_table("mutant = 3_1 Q 3_1\n").unwrap_err();
        assert!(matches!(err, TableError::Parse { line: 1, .. }));
    }
}
