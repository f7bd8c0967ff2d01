//! The reference tables: 36 collared tiles, 45 collared edges, 10 collared
//! vertices and the 36 collared substitution rules.
//!
//! The tables ship as four CSV files compiled into the library. A directory
//! holding files with the same names can replace them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cells::{
    vertex_from_flat, CollaredEdge, CollaredTile, CollaredVertex, EdgeId, OrientedEdge, TileId,
    VertexId,
};
use crate::error::{Error, Result};

pub const TILE_COUNT: usize = 36;
pub const EDGE_COUNT: usize = 45;
pub const VERTEX_COUNT: usize = 10;
pub const CHILD_COUNT: usize = 6;

pub const TILES_FILE: &str = "tiles.csv";
pub const EDGES_FILE: &str = "edges.csv";
pub const VERTICES_FILE: &str = "vertices.csv";
pub const RULES_FILE: &str = "rules.csv";

const TILES_CSV: &str = include_str!("../data/tiles.csv");
const EDGES_CSV: &str = include_str!("../data/edges.csv");
const VERTICES_CSV: &str = include_str!("../data/vertices.csv");
const RULES_CSV: &str = include_str!("../data/rules.csv");

const TILES_HEADER: &str = "id, f,g,h, i,j,k, l,m,n, o,p,q, r,s,t";
const EDGES_HEADER: &str = "id, a,b,c,d, e,f,g,h";
const VERTICES_HEADER: &str = "id, a,b,c,d";
const RULES_HEADER: &str = "parent, c1,c2,c3,c4,c5,c6";

/// One collared substitution rule. `children[0]` is the central child, the
/// remaining five are the peripheral children in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SubstitutionRule {
    pub parent: TileId,
    pub children: [TileId; CHILD_COUNT],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatasetSource {
    Embedded,
    Dir(PathBuf),
}

#[derive(Clone, Debug)]
pub struct PentagonDataset {
    tiles: Vec<CollaredTile>,
    edges: Vec<CollaredEdge>,
    vertices: Vec<CollaredVertex>,
    rules: Vec<SubstitutionRule>,
    tile_ids: HashMap<CollaredTile, TileId>,
    edge_ids: HashMap<CollaredEdge, EdgeId>,
    vertex_ids: HashMap<CollaredVertex, VertexId>,
}

impl PartialEq for PentagonDataset {
    fn eq(&self, other: &Self) -> bool {
        self.tiles == other.tiles
            && self.edges == other.edges
            && self.vertices == other.vertices
            && self.rules == other.rules
    }
}

impl PentagonDataset {
    /// Assembles a dataset without checking it; see [`validate_dataset`].
    /// Rules are stored in parent order.
    pub fn new(
        tiles: Vec<CollaredTile>,
        edges: Vec<CollaredEdge>,
        vertices: Vec<CollaredVertex>,
        mut rules: Vec<SubstitutionRule>,
    ) -> Self {
        rules.sort_by_key(|r| r.parent);
        let tile_ids = tiles
            .iter()
            .enumerate()
            .map(|(i, t)| (*t, TileId::from_index(i)))
            .collect();
        let edge_ids = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, EdgeId::from_index(i)))
            .collect();
        let vertex_ids = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, VertexId::from_index(i)))
            .collect();
        PentagonDataset {
            tiles,
            edges,
            vertices,
            rules,
            tile_ids,
            edge_ids,
            vertex_ids,
        }
    }

    pub fn embedded() -> Self {
        Self::from_csv(TILES_CSV, EDGES_CSV, VERTICES_CSV, RULES_CSV)
            .expect("embedded dataset is well formed")
    }

    pub fn from_csv(tiles: &str, edges: &str, vertices: &str, rules: &str) -> Result<Self> {
        let tiles = parse_table(TILES_FILE, tiles, TILES_HEADER, |id, v| {
            let _ = id;
            CollaredTile::from_flat(v)
        })?;
        let edges = parse_table(EDGES_FILE, edges, EDGES_HEADER, |id, v| {
            let raw = OrientedEdge::from_flat(v)?;
            let (canon, _) = raw.canonical()?;
            if canon.side_a() != raw.start || canon.side_b() != raw.end {
                return Err(Error::NonCanonical {
                    file: EDGES_FILE.into(),
                    id,
                    canonical: canon.to_string(),
                });
            }
            Ok(canon)
        })?;
        let vertices = parse_table(VERTICES_FILE, vertices, VERTICES_HEADER, |id, v| {
            let (raw, canon) = vertex_from_flat(v)?;
            if raw != canon {
                return Err(Error::NonCanonical {
                    file: VERTICES_FILE.into(),
                    id,
                    canonical: canon.to_string(),
                });
            }
            Ok(canon)
        })?;
        let tile_count = tiles.len();
        let rules = parse_table(RULES_FILE, rules, RULES_HEADER, |parent, v| {
            if v.len() != CHILD_COUNT {
                return Err(Error::Derivation(format!(
                    "rule {parent} has {} children",
                    v.len()
                )));
            }
            let mut children = [TileId(0); CHILD_COUNT];
            for (slot, c) in v.iter().enumerate() {
                if *c < 1 || *c as usize > tile_count {
                    return Err(Error::ChildOutOfRange {
                        parent,
                        child: (*c).max(0) as usize,
                        max: tile_count,
                    });
                }
                children[slot] = TileId(*c as usize);
            }
            Ok(SubstitutionRule {
                parent: TileId(parent),
                children,
            })
        })?;
        if rules.len() != tile_count {
            let present: BTreeSet<usize> = rules.iter().map(|r| r.parent.0).collect();
            let missing: Vec<usize> = (1..=tile_count).filter(|i| !present.contains(i)).collect();
            if !missing.is_empty() {
                return Err(Error::MissingIds {
                    file: RULES_FILE.into(),
                    kind: "rule",
                    ids: missing,
                });
            }
            let extra: Vec<usize> = present
                .iter()
                .copied()
                .filter(|i| *i > tile_count)
                .collect();
            return Err(Error::ChildOutOfRange {
                parent: extra[0],
                child: extra[0],
                max: tile_count,
            });
        }
        Ok(Self::new(tiles, edges, vertices, rules))
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
        };
        Self::from_csv(
            &read(TILES_FILE)?,
            &read(EDGES_FILE)?,
            &read(VERTICES_FILE)?,
            &read(RULES_FILE)?,
        )
    }

    pub fn tiles(&self) -> &[CollaredTile] {
        &self.tiles
    }

    pub fn edges(&self) -> &[CollaredEdge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[CollaredVertex] {
        &self.vertices
    }

    pub fn rules(&self) -> &[SubstitutionRule] {
        &self.rules
    }

    pub fn tile_ids(&self) -> impl Iterator<Item = TileId> {
        (0..self.tiles.len()).map(TileId::from_index)
    }

    pub fn tile(&self, id: TileId) -> &CollaredTile {
        &self.tiles[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &CollaredEdge {
        &self.edges[id.index()]
    }

    pub fn vertex(&self, id: VertexId) -> &CollaredVertex {
        &self.vertices[id.index()]
    }

    pub fn tile_id(&self, t: &CollaredTile) -> Option<TileId> {
        self.tile_ids.get(t).copied()
    }

    pub fn edge_id(&self, e: &CollaredEdge) -> Option<EdgeId> {
        self.edge_ids.get(e).copied()
    }

    pub fn vertex_id(&self, v: &CollaredVertex) -> Option<VertexId> {
        self.vertex_ids.get(v).copied()
    }

    /// The rule whose parent is `t`.
    pub fn rule(&self, t: TileId) -> &SubstitutionRule {
        self.rules
            .iter()
            .find(|r| r.parent == t)
            .expect("every tile has a rule")
    }

    pub fn children(&self, t: TileId) -> [TileId; CHILD_COUNT] {
        self.rule(t).children
    }

    /// Replaces the rule for `parent`; used to inject faults in checks.
    pub fn with_rule(&self, parent: TileId, children: [TileId; CHILD_COUNT]) -> Self {
        let mut rules = self.rules.clone();
        for r in rules.iter_mut().filter(|r| r.parent == parent) {
            r.children = children;
        }
        Self::new(
            self.tiles.clone(),
            self.edges.clone(),
            self.vertices.clone(),
            rules,
        )
    }

    pub fn tiles_csv(&self) -> String {
        let mut out = format!("{TILES_HEADER}\n");
        for (i, t) in self.tiles.iter().enumerate() {
            let groups: Vec<String> = t
                .exterior()
                .iter()
                .map(|g| format!("{},{},{}", g[0], g[1], g[2]))
                .collect();
            out += &format!("{}, {}\n", i + 1, groups.join(", "));
        }
        out
    }

    pub fn edges_csv(&self) -> String {
        let mut out = format!("{EDGES_HEADER}\n");
        for (i, e) in self.edges.iter().enumerate() {
            let [a, b] = [e.side_a(), e.side_b()].map(|s| s.map(|d| d.to_string()).join(","));
            out += &format!("{}, {a}, {b}\n", i + 1);
        }
        out
    }

    pub fn vertices_csv(&self) -> String {
        let mut out = format!("{VERTICES_HEADER}\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out += &format!("{}, {}\n", i + 1, v.flat().map(|d| d.to_string()).join(","));
        }
        out
    }

    pub fn rules_csv(&self) -> String {
        let mut out = format!("{RULES_HEADER}\n");
        for r in &self.rules {
            let kids: Vec<String> = r.children.iter().map(|c| c.0.to_string()).collect();
            out += &format!("{}, {}\n", r.parent.0, kids.join(","));
        }
        out
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.into(),
            source,
        })?;
        for (name, body) in [
            (TILES_FILE, self.tiles_csv()),
            (EDGES_FILE, self.edges_csv()),
            (VERTICES_FILE, self.vertices_csv()),
            (RULES_FILE, self.rules_csv()),
        ] {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|source| Error::Io { path, source })?;
        }
        Ok(())
    }
}

/// Loads the embedded tables or the four files under a directory.
pub fn load_dataset(source: &DatasetSource) -> Result<PentagonDataset> {
    match source {
        DatasetSource::Embedded => Ok(PentagonDataset::embedded()),
        DatasetSource::Dir(dir) => PentagonDataset::from_dir(dir),
    }
}

/// Raw CSV text of the embedded tables, keyed by file name.
pub fn embedded_files() -> [(&'static str, &'static str); 4] {
    [
        (TILES_FILE, TILES_CSV),
        (EDGES_FILE, EDGES_CSV),
        (VERTICES_FILE, VERTICES_CSV),
        (RULES_FILE, RULES_CSV),
    ]
}

pub(crate) fn parse_int_rows(file: &str, text: &str, header: &str) -> Result<Vec<(u64, Vec<i64>)>> {
    let expected_fields = header.split(',').count();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, column: usize, message: String| Error::Parse {
        file: file.to_string(),
        line,
        column,
        message,
    };
    let head = reader
        .headers()
        .map_err(|e| parse_err(1, 1, e.to_string()))?
        .clone();
    if head.len() != expected_fields {
        return Err(parse_err(
            1,
            1,
            format!("header has {} fields, expected `{header}`", head.len()),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, 1, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let values = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .parse::<i64>()
                    .map_err(|e| parse_err(line, col + 1, format!("`{field}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line, values));
    }
    Ok(rows)
}

fn parse_table<T>(
    file: &str,
    text: &str,
    header: &str,
    mut build: impl FnMut(usize, &[i64]) -> Result<T>,
) -> Result<Vec<T>> {
    let rows = parse_int_rows(file, text, header)?;
    let mut by_id: Vec<Option<T>> = Vec::new();
    for (line, values) in rows {
        let id = values[0];
        if id < 1 {
            return Err(Error::Parse {
                file: file.into(),
                line,
                column: 1,
                message: format!("id {id} must be positive"),
            });
        }
        let id = id as usize;
        let item = build(id, &values[1..]).map_err(|e| match e {
            Error::DecorationRange(_)
            | Error::MalformedTile(_)
            | Error::MalformedEdge(_)
            | Error::MalformedVertex(_) => Error::Parse {
                file: file.into(),
                line,
                column: 2,
                message: e.to_string(),
            },
            other => other,
        })?;
        if by_id.len() < id {
            by_id.resize_with(id, || None);
        }
        if by_id[id - 1].is_some() {
            return Err(Error::DuplicateId {
                file: file.into(),
                id,
            });
        }
        by_id[id - 1] = Some(item);
    }
    let missing: Vec<usize> = by_id
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| i + 1)
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingIds {
            file: file.into(),
            kind: "row",
            ids: missing,
        });
    }
    Ok(by_id.into_iter().map(|v| v.expect("checked")).collect())
}

/// One named pass/fail entry of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, claim: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            claim: claim.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{mark} {}: {}", self.name, self.claim)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Structural checks over a dataset. Failures are report entries, not errors.
pub fn validate_dataset(d: &PentagonDataset) -> ValidationReport {
    let mut checks = Vec::new();
    let count = |name: &str, claim: &str, have: usize, want: usize| {
        Check::new(name, claim, have == want, format!("{have} rows"))
    };
    checks.push(count(
        "tile-count",
        "36 collared tiles",
        d.tiles.len(),
        TILE_COUNT,
    ));
    checks.push(count(
        "edge-count",
        "45 collared edges",
        d.edges.len(),
        EDGE_COUNT,
    ));
    checks.push(count(
        "vertex-count",
        "10 collared vertices",
        d.vertices.len(),
        VERTEX_COUNT,
    ));

    let parents: BTreeSet<usize> = d.rules.iter().map(|r| r.parent.0).collect();
    let missing: Vec<usize> = (1..=d.tiles.len())
        .filter(|i| !parents.contains(i))
        .collect();
    checks.push(Check::new(
        "rule-count",
        "one substitution rule per collared tile",
        missing.is_empty() && d.rules.len() == d.tiles.len(),
        if missing.is_empty() {
            format!("{} rules", d.rules.len())
        } else {
            format!("missing rule ids: {missing:?}")
        },
    ));

    let distinct: BTreeSet<&CollaredTile> = d.tiles.iter().collect();
    checks.push(Check::new(
        "distinct-tiles",
        "tile rows are pairwise distinct",
        distinct.len() == d.tiles.len(),
        format!("{} distinct", distinct.len()),
    ));

    let bad_edges: Vec<usize> = d
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            let raw = OrientedEdge {
                start: e.side_a(),
                end: e.side_b(),
            };
            raw.canonical().map(|(c, _)| c != **e).unwrap_or(true)
        })
        .map(|(i, _)| i + 1)
        .collect();
    let bad_vertices: Vec<usize> = d
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            crate::cells::canonicalize_vertex(v.decorations())
                .map(|c| c != **v)
                .unwrap_or(true)
        })
        .map(|(i, _)| i + 1)
        .collect();
    checks.push(Check::new(
        "canonical-forms",
        "edges and vertices stored in canonical form",
        bad_edges.is_empty() && bad_vertices.is_empty(),
        format!("non-canonical edges {bad_edges:?}, vertices {bad_vertices:?}"),
    ));

    let open: Vec<String> = d
        .rules
        .iter()
        .filter(|r| r.children.iter().any(|c| c.0 < 1 || c.0 > d.tiles.len()))
        .map(|r| r.parent.to_string())
        .collect();
    checks.push(Check::new(
        "rule-closure",
        "every child of every rule is a listed collared tile",
        open.is_empty(),
        if open.is_empty() {
            "all children in range".to_string()
        } else {
            format!("rules with unknown children: {}", open.join(", "))
        },
    ));

    let mut first_children: HashMap<TileId, usize> = HashMap::new();
    for r in &d.rules {
        *first_children.entry(r.children[0]).or_default() += 1;
    }
    let central = first_children
        .iter()
        .max_by_key(|(t, n)| (**n, std::cmp::Reverse(**t)))
        .map(|(t, _)| *t);
    let off_center: Vec<String> = d
        .rules
        .iter()
        .filter(|r| Some(r.children[0]) != central)
        .map(|r| r.parent.to_string())
        .collect();
    checks.push(Check::new(
        "central-child",
        "every rule has the same central child t22",
        off_center.is_empty() && central == Some(TileId(22)),
        match central {
            Some(c) if off_center.is_empty() => format!("central child {c}"),
            Some(c) => format!(
                "central child {c} differs in rules {}",
                off_center.join(", ")
            ),
            None => "no rules".to_string(),
        },
    ));

    let covered: BTreeSet<usize> = d
        .rules
        .iter()
        .flat_map(|r| r.children.iter().map(|c| c.0))
        .collect();
    let uncovered: Vec<usize> = (1..=d.tiles.len())
        .filter(|i| !covered.contains(i))
        .collect();
    checks.push(Check::new(
        "child-coverage",
        "every collared tile occurs as a child",
        uncovered.is_empty(),
        if uncovered.is_empty() {
            "all tiles occur".to_string()
        } else {
            format!("never a child: {uncovered:?}")
        },
    ));

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_counts() {
        let d = PentagonDataset::embedded();
        assert_eq!(d.tiles().len(), 36);
        assert_eq!(d.edges().len(), 45);
        assert_eq!(d.vertices().len(), 10);
        assert_eq!(d.rules().len(), 36);
    }

    #[test]
    fn tile_22_row() {
        let d = PentagonDataset::embedded();
        assert_eq!(
            d.tile(TileId(22)).to_string(),
            "(5,4,0 | 1,5,0 | 2,1,0 | 3,2,0 | 4,3,0)"
        );
        assert!(TILES_CSV.contains("\n22, 5,4,0, 1,5,0, 2,1,0, 3,2,0, 4,3,0\n"));
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let d = PentagonDataset::embedded();
        assert_eq!(d.tiles_csv(), TILES_CSV);
        assert_eq!(d.edges_csv(), EDGES_CSV);
        assert_eq!(d.vertices_csv(), VERTICES_CSV);
        assert_eq!(d.rules_csv(), RULES_CSV);
    }

    #[test]
    fn missing_rule_is_reported() {
        let rules: String = RULES_CSV
            .lines()
            .filter(|l| !l.starts_with("36,"))
            .map(|l| format!("{l}\n"))
            .collect();
        let err =
            PentagonDataset::from_csv(TILES_CSV, EDGES_CSV, VERTICES_CSV, &rules).unwrap_err();
        assert_eq!(err.to_string(), "rules.csv: missing rule ids: {36}");
    }

    #[test]
    fn parse_error_has_position() {
        let tiles = TILES_CSV.replacen("\n3, 4,3,0", "\n3, 4,x,0", 1);
        let err =
            PentagonDataset::from_csv(&tiles, EDGES_CSV, VERTICES_CSV, RULES_CSV).unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (4, 3)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duplicate_and_out_of_range() {
        let tiles = format!("{TILES_CSV}1, 4,3,0, 5,4,1, 2,1,0, 2,1,2, 4,3,0\n");
        assert!(matches!(
            PentagonDataset::from_csv(&tiles, EDGES_CSV, VERTICES_CSV, RULES_CSV),
            Err(Error::DuplicateId { id: 1, .. })
        ));
        let rules = RULES_CSV.replacen("1, 22,11,8,14,1,26", "1, 22,11,8,14,1,37", 1);
        assert!(matches!(
            PentagonDataset::from_csv(TILES_CSV, EDGES_CSV, VERTICES_CSV, &rules),
            Err(Error::ChildOutOfRange {
                parent: 1,
                child: 37,
                ..
            })
        ));
    }

    #[test]
    fn non_canonical_edge_row() {
        let edges = EDGES_CSV.replacen("1, 1,0,2,4, 3,4,1,2", "1, 3,4,1,2, 1,0,2,4", 1);
        let err =
            PentagonDataset::from_csv(TILES_CSV, &edges, VERTICES_CSV, RULES_CSV).unwrap_err();
        match err {
            Error::NonCanonical { id, canonical, .. } => {
                assert_eq!(id, 1);
                assert_eq!(canonical, "(1,0,2,4 | 3,4,1,2)");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn canonical_dataset_validates() {
        let report = validate_dataset(&PentagonDataset::embedded());
        for c in &report.checks {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn rule_29_closure() {
        let d = PentagonDataset::embedded();
        assert_eq!(d.children(TileId(29)).map(|c| c.0), [22, 35, 31, 13, 7, 29]);
        assert!(validate_dataset(&d).check("rule-closure").unwrap().passed);
    }

    #[test]
    fn altered_central_child_names_rule() {
        let d = PentagonDataset::embedded();
        let mut kids = d.children(TileId(1));
        kids[0] = TileId(21);
        let report = validate_dataset(&d.with_rule(TileId(1), kids));
        let check = report.check("central-child").unwrap();
        assert!(!check.passed);
        assert!(
            check.detail.ends_with("differs in rules t1"),
            "{}",
            check.detail
        );
    }
}
