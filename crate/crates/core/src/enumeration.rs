//! Re-derivation of the 36 collared tiles from the two exterior patterns of
//! a subdivided pentagon.
//!
//! Pattern (2) leaves one free corner, `y5`, constrained to a cyclic open
//! interval or the degree marker `0`. The normalized pattern is embedded as a
//! 20-row table; [`pattern_two_templates`] regenerates the same table from the
//! closed form so the two can be compared.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::cells::{cyclic_open_interval, normalize_tile, CollaredTile, Decoration};
use crate::collaring::corner_vertex;
use crate::dataset::{parse_int_rows, PentagonDataset};
use crate::error::{Error, Result};

const PATTERN_ROWS_CSV: &str = include_str!("../data/patternrows.csv");
const PATTERN_ROWS_HEADER: &str = "rowid, g1a,g1b,g1c, g2a,g2b,g2c, g3a,g3b,g3c, g4a,g4b,g4c, \
                                   g5a,g5b,g5c, lo, hi, allowzero";

/// Decoration sets that never occur around a degree-3 vertex.
pub const FORBIDDEN_DECORATIONS: [[u8; 3]; 5] =
    [[1, 2, 5], [1, 2, 3], [1, 4, 5], [2, 3, 4], [3, 4, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternEntry {
    Fixed(Decoration),
    Free,
}

impl fmt::Display for PatternEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternEntry::Fixed(d) => write!(f, "{d}"),
            PatternEntry::Free => write!(f, "y5"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternRow {
    pub id: usize,
    pub template: [[PatternEntry; 3]; 5],
    pub lo: Decoration,
    pub hi: Decoration,
    pub allow_zero: bool,
}

impl PatternRow {
    /// Group (1-based) holding the free entry.
    pub fn free_group(&self) -> usize {
        self.template
            .iter()
            .position(|g| g.contains(&PatternEntry::Free))
            .expect("row has a free entry")
            + 1
    }

    pub fn instantiate(&self, y5: Decoration) -> Result<CollaredTile> {
        let exterior = self.template.map(|g| {
            g.map(|e| match e {
                PatternEntry::Fixed(d) => d,
                PatternEntry::Free => y5,
            })
        });
        CollaredTile::new(exterior)
    }

    /// Admissible values of the free entry, optionally dropping an excluded 0.
    pub fn y5_values(&self, apply_exclusion: bool) -> Result<Vec<Decoration>> {
        let mut out = Vec::new();
        if self.allow_zero && !(apply_exclusion && exclusion_reason(self)?.is_some()) {
            out.push(Decoration::ABSENT);
        }
        out.extend(cyclic_open_interval(self.lo, self.hi)?);
        Ok(out)
    }

    pub fn candidates(&self, apply_exclusion: bool) -> Result<Vec<Candidate>> {
        self.y5_values(apply_exclusion)?
            .into_iter()
            .map(|y5| {
                Ok(Candidate {
                    row: self.id,
                    y5,
                    tile: self.instantiate(y5)?,
                })
            })
            .collect()
    }
}

impl fmt::Display for PatternRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .template
            .iter()
            .map(|g| format!("{},{},{}", g[0], g[1], g[2]))
            .collect();
        write!(
            f,
            "{:>2}: ({})  {} < y5 < {}",
            self.id,
            groups.join(" | "),
            self.lo,
            self.hi
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub row: usize,
    #[serde(serialize_with = "ser_decoration")]
    pub y5: Decoration,
    #[serde(serialize_with = "ser_tile")]
    pub tile: CollaredTile,
}

fn ser_decoration<S: serde::Serializer>(d: &Decoration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u8(d.value())
}

fn ser_tile<S: serde::Serializer>(t: &CollaredTile, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.flat())
}

/// The embedded 20-row table.
pub fn pattern_rows() -> Vec<PatternRow> {
    parse_pattern_rows(PATTERN_ROWS_CSV).expect("embedded pattern table is well formed")
}

pub fn parse_pattern_rows(text: &str) -> Result<Vec<PatternRow>> {
    let rows = parse_int_rows("patternrows.csv", text, PATTERN_ROWS_HEADER)?;
    rows.into_iter()
        .map(|(line, v)| {
            let mut template = [[PatternEntry::Free; 3]; 5];
            let mut free = 0;
            for i in 0..15 {
                template[i / 3][i % 3] = match v[1 + i] {
                    -1 => {
                        free += 1;
                        PatternEntry::Free
                    }
                    x => PatternEntry::Fixed(Decoration::new(x)?),
                };
            }
            if free != 1 {
                return Err(Error::Parse {
                    file: "patternrows.csv".into(),
                    line,
                    column: 2,
                    message: format!("expected one free entry, found {free}"),
                });
            }
            Ok(PatternRow {
                id: v[0] as usize,
                template,
                lo: Decoration::new(v[16])?,
                hi: Decoration::new(v[17])?,
                allow_zero: v[18] != 0,
            })
        })
        .collect()
}

/// Returns the forbidden degree-3 decoration set the row would produce with
/// `y5 = 0`, if any.
pub fn exclusion_reason(row: &PatternRow) -> Result<Option<[u8; 3]>> {
    let tile = row.instantiate(Decoration::ABSENT)?;
    // The free entry is the third of its group: the extra corner at the
    // group's end vertex.
    let corner = row.free_group() % 5 + 1;
    let v = corner_vertex(&tile, corner)?;
    if v.degree() != 3 {
        return Ok(None);
    }
    let mut set: Vec<u8> = v.flat().into_iter().filter(|x| *x != 0).collect();
    set.sort_unstable();
    let set = [set[0], set[1], set[2]];
    Ok(FORBIDDEN_DECORATIONS.contains(&set).then_some(set))
}

pub fn expand_pattern_row(row: &PatternRow) -> Result<Vec<Candidate>> {
    row.candidates(true)
}

/// Pattern (1): every corner of the subdivided tile has degree 3.
pub fn pattern_one(x: i64) -> Result<CollaredTile> {
    let c = |k: i64| Decoration::cyclic(x + k);
    let z = Decoration::ABSENT;
    let interior = [0, 1, 2, 3, 4].map(c);
    normalize_tile(
        interior,
        [
            [c(4), c(3), z],
            [c(0), c(4), z],
            [c(1), c(0), z],
            [c(2), c(1), z],
            [c(3), c(2), z],
        ],
    )
}

/// Exterior template with the free entry, plus the bounds on the free entry.
pub type PatternTemplate = ([[PatternEntry; 3]; 5], Decoration, Decoration);

/// Normalized pattern (2) for parameters `x`, `a`, `e`, with the free entry
/// marked, and the bounds `x+1+e < y5 < x+3+a`.
pub fn pattern_two_template(x: i64, a: i64, e: i64) -> PatternTemplate {
    let c = |k: i64| Decoration::cyclic(x + k);
    let z = Decoration::ABSENT;
    let raw = [
        [c(3 + a), c(2 + a), c(3 + a)],
        [c(0), c(4), z],
        [c(0), c(4), z],
        [c(1), c(0), c(1 + e)],
        [c(2 + e), c(1 + e), z],
    ];
    let interior = [0, 1, 2, 3, 4].map(c);
    let one = interior.iter().position(|d| d.value() == 1).expect("run");
    let mut template = raw.map(|g| g.map(PatternEntry::Fixed));
    template[4][2] = PatternEntry::Free;
    template.rotate_left(one);
    (template, c(1 + e), c(3 + a))
}

/// All 20 normalized pattern (2) templates, for `x` in `1..=5`, `a, e` in `{0, 1}`.
pub fn pattern_two_templates() -> BTreeSet<PatternTemplate> {
    let mut out = BTreeSet::new();
    for x in 1..=5 {
        for a in 0..=1 {
            for e in 0..=1 {
                out.insert(pattern_two_template(x, a, e));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    /// Pattern (2) candidates after exclusions, in row order.
    pub candidates: Vec<Candidate>,
    #[serde(serialize_with = "ser_tile")]
    pub pattern_one: CollaredTile,
    #[serde(serialize_with = "ser_tiles")]
    pub tiles: BTreeSet<CollaredTile>,
}

fn ser_tiles<S: serde::Serializer>(t: &BTreeSet<CollaredTile>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|t| t.flat()))
}

impl Enumeration {
    /// Compares the derived set with the dataset's tile table.
    pub fn match_dataset(&self, d: &PentagonDataset) -> Result<()> {
        let table: BTreeSet<CollaredTile> = d.tiles().iter().copied().collect();
        let missing: Vec<String> = table
            .difference(&self.tiles)
            .map(|t| t.to_string())
            .collect();
        let extra: Vec<String> = self
            .tiles
            .difference(&table)
            .map(|t| t.to_string())
            .collect();
        if missing.is_empty() && extra.is_empty() {
            Ok(())
        } else {
            Err(Error::EnumerationMismatch { missing, extra })
        }
    }
}

/// Expands both patterns and deduplicates the normalized results.
pub fn enumerate_collared_tiles() -> Result<Enumeration> {
    enumerate_from_rows(&pattern_rows())
}

pub fn enumerate_from_rows(rows: &[PatternRow]) -> Result<Enumeration> {
    let mut candidates = Vec::new();
    for row in rows {
        candidates.extend(expand_pattern_row(row)?);
    }
    let mut tiles: BTreeSet<CollaredTile> = candidates.iter().map(|c| c.tile).collect();
    let ones: BTreeSet<CollaredTile> = (1..=5).map(pattern_one).collect::<Result<_>>()?;
    if ones.len() != 1 {
        return Err(Error::Derivation(format!(
            "pattern (1) normalizes to {} tiles",
            ones.len()
        )));
    }
    let pattern_one = *ones.iter().next().expect("one tile");
    tiles.insert(pattern_one);
    Ok(Enumeration {
        candidates,
        pattern_one,
        tiles,
    })
}
