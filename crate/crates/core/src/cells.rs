//! Decorations and the collared cell types shared by every other module.
//!
//! A pentagon carries the decorations `1..=5` on its corners in clockwise
//! order. A collared cell additionally remembers the decorations of the
//! corners of its neighbours. The value `0` is not a decoration: it marks
//! the missing fourth corner at a vertex of degree 3.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A corner decoration in `0..=5`; `0` marks a degree-3 vertex.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(try_from = "u8", into = "u8")]
pub struct Decoration(u8);

impl Decoration {
    pub const ABSENT: Decoration = Decoration(0);

    pub fn new(value: i64) -> Result<Self> {
        if (0..=5).contains(&value) {
            Ok(Decoration(value as u8))
        } else {
            Err(Error::DecorationRange(value))
        }
    }

    /// Reduces any integer to its cyclic representative in `1..=5`.
    pub fn cyclic(value: i64) -> Self {
        Decoration((value - 1).rem_euclid(5) as u8 + 1)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_absent(self) -> bool {
        self.0 == 0
    }

    /// Cyclic shift by `k`. Fails on the degree marker.
    pub fn offset(self, k: i64) -> Result<Self> {
        if self.is_absent() {
            return Err(Error::ZeroArithmetic);
        }
        Ok(Decoration::cyclic(self.0 as i64 + k))
    }

    pub fn succ(self) -> Result<Self> {
        self.offset(1)
    }

    pub fn pred(self) -> Result<Self> {
        self.offset(-1)
    }
}

impl TryFrom<u8> for Decoration {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Decoration::new(v as i64)
    }
}

impl From<Decoration> for u8 {
    fn from(d: Decoration) -> u8 {
        d.0
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All five proper decorations in increasing order.
pub fn all_decorations() -> impl Iterator<Item = Decoration> {
    (1..=5).map(|v| Decoration(v as u8))
}

/// The decorations strictly between `lo` and `hi`, walking upward from `lo`.
///
/// ```
/// use tilespace::cells::{cyclic_open_interval, Decoration};
/// let d = |v| Decoration::new(v).unwrap();
/// let between: Vec<u8> = cyclic_open_interval(d(3), d(1)).unwrap()
///     .into_iter().map(|x| x.value()).collect();
/// assert_eq!(between, vec![4, 5]);
/// ```
pub fn cyclic_open_interval(lo: Decoration, hi: Decoration) -> Result<BTreeSet<Decoration>> {
    if lo.is_absent() || hi.is_absent() {
        return Err(Error::ZeroArithmetic);
    }
    let mut out = BTreeSet::new();
    let mut v = lo.succ()?;
    while v != hi && v != lo {
        out.insert(v);
        v = v.succ()?;
    }
    Ok(out)
}

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident, $prefix:literal) => {
        $(#[$m])*
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub usize);

        impl $name {
            /// Zero-based position in the dataset tables.
            pub fn index(self) -> usize {
                self.0 - 1
            }

            pub fn from_index(i: usize) -> Self {
                $name(i + 1)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// One-based row number of a collared tile.
    TileId,
    "t"
);
id_type!(
    /// One-based row number of a collared edge.
    EdgeId,
    "e"
);
id_type!(
    /// One-based row number of a collared vertex.
    VertexId,
    "v"
);

/// Three exterior decorations attached to one side of a pentagon: the two
/// corners of the neighbour across that side, then the extra corner at the
/// side's end vertex (`0` when that vertex has degree 3).
pub type ExteriorGroup = [Decoration; 3];

/// A collared pentagon in normalized form: interior `(1,2,3,4,5)`, exterior
/// groups listed starting at the corner decorated `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollaredTile {
    exterior: [ExteriorGroup; 5],
}

impl CollaredTile {
    /// Builds a tile from an already normalized exterior.
    pub fn new(exterior: [ExteriorGroup; 5]) -> Result<Self> {
        for (g, group) in exterior.iter().enumerate() {
            if group[0].is_absent() || group[1].is_absent() {
                return Err(Error::MalformedTile(format!(
                    "group {} has an absent neighbour corner",
                    g + 1
                )));
            }
        }
        Ok(CollaredTile { exterior })
    }

    pub fn from_flat(values: &[i64]) -> Result<Self> {
        if values.len() != 15 {
            return Err(Error::MalformedTile(format!(
                "expected 15 exterior decorations, got {}",
                values.len()
            )));
        }
        let mut exterior = [[Decoration::ABSENT; 3]; 5];
        for (i, v) in values.iter().enumerate() {
            exterior[i / 3][i % 3] = Decoration::new(*v)?;
        }
        CollaredTile::new(exterior)
    }

    pub fn exterior(&self) -> &[ExteriorGroup; 5] {
        &self.exterior
    }

    /// Exterior group for side `slot` (1-based, corner `slot` to `slot+1`).
    pub fn group(&self, slot: usize) -> ExteriorGroup {
        self.exterior[(slot + 4) % 5]
    }

    pub fn flat(&self) -> [u8; 15] {
        let mut out = [0; 15];
        for (i, d) in self.exterior.iter().flatten().enumerate() {
            out[i] = d.value();
        }
        out
    }

    /// Degree (3 or 4) of the vertex at corner `corner` (1-based).
    pub fn corner_degree(&self, corner: usize) -> u8 {
        if self.group(corner + 4)[2].is_absent() {
            3
        } else {
            4
        }
    }
}

impl fmt::Display for CollaredTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .exterior
            .iter()
            .map(|g| format!("{},{},{}", g[0], g[1], g[2]))
            .collect();
        write!(f, "({})", groups.join(" | "))
    }
}

/// Rotates the exterior so that it starts at the interior corner decorated 1.
///
/// `interior` must be a cyclic run `(x, x+1, x+2, x+3, x+4)`.
pub fn normalize_tile(
    interior: [Decoration; 5],
    exterior: [ExteriorGroup; 5],
) -> Result<CollaredTile> {
    let start = interior[0];
    for (i, d) in interior.iter().enumerate() {
        if d.is_absent() || *d != start.offset(i as i64)? {
            return Err(Error::MalformedTile(format!(
                "interior {:?} is not a cyclic run",
                interior.map(|d| d.value())
            )));
        }
    }
    let one = interior
        .iter()
        .position(|d| d.value() == 1)
        .expect("a cyclic run contains 1");
    let mut rotated = exterior;
    rotated.rotate_left(one);
    CollaredTile::new(rotated)
}

/// One side of a collared edge: the corners around one endpoint, starting
/// with the corner of the reading pentagon and ending with the corner of the
/// pentagon across the edge.
pub type EdgeSide = [Decoration; 4];

fn check_side(side: &EdgeSide) -> Result<()> {
    if side[0].is_absent() || side[3].is_absent() {
        return Err(Error::MalformedEdge(format!(
            "side {:?} has an absent end corner",
            side.map(|d| d.value())
        )));
    }
    if side[1].is_absent() && side[2].is_absent() {
        return Err(Error::MalformedEdge(format!(
            "side {:?} has two absent corners",
            side.map(|d| d.value())
        )));
    }
    Ok(())
}

/// Moves a degree marker to the second position of a side.
fn normalize_side(mut side: EdgeSide) -> EdgeSide {
    if side[2].is_absent() {
        side.swap(1, 2);
    }
    side
}

/// A collared edge `(a,b,c,d | e,f,g,h)` in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollaredEdge {
    sides: [EdgeSide; 2],
}

impl CollaredEdge {
    pub fn side_a(&self) -> EdgeSide {
        self.sides[0]
    }

    pub fn side_b(&self) -> EdgeSide {
        self.sides[1]
    }

    pub fn flat(&self) -> [u8; 8] {
        let mut out = [0; 8];
        for (i, d) in self.sides.iter().flatten().enumerate() {
            out[i] = d.value();
        }
        out
    }

    /// The vertex at the start of the canonical direction.
    pub fn start_vertex(&self) -> CollaredVertex {
        canonicalize_vertex(self.sides[0]).expect("edge sides are valid vertex cycles")
    }

    pub fn end_vertex(&self) -> CollaredVertex {
        canonicalize_vertex(self.sides[1]).expect("edge sides are valid vertex cycles")
    }
}

impl fmt::Display for CollaredEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.sides.map(|s| s.map(|d| d.to_string()).join(","));
        write!(f, "({a} | {b})")
    }
}

/// An edge read from one side, before canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub start: EdgeSide,
    pub end: EdgeSide,
}

impl OrientedEdge {
    pub fn from_flat(values: &[i64]) -> Result<Self> {
        if values.len() != 8 {
            return Err(Error::MalformedEdge(format!(
                "expected 8 decorations, got {}",
                values.len()
            )));
        }
        let mut start = [Decoration::ABSENT; 4];
        let mut end = [Decoration::ABSENT; 4];
        for i in 0..4 {
            start[i] = Decoration::new(values[i])?;
            end[i] = Decoration::new(values[i + 4])?;
        }
        Ok(OrientedEdge { start, end })
    }

    /// The same edge read from the pentagon on the other side.
    pub fn reversed(&self) -> Self {
        OrientedEdge {
            start: self.end,
            end: self.start,
        }
    }

    /// Canonical form plus `+1` if the reading direction agrees with the
    /// canonical direction, `-1` otherwise.
    pub fn canonical(&self) -> Result<(CollaredEdge, i8)> {
        check_side(&self.start)?;
        check_side(&self.end)?;
        let a = normalize_side(self.start);
        let b = normalize_side(self.end);
        if (a, b) <= (b, a) {
            Ok((CollaredEdge { sides: [a, b] }, 1))
        } else {
            Ok((CollaredEdge { sides: [b, a] }, -1))
        }
    }

    /// True if both readings describe the same edge from opposite sides.
    pub fn mates_with(&self, other: &OrientedEdge) -> bool {
        normalize_side(self.start) == normalize_side(other.end)
            && normalize_side(self.end) == normalize_side(other.start)
    }
}

/// Canonical representative of a raw two-sided edge tuple.
///
/// ```
/// use tilespace::cells::{canonicalize_edge, OrientedEdge};
/// let raw = OrientedEdge::from_flat(&[3, 4, 1, 2, 1, 0, 2, 4]).unwrap();
/// assert_eq!(canonicalize_edge(&raw).unwrap().to_string(), "(1,0,2,4 | 3,4,1,2)");
/// ```
pub fn canonicalize_edge(raw: &OrientedEdge) -> Result<CollaredEdge> {
    raw.canonical().map(|(e, _)| e)
}

/// A collared vertex: the corner decorations around a vertex in cyclic
/// order, with `0` in the second position at degree-3 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollaredVertex([Decoration; 4]);

impl CollaredVertex {
    pub fn decorations(&self) -> [Decoration; 4] {
        self.0
    }

    pub fn degree(&self) -> u8 {
        if self.0[1].is_absent() {
            3
        } else {
            4
        }
    }

    pub fn flat(&self) -> [u8; 4] {
        self.0.map(|d| d.value())
    }
}

impl fmt::Display for CollaredVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.map(|d| d.to_string()).join(","))
    }
}

/// Canonical form of a cyclic 4-tuple of corner decorations: the least
/// rotation, with a degree marker kept in the second position.
pub fn canonicalize_vertex(cycle: [Decoration; 4]) -> Result<CollaredVertex> {
    let present: Vec<Decoration> = cycle.iter().copied().filter(|d| !d.is_absent()).collect();
    let distinct: BTreeSet<_> = present.iter().collect();
    if distinct.len() != present.len() {
        return Err(Error::MalformedVertex(format!(
            "repeated decoration in {:?}",
            cycle.map(|d| d.value())
        )));
    }
    let n = present.len();
    let rotations = (0..n).map(|r| {
        let p = |i: usize| present[(r + i) % n];
        match n {
            4 => Ok([p(0), p(1), p(2), p(3)]),
            3 => Ok([p(0), Decoration::ABSENT, p(1), p(2)]),
            _ => Err(Error::MalformedVertex(format!(
                "{} corners in {:?}",
                n,
                cycle.map(|d| d.value())
            ))),
        }
    });
    let mut best: Option<[Decoration; 4]> = None;
    for rot in rotations {
        let rot = rot?;
        if best.is_none_or(|b| rot < b) {
            best = Some(rot);
        }
    }
    best.map(CollaredVertex).ok_or_else(|| {
        Error::MalformedVertex(format!("no corners in {:?}", cycle.map(|d| d.value())))
    })
}

/// Parses a stored vertex row, which must already be canonical.
pub fn vertex_from_flat(values: &[i64]) -> Result<(CollaredVertex, CollaredVertex)> {
    if values.len() != 4 {
        return Err(Error::MalformedVertex(format!(
            "expected 4 decorations, got {}",
            values.len()
        )));
    }
    let mut raw = [Decoration::ABSENT; 4];
    for (i, v) in values.iter().enumerate() {
        raw[i] = Decoration::new(*v)?;
    }
    if raw[0].is_absent() || raw[2].is_absent() || raw[3].is_absent() {
        return Err(Error::MalformedVertex(format!(
            "only the second position may be 0 in {:?}",
            raw.map(|d| d.value())
        )));
    }
    Ok((CollaredVertex(raw), canonicalize_vertex(raw)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: i64) -> Decoration {
        Decoration::new(v).unwrap()
    }

    fn groups(flat: [i64; 15]) -> [ExteriorGroup; 5] {
        let mut out = [[Decoration::ABSENT; 3]; 5];
        for (i, v) in flat.iter().enumerate() {
            out[i / 3][i % 3] = d(*v);
        }
        out
    }

    fn interval(lo: i64, hi: i64) -> Vec<u8> {
        cyclic_open_interval(d(lo), d(hi))
            .unwrap()
            .into_iter()
            .map(Decoration::value)
            .collect()
    }

    #[test]
    fn decoration_range_and_zero_arithmetic() {
        assert!(Decoration::new(6).is_err());
        assert!(Decoration::new(-1).is_err());
        assert_eq!(d(5).succ().unwrap(), d(1));
        assert_eq!(d(1).pred().unwrap(), d(5));
        assert!(matches!(
            Decoration::ABSENT.succ(),
            Err(Error::ZeroArithmetic)
        ));
    }

    #[test]
    fn normalize_identity_and_rotations() {
        let ext = groups([5, 4, 0, 1, 5, 0, 2, 1, 0, 3, 2, 0, 4, 3, 0]);
        let run = |x: i64| [0, 1, 2, 3, 4].map(|i| Decoration::cyclic(x + i));
        assert_eq!(normalize_tile(run(1), ext).unwrap().exterior(), &ext);

        let [g1, g2, g3, g4, g5] = ext;
        assert_eq!(
            normalize_tile(run(2), ext).unwrap().exterior(),
            &[g5, g1, g2, g3, g4]
        );
        assert_eq!(
            normalize_tile(run(3), ext).unwrap().exterior(),
            &[g4, g5, g1, g2, g3]
        );
    }

    #[test]
    fn normalize_rejects_non_runs() {
        let ext = groups([5, 4, 0, 1, 5, 0, 2, 1, 0, 3, 2, 0, 4, 3, 0]);
        let bad = [d(1), d(3), d(2), d(4), d(5)];
        assert!(matches!(
            normalize_tile(bad, ext),
            Err(Error::MalformedTile(_))
        ));
    }

    #[test]
    fn canonical_edge_examples() {
        let canon = |v: [i64; 8]| {
            canonicalize_edge(&OrientedEdge::from_flat(&v).unwrap())
                .unwrap()
                .to_string()
        };
        assert_eq!(canon([3, 4, 1, 2, 1, 0, 2, 4]), "(1,0,2,4 | 3,4,1,2)");
        assert_eq!(canon([1, 0, 2, 4, 3, 4, 1, 2]), "(1,0,2,4 | 3,4,1,2)");
        assert_eq!(canon([1, 2, 0, 4, 3, 4, 1, 2]), "(1,0,2,4 | 3,4,1,2)");
    }

    #[test]
    fn malformed_edges() {
        assert!(OrientedEdge::from_flat(&[1, 0, 2, 7, 3, 4, 1, 2]).is_err());
        let raw = OrientedEdge::from_flat(&[1, 0, 0, 4, 3, 4, 1, 2]).unwrap();
        assert!(matches!(raw.canonical(), Err(Error::MalformedEdge(_))));
    }

    #[test]
    fn open_intervals() {
        assert_eq!(interval(2, 4), vec![3]);
        assert_eq!(interval(3, 1), vec![4, 5]);
        assert!(interval(1, 2).is_empty());
        assert!(cyclic_open_interval(Decoration::ABSENT, d(2)).is_err());
    }

    #[test]
    fn vertex_canonical_form() {
        let v = canonicalize_vertex([d(3), d(4), d(1), d(2)]).unwrap();
        assert_eq!(v.flat(), [1, 2, 3, 4]);
        let v = canonicalize_vertex([d(4), d(1), Decoration::ABSENT, d(2)]).unwrap();
        assert_eq!(v.flat(), [1, 0, 2, 4]);
        assert_eq!(v.degree(), 3);
        assert_eq!(v.flat().iter().filter(|x| **x != 0).count(), 3);
    }

    fn arb_side() -> impl Strategy<Value = EdgeSide> {
        (1i64..=5, 0i64..=5, 1i64..=5, 1i64..=5, any::<bool>()).prop_map(|(a, b, c, e, flip)| {
            let mut s = [d(a), d(b), d(c), d(e)];
            if flip {
                s.swap(1, 2);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn edge_canonical_form_is_orbit_invariant(a in arb_side(), b in arb_side(),
                                                   swaps in proptest::collection::vec(0u8..3, 0..6)) {
            let raw = OrientedEdge { start: a, end: b };
            let base = canonicalize_edge(&raw).unwrap();
            let mut cur = raw;
            for s in swaps {
                cur = match s {
                    0 => cur.reversed(),
                    1 if cur.start[1].is_absent() || cur.start[2].is_absent() => {
                        let mut c = cur; c.start.swap(1, 2); c
                    }
                    2 if cur.end[1].is_absent() || cur.end[2].is_absent() => {
                        let mut c = cur; c.end.swap(1, 2); c
                    }
                    _ => cur,
                };
            }
            let again = canonicalize_edge(&cur).unwrap();
            prop_assert_eq!(again, base);
            let idem = canonicalize_edge(&OrientedEdge { start: base.side_a(), end: base.side_b() }).unwrap();
            prop_assert_eq!(idem, base);
        }

        #[test]
        fn normalize_is_idempotent(x in 1i64..=5, flat in proptest::array::uniform15(1i64..=5)) {
            let ext = groups(flat);
            let run = [0, 1, 2, 3, 4].map(|i| Decoration::cyclic(x + i));
            let once = normalize_tile(run, ext).unwrap();
            let ident = [1, 2, 3, 4, 5].map(d);
            let twice = normalize_tile(ident, *once.exterior()).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn open_intervals_partition(lo in 1i64..=5, hi in 1i64..=5) {
            prop_assume!(lo != hi);
            let mut all = cyclic_open_interval(d(lo), d(hi)).unwrap();
            let other = cyclic_open_interval(d(hi), d(lo)).unwrap();
            prop_assert!(all.is_disjoint(&other));
            all.extend(other);
            all.insert(d(lo));
            all.insert(d(hi));
            prop_assert_eq!(all.len(), 5);
        }
    }
}
