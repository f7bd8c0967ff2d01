//! Collared edges and vertices read off collared tiles, and the incidence
//! structure between the three kinds of collared cells.
//!
//! Side `k` of a normalized tile runs clockwise from corner `k` to corner
//! `k+1`. Its exterior group lists the corner of the neighbour across side
//! `k` at corner `k`, then at corner `k+1`, then the extra corner at corner
//! `k+1` (absent at degree 3). Reading side `k` gives the oriented edge
//!
//! ```text
//! (k, g[k-1][1], g[k-1][2], g[k][0] | g[k][1], g[k][2], g[k+1][0], k+1)
//! ```
//!
//! whose two halves are the cyclic corner sequences around the two
//! endpoints. [`search_slot_mappings`] re-derives this convention from the
//! edge and vertex tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cells::{
    canonicalize_vertex, CollaredEdge, CollaredTile, CollaredVertex, Decoration, EdgeId, EdgeSide,
    OrientedEdge, TileId, VertexId,
};
use crate::dataset::PentagonDataset;
use crate::error::{Error, Result};

/// A side of a specific tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeSlot {
    pub tile: TileId,
    pub slot: usize,
}

/// Index convention for reading an oriented edge from a tile side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SlotMapping {
    /// Side `k` uses exterior group `k + group_shift` (cyclically).
    pub group_shift: usize,
    /// Group positions holding the neighbour corner at the side's start, at
    /// its end, and the extra corner.
    pub entry_order: [usize; 3],
    /// Whether the extra corner of a group sits at the side's end vertex.
    pub extra_at_end: bool,
}

/// The convention under which the tile table reproduces the edge and vertex
/// tables.
pub const FROZEN_MAPPING: SlotMapping = SlotMapping {
    group_shift: 0,
    entry_order: [0, 1, 2],
    extra_at_end: true,
};

impl SlotMapping {
    pub fn all() -> Vec<SlotMapping> {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::new();
        for group_shift in 0..5 {
            for entry_order in perms {
                for extra_at_end in [false, true] {
                    out.push(SlotMapping {
                        group_shift,
                        entry_order,
                        extra_at_end,
                    });
                }
            }
        }
        out.sort();
        out
    }

    fn group(&self, t: &CollaredTile, slot: usize) -> [Decoration; 3] {
        let g = t.exterior()[(slot + 4 + self.group_shift) % 5];
        self.entry_order.map(|i| g[i])
    }

    /// Reads side `slot` (1..=5) of `t` as an oriented edge.
    pub fn read(&self, t: &CollaredTile, slot: usize) -> Result<OrientedEdge> {
        if !(1..=5).contains(&slot) {
            return Err(Error::MalformedEdge(format!(
                "slot {slot} out of range 1..=5"
            )));
        }
        let prev = self.group(t, (slot + 3) % 5 + 1);
        let cur = self.group(t, slot);
        let next = self.group(t, slot % 5 + 1);
        let p = Decoration::cyclic(slot as i64);
        let q = Decoration::cyclic(slot as i64 + 1);
        let (start, end) = if self.extra_at_end {
            ([p, prev[1], prev[2], cur[0]], [cur[1], cur[2], next[0], q])
        } else {
            ([p, prev[1], cur[2], cur[0]], [cur[1], next[2], next[0], q])
        };
        let edge = OrientedEdge { start, end };
        edge.canonical()
            .map_err(|e| Error::Derivation(format!("side {slot} of {t}: {e}")))?;
        Ok(edge)
    }
}

/// Oriented edge read from side `slot` of `t`, starting at corner `slot`.
pub fn oriented_edge(t: &CollaredTile, slot: usize) -> Result<OrientedEdge> {
    FROZEN_MAPPING.read(t, slot)
}

/// Canonical collared edge on side `slot` of `t`.
pub fn edge_from_slot(t: &CollaredTile, slot: usize) -> Result<CollaredEdge> {
    Ok(oriented_edge(t, slot)?.canonical()?.0)
}

/// Collared vertex at corner `corner` (1..=5) of `t`.
pub fn corner_vertex(t: &CollaredTile, corner: usize) -> Result<CollaredVertex> {
    canonicalize_vertex(oriented_edge(t, corner)?.start)
}

/// The collared vertices at the canonical start and end of `e`.
pub fn vertices_from_edge(e: &CollaredEdge) -> Result<(CollaredVertex, CollaredVertex)> {
    let side = |s: EdgeSide| {
        canonicalize_vertex(s).map_err(|err| Error::Derivation(format!("edge {e}: {err}")))
    };
    Ok((side(e.side_a())?, side(e.side_b())?))
}

/// All mappings that reproduce the edge and vertex tables exactly, in
/// lexicographic order.
pub fn search_slot_mappings(d: &PentagonDataset) -> Vec<SlotMapping> {
    let edges: BTreeSet<CollaredEdge> = d.edges().iter().copied().collect();
    let vertices: BTreeSet<CollaredVertex> = d.vertices().iter().copied().collect();
    SlotMapping::all()
        .into_iter()
        .filter(|m| {
            let mut derived = BTreeSet::new();
            for t in d.tiles() {
                for slot in 1..=5 {
                    match m.read(t, slot).and_then(|e| e.canonical()) {
                        Ok((e, _)) => {
                            derived.insert(e);
                        }
                        Err(_) => return false,
                    }
                }
            }
            if derived != edges {
                return false;
            }
            let mut verts = BTreeSet::new();
            for e in &derived {
                match vertices_from_edge(e) {
                    Ok((a, b)) => {
                        verts.insert(a);
                        verts.insert(b);
                    }
                    Err(_) => return false,
                }
            }
            verts == vertices
        })
        .collect()
}

/// Which end of an edge a vertex sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeEnd {
    Start,
    End,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceTable {
    /// Per edge id, the tile sides carrying it and the reading sign.
    pub edge_to_slots: Vec<Vec<(EdgeSlot, i8)>>,
    /// Per vertex id, the edge ends at it (a loop contributes both ends).
    pub vertex_to_edges: Vec<Vec<(EdgeId, EdgeEnd)>>,
    /// Per vertex id, the tile corners at it.
    pub vertex_to_corners: Vec<Vec<(TileId, usize)>>,
    /// Per tile id, the vertex ids at corners 1..=5.
    pub tile_corners: Vec<[VertexId; 5]>,
    /// Per tile id, the edge ids and signs on sides 1..=5.
    pub tile_sides: Vec<[(EdgeId, i8); 5]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexStats {
    pub vertex: VertexId,
    pub degree: u8,
    pub edge_ends: usize,
    pub distinct_edges: usize,
    pub loops: usize,
    pub distinct_tiles: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceStats {
    pub tile_sides: usize,
    /// Number of tile sides per edge, for edges 1..=45.
    pub edge_joins: Vec<usize>,
    /// Histogram: join count -> number of edges.
    pub join_histogram: BTreeMap<usize, usize>,
    /// Histogram: distinct corner vertices -> number of tiles.
    pub distinct_vertex_histogram: BTreeMap<usize, usize>,
    pub vertices: Vec<VertexStats>,
    /// Edges whose canonical first side begins with `i`, for i = 1..=5.
    pub edges_starting_with: [usize; 5],
    /// Edge sides (both orientations) beginning with `i`, for i = 1..=5.
    pub sides_starting_with: [usize; 5],
}

impl IncidenceTable {
    pub fn stats(&self, d: &PentagonDataset) -> IncidenceStats {
        let edge_joins: Vec<usize> = self.edge_to_slots.iter().map(Vec::len).collect();
        let mut join_histogram = BTreeMap::new();
        for n in &edge_joins {
            *join_histogram.entry(*n).or_default() += 1;
        }
        let mut distinct_vertex_histogram = BTreeMap::new();
        for corners in &self.tile_corners {
            let n = corners.iter().collect::<BTreeSet<_>>().len();
            *distinct_vertex_histogram.entry(n).or_default() += 1;
        }
        let vertices = self
            .vertex_to_edges
            .iter()
            .enumerate()
            .map(|(i, ends)| {
                let id = VertexId::from_index(i);
                let distinct: BTreeSet<EdgeId> = ends.iter().map(|(e, _)| *e).collect();
                let loops = distinct
                    .iter()
                    .filter(|e| ends.iter().filter(|(f, _)| f == *e).count() == 2)
                    .count();
                let tiles: BTreeSet<TileId> =
                    self.vertex_to_corners[i].iter().map(|(t, _)| *t).collect();
                VertexStats {
                    vertex: id,
                    degree: d.vertex(id).degree(),
                    edge_ends: ends.len(),
                    distinct_edges: distinct.len(),
                    loops,
                    distinct_tiles: tiles.len(),
                }
            })
            .collect();
        let mut edges_starting_with = [0; 5];
        let mut sides_starting_with = [0; 5];
        for e in d.edges() {
            edges_starting_with[e.side_a()[0].value() as usize - 1] += 1;
            sides_starting_with[e.side_a()[0].value() as usize - 1] += 1;
            sides_starting_with[e.side_b()[0].value() as usize - 1] += 1;
        }
        IncidenceStats {
            tile_sides: edge_joins.iter().sum(),
            edge_joins,
            join_histogram,
            distinct_vertex_histogram,
            vertices,
            edges_starting_with,
            sides_starting_with,
        }
    }
}

/// Incidence between the tiles, edges and vertices of a dataset.
pub fn incidence_table(d: &PentagonDataset) -> Result<IncidenceTable> {
    let lookup_edge = |e: &CollaredEdge| {
        d.edge_id(e)
            .ok_or_else(|| Error::Derivation(format!("edge {e} is not in the edge table")))
    };
    let lookup_vertex = |v: &CollaredVertex| {
        d.vertex_id(v)
            .ok_or_else(|| Error::Derivation(format!("vertex {v} is not in the vertex table")))
    };
    let mut edge_to_slots = vec![Vec::new(); d.edges().len()];
    let mut vertex_to_corners = vec![Vec::new(); d.vertices().len()];
    let mut tile_corners = Vec::with_capacity(d.tiles().len());
    let mut tile_sides = Vec::with_capacity(d.tiles().len());
    for tile in d.tile_ids() {
        let t = d.tile(tile);
        let mut corners = [VertexId(0); 5];
        let mut sides = [(EdgeId(0), 0); 5];
        for slot in 1..=5 {
            let (e, sign) = oriented_edge(t, slot)?.canonical()?;
            let id = lookup_edge(&e)?;
            edge_to_slots[id.index()].push((EdgeSlot { tile, slot }, sign));
            sides[slot - 1] = (id, sign);
            let v = lookup_vertex(&corner_vertex(t, slot)?)?;
            vertex_to_corners[v.index()].push((tile, slot));
            corners[slot - 1] = v;
        }
        tile_corners.push(corners);
        tile_sides.push(sides);
    }
    let mut vertex_to_edges = vec![Vec::new(); d.vertices().len()];
    for (i, e) in d.edges().iter().enumerate() {
        let (a, b) = vertices_from_edge(e)?;
        let id = EdgeId::from_index(i);
        vertex_to_edges[lookup_vertex(&a)?.index()].push((id, EdgeEnd::Start));
        vertex_to_edges[lookup_vertex(&b)?.index()].push((id, EdgeEnd::End));
    }
    Ok(IncidenceTable {
        edge_to_slots,
        vertex_to_edges,
        vertex_to_corners,
        tile_corners,
        tile_sides,
    })
}

/// Tile sides that can sit across side `slot` of tile `t`: those reading the
/// same collared edge from the opposite side.
pub fn compatible_neighbors(d: &PentagonDataset, t: TileId, slot: usize) -> Result<Vec<EdgeSlot>> {
    let mine = oriented_edge(d.tile(t), slot)?;
    let mut out = Vec::new();
    for u in d.tile_ids() {
        for s in 1..=5 {
            if oriented_edge(d.tile(u), s)?.mates_with(&mine) {
                out.push(EdgeSlot { tile: u, slot: s });
            }
        }
    }
    Ok(out)
}
