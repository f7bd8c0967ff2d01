//! The cell complex of collared cells and the cellular maps induced by the
//! substitution.
//!
//! A rule's six children tile the parent: a central pentagon surrounded by
//! five peripheral ones, one at each parent corner. Label the parent corners
//! `c1..c5` clockwise, the midpoint of parent side `k` as `mk`, and the
//! corner of the central child shared by the peripheral children at `ck`
//! and `c(k+1)` as `vk`. The peripheral child at `ck` has corners
//! `ck, mk, vk, v(k-1), m(k-1)` in clockwise order, the central child has
//! corners `v1..v5`. A [`RulePlacement`] records which child sits where and
//! which of its decorated corners sits first in those lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cells::{CollaredTile, Decoration, EdgeId, OrientedEdge, TileId, VertexId};
use crate::collaring::{corner_vertex, incidence_table, oriented_edge, IncidenceTable};
use crate::dataset::{PentagonDataset, SubstitutionRule, CHILD_COUNT};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Position of each child of one rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RulePlacement {
    pub parent: TileId,
    /// For parent corner `k` (index `k-1`), the index (1..=5) into the rule's
    /// children of the peripheral child sitting there.
    pub peripheral: [usize; 5],
    /// Decoration of the corner of that child sitting at the parent corner.
    pub rotations: [u8; 5],
    /// Decoration of the central child's corner at `v1`.
    pub centre_rotation: u8,
}

/// A child side: index into the rule's children (0 is the central child)
/// and the side's decoration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChildSide {
    pub child: usize,
    pub slot: usize,
}

/// Two child sides that must read the same collared edge from opposite
/// directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InternalEdge {
    pub first: ChildSide,
    pub second: ChildSide,
}

fn cyc(v: i64) -> usize {
    Decoration::cyclic(v).value() as usize
}

impl RulePlacement {
    /// The child side on the peripheral child at corner `k` whose clockwise
    /// corner index in `ck, mk, vk, v(k-1), m(k-1)` is `i`.
    fn peripheral_side(&self, k: usize, i: usize) -> ChildSide {
        ChildSide {
            child: self.peripheral[k - 1],
            slot: cyc(self.rotations[k - 1] as i64 + i as i64),
        }
    }

    /// The central child's side running from `vk` to `v(k+1)`.
    fn centre_side(&self, k: usize) -> ChildSide {
        ChildSide {
            child: 0,
            slot: cyc(self.centre_rotation as i64 + k as i64 - 1),
        }
    }

    /// The two child sides covering parent side `k`, in the parent's
    /// clockwise direction.
    pub fn side_halves(&self, k: usize) -> [ChildSide; 2] {
        [
            self.peripheral_side(k, 0),
            self.peripheral_side(k % 5 + 1, 4),
        ]
    }

    /// The child corner at parent corner `k`.
    pub fn corner_child(&self, k: usize) -> (usize, usize) {
        (self.peripheral[k - 1], self.rotations[k - 1] as usize)
    }

    /// The ten shared sides inside the patch.
    pub fn internal_edges(&self) -> Vec<InternalEdge> {
        let mut out = Vec::with_capacity(10);
        for k in 1..=5 {
            out.push(InternalEdge {
                first: self.peripheral_side(k, 1),
                second: self.peripheral_side(k % 5 + 1, 3),
            });
        }
        for k in 1..=5 {
            out.push(InternalEdge {
                first: self.peripheral_side(k, 2),
                second: self.centre_side((k + 3) % 5 + 1),
            });
        }
        out
    }
}

/// Placement of every rule, with the number of consistent placements found
/// for each.
#[derive(Clone, Debug, Serialize)]
pub struct Placement {
    pub rules: Vec<RulePlacement>,
    /// Rules with more than one consistent placement: (parent, count). The
    /// lexicographically first is used.
    pub ambiguities: Vec<(TileId, usize)>,
}

impl Placement {
    pub fn rule(&self, t: TileId) -> &RulePlacement {
        &self.rules[t.index()]
    }
}

fn child_tile<'a>(
    d: &'a PentagonDataset,
    rule: &SubstitutionRule,
    child: usize,
) -> &'a CollaredTile {
    d.tile(rule.children[child])
}

fn side_edge(d: &PentagonDataset, rule: &SubstitutionRule, s: ChildSide) -> Result<OrientedEdge> {
    oriented_edge(child_tile(d, rule, s.child), s.slot)
}

/// Internal edges of `p` that fail to match, as readable descriptions.
pub fn internal_mismatches(
    d: &PentagonDataset,
    rule: &SubstitutionRule,
    p: &RulePlacement,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for e in p.internal_edges() {
        let a = side_edge(d, rule, e.first)?;
        let b = side_edge(d, rule, e.second)?;
        if !a.mates_with(&b) {
            out.push(format!(
                "side {} of child {} ({}) reads {} but side {} of child {} ({}) reads {}",
                e.first.slot,
                e.first.child + 1,
                rule.children[e.first.child],
                a.canonical()?.0,
                e.second.slot,
                e.second.child + 1,
                rule.children[e.second.child],
                b.canonical()?.0,
            ));
        }
    }
    Ok(out)
}

/// Cyclic child orders tried by the search: five rotations, each in both
/// directions.
fn peripheral_orders() -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    for reflect in [false, true] {
        for offset in 0..5 {
            out.push(std::array::from_fn(|k| {
                let step = if reflect { 5 - k } else { k };
                (step + offset) % 5 + 1
            }));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every placement of `rule` in which each peripheral child shows the
/// parent's collared vertex at the parent corner it occupies and all ten
/// internal sides match.
pub fn rule_placements(d: &PentagonDataset, rule: &SubstitutionRule) -> Result<Vec<RulePlacement>> {
    let parent = d.tile(rule.parent);
    let parent_vertices: Vec<_> = (1..=5)
        .map(|k| corner_vertex(parent, k))
        .collect::<Result<_>>()?;
    let mut found = Vec::new();
    for order in peripheral_orders() {
        let mut options: Vec<Vec<u8>> = Vec::with_capacity(5);
        for k in 1..=5 {
            let child = child_tile(d, rule, order[k - 1]);
            let mut rs = Vec::new();
            for r in 1..=5u8 {
                if corner_vertex(child, r as usize)? == parent_vertices[k - 1] {
                    rs.push(r);
                }
            }
            options.push(rs);
        }
        for rotations in cartesian(&options) {
            for centre_rotation in 1..=5 {
                let p = RulePlacement {
                    parent: rule.parent,
                    peripheral: order,
                    rotations,
                    centre_rotation,
                };
                if internal_mismatches(d, rule, &p)?.is_empty() {
                    found.push(p);
                }
            }
        }
    }
    found.sort();
    Ok(found)
}

fn cartesian(options: &[Vec<u8>]) -> Vec<[u8; 5]> {
    let mut out = vec![[0u8; 5]];
    for (k, opts) in options.iter().enumerate() {
        let mut next = Vec::new();
        for prefix in &out {
            for &r in opts {
                let mut p = *prefix;
                p[k] = r;
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The placement of the candidate with the fewest internal mismatches, and
/// those mismatches. Used to explain a rule with no consistent placement.
pub fn closest_placement(
    d: &PentagonDataset,
    rule: &SubstitutionRule,
) -> Result<(RulePlacement, Vec<String>)> {
    let mut sides = Vec::with_capacity(CHILD_COUNT);
    for child in 0..CHILD_COUNT {
        let t = child_tile(d, rule, child);
        let row: Vec<OrientedEdge> = (1..=5)
            .map(|s| oriented_edge(t, s))
            .collect::<Result<_>>()?;
        sides.push(row);
    }
    let side = |s: ChildSide| &sides[s.child][s.slot - 1];
    let mut best: Option<(RulePlacement, usize)> = None;
    for order in peripheral_orders() {
        for rotations in cartesian(&vec![(1..=5).collect(); 5]) {
            for centre_rotation in 1..=5 {
                let p = RulePlacement {
                    parent: rule.parent,
                    peripheral: order,
                    rotations,
                    centre_rotation,
                };
                let bad = p
                    .internal_edges()
                    .iter()
                    .filter(|e| !side(e.first).mates_with(side(e.second)))
                    .count();
                if best.is_none_or(|(_, b)| bad < b) {
                    best = Some((p, bad));
                }
            }
        }
    }
    let (p, _) = best.expect("the search space is non-empty");
    Ok((p, internal_mismatches(d, rule, &p)?))
}

/// Places the children of every rule.
pub fn derive_placement(d: &PentagonDataset) -> Result<Placement> {
    let mut rules = Vec::with_capacity(d.rules().len());
    let mut ambiguities = Vec::new();
    for rule in d.rules() {
        let found = rule_placements(d, rule)?;
        match found.len() {
            0 => {
                return Err(Error::Placement(format!(
                    "no consistent placement for the rule of {}",
                    rule.parent
                )))
            }
            1 => {}
            n => ambiguities.push((rule.parent, n)),
        }
        rules.push(found[0]);
    }
    Ok(Placement { rules, ambiguities })
}

/// A 2-dimensional cell complex given by its boundary matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CWComplex {
    pub vertex_labels: Vec<String>,
    pub edge_labels: Vec<String>,
    pub face_labels: Vec<String>,
    /// vertices x edges.
    pub boundary1: IntMatrix,
    /// edges x faces.
    pub boundary2: IntMatrix,
}

impl CWComplex {
    /// A complex with default labels `v1.., e1.., f1..`.
    pub fn new(boundary1: IntMatrix, boundary2: IntMatrix) -> Result<Self> {
        let labels = |p: &str, n: usize| (1..=n).map(|i| format!("{p}{i}")).collect();
        Self::with_labels(
            labels("v", boundary1.rows()),
            labels("e", boundary1.cols()),
            labels("f", boundary2.cols()),
            boundary1,
            boundary2,
        )
    }

    pub fn with_labels(
        vertex_labels: Vec<String>,
        edge_labels: Vec<String>,
        face_labels: Vec<String>,
        boundary1: IntMatrix,
        boundary2: IntMatrix,
    ) -> Result<Self> {
        if boundary1.rows() != vertex_labels.len()
            || boundary1.cols() != edge_labels.len()
            || boundary2.rows() != edge_labels.len()
            || boundary2.cols() != face_labels.len()
        {
            return Err(Error::Derivation("boundary matrix shapes disagree".into()));
        }
        let c = CWComplex {
            vertex_labels,
            edge_labels,
            face_labels,
            boundary1,
            boundary2,
        };
        if !(&c.boundary1 * &c.boundary2).is_zero() {
            return Err(Error::Derivation(
                "the composite of the boundary maps is not zero".into(),
            ));
        }
        Ok(c)
    }

    pub fn cell_count(&self, k: usize) -> usize {
        match k {
            0 => self.vertex_labels.len(),
            1 => self.edge_labels.len(),
            2 => self.face_labels.len(),
            _ => 0,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cell_count(0) as i64 - self.cell_count(1) as i64 + self.cell_count(2) as i64
    }

    /// Endpoints of edge `j`, or `None` for a loop.
    pub fn endpoints(&self, j: usize) -> Option<(usize, usize)> {
        let col = self.boundary1.col(j);
        let start = col.iter().position(|x| *x == -BigInt::one())?;
        let end = col.iter().position(|x| x.is_one())?;
        Some((start, end))
    }
}

/// Builds the complex of collared cells of `d`.
///
/// Each edge runs from the vertex of its first canonical side to that of its
/// second. A face's boundary is its five sides in order, each with sign +1
/// when the side reads the edge in canonical form.
pub fn build_complex(d: &PentagonDataset) -> Result<CWComplex> {
    let inc = incidence_table(d)?;
    build_from_incidence(d, &inc)
}

fn build_from_incidence(d: &PentagonDataset, inc: &IncidenceTable) -> Result<CWComplex> {
    let mut b1 = IntMatrix::zeros(d.vertices().len(), d.edges().len());
    for (j, e) in d.edges().iter().enumerate() {
        let (a, b) = crate::collaring::vertices_from_edge(e)?;
        let (a, b) = (vertex_index(d, &a)?, vertex_index(d, &b)?);
        if a != b {
            b1[(a, j)] -= 1;
            b1[(b, j)] += 1;
        }
    }
    let mut b2 = IntMatrix::zeros(d.edges().len(), d.tiles().len());
    for (t, sides) in inc.tile_sides.iter().enumerate() {
        for (e, sign) in sides {
            b2[(e.index(), t)] += *sign as i64;
        }
    }
    CWComplex::with_labels(
        (1..=d.vertices().len())
            .map(|i| VertexId(i).to_string())
            .collect(),
        (1..=d.edges().len())
            .map(|i| EdgeId(i).to_string())
            .collect(),
        (1..=d.tiles().len())
            .map(|i| TileId(i).to_string())
            .collect(),
        b1,
        b2,
    )
    .map_err(|e| Error::Derivation(format!("orientation: {e}")))
}

fn vertex_index(d: &PentagonDataset, v: &crate::cells::CollaredVertex) -> Result<usize> {
    d.vertex_id(v)
        .map(VertexId::index)
        .ok_or_else(|| Error::Derivation(format!("vertex {v} is not in the vertex table")))
}

/// Cellular maps in each degree. Row `i` of `s_k` is the image of cell `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMaps {
    pub s2: IntMatrix,
    pub s1: IntMatrix,
    pub s0: IntMatrix,
}

impl ChainMaps {
    pub fn identity(c: &CWComplex) -> Self {
        ChainMaps {
            s2: IntMatrix::identity(c.cell_count(2)),
            s1: IntMatrix::identity(c.cell_count(1)),
            s0: IntMatrix::identity(c.cell_count(0)),
        }
    }

    pub fn compose(&self, other: &ChainMaps) -> ChainMaps {
        ChainMaps {
            s2: &self.s2 * &other.s2,
            s1: &self.s1 * &other.s1,
            s0: &self.s0 * &other.s0,
        }
    }

    /// Checks that the maps commute with the boundaries of `c`; names the
    /// first offending cell otherwise.
    pub fn check_commutes(&self, c: &CWComplex) -> Result<()> {
        let lhs = &c.boundary2 * &self.s2.transpose();
        let rhs = &self.s1.transpose() * &c.boundary2;
        if let Some(j) = (0..lhs.cols()).find(|&j| lhs.col(j) != rhs.col(j)) {
            return Err(Error::Derivation(format!(
                "chain maps do not commute with the boundary of face {}",
                c.face_labels[j]
            )));
        }
        let lhs = &c.boundary1 * &self.s1.transpose();
        let rhs = &self.s0.transpose() * &c.boundary1;
        if let Some(j) = (0..lhs.cols()).find(|&j| lhs.col(j) != rhs.col(j)) {
            return Err(Error::Derivation(format!(
                "chain maps do not commute with the boundary of edge {}",
                c.edge_labels[j]
            )));
        }
        Ok(())
    }
}

/// The child sides along side `slot` of `tile` after `depth` substitutions,
/// in the tile's clockwise direction, as (tile, side) pairs.
pub fn subdivide_side(
    d: &PentagonDataset,
    p: &Placement,
    tile: TileId,
    slot: usize,
    depth: u32,
) -> Vec<(TileId, usize)> {
    if depth == 0 {
        return vec![(tile, slot)];
    }
    let rule = d.rule(tile);
    p.rule(tile)
        .side_halves(slot)
        .iter()
        .flat_map(|h| subdivide_side(d, p, rule.children[h.child], h.slot, depth - 1))
        .collect()
}

/// The tile and corner at corner `corner` of `tile` after `depth`
/// substitutions.
pub fn subdivide_corner(
    d: &PentagonDataset,
    p: &Placement,
    tile: TileId,
    corner: usize,
    depth: u32,
) -> (TileId, usize) {
    if depth == 0 {
        return (tile, corner);
    }
    let (child, c) = p.rule(tile).corner_child(corner);
    subdivide_corner(d, p, d.rule(tile).children[child], c, depth - 1)
}

/// Chain maps of the `depth`-fold substitution.
pub fn chain_maps_power(
    d: &PentagonDataset,
    p: &Placement,
    c: &CWComplex,
    depth: u32,
) -> Result<ChainMaps> {
    let inc = incidence_table(d)?;
    let n2 = d.tiles().len();
    let mut s2 = IntMatrix::identity(n2);
    let mut one = IntMatrix::zeros(n2, n2);
    for rule in d.rules() {
        for child in rule.children {
            one[(rule.parent.index(), child.index())] += 1;
        }
    }
    for _ in 0..depth {
        s2 = &s2 * &one;
    }

    let n1 = d.edges().len();
    let mut s1: Vec<Option<Vec<BigInt>>> = vec![None; n1];
    for t in d.tile_ids() {
        for slot in 1..=5 {
            let (e, sign) = inc.tile_sides[t.index()][slot - 1];
            let mut row = vec![BigInt::zero(); n1];
            for (u, s) in subdivide_side(d, p, t, slot, depth) {
                let (f, fs) = inc.tile_sides[u.index()][s - 1];
                row[f.index()] += (sign * fs) as i64;
            }
            match &s1[e.index()] {
                None => s1[e.index()] = Some(row),
                Some(prev) if *prev == row => {}
                Some(_) => {
                    return Err(Error::Derivation(format!(
                        "the image of edge {e} depends on the side of {t} it is read from"
                    )))
                }
            }
        }
    }

    let n0 = d.vertices().len();
    let mut s0: Vec<Option<usize>> = vec![None; n0];
    for t in d.tile_ids() {
        for corner in 1..=5 {
            let v = inc.tile_corners[t.index()][corner - 1];
            let (u, c) = subdivide_corner(d, p, t, corner, depth);
            let w = inc.tile_corners[u.index()][c - 1];
            match s0[v.index()] {
                None => s0[v.index()] = Some(w.index()),
                Some(prev) if prev == w.index() => {}
                Some(_) => {
                    return Err(Error::Derivation(format!(
                        "the image of vertex {v} depends on the corner of {t} it is read from"
                    )))
                }
            }
        }
    }

    let s1 = IntMatrix::from_fn(n1, n1, |i, j| {
        s1[i].as_ref().map_or_else(BigInt::zero, |r| r[j].clone())
    });
    let s0 = IntMatrix::from_fn(n0, n0, |i, j| {
        if s0[i] == Some(j) {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let maps = ChainMaps { s2, s1, s0 };
    maps.check_commutes(c)?;
    Ok(maps)
}

/// Chain maps of one substitution step.
pub fn chain_maps(d: &PentagonDataset, p: &Placement, c: &CWComplex) -> Result<ChainMaps> {
    chain_maps_power(d, p, c, 1)
}

/// Connected components of the 1-skeleton.
pub fn connectivity(c: &CWComplex) -> usize {
    let n = c.cell_count(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    for j in 0..c.cell_count(1) {
        if let Some((a, b)) = c.endpoints(j) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Certificate that 6 is an eigenvalue of `|S2|`: the determinant of
/// `|S2| - 6I`, which is zero exactly when it is.
pub fn perron_certificate(m: &ChainMaps) -> BigInt {
    let a = m.s2.abs();
    a.sub(&IntMatrix::identity(a.rows()).scale(&BigInt::from(CHILD_COUNT)))
        .det()
}

#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    /// Add one node per face, joined to its corner vertices.
    pub faces: bool,
    /// Per-vertex label suffixes, e.g. the collared decorations.
    pub vertex_details: Vec<String>,
    /// (start, end) vertex indices per edge. Needed to place loop edges;
    /// read from the boundary when empty.
    pub edge_endpoints: Vec<(usize, usize)>,
    /// For each face, its corner vertex indices.
    pub face_corners: Vec<Vec<usize>>,
}

/// DOT text for the 1-skeleton of `c`, edges directed by orientation.
///
/// Loop edges whose vertex is not given in `options` hang off a point node
/// named after the edge.
pub fn export_dot(c: &CWComplex, options: &DotOptions) -> String {
    let mut out = String::from("digraph complex {\n  node [shape=circle];\n");
    for (i, v) in c.vertex_labels.iter().enumerate() {
        match options.vertex_details.get(i) {
            Some(extra) => writeln!(out, "  {v} [label=\"{v}\\n{extra}\"];"),
            None => writeln!(out, "  {v} [label=\"{v}\"];"),
        }
        .expect("writing to a string");
    }
    for (j, e) in c.edge_labels.iter().enumerate() {
        let ends = options
            .edge_endpoints
            .get(j)
            .copied()
            .or_else(|| c.endpoints(j));
        let line = match ends {
            Some((a, b)) => format!(
                "  {} -> {} [label=\"{e}\"];",
                c.vertex_labels[a], c.vertex_labels[b]
            ),
            None => format!("  {e}_at [shape=point];\n  {e}_at -> {e}_at [label=\"{e}\"];"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    if options.faces {
        for (k, f) in c.face_labels.iter().enumerate() {
            writeln!(out, "  {f} [shape=box];").expect("writing to a string");
            let corners: BTreeSet<usize> = options
                .face_corners
                .get(k)
                .map(|v| v.iter().copied().collect())
                .unwrap_or_default();
            for v in corners {
                writeln!(
                    out,
                    "  {f} -> {} [style=dashed, arrowhead=none];",
                    c.vertex_labels[v]
                )
                .expect("writing to a string");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// The complex of `d` with everything needed to export it.
#[derive(Clone, Debug)]
pub struct ApComplex {
    pub complex: CWComplex,
    pub placement: Placement,
    pub maps: ChainMaps,
    pub incidence: IncidenceTable,
    /// Endpoint of each edge by id index: (start, end) vertex indices.
    pub edge_endpoints: Vec<(usize, usize)>,
}

/// Derives placement, complex and chain maps together.
pub fn ap_complex(d: &PentagonDataset) -> Result<ApComplex> {
    let placement = derive_placement(d)?;
    let incidence = incidence_table(d)?;
    let complex = build_from_incidence(d, &incidence)?;
    let maps = chain_maps(d, &placement, &complex)?;
    let edge_endpoints = d
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = crate::collaring::vertices_from_edge(e)?;
            Ok((vertex_index(d, &a)?, vertex_index(d, &b)?))
        })
        .collect::<Result<_>>()?;
    Ok(ApComplex {
        complex,
        placement,
        maps,
        incidence,
        edge_endpoints,
    })
}

impl ApComplex {
    pub fn dot_options(&self, d: &PentagonDataset, faces: bool) -> DotOptions {
        DotOptions {
            faces,
            vertex_details: d.vertices().iter().map(|v| v.to_string()).collect(),
            edge_endpoints: self.edge_endpoints.clone(),
            face_corners: self
                .incidence
                .tile_corners
                .iter()
                .map(|cs| cs.iter().map(|v| v.index()).collect())
                .collect(),
        }
    }

    pub fn to_dot(&self, d: &PentagonDataset, faces: bool) -> String {
        export_dot(&self.complex, &self.dot_options(d, faces))
    }

    pub fn to_json(&self, d: &PentagonDataset) -> ComplexJson {
        ComplexJson {
            faces: d.tiles().iter().map(|t| t.flat().to_vec()).collect(),
            edges: d.edges().iter().map(|e| e.flat().to_vec()).collect(),
            vertices: d.vertices().iter().map(|v| v.flat().to_vec()).collect(),
            boundary2: self.complex.boundary2.clone(),
            boundary1: self.complex.boundary1.clone(),
            s2: self.maps.s2.clone(),
            s1: self.maps.s1.clone(),
            s0: self.maps.s0.clone(),
        }
    }

    /// How many times each face runs over its most repeated edge, by face.
    pub fn face_edge_multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for sides in &self.incidence.tile_sides {
            let mut counts: BTreeMap<EdgeId, usize> = BTreeMap::new();
            for (e, _) in sides {
                *counts.entry(*e).or_default() += 1;
            }
            let max = counts.values().copied().max().unwrap_or(0);
            *hist.entry(max).or_default() += 1;
        }
        hist
    }
}

/// JSON form of the complex: cells as decoration arrays, matrices as nested
/// integer arrays.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexJson {
    pub faces: Vec<Vec<u8>>,
    pub edges: Vec<Vec<u8>>,
    pub vertices: Vec<Vec<u8>>,
    pub boundary2: IntMatrix,
    pub boundary1: IntMatrix,
    #[serde(rename = "S2")]
    pub s2: IntMatrix,
    #[serde(rename = "S1")]
    pub s1: IntMatrix,
    #[serde(rename = "S0")]
    pub s0: IntMatrix,
}

/// Convenience check used by reports: all row sums of `|m|` equal `k`.
pub fn abs_row_sums_equal(m: &IntMatrix, k: i64) -> bool {
    m.abs().row_sums().iter().all(|s| *s == BigInt::from(k))
}
