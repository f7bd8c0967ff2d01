//! Border forcing at edge level: whether substituting a tile's neighbours
//! across each side yields tiles that depend only on the tile itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::apcomplex::{closest_placement, rule_placements, subdivide_side, Placement};
use crate::cells::{CollaredTile, TileId};
use crate::collaring::{compatible_neighbors, edge_from_slot, EdgeSlot};
use crate::dataset::{PentagonDataset, SubstitutionRule};
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct PatchReport {
    pub parent: TileId,
    pub passed: bool,
    /// Canonical forms of the ten internal edges, when the patch fits.
    pub internal_edges: Vec<String>,
    pub diagnostics: Vec<String>,
}

/// Checks that the six children of `rule` fit together.
pub fn patch_consistency(d: &PentagonDataset, rule: &SubstitutionRule) -> Result<PatchReport> {
    let found = rule_placements(d, rule)?;
    if let Some(p) = found.first() {
        let mut internal_edges = Vec::new();
        for e in p.internal_edges() {
            let t = d.tile(rule.children[e.first.child]);
            internal_edges.push(edge_from_slot(t, e.first.slot)?.to_string());
        }
        let mut diagnostics = Vec::new();
        if found.len() > 1 {
            diagnostics.push(format!("{} consistent placements, first used", found.len()));
        }
        return Ok(PatchReport {
            parent: rule.parent,
            passed: true,
            internal_edges,
            diagnostics,
        });
    }
    let (_, mismatches) = closest_placement(d, rule)?;
    Ok(PatchReport {
        parent: rule.parent,
        passed: false,
        internal_edges: Vec::new(),
        diagnostics: mismatches,
    })
}

/// Degree of each corner, corner 1 first; the class of a tile once its
/// exterior decorations are forgotten.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UncollaredClass(pub [u8; 5]);

impl UncollaredClass {
    /// Smallest rotation: the class once interior decorations are forgotten
    /// too.
    pub fn undecorated(&self) -> [u8; 5] {
        (0..5)
            .map(|r| std::array::from_fn(|i| self.0[(i + r) % 5]))
            .min()
            .expect("five rotations")
    }
}

impl fmt::Display for UncollaredClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "[{}]", d.join(""))
    }
}

pub fn uncollared_projection(t: &CollaredTile) -> UncollaredClass {
    UncollaredClass(std::array::from_fn(|i| t.corner_degree(i + 1)))
}

/// What was seen across one side.
#[derive(Clone, Debug, Serialize)]
pub struct SideObservation {
    /// The tile (or class) whose side this is.
    pub subject: String,
    pub slot: usize,
    pub neighbors: usize,
    /// Distinct sequences of substituted tiles along the side, in the
    /// subject's direction.
    pub observed: Vec<String>,
    pub singleton: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ForcingReport {
    pub mode: String,
    pub level: String,
    pub depth: u32,
    pub passed: bool,
    pub sides_checked: usize,
    pub singleton_sides: usize,
    pub per_tile: BTreeMap<String, bool>,
    pub per_edge_side: Vec<SideObservation>,
    pub counterexamples: Vec<String>,
}

impl ForcingReport {
    fn assemble(mode: &str, depth: u32, per_edge_side: Vec<SideObservation>) -> Self {
        let mut per_tile: BTreeMap<String, bool> = BTreeMap::new();
        let mut counterexamples = Vec::new();
        for o in &per_edge_side {
            *per_tile.entry(o.subject.clone()).or_insert(true) &= o.singleton;
            if !o.singleton {
                counterexamples.push(format!(
                    "{} side {}: {} different neighbourhoods: {}",
                    o.subject,
                    o.slot,
                    o.observed.len(),
                    o.observed.join(" / ")
                ));
            }
        }
        let singleton_sides = per_edge_side.iter().filter(|o| o.singleton).count();
        ForcingReport {
            mode: mode.into(),
            level: "edge-level".into(),
            depth,
            passed: singleton_sides == per_edge_side.len(),
            sides_checked: per_edge_side.len(),
            singleton_sides,
            per_tile,
            per_edge_side,
            counterexamples,
        }
    }

    pub fn summary(&self) -> String {
        let mode = if self.mode == "collared" {
            String::new()
        } else {
            format!(" ({})", self.mode)
        };
        format!(
            "{} border forcing at k={}{}: {} ({}/{} sides singleton)",
            self.level,
            self.depth,
            mode,
            if self.passed { "PASS" } else { "FAIL" },
            self.singleton_sides,
            self.sides_checked
        )
    }
}

/// Tiles along side `s'` of `u` after `depth` substitutions, listed in the
/// opposite direction, i.e. along the neighbour's side.
fn across(d: &PentagonDataset, p: &Placement, n: EdgeSlot, depth: u32) -> Vec<(TileId, usize)> {
    let mut seq = subdivide_side(d, p, n.tile, n.slot, depth);
    seq.reverse();
    seq
}

fn render(seq: &[(TileId, usize)]) -> String {
    let parts: Vec<String> = seq.iter().map(|(t, s)| format!("{t}:{s}")).collect();
    parts.join(",")
}

/// Edge-level forcing after `depth` substitutions, for the given tiles (all
/// tiles when `None`).
pub fn verify_border_forcing(
    d: &PentagonDataset,
    p: &Placement,
    depth: u32,
    tiles: Option<&[TileId]>,
) -> Result<ForcingReport> {
    let all: Vec<TileId> = d.tile_ids().collect();
    let tiles = tiles.unwrap_or(&all);
    let mut sides = Vec::new();
    for &t in tiles {
        for slot in 1..=5 {
            let ns = compatible_neighbors(d, t, slot)?;
            let observed: BTreeSet<String> = ns
                .iter()
                .map(|n| render(&across(d, p, *n, depth)))
                .collect();
            sides.push(SideObservation {
                subject: t.to_string(),
                slot,
                neighbors: ns.len(),
                singleton: observed.len() == 1,
                observed: observed.into_iter().collect(),
            });
        }
    }
    Ok(ForcingReport::assemble("collared", depth, sides))
}

/// Edge-level forcing at `k = 1` over all 180 tile sides.
pub fn verify_border_forcing_k1(d: &PentagonDataset, p: &Placement) -> Result<ForcingReport> {
    verify_border_forcing(d, p, 1, None)
}

/// The same check when tiles are only known up to [`UncollaredClass`]: all
/// tiles of a class are pooled, and neighbours are recorded by class.
pub fn verify_uncollared_forcing(d: &PentagonDataset, p: &Placement) -> Result<ForcingReport> {
    let class = |t: TileId| uncollared_projection(d.tile(t));
    let mut pooled: BTreeMap<(UncollaredClass, usize), (usize, BTreeSet<String>)> = BTreeMap::new();
    for t in d.tile_ids() {
        for slot in 1..=5 {
            let entry = pooled.entry((class(t), slot)).or_default();
            for n in compatible_neighbors(d, t, slot)? {
                let seq = across(d, p, n, 1);
                let labels: Vec<String> = seq
                    .iter()
                    .map(|(u, s)| format!("{}:{s}", class(*u)))
                    .collect();
                entry.0 += 1;
                entry.1.insert(labels.join(","));
            }
        }
    }
    let sides = pooled
        .into_iter()
        .map(|((c, slot), (neighbors, observed))| SideObservation {
            subject: c.to_string(),
            slot,
            neighbors,
            singleton: observed.len() == 1,
            observed: observed.into_iter().collect(),
        })
        .collect();
    Ok(ForcingReport::assemble("uncollared", 1, sides))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcomplex::derive_placement;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn setup() -> (PentagonDataset, Placement) {
        let d = PentagonDataset::embedded();
        let p = derive_placement(&d).unwrap();
        (d, p)
    }

    #[test]
    fn every_patch_fits() {
        let (d, _) = setup();
        for rule in d.rules() {
            let r = patch_consistency(&d, rule).unwrap();
            assert!(r.passed, "{}", rule.parent);
            assert_eq!(r.internal_edges.len(), 10);
            assert!(r.diagnostics.is_empty());
        }
    }

    #[test]
    fn mutated_patch_names_an_edge() {
        let (d, _) = setup();
        let mut c = d.children(TileId(1));
        c[0] = TileId(21);
        let bad = d.with_rule(TileId(1), c);
        let r = patch_consistency(&bad, bad.rule(TileId(1))).unwrap();
        assert!(!r.passed);
        assert!(!r.diagnostics.is_empty());
        assert!(
            r.diagnostics.iter().any(|m| m.contains("t21")),
            "{:?}",
            r.diagnostics
        );
    }

    #[test]
    fn forcing_at_k1() {
        let (d, p) = setup();
        let r = verify_border_forcing_k1(&d, &p).unwrap();
        assert!(r.passed, "{:?}", r.counterexamples);
        assert_eq!((r.sides_checked, r.singleton_sides), (180, 180));
        assert_eq!(r.per_tile.len(), 36);
        for o in r.per_edge_side.iter().filter(|o| o.neighbors == 1) {
            assert!(o.singleton);
        }
    }

    #[test]
    fn forcing_survives_a_second_substitution() {
        let (d, p) = setup();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut ids: Vec<TileId> = d.tile_ids().collect();
        ids.shuffle(&mut rng);
        let r = verify_border_forcing(&d, &p, 2, Some(&ids[..5])).unwrap();
        assert!(r.passed);
        assert_eq!(r.sides_checked, 25);
    }

    #[test]
    fn projection_classes() {
        let (d, _) = setup();
        let classes: BTreeSet<UncollaredClass> =
            d.tiles().iter().map(uncollared_projection).collect();
        assert_eq!(classes.len(), 11);
        let shapes: BTreeSet<[u8; 5]> = classes.iter().map(|c| c.undecorated()).collect();
        assert_eq!(shapes.len(), 3);
        // Same degrees, different exterior.
        let a = uncollared_projection(d.tile(TileId(1)));
        let same: Vec<_> = d
            .tile_ids()
            .filter(|t| uncollared_projection(d.tile(*t)) == a)
            .collect();
        assert!(same.len() > 1);
    }

    #[test]
    fn uncollared_forcing_fails() {
        let (d, p) = setup();
        let r = verify_uncollared_forcing(&d, &p).unwrap();
        assert!(!r.passed);
        assert!(!r.counterexamples.is_empty());
        assert_eq!(r.per_tile.len(), 11);
        assert_eq!(r.sides_checked, 55);
    }
}
