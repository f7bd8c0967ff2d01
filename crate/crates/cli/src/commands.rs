use std::fmt::Write as _;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::CommandFactory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use tilespace::apcomplex::{ap_complex, derive_placement};
use tilespace::collaring::incidence_table;
use tilespace::dataset::{load_dataset, validate_dataset, DatasetSource, PentagonDataset};
use tilespace::enumeration::enumerate_collared_tiles;
use tilespace::forcing::{verify_border_forcing, verify_uncollared_forcing};
use tilespace::homology::{cohomology, direct_limit, hull_cohomology, induced_endomorphisms};
use tilespace::invlimit::{parents, random_thread, realize, shift_left, shift_right, Thread};
use tilespace::symbolic1d::{
    ap_graph_1d, border_forcing_k, collared_substitution, CollaredAlphabet, SymbolicSubstitution,
};

use crate::{Cli, Command, Export, Format, Outcome};

const MAX_FORCING_POWER: u32 = 8;

fn usage(msg: String) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

/// The requested format, checked against what the command can produce.
fn format(cli: &Cli, name: &str, allowed: &[Format], default: Format) -> Format {
    let f = cli.format.unwrap_or(default);
    if !allowed.contains(&f) {
        usage(format!("`{name}` does not support --format {f:?}").to_lowercase());
    }
    f
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn dataset(cli: &Cli) -> Result<PentagonDataset> {
    let source = match &cli.dataset {
        Some(dir) => DatasetSource::Dir(dir.clone()),
        None => DatasetSource::Embedded,
    };
    load_dataset(&source).context("loading the dataset")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    use Format::*;
    match &cli.command {
        Command::Validate => {
            let f = format(cli, "validate", &[Text, Json], Text);
            let d = dataset(cli)?;
            let report = validate_dataset(&d);
            let counts = json!({
                "tiles": d.tiles().len(),
                "edges": d.edges().len(),
                "vertices": d.vertices().len(),
                "rules": d.rules().len(),
            });
            let body = match f {
                Json => to_json(&json!({
                    "passed": report.passed(),
                    "counts": counts,
                    "checks": report.checks,
                }))?,
                _ => {
                    let mut s = format!(
                        "tiles {}, edges {}, vertices {}, rules {}\n",
                        d.tiles().len(),
                        d.edges().len(),
                        d.vertices().len(),
                        d.rules().len()
                    );
                    for c in &report.checks {
                        writeln!(s, "{c}")?;
                    }
                    s
                }
            };
            Ok(Outcome {
                body,
                passed: report.passed(),
            })
        }

        Command::Enumerate => {
            let f = format(cli, "enumerate", &[Text, Json], Text);
            let d = dataset(cli)?;
            let e = enumerate_collared_tiles()?;
            let matched = e.match_dataset(&d);
            let verdict = match &matched {
                Ok(()) => "exact".to_string(),
                Err(err) => err.to_string(),
            };
            let body = match f {
                Json => to_json(&json!({
                    "pattern_two_candidates": e.candidates.len(),
                    "pattern_one": e.pattern_one.flat(),
                    "derived": e.tiles.len(),
                    "match": verdict,
                    "enumeration": e,
                }))?,
                _ => format!(
                    "pattern (2): {} candidates, pattern (1): 1 tile\nderived {} tiles, match: {}\n",
                    e.candidates.len(),
                    e.tiles.len(),
                    verdict
                ),
            };
            Ok(Outcome {
                body,
                passed: matched.is_ok(),
            })
        }

        Command::Incidence => {
            let f = format(cli, "incidence", &[Text, Json, Csv], Text);
            let d = dataset(cli)?;
            let stats = incidence_table(&d)?.stats(&d);
            let body = match f {
                Json => to_json(&stats)?,
                Csv => incidence_csv(&stats)?,
                _ => {
                    let mut s = format!("tile sides: {}\n", stats.tile_sides);
                    writeln!(s, "edges by join count: {:?}", stats.join_histogram)?;
                    writeln!(
                        s,
                        "tiles by distinct corner vertices: {:?}",
                        stats.distinct_vertex_histogram
                    )?;
                    for v in &stats.vertices {
                        writeln!(
                            s,
                            "{} degree {}: {} edge ends, {} distinct edges, {} loops, {} tiles",
                            v.vertex,
                            v.degree,
                            v.edge_ends,
                            v.distinct_edges,
                            v.loops,
                            v.distinct_tiles
                        )?;
                    }
                    writeln!(
                        s,
                        "edges by first decoration: {:?}",
                        stats.edges_starting_with
                    )?;
                    writeln!(
                        s,
                        "edge sides by first decoration: {:?}",
                        stats.sides_starting_with
                    )?;
                    s
                }
            };
            Ok(Outcome { body, passed: true })
        }

        Command::Forcing { uncollared, depth } => {
            let f = format(cli, "forcing", &[Text, Json], Text);
            let d = dataset(cli)?;
            let p = derive_placement(&d)?;
            let report = if *uncollared {
                verify_uncollared_forcing(&d, &p)?
            } else {
                verify_border_forcing(&d, &p, *depth, None)?
            };
            let body = match f {
                Json => to_json(&report)?,
                _ => {
                    let mut s = format!("{}\n", report.summary());
                    for c in &report.counterexamples {
                        writeln!(s, "  {c}")?;
                    }
                    s
                }
            };
            Ok(Outcome {
                body,
                passed: report.passed,
            })
        }

        Command::Complex { export, faces } => {
            let d = dataset(cli)?;
            let ap = ap_complex(&d)?;
            let body = match export {
                Export::Dot => ap.to_dot(&d, *faces),
                Export::Json => to_json(&ap.to_json(&d))?,
            };
            Ok(Outcome { body, passed: true })
        }

        Command::ExportDot { faces } => {
            format(cli, "export-dot", &[Dot], Dot);
            let d = dataset(cli)?;
            let body = ap_complex(&d)?.to_dot(&d, *faces);
            Ok(Outcome { body, passed: true })
        }

        Command::Cohomology { json } => {
            let f = if *json {
                Json
            } else {
                format(cli, "cohomology", &[Text, Json], Text)
            };
            let d = dataset(cli)?;
            let report = hull_cohomology(&d)?;
            let body = match f {
                Json => to_json(&report)?,
                _ => {
                    let mut s = String::new();
                    for c in &report.checks {
                        writeln!(s, "{c}")?;
                    }
                    for g in &report.degrees {
                        writeln!(
                            s,
                            "H^{}: complex {}, induced map {}, limit {}",
                            g.degree, g.complex_group, g.induced, g.limit.description
                        )?;
                    }
                    s
                }
            };
            Ok(Outcome {
                body,
                passed: report.passed(),
            })
        }

        Command::Fib => {
            let f = format(cli, "fib", &[Text, Json], Text);
            one_dimensional(&SymbolicSubstitution::fibonacci(), f)
        }

        Command::Subst1d { rules } => {
            let f = format(cli, "subst1d", &[Text, Json], Text);
            let text = std::fs::read_to_string(rules)
                .with_context(|| format!("reading {}", rules.display()))?;
            let s = SymbolicSubstitution::parse(&text)?;
            one_dimensional(&s, f)
        }

        Command::Shift { depth, steps } => {
            let f = format(cli, "shift", &[Json], Json);
            debug_assert_eq!(f, Json);
            let d = dataset(cli)?;
            let body = to_json(&shift_walk(&d, *depth, *steps, cli.seed)?)?;
            Ok(Outcome { body, passed: true })
        }
    }
}

fn incidence_csv(stats: &tilespace::collaring::IncidenceStats) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["statistic", "key", "value"])?;
    let mut row =
        |stat: &str, key: String, value: usize| w.write_record([stat, &key, &value.to_string()]);
    row("tile_sides", String::new(), stats.tile_sides)?;
    for (i, n) in stats.edge_joins.iter().enumerate() {
        row("edge_joins", format!("e{}", i + 1), *n)?;
    }
    for (k, n) in &stats.join_histogram {
        row("join_histogram", k.to_string(), *n)?;
    }
    for (k, n) in &stats.distinct_vertex_histogram {
        row("distinct_vertex_histogram", k.to_string(), *n)?;
    }
    for v in &stats.vertices {
        row("vertex_degree", v.vertex.to_string(), v.degree as usize)?;
        row("vertex_edge_ends", v.vertex.to_string(), v.edge_ends)?;
        row(
            "vertex_distinct_edges",
            v.vertex.to_string(),
            v.distinct_edges,
        )?;
        row("vertex_loops", v.vertex.to_string(), v.loops)?;
        row(
            "vertex_distinct_tiles",
            v.vertex.to_string(),
            v.distinct_tiles,
        )?;
    }
    for (i, n) in stats.edges_starting_with.iter().enumerate() {
        row("edges_starting_with", (i + 1).to_string(), *n)?;
    }
    for (i, n) in stats.sides_starting_with.iter().enumerate() {
        row("sides_starting_with", (i + 1).to_string(), *n)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn one_dimensional(s: &SymbolicSubstitution, f: Format) -> Result<Outcome> {
    let a = CollaredAlphabet::new(s)?;
    let k = border_forcing_k(s, MAX_FORCING_POWER)?;
    let images = collared_substitution(s, &a, k.unwrap_or(1));
    let g = ap_graph_1d(s)?;
    let h = cohomology(&g.complex);
    let induced = induced_endomorphisms(&g.complex, &h, &g.maps)?;
    let limits: Vec<_> = h
        .iter()
        .zip(&induced)
        .take(2)
        .map(|(g, m)| direct_limit(&g.group, m))
        .collect();
    let letters: Vec<(String, String)> = a
        .letters()
        .iter()
        .zip(a.labels())
        .map(|(l, n)| (n.clone(), l.to_string()))
        .collect();
    let body = match f {
        Format::Json => to_json(&json!({
            "substitution": s,
            "collared_letters": letters.iter().map(|(n, l)| json!({"label": n, "letter": l})).collect::<Vec<_>>(),
            "forcing_k": k,
            "equations": images.iter().map(|i| i.equation(&a)).collect::<Vec<_>>(),
            "graph": { "vertices": g.complex.vertex_labels, "edges": g.complex.edge_labels, "S1": g.maps.s1 },
            "cohomology": h.iter().take(2).zip(&limits).map(|(g, l)| json!({
                "degree": g.degree, "group": g.group.to_string(), "limit": l,
            })).collect::<Vec<_>>(),
        }))?,
        _ => {
            let mut out = String::new();
            let parts: Vec<String> = letters.iter().map(|(n, l)| format!("{n}={l}")).collect();
            writeln!(out, "collared letters: {}", parts.join(" "))?;
            match k {
                Some(k) => writeln!(out, "border forcing: k={k}")?,
                None => writeln!(
                    out,
                    "border forcing: not reached for k<={MAX_FORCING_POWER}"
                )?,
            }
            for i in &images {
                writeln!(out, "{}", i.equation(&a))?;
            }
            for (g, l) in h.iter().zip(&limits) {
                writeln!(
                    out,
                    "H^{}: graph {}, limit {}",
                    g.degree, g.group, l.description
                )?;
            }
            out
        }
    };
    Ok(Outcome {
        body,
        passed: k.is_some(),
    })
}

#[derive(Serialize)]
struct Step {
    op: &'static str,
    thread: Thread,
    realized: Vec<String>,
}

fn step(d: &PentagonDataset, op: &'static str, t: &Thread) -> Result<Step> {
    Ok(Step {
        op,
        thread: t.clone(),
        realized: realize(d, t)?.iter().map(|x| x.to_string()).collect(),
    })
}

fn shift_walk(
    d: &PentagonDataset,
    depth: usize,
    steps: usize,
    seed: u64,
) -> Result<serde_json::Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = random_thread(d, depth, &mut rng);
    let mut walk = vec![step(d, "start", &t)?];
    for _ in 0..steps.min(depth) {
        t = shift_right(d, &t)?;
        walk.push(step(d, "shift_right", &t)?);
    }
    for _ in 0..steps {
        let ps = parents(d, t.base);
        let (parent, position) = ps[rng.gen_range(0..ps.len())];
        t = shift_left(d, &t, parent, position)?;
        walk.push(step(d, "shift_left", &t)?);
    }
    Ok(json!({ "seed": seed, "depth": depth, "walk": walk }))
}
