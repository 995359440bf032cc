//! Each subcommand computes a JSON payload; rendering happens elsewhere.

use serde_json::{json, Value};
use tropmod::collapse::{collapse_search, verify_certificate};
use tropmod::cw::{asymptotic_coefficient, euler_x, total_poly};
use tropmod::enumerate::{filtered_structures, stable_graphs};
use tropmod::fiber::CellKind;
use tropmod::reproduce::{reproduce_all, Status};
use tropmod::{CanonicalForm, CollapseConfig, CollapseVerdict, CwComplex, DeltaComplex, FilteredGraph, MultiGraph, SubdividedGraph};

use crate::cache::Cache;
use crate::CliError;

fn edges(g: &MultiGraph) -> Value {
    g.edges().map(|(u, w)| json!([u, w])).collect()
}

pub fn enumerate(cache: &Cache, genus: usize, filtered: bool) -> Result<Value, CliError> {
    cache.get_or_compute(&format!("enumerate/g={genus}/filtered={filtered}"), || {
        let classes = stable_graphs(genus)?;
        let rows: Vec<Value> = if filtered {
            classes
                .iter()
                .flat_map(filtered_structures)
                .map(|c| {
                    json!({
                        "canonical": c.form.to_hex(),
                        "vertices": c.graph.graph().num_vertices(),
                        "edges": edges(c.graph.graph()),
                        "blocks": c.graph.blocks(),
                        "autOrder": c.aut.order(),
                        "depth": c.depth,
                    })
                })
                .collect()
        } else {
            classes
                .iter()
                .map(|c| {
                    json!({
                        "canonical": c.form.to_hex(),
                        "vertices": c.graph.num_vertices(),
                        "edges": edges(&c.graph),
                        "blocks": vec![0; c.graph.num_edges()],
                        "autOrder": c.aut_order,
                        "depth": 1,
                    })
                })
                .collect()
        };
        Ok(Value::Array(rows))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Check {
    Purity,
    Connectivity,
    Euler,
    /// Simplicial identities, simplex vertices and the forest condition.
    Identities,
}

pub struct DeltaRequest {
    pub genus: usize,
    pub checks: Vec<Check>,
    pub collapse: Option<CollapseConfig>,
    pub dot: bool,
}

pub fn delta(cache: &Cache, req: &DeltaRequest) -> Result<Value, CliError> {
    let mut key = format!("delta/g={}/checks={:?}", req.genus, req.checks);
    if let Some(cfg) = &req.collapse {
        key += &format!("/collapse/seed={}/budget={}/restarts={}", cfg.seed, cfg.budget, cfg.restarts);
    }
    if req.dot {
        key += "/dot";
    }
    cache.get_or_compute(&key, || {
        let d = DeltaComplex::build(req.genus)?;
        let mut out = serde_json::Map::new();
        out.insert("genus".into(), json!(req.genus));
        out.insert("cells".into(), json!(d.counts().coeffs()));
        let (dim, pure) = d.dimension_and_purity();
        out.insert("dimension".into(), json!(dim));
        for check in &req.checks {
            match check {
                Check::Purity => {
                    out.insert("pure".into(), json!(pure));
                }
                Check::Connectivity => {
                    out.insert("connected".into(), json!(d.is_connected()));
                }
                Check::Euler => {
                    out.insert("euler".into(), json!(d.euler_characteristic()));
                }
                Check::Identities => {
                    d.check_facet_identities()?;
                    d.check_simplex_vertices()?;
                    d.check_forest_condition()?;
                    out.insert("identities".into(), json!("ok"));
                }
            }
        }
        if let Some(cfg) = &req.collapse {
            let poset = d.face_poset();
            let value = match collapse_search(&poset, cfg) {
                CollapseVerdict::Collapsible(cert) => {
                    verify_certificate(&poset, &cert)?;
                    json!({
                        "verdict": "collapsible",
                        "seed": cfg.seed,
                        "survivor": cert.survivor,
                        "steps": cert.steps.len(),
                        "certificate": cert.steps,
                    })
                }
                CollapseVerdict::Unknown { remaining } => json!({
                    "verdict": "unknown",
                    "seed": cfg.seed,
                    "remaining": remaining,
                }),
            };
            out.insert("collapse".into(), value);
        }
        if req.dot {
            out.insert("dot".into(), json!(d.to_dot()));
        }
        Ok(Value::Object(out))
    })
}

fn cell_label(kind: CellKind) -> String {
    match kind {
        CellKind::Vertex(v) => format!("v{v}"),
        CellKind::Midpoint(e) => format!("m{e}"),
        CellKind::Edge(e) => format!("e{e}"),
        CellKind::Half(h) => format!("h{h}"),
    }
}

/// Decodes a class given on the command line and checks that it names a
/// forest-filtered stable graph of the requested genus.
pub fn parse_class(hex: &str, genus: usize) -> Result<FilteredGraph, CliError> {
    let form: CanonicalForm = hex.parse().map_err(|e| CliError::Usage(format!("bad --class: {e}")))?;
    let fg = form.decode().map_err(|e| CliError::Usage(format!("bad --class: {e}")))?;
    let g = fg.graph();
    if g.genus() != genus {
        return Err(CliError::Usage(format!("class has genus {}, not {genus}", g.genus())));
    }
    if !g.is_stable() || !fg.is_filtered_by_forests() {
        return Err(CliError::Usage("class is not a forest-filtered stable graph".into()));
    }
    Ok(fg)
}

pub fn fiber(cache: &Cache, genus: usize, class: &str, n: usize, orbits: bool) -> Result<Value, CliError> {
    let fg = parse_class(class, genus)?;
    let hex = class.to_ascii_lowercase();
    cache.get_or_compute(&format!("fiber/{hex}/n={n}/orbits={orbits}"), || {
        let s = SubdividedGraph::new(&fg);
        let poly = s.fiber_poly(n as u32)?;
        let mut out = json!({
            "canonical": hex,
            "genus": genus,
            "n": n,
            "depth": fg.depth(),
            "autOrder": s.group().order(),
            "poly": poly.coeffs(),
            "euler": poly.euler(),
        });
        if orbits {
            let table: Vec<Value> = s
                .cube_orbits(n)
                .into_iter()
                .map(|o| {
                    let cells: Vec<String> = o.cells.iter().map(|&c| cell_label(s.kind(c))).collect();
                    json!({ "dim": o.dim, "cells": cells })
                })
                .collect();
            out["orbits"] = Value::Array(table);
        }
        Ok(out)
    })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SpaceSelection {
    pub poly: bool,
    pub euler: bool,
    pub homology: bool,
    pub asymptotic: bool,
}

impl SpaceSelection {
    fn any(self) -> bool {
        self.poly || self.euler || self.homology || self.asymptotic
    }

    fn count(self) -> usize {
        [self.poly, self.euler, self.homology, self.asymptotic].iter().filter(|&&b| b).count()
    }
}

/// With no selection the full record; with one selection the bare value;
/// with several an object holding just those.
pub fn space(cache: &Cache, genus: usize, n: usize, sel: SpaceSelection) -> Result<Value, CliError> {
    let key = format!(
        "space/g={genus}/n={n}/poly={}/euler={}/homology={}/asymptotic={}",
        sel.poly, sel.euler, sel.homology, sel.asymptotic
    );
    cache.get_or_compute(&key, || {
        let delta = DeltaComplex::build(genus)?;
        if !sel.any() {
            let poly = total_poly(&delta, n as u32)?;
            let x = CwComplex::from_delta(delta, n)?;
            return Ok(json!({
                "cells": x.counts().coeffs(),
                "betti": x.betti(),
                "euler": x.euler(),
                "poly": poly.coeffs(),
            }));
        }
        let mut out = serde_json::Map::new();
        if sel.poly {
            out.insert("poly".into(), json!(total_poly(&delta, n as u32)?.coeffs()));
        }
        if sel.euler {
            out.insert("euler".into(), json!(euler_x(&delta, n as u32)?));
        }
        if sel.asymptotic {
            let a = asymptotic_coefficient(&delta, genus as i64 + 1)?;
            out.insert("asymptotic".into(), serde_json::to_value(a).map_err(CliError::from_json)?);
        }
        if sel.homology {
            out.insert("betti".into(), json!(CwComplex::from_delta(delta, n)?.betti()));
        }
        if sel.count() == 1 {
            Ok(out.into_iter().next().map(|(_, v)| v).unwrap_or(Value::Null))
        } else {
            Ok(Value::Object(out))
        }
    })
}

/// One row per `n` in `0..=max_n`.
pub fn sweep(cache: &Cache, genus: usize, max_n: usize, homology: bool) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    for n in 0..=max_n {
        let sel = SpaceSelection {
            poly: true,
            euler: true,
            homology,
            asymptotic: false,
        };
        let mut row = space(cache, genus, n, sel)?;
        row["n"] = json!(n);
        rows.push(row);
    }
    Ok(Value::Array(rows))
}

/// The claim table and whether every checked claim passed.
pub fn reproduce(cache: &Cache, explore: bool) -> Result<(Value, bool), CliError> {
    let table = cache.get_or_compute(&format!("reproduce/explore={explore}"), || {
        let claims = reproduce_all(explore)?;
        serde_json::to_value(claims).map_err(CliError::from_json)
    })?;
    let fail = serde_json::to_value(Status::Fail).map_err(CliError::from_json)?;
    let ok = table.as_array().is_some_and(|rows| rows.iter().all(|r| r["status"] != fail));
    Ok((table, ok))
}
