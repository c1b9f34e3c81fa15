//! JSON and DOT renderings. Every JSON document carries `"schema": 1`.

use std::fmt::Write as _;

use orthologic::checks::{FullReport, Property, PropertyReport};
use orthologic::model::{EventRef, SetInequality};
use orthologic::OrthoLattice;
use serde::Serialize;

pub const SCHEMA: u32 = 1;

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialises")
}

#[derive(Serialize)]
pub struct CheckOutput<'a> {
    pub schema: u32,
    pub command: &'static str,
    pub report: &'a FullReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required: Option<&'a [Property]>,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct EmbedOutput<'a> {
    pub schema: u32,
    pub command: &'static str,
    pub lattice: &'a str,
    pub dim: usize,
    pub tolerance: f64,
    pub report: &'a PropertyReport,
}

#[derive(Serialize)]
pub struct LatticeJson {
    name: String,
    elements: Vec<String>,
    covers: Vec<(String, String)>,
    complements: Vec<(String, String)>,
}

fn lattice_json(l: &OrthoLattice) -> LatticeJson {
    let pair = |(a, b): (orthologic::Elem, orthologic::Elem)| {
        (l.label(a).to_string(), l.label(b).to_string())
    };
    LatticeJson {
        name: l.name().to_string(),
        elements: l.labels().to_vec(),
        covers: l.covers().pairs.into_iter().map(pair).collect(),
        complements: l.complement_pairs().into_iter().map(pair).collect(),
    }
}

#[derive(Serialize)]
pub struct HasseOutput {
    schema: u32,
    command: &'static str,
    lattice: LatticeJson,
}

pub fn hasse_output(l: &OrthoLattice) -> HasseOutput {
    HasseOutput {
        schema: SCHEMA,
        command: "hasse",
        lattice: lattice_json(l),
    }
}

#[derive(Serialize)]
pub struct ClassJson {
    event: String,
    element: String,
}

#[derive(Serialize)]
pub struct SetsJson {
    p_plus: String,
    q_plus: String,
    q_minus: String,
    p_plus_set: Vec<String>,
    with_q_plus: Vec<String>,
    with_q_minus: Vec<String>,
    union: Vec<String>,
    differs: bool,
}

#[derive(Serialize)]
pub struct ModelOutput {
    schema: u32,
    command: &'static str,
    lattice: LatticeJson,
    classes: Vec<ClassJson>,
    set_inequality: Option<SetsJson>,
}

pub fn model_output(
    l: &OrthoLattice,
    classes: &[(EventRef, String)],
    sets: Option<&SetInequality>,
) -> ModelOutput {
    let names = |s: &std::collections::BTreeSet<orthologic::model::ManifoldId>| {
        s.iter().map(|m| m.0.clone()).collect::<Vec<_>>()
    };
    ModelOutput {
        schema: SCHEMA,
        command: "model",
        lattice: lattice_json(l),
        classes: classes
            .iter()
            .map(|(e, el)| ClassJson {
                event: e.to_string(),
                element: el.clone(),
            })
            .collect(),
        set_inequality: sets.map(|s| SetsJson {
            p_plus: s.p_plus.to_string(),
            q_plus: s.q_plus.to_string(),
            q_minus: s.q_minus.to_string(),
            p_plus_set: names(&s.p_plus_set),
            with_q_plus: names(&s.with_q_plus),
            with_q_minus: names(&s.with_q_minus),
            union: names(&s.union),
            differs: s.differs,
        }),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram as a bottom-up DOT digraph.
pub fn dot(l: &OrthoLattice) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(l.name())).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for label in l.labels() {
        writeln!(out, "  {};", quote(label)).unwrap();
    }
    for (a, b) in l.covers().pairs {
        writeln!(out, "  {} -> {};", quote(l.label(a)), quote(l.label(b))).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
