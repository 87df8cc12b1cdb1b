//! Task tree files and Graphviz rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::graph::FoonGraph;
use crate::model::ObjectKey;
use crate::parser::write_unit;
use crate::tree::TaskTree;

/// Writes the tree's units in execution order using the subgraph format,
/// preceded by a `#` header that `parse_subgraph` skips.
pub fn write_task_tree(graph: &FoonGraph, tree: &TaskTree) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# task tree ({}): {} functional unit{}",
        tree.stats.algorithm.short_name(),
        tree.steps.len(),
        if tree.steps.len() == 1 { "" } else { "s" }
    );
    for &step in &tree.steps {
        write_unit(&mut out, graph.unit(step));
    }
    out
}

const INPUT_COLOR: &str = "palegreen";
const OUTPUT_COLOR: &str = "plum";
const BOTH_COLOR: &str = "lightblue";
const MOTION_COLOR: &str = "tomato";

#[derive(Default, Clone, Copy)]
struct Role {
    input: bool,
    output: bool,
}

fn object_id(key: &ObjectKey) -> String {
    let mut hasher = Sha256::new();
    hasher.update(key.name.as_bytes());
    for s in &key.states {
        hasher.update([0x1f]);
        hasher.update(s.as_bytes());
    }
    hasher.update([0x1e]);
    for i in &key.ingredients {
        hasher.update([0x1f]);
        hasher.update(i.as_bytes());
    }
    let digest = hasher.finalize();
    let mut id = String::from("o_");
    for byte in &digest[..8] {
        let _ = write!(id, "{byte:02x}");
    }
    id
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn object_label(key: &ObjectKey) -> String {
    let mut label = key.name.clone();
    if !key.states.is_empty() {
        label.push('\n');
        label.push_str(&key.states.join(", "));
    }
    if !key.ingredients.is_empty() {
        label.push('\n');
        label.push('{');
        label.push_str(&key.ingredients.join(", "));
        label.push('}');
    }
    label
}

/// Renders units as a DOT digraph. Objects are ellipses, drawn once per key:
/// green when only consumed, purple when only produced, blue when both.
/// Motions are red boxes with id `m<unit index>`. With a tree, only the
/// tree's units are drawn.
pub fn to_dot(graph: &FoonGraph, tree: Option<&TaskTree>) -> String {
    let units: Vec<usize> = match tree {
        Some(t) => t.steps.clone(),
        None => (0..graph.len()).collect(),
    };

    let mut roles: BTreeMap<ObjectKey, Role> = BTreeMap::new();
    for &u in &units {
        for key in graph.unit(u).input_keys() {
            roles.entry(key).or_default().input = true;
        }
        for key in graph.unit(u).output_keys() {
            roles.entry(key).or_default().output = true;
        }
    }
    let ids: BTreeMap<&ObjectKey, String> = roles.keys().map(|k| (k, object_id(k))).collect();

    let mut out = String::from("digraph foon {\n");
    if !units.is_empty() {
        out.push_str("  rankdir=TB;\n");
    }
    let mut objects: Vec<(&String, &ObjectKey, Role)> = roles.iter().map(|(k, r)| (&ids[k], k, *r)).collect();
    objects.sort_by(|a, b| a.0.cmp(b.0));
    for (id, key, role) in objects {
        let color = match (role.input, role.output) {
            (true, true) => BOTH_COLOR,
            (true, false) => INPUT_COLOR,
            _ => OUTPUT_COLOR,
        };
        let _ = writeln!(
            out,
            "  {id} [shape=ellipse, style=filled, fillcolor={color}, label={}];",
            quote(&object_label(key))
        );
    }
    for &u in &units {
        let unit = graph.unit(u);
        let _ = writeln!(
            out,
            "  m{u} [shape=box, style=filled, fillcolor={MOTION_COLOR}, label={}];",
            quote(unit.motion().name())
        );
    }
    for &u in &units {
        let unit = graph.unit(u);
        let inputs: BTreeSet<ObjectKey> = unit.input_keys().collect();
        for key in &inputs {
            let _ = writeln!(out, "  {} -> m{u};", ids[key]);
        }
        let outputs: BTreeSet<ObjectKey> = unit.output_keys().collect();
        for key in &outputs {
            let _ = writeln!(out, "  m{u} -> {};", ids[key]);
        }
    }
    out.push_str("}\n");
    out
}
