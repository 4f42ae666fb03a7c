//! JSON summaries and Graphviz DOT output for functional graphs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Component, FunctionalGraph};
use crate::error::{Error, Result};
use crate::tree::RootedTree;

/// One component class of a graph. `tree_code` describes the tree hanging at
/// every cycle vertex; for the rare component whose cycle carries
/// non-isomorphic trees, `cycle_tree_codes` lists them in cycle order and
/// `tree_code` holds the first one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub multiplicity: u64,
    pub cycle_length: usize,
    pub tree_code: RootedTree,
    pub tree_node_count: usize,
    pub tree_depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_tree_codes: Option<Vec<RootedTree>>,
}

pub fn summary(g: &FunctionalGraph) -> Vec<ComponentSummary> {
    g.components()
        .map(|(c, k)| {
            let first = &c.trees()[0];
            ComponentSummary {
                multiplicity: k,
                cycle_length: c.cycle_length(),
                tree_code: first.clone(),
                tree_node_count: first.node_count(),
                tree_depth: first.depth(),
                cycle_tree_codes: c.regular_tree().is_none().then(|| c.trees().to_vec()),
            }
        })
        .collect()
}

/// Rebuild a graph from its summary, checking the redundant fields.
pub fn from_summary(parts: &[ComponentSummary]) -> Result<FunctionalGraph> {
    let mut g = FunctionalGraph::empty();
    for p in parts {
        let c = match &p.cycle_tree_codes {
            Some(trees) => {
                if trees.len() != p.cycle_length {
                    return Err(Error::domain(
                        "cycle_tree_codes length differs from cycle_length",
                    ));
                }
                Component::new(trees.clone())?
            }
            None => Component::regular(p.cycle_length, &p.tree_code)?,
        };
        if p.tree_code.node_count() != p.tree_node_count || p.tree_code.depth() != p.tree_depth {
            return Err(Error::domain(format!(
                "summary of {} disagrees with its node count or depth",
                p.tree_code
            )));
        }
        g.add_component(c, p.multiplicity)?;
    }
    Ok(g)
}

/// Graphviz rendering: one cluster per component copy, components in
/// canonical order, vertices numbered as in [`FunctionalGraph::to_successors`].
pub fn to_dot(g: &FunctionalGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\""));
    let _ = writeln!(out, "  node [shape=point];");
    let mut base = 0usize;
    let mut cluster = 0usize;
    for (c, k) in g.components() {
        let local = c.successors();
        for _ in 0..k {
            let _ = writeln!(out, "  subgraph cluster_{cluster} {{");
            let _ = writeln!(out, "    label=\"Cyc({})\";", c.cycle_length());
            for (v, s) in local.iter().enumerate() {
                let _ = writeln!(out, "    v{} -> v{};", base + v, base + s);
            }
            let _ = writeln!(out, "  }}");
            base += local.len();
            cluster += 1;
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Sequence;
    use crate::fgraph::cyc;

    #[test]
    fn summary_roundtrip() {
        let t42 = RootedTree::elementary(&Sequence::new(vec![4, 2]).unwrap());
        let mut g = cyc(1, &t42).unwrap();
        g.union_with(&cyc(2, &t42).unwrap().replicate(4).unwrap())
            .unwrap();
        let json = serde_json::to_string(&summary(&g)).unwrap();
        let back: Vec<ComponentSummary> = serde_json::from_str(&json).unwrap();
        assert_eq!(from_summary(&back).unwrap(), g);
        assert!(json.contains("\"tree_node_count\":8"));
    }

    #[test]
    fn irregular_summary_roundtrip() {
        let c =
            Component::new(vec![RootedTree::leaf(), RootedTree::parse("(())").unwrap()]).unwrap();
        let mut g = FunctionalGraph::empty();
        g.add_component(c, 3).unwrap();
        let back = from_summary(&summary(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dot_is_stable() {
        let g = FunctionalGraph::cycle(2).unwrap().replicate(2).unwrap();
        let dot = to_dot(&g, "x");
        assert_eq!(dot, to_dot(&g.clone(), "x"));
        assert_eq!(dot.matches("->").count(), 4);
        assert_eq!(dot.matches("subgraph").count(), 2);
    }
}
