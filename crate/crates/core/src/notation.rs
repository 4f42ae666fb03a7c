//! ASCII rendering of functional graphs: `(+)` for disjoint union, `kx` for
//! k copies, `Cyc(m,T)` for a cycle carrying `T` at every vertex, `Cyc(m)`
//! when `T` is a single vertex, and `{T}` for a lone fixed point carrying
//! `T`.

use crate::fgraph::{Component, FunctionalGraph};
use crate::tree::{RootedTree, TreeExpr};

/// Components are listed by multiplicity, then cycle length, then larger
/// trees first.
pub fn render(g: &FunctionalGraph, name: impl Fn(&RootedTree) -> TreeExpr) -> String {
    let mut parts: Vec<(&Component, u64)> = g.components().collect();
    parts.sort_by(|(a, ka), (b, kb)| {
        ka.cmp(kb)
            .then(a.cycle_length().cmp(&b.cycle_length()))
            .then(b.vertex_count().cmp(&a.vertex_count()))
    });
    if parts.is_empty() {
        return "0".to_string();
    }
    let rendered: Vec<String> = parts
        .into_iter()
        .map(|(c, k)| render_component(c, k, &name))
        .collect();
    rendered.join(" (+) ")
}

fn render_component(c: &Component, k: u64, name: &impl Fn(&RootedTree) -> TreeExpr) -> String {
    let m = c.cycle_length();
    let body = match c.regular_tree() {
        Some(tree) if m == 1 && k == 1 => format!("{{{}}}", name(tree)),
        Some(tree) if tree.is_leaf() => format!("Cyc({m})"),
        Some(tree) => format!("Cyc({m},{})", name(tree)),
        None => {
            let trees: Vec<String> = c.trees().iter().map(|t| name(t).to_string()).collect();
            format!("Cyc({m};{})", trees.join(","))
        }
    };
    if k == 1 {
        body
    } else {
        format!("{k}x{body}")
    }
}

/// Render with generic tree names.
pub fn render_plain(g: &FunctionalGraph) -> String {
    render(g, TreeExpr::describe)
}
