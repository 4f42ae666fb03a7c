//! Exact decomposition of an explicit self-map into components.

use std::collections::HashMap;

use serde::Serialize;

use super::{Component, FunctionalGraph};
use crate::error::{Error, Result};
use crate::tree::canon::{emit, label_forest, Csr};
use crate::tree::RootedTree;

/// Orbit shape of one vertex: distance to its cycle and that cycle's length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    pub preperiod: u32,
    pub period: u32,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub graph: FunctionalGraph,
    pub orbits: Vec<OrbitInfo>,
    /// For each vertex, the cycle vertex whose tree contains it.
    pub root: Vec<usize>,
    /// The tree hanging at each periodic vertex (`None` for transient ones).
    pub trees: Vec<Option<RootedTree>>,
}

impl Decomposition {
    pub fn tree_at(&self, v: usize) -> Option<&RootedTree> {
        self.trees.get(v)?.as_ref()
    }
}

const UNSEEN: u8 = 0;
const ON_PATH: u8 = 1;
const DONE: u8 = 2;

/// Decompose the functional graph with successor table `succ`.
pub fn decompose(succ: &[usize]) -> Result<Decomposition> {
    let n = succ.len();
    if let Some(v) = succ.iter().position(|&s| s >= n) {
        return Err(Error::domain(format!(
            "map sends {v} to {} outside 0..{n}",
            succ[v]
        )));
    }

    let mut state = vec![UNSEEN; n];
    let mut on_cycle = vec![false; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut pos = vec![usize::MAX; n];
    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut v = start;
        while state[v] == UNSEEN {
            state[v] = ON_PATH;
            pos[v] = path.len();
            path.push(v);
            v = succ[v];
        }
        if state[v] == ON_PATH {
            let cycle = path[pos[v]..].to_vec();
            for &c in &cycle {
                on_cycle[c] = true;
            }
            cycles.push(cycle);
        }
        for &p in &path {
            state[p] = DONE;
        }
    }

    let parents: Vec<Option<usize>> = (0..n)
        .map(|v| if on_cycle[v] { None } else { Some(succ[v]) })
        .collect();
    let csr = Csr::from_parents(&parents);

    let mut orbits = vec![
        OrbitInfo {
            preperiod: 0,
            period: 0
        };
        n
    ];
    let mut root = vec![0usize; n];
    let mut queue: Vec<usize> = Vec::with_capacity(n);
    for cycle in &cycles {
        for &c in cycle {
            orbits[c].period = cycle.len() as u32;
            root[c] = c;
            queue.push(c);
        }
    }
    let periodic: Vec<usize> = queue.clone();
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &c in csr.children(v) {
            orbits[c] = OrbitInfo {
                preperiod: orbits[v].preperiod + 1,
                period: orbits[v].period,
            };
            root[c] = root[v];
            queue.push(c);
        }
    }

    let labels = label_forest(&csr, &periodic);
    let mut cache: HashMap<u32, RootedTree> = HashMap::new();
    let mut trees: Vec<Option<RootedTree>> = vec![None; n];
    for &c in &periodic {
        let tree = cache
            .entry(labels.label[c])
            .or_insert_with(|| RootedTree::from_canonical(emit(&csr, &labels, c)))
            .clone();
        trees[c] = Some(tree);
    }

    let mut graph = FunctionalGraph::empty();
    for cycle in &cycles {
        let ts: Vec<RootedTree> = cycle.iter().map(|&c| trees[c].clone().unwrap()).collect();
        graph.add_component(Component::new(ts)?, 1)?;
    }
    Ok(Decomposition {
        graph,
        orbits,
        root,
        trees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_shapes() {
        // 3 -> 2 -> 0 <-> 1, 4 -> 4
        let d = decompose(&[1, 0, 0, 2, 4]).unwrap();
        let pre: Vec<u32> = d.orbits.iter().map(|o| o.preperiod).collect();
        let per: Vec<u32> = d.orbits.iter().map(|o| o.period).collect();
        assert_eq!(pre, [0, 0, 1, 2, 0]);
        assert_eq!(per, [2, 2, 2, 2, 1]);
        assert_eq!(d.root[3], 0);
        assert_eq!(d.tree_at(0).unwrap().node_count(), 3);
        assert!(d.tree_at(2).is_none());
        assert_eq!(d.graph.component_count(), 2);
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n: usize = 300_000;
        let succ: Vec<usize> = (0..n).map(|v| v.saturating_sub(1)).collect();
        let d = decompose(&succ).unwrap();
        assert_eq!(d.orbits[n - 1].preperiod as usize, n - 1);
        assert_eq!(d.tree_at(0).unwrap().depth(), n - 1);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(decompose(&[0, 5]).is_err());
    }
}
