//! Brute-force ground truth: enumerate the power map on every element and
//! decompose it.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgraph::export::{summary, ComponentSummary};
use crate::fgraph::{decompose, Decomposition, FunctionalGraph};
use crate::groups::{center, power, FiniteGroup, GroupSpec};
use crate::notation;
use crate::structural::{describe_spec, Provenance};
use crate::tree::RootedTree;

/// Successor table of `g -> g^t`.
pub fn power_map(group: &dyn FiniteGroup, t: u64) -> Result<Vec<usize>> {
    if t == 0 {
        return Err(Error::domain("t must be positive"));
    }
    Ok((0..group.order())
        .into_par_iter()
        .map(|g| power(group, g, t))
        .collect())
}

pub fn brute_force(group: &dyn FiniteGroup, t: u64) -> Result<Decomposition> {
    decompose(&power_map(group, t)?)
}

pub fn brute_force_graph(group: &dyn FiniteGroup, t: u64) -> Result<FunctionalGraph> {
    Ok(brute_force(group, t)?.graph)
}

/// Number of periodic points carrying each hanging tree.
pub fn tree_census(group: &dyn FiniteGroup, t: u64) -> Result<BTreeMap<RootedTree, u64>> {
    Ok(brute_force_graph(group, t)?.tree_census())
}

/// Whether every periodic central element carries the same tree as the
/// identity.
pub fn center_is_regular(group: &dyn FiniteGroup, d: &Decomposition) -> bool {
    let e = d.tree_at(group.identity());
    center(group)
        .into_iter()
        .filter(|&z| d.orbits[z].preperiod == 0)
        .all(|z| d.tree_at(z) == e)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructuralReport {
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flower_type: Option<String>,
    pub notation: String,
    pub components: Vec<ComponentSummary>,
    pub vertices: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: GroupSpec,
    pub name: String,
    pub t: u64,
    pub order: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    pub brute_force: Vec<ComponentSummary>,
    pub brute_force_vertices: u64,
    pub brute_force_ms: f64,
    /// `None` when no structural description applies.
    pub isomorphic: Option<bool>,
    pub distinct_trees: usize,
    pub periodic_points: u64,
}

pub const NO_THEOREM: &str = "no structural theorem applies; showing the brute-force graph only";

/// Compute the structural description (when one applies) and the
/// brute-force graph, and compare them.
pub fn verify(
    spec: &GroupSpec,
    t: u64,
) -> Result<(VerifyReport, Option<FunctionalGraph>, FunctionalGraph)> {
    let group = spec.build()?;
    verify_group(spec, group.as_ref(), t)
}

pub fn verify_group(
    spec: &GroupSpec,
    group: &dyn FiniteGroup,
    t: u64,
) -> Result<(VerifyReport, Option<FunctionalGraph>, FunctionalGraph)> {
    let start = Instant::now();
    let structural = describe_spec(spec, group, t)?;
    let structural_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let brute = brute_force_graph(group, t)?;
    let brute_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = VerifyReport {
        group: spec.clone(),
        name: group.name(),
        t,
        order: group.order() as u64,
        structural: structural.as_ref().map(|s| StructuralReport {
            provenance: s.provenance,
            flower_type: s.flower_type.as_ref().map(|f| f.to_string()),
            notation: notation::render(&s.graph, |tree| s.name_of(tree)),
            components: summary(&s.graph),
            vertices: s.graph.vertex_count(),
            elapsed_ms: structural_ms,
        }),
        notice: structural.is_none().then(|| NO_THEOREM.to_string()),
        brute_force: summary(&brute),
        brute_force_vertices: brute.vertex_count(),
        brute_force_ms: brute_ms,
        isomorphic: structural.as_ref().map(|s| s.graph.is_isomorphic(&brute)),
        distinct_trees: brute.distinct_trees().len(),
        periodic_points: brute.periodic_count(),
    };
    Ok((report, structural.map(|s| s.graph), brute))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Sequence;
    use crate::fgraph::cyc;
    use crate::groups::{Cyclic, Quaternion, UnitsMod};
    use crate::structural::abelian_graph;

    #[test]
    fn brute_force_examples() {
        let t22 = RootedTree::elementary(&Sequence::new(vec![2, 2]).unwrap());
        assert_eq!(
            brute_force_graph(&Cyclic::new(4).unwrap(), 2).unwrap(),
            cyc(1, &t22).unwrap()
        );
        let units = UnitsMod::new(91).unwrap();
        assert_eq!(
            brute_force_graph(&units, 14).unwrap(),
            abelian_graph(&[6, 12], 14).unwrap()
        );
        let q = Quaternion::new(6).unwrap();
        let id = FunctionalGraph::cycle(1).unwrap().replicate(24).unwrap();
        assert_eq!(brute_force_graph(&q, 13).unwrap(), id);
        assert!(power_map(&q, 0).is_err());
    }

    #[test]
    fn census_examples() {
        assert_eq!(tree_census(&Cyclic::new(6).unwrap(), 2).unwrap().len(), 1);
        assert_eq!(
            tree_census(&UnitsMod::new(91).unwrap(), 14).unwrap().len(),
            1
        );
    }

    #[test]
    fn verify_examples() {
        let (r, _, _) = verify(&"quaternion:24".parse().unwrap(), 3).unwrap();
        assert_eq!(r.isomorphic, Some(true));
        assert_eq!(
            r.structural.unwrap().notation,
            "Cyc(2,T(3)) (+) 2xCyc(1,T(3)) (+) 6xCyc(2)"
        );
        let (r, _, _) = verify(&"pgl2:5".parse().unwrap(), 2).unwrap();
        assert_eq!((r.isomorphic, r.distinct_trees), (Some(true), 3));
        let (r, s, _) = verify(&"abelian:2x4x4".parse().unwrap(), 2).unwrap();
        assert_eq!(r.isomorphic, Some(true));
        assert!(s.is_some());
    }

    #[test]
    fn center_regularity() {
        let q = Quaternion::new(6).unwrap();
        for t in 1..=12 {
            assert!(center_is_regular(&q, &brute_force(&q, t).unwrap()));
        }
    }
}
