//! Functional graphs up to isomorphism.
//!
//! A connected functional graph is a cycle with a rooted tree hanging at each
//! cycle vertex. A [`Component`] stores those trees in cycle order, rotated
//! to the lexicographically least rotation, so equal components are exactly
//! isomorphic ones. A [`FunctionalGraph`] is a multiset of components.

mod decompose;
pub mod export;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::tree::RootedTree;

pub use decompose::{decompose, Decomposition, OrbitInfo};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    trees: Vec<RootedTree>,
}

/// Start index of the lexicographically least rotation.
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => {
                i += k + 1;
                if i <= j {
                    i = j + 1;
                }
                k = 0;
            }
            std::cmp::Ordering::Less => {
                j += k + 1;
                if j <= i {
                    j = i + 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

impl Component {
    /// A component from the trees hanging at consecutive cycle vertices.
    pub fn new(mut trees: Vec<RootedTree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::domain("a component needs a cycle of length >= 1"));
        }
        if trees.windows(2).any(|w| w[0] != w[1]) {
            let r = least_rotation(&trees);
            trees.rotate_left(r);
        }
        Ok(Component { trees })
    }

    /// `Cyc(m, T)` as a single component.
    pub fn regular(m: usize, tree: &RootedTree) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("cycle length must be >= 1"));
        }
        Ok(Component {
            trees: vec![tree.clone(); m],
        })
    }

    pub fn cycle_length(&self) -> usize {
        self.trees.len()
    }

    /// Trees in cycle order, starting from the canonical rotation.
    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    /// The common tree if every cycle vertex carries an isomorphic tree.
    pub fn regular_tree(&self) -> Option<&RootedTree> {
        let first = &self.trees[0];
        self.trees.iter().all(|t| t == first).then_some(first)
    }

    pub fn vertex_count(&self) -> u64 {
        self.trees.iter().map(|t| t.node_count() as u64).sum()
    }

    /// Successor table of this component alone. Vertices are numbered tree
    /// by tree along the cycle, each tree in preorder with its cycle vertex
    /// first.
    pub fn successors(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.trees.len());
        let mut total = 0usize;
        for t in &self.trees {
            offsets.push(total);
            total += t.node_count();
        }
        let m = self.trees.len();
        let mut succ = vec![0usize; total];
        for (i, t) in self.trees.iter().enumerate() {
            let base = offsets[i];
            for (v, p) in t.parents().into_iter().enumerate() {
                succ[base + v] = match p {
                    Some(p) => base + p,
                    None => offsets[(i + 1) % m],
                };
            }
        }
        succ
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.regular_tree() {
            Some(t) => write!(f, "Cyc({}, {})", self.trees.len(), t.canonical_code()),
            None => f
                .debug_list()
                .entries(self.trees.iter().map(|t| t.canonical_code()))
                .finish(),
        }
    }
}

/// A functional graph up to isomorphism: a multiset of components.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FunctionalGraph {
    components: BTreeMap<Component, u64>,
}

impl FunctionalGraph {
    pub fn empty() -> Self {
        FunctionalGraph::default()
    }

    /// `Cyc(m, T)`. `Cyc(1, T)` is the tree with a loop at its root.
    pub fn cyc(m: usize, tree: &RootedTree) -> Result<Self> {
        let mut g = FunctionalGraph::empty();
        g.add_component(Component::regular(m, tree)?, 1)?;
        Ok(g)
    }

    /// `Cyc(m) = Cyc(m, *)`.
    pub fn cycle(m: usize) -> Result<Self> {
        FunctionalGraph::cyc(m, &RootedTree::leaf())
    }

    pub fn add_component(&mut self, c: Component, multiplicity: u64) -> Result<()> {
        if multiplicity == 0 {
            return Ok(());
        }
        let slot = self.components.entry(c).or_insert(0);
        *slot = slot
            .checked_add(multiplicity)
            .ok_or(Error::Overflow("component multiplicity"))?;
        Ok(())
    }

    /// Disjoint union (`(+)`).
    pub fn disjoint_union<'a>(
        graphs: impl IntoIterator<Item = &'a FunctionalGraph>,
    ) -> Result<Self> {
        let mut out = FunctionalGraph::empty();
        for g in graphs {
            out.union_with(g)?;
        }
        Ok(out)
    }

    pub fn union_with(&mut self, other: &FunctionalGraph) -> Result<()> {
        for (c, k) in &other.components {
            self.add_component(c.clone(), *k)?;
        }
        Ok(())
    }

    /// `k x G`.
    pub fn replicate(&self, k: u64) -> Result<Self> {
        let mut out = FunctionalGraph::empty();
        for (c, m) in &self.components {
            let km = m.checked_mul(k).ok_or(Error::Overflow("replicate"))?;
            out.add_component(c.clone(), km)?;
        }
        Ok(out)
    }

    /// Tensor (categorical) product: pairs of vertices, each mapped
    /// coordinatewise. Computed per pair of components on the explicit
    /// product map.
    pub fn tensor(&self, other: &FunctionalGraph) -> Result<Self> {
        let mut out = FunctionalGraph::empty();
        let right: Vec<(Vec<usize>, u64)> = other
            .components
            .iter()
            .map(|(c, k)| (c.successors(), *k))
            .collect();
        for (c1, k1) in &self.components {
            let s1 = c1.successors();
            for (s2, k2) in &right {
                let n2 = s2.len();
                let n = s1
                    .len()
                    .checked_mul(n2)
                    .ok_or(Error::Overflow("tensor size"))?;
                let mut succ = vec![0usize; n];
                for (a, &fa) in s1.iter().enumerate() {
                    for (b, &fb) in s2.iter().enumerate() {
                        succ[a * n2 + b] = fa * n2 + fb;
                    }
                }
                let part = decompose(&succ)?.graph;
                let k = k1
                    .checked_mul(*k2)
                    .ok_or(Error::Overflow("tensor multiplicity"))?;
                out.union_with(&part.replicate(k)?)?;
            }
        }
        Ok(out)
    }

    /// Decompose the functional graph of `f` on `0..n`.
    pub fn from_map(n: usize, f: impl FnMut(usize) -> usize) -> Result<Self> {
        let succ: Vec<usize> = (0..n).map(f).collect();
        Ok(decompose(&succ)?.graph)
    }

    pub fn from_successors(succ: &[usize]) -> Result<Self> {
        Ok(decompose(succ)?.graph)
    }

    pub fn is_isomorphic(&self, other: &FunctionalGraph) -> bool {
        self == other
    }

    /// Canonical text form: components in canonical order, each as
    /// `multiplicity*[tree code, ...]`.
    pub fn canonical_form(&self) -> String {
        let mut s = String::new();
        for (i, (c, k)) in self.components.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(&format!("{k}*["));
            for (j, t) in c.trees.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&t.to_string());
            }
            s.push(']');
        }
        s
    }

    pub fn components(&self) -> impl Iterator<Item = (&Component, u64)> {
        self.components.iter().map(|(c, k)| (c, *k))
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_count(&self) -> u64 {
        self.components.values().sum()
    }

    pub fn vertex_count(&self) -> u64 {
        self.components
            .iter()
            .map(|(c, k)| c.vertex_count() * k)
            .sum()
    }

    pub fn periodic_count(&self) -> u64 {
        self.components
            .iter()
            .map(|(c, k)| c.cycle_length() as u64 * k)
            .sum()
    }

    /// Number of periodic points carrying each isomorphism class of tree.
    pub fn tree_census(&self) -> BTreeMap<RootedTree, u64> {
        let mut census = BTreeMap::new();
        for (c, k) in &self.components {
            for t in &c.trees {
                *census.entry(t.clone()).or_insert(0) += k;
            }
        }
        census
    }

    pub fn distinct_trees(&self) -> BTreeSet<RootedTree> {
        self.tree_census().into_keys().collect()
    }

    /// An explicit successor table realizing this graph, components in
    /// canonical order.
    pub fn to_successors(&self) -> Vec<usize> {
        let mut succ = Vec::new();
        for (c, k) in &self.components {
            let local = c.successors();
            for _ in 0..*k {
                let base = succ.len();
                succ.extend(local.iter().map(|&v| v + base));
            }
        }
        succ
    }
}

impl fmt::Debug for FunctionalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.components.iter().map(|(c, k)| (k, c)))
            .finish()
    }
}

pub fn cyc(m: usize, tree: &RootedTree) -> Result<FunctionalGraph> {
    FunctionalGraph::cyc(m, tree)
}

pub fn disjoint_union(graphs: &[FunctionalGraph]) -> Result<FunctionalGraph> {
    FunctionalGraph::disjoint_union(graphs)
}

pub fn replicate(k: u64, g: &FunctionalGraph) -> Result<FunctionalGraph> {
    g.replicate(k)
}

pub fn tensor(g1: &FunctionalGraph, g2: &FunctionalGraph) -> Result<FunctionalGraph> {
    g1.tensor(g2)
}

pub fn from_map(n: usize, f: impl FnMut(usize) -> usize) -> Result<FunctionalGraph> {
    FunctionalGraph::from_map(n, f)
}

pub fn is_isomorphic(g1: &FunctionalGraph, g2: &FunctionalGraph) -> bool {
    g1.is_isomorphic(g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{iterated_gcd, lcm, Sequence};
    use crate::tree::{leaf, Forest};
    use proptest::prelude::*;

    fn t(v: &[u64]) -> RootedTree {
        RootedTree::elementary(&Sequence::new(v.to_vec()).unwrap())
    }

    #[test]
    fn cyc_examples() {
        let fixed = cyc(1, &leaf()).unwrap();
        assert_eq!((fixed.vertex_count(), fixed.periodic_count()), (1, 1));
        let q24_part = cyc(2, &t(&[3])).unwrap();
        assert_eq!(q24_part.vertex_count(), 6);
        let six = FunctionalGraph::cycle(6).unwrap();
        assert_eq!(six, from_map(6, |x| (x + 1) % 6).unwrap());
        assert!(cyc(0, &leaf()).is_err());
    }

    #[test]
    fn union_and_replicate() {
        let g = replicate(6, &FunctionalGraph::cycle(2).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.component_count()), (12, 6));
        assert!(disjoint_union(&[]).unwrap().is_empty());
        assert!(replicate(0, &g).unwrap().is_empty());
        let abelian = replicate(4, &cyc(2, &t(&[4, 2])).unwrap()).unwrap();
        assert_eq!(abelian.vertex_count(), 64);
    }

    #[test]
    fn tensor_examples() {
        let left = FunctionalGraph::cycle(3)
            .unwrap()
            .tensor(&cyc(1, &t(&[2])).unwrap())
            .unwrap();
        assert_eq!(left, cyc(3, &t(&[2])).unwrap());
        let six = FunctionalGraph::cycle(2)
            .unwrap()
            .tensor(&FunctionalGraph::cycle(3).unwrap())
            .unwrap();
        assert_eq!(six, FunctionalGraph::cycle(6).unwrap());
        let loops = cyc(1, &t(&[2]))
            .unwrap()
            .tensor(&cyc(1, &t(&[2, 2])).unwrap())
            .unwrap();
        assert_eq!(loops, cyc(1, &t(&[4, 2])).unwrap());
    }

    #[test]
    fn from_map_examples() {
        assert_eq!(
            from_map(4, |x| 2 * x % 4).unwrap(),
            cyc(1, &t(&[2, 2])).unwrap()
        );
        assert_eq!(
            from_map(3, |x| x).unwrap(),
            replicate(3, &FunctionalGraph::cycle(1).unwrap()).unwrap()
        );
        assert!(from_map(3, |_| 3).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        let a = cyc(2, &t(&[3])).unwrap();
        let b = FunctionalGraph::cycle(4).unwrap();
        let ab = disjoint_union(&[a.clone(), b.clone()]).unwrap();
        let ba = disjoint_union(&[b, a.clone()]).unwrap();
        assert!(is_isomorphic(&ab, &ba));
        assert_eq!(ab.canonical_form(), ba.canonical_form());
        assert!(!is_isomorphic(&a, &cyc(2, &t(&[2])).unwrap()));
    }

    #[test]
    fn irregular_cycles_are_rotation_invariant() {
        let trees = vec![t(&[2]), leaf(), t(&[3]), leaf()];
        let c = Component::new(trees.clone()).unwrap();
        for r in 0..4 {
            let mut rot = trees.clone();
            rot.rotate_left(r);
            assert_eq!(Component::new(rot).unwrap(), c);
        }
        let chiral = vec![leaf(), t(&[2]), t(&[3])];
        let mut mirrored = chiral.clone();
        mirrored.swap(1, 2);
        assert_ne!(
            Component::new(chiral).unwrap(),
            Component::new(mirrored).unwrap()
        );
        let mut g = FunctionalGraph::empty();
        g.add_component(c.clone(), 2).unwrap();
        assert_eq!(
            FunctionalGraph::from_successors(&g.to_successors()).unwrap(),
            g
        );
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        let s = [3, 1, 2, 1, 2, 1, 1, 2];
        let best = (0..s.len())
            .min_by_key(|&r| {
                let mut v = s.to_vec();
                v.rotate_left(r);
                v
            })
            .unwrap();
        let r = least_rotation(&s);
        let (mut a, mut b) = (s.to_vec(), s.to_vec());
        a.rotate_left(r);
        b.rotate_left(best);
        assert_eq!(a, b);
    }

    fn arb_tree() -> impl Strategy<Value = RootedTree> {
        prop::collection::vec(1u64..5, 0..4).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            RootedTree::elementary(&Sequence::new(v).unwrap())
        })
    }

    fn arb_graph() -> impl Strategy<Value = FunctionalGraph> {
        prop::collection::vec((1usize..4, arb_tree(), 1u64..3), 0..4).prop_map(|parts| {
            let mut g = FunctionalGraph::empty();
            for (m, tree, k) in parts {
                g.add_component(Component::regular(m, &tree).unwrap(), k)
                    .unwrap();
            }
            g
        })
    }

    proptest! {
        #[test]
        fn tensor_multiplies_vertex_counts(a in arb_graph(), b in arb_graph()) {
            let p = a.tensor(&b).unwrap();
            prop_assert_eq!(p.vertex_count(), a.vertex_count() * b.vertex_count());
            prop_assert_eq!(p, b.tensor(&a).unwrap());
        }

        #[test]
        fn cycles_tensor(rs in prop::collection::vec(1usize..=8, 1..4)) {
            let mut prod = FunctionalGraph::cycle(rs[0]).unwrap();
            for &r in &rs[1..] {
                prod = prod.tensor(&FunctionalGraph::cycle(r).unwrap()).unwrap();
            }
            let l = rs.iter().fold(1u64, |acc, &r| lcm(acc, r as u64).unwrap());
            let p: u64 = rs.iter().map(|&r| r as u64).product();
            let expected = FunctionalGraph::cycle(l as usize).unwrap().replicate(p / l).unwrap();
            prop_assert_eq!(prod, expected);
        }

        #[test]
        fn loop_tensor_of_elementary_trees(a in 1u64..200, b in 1u64..200, t in 2u64..13) {
            let (u, v) = (iterated_gcd(a, t).unwrap(), iterated_gcd(b, t).unwrap());
            let lhs = cyc(1, &RootedTree::elementary(&u)).unwrap()
                .tensor(&cyc(1, &RootedTree::elementary(&v)).unwrap()).unwrap();
            let rhs = cyc(1, &RootedTree::elementary(&u.product(&v).unwrap())).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn explicit_map_roundtrip(g in arb_graph()) {
            let succ = g.to_successors();
            prop_assert_eq!(succ.len() as u64, g.vertex_count());
            prop_assert_eq!(FunctionalGraph::from_successors(&succ).unwrap(), g);
        }

        #[test]
        fn isomorphism_ignores_vertex_relabelling(g in arb_graph(), seed in any::<u64>()) {
            let succ = g.to_successors();
            let n = succ.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                perm.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let mut relabelled = vec![0; n];
            for v in 0..n {
                relabelled[perm[v]] = perm[succ[v]];
            }
            prop_assert!(FunctionalGraph::from_successors(&relabelled).unwrap().is_isomorphic(&g));
        }
    }

    #[test]
    fn forest_enclosure_in_cycle() {
        let tree = RootedTree::enclose(&Forest::copies(3, &leaf()));
        let g = cyc(2, &tree).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.tree_census().get(&tree), Some(&2));
    }
}
