//! Rooted trees up to isomorphism and the tree algebra used to describe the
//! trees hanging off periodic points: enclosure `<F>`, root-identifying sums,
//! `k.T`, elementary trees and j-sums.
//!
//! A [`RootedTree`] is stored as its canonical code: the preorder sequence of
//! child counts, children visited in a fixed order on isomorphism classes.
//! Two trees are equal as values iff they are isomorphic as rooted trees.

pub(crate) mod canon;
pub mod expr;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Sequence;
use crate::error::{Error, Result};

pub use expr::TreeExpr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTree {
    code: Arc<[u32]>,
}

/// Canonical code of a rooted tree. Equal codes mean isomorphic trees.
/// Displays as nested parentheses, one pair per node.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeCode(Arc<[u32]>);

impl TreeCode {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Preorder child counts -> parentheses.
        let mut open: Vec<u32> = Vec::new();
        for &k in self.0.iter() {
            f.write_str("(")?;
            if k > 0 {
                open.push(k);
                continue;
            }
            f.write_str(")")?;
            while let Some(top) = open.last_mut() {
                *top -= 1;
                if *top > 0 {
                    break;
                }
                open.pop();
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A multiset of rooted trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn new() -> Self {
        Forest::default()
    }

    pub fn from_trees(trees: impl IntoIterator<Item = RootedTree>) -> Self {
        Forest {
            trees: trees.into_iter().collect(),
        }
    }

    /// `k x T`: `k` disjoint copies of one tree.
    pub fn copies(k: usize, tree: &RootedTree) -> Self {
        Forest {
            trees: vec![tree.clone(); k],
        }
    }

    pub fn push(&mut self, tree: RootedTree) {
        self.trees.push(tree);
    }

    pub fn push_copies(&mut self, k: usize, tree: &RootedTree) {
        self.trees.extend(std::iter::repeat_n(tree.clone(), k));
    }

    pub fn extend(&mut self, other: Forest) {
        self.trees.extend(other.trees);
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }
}

impl RootedTree {
    pub(crate) fn from_canonical(code: Vec<u32>) -> Self {
        RootedTree { code: code.into() }
    }

    /// The one-vertex tree.
    pub fn leaf() -> Self {
        RootedTree::from_canonical(vec![0])
    }

    pub fn is_leaf(&self) -> bool {
        self.code.len() == 1
    }

    /// `<F>`: a fresh root whose children are the roots of the trees in `F`.
    pub fn enclose(forest: &Forest) -> Self {
        let mut raw =
            Vec::with_capacity(1 + forest.trees.iter().map(|t| t.code.len()).sum::<usize>());
        raw.push(forest.trees.len() as u32);
        for t in &forest.trees {
            raw.extend_from_slice(&t.code);
        }
        RootedTree::from_canonical(
            canon::canonicalize_code(&raw).expect("well-formed by construction"),
        )
    }

    /// Sum of rooted trees: identify all the roots.
    pub fn sum<'a>(trees: impl IntoIterator<Item = &'a RootedTree>) -> Self {
        let mut forest = Forest::new();
        for t in trees {
            forest.extend(t.child_forest());
        }
        RootedTree::enclose(&forest)
    }

    /// `k.T = <k x G>` where `T = <G>`. Not the same as `k` disjoint copies.
    pub fn scalar_dot(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("scalar_dot needs k >= 1"));
        }
        let children = self.children();
        let mut forest = Forest::new();
        for _ in 0..k {
            for c in &children {
                forest.push(c.clone());
            }
        }
        Ok(RootedTree::enclose(&forest))
    }

    /// The elementary tree of a non-increasing sequence, built layer by layer.
    pub fn elementary(seq: &Sequence) -> Self {
        let v: &[u64] = seq.terms();
        let d = v.len();
        // layers[i] = T^i
        let mut layers: Vec<RootedTree> = vec![RootedTree::leaf()];
        let lower_layers = |layers: &[RootedTree], upto: usize, forest: &mut Forest| {
            // sum_{i=1}^{upto} (v_i - v_{i+1}) x T^{i-1}, 1-based
            for i in 1..=upto {
                let w = (v[i - 1] - v[i]) as usize;
                forest.push_copies(w, &layers[i - 1]);
            }
        };
        for k in 1..d {
            let mut g = Forest::copies(v[k - 1] as usize, &layers[k - 1]);
            lower_layers(&layers, k - 1, &mut g);
            layers.push(RootedTree::enclose(&g));
        }
        let mut g = Forest::copies((v[d - 1] - 1) as usize, &layers[d - 1]);
        lower_layers(&layers, d - 1, &mut g);
        RootedTree::enclose(&g)
    }

    /// Child subtrees of the root, in canonical order.
    pub fn children(&self) -> Vec<RootedTree> {
        canon::split_codes(&self.code[1..])
            .into_iter()
            .map(|c| RootedTree::from_canonical(c.to_vec()))
            .collect()
    }

    pub fn child_forest(&self) -> Forest {
        Forest::from_trees(self.children())
    }

    pub fn node_count(&self) -> usize {
        self.code.len()
    }

    pub fn depth(&self) -> usize {
        let mut max = 0;
        let mut open: Vec<u32> = Vec::new();
        for &k in self.code.iter() {
            max = max.max(open.len());
            if k > 0 {
                open.push(k);
                continue;
            }
            while let Some(top) = open.last_mut() {
                *top -= 1;
                if *top > 0 {
                    break;
                }
                open.pop();
            }
        }
        max
    }

    /// Layer decomposition `depth -> (representative, multiplicity)` of the
    /// root's children when all children of equal depth are isomorphic.
    pub fn homogeneous_layers(&self) -> Option<BTreeMap<usize, (RootedTree, usize)>> {
        let mut layers: BTreeMap<usize, (RootedTree, usize)> = BTreeMap::new();
        for c in self.children() {
            let d = c.depth();
            match layers.get_mut(&d) {
                Some((rep, count)) => {
                    if *rep != c {
                        return None;
                    }
                    *count += 1;
                }
                None => {
                    layers.insert(d, (c, 1));
                }
            }
        }
        Some(layers)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_layers().is_some()
    }

    /// `T +_j S`: replace one depth-`j` child subtree `T_j` of the homogeneous
    /// tree `T` by `T_j + S`.
    pub fn j_sum(&self, j: usize, s: &RootedTree) -> Result<Self> {
        let layers = self
            .homogeneous_layers()
            .ok_or_else(|| Error::domain("j-sum needs a homogeneous tree"))?;
        if !layers.contains_key(&j) {
            return Err(Error::domain(format!(
                "j-sum: tree has no child subtree of depth {j}"
            )));
        }
        let mut forest = Forest::new();
        for (d, (rep, count)) in &layers {
            if *d == j {
                forest.push_copies(count - 1, rep);
                forest.push(RootedTree::sum([rep, s]));
            } else {
                forest.push_copies(*count, rep);
            }
        }
        Ok(RootedTree::enclose(&forest))
    }

    pub fn canonical_code(&self) -> TreeCode {
        TreeCode(self.code.clone())
    }

    /// Build from explicit children lists (any order) rooted at `root`.
    pub fn from_children_lists(children: &[Vec<usize>], root: usize) -> Result<Self> {
        let mut parents = vec![None; children.len()];
        for (p, kids) in children.iter().enumerate() {
            for &c in kids {
                if c >= children.len() || parents[c].is_some() || c == root {
                    return Err(Error::domain("children lists do not describe a tree"));
                }
                parents[c] = Some(p);
            }
        }
        let csr = canon::Csr::from_parents(&parents);
        let labels = canon::label_forest(&csr, &[root]);
        if labels.label.contains(&u32::MAX) {
            return Err(Error::domain(
                "children lists contain nodes unreachable from the root",
            ));
        }
        Ok(RootedTree::from_canonical(canon::emit(&csr, &labels, root)))
    }

    /// Parent of each vertex (preorder numbering of the canonical code);
    /// the root has `None`.
    pub fn parents(&self) -> Vec<Option<usize>> {
        canon::parents_of_code(&self.code).expect("canonical code is well-formed")
    }

    /// Parse the nested-parentheses form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut code: Vec<u32> = Vec::new();
        let mut open: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '(' => {
                    if closed_root {
                        return Err(Error::parse(pos, "text after the root closed"));
                    }
                    if let Some(&p) = open.last() {
                        code[p] += 1;
                    }
                    open.push(code.len());
                    code.push(0);
                }
                ')' => {
                    if open.pop().is_none() {
                        return Err(Error::parse(pos, "unbalanced ')'"));
                    }
                    if open.is_empty() {
                        closed_root = true;
                    }
                }
                c if c.is_whitespace() => {}
                c => return Err(Error::parse(pos, format!("unexpected character {c:?}"))),
            }
        }
        if !closed_root || !open.is_empty() {
            return Err(Error::parse(s.len(), "unterminated tree"));
        }
        Ok(RootedTree::from_canonical(
            canon::canonicalize_code(&code).expect("balanced parentheses form a tree"),
        ))
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.canonical_code(), f)
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedTree{}", self.canonical_code())
    }
}

impl Serialize for RootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RootedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RootedTree::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn leaf() -> RootedTree {
    RootedTree::leaf()
}

pub fn enclose(forest: &Forest) -> RootedTree {
    RootedTree::enclose(forest)
}

pub fn tree_sum(trees: &[RootedTree]) -> RootedTree {
    RootedTree::sum(trees)
}

pub fn scalar_dot(k: u64, tree: &RootedTree) -> Result<RootedTree> {
    tree.scalar_dot(k)
}

pub fn elementary_tree(seq: &Sequence) -> RootedTree {
    RootedTree::elementary(seq)
}

pub fn j_sum(tree: &RootedTree, j: usize, s: &RootedTree) -> Result<RootedTree> {
    tree.j_sum(j, s)
}
