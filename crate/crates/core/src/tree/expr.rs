//! Symbolic tree expressions in the ASCII notation used for descriptions:
//! `*` for the one-vertex tree, `T(a,b,...)` for elementary trees, `A + B`
//! for root-identifying sums, `k.A` for `k.T`, `A +_j B` for j-sums and
//! `<k1xA (+) k2xB>` for an explicit enclosure.

use std::fmt;

use crate::arith::Sequence;
use crate::error::Result;
use crate::tree::{Forest, RootedTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeExpr {
    Leaf,
    Elementary(Sequence),
    /// `<k1 x A1 (+) k2 x A2 ...>`
    Enclose(Vec<(u64, TreeExpr)>),
    Sum(Vec<TreeExpr>),
    Scaled(u64, Box<TreeExpr>),
    JSum(Box<TreeExpr>, usize, Box<TreeExpr>),
}

impl TreeExpr {
    pub fn elementary(seq: Sequence) -> Self {
        if seq.is_one() {
            TreeExpr::Leaf
        } else {
            TreeExpr::Elementary(seq)
        }
    }

    /// `<k x *>`
    pub fn star(k: u64) -> Self {
        if k == 0 {
            TreeExpr::Leaf
        } else {
            TreeExpr::Enclose(vec![(k, TreeExpr::Leaf)])
        }
    }

    /// `k.A`, simplified when `k = 1` or `A = *`.
    pub fn scaled(k: u64, e: TreeExpr) -> Self {
        match (k, &e) {
            (_, TreeExpr::Leaf) | (1, _) => e,
            _ => TreeExpr::Scaled(k, Box::new(e)),
        }
    }

    /// A sum with `*` summands dropped and equal summands merged into `k.A`.
    pub fn sum_of(terms: impl IntoIterator<Item = TreeExpr>) -> Self {
        let mut merged: Vec<(TreeExpr, u64)> = Vec::new();
        for term in terms {
            let (k, base) = match term {
                TreeExpr::Leaf => continue,
                TreeExpr::Scaled(k, b) => (k, *b),
                other => (1, other),
            };
            match merged.iter_mut().find(|(b, _)| *b == base) {
                Some((_, c)) => *c += k,
                None => merged.push((base, k)),
            }
        }
        let mut parts: Vec<TreeExpr> = merged
            .into_iter()
            .map(|(b, k)| TreeExpr::scaled(k, b))
            .collect();
        match parts.len() {
            0 => TreeExpr::Leaf,
            1 => parts.pop().unwrap(),
            _ => TreeExpr::Sum(parts),
        }
    }

    pub fn eval(&self) -> Result<RootedTree> {
        Ok(match self {
            TreeExpr::Leaf => RootedTree::leaf(),
            TreeExpr::Elementary(s) => RootedTree::elementary(s),
            TreeExpr::Enclose(parts) => {
                let mut forest = Forest::new();
                for (k, e) in parts {
                    forest.push_copies(*k as usize, &e.eval()?);
                }
                RootedTree::enclose(&forest)
            }
            TreeExpr::Sum(parts) => {
                let trees = parts.iter().map(|p| p.eval()).collect::<Result<Vec<_>>>()?;
                RootedTree::sum(&trees)
            }
            TreeExpr::Scaled(k, e) => e.eval()?.scalar_dot(*k)?,
            TreeExpr::JSum(t, j, s) => t.eval()?.j_sum(*j, &s.eval()?)?,
        })
    }

    /// Best-effort symbolic name for an arbitrary tree: an elementary tree if
    /// one matches, otherwise an explicit enclosure of named children.
    pub fn describe(tree: &RootedTree) -> TreeExpr {
        if tree.is_leaf() {
            return TreeExpr::Leaf;
        }
        if let Some(seq) = recognize_elementary(tree) {
            return TreeExpr::Elementary(seq);
        }
        let mut parts: Vec<(u64, RootedTree)> = Vec::new();
        for c in tree.children() {
            match parts.last_mut() {
                Some((k, prev)) if *prev == c => *k += 1,
                _ => parts.push((1, c)),
            }
        }
        TreeExpr::Enclose(
            parts
                .into_iter()
                .map(|(k, c)| (k, TreeExpr::describe(&c)))
                .collect(),
        )
    }

    fn needs_parens_in_sum(&self) -> bool {
        matches!(self, TreeExpr::Sum(_) | TreeExpr::JSum(..))
    }
}

/// Find a sequence whose elementary tree is `tree`, searching non-increasing
/// sequences with the right term product and length.
pub fn recognize_elementary(tree: &RootedTree) -> Option<Sequence> {
    let n = tree.node_count() as u64;
    let depth = tree.depth();
    if depth == 0 {
        return Some(Sequence::one());
    }
    let mut found = None;
    let mut stack: Vec<u64> = Vec::new();
    search(
        n,
        depth,
        u64::MAX,
        &mut stack,
        &mut |terms| {
            let seq = Sequence::new(terms.to_vec()).ok()?;
            (RootedTree::elementary(&seq) == *tree).then_some(seq)
        },
        &mut found,
    );
    found
}

fn search(
    rest: u64,
    slots: usize,
    cap: u64,
    stack: &mut Vec<u64>,
    check: &mut dyn FnMut(&[u64]) -> Option<Sequence>,
    found: &mut Option<Sequence>,
) {
    if found.is_some() {
        return;
    }
    if slots == 0 {
        if rest == 1 {
            *found = check(stack);
        }
        return;
    }
    // every remaining term is >= 2 (the sequence has exactly `slots` more
    // terms before trailing ones) and <= cap
    let mut d = cap.min(rest);
    while d >= 2 {
        if rest.is_multiple_of(d)
            && 2u64
                .checked_pow(slots as u32 - 1)
                .is_some_and(|m| m <= rest / d)
        {
            stack.push(d);
            search(rest / d, slots - 1, d, stack, check, found);
            stack.pop();
            if found.is_some() {
                return;
            }
        }
        d -= 1;
    }
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeExpr::Leaf => f.write_str("*"),
            TreeExpr::Elementary(s) => write!(f, "T{s}"),
            TreeExpr::Enclose(parts) => {
                f.write_str("<")?;
                for (i, (k, e)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" (+) ")?;
                    }
                    if *k == 1 {
                        write!(f, "{e}")?;
                    } else {
                        write!(f, "{k}x{e}")?;
                    }
                }
                f.write_str(">")
            }
            TreeExpr::Sum(parts) => {
                for (i, e) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    if e.needs_parens_in_sum() {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            TreeExpr::Scaled(k, e) => {
                if e.needs_parens_in_sum() {
                    write!(f, "{k}.({e})")
                } else {
                    write!(f, "{k}.{e}")
                }
            }
            TreeExpr::JSum(t, j, s) => write!(f, "{t} +_{j} {s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u64]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn renders_in_ascii_notation() {
        let pgl = TreeExpr::sum_of([
            TreeExpr::scaled(15, TreeExpr::elementary(seq(&[2, 2]))),
            TreeExpr::scaled(10, TreeExpr::elementary(seq(&[2]))),
        ]);
        assert_eq!(pgl.to_string(), "15.T(2,2) + 10.T(2)");
        let q48 = TreeExpr::JSum(
            Box::new(TreeExpr::elementary(seq(&[2, 2, 2]))),
            2,
            Box::new(TreeExpr::star(24)),
        );
        assert_eq!(q48.to_string(), "T(2,2,2) +_2 <24x*>");
        assert_eq!(q48.eval().unwrap().node_count(), 32);
    }

    #[test]
    fn sum_merges_and_drops_leaves() {
        let e = TreeExpr::sum_of([
            TreeExpr::elementary(seq(&[3])),
            TreeExpr::Leaf,
            TreeExpr::elementary(seq(&[3])),
        ]);
        assert_eq!(e.to_string(), "2.T(3)");
        assert_eq!(TreeExpr::sum_of([TreeExpr::Leaf]), TreeExpr::Leaf);
    }

    #[test]
    fn recognizes_elementary_trees() {
        for v in [&[3][..], &[4, 2], &[2, 2, 2], &[6, 3, 3], &[5]] {
            let tree = RootedTree::elementary(&seq(v));
            assert_eq!(recognize_elementary(&tree), Some(seq(v)));
        }
        let odd = TreeExpr::JSum(
            Box::new(TreeExpr::elementary(seq(&[2, 2, 2]))),
            2,
            Box::new(TreeExpr::star(24)),
        )
        .eval()
        .unwrap();
        assert_eq!(recognize_elementary(&odd), None);
        assert_eq!(TreeExpr::describe(&odd).eval().unwrap(), odd);
    }
}
