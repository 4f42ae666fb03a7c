//! Pseudo-flower groups and the central tree.
//!
//! `F(c0; c1, ..., ck)` glues cyclic groups `Z_ci` along a shared copy of
//! `Z_c0`: the element `(i, x)` with `x = x' (ci/c0)` is identified with the
//! pistil element `(0, x')`. Multiplying coordinates by `t` is well defined
//! on the quotient and models the power map of any flower group of that type.

use crate::arith::{gcd, iterated_gcd, nu_omega_split};
use crate::error::{Error, Result};
use crate::fgraph::decompose;
use crate::groups::FlowerType;
use crate::tree::{RootedTree, TreeExpr};

#[derive(Clone, Debug)]
pub struct PseudoFlower {
    flower_type: FlowerType,
    /// `(petal, x)` for each element; the pistil uses petal 0 and `x` in `Z_c0`.
    elements: Vec<(usize, u64)>,
    /// `lookup[i - 1][x]`: index of `(i, x)` for petal `i` in `1..=k`.
    lookup: Vec<Vec<u32>>,
}

impl PseudoFlower {
    pub fn new(flower_type: &FlowerType) -> Result<Self> {
        let c0 = flower_type.c0();
        let size = flower_type.order();
        if size > crate::groups::MAX_ORDER {
            return Err(Error::TooLarge {
                what: format!("pseudo-flower {flower_type}"),
                size,
                cap: crate::groups::MAX_ORDER,
            });
        }
        let mut elements: Vec<(usize, u64)> = (0..c0).map(|x| (0, x)).collect();
        let mut lookup = Vec::with_capacity(flower_type.k());
        for (i, &ci) in flower_type.petals().iter().enumerate() {
            let step = ci / c0;
            let mut table = Vec::with_capacity(ci as usize);
            for x in 0..ci {
                if x % step == 0 {
                    table.push((x / step) as u32);
                } else {
                    table.push(elements.len() as u32);
                    elements.push((i + 1, x));
                }
            }
            lookup.push(table);
        }
        debug_assert_eq!(elements.len() as u64, size);
        Ok(PseudoFlower {
            flower_type: flower_type.clone(),
            elements,
            lookup,
        })
    }

    pub fn flower_type(&self) -> &FlowerType {
        &self.flower_type
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of `(petal, x)`; petal 0 is the pistil.
    pub fn index(&self, petal: usize, x: u64) -> Option<usize> {
        if petal == 0 {
            return (x < self.flower_type.c0()).then_some(x as usize);
        }
        let table = self.lookup.get(petal - 1)?;
        table.get(x as usize).map(|&i| i as usize)
    }

    /// `(petal, x)` coordinates of an element.
    pub fn coords(&self, e: usize) -> (usize, u64) {
        self.elements[e]
    }

    pub fn power(&self, e: usize, t: u64) -> usize {
        let (i, x) = self.elements[e];
        if i == 0 {
            let c0 = self.flower_type.c0();
            return ((x as u128 * t as u128) % c0 as u128) as usize;
        }
        let ci = self.flower_type.petals()[i - 1];
        let y = ((x as u128 * t as u128) % ci as u128) as usize;
        self.lookup[i - 1][y] as usize
    }

    pub fn successors(&self, t: u64) -> Vec<usize> {
        (0..self.len()).map(|e| self.power(e, t)).collect()
    }
}

pub fn build_pseudo_flower(ft: &FlowerType) -> Result<PseudoFlower> {
    PseudoFlower::new(ft)
}

pub fn pseudo_power(f: &PseudoFlower, e: usize, t: u64) -> usize {
    f.power(e, t)
}

/// The tree hanging at `(0, 0)` under `x -> t x`, by enumeration.
pub fn central_tree(ft: &FlowerType, t: u64) -> Result<RootedTree> {
    if t == 0 {
        return Err(Error::domain("t must be positive"));
    }
    let f = PseudoFlower::new(ft)?;
    let d = decompose(&f.successors(t))?;
    Ok(d.tree_at(0).expect("(0,0) is a fixed point").clone())
}

/// Expected node count of the central tree: `sum nu_i - (k - 1) nu_0`.
pub fn central_node_count(ft: &FlowerType, t: u64) -> Result<u64> {
    let nu0 = nu_omega_split(ft.c0(), t)?.nu;
    let mut total = 0u64;
    for &c in ft.petals() {
        total += nu_omega_split(c, t)?.nu;
    }
    Ok(total - (ft.k() as u64 - 1) * nu0)
}

/// The central tree by the rewrite rules: reorder petals, drop a petal with
/// `gcd(t, ci/c0) = 1`, turn a petal with `ci | t` into `ci - c0` leaves at
/// the root, and finish with one petal or with `gcd(c0, t) = 1`. `None`
/// when no rule applies to the remaining petals.
pub fn central_tree_rules(ft: &FlowerType, t: u64) -> Result<Option<TreeExpr>> {
    if t == 0 {
        return Err(Error::domain("t must be positive"));
    }
    let c0 = ft.c0();
    let mut petals: Vec<u64> = ft.petals().to_vec();
    let mut leaves = 0u64;
    let finish = |terms: Vec<TreeExpr>, leaves: u64| {
        let mut terms = terms;
        terms.push(TreeExpr::star(leaves));
        TreeExpr::sum_of(terms)
    };
    let elementary = |c: u64| iterated_gcd(c, t).map(TreeExpr::elementary);
    loop {
        if gcd(c0, t) == 1 {
            let terms = petals
                .iter()
                .map(|&c| elementary(c))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some(finish(terms, leaves)));
        }
        if petals.len() == 1 {
            return Ok(Some(finish(vec![elementary(petals[0])?], leaves)));
        }
        if let Some(i) = petals.iter().position(|&c| gcd(t, c / c0) == 1) {
            petals.remove(i);
            continue;
        }
        if let Some(i) = petals.iter().position(|&c| t.is_multiple_of(c)) {
            leaves += petals[i] - c0;
            petals.remove(i);
            continue;
        }
        return Ok(None);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Sequence;

    fn ty(c0: u64, petals: &[u64]) -> FlowerType {
        FlowerType::new(c0, petals.to_vec()).unwrap()
    }

    fn t(v: &[u64]) -> RootedTree {
        RootedTree::elementary(&Sequence::new(v.to_vec()).unwrap())
    }

    #[test]
    fn construction() {
        let z = PseudoFlower::new(&ty(1, &[7])).unwrap();
        assert_eq!(z.len(), 7);
        let q8 = PseudoFlower::new(&ty(2, &[4, 4, 4])).unwrap();
        assert_eq!(q8.len(), 8);
        for i in 1..=3 {
            assert_eq!(q8.index(i, 2), q8.index(0, 1));
            assert_eq!(q8.index(i, 0), Some(0));
        }
        assert_ne!(q8.index(1, 1), q8.index(2, 1));
        assert!(FlowerType::new(2, vec![4, 5]).is_err());
    }

    #[test]
    fn central_tree_examples() {
        let mut q48 = vec![4u64; 12];
        q48.push(24);
        let tree = central_tree(&ty(2, &q48), 10).unwrap();
        let expected = t(&[2, 2, 2])
            .j_sum(
                2,
                &RootedTree::enclose(&crate::tree::Forest::copies(24, &RootedTree::leaf())),
            )
            .unwrap();
        assert_eq!(tree, expected);
        assert_eq!(central_tree(&ty(3, &[12]), 6).unwrap(), t(&[6, 2]));
        let sum = RootedTree::sum([&t(&[2, 2]), &t(&[2, 2]), &t(&[2])]);
        assert_eq!(central_tree(&ty(1, &[4, 4, 6]), 2).unwrap(), sum);
    }

    #[test]
    fn rules_examples() {
        let mut q24 = vec![4u64; 6];
        q24.push(12);
        let r = central_tree_rules(&ty(2, &q24), 3).unwrap().unwrap();
        assert_eq!(r.to_string(), "T(3)");
        let q16 = ty(2, &[4, 4, 4, 4, 8]);
        let r = central_tree_rules(&q16, 4).unwrap().unwrap();
        assert_eq!(r.to_string(), "T(4,2) + <8x*>");
        assert_eq!(r.eval().unwrap(), central_tree(&q16, 4).unwrap());
        let mut q48 = vec![4u64; 12];
        q48.push(24);
        assert_eq!(central_tree_rules(&ty(2, &q48), 10).unwrap(), None);
    }

    #[test]
    fn node_count_law() {
        for (ft, t) in [
            (ty(2, &[4, 4, 4, 4, 8]), 4),
            (ty(1, &[4, 4, 6]), 2),
            (ty(3, &[6, 9, 12]), 6),
        ] {
            let tree = central_tree(&ft, t).unwrap();
            assert_eq!(
                tree.node_count() as u64,
                central_node_count(&ft, t).unwrap()
            );
        }
    }
}
