//! Finite groups on dense element indices, maximal cyclic subgroups and
//! flower-group detection.

pub mod concrete;
pub mod field;
pub mod spec;

use std::collections::HashMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

pub use concrete::{Abelian, Cyclic, Pgl2, Quaternion, Semidirect, UnitsMod, MAX_ORDER};
pub use spec::GroupSpec;

/// A finite group whose elements are the indices `0..order()`.
pub trait FiniteGroup: Send + Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn multiply(&self, a: usize, b: usize) -> usize;
    fn label(&self, g: usize) -> String;
    fn name(&self) -> String;
}

/// `g^t` by square-and-multiply; `t = 0` gives the identity.
pub fn power(group: &(impl FiniteGroup + ?Sized), g: usize, mut t: u64) -> usize {
    let mut result = group.identity();
    let mut base = g;
    while t > 0 {
        if t & 1 == 1 {
            result = group.multiply(result, base);
        }
        t >>= 1;
        if t > 0 {
            base = group.multiply(base, base);
        }
    }
    result
}

/// The powers `g^0, g^1, ..., g^(ord-1)`.
pub fn powers(group: &(impl FiniteGroup + ?Sized), g: usize) -> Vec<usize> {
    let e = group.identity();
    let mut out = vec![e];
    let mut x = g;
    while x != e {
        out.push(x);
        x = group.multiply(x, g);
    }
    out
}

pub fn element_order(group: &(impl FiniteGroup + ?Sized), g: usize) -> u64 {
    powers(group, g).len() as u64
}

pub fn inverse(group: &(impl FiniteGroup + ?Sized), g: usize) -> usize {
    // the last listed power is g^(ord-1), or the identity when ord = 1
    *powers(group, g)
        .last()
        .expect("powers start with the identity")
}

/// Sorted elements of `<g>`.
pub fn cyclic_subgroup(group: &(impl FiniteGroup + ?Sized), g: usize) -> Vec<usize> {
    let mut p = powers(group, g);
    p.sort_unstable();
    p
}

/// Sorted elements of the subgroup generated by `gens`.
pub fn closure(group: &(impl FiniteGroup + ?Sized), gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    let e = group.identity();
    seen[e] = true;
    let mut members = vec![e];
    let mut head = 0;
    while head < members.len() {
        let x = members[head];
        head += 1;
        for &g in gens {
            let y = group.multiply(x, g);
            if !seen[y] {
                seen[y] = true;
                members.push(y);
            }
        }
    }
    members.sort_unstable();
    members
}

pub fn center(group: &(impl FiniteGroup + ?Sized)) -> Vec<usize> {
    let n = group.order();
    (0..n)
        .filter(|&z| (0..n).all(|g| group.multiply(z, g) == group.multiply(g, z)))
        .collect()
}

pub fn is_abelian(group: &(impl FiniteGroup + ?Sized)) -> bool {
    center(group).len() == group.order()
}

/// Cyclic subgroups of a group, each stored once, with the subgroup every
/// element generates.
pub struct CyclicSubgroups {
    /// Sorted element lists.
    pub subgroups: Vec<Vec<usize>>,
    /// `generated[g]` indexes `<g>` in `subgroups`.
    pub generated: Vec<usize>,
}

pub fn cyclic_subgroups(group: &(impl FiniteGroup + ?Sized)) -> CyclicSubgroups {
    let n = group.order();
    let mut generated = vec![usize::MAX; n];
    let mut subgroups = Vec::new();
    for g in 0..n {
        if generated[g] != usize::MAX {
            continue;
        }
        let p = powers(group, g);
        let id = subgroups.len();
        let ord = p.len() as u64;
        // every generator g^k of <g> generates the same subgroup
        for (k, &x) in p.iter().enumerate() {
            if gcd(k as u64, ord) == 1 {
                generated[x] = id;
            }
        }
        let mut sorted = p;
        sorted.sort_unstable();
        subgroups.push(sorted);
    }
    CyclicSubgroups {
        subgroups,
        generated,
    }
}

/// Maximal cyclic subgroups (the `mu`-subgroups), sorted by order and then
/// by their element lists.
pub fn mu_subgroups(group: &(impl FiniteGroup + ?Sized)) -> Vec<Vec<usize>> {
    let cs = cyclic_subgroups(group);
    let mut maximal = vec![true; cs.subgroups.len()];
    for (id, h) in cs.subgroups.iter().enumerate() {
        for &x in h {
            let sub = cs.generated[x];
            if sub != id {
                maximal[sub] = false;
            }
        }
    }
    let mut out: Vec<Vec<usize>> = cs
        .subgroups
        .into_iter()
        .zip(maximal)
        .filter_map(|(h, m)| m.then_some(h))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// The type `(c0; c1, ..., ck)` of a flower group, petals sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlowerType {
    c0: u64,
    petals: Vec<u64>,
}

impl FlowerType {
    pub fn new(c0: u64, mut petals: Vec<u64>) -> Result<Self> {
        if c0 == 0 {
            return Err(Error::domain("pistil order must be positive"));
        }
        if petals.is_empty() {
            return Err(Error::domain("a flower type needs at least one petal"));
        }
        if let Some(c) = petals.iter().find(|&&c| c == 0 || c % c0 != 0) {
            return Err(Error::domain(format!(
                "pistil order {c0} does not divide petal order {c}"
            )));
        }
        petals.sort_unstable();
        Ok(FlowerType { c0, petals })
    }

    pub fn c0(&self) -> u64 {
        self.c0
    }

    pub fn petals(&self) -> &[u64] {
        &self.petals
    }

    pub fn k(&self) -> usize {
        self.petals.len()
    }

    /// `sum ci - (k - 1) c0`.
    pub fn order(&self) -> u64 {
        self.petals.iter().sum::<u64>() - (self.k() as u64 - 1) * self.c0
    }
}

/// Repeated petal orders are written `kxc`, as in `(2; 6x4,12)`.
impl fmt::Display for FlowerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut runs: Vec<(u64, usize)> = Vec::new();
        for &c in &self.petals {
            match runs.last_mut() {
                Some((prev, k)) if *prev == c => *k += 1,
                _ => runs.push((c, 1)),
            }
        }
        let p: Vec<String> = runs
            .iter()
            .map(|&(c, k)| {
                if k == 1 {
                    c.to_string()
                } else {
                    format!("{k}x{c}")
                }
            })
            .collect();
        write!(f, "({}; {})", self.c0, p.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowerDecomposition {
    pub pistil: Vec<usize>,
    pub petals: Vec<Vec<usize>>,
    pub flower_type: FlowerType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowerOutcome {
    Flower(FlowerDecomposition),
    NotFlower,
}

impl FlowerOutcome {
    pub fn flower(self) -> Option<FlowerDecomposition> {
        match self {
            FlowerOutcome::Flower(d) => Some(d),
            FlowerOutcome::NotFlower => None,
        }
    }
}

/// Decide whether a noncyclic group is a flower group. The petals meet
/// pairwise in one common subgroup exactly when every element outside the
/// common intersection lies in a single petal, which is what is checked.
pub fn flower_decompose(group: &(impl FiniteGroup + ?Sized)) -> Result<FlowerOutcome> {
    let petals = mu_subgroups(group);
    if petals.len() == 1 {
        return Err(Error::domain(format!("{} is cyclic", group.name())));
    }
    let n = group.order();
    let mut count = vec![0usize; n];
    for p in &petals {
        for &x in p {
            count[x] += 1;
        }
    }
    let k = petals.len();
    if count.iter().any(|&c| c != 1 && c != k) {
        return Ok(FlowerOutcome::NotFlower);
    }
    let pistil: Vec<usize> = (0..n).filter(|&x| count[x] == k).collect();
    let flower_type = FlowerType::new(
        pistil.len() as u64,
        petals.iter().map(|p| p.len() as u64).collect(),
    )?;
    if flower_type.order() != n as u64 {
        return Err(Error::Invariant(format!(
            "{} has type {flower_type} whose count disagrees with the order {n}",
            group.name()
        )));
    }
    Ok(FlowerOutcome::Flower(FlowerDecomposition {
        pistil,
        petals,
        flower_type,
    }))
}

/// Spot-check the group axioms: identity, inverses, and associativity
/// (exhaustive on small groups, sampled otherwise).
pub fn check_axioms(group: &(impl FiniteGroup + ?Sized), seed: u64) -> Result<()> {
    let n = group.order();
    let e = group.identity();
    let fail = |msg: String| Err(Error::Invariant(format!("{}: {msg}", group.name())));
    if e >= n {
        return fail("identity out of range".into());
    }
    for g in 0..n {
        if group.multiply(e, g) != g || group.multiply(g, e) != g {
            return fail(format!("identity law fails at {}", group.label(g)));
        }
        let inv = inverse(group, g);
        if group.multiply(g, inv) != e || group.multiply(inv, g) != e {
            return fail(format!("no inverse for {}", group.label(g)));
        }
    }
    let assoc = |a: usize, b: usize, c: usize| {
        group.multiply(group.multiply(a, b), c) == group.multiply(a, group.multiply(b, c))
    };
    if n <= 40 {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !assoc(a, b, c) {
                        return fail("associativity fails".into());
                    }
                }
            }
        }
    } else {
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..5000 {
            let (a, b, c) = (
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            );
            if !assoc(a, b, c) {
                return fail("associativity fails".into());
            }
        }
    }
    Ok(())
}

/// A subgroup viewed as a group in its own right.
pub struct SubgroupView<'a, G: FiniteGroup + ?Sized> {
    parent: &'a G,
    members: Vec<usize>,
    index: HashMap<usize, usize>,
}

impl<'a, G: FiniteGroup + ?Sized> SubgroupView<'a, G> {
    pub fn generated_by(parent: &'a G, gens: &[usize]) -> Self {
        let members = closure(parent, gens);
        let index = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        SubgroupView {
            parent,
            members,
            index,
        }
    }

    /// The parent element of a subgroup index.
    pub fn embed(&self, g: usize) -> usize {
        self.members[g]
    }
}

impl<G: FiniteGroup + ?Sized> FiniteGroup for SubgroupView<'_, G> {
    fn order(&self) -> usize {
        self.members.len()
    }
    fn identity(&self) -> usize {
        self.index[&self.parent.identity()]
    }
    fn multiply(&self, a: usize, b: usize) -> usize {
        self.index[&self.parent.multiply(self.members[a], self.members[b])]
    }
    fn label(&self, g: usize) -> String {
        self.parent.label(self.members[g])
    }
    fn name(&self) -> String {
        format!(
            "subgroup of {} of order {}",
            self.parent.name(),
            self.members.len()
        )
    }
}
