//! Closed-form functional graphs of power maps: cyclic and abelian groups,
//! flower groups through their type, and the quaternion, semidirect and
//! PGL(2, q) families.

mod pseudo;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{
    divisors, euler_phi, iterated_gcd, lcm, mult_order, nu_omega_split, two_adic_valuation,
    Sequence,
};
use crate::error::{Error, Result};
use crate::fgraph::FunctionalGraph;
use crate::groups::{
    field::Field, flower_decompose, FiniteGroup, FlowerOutcome, FlowerType, GroupSpec,
};
use crate::tree::{RootedTree, TreeExpr};

pub use pseudo::{
    build_pseudo_flower, central_node_count, central_tree, central_tree_rules, pseudo_power,
    PseudoFlower,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    CyclicFormula,
    AbelianFormula,
    FlowerTheorem,
    QuaternionCorollary,
    SemidirectCorollary,
    PglCorollary,
}

#[derive(Clone, Debug)]
pub struct StructuralResult {
    pub graph: FunctionalGraph,
    pub provenance: Provenance,
    pub flower_type: Option<FlowerType>,
    pub central_tree: Option<RootedTree>,
    /// Symbolic names for the trees that occur in `graph`.
    pub names: BTreeMap<RootedTree, TreeExpr>,
}

impl StructuralResult {
    fn new(provenance: Provenance) -> Self {
        StructuralResult {
            graph: FunctionalGraph::empty(),
            provenance,
            flower_type: None,
            central_tree: None,
            names: BTreeMap::new(),
        }
    }

    /// Add `k x Cyc(m, T)` and remember the name of `T`.
    fn push(&mut self, k: u64, m: u64, tree: &RootedTree, name: &TreeExpr) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        self.names
            .entry(tree.clone())
            .or_insert_with(|| name.clone());
        let part = FunctionalGraph::cyc(m as usize, tree)?.replicate(k)?;
        self.graph.union_with(&part)
    }

    /// The name of a tree in this result, falling back to a generic one.
    pub fn name_of(&self, tree: &RootedTree) -> TreeExpr {
        self.names
            .get(tree)
            .cloned()
            .unwrap_or_else(|| TreeExpr::describe(tree))
    }
}

fn check_t(t: u64) -> Result<()> {
    if t == 0 {
        return Err(Error::domain("t must be positive"));
    }
    Ok(())
}

/// `(multiplicity, cycle length)` pairs of the cycles on periodic points of
/// a product of cyclic groups whose coprime-to-`t` parts are `omegas`,
/// summed over divisor tuples accepted by `keep`.
fn cycle_counts(omegas: &[u64], t: u64, keep: impl Fn(&[u64]) -> bool) -> Result<Vec<(u64, u64)>> {
    let divs: Vec<Vec<u64>> = omegas.iter().map(|&w| divisors(w)).collect();
    let mut points_by_order: BTreeMap<u64, u64> = BTreeMap::new();
    let mut idx = vec![0usize; omegas.len()];
    let mut tuple = vec![0u64; omegas.len()];
    loop {
        for (i, &j) in idx.iter().enumerate() {
            tuple[i] = divs[i][j];
        }
        if keep(&tuple) {
            let mut phi = 1u64;
            let mut ord = 1u64;
            for &d in &tuple {
                phi = phi
                    .checked_mul(euler_phi(d)?)
                    .ok_or(Error::Overflow("phi product"))?;
                ord = lcm(ord, mult_order(t, d)?)?;
            }
            *points_by_order.entry(ord).or_insert(0) += phi;
        }
        // odometer over divisor tuples
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(points_by_order
                    .into_iter()
                    .map(|(ord, pts)| (pts / ord, ord))
                    .collect());
            }
            idx[i] += 1;
            if idx[i] < divs[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Graph of `x -> t x` on `Z_n`.
pub fn cyclic_graph(n: u64, t: u64) -> Result<FunctionalGraph> {
    Ok(cyclic_result(n, t)?.graph)
}

fn cyclic_result(n: u64, t: u64) -> Result<StructuralResult> {
    let mut r = abelian_result(&[n], t)?;
    r.provenance = Provenance::CyclicFormula;
    Ok(r)
}

/// Graph of `x -> t x` on `Z_r1 x ... x Z_rk`.
pub fn abelian_graph(rs: &[u64], t: u64) -> Result<FunctionalGraph> {
    Ok(abelian_result(rs, t)?.graph)
}

fn abelian_result(rs: &[u64], t: u64) -> Result<StructuralResult> {
    check_t(t)?;
    let mut seq = Sequence::one();
    let mut omegas = Vec::with_capacity(rs.len());
    for &r in rs {
        let split = nu_omega_split(r, t)?;
        seq = seq.product(&iterated_gcd(split.nu, t)?)?;
        omegas.push(split.omega);
    }
    let tree = RootedTree::elementary(&seq);
    let name = TreeExpr::elementary(seq);
    let mut r = StructuralResult::new(Provenance::AbelianFormula);
    for (k, m) in cycle_counts(&omegas, t, |_| true)? {
        r.push(k, m, &tree, &name)?;
    }
    r.central_tree = Some(tree);
    Ok(r)
}

/// Graph of the power map on any flower group of type `ft`.
pub fn flower_graph(ft: &FlowerType, t: u64) -> Result<FunctionalGraph> {
    Ok(flower_result(ft, t)?.graph)
}

pub fn flower_result(ft: &FlowerType, t: u64) -> Result<StructuralResult> {
    check_t(t)?;
    let central = central_tree(ft, t)?;
    let expected = central_node_count(ft, t)?;
    if central.node_count() as u64 != expected {
        return Err(Error::Invariant(format!(
            "central tree of {ft} for t = {t} has {} nodes, expected {expected}",
            central.node_count()
        )));
    }
    let central_name = match central_tree_rules(ft, t)? {
        Some(e) if e.eval()? == central => e,
        _ => TreeExpr::describe(&central),
    };
    let omega0 = nu_omega_split(ft.c0(), t)?.omega;
    let mut r = StructuralResult::new(Provenance::FlowerTheorem);
    for &c in ft.petals() {
        let split = nu_omega_split(c, t)?;
        let seq = iterated_gcd(split.nu, t)?;
        let tree = RootedTree::elementary(&seq);
        for (k, m) in cycle_counts(&[split.omega], t, |d| omega0 % d[0] != 0)? {
            r.push(k, m, &tree, &TreeExpr::elementary(seq.clone()))?;
        }
    }
    for (k, m) in cycle_counts(&[omega0], t, |_| true)? {
        r.push(k, m, &central, &central_name)?;
    }
    r.flower_type = Some(ft.clone());
    r.central_tree = Some(central);
    Ok(r)
}

/// Closed form for `Q_4n`.
pub fn quaternion_graph(n: u64, t: u64) -> Result<FunctionalGraph> {
    Ok(quaternion_result(n, t)?.graph)
}

pub fn quaternion_result(n: u64, t: u64) -> Result<StructuralResult> {
    check_t(t)?;
    if n < 2 {
        return Err(Error::construction(format!("Q{}", 4 * n), "needs n >= 2"));
    }
    let split = nu_omega_split(2 * n, t)?;
    let seq = iterated_gcd(split.nu, t)?;
    let tree = RootedTree::elementary(&seq);
    let name = TreeExpr::elementary(seq.clone());
    let mut r = StructuralResult::new(Provenance::QuaternionCorollary);
    let mut petals = vec![4u64; n as usize];
    petals.push(2 * n);
    r.flower_type = Some(FlowerType::new(2, petals)?);
    if t % 2 == 1 {
        for (k, m) in cycle_counts(&[split.omega], t, |d| d[0] > 2)? {
            r.push(k, m, &tree, &name)?;
        }
        let kt = if t % 4 == 1 { 2 } else { 1 };
        r.push(kt * n, 2 / kt, &RootedTree::leaf(), &TreeExpr::Leaf)?;
        r.push(2, 1, &tree, &name)?;
        r.central_tree = Some(tree);
    } else {
        for (k, m) in cycle_counts(&[split.omega], t, |d| d[0] > 1)? {
            r.push(k, m, &tree, &name)?;
        }
        let star = TreeExpr::star(2 * n);
        let t0_name = if t.is_multiple_of(4) {
            TreeExpr::sum_of([name.clone(), star])
        } else {
            let alpha = two_adic_valuation(n) as usize;
            TreeExpr::JSum(Box::new(name.clone()), alpha, Box::new(star))
        };
        let t0 = t0_name.eval()?;
        r.push(1, 1, &t0, &t0_name)?;
        r.central_tree = Some(t0);
    }
    Ok(r)
}

/// `1 + s + ... + s^(j-1)` modulo `n`.
fn geometric_sum(s: u64, j: u64, n: u64) -> u64 {
    let (s, n) = (s as u128, n as u128);
    let mut sum = 0u128;
    let mut p = 1u128 % n;
    for _ in 0..j {
        sum = (sum + p) % n;
        p = p * s % n;
    }
    sum as u64
}

/// Whether `C_n x|_s C_m` meets the conditions under which it is a flower
/// group of type `(1; m, ..., m, n)` with `n` petals of order `m`.
pub fn semidirect_is_flower(n: u64, m: u64, s: u64) -> bool {
    n >= 2
        && m >= 2
        && geometric_sum(s, m, n) == 0
        && (1..m).all(|j| crate::arith::gcd(n, geometric_sum(s, j, n)) == 1)
}

/// Flower groups with trivial pistil whose petals come in classes
/// `(count, order)`: every petal contributes its own cycles and the central
/// tree is the sum of the petal trees.
fn trivial_pistil_result(
    classes: &[(u64, u64)],
    t: u64,
    provenance: Provenance,
) -> Result<StructuralResult> {
    let mut r = StructuralResult::new(provenance);
    let mut central_terms = Vec::new();
    let mut central_trees = Vec::new();
    let mut petals = Vec::new();
    for &(count, order) in classes {
        let split = nu_omega_split(order, t)?;
        let seq = iterated_gcd(split.nu, t)?;
        let tree = RootedTree::elementary(&seq);
        let name = TreeExpr::elementary(seq);
        for (k, m) in cycle_counts(&[split.omega], t, |d| d[0] != 1)? {
            let k = k
                .checked_mul(count)
                .ok_or(Error::Overflow("cycle multiplicity"))?;
            r.push(k, m, &tree, &name)?;
        }
        central_terms.push(TreeExpr::scaled(count, name));
        central_trees.push(tree.scalar_dot(count)?);
        petals.extend(std::iter::repeat_n(order, count as usize));
    }
    let central = RootedTree::sum(&central_trees);
    r.push(1, 1, &central, &TreeExpr::sum_of(central_terms))?;
    r.central_tree = Some(central);
    r.flower_type = Some(FlowerType::new(1, petals)?);
    Ok(r)
}

/// Closed form for `C_n x|_s C_m` under [`semidirect_is_flower`].
pub fn semidirect_graph(n: u64, m: u64, s: u64, t: u64) -> Result<FunctionalGraph> {
    Ok(semidirect_result(n, m, s, t)?.graph)
}

pub fn semidirect_result(n: u64, m: u64, s: u64, t: u64) -> Result<StructuralResult> {
    check_t(t)?;
    if !semidirect_is_flower(n, m, s) {
        return Err(Error::domain(format!(
            "C{n} x|_{s} C{m} does not satisfy the flower conditions for the semidirect closed form"
        )));
    }
    trivial_pistil_result(&[(1, n), (n, m)], t, Provenance::SemidirectCorollary)
}

/// Closed form for `PGL(2, q)`, `q >= 4`.
pub fn pgl_graph(q: u64, t: u64) -> Result<FunctionalGraph> {
    Ok(pgl_result(q, t)?.graph)
}

pub fn pgl_result(q: u64, t: u64) -> Result<StructuralResult> {
    check_t(t)?;
    if q < 4 {
        return Err(Error::domain("the PGL(2, q) closed form needs q >= 4"));
    }
    let p = Field::new(q)?.characteristic() as u64;
    let classes = [
        (q * (q + 1) / 2, q - 1),
        (q * (q - 1) / 2, q + 1),
        ((q * q - 1) / (p - 1), p),
    ];
    trivial_pistil_result(&classes, t, Provenance::PglCorollary)
}

/// The structural description used for a group spec, or `None` when the
/// group is neither abelian nor a flower group.
pub fn describe_spec(
    spec: &GroupSpec,
    group: &dyn FiniteGroup,
    t: u64,
) -> Result<Option<StructuralResult>> {
    check_t(t)?;
    if let GroupSpec::Cyclic(n) = spec {
        return cyclic_result(*n, t).map(Some);
    }
    if let Some(rs) = spec.abelian_factors() {
        return abelian_result(&rs, t).map(Some);
    }
    match spec {
        GroupSpec::Quaternion(order) => return quaternion_result(order / 4, t).map(Some),
        GroupSpec::Dihedral(order) if *order >= 6 => {
            let n = order / 2;
            return semidirect_result(n, 2, n - 1, t).map(Some);
        }
        GroupSpec::Semidirect { n, m, s } if semidirect_is_flower(*n, *m, *s) => {
            return semidirect_result(*n, *m, *s, t).map(Some);
        }
        GroupSpec::Pgl2(q) if *q >= 4 => return pgl_result(*q, t).map(Some),
        _ => {}
    }
    describe_group(group, t)
}

/// Structural description from the group table alone: cyclic formula for
/// cyclic groups, flower theorem for flower groups.
pub fn describe_group(group: &dyn FiniteGroup, t: u64) -> Result<Option<StructuralResult>> {
    match flower_decompose(group) {
        Err(Error::Domain(_)) => cyclic_result(group.order() as u64, t).map(Some),
        Err(e) => Err(e),
        Ok(FlowerOutcome::NotFlower) => Ok(None),
        Ok(FlowerOutcome::Flower(d)) => flower_result(&d.flower_type, t).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgraph::{cyc, from_map};
    use crate::tree::Forest;

    fn t(v: &[u64]) -> RootedTree {
        RootedTree::elementary(&Sequence::new(v.to_vec()).unwrap())
    }

    fn ty(c0: u64, petals: &[u64]) -> FlowerType {
        FlowerType::new(c0, petals.to_vec()).unwrap()
    }

    fn union(parts: &[(u64, usize, RootedTree)]) -> FunctionalGraph {
        let mut g = FunctionalGraph::empty();
        for (k, m, tree) in parts {
            g.union_with(&cyc(*m, tree).unwrap().replicate(*k).unwrap())
                .unwrap();
        }
        g
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cyclic_graph(4, 2).unwrap(), cyc(1, &t(&[2, 2])).unwrap());
        // Z_6 with t = 14: nu = 2, omega = 3, and 14 = 2 mod 3
        assert_eq!(
            cyclic_graph(6, 14).unwrap(),
            union(&[(1, 1, t(&[2])), (1, 2, t(&[2]))])
        );
        assert_eq!(
            cyclic_graph(9, 10).unwrap(),
            union(&[(9, 1, RootedTree::leaf())])
        );
        for n in 1..40 {
            for tt in 1..20 {
                let g = cyclic_graph(n, tt).unwrap();
                assert_eq!(
                    g,
                    from_map(n as usize, |x| (x as u64 * tt % n) as usize).unwrap(),
                    "n={n} t={tt}"
                );
            }
        }
    }

    #[test]
    fn abelian_examples() {
        let g = abelian_graph(&[6, 12], 14).unwrap();
        assert_eq!(g, union(&[(1, 1, t(&[4, 2])), (4, 2, t(&[4, 2]))]));
        assert_eq!(
            abelian_graph(&[12], 5).unwrap(),
            cyclic_graph(12, 5).unwrap()
        );
        assert_eq!(
            abelian_graph(&[2, 2], 3).unwrap(),
            union(&[(4, 1, RootedTree::leaf())])
        );
        assert_eq!(
            abelian_graph(&[], 3).unwrap(),
            union(&[(1, 1, RootedTree::leaf())])
        );
    }

    #[test]
    fn flower_examples() {
        let mut q24 = vec![4u64; 6];
        q24.push(12);
        let g = flower_graph(&ty(2, &q24), 3).unwrap();
        let expected = union(&[(1, 2, t(&[3])), (2, 1, t(&[3])), (6, 2, RootedTree::leaf())]);
        assert_eq!(g, expected);
        assert_eq!(quaternion_graph(6, 3).unwrap(), expected);

        let mut semi = vec![4u64; 65];
        semi.push(65);
        let central = RootedTree::sum([&t(&[5]), &t(&[2, 2]).scalar_dot(65).unwrap()]);
        let expected = union(&[(2, 6, t(&[5])), (1, 1, central)]);
        assert_eq!(flower_graph(&ty(1, &semi), 10).unwrap(), expected);
        assert_eq!(semidirect_graph(65, 4, 8, 10).unwrap(), expected);

        let mut pgl = vec![4u64; 15];
        pgl.extend([6; 10]);
        pgl.extend([5; 6]);
        let central = RootedTree::sum([
            &t(&[2, 2]).scalar_dot(15).unwrap(),
            &t(&[2]).scalar_dot(10).unwrap(),
        ]);
        let expected = union(&[
            (10, 2, t(&[2])),
            (6, 4, RootedTree::leaf()),
            (1, 1, central),
        ]);
        assert_eq!(flower_graph(&ty(1, &pgl), 2).unwrap(), expected);
        assert_eq!(pgl_graph(5, 2).unwrap(), expected);
    }

    #[test]
    fn quaternion_even_cases() {
        let star = RootedTree::enclose(&Forest::copies(24, &RootedTree::leaf()));
        let t0 = t(&[2, 2, 2]).j_sum(2, &star).unwrap();
        let expected = union(&[(2, 1, t(&[2, 2, 2])), (1, 1, t0)]);
        assert_eq!(quaternion_graph(12, 10).unwrap(), expected);
        let r = quaternion_result(12, 10).unwrap();
        assert_eq!(
            r.name_of(r.central_tree.as_ref().unwrap()).to_string(),
            "T(2,2,2) +_2 <24x*>"
        );
    }

    #[test]
    fn semidirect_conditions() {
        assert!(semidirect_is_flower(65, 4, 8));
        assert!(semidirect_is_flower(7, 3, 2));
        assert!(semidirect_is_flower(2, 2, 1));
        assert!(!semidirect_is_flower(5, 4, 1));
        assert!(semidirect_graph(5, 4, 1, 2).is_err());
    }

    #[test]
    fn pgl_rejects_small_q() {
        assert!(pgl_graph(3, 2).is_err());
        assert!(pgl_graph(6, 2).is_err());
    }
}
