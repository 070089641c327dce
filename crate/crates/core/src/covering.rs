//! The small-cut family, link-set feasibility and core computation.
//!
//! Feasibility has two independent routes. [`covers`] reduces to a single
//! global minimum cut: add every selected link to the graph with capacity
//! `k`; a cut is small and uncovered exactly when its degree in that
//! auxiliary graph is below `k`. [`covers_by_enumeration`] walks every cut
//! that excludes the root and is kept as a cross-check.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{Cut, MultiGraph, NodeId};
use crate::rational::{self, Rational};

/// Default node-count ceiling for enumeration-based operations.
pub const DEFAULT_ENUM_BOUND: usize = 22;

/// Bitset enumeration works on single machine words.
const HARD_ENUM_LIMIT: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkTag {
    Red,
    Blue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Rational,
    pub tag: Option<LinkTag>,
}

impl Link {
    pub fn new(u: NodeId, v: NodeId, cost: Rational, tag: Option<LinkTag>) -> Self {
        Link { u, v, cost, tag }
    }

    /// True iff exactly one endpoint lies in `s`.
    pub fn crosses(&self, s: &Cut) -> bool {
        s.contains(self.u) != s.contains(self.v)
    }

    #[inline]
    fn crosses_mask(&self, mask: u64) -> bool {
        ((mask >> self.u) ^ (mask >> self.v)) & 1 == 1
    }
}

pub fn link_crosses(link: &Link, s: &Cut) -> bool {
    link.crosses(s)
}

/// A graph, an ordered link list, and the threshold `k`. Links are
/// identified by their index in `links`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: MultiGraph,
    pub links: Vec<Link>,
    pub k: u64,
}

impl Instance {
    pub fn new(graph: MultiGraph, links: Vec<Link>, k: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        let n = graph.node_count();
        for (i, l) in links.iter().enumerate() {
            if l.u >= n || l.v >= n {
                return Err(Error::InvalidInput(format!(
                    "link {i} ({}, {}) out of range for {n} nodes",
                    l.u, l.v
                )));
            }
            if l.u == l.v {
                return Err(Error::InvalidInput(format!("link {i} is a loop at {}", l.u)));
            }
            if !rational::is_nonnegative(&l.cost) {
                return Err(Error::InvalidInput(format!("link {i} has negative cost")));
            }
        }
        Ok(Instance { graph, links, k })
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// The node labelled `r` if any, otherwise node 0.
    pub fn root(&self) -> NodeId {
        self.graph.node_by_label("r").unwrap_or(0)
    }

    pub fn is_small_cut(&self, s: &Cut) -> Result<bool> {
        Ok(self.graph.cut_degree(s)? < self.k)
    }

    pub fn cost_of(&self, selected: &[usize]) -> Rational {
        selected
            .iter()
            .fold(rational::zero(), |acc, &i| acc + &self.links[i].cost)
    }

    pub fn tagged(&self, tag: LinkTag) -> Vec<usize> {
        self.links
            .iter()
            .enumerate()
            .filter(|(_, l)| l.tag == Some(tag))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn all_links(&self) -> Vec<usize> {
        (0..self.links.len()).collect()
    }

    fn check_indices(&self, selected: &[usize]) -> Result<()> {
        match selected.iter().find(|&&i| i >= self.links.len()) {
            Some(i) => Err(Error::InvalidInput(format!(
                "link index {i} out of range ({} links)",
                self.links.len()
            ))),
            None => Ok(()),
        }
    }
}

/// Min-cut route: true iff every small cut is crossed by a selected link.
pub fn covers(inst: &Instance, selected: &[usize]) -> Result<bool> {
    inst.check_indices(selected)?;
    if inst.node_count() < 2 {
        return Ok(true);
    }
    let mut aux = inst.graph.clone();
    for &i in selected {
        let l = &inst.links[i];
        aux.add_edge(l.u, l.v, inst.k)?;
    }
    Ok(aux.global_min_cut()?.0 >= inst.k)
}

fn check_enum_bound(n: usize, bound: usize) -> Result<()> {
    let bound = bound.min(HARD_ENUM_LIMIT);
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "nodes",
            size: n,
            bound,
        });
    }
    Ok(())
}

/// Masks of all small cuts excluding the root that no selected link crosses,
/// in increasing bitset order.
fn violated_masks(inst: &Instance, selected: &[usize], bound: usize) -> Result<Vec<u64>> {
    inst.check_indices(selected)?;
    let n = inst.node_count();
    check_enum_bound(n, bound)?;
    if n < 2 {
        return Ok(Vec::new());
    }
    let root = inst.root();
    let low = (1u64 << root) - 1;
    let chosen: Vec<&Link> = selected.iter().map(|&i| &inst.links[i]).collect();
    let g = &inst.graph;
    let k = inst.k;
    // Spread n-1 free bits around the root position.
    let masks = (1u64..(1u64 << (n - 1)))
        .into_par_iter()
        .map(|m| (m & low) | ((m & !low) << 1))
        .filter(|&mask| g.mask_degree(mask) < k && !chosen.iter().any(|l| l.crosses_mask(mask)))
        .collect::<Vec<u64>>();
    let mut masks = masks;
    masks.sort_unstable();
    Ok(masks)
}

/// Enumeration route for [`covers`]. Small cuts come in complementary
/// pairs, so only cuts that exclude the root are inspected.
pub fn covers_by_enumeration(inst: &Instance, selected: &[usize], bound: usize) -> Result<bool> {
    Ok(violated_masks(inst, selected, bound)?.is_empty())
}

/// All small cuts not yet covered, reported on the side excluding the root.
pub fn violated_cuts(inst: &Instance, selected: &[usize], bound: usize) -> Result<Vec<Cut>> {
    let n = inst.node_count();
    violated_masks(inst, selected, bound)?
        .into_iter()
        .map(|m| Cut::from_mask(n, m))
        .collect()
}

/// Inclusion-minimal uncovered small cuts over the full symmetric family.
pub fn cores_bruteforce(inst: &Instance, selected: &[usize], bound: usize) -> Result<Vec<Cut>> {
    let n = inst.node_count();
    let masks = violated_masks(inst, selected, bound)?;
    if masks.is_empty() {
        return Ok(Vec::new());
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut family: Vec<u64> = masks.iter().flat_map(|&m| [m, full ^ m]).collect();
    family.sort_unstable_by_key(|&m| (m.count_ones(), m));

    // Any non-minimal member contains a minimal one of smaller size,
    // which has already been seen.
    let mut cores: Vec<u64> = Vec::new();
    for m in family {
        if !cores.iter().any(|&c| c & !m == 0) {
            cores.push(m);
        }
    }
    for (i, &a) in cores.iter().enumerate() {
        if let Some(&b) = cores[i + 1..].iter().find(|&&b| a & b != 0) {
            return Err(Error::Invariant(format!(
                "cores {:?} and {:?} intersect",
                Cut::from_mask(n, a)?,
                Cut::from_mask(n, b)?
            )));
        }
    }
    cores.sort_unstable();
    cores.into_iter().map(|m| Cut::from_mask(n, m)).collect()
}

/// True iff `selected` covers and dropping any single link breaks coverage.
pub fn is_minimal_cover(inst: &Instance, selected: &[usize]) -> Result<bool> {
    let set: BTreeSet<usize> = selected.iter().copied().collect();
    let selected: Vec<usize> = set.into_iter().collect();
    if !covers(inst, &selected)? {
        return Err(Error::Infeasible("selection does not cover every small cut".into()));
    }
    for skip in 0..selected.len() {
        let rest: Vec<usize> = selected
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &i)| i)
            .collect();
        if covers(inst, &rest)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Supplies the cores of the uncovered part of the small-cut family.
pub trait CoreOracle {
    fn initial_cores(&self, inst: &Instance) -> Result<Vec<Cut>>;
    fn cores_given(&self, inst: &Instance, selected: &[usize]) -> Result<Vec<Cut>>;
}

/// Computes cores by exhaustive enumeration.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceCores {
    pub bound: usize,
}

impl Default for BruteForceCores {
    fn default() -> Self {
        BruteForceCores {
            bound: DEFAULT_ENUM_BOUND,
        }
    }
}

impl CoreOracle for BruteForceCores {
    fn initial_cores(&self, inst: &Instance) -> Result<Vec<Cut>> {
        cores_bruteforce(inst, &[], self.bound)
    }

    fn cores_given(&self, inst: &Instance, selected: &[usize]) -> Result<Vec<Cut>> {
        cores_bruteforce(inst, selected, self.bound)
    }
}
