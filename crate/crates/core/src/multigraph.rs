//! Undirected multigraphs with folded edge multiplicities, node cuts and
//! exact global minimum cuts.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// One stored edge record. Parallel edges are folded into `mult`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub mult: u64,
}

impl Edge {
    #[inline]
    pub fn crosses_mask(&self, mask: u64) -> bool {
        ((mask >> self.u) ^ (mask >> self.v)) & 1 == 1
    }
}

/// Capacitated undirected multigraph on nodes `0..n`.
///
/// Edge records are kept sorted by `(u, v)` with `u < v`, at most one record
/// per unordered pair, and never with multiplicity zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
    labels: Vec<Option<String>>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            labels: vec![None; n],
        }
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<Option<String>> = labels.into_iter().map(|s| Some(s.into())).collect();
        MultiGraph {
            n: labels.len(),
            edges: Vec::new(),
            labels,
        }
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId, u64)>,
    ) -> Result<Self> {
        let mut g = MultiGraph::new(n);
        for (u, v, m) in edges {
            g.add_edge(u, v, m)?;
        }
        Ok(g)
    }

    /// Adds `mult` parallel `uv` edges, folding into an existing record.
    /// A multiplicity of zero is accepted and stores nothing.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, mult: u64) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {} nodes",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
        }
        if mult == 0 {
            return Ok(());
        }
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        match self.edges.binary_search_by(|e| (e.u, e.v).cmp(&(u, v))) {
            Ok(i) => self.edges[i].mult += mult,
            Err(i) => self.edges.insert(i, Edge { u, v, mult }),
        }
        Ok(())
    }

    pub fn set_label(&mut self, v: NodeId, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    /// Label if present, otherwise the decimal node id.
    pub fn display_name(&self, v: NodeId) -> String {
        self.label(v).map_or_else(|| v.to_string(), str::to_owned)
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn multiplicity(&self, u: NodeId, v: NodeId) -> u64 {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(u, v)))
            .map_or(0, |i| self.edges[i].mult)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.mult).sum()
    }

    fn check_cut(&self, s: &Cut) -> Result<()> {
        if s.n != self.n {
            return Err(Error::InvalidCut(format!(
                "cut over {} nodes used with a {}-node graph",
                s.n, self.n
            )));
        }
        Ok(())
    }

    /// `d(S)`: total multiplicity of edges with exactly one end in `s`.
    pub fn cut_degree(&self, s: &Cut) -> Result<u64> {
        self.check_cut(s)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| s.contains(e.u) != s.contains(e.v))
            .map(|e| e.mult)
            .sum())
    }

    /// `δ(S)` as stored records.
    pub fn delta_edges(&self, s: &Cut) -> Result<Vec<Edge>> {
        self.check_cut(s)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| s.contains(e.u) != s.contains(e.v))
            .copied()
            .collect())
    }

    /// Cut degree of the node set encoded by `mask` (bit `i` is node `i`).
    /// Only meaningful for graphs with at most 64 nodes.
    #[inline]
    pub fn mask_degree(&self, mask: u64) -> u64 {
        self.edges
            .iter()
            .filter(|e| e.crosses_mask(mask))
            .map(|e| e.mult)
            .sum()
    }

    /// Exact global minimum cut by Stoer–Wagner over the folded multiplicities.
    ///
    /// The witness is reported on the side that excludes node `n - 1`.
    pub fn global_min_cut(&self) -> Result<(u64, Cut)> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidGraph(format!(
                "global minimum cut needs at least 2 nodes, got {n}"
            )));
        }
        let mut w = vec![vec![0u64; n]; n];
        for e in &self.edges {
            w[e.u][e.v] += e.mult;
            w[e.v][e.u] += e.mult;
        }
        // groups[i]: original nodes merged into super-node i
        let mut groups: Vec<Vec<NodeId>> = (0..n).map(|v| vec![v]).collect();
        let mut alive: Vec<NodeId> = (0..n).collect();
        let mut best = u64::MAX;
        let mut best_side: Vec<NodeId> = Vec::new();

        while alive.len() > 1 {
            let m = alive.len();
            let mut added = vec![false; m];
            let mut conn = vec![0u64; m];
            let mut prev = 0usize;
            let mut last = 0usize;
            for step in 0..m {
                let mut sel = usize::MAX;
                for j in 0..m {
                    if !added[j] && (sel == usize::MAX || conn[j] > conn[sel]) {
                        sel = j;
                    }
                }
                added[sel] = true;
                if step == m - 1 {
                    if conn[sel] < best {
                        best = conn[sel];
                        best_side = groups[alive[sel]].clone();
                    }
                    last = sel;
                } else {
                    prev = sel;
                    for j in 0..m {
                        if !added[j] {
                            conn[j] += w[alive[sel]][alive[j]];
                        }
                    }
                }
            }
            let (s, t) = (alive[prev], alive[last]);
            let moved = std::mem::take(&mut groups[t]);
            groups[s].extend(moved);
            for &x in &alive {
                w[s][x] += w[t][x];
                w[x][s] = w[s][x];
            }
            w[s][s] = 0;
            alive.remove(last);
        }

        let mut side = Cut::new(n, best_side)?;
        if side.contains(n - 1) {
            side = side.complement();
        }
        Ok((best, side))
    }
}

/// A proper nonempty node subset `∅ ≠ S ⊂ V`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    n: usize,
    words: Vec<u64>,
}

impl Cut {
    pub fn new(n: usize, members: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut words = vec![0u64; n.div_ceil(64)];
        for v in members {
            if v >= n {
                return Err(Error::InvalidCut(format!("node {v} out of range for {n} nodes")));
            }
            words[v / 64] |= 1 << (v % 64);
        }
        Cut::from_words(n, words)
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidCut(format!("mask form needs n <= 64, got {n}")));
        }
        if n < 64 && mask >> n != 0 {
            return Err(Error::InvalidCut(format!("mask {mask:#x} has bits beyond {n} nodes")));
        }
        Cut::from_words(n, vec![mask])
    }

    fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        let count: usize = words.iter().map(|w| w.count_ones() as usize).sum();
        if count == 0 {
            return Err(Error::InvalidCut("empty node set".into()));
        }
        if count == n {
            return Err(Error::InvalidCut("node set is all of V".into()));
        }
        Ok(Cut { n, words })
    }

    pub fn singleton(n: usize, v: NodeId) -> Result<Self> {
        Cut::new(n, [v])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        v < self.n && (self.words[v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Always false: cuts are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> Vec<NodeId> {
        (0..self.n).filter(|&v| self.contains(v)).collect()
    }

    pub fn complement(&self) -> Cut {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        Cut { n: self.n, words }
    }

    pub fn is_subset_of(&self, other: &Cut) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Cut) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Cut) -> Result<Cut> {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Cut::from_words(self.n, words)
    }

    /// The bitset as a single word, when `n <= 64`.
    pub fn mask(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }
}

impl Ord for Cut {
    /// Orders by ambient size, then by bitset value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}
