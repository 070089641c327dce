//! JSON formats for instances and run traces.
//!
//! Struct fields are declared in alphabetical order so serde emits sorted
//! keys; edges come out sorted by `(u, v)`. Rationals are `"num/den"`.

use serde::{Deserialize, Serialize};

use crate::covering::{Instance, Link, LinkTag};
use crate::error::{Error, Result};
use crate::multigraph::{Cut, MultiGraph};
use crate::rational;
use crate::wgmv::{DualSolution, RunTrace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub edges: Vec<EdgeRecord>,
    pub k: u64,
    pub links: Vec<LinkRecord>,
    pub nodes: Vec<NodeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub mult: u64,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    pub cost: String,
    pub tag: Option<LinkTag>,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: usize,
    pub label: String,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let g = &inst.graph;
        InstanceFile {
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    mult: e.mult,
                    u: e.u,
                    v: e.v,
                })
                .collect(),
            k: inst.k,
            links: inst
                .links
                .iter()
                .map(|l| LinkRecord {
                    cost: rational::format(&l.cost),
                    tag: l.tag,
                    u: l.u,
                    v: l.v,
                })
                .collect(),
            nodes: (0..g.node_count())
                .map(|id| NodeRecord {
                    id,
                    label: g.display_name(id),
                })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        for (pos, node) in self.nodes.iter().enumerate() {
            if node.id != pos {
                return Err(Error::InvalidInput(format!(
                    "node ids must be 0..n in order; found {} at position {pos}",
                    node.id
                )));
            }
        }
        let mut g = MultiGraph::with_labels(self.nodes.iter().map(|n| n.label.clone()));
        for e in &self.edges {
            if e.mult == 0 {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) has multiplicity 0",
                    e.u, e.v
                )));
            }
            g.add_edge(e.u, e.v, e.mult)
                .map_err(|err| Error::InvalidInput(err.to_string()))?;
        }
        let links = self
            .links
            .iter()
            .map(|l| Ok(Link::new(l.u, l.v, rational::parse(&l.cost)?, l.tag)))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(g, links, self.k)
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(inst))
        .expect("instance records always serialize");
    s.push('\n');
    s
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("instance JSON: {e}")))?;
    file.to_instance()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEntry {
    pub cut: Vec<usize>,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub active_cores: Vec<Vec<usize>>,
    pub duals_snapshot: Vec<DualEntry>,
    pub increment: String,
    pub newly_tight: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub deletions: Vec<usize>,
    #[serde(rename = "final")]
    pub final_links: Vec<usize>,
    pub iterations: Vec<IterationRecord>,
}

pub fn duals_to_records(duals: &DualSolution) -> Vec<DualEntry> {
    duals
        .iter()
        .map(|(s, y)| DualEntry {
            cut: s.members(),
            y: rational::format(y),
        })
        .collect()
}

pub fn duals_from_records(n: usize, records: &[DualEntry]) -> Result<DualSolution> {
    let mut duals = DualSolution::new();
    for r in records {
        duals.set(Cut::new(n, r.cut.iter().copied())?, rational::parse(&r.y)?);
    }
    Ok(duals)
}

impl TraceFile {
    pub fn from_trace(trace: &RunTrace) -> Self {
        TraceFile {
            deletions: trace.deletions.clone(),
            final_links: trace.final_links.clone(),
            iterations: trace
                .iterations
                .iter()
                .map(|it| IterationRecord {
                    active_cores: it.active_cores.iter().map(Cut::members).collect(),
                    duals_snapshot: duals_to_records(&it.duals_snapshot),
                    increment: rational::format(&it.increment),
                    newly_tight: it.newly_tight.clone(),
                })
                .collect(),
        }
    }
}

pub fn trace_to_json(trace: &RunTrace) -> String {
    let mut s = serde_json::to_string_pretty(&TraceFile::from_trace(trace))
        .expect("trace records always serialize");
    s.push('\n');
    s
}
