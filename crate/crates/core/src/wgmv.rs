//! Two-phase primal-dual covering.
//!
//! Phase 1 grows the duals of the current cores at a common rate until some
//! unselected link becomes tight, then adds every tight link. Phase 2 walks
//! the selection backwards and drops each link whose removal keeps the
//! selection feasible. All arithmetic is exact so that links tied at the
//! same moment stay tied.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::covering::{covers, CoreOracle, Instance, LinkTag};
use crate::error::{Error, Result};
use crate::multigraph::Cut;
use crate::rational::{self, Rational};

/// Order in which links tight at the same moment are appended to the
/// selection. Phase 2 visits them in the reverse of that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TiePolicy {
    /// Red links, then untagged, then blue; input order within each group.
    #[default]
    AdversarialRedFirst,
    /// Blue links, then untagged, then red.
    HelpfulBlueFirst,
    InputOrder,
    /// Cheapest first, input order among equal costs.
    CostAscending,
}

impl TiePolicy {
    pub const ALL: [TiePolicy; 4] = [
        TiePolicy::AdversarialRedFirst,
        TiePolicy::HelpfulBlueFirst,
        TiePolicy::InputOrder,
        TiePolicy::CostAscending,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TiePolicy::AdversarialRedFirst => "adversarial-red-first",
            TiePolicy::HelpfulBlueFirst => "helpful-blue-first",
            TiePolicy::InputOrder => "input-order",
            TiePolicy::CostAscending => "cost-ascending",
        }
    }

    fn tag_rank(self, tag: Option<LinkTag>) -> u8 {
        match (self, tag) {
            (_, None) => 1,
            (TiePolicy::AdversarialRedFirst, Some(LinkTag::Red)) => 0,
            (TiePolicy::AdversarialRedFirst, Some(LinkTag::Blue)) => 2,
            (TiePolicy::HelpfulBlueFirst, Some(LinkTag::Blue)) => 0,
            (TiePolicy::HelpfulBlueFirst, Some(LinkTag::Red)) => 2,
            _ => 1,
        }
    }

    /// Sorts link indices into append order.
    pub fn order(self, inst: &Instance, links: &mut [usize]) {
        match self {
            TiePolicy::InputOrder => links.sort_unstable(),
            TiePolicy::CostAscending => {
                links.sort_by(|&a, &b| inst.links[a].cost.cmp(&inst.links[b].cost).then(a.cmp(&b)))
            }
            _ => links.sort_by_key(|&i| (self.tag_rank(inst.links[i].tag), i)),
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TiePolicy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown tie policy {s:?}")))
    }
}

/// Dual values `y_S`, keyed by cut. Absent cuts have value zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualSolution {
    entries: BTreeMap<Cut, Rational>,
}

impl DualSolution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, s: &Cut) -> Rational {
        self.entries.get(s).cloned().unwrap_or_else(rational::zero)
    }

    pub fn set(&mut self, s: Cut, y: Rational) {
        self.entries.insert(s, y);
    }

    pub fn raise(&mut self, s: &Cut, by: &Rational) {
        *self.entries.entry(s.clone()).or_insert_with(rational::zero) += by;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cut, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ y_S` over cuts crossed by link `e`.
    pub fn load(&self, inst: &Instance, e: usize) -> Rational {
        let link = &inst.links[e];
        self.entries
            .iter()
            .filter(|(s, _)| link.crosses(s))
            .fold(rational::zero(), |acc, (_, y)| acc + y)
    }
}

pub fn dual_objective(duals: &DualSolution) -> Rational {
    duals.iter().fold(rational::zero(), |acc, (_, y)| acc + y)
}

/// Checks the packing constraints: every link's load is at most its cost
/// and all values are nonnegative. Keys must be small cuts.
pub fn dual_feasible(inst: &Instance, duals: &DualSolution) -> Result<bool> {
    for (s, y) in duals.iter() {
        if !inst.is_small_cut(s)? {
            return Err(Error::NotSmallCut(s.members()));
        }
        if y.is_negative() {
            return Ok(false);
        }
    }
    Ok((0..inst.links.len()).all(|e| duals.load(inst, e) <= inst.links[e].cost))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration {
    pub active_cores: Vec<Cut>,
    pub increment: Rational,
    pub newly_tight: Vec<usize>,
    pub duals_snapshot: DualSolution,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunTrace {
    pub iterations: Vec<Iteration>,
    pub deletions: Vec<usize>,
    pub final_links: Vec<usize>,
}

impl RunTrace {
    /// Links in the order Phase 1 appended them.
    pub fn addition_order(&self) -> Vec<usize> {
        self.iterations
            .iter()
            .flat_map(|it| it.newly_tight.iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Phase1Output {
    pub selected: Vec<usize>,
    pub duals: DualSolution,
    pub trace: RunTrace,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Final link indices, ascending.
    pub selected: Vec<usize>,
    pub duals: DualSolution,
    pub trace: RunTrace,
}

impl RunOutput {
    pub fn cost(&self, inst: &Instance) -> Rational {
        inst.cost_of(&self.selected)
    }
}

pub fn phase1(inst: &Instance, oracle: &dyn CoreOracle, policy: TiePolicy) -> Result<Phase1Output> {
    let m = inst.links.len();
    let mut selected: Vec<usize> = Vec::new();
    let mut in_selection = vec![false; m];
    let mut load: Vec<Rational> = vec![rational::zero(); m];
    let mut duals = DualSolution::new();
    let mut trace = RunTrace::default();

    while !covers(inst, &selected)? {
        let cores = if selected.is_empty() {
            oracle.initial_cores(inst)?
        } else {
            oracle.cores_given(inst, &selected)?
        };
        if cores.is_empty() {
            return Err(Error::Invariant(
                "selection is infeasible but the core oracle returned no cores".into(),
            ));
        }

        let crossings: Vec<usize> = inst
            .links
            .iter()
            .map(|l| cores.iter().filter(|c| l.crosses(c)).count())
            .collect();

        let slack = |e: usize| &inst.links[e].cost - &load[e];
        let unselected = (0..m).filter(|&e| !in_selection[e]);
        let increment = if unselected.clone().any(|e| slack(e).is_zero()) {
            // zero-cost links go in before anything is raised
            rational::zero()
        } else {
            unselected
                .filter(|&e| crossings[e] > 0)
                .map(|e| slack(e) / rational::int(crossings[e] as i64))
                .min()
                .ok_or_else(|| {
                    Error::Infeasible(format!(
                        "no unselected link crosses any of the {} active cores",
                        cores.len()
                    ))
                })?
        };

        if !increment.is_zero() {
            for c in &cores {
                duals.raise(c, &increment);
            }
            for e in 0..m {
                if crossings[e] > 0 {
                    load[e] += &increment * rational::int(crossings[e] as i64);
                }
            }
        }

        if let Some(e) = (0..m).find(|&e| load[e] > inst.links[e].cost) {
            return Err(Error::Invariant(format!("dual load exceeds the cost of link {e}")));
        }

        let mut newly_tight: Vec<usize> = (0..m)
            .filter(|&e| !in_selection[e] && load[e] == inst.links[e].cost)
            .collect();
        policy.order(inst, &mut newly_tight);
        for &e in &newly_tight {
            in_selection[e] = true;
        }
        selected.extend_from_slice(&newly_tight);

        trace.iterations.push(Iteration {
            active_cores: cores,
            increment,
            newly_tight,
            duals_snapshot: duals.clone(),
        });
    }

    Ok(Phase1Output {
        selected,
        duals,
        trace,
    })
}

/// Visits `ordered` from last to first and drops every link whose removal
/// leaves a feasible selection. Returns the survivors (ascending) and the
/// deleted links in deletion order.
pub fn reverse_delete(inst: &Instance, ordered: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if !covers(inst, ordered)? {
        return Err(Error::Infeasible(
            "reverse delete needs a feasible starting selection".into(),
        ));
    }
    let mut keep = vec![true; ordered.len()];
    let mut deletions = Vec::new();
    for pos in (0..ordered.len()).rev() {
        keep[pos] = false;
        let rest: Vec<usize> = ordered
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect();
        if covers(inst, &rest)? {
            deletions.push(ordered[pos]);
        } else {
            keep[pos] = true;
        }
    }
    let mut survivors: Vec<usize> = ordered
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&e, _)| e)
        .collect();
    survivors.sort_unstable();
    Ok((survivors, deletions))
}

pub fn run(inst: &Instance, oracle: &dyn CoreOracle, policy: TiePolicy) -> Result<RunOutput> {
    let Phase1Output {
        selected,
        duals,
        mut trace,
    } = phase1(inst, oracle, policy)?;
    let (survivors, deletions) = reverse_delete(inst, &selected)?;
    trace.deletions = deletions;
    trace.final_links = survivors.clone();
    Ok(RunOutput {
        selected: survivors,
        duals,
        trace,
    })
}
