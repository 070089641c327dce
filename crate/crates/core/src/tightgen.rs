//! The gadget family on which the primal-dual method is off by `5p/(p+2)`.
//!
//! One gadget has nodes `t, a, x, y, z, b, r`. Gluing `p` copies identifies
//! the axis nodes `r, b, z` and thins the shared `br` and `zb` bundles, which
//! gives `4p + 3` nodes. Red links `t_i x_i, a_i y_i, y_i r` form the
//! solution the algorithm returns; blue links `t_i b, r z` form the optimum.
//!
//! Green multiplicities per gadget are
//!
//! | pair  | multiplicity |
//! |-------|--------------|
//! | `ta`  | `k - q`      |
//! | `ar`  | `q - 1`      |
//! | `tx`  | `q - 1`      |
//! | `ax`  | `1`          |
//! | `xy`  | `k - q`      |
//! | `yz`  | `k - q`      |
//!
//! plus the shared `zb: k - pq - 1` and `br: k - pq`. Every generated graph is
//! checked against the closed-form cut degrees in [`degree_identities`]
//! before it is returned.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::covering::{cores_bruteforce, CoreOracle, Instance, Link, LinkTag};
use crate::error::{Error, Result};
use crate::multigraph::{Cut, MultiGraph, NodeId};
use crate::rational::{self, Rational};

/// Largest `p` for which the `2^p - 1` unions of `A_i` are expanded.
pub const MAX_UNION_EXPANSION: u64 = 20;

pub fn default_epsilon() -> Rational {
    rational::ratio(1, 100)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetParams {
    pub q: u64,
    pub p: u64,
    pub k: u64,
    pub epsilon: Rational,
}

impl GadgetParams {
    pub fn new(q: u64, p: u64, k: u64, epsilon: Rational) -> Result<Self> {
        let bad = |c: &str| {
            Err(Error::InvalidParams {
                constraint: c.to_owned(),
            })
        };
        if q < 1 {
            return bad("q >= 1");
        }
        if p < 1 {
            return bad("p >= 1");
        }
        if !rational::is_nonnegative(&epsilon) {
            return bad("epsilon >= 0");
        }
        if p == 1 && k < 2 * q + 1 {
            return bad("k >= 2q+1");
        }
        if p >= 2 && k < 2 * p * q + 1 {
            return bad("k >= 2pq+1");
        }
        Ok(GadgetParams { q, p, k, epsilon })
    }

    pub fn exact(q: u64, p: u64, k: u64) -> Result<Self> {
        Self::new(q, p, k, rational::zero())
    }

    pub fn node_count(&self) -> usize {
        4 * self.p as usize + 3
    }
}

/// Node ids of one gadget copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetNodes {
    pub t: NodeId,
    pub a: NodeId,
    pub x: NodeId,
    pub y: NodeId,
}

/// Link indices of one gadget copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLinks {
    pub tx: usize,
    pub ay: usize,
    pub yr: usize,
    pub tb: usize,
}

#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub instance: Instance,
    pub params: GadgetParams,
    pub r: NodeId,
    pub b: NodeId,
    pub z: NodeId,
    pub gadgets: Vec<GadgetNodes>,
    pub gadget_links: Vec<GadgetLinks>,
    pub rz: usize,
    pub red: Vec<usize>,
    pub blue: Vec<usize>,
}

fn role_name(letter: &str, i: usize, p: u64) -> String {
    if p == 1 {
        letter.to_owned()
    } else {
        format!("{letter}_{}", i + 1)
    }
}

impl LabeledInstance {
    pub fn n(&self) -> usize {
        self.instance.node_count()
    }

    pub fn roles(&self) -> BTreeMap<String, NodeId> {
        let p = self.params.p;
        let mut roles = BTreeMap::new();
        for (i, g) in self.gadgets.iter().enumerate() {
            roles.insert(role_name("t", i, p), g.t);
            roles.insert(role_name("a", i, p), g.a);
            roles.insert(role_name("x", i, p), g.x);
            roles.insert(role_name("y", i, p), g.y);
        }
        roles.insert("r".into(), self.r);
        roles.insert("b".into(), self.b);
        roles.insert("z".into(), self.z);
        roles
    }

    fn cut(&self, members: impl IntoIterator<Item = NodeId>) -> Cut {
        Cut::new(self.n(), members).expect("gadget cuts are proper")
    }

    pub fn r_cut(&self) -> Cut {
        self.cut([self.r])
    }

    pub fn t_cut(&self, i: usize) -> Cut {
        self.cut([self.gadgets[i].t])
    }

    /// `A_i = {t_i, a_i}`.
    pub fn a_cut(&self, i: usize) -> Cut {
        let g = self.gadgets[i];
        self.cut([g.t, g.a])
    }

    /// `X_i = A_i ∪ {x_i}`.
    pub fn x_cut(&self, i: usize) -> Cut {
        let g = self.gadgets[i];
        self.cut([g.t, g.a, g.x])
    }

    /// `Y_i = X_i ∪ {y_i}`.
    pub fn y_cut(&self, i: usize) -> Cut {
        let g = self.gadgets[i];
        self.cut([g.t, g.a, g.x, g.y])
    }

    /// The gray set `C = {z} ∪ ⋃ {x_i, y_i}`.
    pub fn c_cut(&self) -> Cut {
        self.cut(
            std::iter::once(self.z).chain(self.gadgets.iter().flat_map(|g| [g.x, g.y])),
        )
    }

    /// `⋃_{i ∈ I} A_i` for the index set encoded by `bits` (bit `i` is gadget `i`).
    pub fn a_union(&self, bits: u64) -> Cut {
        self.cut(
            self.gadgets
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .flat_map(|(_, g)| [g.t, g.a]),
        )
    }

    /// Rebuilds the role map of a generated instance from its node labels and
    /// link endpoints. The gadget parameters are read back from the graph
    /// (`q = k - mult(t_1, a_1)`) and the cost of `rz`; they are not checked
    /// against the degree identities here, so a corrupted file still loads.
    pub fn from_instance(instance: Instance) -> Result<Self> {
        let g = &instance.graph;
        let node = |label: &str| {
            g.node_by_label(label)
                .ok_or_else(|| Error::InvalidInput(format!("no node labelled {label:?}")))
        };
        let (r, b, z) = (node("r")?, node("b")?, node("z")?);
        let p: u64 = if g.node_by_label("t").is_some() {
            1
        } else {
            (1..).take_while(|i| g.node_by_label(&format!("t_{i}")).is_some()).count() as u64
        };
        if p == 0 {
            return Err(Error::InvalidInput("no gadget nodes (t or t_1) found".into()));
        }
        let mut gadgets = Vec::new();
        for i in 0..p as usize {
            gadgets.push(GadgetNodes {
                t: node(&role_name("t", i, p))?,
                a: node(&role_name("a", i, p))?,
                x: node(&role_name("x", i, p))?,
                y: node(&role_name("y", i, p))?,
            });
        }
        let find_link = |u: NodeId, v: NodeId| {
            instance
                .links
                .iter()
                .position(|l| (l.u, l.v) == (u, v) || (l.u, l.v) == (v, u))
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "missing link {}{}",
                        g.display_name(u),
                        g.display_name(v)
                    ))
                })
        };
        let mut gadget_links = Vec::new();
        for gn in &gadgets {
            gadget_links.push(GadgetLinks {
                tx: find_link(gn.t, gn.x)?,
                ay: find_link(gn.a, gn.y)?,
                yr: find_link(gn.y, r)?,
                tb: find_link(gn.t, b)?,
            });
        }
        let rz = find_link(r, z)?;
        let k = instance.k;
        let ta = g.multiplicity(gadgets[0].t, gadgets[0].a);
        if ta >= k {
            return Err(Error::InvalidInput(format!(
                "mult(t, a) = {ta} leaves no valid q for k = {k}"
            )));
        }
        let epsilon = &instance.links[rz].cost - rational::int(2);
        let params = GadgetParams {
            q: k - ta,
            p,
            k,
            epsilon,
        };
        let red = instance.tagged(LinkTag::Red);
        let blue = instance.tagged(LinkTag::Blue);
        Ok(LabeledInstance {
            instance,
            params,
            r,
            b,
            z,
            gadgets,
            gadget_links,
            rz,
            red,
            blue,
        })
    }
}

fn build(params: &GadgetParams) -> Result<LabeledInstance> {
    let GadgetParams { q, p, k, .. } = *params;
    let eps = &params.epsilon;

    // per-gadget t, a, x, y, then z, b, r
    let mut labels = Vec::new();
    for i in 0..p as usize {
        for letter in ["t", "a", "x", "y"] {
            labels.push(role_name(letter, i, p));
        }
    }
    labels.extend(["z", "b", "r"].map(String::from));
    let mut graph = MultiGraph::with_labels(labels);

    let base = 4 * p as usize;
    let (z, b, r) = (base, base + 1, base + 2);
    let gadgets: Vec<GadgetNodes> = (0..p as usize)
        .map(|i| GadgetNodes {
            t: 4 * i,
            a: 4 * i + 1,
            x: 4 * i + 2,
            y: 4 * i + 3,
        })
        .collect();

    for g in &gadgets {
        graph.add_edge(g.t, g.a, k - q)?;
        graph.add_edge(g.a, r, q - 1)?;
        graph.add_edge(g.t, g.x, q - 1)?;
        graph.add_edge(g.a, g.x, 1)?;
        graph.add_edge(g.x, g.y, k - q)?;
        graph.add_edge(g.y, z, k - q)?;
    }
    graph.add_edge(z, b, k - p * q - 1)?;
    graph.add_edge(b, r, k - p * q)?;

    // Blue links come first so that, among the several optimal covers, the
    // lexicographically smallest one is the blue set.
    let two = rational::int(2);
    let one = rational::int(1);
    let mut links = Vec::new();
    for g in &gadgets {
        links.push(Link::new(g.t, b, &one + eps, Some(LinkTag::Blue)));
    }
    let rz = links.len();
    links.push(Link::new(r, z, &two + eps, Some(LinkTag::Blue)));
    let mut gadget_links = Vec::new();
    for (i, g) in gadgets.iter().enumerate() {
        let first = links.len();
        links.push(Link::new(g.t, g.x, two.clone(), Some(LinkTag::Red)));
        links.push(Link::new(g.a, g.y, one.clone(), Some(LinkTag::Red)));
        links.push(Link::new(g.y, r, two.clone(), Some(LinkTag::Red)));
        gadget_links.push(GadgetLinks {
            tx: first,
            ay: first + 1,
            yr: first + 2,
            tb: i,
        });
    }

    let red = (rz + 1..links.len()).collect();
    let blue = (0..=rz).collect();
    let instance = Instance::new(graph, links, k)?;
    Ok(LabeledInstance {
        instance,
        params: params.clone(),
        r,
        b,
        z,
        gadgets,
        gadget_links,
        rz,
        red,
        blue,
    })
}

/// One closed-form cut degree and the value measured on the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub name: String,
    pub expected: u64,
    pub actual: u64,
}

impl DegreeCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

/// Every cut degree the construction is designed to produce.
///
/// `d(z)` and `d({y, z})` only have closed forms for the single gadget; the
/// remaining identities hold for every `p` (with `p = 1` they reduce to the
/// single-gadget values, e.g. `d(r) = k - p = k - 1`).
pub fn degree_identities(li: &LabeledInstance) -> Vec<DegreeCheck> {
    let GadgetParams { q, p, k, .. } = li.params;
    let g = &li.instance.graph;
    let d = |s: &Cut| g.cut_degree(s).expect("cut sized for this graph");
    let mut out = Vec::new();
    let mut push = |name: String, expected: u64, s: &Cut| {
        out.push(DegreeCheck {
            name,
            expected,
            actual: d(s),
        })
    };
    for (i, gn) in li.gadgets.iter().enumerate() {
        let sfx = if p == 1 { String::new() } else { format!("_{}", i + 1) };
        push(format!("d(t{sfx}) = k-1"), k - 1, &li.t_cut(i));
        push(format!("d(a{sfx}) = k"), k, &li.cut([gn.a]));
        push(format!("d(x{sfx}) = k"), k, &li.cut([gn.x]));
        push(format!("d(y{sfx}) = 2k-2q"), 2 * k - 2 * q, &li.cut([gn.y]));
        push(format!("d({{x{sfx},y{sfx}}}) = k"), k, &li.cut([gn.x, gn.y]));
        push(format!("d(A{sfx}) = 2q-1"), 2 * q - 1, &li.a_cut(i));
        push(format!("d(X{sfx}) = k-1"), k - 1, &li.x_cut(i));
        push(format!("d(Y{sfx}) = k-1"), k - 1, &li.y_cut(i));
    }
    push("d(r) = k-p".into(), k - p, &li.r_cut());
    push("d(b) = 2k-2pq-1".into(), 2 * k - 2 * p * q - 1, &li.cut([li.b]));
    push("d(C) = k-1".into(), k - 1, &li.c_cut());
    if p == 1 {
        let y = li.gadgets[0].y;
        push("d(z) = 2k-2q-1".into(), 2 * k - 2 * q - 1, &li.cut([li.z]));
        push("d({y,z}) = 2k-2q-1".into(), 2 * k - 2 * q - 1, &li.cut([y, li.z]));
    }
    out
}

fn validated(li: LabeledInstance) -> Result<LabeledInstance> {
    if let Some(bad) = degree_identities(&li).into_iter().find(|c| !c.holds()) {
        return Err(Error::Construction(format!(
            "{} violated: measured {}, expected {}",
            bad.name, bad.actual, bad.expected
        )));
    }
    Ok(li)
}

/// The 7-node gadget.
pub fn single_gadget(q: u64, k: u64, epsilon: Rational) -> Result<LabeledInstance> {
    validated(build(&GadgetParams::new(q, 1, k, epsilon)?)?)
}

/// `p >= 2` gadgets glued along `r, b, z`.
pub fn glued_instance(q: u64, p: u64, k: u64, epsilon: Rational) -> Result<LabeledInstance> {
    if p < 2 {
        return Err(Error::InvalidParams {
            constraint: "p >= 2".into(),
        });
    }
    validated(build(&GadgetParams::new(q, p, k, epsilon)?)?)
}

/// Single gadget for `p = 1`, glued instance otherwise.
pub fn generate(params: &GadgetParams) -> Result<LabeledInstance> {
    let GadgetParams { q, p, k, .. } = *params;
    if p == 1 {
        single_gadget(q, k, params.epsilon.clone())
    } else {
        glued_instance(q, p, k, params.epsilon.clone())
    }
}

/// Core oracle that knows the initial cores `{r}, {t_i}, C` in closed form
/// and falls back to enumeration once links have been selected.
#[derive(Debug, Clone)]
pub struct AnalyticCores {
    cores: Vec<Cut>,
    pub bound: usize,
}

impl AnalyticCores {
    pub fn cores(&self) -> &[Cut] {
        &self.cores
    }
}

impl CoreOracle for AnalyticCores {
    fn initial_cores(&self, _inst: &Instance) -> Result<Vec<Cut>> {
        Ok(self.cores.clone())
    }

    fn cores_given(&self, inst: &Instance, selected: &[usize]) -> Result<Vec<Cut>> {
        if selected.is_empty() {
            return Ok(self.cores.clone());
        }
        cores_bruteforce(inst, selected, self.bound)
    }
}

pub fn analytic_initial_cores(li: &LabeledInstance, bound: usize) -> AnalyticCores {
    let mut cores: Vec<Cut> = std::iter::once(li.r_cut())
        .chain((0..li.gadgets.len()).map(|i| li.t_cut(i)))
        .chain(std::iter::once(li.c_cut()))
        .collect();
    cores.sort();
    AnalyticCores { cores, bound }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySlices {
    pub cores: Vec<Cut>,
    /// Small cuts that exclude `r` and do not contain `C`.
    pub fr_minus_frc: Vec<Cut>,
}

/// The core family and the small cuts outside `C`'s upward closure, as the
/// construction predicts them: `{t_i}`, every union of `A_i`'s, `X_i`, `Y_i`.
pub fn expected_family_slices(li: &LabeledInstance) -> Result<FamilySlices> {
    let p = li.params.p;
    if p > MAX_UNION_EXPANSION {
        return Err(Error::BoundExceeded {
            what: "A-union expansion (p)",
            size: p as usize,
            bound: MAX_UNION_EXPANSION as usize,
        });
    }
    let pu = p as usize;
    let mut slice: Vec<Cut> = (0..pu).map(|i| li.t_cut(i)).collect();
    slice.extend((1u64..1 << p).map(|bits| li.a_union(bits)));
    slice.extend((0..pu).map(|i| li.x_cut(i)));
    slice.extend((0..pu).map(|i| li.y_cut(i)));
    slice.sort();
    Ok(FamilySlices {
        cores: analytic_initial_cores(li, 0).cores,
        fr_minus_frc: slice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(q: u64, p: u64, k: u64) -> LabeledInstance {
        generate(&GadgetParams::exact(q, p, k).unwrap()).unwrap()
    }

    #[test]
    fn parameter_constraints_are_named() {
        let msg = |r: Result<GadgetParams>| r.unwrap_err().to_string();
        assert!(msg(GadgetParams::exact(1, 2, 4)).contains("k >= 2pq+1"));
        assert!(msg(GadgetParams::exact(1, 1, 2)).contains("k >= 2q+1"));
        assert!(msg(GadgetParams::exact(0, 2, 9)).contains("q >= 1"));
        assert!(msg(GadgetParams::exact(1, 0, 9)).contains("p >= 1"));
        assert!(
            msg(GadgetParams::new(1, 2, 5, rational::int(-1))).contains("epsilon >= 0")
        );
        assert!(glued_instance(1, 1, 3, rational::zero()).is_err());
    }

    #[test]
    fn single_gadget_small_values() {
        let li = single_gadget(1, 3, rational::zero()).unwrap();
        let g = &li.instance.graph;
        assert_eq!(li.n(), 7);
        assert_eq!(g.cut_degree(&li.t_cut(0)).unwrap(), 2);
        assert_eq!(g.cut_degree(&li.c_cut()).unwrap(), 2);
        assert_eq!(li.instance.cost_of(&li.red), rational::int(5));
        assert_eq!(li.instance.cost_of(&li.blue), rational::int(3));
        let gn = li.gadgets[0];
        assert_eq!(g.multiplicity(gn.t, gn.x), 0);
        assert_eq!(g.multiplicity(gn.a, li.r), 0);
    }

    #[test]
    fn single_gadget_q2() {
        let li = single_gadget(2, 5, rational::zero()).unwrap();
        assert_eq!(li.instance.graph.cut_degree(&li.a_cut(0)).unwrap(), 3);
    }

    #[test]
    fn glued_sizes_and_axis_degrees() {
        let li = exact(1, 2, 5);
        assert_eq!(li.n(), 11);
        assert_eq!(li.instance.cost_of(&li.red), rational::int(10));
        assert_eq!(li.instance.cost_of(&li.blue), rational::int(4));

        let li = exact(1, 4, 9);
        assert_eq!(li.n(), 19);
        assert_eq!(li.instance.graph.cut_degree(&li.r_cut()).unwrap(), 5);

        let li = exact(2, 2, 9);
        let b = Cut::singleton(li.n(), li.b).unwrap();
        assert_eq!(li.instance.graph.cut_degree(&b).unwrap(), 9);
    }

    #[test]
    fn r_delta_is_only_the_br_bundle_when_q_is_one() {
        let li = exact(1, 2, 5);
        let delta = li.instance.graph.delta_edges(&li.r_cut()).unwrap();
        assert_eq!(delta.len(), 1);
        let e = delta[0];
        assert_eq!((e.u.min(e.v), e.u.max(e.v), e.mult), (li.b, li.r, 3));
    }

    #[test]
    fn perturbed_costs() {
        let eps = default_epsilon();
        let li = glued_instance(1, 3, 7, eps.clone()).unwrap();
        let blue = li.instance.cost_of(&li.blue);
        assert_eq!(blue, rational::int(5) + rational::int(4) * &eps);
        assert_eq!(li.instance.links[li.rz].cost, rational::int(2) + &eps);
    }

    #[test]
    fn no_edges_between_gadgets() {
        let li = exact(1, 3, 7);
        let gadget_of = |v: NodeId| li.gadgets.iter().position(|g| [g.t, g.a, g.x, g.y].contains(&v));
        for e in li.instance.graph.edges() {
            if let (Some(i), Some(j)) = (gadget_of(e.u), gadget_of(e.v)) {
                assert_eq!(i, j, "edge {e:?} joins two gadgets");
            }
        }
    }

    #[test]
    fn a_unions_are_small() {
        let li = exact(2, 3, 13);
        let q = li.params.q;
        for bits in 1u64..8 {
            let d = li.instance.graph.cut_degree(&li.a_union(bits)).unwrap();
            assert_eq!(d, bits.count_ones() as u64 * (2 * q - 1));
            assert!(d < li.params.k);
        }
    }

    #[test]
    fn corrupted_graph_fails_validation() {
        let mut li = exact(1, 2, 5);
        li.instance.graph.add_edge(li.b, li.r, 1).unwrap();
        assert!(validated(li).is_err());
    }

    #[test]
    fn roles_round_trip_through_labels() {
        for (q, p, k) in [(1, 1, 3), (1, 3, 7)] {
            let li = exact(q, p, k);
            let back = LabeledInstance::from_instance(li.instance.clone()).unwrap();
            assert_eq!(back.roles(), li.roles());
            assert_eq!(back.params, li.params);
            assert_eq!(back.gadget_links, li.gadget_links);
            assert_eq!((back.red.clone(), back.blue.clone()), (li.red.clone(), li.blue.clone()));
        }
    }

    #[test]
    fn slice_sizes() {
        assert_eq!(expected_family_slices(&exact(1, 2, 5)).unwrap().fr_minus_frc.len(), 9);
        assert_eq!(expected_family_slices(&exact(1, 3, 7)).unwrap().fr_minus_frc.len(), 16);
        let single = exact(1, 1, 3);
        let s = expected_family_slices(&single).unwrap();
        let mut want = vec![single.t_cut(0), single.a_cut(0), single.x_cut(0), single.y_cut(0)];
        want.sort();
        assert_eq!(s.fr_minus_frc, want);
        assert_eq!(s.cores.len(), 3);
    }
}
