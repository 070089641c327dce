use smallcuts::oracle::{
    brute_force_optimum, gap_experiment, gap_sweep, max_p_gap_formula, theorem_ratio,
    verify_cores_lemma, verify_feasibility_lemma, OracleConfig,
};
use smallcuts::rational::{self, int, ratio};
use smallcuts::tightgen::{generate, GadgetParams, LabeledInstance};
use smallcuts::wgmv::TiePolicy;
use smallcuts::{Instance, Link, MultiGraph};

const PARAMS: [(u64, u64, u64); 4] = [(1, 1, 3), (2, 1, 5), (1, 2, 5), (2, 2, 9)];

fn exact(q: u64, p: u64, k: u64) -> LabeledInstance {
    generate(&GadgetParams::exact(q, p, k).unwrap()).unwrap()
}

#[test]
fn optimum_prefers_fewer_links_on_ties() {
    // path 0-1-2 with k = 2: links 02 alone or 01 + 12
    let g = MultiGraph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
    let links = vec![
        Link::new(0, 1, int(1), None),
        Link::new(1, 2, int(1), None),
        Link::new(0, 2, int(2), None),
    ];
    let inst = Instance::new(g, links, 2).unwrap();
    let opt = brute_force_optimum(&inst, &OracleConfig::default()).unwrap();
    assert_eq!(opt.cost, int(2));
    assert_eq!(opt.witness, vec![2]);
}

#[test]
fn optimum_of_gadgets_is_blue() {
    for p in 1..=3 {
        let li = exact(1, p, 2 * p + 1);
        let opt = brute_force_optimum(&li.instance, &OracleConfig::default()).unwrap();
        assert_eq!(opt.cost, int(p as i64 + 2));
        assert_eq!(opt.witness, li.blue);
    }
}

#[test]
fn parallel_optimum_matches_serial() {
    let li = exact(1, 3, 7);
    let serial = brute_force_optimum(&li.instance, &OracleConfig::default()).unwrap();
    let cfg = OracleConfig {
        jobs: 4,
        ..OracleConfig::default()
    };
    assert_eq!(brute_force_optimum(&li.instance, &cfg).unwrap(), serial);
}

#[test]
fn verifiers_pass_on_generated_instances() {
    for (q, p, k) in PARAMS {
        let li = exact(q, p, k);
        let cores = verify_cores_lemma(&li, 22).unwrap();
        let feas = verify_feasibility_lemma(&li, 22).unwrap();
        let fails: Vec<_> = cores.failures().chain(feas.failures()).map(|c| &c.name).collect();
        assert!(fails.is_empty(), "({q},{p},{k}): {fails:?}");
    }
}

/// Rebuilds the instance with one edge multiplicity shifted by `delta`.
fn mutate(inst: &Instance, edge: usize, delta: i64) -> Option<Instance> {
    let g = &inst.graph;
    let edges: Vec<(usize, usize, u64)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let m = e.mult as i64 + if i == edge { delta } else { 0 };
            (e.u, e.v, m.max(0) as u64)
        })
        .collect();
    if delta < 0 && g.edges()[edge].mult == 0 {
        return None;
    }
    let mut h = MultiGraph::from_edges(g.node_count(), edges).unwrap();
    for v in 0..g.node_count() {
        if let Some(l) = g.label(v) {
            h.set_label(v, l);
        }
    }
    Some(Instance::new(h, inst.links.clone(), inst.k).unwrap())
}

#[test]
fn any_single_edge_change_is_detected() {
    for (q, p, k) in [(1, 1, 3), (2, 2, 9)] {
        let li = exact(q, p, k);
        for edge in 0..li.instance.graph.edges().len() {
            for delta in [-1, 1] {
                let Some(inst) = mutate(&li.instance, edge, delta) else {
                    continue;
                };
                let detected = match LabeledInstance::from_instance(inst) {
                    Ok(m) => !verify_cores_lemma(&m, 22).map(|r| r.passed()).unwrap_or(false),
                    Err(_) => true,
                };
                assert!(detected, "({q},{p},{k}) edge {edge} delta {delta}");
            }
        }
    }
}

#[test]
fn gap_experiment_ratios() {
    let cfg = OracleConfig::default();
    for (p, want) in [(2, ratio(5, 2)), (3, int(3))] {
        let li = exact(1, p, 2 * p + 1);
        let rep = gap_experiment(&li, TiePolicy::AdversarialRedFirst, &cfg).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
        assert!(!rep.opt_analytic);
        assert_eq!(rep.ratio, want);
        assert_eq!(rep.ratio, theorem_ratio(p));
        assert_eq!(rep.dual_obj, rep.opt_cost);
    }
    let li = exact(1, 2, 5);
    let rep = gap_experiment(&li, TiePolicy::HelpfulBlueFirst, &cfg).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.ratio, int(1));
}

#[test]
fn perturbed_gap_stays_below_theorem_ratio() {
    let li = generate(&GadgetParams::new(1, 2, 5, ratio(1, 100)).unwrap()).unwrap();
    let rep = gap_experiment(&li, TiePolicy::InputOrder, &OracleConfig::default()).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.alg_cost, int(10));
    assert!(rep.ratio < theorem_ratio(2));
    assert!(rep.ratio > rational::int(2));
}

#[test]
fn sweep_matches_formula() {
    let rows = gap_sweep(&[5, 6, 7, 8], &OracleConfig::default()).unwrap();
    for r in &rows {
        assert!(r.matches, "k={}", r.k);
        assert_eq!(r.ratio, max_p_gap_formula(r.k));
        assert!(!r.opt_analytic);
    }
    assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), vec![2, 2, 3, 3]);
    assert!(gap_sweep(&[2], &OracleConfig::default()).is_err());
}
