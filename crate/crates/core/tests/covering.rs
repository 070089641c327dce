mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallcuts::covering::{
    covers, covers_by_enumeration, cores_bruteforce, is_minimal_cover, link_crosses,
    violated_cuts, DEFAULT_ENUM_BOUND,
};
use smallcuts::rational;
use smallcuts::tightgen::{glued_instance, single_gadget, LabeledInstance};
use smallcuts::{Cut, Instance, Link, MultiGraph};

use common::{random_instance, random_subset, Shape};

const B: usize = DEFAULT_ENUM_BOUND;

fn glued125() -> LabeledInstance {
    glued_instance(1, 2, 5, rational::zero()).unwrap()
}

fn gadget13() -> LabeledInstance {
    single_gadget(1, 3, rational::zero()).unwrap()
}

#[test]
fn crossing_examples() {
    let li = gadget13();
    let links = &li.instance.links;
    let gl = li.gadget_links[0];
    assert!(link_crosses(&links[gl.yr], &li.y_cut(0)));
    assert!(!link_crosses(&links[gl.tb], &li.c_cut()));
}

#[test]
fn small_cut_examples() {
    let li = gadget13();
    let inst = &li.instance;
    assert!(inst.is_small_cut(&li.c_cut()).unwrap());
    let x = Cut::singleton(li.n(), li.gadgets[0].x).unwrap();
    assert!(!inst.is_small_cut(&x).unwrap());
}

#[test]
fn glued_coverage_examples() {
    let li = glued125();
    let inst = &li.instance;
    assert!(covers(inst, &li.blue).unwrap());
    let without_rz: Vec<usize> = li.blue.iter().copied().filter(|&e| e != li.rz).collect();
    assert!(!covers(inst, &without_rz).unwrap());
    // the one uncovered cut (on the root-free side) is V \ {r}
    let v = violated_cuts(inst, &without_rz, B).unwrap();
    assert!(v.contains(&li.r_cut().complement()));

    assert!(covers_by_enumeration(inst, &inst.all_links(), B).unwrap());
    assert!(!covers_by_enumeration(inst, &[], B).unwrap());
    assert!(violated_cuts(inst, &[], B).unwrap().contains(&li.t_cut(0)));
}

#[test]
fn empty_selection_on_well_connected_graph() {
    let g = MultiGraph::from_edges(3, [(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
    let inst = Instance::new(g, vec![Link::new(0, 1, rational::int(1), None)], 4).unwrap();
    assert!(covers(&inst, &[]).unwrap());
    assert!(covers_by_enumeration(&inst, &[], B).unwrap());
}

#[test]
fn gadget_violated_family() {
    let li = gadget13();
    let inst = &li.instance;
    let v = violated_cuts(inst, &[], B).unwrap();
    let c = li.c_cut();
    let mut outside: Vec<Cut> = v.iter().filter(|s| !c.is_subset_of(s)).cloned().collect();
    outside.sort();
    let mut want = vec![li.t_cut(0), li.a_cut(0), li.x_cut(0), li.y_cut(0)];
    want.sort();
    assert_eq!(outside, want);
    assert!(v.contains(&c));
    assert!(v.contains(&li.r_cut().complement()));
    assert!(v.iter().all(|s| !s.contains(li.r)));

    assert!(violated_cuts(inst, &li.red, B).unwrap().is_empty());
}

#[test]
fn cores_of_gadgets() {
    let li = gadget13();
    let mut want = vec![li.r_cut(), li.t_cut(0), li.c_cut()];
    want.sort();
    assert_eq!(cores_bruteforce(&li.instance, &[], B).unwrap(), want);

    let li = glued125();
    let mut want = vec![li.r_cut(), li.t_cut(0), li.t_cut(1), li.c_cut()];
    want.sort();
    assert_eq!(cores_bruteforce(&li.instance, &[], B).unwrap(), want);
    assert!(cores_bruteforce(&li.instance, &li.instance.all_links(), B)
        .unwrap()
        .is_empty());
}

#[test]
fn minimality_examples() {
    let li = glued125();
    let inst = &li.instance;
    assert!(is_minimal_cover(inst, &li.red).unwrap());
    assert!(is_minimal_cover(inst, &li.blue).unwrap());
    assert!(!is_minimal_cover(inst, &inst.all_links()).unwrap());
    let red_minus: Vec<usize> = li.red.iter().copied().filter(|&e| e != li.gadget_links[0].yr).collect();
    assert!(!covers(inst, &red_minus).unwrap());
    assert!(is_minimal_cover(inst, &red_minus).is_err());
}

fn ten() -> Shape {
    Shape {
        max_nodes: 10,
        max_links: 10,
        max_mult: 5,
        max_k: 6,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn min_cut_and_enumeration_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, &ten());
        let sel = random_subset(&mut rng, inst.links.len());
        prop_assert_eq!(
            covers(&inst, &sel).unwrap(),
            covers_by_enumeration(&inst, &sel, B).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cores_are_disjoint_minimal_and_violated(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, &common::SMALL);
        let sel = random_subset(&mut rng, inst.links.len());
        let cores = cores_bruteforce(&inst, &sel, B).unwrap();
        let violated = violated_cuts(&inst, &sel, B).unwrap();
        let family: Vec<Cut> = violated.iter().flat_map(|s| [s.clone(), s.complement()]).collect();
        for (i, c) in cores.iter().enumerate() {
            prop_assert!(family.contains(c));
            prop_assert!(!sel.iter().any(|&e| inst.links[e].crosses(c)));
            for d in &cores[i + 1..] {
                prop_assert!(c.is_disjoint(d));
            }
            for s in &family {
                prop_assert!(!(s.is_subset_of(c) && s != c));
            }
        }
        prop_assert_eq!(cores.is_empty(), violated.is_empty());
        for s in &violated {
            let d = inst.graph.cut_degree(s).unwrap();
            prop_assert_eq!(d, inst.graph.cut_degree(&s.complement()).unwrap());
            prop_assert!(d < inst.k);
        }
    }

    #[test]
    fn coverage_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, &common::SMALL);
        let small = random_subset(&mut rng, inst.links.len());
        let mut big = small.clone();
        big.extend(random_subset(&mut rng, inst.links.len()));
        big.sort_unstable();
        big.dedup();
        if covers(&inst, &small).unwrap() {
            prop_assert!(covers(&inst, &big).unwrap());
        }
    }
}
