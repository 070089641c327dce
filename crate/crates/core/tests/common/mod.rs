#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use smallcuts::rational::{int, ratio};
use smallcuts::{Instance, Link, MultiGraph, Rational};

pub struct Shape {
    pub max_nodes: usize,
    pub max_links: usize,
    pub max_mult: u64,
    pub max_k: u64,
}

pub const SMALL: Shape = Shape {
    max_nodes: 8,
    max_links: 10,
    max_mult: 5,
    max_k: 6,
};

fn random_cost<R: Rng>(rng: &mut R) -> Rational {
    match rng.gen_range(0..10) {
        0 => int(0),
        1 => ratio(rng.gen_range(1..8), 2),
        _ => int(rng.gen_range(1..=5)),
    }
}

/// Random multigraph plus a link set whose first `n-1` links form a
/// spanning tree, so the full link set always covers.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &Shape) -> Instance {
    let n = rng.gen_range(2..=shape.max_nodes);
    let mut g = MultiGraph::new(n);
    let density: f64 = rng.gen_range(0.2..0.9);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v, rng.gen_range(1..=shape.max_mult)).unwrap();
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut links = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        links.push(Link::new(parent, order[i], random_cost(rng), None));
    }
    let extra = rng.gen_range(0..=shape.max_links - (n - 1));
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        links.push(Link::new(u, v, random_cost(rng), None));
    }
    links.shuffle(rng);
    let k = rng.gen_range(1..=shape.max_k);
    Instance::new(g, links, k).unwrap()
}

/// Random subset of link indices.
pub fn random_subset<R: Rng>(rng: &mut R, m: usize) -> Vec<usize> {
    let p: f64 = rng.gen_range(0.0..1.0);
    (0..m).filter(|_| rng.gen_bool(p)).collect()
}

/// Minimum cut degree by trying every proper subset.
pub fn min_cut_by_enumeration(g: &MultiGraph) -> u64 {
    let n = g.node_count();
    (1u64..(1 << n) - 1).map(|m| g.mask_degree(m)).min().unwrap()
}
