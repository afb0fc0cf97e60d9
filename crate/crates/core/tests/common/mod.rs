#![allow(dead_code)]

use mcps::flow::RetentionRatio;
use mcps::graph::DirectedGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ALPHAS: [(u64, u64); 4] = [(1, 3), (1, 2), (2, 3), (3, 4)];

pub fn alpha(i: usize) -> RetentionRatio {
    let (p, q) = ALPHAS[i % ALPHAS.len()];
    RetentionRatio::new(p, q).unwrap()
}

/// Uniform simple digraph on `n` vertices with `m` edges, `m` capped at
/// `n(n-1)`.
pub fn random_digraph(seed: u64, n: usize, m: usize) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    all.shuffle(&mut rng);
    all.truncate(m.min(all.len()));
    DirectedGraph::new(n, all).unwrap()
}

/// Random DAG: edges only go from lower to higher position in a shuffled
/// order.
pub fn random_dag(seed: u64, n: usize, m: usize) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut all: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (order[i], order[j]))
        .collect();
    all.shuffle(&mut rng);
    all.truncate(m.min(all.len()));
    DirectedGraph::new(n, all).unwrap()
}

/// A mixed suite of small random graphs: `count` graphs with at most
/// `max_m` edges.
pub fn random_suite(seed: u64, count: usize, max_m: usize) -> Vec<DirectedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(1..=max_m);
            let s = rng.gen();
            if i % 3 == 0 {
                random_dag(s, n, m)
            } else {
                random_digraph(s, n, m)
            }
        })
        .collect()
}
