//! Brute-force helpers shared by the integration tests. None of these call
//! into the matching or solver code they are used to check.

#![allow(dead_code)]

use envyfree::BipartiteGraph;
use rand::Rng;

/// Size of a maximum matching by trying every matching.
pub fn brute_force_matching_size(graph: &BipartiteGraph) -> usize {
    fn go(graph: &BipartiteGraph, x: usize, used: &mut Vec<bool>) -> usize {
        if x == graph.n_left() {
            return 0;
        }
        let mut best = go(graph, x + 1, used);
        for &y in graph.neighbors(x) {
            if !used[y] {
                used[y] = true;
                best = best.max(1 + go(graph, x + 1, used));
                used[y] = false;
            }
        }
        best
    }
    go(graph, 0, &mut vec![false; graph.n_right()])
}

/// Neighborhood size of the left vertices in `mask`, computed from scratch.
pub fn neighborhood_size(graph: &BipartiteGraph, mask: u32) -> usize {
    let mut seen = vec![false; graph.n_right()];
    for x in 0..graph.n_left() {
        if mask >> x & 1 == 1 {
            for &y in graph.neighbors(x) {
                seen[y] = true;
            }
        }
    }
    seen.iter().filter(|&&b| b).count()
}

pub fn mask_of(vertices: &[usize]) -> u32 {
    vertices.iter().fold(0, |acc, &x| acc | 1 << x)
}

/// Some subset of the left side violates Hall's condition.
pub fn has_hall_violator(graph: &BipartiteGraph) -> bool {
    (1u32..1 << graph.n_left()).any(|mask| mask.count_ones() as usize > neighborhood_size(graph, mask))
}

/// Every nonempty proper subset of `vertices` satisfies Hall's condition.
pub fn proper_subsets_satisfy_hall(graph: &BipartiteGraph, vertices: &[usize]) -> bool {
    let k = vertices.len();
    (1u32..(1 << k) - 1).all(|sub| {
        let mask = (0..k)
            .filter(|i| sub >> i & 1 == 1)
            .fold(0u32, |acc, i| acc | 1 << vertices[i]);
        mask.count_ones() as usize <= neighborhood_size(graph, mask)
    })
}

pub fn random_graph<R: Rng>(rng: &mut R, max_left: usize, max_right: usize) -> BipartiteGraph {
    let n_left = rng.random_range(1..=max_left);
    let n_right = rng.random_range(1..=max_right);
    let density: f64 = rng.random_range(0.05..0.6);
    let edges: Vec<(usize, usize)> = (0..n_left)
        .flat_map(|x| (0..n_right).map(move |y| (x, y)))
        .filter(|_| rng.random_bool(density))
        .collect();
    BipartiteGraph::from_edges(n_left, n_right, edges).unwrap()
}

/// All `m^n` strict profiles for `n` agents, as per-agent orderings.
pub fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for h in 0..m {
            if !prefix.contains(&h) {
                prefix.push(h);
                go(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}
