#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stp_core::graph::{is_biconnected, Graph, GraphBuilder};

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn graph_from_pairs(pairs: &[(usize, usize)]) -> Graph {
    let mut b = GraphBuilder::new();
    for &(u, v) in pairs {
        b.edge(NAMES[u], NAMES[v]);
    }
    b.build().expect("auto labels are unique")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest sorted edge list over all relabelings.
fn canonical(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// One representative of every isomorphism class of 2-connected simple
/// graphs on `n` vertices.
pub fn biconnected_simple_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        if edges.len() < n {
            continue;
        }
        let g = graph_from_pairs(&edges);
        if g.n() != n || !is_biconnected(&g) {
            continue;
        }
        if seen.insert(canonical(&edges, &perms)) {
            out.push(g);
        }
    }
    out
}

/// All 2-connected simple graphs with at most six vertices, up to isomorphism.
pub fn catalog() -> Vec<Graph> {
    (3..=6).flat_map(biconnected_simple_graphs).collect()
}

/// Random 2-connected multigraphs with 2..=5 vertices and at most 9 edges.
pub fn random_multigraphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(n..=9);
        let edges: Vec<(usize, usize)> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                (u, v)
            })
            .collect();
        let g = graph_from_pairs(&edges);
        if g.n() == n && is_biconnected(&g) {
            out.push(g);
        }
    }
    out
}

pub fn has_parallel_edges(g: &Graph) -> bool {
    let mut seen = BTreeSet::new();
    g.edges().iter().any(|e| !seen.insert(e.endpoints()))
}

/// Vertex subsets U with 3 ≤ |U| ≤ n − 1 whose induced subgraph is 2-connected.
pub fn induced_biconnected_subsets(g: &Graph) -> Vec<BTreeSet<usize>> {
    let n = g.n();
    (0u64..1 << n)
        .filter(|m| (3..n).contains(&(m.count_ones() as usize)))
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|u| {
            let h = stp_core::graph::induced_subgraph(g, u).expect("valid subset");
            is_biconnected(&h.to_graph().0)
        })
        .collect()
}
