mod common;

use common::{biconnected_simple_graphs, catalog, has_parallel_edges, random_multigraphs};
use stp_core::graph::is_biconnected;

#[test]
fn catalog_counts_match_known_values() {
    // 2-connected graphs on 3..6 unlabeled vertices
    let counts: Vec<usize> = (3..=6).map(|n| biconnected_simple_graphs(n).len()).collect();
    assert_eq!(counts, vec![1, 3, 10, 56]);
    assert_eq!(catalog().len(), 70);
}

#[test]
fn random_multigraphs_are_biconnected_and_seeded() {
    let a = random_multigraphs(200, 7);
    let b = random_multigraphs(200, 7);
    assert_eq!(a, b);
    assert!(a.iter().all(|g| is_biconnected(g) && g.n() <= 5 && g.m() <= 9));
    assert!(a.iter().filter(|g| has_parallel_edges(g)).count() > 100);
}
