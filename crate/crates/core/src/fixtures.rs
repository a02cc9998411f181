//! Small named graphs used throughout the tests and the docs.

use crate::graph::{Graph, GraphBuilder};

fn edge_label(u: &str, v: &str) -> String {
    if u.chars().count() == 1 && v.chars().count() == 1 {
        format!("{u}{v}")
    } else {
        format!("{u}-{v}")
    }
}

fn from_pairs(pairs: &[(String, String)]) -> Graph {
    let mut b = GraphBuilder::new();
    for (u, v) in pairs {
        b.labeled_edge(u.as_str(), v.as_str(), edge_label(u, v));
    }
    b.build().expect("fixture labels are unique")
}

/// The six-vertex graph on `a..f` in which the 4-cycle `bcef` is induced
/// and 2-connected but not locked.
pub fn ce() -> Graph {
    let edges = [
        ("a", "b"),
        ("a", "f"),
        ("b", "f"),
        ("b", "c"),
        ("c", "d"),
        ("c", "e"),
        ("d", "e"),
        ("e", "f"),
    ];
    let pairs: Vec<_> = edges
        .iter()
        .map(|&(u, v)| (u.to_string(), v.to_string()))
        .collect();
    from_pairs(&pairs)
}

/// Complete graph on vertices `1..=n`.
pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            pairs.push((i.to_string(), j.to_string()));
        }
    }
    from_pairs(&pairs)
}

/// Cycle `1 - 2 - ... - n - 1`.
pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (1..=n)
        .map(|i| (i.to_string(), (i % n + 1).to_string()))
        .collect();
    from_pairs(&pairs)
}

pub fn path(vertices: &[&str]) -> Graph {
    let pairs: Vec<_> = vertices
        .windows(2)
        .map(|w| (w[0].to_string(), w[1].to_string()))
        .collect();
    from_pairs(&pairs)
}

/// Two vertices `a`, `b` joined by `k` parallel edges `e0..`.
pub fn multi_edge(k: usize) -> Graph {
    let mut b = GraphBuilder::new();
    for _ in 0..k {
        b.edge("a", "b");
    }
    b.build().expect("auto labels are unique")
}

/// Triangles `abc` and `cde` glued at `c`.
pub fn two_triangles_sharing_vertex() -> Graph {
    let pairs: Vec<_> = [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d"), ("d", "e"), ("c", "e")]
        .iter()
        .map(|&(u, v)| (u.to_string(), v.to_string()))
        .collect();
    from_pairs(&pairs)
}
