//! Parallel and coparallel (series) closures of a 2-connected graph.
//!
//! Parallel closures are the edge sets joining one vertex pair.
//! Coparallel closures are the classes of "the two edges form a 2-edge
//! cut", which includes every maximal path through degree-2 vertices but
//! also non-adjacent pairs such as `{bc, ef}` in the `ce` fixture.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{
    contract_edges, delete_edges, find_cut_vertex, is_biconnected, EdgeId, Graph, Subgraph,
};
use crate::matroid::ClosureKind;

/// Why the minor left after contracting/deleting a closure is not 2-connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorWitness {
    /// No edges remain.
    EmptyMinor,
    /// Exactly one edge remains.
    SingleEdge,
    Disconnected,
    CutVertex(String),
}

impl fmt::Display for MinorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorWitness::EmptyMinor => f.write_str("minor is empty"),
            MinorWitness::SingleEdge => f.write_str("minor is a single edge"),
            MinorWitness::Disconnected => f.write_str("minor is disconnected"),
            MinorWitness::CutVertex(v) => write!(f, "minor has cut vertex {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub kind: ClosureKind,
    pub edges: BTreeSet<EdgeId>,
    pub essential: bool,
    /// Set exactly when the closure is not essential.
    pub witness: Option<MinorWitness>,
}

fn judge(minor: &Graph) -> Option<MinorWitness> {
    if is_biconnected(minor) {
        return None;
    }
    Some(match minor.m() {
        0 => MinorWitness::EmptyMinor,
        1 => MinorWitness::SingleEdge,
        _ if !minor.is_connected() => MinorWitness::Disconnected,
        _ => MinorWitness::CutVertex(
            find_cut_vertex(minor)
                .map(|v| minor.vertex_label(v).to_string())
                .unwrap_or_default(),
        ),
    })
}

fn closure(kind: ClosureKind, edges: BTreeSet<EdgeId>, minor: &Graph) -> Closure {
    let witness = judge(minor);
    Closure {
        kind,
        edges,
        essential: witness.is_none(),
        witness,
    }
}

fn require_biconnected(g: &Graph) -> Result<()> {
    if is_biconnected(g) {
        Ok(())
    } else {
        Err(Error::NotBiconnected("closures are computed per 2-connected block".into()))
    }
}

/// Edges grouped by endpoint pair; essential when contracting the group
/// leaves a 2-connected graph. Ordered by smallest edge id.
pub fn parallel_closures_graph(g: &Graph) -> Result<Vec<Closure>> {
    require_biconnected(g)?;
    let mut groups: BTreeMap<(usize, usize), BTreeSet<EdgeId>> = BTreeMap::new();
    for e in g.edges() {
        groups.entry(e.endpoints()).or_default().insert(e.id);
    }
    let mut classes: Vec<BTreeSet<EdgeId>> = groups.into_values().collect();
    classes.sort_by_key(|c| c.iter().next().copied());
    classes
        .into_iter()
        .map(|p| {
            let minor = contract_edges(g, &p)?;
            Ok(closure(ClosureKind::Parallel, p, &minor.graph))
        })
        .collect()
}

/// Classes of "the pair is a 2-edge cut"; essential when deleting the
/// class leaves a 2-connected graph. Ordered by smallest edge id.
pub fn coparallel_closures_graph(g: &Graph) -> Result<Vec<Closure>> {
    require_biconnected(g)?;
    let m = g.m();
    let mut parent: Vec<EdgeId> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in 0..m {
        for f in e + 1..m {
            if find(&mut parent, e) == find(&mut parent, f) {
                continue;
            }
            let rest = Subgraph {
                graph: g,
                vertices: g.all_vertices(),
                edges: (0..m).filter(|&x| x != e && x != f).collect(),
            };
            if !rest.is_connected() {
                let (re, rf) = (find(&mut parent, e), find(&mut parent, f));
                parent[re.max(rf)] = re.min(rf);
            }
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<EdgeId>> = BTreeMap::new();
    for e in 0..m {
        let r = find(&mut parent, e);
        classes.entry(r).or_default().insert(e);
    }
    classes
        .into_values()
        .map(|s| {
            let minor = delete_edges(g, &s)?;
            Ok(closure(ClosureKind::Coparallel, s, &minor.graph))
        })
        .collect()
}

/// Maximal paths whose internal vertices have degree 2 (a whole cycle if
/// every vertex has degree 2).
pub fn degree_two_paths(g: &Graph) -> Vec<BTreeSet<EdgeId>> {
    let adj = g.adjacency();
    let mut parent: Vec<EdgeId> = (0..g.m()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for inc in &adj {
        if let [(_, e), (_, f)] = inc.as_slice() {
            let (re, rf) = (find(&mut parent, *e), find(&mut parent, *f));
            parent[re.max(rf)] = re.min(rf);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<EdgeId>> = BTreeMap::new();
    for e in 0..g.m() {
        let r = find(&mut parent, e);
        groups.entry(r).or_default().insert(e);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::GraphBuilder;

    fn labels(g: &Graph, c: &Closure) -> Vec<String> {
        g.edge_labels(c.edges.iter().copied())
    }

    #[test]
    fn parallel_closures_of_ce() {
        let g = fixtures::ce();
        let classes = parallel_closures_graph(&g).unwrap();
        assert_eq!(classes.len(), 8);
        let nonessential: Vec<_> = classes
            .iter()
            .filter(|c| !c.essential)
            .map(|c| labels(&g, c))
            .collect();
        assert_eq!(nonessential, vec![vec!["bf"], vec!["ce"]]);
        assert!(classes
            .iter()
            .all(|c| c.essential == c.witness.is_none()));
        let ce = classes.iter().find(|c| labels(&g, c) == ["ce"]).unwrap();
        assert_eq!(ce.witness, Some(MinorWitness::CutVertex("c".into())));
    }

    #[test]
    fn parallel_closures_of_k4_and_multi_edge() {
        let classes = parallel_closures_graph(&fixtures::complete(4)).unwrap();
        assert_eq!(classes.len(), 6);
        assert!(classes.iter().all(|c| c.essential && c.edges.len() == 1));

        let classes = parallel_closures_graph(&fixtures::multi_edge(3)).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].edges.len(), 3);
        assert!(!classes[0].essential);
        assert_eq!(classes[0].witness, Some(MinorWitness::EmptyMinor));
    }

    #[test]
    fn coparallel_closures_of_ce() {
        let g = fixtures::ce();
        let classes = coparallel_closures_graph(&g).unwrap();
        let got: Vec<(Vec<String>, bool)> = classes
            .iter()
            .map(|c| (labels(&g, c), c.essential))
            .collect();
        let want = vec![
            (vec!["ab".to_string(), "af".into()], true),
            (vec!["bf".to_string()], true),
            (vec!["bc".to_string(), "ef".into()], false),
            (vec!["cd".to_string(), "de".into()], true),
            (vec!["ce".to_string()], true),
        ];
        assert_eq!(got, want);
        let bc_ef = &classes[2];
        assert_eq!(bc_ef.witness, Some(MinorWitness::Disconnected));
    }

    #[test]
    fn coparallel_closures_of_c4_and_k4() {
        let classes = coparallel_closures_graph(&fixtures::cycle(4)).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].edges.len(), 4);
        assert!(!classes[0].essential);

        let classes = coparallel_closures_graph(&fixtures::complete(4)).unwrap();
        assert_eq!(classes.len(), 6);
        assert!(classes.iter().all(|c| c.essential));
    }

    #[test]
    fn closures_need_biconnected_input() {
        let g = fixtures::path(&["a", "b", "c"]);
        assert!(parallel_closures_graph(&g).is_err());
        assert!(coparallel_closures_graph(&g).is_err());
    }

    #[test]
    fn degree_two_paths_sit_inside_coparallel_classes() {
        let mut b = GraphBuilder::new();
        // theta graph: three internally disjoint u-v paths
        b.edge("u", "a").edge("a", "v").edge("u", "b").edge("b", "c").edge("c", "v").edge("u", "v");
        let g = b.build().unwrap();
        let classes = coparallel_closures_graph(&g).unwrap();
        for path in degree_two_paths(&g) {
            assert!(classes.iter().any(|c| path.is_subset(&c.edges)));
        }
        assert_eq!(degree_two_paths(&fixtures::cycle(5)).len(), 1);
    }
}
