//! Cross-checks between the graph layer, the matroid layer and the
//! brute-force oracle over the small-graph catalog and random multigraphs.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use stp_core::closures::{coparallel_closures_graph, parallel_closures_graph};
use stp_core::facets::{canonicalize, spanning_tree_polytope_system, ConstraintSystem, Inequality, Provenance, RowKey, Sense};
use stp_core::fixtures;
use stp_core::graph::{blocks, delete_edges, is_biconnected, Graph, GraphBuilder};
use stp_core::locked::{enumerate_locked_subgraphs, is_locked_subgraph, LockedOptions};
use stp_core::matroid::{
    bases_polytope_system, closure_classes, is_2connected_matroid, is_essential_closure, ClosureKind, ElementSet,
    GraphicMatroid,
};
use stp_core::oracle::{
    affine_rank, compare_with_hull, AffineHull, hull_facets, is_facet, spanning_trees, tree_count_determinant, HullCheck,
    HullLimits, NormalForm, TreeVector,
};

fn test_graphs() -> Vec<Graph> {
    let mut gs = common::catalog();
    gs.extend(common::random_multigraphs(200, 7));
    gs
}

fn key_set(sys: &ConstraintSystem) -> BTreeSet<RowKey> {
    sys.canonical_keys().unwrap()
}

fn eq_key_set(sys: &ConstraintSystem) -> BTreeSet<RowKey> {
    sys.equalities.iter().map(|q| canonicalize(q).unwrap().key()).collect()
}

#[test]
fn graph_and_matroid_2connectivity_agree() {
    let mut checked = 0;
    for g in test_graphs() {
        let mut variants = vec![g.clone()];
        for e in 0..g.m() {
            variants.push(delete_edges(&g, &BTreeSet::from([e])).unwrap().graph);
        }
        for h in variants {
            // the single-edge graph is a 2-connected matroid but not a 2-connected graph
            if h.m() < 2 {
                continue;
            }
            let m = GraphicMatroid::new(&h).unwrap();
            assert_eq!(is_biconnected(&h), is_2connected_matroid(&m), "{:?}", h.edges());
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn closures_agree_with_matroid_classes() {
    for g in test_graphs() {
        let m = GraphicMatroid::new(&g).unwrap();
        for (kind, graph_side) in [
            (ClosureKind::Parallel, parallel_closures_graph(&g).unwrap()),
            (ClosureKind::Coparallel, coparallel_closures_graph(&g).unwrap()),
        ] {
            let matroid_side: Vec<(BTreeSet<usize>, bool)> = closure_classes(&m, kind)
                .unwrap()
                .into_iter()
                .map(|c| (c.iter().collect(), is_essential_closure(&m, c, kind)))
                .collect();
            let mut graph_side: Vec<(BTreeSet<usize>, bool)> =
                graph_side.into_iter().map(|c| (c.edges, c.essential)).collect();
            let mut matroid_side = matroid_side;
            graph_side.sort();
            matroid_side.sort();
            assert_eq!(graph_side, matroid_side, "{kind} on {:?}", g.edges());
        }
    }
}

#[test]
fn bases_system_matches_graph_system() {
    for g in test_graphs() {
        let m = GraphicMatroid::new(&g).unwrap();
        let matroid_sys = bases_polytope_system(&m).unwrap();
        let graph_sys = spanning_tree_polytope_system(&g).unwrap().system;
        assert_eq!(key_set(&matroid_sys), key_set(&graph_sys), "{:?}", g.edges());
        assert_eq!(eq_key_set(&matroid_sys), eq_key_set(&graph_sys));
        assert_eq!(matroid_sys.inequalities.len(), graph_sys.inequalities.len());
    }
}

fn assert_hull_matches(g: &Graph) {
    let sys = spanning_tree_polytope_system(g).unwrap().system;
    let trees = spanning_trees(g).unwrap();
    let points: Vec<Vec<i64>> = trees.iter().map(TreeVector::to_i64).collect();
    let hull = hull_facets(&points, &HullLimits::default()).unwrap();
    assert_eq!(
        compare_with_hull(&sys, &hull),
        HullCheck::Compared { missing: vec![], redundant: vec![] },
        "{:?}",
        g.edges()
    );
    assert_eq!(hull.facets.len(), sys.inequalities.len());
    // the equalities cut out exactly the affine hull
    assert_eq!(hull.equalities.len(), sys.equalities.len());
    for q in &sys.equalities {
        assert!(trees.iter().all(|t| q.is_satisfied_by(&t.bits)));
    }
}

#[test]
fn hull_equals_system_on_small_graphs() {
    let mut checked = 0;
    for g in test_graphs().iter().filter(|g| g.m() <= 10) {
        assert_hull_matches(g);
        checked += 1;
    }
    assert!(checked > 150);
}

#[test]
fn hull_equals_system_with_bridges_and_cut_vertices() {
    let mut b = GraphBuilder::new();
    b.edge("a", "b").edge("b", "c").edge("c", "a").edge("c", "d").edge("d", "e").edge("d", "e").edge("e", "x");
    let pendant = b.build().unwrap();
    for g in [
        fixtures::two_triangles_sharing_vertex(),
        fixtures::path(&["a", "b", "c", "d"]),
        pendant,
        fixtures::multi_edge(4),
    ] {
        assert_hull_matches(&g);
    }
}

#[test]
fn locked_rows_are_facets_and_others_are_not() {
    for g in common::catalog() {
        let trees = spanning_trees(&g).unwrap();
        let dim = g.m() - 1;
        let locked: BTreeSet<BTreeSet<usize>> = enumerate_locked_subgraphs(&g, &LockedOptions::default())
            .unwrap()
            .into_iter()
            .map(|c| c.vertices)
            .collect();
        let points: Vec<Vec<i64>> = trees.iter().map(TreeVector::to_i64).collect();
        let hull = AffineHull::of(&points).unwrap();
        let sys = spanning_tree_polytope_system(&g).unwrap().system;
        let emitted: BTreeSet<NormalForm> = sys.inequalities.iter().map(|q| hull.normal_form(q).unwrap()).collect();
        for u in common::induced_biconnected_subsets(&g) {
            let h = stp_core::graph::induced_subgraph(&g, &u).unwrap();
            let row = Inequality::sum_over(h.edges.iter().copied(), Sense::Le, u.len() as i64 - 1, Provenance::External);
            let verdict = is_locked_subgraph(&g, &u).unwrap();
            assert_eq!(verdict.is_locked(), locked.contains(&u));
            let facet = is_facet(&row, &trees, dim).unwrap();
            if verdict.is_locked() {
                assert!(facet, "{u:?} in {:?}", g.edges());
            } else if facet {
                // a non-locked facet must coincide with a row already emitted
                assert!(emitted.contains(&hull.normal_form(&row).unwrap()), "{u:?} in {:?}", g.edges());
            }
        }
    }
}

#[test]
fn polytope_dimension_is_m_minus_blocks() {
    for g in [fixtures::two_triangles_sharing_vertex(), fixtures::path(&["a", "b", "c"]), fixtures::ce()] {
        let trees = spanning_trees(&g).unwrap();
        let k = blocks(&g).unwrap().blocks.len();
        assert_eq!(affine_rank(&trees), (g.m() - k) as i64);
    }
}

#[test]
fn uniform_matroid_instances() {
    use stp_core::matroid::{Matroid, UniformMatroid};
    // U_{1,3}: x(E) = 1 and x(e) >= 0
    let u13 = UniformMatroid { rank: 1, size: 3 };
    let sys = bases_polytope_system(&u13).unwrap();
    assert_eq!(sys.inequalities.len(), 3);
    assert!(sys.inequalities.iter().all(|q| q.sense == Sense::Ge && q.rhs == 0 && q.coeffs.len() == 1));
    // agrees with three parallel edges
    let g = fixtures::multi_edge(3);
    assert_eq!(key_set(&sys), key_set(&spanning_tree_polytope_system(&g).unwrap().system));
    let u24 = UniformMatroid { rank: 2, size: 4 };
    assert!(is_2connected_matroid(&u24));
    assert_eq!(u24.rank(ElementSet::full(4)), 2);
}

fn arb_connected_multigraph() -> impl Strategy<Value = Graph> {
    (2usize..=6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 1..n), n - 1..=10)))
        .prop_filter_map("connected", |(n, raw)| {
            let names = ["a", "b", "c", "d", "e", "f"];
            let mut b = GraphBuilder::new();
            for (u, d) in raw {
                b.edge(names[u], names[(u + d) % n]);
            }
            let g = b.build().ok()?;
            (g.n() == n && g.is_connected()).then_some(g)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_count_and_dimension(g in arb_connected_multigraph()) {
        let trees = spanning_trees(&g).unwrap();
        prop_assert_eq!(num_bigint::BigInt::from(trees.len()), tree_count_determinant(&g));
        let k = blocks(&g).unwrap().blocks.len();
        prop_assert_eq!(affine_rank(&trees), (g.m() - k) as i64);
    }

    #[test]
    fn emitted_rows_are_valid_facets(g in arb_connected_multigraph()) {
        let sys = spanning_tree_polytope_system(&g).unwrap().system;
        let trees = spanning_trees(&g).unwrap();
        prop_assert_eq!(sys.dimension as i64, affine_rank(&trees));
        for q in &sys.inequalities {
            prop_assert!(is_facet(q, &trees, sys.dimension).unwrap(), "{}", q);
        }
        for q in &sys.equalities {
            prop_assert!(trees.iter().all(|t| q.is_satisfied_by(&t.bits)));
        }
    }

    #[test]
    fn canonicalize_is_scale_invariant(
        coeffs in prop::collection::btree_map(0usize..8, -5i64..=5, 1..6),
        rhs in -10i64..10,
        scale in 1i64..7,
        ge in any::<bool>(),
    ) {
        prop_assume!(coeffs.values().any(|&c| c != 0));
        let sense = if ge { Sense::Ge } else { Sense::Le };
        let q = Inequality::new(coeffs.clone(), sense, rhs, Provenance::External);
        let scaled = Inequality::new(coeffs.iter().map(|(&k, &c)| (k, c * scale)), sense, rhs * scale, Provenance::External);
        let c = canonicalize(&q).unwrap();
        prop_assert_eq!(c.key(), canonicalize(&scaled).unwrap().key());
        prop_assert_eq!(canonicalize(&c).unwrap().key(), c.key());
        prop_assert_eq!(c.sense, Sense::Le);
    }
}
