//! Locked subgraphs of a 2-connected graph.
//!
//! H = G(U) is locked iff
//!
//! 1. G(U) is induced and 2-connected,
//! 2. 3 ≤ |U| ≤ n − 1,
//! 3. the complement H̄ has m_H̄ ≥ n_H̄ or meets H in at least 3 vertices,
//! 4. G(V ∖ U) is connected.
//!
//! Condition 4 is equivalent to a vertex count: for any split of E ∖ E(H)
//! into connected L1, L2, the outside is connected iff
//! n_H + n < n_{H∪L1} + n_{H∪L2}.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{input, Error, Result};
use crate::graph::{complement_subgraph, induced_subgraph, is_biconnected, EdgeId, Graph, Subgraph, VertexId};

/// Bounds for the vertex-subset scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LockedOptions {
    /// Largest block (in vertices) that will be scanned.
    pub max_n: usize,
}

impl LockedOptions {
    pub const DEFAULT_MAX_N: usize = 24;
}

impl Default for LockedOptions {
    fn default() -> Self {
        LockedOptions {
            max_n: Self::DEFAULT_MAX_N,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LockedCertificate {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
    pub n_h: usize,
    pub m_h: usize,
    pub complement_vertices: BTreeSet<VertexId>,
    pub complement_edges: BTreeSet<EdgeId>,
    pub n_hbar: usize,
    pub m_hbar: usize,
    /// |V(H) ∩ V(H̄)|.
    pub boundary_size: usize,
    pub outside_connected: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailedCondition {
    NotInduced2Connected,
    SizeBounds,
    EdgeOrBoundary,
    OutsideDisconnected,
}

impl fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailedCondition::NotInduced2Connected => "not-induced-2-connected",
            FailedCondition::SizeBounds => "size-bounds",
            FailedCondition::EdgeOrBoundary => "edge-or-boundary-condition",
            FailedCondition::OutsideDisconnected => "outside-disconnected",
        })
    }
}

/// A split of E ∖ E(H) into connected L1, L2 with the vertex counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingWitness {
    pub l1: BTreeSet<EdgeId>,
    pub l2: BTreeSet<EdgeId>,
    pub n_h: usize,
    pub n: usize,
    pub n_h_l1: usize,
    pub n_h_l2: usize,
}

impl CountingWitness {
    /// n_H + n.
    pub fn lhs(&self) -> usize {
        self.n_h + self.n
    }

    /// n_{H∪L1} + n_{H∪L2}.
    pub fn rhs(&self) -> usize {
        self.n_h_l1 + self.n_h_l2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotLockedReason {
    pub failed: FailedCondition,
    pub counting_witness: Option<CountingWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LockedVerdict {
    Locked(LockedCertificate),
    NotLocked(NotLockedReason),
}

impl LockedVerdict {
    pub fn is_locked(&self) -> bool {
        matches!(self, LockedVerdict::Locked(_))
    }
}

fn require_biconnected(g: &Graph) -> Result<()> {
    if is_biconnected(g) {
        Ok(())
    } else {
        Err(Error::NotBiconnected("locked subgraphs are defined per 2-connected block".into()))
    }
}

fn is_connected_edge_set(g: &Graph, f: &BTreeSet<EdgeId>) -> bool {
    Subgraph::spanned_by(g, f.clone()).is_ok_and(|s| s.is_connected())
}

/// Returns (G(V∖V(H)) connected, n_H + n < n_{H∪L1} + n_{H∪L2}).
pub fn complement_connectivity_criterion(
    g: &Graph,
    h: &Subgraph<'_>,
    l1: &BTreeSet<EdgeId>,
    l2: &BTreeSet<EdgeId>,
) -> Result<(bool, bool)> {
    if !std::ptr::eq(h.graph, g) && h.graph != g {
        return input("subgraph belongs to another graph");
    }
    if !is_biconnected(&h.to_graph().0) {
        return input("H must be 2-connected");
    }
    if !l1.is_disjoint(l2) {
        return input("L1 and L2 overlap");
    }
    let rest: BTreeSet<EdgeId> = (0..g.m()).filter(|e| !h.edges.contains(e)).collect();
    if l1.union(l2).copied().collect::<BTreeSet<_>>() != rest {
        return input("L1 and L2 must partition E ∖ E(H)");
    }
    if !is_connected_edge_set(g, l1) || !is_connected_edge_set(g, l2) {
        return input("each (V(Li), Li) must be connected");
    }
    let outside: BTreeSet<VertexId> = (0..g.n()).filter(|v| !h.vertices.contains(v)).collect();
    let lhs = induced_subgraph(g, &outside)?.is_connected();
    let rhs = h.n() + g.n() < h.with_edges(l1).n() + h.with_edges(l2).n();
    Ok((lhs, rhs))
}

/// Connected components of G(outside), ordered by smallest vertex.
pub(crate) fn outside_components(g: &Graph, outside: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
    let adj = g.adjacency();
    let mut seen = BTreeSet::new();
    let mut comps = Vec::new();
    for &s in outside {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if outside.contains(&w) && seen.insert(w) {
                    comp.insert(w);
                    queue.push_back(w);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Groups E ∖ E(H) by outside component and searches for a split of the
/// groups into two connected halves.
fn counting_witness(g: &Graph, h: &Subgraph<'_>) -> Option<CountingWitness> {
    const MAX_GROUPS: usize = 20;
    let outside: BTreeSet<VertexId> = (0..g.n()).filter(|v| !h.vertices.contains(v)).collect();
    let comps = outside_components(g, &outside);
    if comps.len() < 2 || comps.len() > MAX_GROUPS {
        return None;
    }
    let groups: Vec<BTreeSet<EdgeId>> = comps
        .iter()
        .map(|c| {
            g.edges()
                .iter()
                .filter(|e| c.contains(&e.u) || c.contains(&e.v))
                .map(|e| e.id)
                .collect()
        })
        .collect();
    let k = groups.len();
    // group 0 always goes to L1, so each split is seen once
    for mask in 1u32..(1 << (k - 1)) {
        let mut l1 = groups[0].clone();
        let mut l2 = BTreeSet::new();
        for (i, grp) in groups.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                l2.extend(grp);
            } else {
                l1.extend(grp);
            }
        }
        if is_connected_edge_set(g, &l1) && is_connected_edge_set(g, &l2) {
            return Some(CountingWitness {
                n_h: h.n(),
                n: g.n(),
                n_h_l1: h.with_edges(&l1).n(),
                n_h_l2: h.with_edges(&l2).n(),
                l1,
                l2,
            });
        }
    }
    None
}

/// Checks the four conditions in order and returns a certificate, or the
/// first failing condition (with a counting witness when the outside is
/// disconnected and a connected split exists).
pub fn is_locked_subgraph(g: &Graph, u: &BTreeSet<VertexId>) -> Result<LockedVerdict> {
    require_biconnected(g)?;
    let h = induced_subgraph(g, u)?;
    let fail = |failed| {
        Ok(LockedVerdict::NotLocked(NotLockedReason {
            failed,
            counting_witness: None,
        }))
    };
    if !is_biconnected(&h.to_graph().0) {
        return fail(FailedCondition::NotInduced2Connected);
    }
    if h.n() < 3 || h.n() + 1 > g.n() {
        return fail(FailedCondition::SizeBounds);
    }
    let hbar = complement_subgraph(g, &h.edges)?;
    let boundary_size = h.vertices.intersection(&hbar.vertices).count();
    if hbar.m() < hbar.n() && boundary_size < 3 {
        return fail(FailedCondition::EdgeOrBoundary);
    }
    let outside: BTreeSet<VertexId> = (0..g.n()).filter(|v| !u.contains(v)).collect();
    if !induced_subgraph(g, &outside)?.is_connected() {
        return Ok(LockedVerdict::NotLocked(NotLockedReason {
            failed: FailedCondition::OutsideDisconnected,
            counting_witness: counting_witness(g, &h),
        }));
    }
    Ok(LockedVerdict::Locked(LockedCertificate {
        n_h: h.n(),
        m_h: h.m(),
        n_hbar: hbar.n(),
        m_hbar: hbar.m(),
        boundary_size,
        outside_connected: true,
        vertices: h.vertices,
        edges: h.edges,
        complement_vertices: hbar.vertices,
        complement_edges: hbar.edges,
    }))
}

/// Vertex adjacency as bit masks, for the subset scan.
struct MaskGraph {
    adj: Vec<u64>,
}

impl MaskGraph {
    fn new(g: &Graph) -> Self {
        let mut adj = vec![0u64; g.n()];
        for e in g.edges() {
            adj[e.u] |= 1 << e.v;
            adj[e.v] |= 1 << e.u;
        }
        MaskGraph { adj }
    }

    fn connected(&self, set: u64) -> bool {
        if set == 0 {
            return false;
        }
        let mut reached = set & set.wrapping_neg();
        let mut frontier = reached;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & set & !reached;
            reached |= new;
            frontier |= new;
        }
        reached == set
    }

    /// Connected with no cut vertex; callers ensure at least 3 vertices.
    fn biconnected(&self, set: u64) -> bool {
        if !self.connected(set) {
            return false;
        }
        let mut rest = set;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if !self.connected(set & !bit) {
                return false;
            }
        }
        true
    }
}

/// All locked subgraphs of a 2-connected graph, sorted by vertex set.
///
/// Locked subgraphs are induced, so scanning vertex subsets suffices.
/// Cheap mask filters run first; survivors are certified through
/// [`is_locked_subgraph`].
pub fn enumerate_locked_subgraphs(g: &Graph, opts: &LockedOptions) -> Result<Vec<LockedCertificate>> {
    require_biconnected(g)?;
    let n = g.n();
    if n > opts.max_n || n > 63 {
        return Err(Error::Capacity {
            what: format!("locked-subgraph scan over 2^{n} vertex subsets"),
            limit: opts.max_n.min(63) as u64,
            hint: "raise the bound with --max-n (or STP_MAX_SUBSETS) if this is intended".into(),
        });
    }
    let mg = MaskGraph::new(g);
    let all: u64 = (1u64 << n) - 1;
    let edge_masks: Vec<(u64, u64)> = g.edges().iter().map(|e| (1 << e.u, 1 << e.v)).collect();
    let mut out = Vec::new();
    for u in 1..all {
        let size = u.count_ones() as usize;
        if size < 3 || size > n - 1 {
            continue;
        }
        let outside = all & !u;
        if !mg.connected(outside) || !mg.biconnected(u) {
            continue;
        }
        let inside_edges = edge_masks
            .iter()
            .filter(|&&(a, b)| a & u != 0 && b & u != 0)
            .count();
        let m_hbar = g.m() - inside_edges;
        let boundary = (0..n)
            .filter(|&v| u >> v & 1 == 1 && mg.adj[v] & outside != 0)
            .count();
        let n_hbar = outside.count_ones() as usize + boundary;
        if m_hbar < n_hbar && boundary < 3 {
            continue;
        }
        let vertices: BTreeSet<VertexId> = (0..n).filter(|&v| u >> v & 1 == 1).collect();
        match is_locked_subgraph(g, &vertices)? {
            LockedVerdict::Locked(cert) => out.push(cert),
            LockedVerdict::NotLocked(r) => {
                unreachable!("mask filters accepted {vertices:?} but the full check failed: {r:?}")
            }
        }
    }
    out.sort_by(|a, b| a.vertices.iter().cmp(b.vertices.iter()));
    Ok(out)
}
