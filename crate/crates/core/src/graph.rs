//! Loopless multigraphs with stable edge identifiers.
//!
//! Vertices carry opaque string labels and are stored in lexicographic
//! order, so vertex ids and every enumeration built on them are
//! reproducible. Edge ids are dense `0..m` in insertion order; parallel
//! edges are distinguished by their labels.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{input, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    /// Smaller endpoint id.
    pub u: VertexId,
    /// Larger endpoint id.
    pub v: VertexId,
    pub label: String,
}

impl Edge {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: BTreeMap<String, VertexId>,
}

/// Collects vertices and edges, strips loops and assigns ids.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: BTreeSet<String>,
    edges: Vec<(String, String, Option<String>)>,
    loops: Vec<(String, Option<String>)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a vertex; vertices are otherwise implied by edges.
    pub fn vertex(&mut self, label: impl Into<String>) -> &mut Self {
        self.vertices.insert(label.into());
        self
    }

    pub fn edge(&mut self, u: impl Into<String>, v: impl Into<String>) -> &mut Self {
        self.push(u.into(), v.into(), None)
    }

    pub fn labeled_edge(
        &mut self,
        u: impl Into<String>,
        v: impl Into<String>,
        label: impl Into<String>,
    ) -> &mut Self {
        self.push(u.into(), v.into(), Some(label.into()))
    }

    fn push(&mut self, u: String, v: String, label: Option<String>) -> &mut Self {
        self.vertices.insert(u.clone());
        self.vertices.insert(v.clone());
        if u == v {
            self.loops.push((u, label));
        } else {
            self.edges.push((u, v, label));
        }
        self
    }

    /// Loops seen so far; they are dropped from the built graph.
    pub fn stripped_loops(&self) -> &[(String, Option<String>)] {
        &self.loops
    }

    pub fn build(&self) -> Result<Graph> {
        let vertices: Vec<String> = self.vertices.iter().cloned().collect();
        let index: BTreeMap<String, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (id, (u, v, label)) in self.edges.iter().enumerate() {
            let label = label.clone().unwrap_or_else(|| format!("e{id}"));
            if !seen.insert(label.clone()) {
                return input(format!("duplicate edge label `{label}`"));
            }
            let (a, b) = (index[u], index[v]);
            edges.push(Edge {
                id,
                u: a.min(b),
                v: a.max(b),
                label,
            });
        }
        Ok(Graph {
            vertices,
            edges,
            index,
        })
    }
}

impl Graph {
    /// Builds a graph from labeled edges `(u, v, label)`.
    pub fn from_labeled_edges<'a>(
        edges: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for (u, v, l) in edges {
            b.labeled_edge(u, v, l);
        }
        b.build()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn edge_id(&self, label: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Resolves vertex labels to ids.
    pub fn vertex_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BTreeSet<VertexId>> {
        labels
            .iter()
            .map(|l| {
                self.vertex_id(l.as_ref())
                    .ok_or_else(|| Error::Input(format!("unknown vertex `{}`", l.as_ref())))
            })
            .collect()
    }

    /// Resolves edge labels to ids.
    pub fn edge_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BTreeSet<EdgeId>> {
        labels
            .iter()
            .map(|l| {
                self.edge_id(l.as_ref())
                    .ok_or_else(|| Error::Input(format!("unknown edge `{}`", l.as_ref())))
            })
            .collect()
    }

    pub fn edge_labels(&self, edges: impl IntoIterator<Item = EdgeId>) -> Vec<String> {
        edges.into_iter().map(|e| self.edges[e].label.clone()).collect()
    }

    pub fn vertex_labels(&self, vertices: impl IntoIterator<Item = VertexId>) -> Vec<String> {
        vertices
            .into_iter()
            .map(|v| self.vertices[v].clone())
            .collect()
    }

    pub fn all_vertices(&self) -> BTreeSet<VertexId> {
        (0..self.n()).collect()
    }

    pub fn all_edges(&self) -> BTreeSet<EdgeId> {
        (0..self.m()).collect()
    }

    /// Incidence lists: for each vertex, `(neighbor, edge id)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for e in &self.edges {
            adj[e.u].push((e.v, e.id));
            adj[e.v].push((e.u, e.id));
        }
        adj
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    /// Endpoints of an edge set, i.e. V(F).
    pub fn endpoints_of<'a>(&self, f: impl IntoIterator<Item = &'a EdgeId>) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &e in f {
            out.insert(self.edges[e].u);
            out.insert(self.edges[e].v);
        }
        out
    }

    pub fn whole(&self) -> Subgraph<'_> {
        Subgraph {
            graph: self,
            vertices: self.all_vertices(),
            edges: self.all_edges(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.whole().is_connected()
    }

    fn check_vertices(&self, u: &BTreeSet<VertexId>) -> Result<()> {
        match u.iter().find(|&&v| v >= self.n()) {
            Some(v) => input(format!("vertex id {v} out of range")),
            None => Ok(()),
        }
    }

    fn check_edges(&self, f: &BTreeSet<EdgeId>) -> Result<()> {
        match f.iter().find(|&&e| e >= self.m()) {
            Some(e) => input(format!("edge id {e} out of range")),
            None => Ok(()),
        }
    }
}

/// A subgraph of a parent graph, given by vertex and edge id sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph<'g> {
    pub graph: &'g Graph,
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl<'g> Subgraph<'g> {
    /// Subgraph spanned by an edge set: (V(F), F).
    pub fn spanned_by(graph: &'g Graph, f: BTreeSet<EdgeId>) -> Result<Self> {
        graph.check_edges(&f)?;
        Ok(Subgraph {
            graph,
            vertices: graph.endpoints_of(&f),
            edges: f,
        })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// One connected component on its own vertex set. The empty subgraph
    /// is not connected; a single isolated vertex is.
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return false;
        };
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &e in &self.edges {
            let ed = self.graph.edge(e);
            adj.entry(ed.u).or_default().push(ed.v);
            adj.entry(ed.v).or_default().push(ed.u);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if self.vertices.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Union with an edge set: (V(H) ∪ V(F), E(H) ∪ F).
    pub fn with_edges(&self, f: &BTreeSet<EdgeId>) -> Subgraph<'g> {
        let mut out = self.clone();
        out.vertices.extend(self.graph.endpoints_of(f));
        out.edges.extend(f.iter().copied());
        out
    }

    /// Materializes the subgraph as a standalone graph. Returns the graph
    /// and, for each new edge id, the parent edge id.
    pub fn to_graph(&self) -> (Graph, Vec<EdgeId>) {
        let vertices: Vec<String> = self
            .vertices
            .iter()
            .map(|&v| self.graph.vertex_label(v).to_string())
            .collect();
        let index: BTreeMap<String, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let remap: BTreeMap<VertexId, VertexId> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut origin = Vec::with_capacity(self.edges.len());
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, &e)| {
                origin.push(e);
                let ed = self.graph.edge(e);
                let (a, b) = (remap[&ed.u], remap[&ed.v]);
                Edge {
                    id,
                    u: a.min(b),
                    v: a.max(b),
                    label: ed.label.clone(),
                }
            })
            .collect();
        (
            Graph {
                vertices,
                edges,
                index,
            },
            origin,
        )
    }
}

/// G(U): vertex set `u` and every edge with both endpoints in `u`.
pub fn induced_subgraph<'g>(g: &'g Graph, u: &BTreeSet<VertexId>) -> Result<Subgraph<'g>> {
    g.check_vertices(u)?;
    let edges = g
        .edges()
        .iter()
        .filter(|e| u.contains(&e.u) && u.contains(&e.v))
        .map(|e| e.id)
        .collect();
    Ok(Subgraph {
        graph: g,
        vertices: u.clone(),
        edges,
    })
}

/// The complementary subgraph (V(E∖F), E∖F); vertices touching no
/// remaining edge are dropped.
pub fn complement_subgraph<'g>(g: &'g Graph, f: &BTreeSet<EdgeId>) -> Result<Subgraph<'g>> {
    g.check_edges(f)?;
    let rest: BTreeSet<EdgeId> = (0..g.m()).filter(|e| !f.contains(e)).collect();
    Subgraph::spanned_by(g, rest)
}

/// Some cut vertex of a connected graph, if one exists.
pub fn find_cut_vertex(g: &Graph) -> Option<VertexId> {
    if g.n() < 3 {
        return None;
    }
    let lp = LowPoint::run(g);
    lp.cut_vertices.into_iter().next()
}

/// 2-connectivity matching the graphic matroid on loopless graphs: the
/// graph must be connected and free of cut vertices. Two vertices joined
/// by at least two parallel edges count as 2-connected; a single edge, a
/// single vertex and the empty graph do not.
pub fn is_biconnected(g: &Graph) -> bool {
    match g.n() {
        0 | 1 => false,
        2 => g.m() >= 2,
        _ => g.is_connected() && find_cut_vertex(g).is_none(),
    }
}

/// Result of deleting or contracting edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub graph: Graph,
    /// `origin[new_id]` is the edge id in the parent graph.
    pub origin: Vec<EdgeId>,
}

/// Deletes the edges of `f`, then drops isolated vertices.
pub fn delete_edges(g: &Graph, f: &BTreeSet<EdgeId>) -> Result<Minor> {
    let (graph, origin) = complement_subgraph(g, f)?.to_graph();
    Ok(Minor { graph, origin })
}

/// Contracts the edges of `f`. Each merged vertex takes the smallest label
/// in its class; edges that become loops are dropped and parallel edges
/// are kept.
pub fn contract_edges(g: &Graph, f: &BTreeSet<EdgeId>) -> Result<Minor> {
    g.check_edges(f)?;
    let mut parent: Vec<VertexId> = (0..g.n()).collect();
    fn find(p: &mut [VertexId], x: VertexId) -> VertexId {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for &e in f {
        let (a, b) = g.edge(e).endpoints();
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        // vertex ids follow label order, so the smaller root keeps the smallest label
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut b = GraphBuilder::new();
    let mut origin = Vec::new();
    for v in 0..g.n() {
        if find(&mut parent, v) == v {
            b.vertex(g.vertex_label(v));
        }
    }
    for e in g.edges() {
        if f.contains(&e.id) {
            continue;
        }
        let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if ru == rv {
            continue;
        }
        b.labeled_edge(g.vertex_label(ru), g.vertex_label(rv), e.label.clone());
        origin.push(e.id);
    }
    Ok(Minor {
        graph: b.build()?,
        origin,
    })
}

/// Maximal 2-connected pieces and bridges of a connected graph.
#[derive(Clone, Debug)]
pub struct BlockDecomposition<'g> {
    pub blocks: Vec<Subgraph<'g>>,
    pub bridge_edges: BTreeSet<EdgeId>,
}

impl BlockDecomposition<'_> {
    pub fn is_bridge_block(&self, i: usize) -> bool {
        self.blocks[i].m() == 1
    }
}

/// Block decomposition; blocks are ordered by their smallest edge id.
pub fn blocks(g: &Graph) -> Result<BlockDecomposition<'_>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let lp = LowPoint::run(g);
    let mut blocks: Vec<Subgraph<'_>> = lp
        .blocks
        .into_iter()
        .map(|edges| Subgraph {
            graph: g,
            vertices: g.endpoints_of(&edges),
            edges,
        })
        .collect();
    blocks.sort_by_key(|b| b.edges.iter().next().copied());
    let bridge_edges = blocks
        .iter()
        .filter(|b| b.m() == 1)
        .flat_map(|b| b.edges.iter().copied())
        .collect();
    Ok(BlockDecomposition {
        blocks,
        bridge_edges,
    })
}

/// Hopcroft–Tarjan low-point search over edge ids, so parallel edges are
/// back edges rather than being confused with the tree edge.
struct LowPoint {
    cut_vertices: BTreeSet<VertexId>,
    blocks: Vec<BTreeSet<EdgeId>>,
}

impl LowPoint {
    fn run(g: &Graph) -> Self {
        let adj = g.adjacency();
        let n = g.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut stack: Vec<EdgeId> = Vec::new();
        let mut out = LowPoint {
            cut_vertices: BTreeSet::new(),
            blocks: Vec::new(),
        };
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // frames: (vertex, parent edge, next adjacency index)
            let mut frames: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            while let Some(&mut (v, pe, ref mut i)) = frames.last_mut() {
                if *i < adj[v].len() {
                    let (w, e) = adj[v][*i];
                    *i += 1;
                    if Some(e) == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        stack.push(e);
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if v == root {
                            root_children += 1;
                        }
                        frames.push((w, Some(e), 0));
                    } else if disc[w] < disc[v] {
                        stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    frames.pop();
                    let Some(&(p, _, _)) = frames.last() else {
                        continue;
                    };
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        if p != root {
                            out.cut_vertices.insert(p);
                        }
                        let tree_edge = pe.expect("non-root frame has a parent edge");
                        let mut block = BTreeSet::new();
                        while let Some(e) = stack.pop() {
                            block.insert(e);
                            if e == tree_edge {
                                break;
                            }
                        }
                        out.blocks.push(block);
                    }
                }
            }
            if root_children >= 2 {
                out.cut_vertices.insert(root);
            }
        }
        out
    }
}
