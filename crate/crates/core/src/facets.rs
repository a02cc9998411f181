//! Integer linear constraints over edge (or element) coordinates, and the
//! facet description of the spanning-tree polytope.
//!
//! For a connected graph the polytope is the product of the polytopes of
//! its blocks. Each bridge is the fixed coordinate x(e) = 1. Each
//! 2-connected block B contributes
//!
//! * x(P) ≤ 1 for every essential parallel closure P,
//! * x(S) ≥ |S| − 1 for every essential coparallel closure S,
//! * x(E(H)) ≤ n_H − 1 for every locked subgraph H,
//! * the equality x(E(B)) = n_B − 1,
//!
//! and these rows are exactly its facets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;

use crate::closures::{coparallel_closures_graph, parallel_closures_graph};
use crate::error::{input, Error, Result};
use crate::graph::{blocks, complement_subgraph, induced_subgraph, EdgeId, Graph, Subgraph, VertexId};
use crate::locked::{
    enumerate_locked_subgraphs, is_locked_subgraph, FailedCondition, LockedOptions, LockedVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "<=" => Some(Sense::Le),
            ">=" => Some(Sense::Ge),
            "=" | "==" => Some(Sense::Eq),
            _ => None,
        }
    }
}

/// Where a row came from. Element and vertex lists are sorted ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    ParallelClosure(Vec<usize>),
    CoparallelClosure(Vec<usize>),
    /// Locked subset of a matroid, by element.
    LockedSubset(Vec<usize>),
    /// Locked subgraph, by vertex set U.
    LockedSubgraph(Vec<VertexId>),
    /// x(e) ≥ 0 on a two-element block (U_{1,2}).
    Nonnegativity(usize),
    /// x(E(F)) ≤ |V(F)| − 1 for the subgraph spanned by these vertices.
    RankBound(Vec<VertexId>),
    Bridge(usize),
    Cardinality,
    ComplementForm(Box<Provenance>),
    External,
}

/// Constraint families that have a complemented twin form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Parallel,
    Coparallel,
    Locked,
}

impl Provenance {
    pub fn family(&self) -> Option<Family> {
        match self {
            Provenance::ParallelClosure(_) => Some(Family::Parallel),
            Provenance::CoparallelClosure(_) => Some(Family::Coparallel),
            Provenance::LockedSubset(_) | Provenance::LockedSubgraph(_) => Some(Family::Locked),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    /// Nonzero coefficients by coordinate.
    pub coeffs: BTreeMap<usize, i64>,
    pub sense: Sense,
    pub rhs: i64,
    pub provenance: Provenance,
}

impl Inequality {
    pub fn new(
        coeffs: impl IntoIterator<Item = (usize, i64)>,
        sense: Sense,
        rhs: i64,
        provenance: Provenance,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            *map.entry(k).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        Inequality {
            coeffs: map,
            sense,
            rhs,
            provenance,
        }
    }

    /// x(F) `sense` rhs.
    pub fn sum_over(
        f: impl IntoIterator<Item = usize>,
        sense: Sense,
        rhs: i64,
        provenance: Provenance,
    ) -> Self {
        Self::new(f.into_iter().map(|e| (e, 1)), sense, rhs, provenance)
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn lhs<T: Copy + Into<i64>>(&self, x: &[T]) -> i64 {
        self.coeffs.iter().map(|(&k, &c)| c * x[k].into()).sum()
    }

    pub fn is_satisfied_by<T: Copy + Into<i64>>(&self, x: &[T]) -> bool {
        let l = self.lhs(x);
        match self.sense {
            Sense::Le => l <= self.rhs,
            Sense::Ge => l >= self.rhs,
            Sense::Eq => l == self.rhs,
        }
    }

    pub fn is_tight_at<T: Copy + Into<i64>>(&self, x: &[T]) -> bool {
        self.lhs(x) == self.rhs
    }

    /// Same row in ≤ form (≥ rows negated); equalities are returned as is.
    pub fn as_le(&self) -> Inequality {
        match self.sense {
            Sense::Ge => Inequality {
                coeffs: self.coeffs.iter().map(|(&k, &c)| (k, -c)).collect(),
                sense: Sense::Le,
                rhs: -self.rhs,
                provenance: self.provenance.clone(),
            },
            _ => self.clone(),
        }
    }

    pub fn dense(&self, dim: usize) -> Vec<i64> {
        let mut v = vec![0; dim];
        for (&k, &c) in &self.coeffs {
            v[k] = c;
        }
        v
    }

    /// Row key that ignores provenance.
    pub fn key(&self) -> RowKey {
        RowKey {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c)).collect(),
            sense: self.sense,
            rhs: self.rhs,
        }
    }

    /// Renders the row with coordinate names from `name`.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        let mut out = String::new();
        for (i, (&k, &c)) in self.coeffs.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            if i > 0 && !sign.is_empty() {
                out.push(' ');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&format!("x({})", name(k)));
        }
        if self.coeffs.is_empty() {
            out.push('0');
        }
        format!("{out} {} {}", self.sense.symbol(), self.rhs)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|k| k.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowKey {
    pub coeffs: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Canonical form: ≥ rows become ≤ rows by negation and all entries are
/// divided by their common gcd. Equalities keep their sense and get a
/// positive leading coefficient. Idempotent.
pub fn canonicalize(q: &Inequality) -> Result<Inequality> {
    if q.coeffs.values().all(|&c| c == 0) {
        return input("inequality has no nonzero coefficient");
    }
    let mut out = q.as_le();
    let g = out
        .coeffs
        .values()
        .fold(out.rhs.abs(), |g, &c| g.gcd(&c.abs()));
    for c in out.coeffs.values_mut() {
        *c /= g;
    }
    out.rhs /= g;
    if out.sense == Sense::Eq && out.coeffs.values().next().is_some_and(|&c| c < 0) {
        for c in out.coeffs.values_mut() {
            *c = -*c;
        }
        out.rhs = -out.rhs;
    }
    Ok(out)
}

/// A set of inequalities plus equalities over coordinates `0..`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConstraintSystem {
    pub inequalities: Vec<Inequality>,
    pub equalities: Vec<Inequality>,
    /// Dimension of the described polytope.
    pub dimension: usize,
}

impl ConstraintSystem {
    /// Pairs of inequality indices that canonicalize identically.
    pub fn duplicate_rows(&self) -> Vec<(usize, usize)> {
        let mut seen: HashMap<RowKey, usize> = HashMap::new();
        let mut dups = Vec::new();
        for (i, q) in self.inequalities.iter().enumerate() {
            let Ok(c) = canonicalize(q) else { continue };
            if let Some(&j) = seen.get(&c.key()) {
                dups.push((j, i));
            } else {
                seen.insert(c.key(), i);
            }
        }
        dups
    }

    pub fn canonical_keys(&self) -> Result<BTreeSet<RowKey>> {
        self.inequalities
            .iter()
            .map(|q| canonicalize(q).map(|c| c.key()))
            .collect()
    }
}

/// Key of a row modulo an all-ones equality x(B) = c covering its support:
/// the ≤ form is shifted by a multiple of the equality so that its
/// smallest coefficient on B is zero, then divided by the gcd. Two such
/// rows define the same face of {x(B) = c} iff their keys agree.
fn key_modulo(q: &Inequality, eq: &Inequality) -> RowKey {
    let le = q.as_le();
    let shift = eq
        .coeffs
        .keys()
        .map(|k| le.coeffs.get(k).copied().unwrap_or(0))
        .min()
        .unwrap_or(0);
    let mut coeffs: BTreeMap<usize, i64> = le.coeffs.clone();
    for k in eq.coeffs.keys() {
        *coeffs.entry(*k).or_insert(0) -= shift;
    }
    coeffs.retain(|_, c| *c != 0);
    let rhs = le.rhs - shift * eq.rhs;
    let g = coeffs.values().fold(rhs.abs(), |g, &c| g.gcd(&c.abs())).max(1);
    RowKey {
        coeffs: coeffs.into_iter().map(|(k, c)| (k, c / g)).collect(),
        sense: Sense::Le,
        rhs: rhs / g,
    }
}

/// Drops rows that define the same face as an earlier row modulo the
/// all-ones equality covering them. This happens exactly when a block's
/// edges split into an essential parallel closure P and an essential
/// coparallel closure S with |S| = r(E): x(P) ≤ 1 and x(S) ≥ |S| − 1
/// then coincide on x(E) = r(E), and the parallel row is kept.
pub(crate) fn drop_equivalent_rows(rows: Vec<Inequality>, equalities: &[Inequality]) -> Vec<Inequality> {
    let mut seen = BTreeSet::new();
    rows.into_iter()
        .filter(|q| {
            let cover = equalities.iter().find(|e| {
                e.coeffs.values().all(|&c| c == 1) && q.coeffs.keys().all(|k| e.coeffs.contains_key(k))
            });
            match cover {
                Some(eq) => seen.insert(key_modulo(q, eq)),
                None => true,
            }
        })
        .collect()
}

/// The facet system of a graph's spanning-tree polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSystem {
    pub graph: Graph,
    pub system: ConstraintSystem,
}

pub fn spanning_tree_polytope_system(g: &Graph) -> Result<FacetSystem> {
    spanning_tree_polytope_system_with(g, &LockedOptions::default())
}

pub fn spanning_tree_polytope_system_with(g: &Graph, opts: &LockedOptions) -> Result<FacetSystem> {
    let decomposition = blocks(g)?;
    let mut parallel = Vec::new();
    let mut coparallel = Vec::new();
    let mut locked = Vec::new();
    let mut equalities = Vec::new();
    let mut dimension = 0;
    for block in &decomposition.blocks {
        if block.m() == 1 {
            let e = *block.edges.iter().next().expect("bridge block has one edge");
            equalities.push(Inequality::sum_over([e], Sense::Eq, 1, Provenance::Bridge(e)));
            continue;
        }
        let (bg, origin) = block.to_graph();
        let lift = |edges: &BTreeSet<EdgeId>| -> Vec<EdgeId> {
            let mut v: Vec<EdgeId> = edges.iter().map(|&e| origin[e]).collect();
            v.sort_unstable();
            v
        };
        dimension += bg.m() - 1;
        equalities.push(Inequality::sum_over(
            block.edges.iter().copied(),
            Sense::Eq,
            bg.n() as i64 - 1,
            Provenance::Cardinality,
        ));
        if bg.m() == 2 {
            for &e in &origin {
                parallel.push(Inequality::sum_over([e], Sense::Ge, 0, Provenance::Nonnegativity(e)));
            }
            continue;
        }
        for p in parallel_closures_graph(&bg)?.into_iter().filter(|c| c.essential) {
            let edges = lift(&p.edges);
            parallel.push(Inequality::sum_over(
                edges.clone(),
                Sense::Le,
                1,
                Provenance::ParallelClosure(edges),
            ));
        }
        for s in coparallel_closures_graph(&bg)?.into_iter().filter(|c| c.essential) {
            let edges = lift(&s.edges);
            coparallel.push(Inequality::sum_over(
                edges.clone(),
                Sense::Ge,
                edges.len() as i64 - 1,
                Provenance::CoparallelClosure(edges),
            ));
        }
        for cert in enumerate_locked_subgraphs(&bg, opts)? {
            let vertices: Vec<VertexId> = cert
                .vertices
                .iter()
                .map(|&v| g.vertex_id(bg.vertex_label(v)).expect("block vertices come from g"))
                .collect();
            locked.push(Inequality::sum_over(
                lift(&cert.edges),
                Sense::Le,
                cert.n_h as i64 - 1,
                Provenance::LockedSubgraph(vertices),
            ));
        }
    }
    let rows = parallel.into_iter().chain(coparallel).chain(locked).collect();
    let system = ConstraintSystem {
        inequalities: drop_equivalent_rows(rows, &equalities),
        equalities,
        dimension,
    };
    if let Some(&(i, j)) = system.duplicate_rows().first() {
        return Err(Error::DuplicateRow(i, j));
    }
    Ok(FacetSystem {
        graph: g.clone(),
        system,
    })
}

/// Family members kept in their original form; the rest are complemented.
/// Members are identified by their sorted support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Selection {
    pub parallel: BTreeSet<Vec<usize>>,
    pub coparallel: BTreeSet<Vec<usize>>,
    pub locked: BTreeSet<Vec<usize>>,
}

impl Selection {
    /// Keeps every family member of `sys` as is.
    pub fn keep_all(sys: &ConstraintSystem) -> Self {
        let mut s = Selection::default();
        for q in &sys.inequalities {
            if let Some(f) = q.provenance.family() {
                s.get_mut(f).insert(q.support());
            }
        }
        s
    }

    pub fn get(&self, f: Family) -> &BTreeSet<Vec<usize>> {
        match f {
            Family::Parallel => &self.parallel,
            Family::Coparallel => &self.coparallel,
            Family::Locked => &self.locked,
        }
    }

    pub fn get_mut(&mut self, f: Family) -> &mut BTreeSet<Vec<usize>> {
        match f {
            Family::Parallel => &mut self.parallel,
            Family::Coparallel => &mut self.coparallel,
            Family::Locked => &mut self.locked,
        }
    }
}

/// Supports of the rows of one family, in row order.
pub fn family_members(sys: &ConstraintSystem, family: Family) -> Vec<Vec<usize>> {
    sys.inequalities
        .iter()
        .filter(|q| q.provenance.family() == Some(family))
        .map(Inequality::support)
        .collect()
}

/// Rewrites family rows outside `keep` in complemented form relative to
/// the cardinality equality x(E) = r(E) of their block:
///
/// * x(P) ≤ 1 becomes x(E∖P) ≥ r(E) − 1,
/// * x(S) ≥ |S| − 1 becomes x(E∖S) ≤ r(E∖S) = r(E) − |S| + 1,
/// * x(L) ≤ r(L) becomes x(E∖L) ≥ r(E) − r(L).
///
/// Together with the equalities each pair describes the same halfspace.
pub fn alternative_system(sys: &ConstraintSystem, keep: &Selection) -> Result<ConstraintSystem> {
    let all = Selection::keep_all(sys);
    for f in [Family::Parallel, Family::Coparallel, Family::Locked] {
        if let Some(bad) = keep.get(f).difference(all.get(f)).next() {
            return input(format!("{f:?} selection {bad:?} is not a member of the family"));
        }
    }
    let mut inequalities = Vec::with_capacity(sys.inequalities.len());
    for q in &sys.inequalities {
        let Some(family) = q.provenance.family() else {
            inequalities.push(q.clone());
            continue;
        };
        let support = q.support();
        if keep.get(family).contains(&support) {
            inequalities.push(q.clone());
            continue;
        }
        let eq = sys
            .equalities
            .iter()
            .find(|e| {
                e.coeffs.values().all(|&c| c == 1)
                    && support.iter().all(|k| e.coeffs.contains_key(k))
            })
            .ok_or_else(|| Error::Input("no cardinality equality covers this row".into()))?;
        let rest = eq.coeffs.keys().copied().filter(|k| !q.coeffs.contains_key(k));
        let full_rank = eq.rhs;
        let (sense, rhs) = match family {
            Family::Parallel => (Sense::Ge, full_rank - 1),
            Family::Coparallel => (Sense::Le, full_rank - support.len() as i64 + 1),
            Family::Locked => (Sense::Ge, full_rank - q.rhs),
        };
        inequalities.push(Inequality::sum_over(
            rest,
            sense,
            rhs,
            Provenance::ComplementForm(Box::new(q.provenance.clone())),
        ));
    }
    Ok(ConstraintSystem {
        inequalities,
        equalities: sys.equalities.clone(),
        dimension: sys.dimension,
    })
}

/// How a non-locked subgraph's rank row is derived from valid rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessRoute {
    /// Outside of H disconnected: split E∖E(H) into L1, L2 and add the
    /// rank rows of H ∪ L1 and H ∪ L2, minus the cardinality equality.
    ComplementConnectivity {
        l1: BTreeSet<EdgeId>,
        l2: BTreeSet<EdgeId>,
        n_h_l1: usize,
        n_h_l2: usize,
    },
    /// E∖E(H) is a series path S: x(E(H)) = x(E) − x(S) and x(S) ≥ |S| − 1.
    EqualitySubstitution { series: BTreeSet<EdgeId> },
}

/// A nonnegative combination of valid rows (plus a multiple of the
/// cardinality equality) that implies the target row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundancyWitness {
    pub target: Inequality,
    pub route: WitnessRoute,
    /// Multipliers and rows; rows are in ≤ form except the equality.
    pub terms: Vec<(i64, Inequality)>,
    pub combined: Inequality,
}

impl RedundancyWitness {
    /// Checks the arithmetic: the terms sum to `combined`, whose
    /// coefficients equal the target's and whose right-hand side is no
    /// larger.
    pub fn validate(&self) -> bool {
        let mut sum: BTreeMap<usize, i64> = BTreeMap::new();
        let mut rhs = 0;
        for (mult, row) in &self.terms {
            if row.sense == Sense::Ge || (row.sense == Sense::Le && *mult < 0) {
                return false;
            }
            for (&k, &c) in &row.coeffs {
                *sum.entry(k).or_insert(0) += mult * c;
            }
            rhs += mult * row.rhs;
        }
        sum.retain(|_, c| *c != 0);
        sum == self.combined.coeffs
            && rhs == self.combined.rhs
            && self.combined.coeffs == self.target.coeffs
            && self.target.sense == Sense::Le
            && self.combined.rhs <= self.target.rhs
    }
}

/// Derives x(E(H)) ≤ n_H − 1 for an induced 2-connected subgraph H = G(U)
/// that is not locked, from rows valid for every spanning tree.
pub fn redundancy_witness(g: &Graph, u: &BTreeSet<VertexId>) -> Result<RedundancyWitness> {
    let reason = match is_locked_subgraph(g, u)? {
        LockedVerdict::Locked(_) => return input("the subgraph is locked; its row is a facet"),
        LockedVerdict::NotLocked(r) => r,
    };
    let h = induced_subgraph(g, u)?;
    let target = Inequality::sum_over(
        h.edges.iter().copied(),
        Sense::Le,
        h.n() as i64 - 1,
        Provenance::LockedSubgraph(u.iter().copied().collect()),
    );
    let cardinality = Inequality::sum_over(0..g.m(), Sense::Eq, g.n() as i64 - 1, Provenance::Cardinality);
    let (route, terms) = match reason.failed {
        FailedCondition::OutsideDisconnected => {
            let (l1, l2) = match reason.counting_witness {
                Some(w) => (w.l1, w.l2),
                None => split_outside_components(g, u, &h)?,
            };
            let h1 = h.with_edges(&l1);
            let h2 = h.with_edges(&l2);
            let rank_row = |s: &Subgraph<'_>| {
                Inequality::sum_over(
                    s.edges.iter().copied(),
                    Sense::Le,
                    s.n() as i64 - 1,
                    Provenance::RankBound(s.vertices.iter().copied().collect()),
                )
            };
            let terms = vec![(1, rank_row(&h1)), (1, rank_row(&h2)), (-1, cardinality)];
            (
                WitnessRoute::ComplementConnectivity {
                    n_h_l1: h1.n(),
                    n_h_l2: h2.n(),
                    l1,
                    l2,
                },
                terms,
            )
        }
        FailedCondition::EdgeOrBoundary => {
            let series = complement_subgraph(g, &h.edges)?.edges;
            let row = Inequality::sum_over(
                series.iter().copied(),
                Sense::Ge,
                series.len() as i64 - 1,
                Provenance::CoparallelClosure(series.iter().copied().collect()),
            );
            (
                WitnessRoute::EqualitySubstitution { series },
                vec![(1, row.as_le()), (1, cardinality)],
            )
        }
        other => {
            return input(format!(
                "no redundancy witness: subgraph fails {other:?}, not a complement condition"
            ))
        }
    };
    let mut combined = Inequality::new(
        terms
            .iter()
            .flat_map(|(m, r)| r.coeffs.iter().map(move |(&k, &c)| (k, m * c))),
        Sense::Le,
        terms.iter().map(|(m, r)| m * r.rhs).sum(),
        Provenance::External,
    );
    combined.provenance = target.provenance.clone();
    Ok(RedundancyWitness {
        target,
        route,
        terms,
        combined,
    })
}

/// First outside component against the rest; always a valid split for
/// the counting argument even when the halves are not connected.
fn split_outside_components(
    g: &Graph,
    u: &BTreeSet<VertexId>,
    h: &Subgraph<'_>,
) -> Result<(BTreeSet<EdgeId>, BTreeSet<EdgeId>)> {
    let outside: BTreeSet<VertexId> = (0..g.n()).filter(|v| !u.contains(v)).collect();
    let comps = crate::locked::outside_components(g, &outside);
    let Some(first) = comps.first() else {
        return input("subgraph has no outside vertices");
    };
    let (l1, l2) = (0..g.m())
        .filter(|e| !h.edges.contains(e))
        .partition(|&e| {
            let ed = g.edge(e);
            first.contains(&ed.u) || first.contains(&ed.v)
        });
    Ok((l1, l2))
}
