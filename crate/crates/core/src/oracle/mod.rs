//! Brute-force ground truth: spanning-tree enumeration, exact affine rank,
//! facet checks and an exact convex hull for completeness.

pub mod hull;
pub mod linalg;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use hull::{hull_facets, AffineHull, HullDescription, HullLimits, NormalForm};
pub use linalg::ExactMatrix;

use crate::error::{Error, Result};
use crate::facets::{ConstraintSystem, Inequality, Sense};
use crate::graph::{blocks, EdgeId, Graph};

pub const DEFAULT_TREE_LIMIT: usize = 1_000_000;

/// Characteristic vector of a spanning tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVector {
    pub bits: Vec<u8>,
}

impl TreeVector {
    pub fn from_edges(m: usize, edges: &[EdgeId]) -> Self {
        let mut bits = vec![0; m];
        for &e in edges {
            bits[e] = 1;
        }
        TreeVector { bits }
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        (0..self.bits.len()).filter(|&e| self.bits[e] == 1).collect()
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.bits.iter().map(|&b| b as i64).collect()
    }
}

impl AsRef<[u8]> for TreeVector {
    fn as_ref(&self) -> &[u8] {
        &self.bits
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

pub fn spanning_trees(g: &Graph) -> Result<Vec<TreeVector>> {
    spanning_trees_capped(g, DEFAULT_TREE_LIMIT)
}

/// All spanning trees, in include-before-exclude order over edge ids.
pub fn spanning_trees_capped(g: &Graph, limit: usize) -> Result<Vec<TreeVector>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut search = TreeSearch {
        g,
        limit,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    search.descend(0, UnionFind::new(g.n()))?;
    Ok(search.out)
}

struct TreeSearch<'g> {
    g: &'g Graph,
    limit: usize,
    chosen: Vec<EdgeId>,
    out: Vec<TreeVector>,
}

impl TreeSearch<'_> {
    fn descend(&mut self, i: usize, uf: UnionFind) -> Result<()> {
        let (n, m) = (self.g.n(), self.g.m());
        if self.chosen.len() + 1 >= n {
            if self.out.len() == self.limit {
                return Err(Error::Capacity {
                    what: "spanning tree enumeration".into(),
                    limit: self.limit as u64,
                    hint: "raise the tree limit or use a smaller graph".into(),
                });
            }
            self.out.push(TreeVector::from_edges(m, &self.chosen));
            return Ok(());
        }
        if i == m {
            return Ok(());
        }
        let (u, v) = self.g.edge(i).endpoints();
        let mut with = UnionFind(uf.0.clone());
        if with.union(u, v) {
            self.chosen.push(i);
            self.descend(i + 1, with)?;
            self.chosen.pop();
        }
        // skipping edge i must leave the chosen edges plus later ones spanning
        let mut rest = UnionFind::new(n);
        let mut parts = n;
        for e in self.chosen.iter().copied().chain(i + 1..m) {
            let (a, b) = self.g.edge(e).endpoints();
            if rest.union(a, b) {
                parts -= 1;
            }
        }
        if parts == 1 {
            self.descend(i + 1, uf)?;
        }
        Ok(())
    }
}

/// Number of spanning trees by the matrix-tree theorem; 0 if disconnected.
pub fn tree_count_determinant(g: &Graph) -> BigInt {
    let n = g.n();
    if n <= 1 {
        return BigInt::one();
    }
    let mut lap = vec![vec![0i64; n]; n];
    for e in g.edges() {
        let (u, v) = e.endpoints();
        lap[u][u] += 1;
        lap[v][v] += 1;
        lap[u][v] -= 1;
        lap[v][u] -= 1;
    }
    let reduced: Vec<Vec<i64>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    let det = ExactMatrix::from_i64(&reduced, n - 1).determinant();
    if det < BigInt::zero() {
        -det
    } else {
        det
    }
}

/// Dimension of the affine hull of the vectors; −1 for an empty list.
pub fn affine_rank<V, T>(vectors: &[V]) -> i64
where
    V: AsRef<[T]>,
    T: Copy + Into<i64>,
{
    affine_rank_capped(vectors, usize::MAX)
}

fn affine_rank_capped<V, T>(vectors: &[V], cap: usize) -> i64
where
    V: AsRef<[T]>,
    T: Copy + Into<i64>,
{
    let Some(first) = vectors.first() else {
        return -1;
    };
    let base: Vec<i64> = first.as_ref().iter().map(|&x| x.into()).collect();
    let diffs: Vec<Vec<i64>> = vectors[1..]
        .iter()
        .map(|v| v.as_ref().iter().zip(&base).map(|(&x, &b)| x.into() - b).collect::<Vec<_>>())
        .filter(|row| row.iter().any(|&x| x != 0))
        .collect();
    linalg::rank_capped(diffs.iter().map(Vec::as_slice), cap) as i64
}

/// Checks validity of `q` on every tree and returns the tight ones.
fn tight_trees<'t>(q: &Inequality, trees: &'t [TreeVector]) -> Result<Vec<&'t [u8]>> {
    let mut tight = Vec::new();
    for t in trees {
        if !q.is_satisfied_by(&t.bits) {
            return Err(Error::Invalid { tree: t.edges() });
        }
        if q.is_tight_at(&t.bits) {
            tight.push(t.bits.as_slice());
        }
    }
    Ok(tight)
}

/// Dimension of the face defined by `q` (−1 if no tree is tight).
pub fn face_dimension(q: &Inequality, trees: &[TreeVector]) -> Result<i64> {
    Ok(affine_rank(&tight_trees(q, trees)?))
}

/// Whether `q` defines a facet of a polytope of dimension `dim`.
pub fn is_facet(q: &Inequality, trees: &[TreeVector], dim: usize) -> Result<bool> {
    Ok(analyze(q, trees, dim)?.is_facet)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub row: Inequality,
    pub valid: bool,
    pub violating_tree: Option<Vec<EdgeId>>,
    pub tight_trees: usize,
    /// Missing for invalid rows and for rows rejected on tight count alone.
    pub face_dimension: Option<i64>,
    pub is_facet: bool,
}

fn analyze(q: &Inequality, trees: &[TreeVector], dim: usize) -> Result<RowReport> {
    let tight = tight_trees(q, trees)?;
    let mut report = RowReport {
        row: q.clone(),
        valid: true,
        violating_tree: None,
        tight_trees: tight.len(),
        face_dimension: None,
        is_facet: false,
    };
    // a facet needs dim affinely independent tight trees
    if q.sense != Sense::Eq && dim >= 1 && tight.len() >= dim {
        let d = affine_rank_capped(&tight, dim);
        report.face_dimension = Some(d);
        report.is_facet = d == dim as i64 - 1;
    }
    Ok(report)
}

fn row_report(q: &Inequality, trees: &[TreeVector], dim: usize) -> Result<RowReport> {
    match analyze(q, trees, dim) {
        Err(Error::Invalid { tree }) => Ok(RowReport {
            row: q.clone(),
            valid: false,
            violating_tree: Some(tree),
            tight_trees: 0,
            face_dimension: None,
            is_facet: false,
        }),
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub tree_limit: usize,
    pub hull: HullLimits,
    pub compare_hull: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tree_limit: DEFAULT_TREE_LIMIT,
            hull: HullLimits::default(),
            compare_hull: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullCheck {
    Skipped(String),
    Compared {
        /// Hull facets with no equivalent system row.
        missing: Vec<Inequality>,
        /// System rows matching no hull facet.
        redundant: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityReport {
    pub row: Inequality,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub coordinates: usize,
    pub tree_count: usize,
    pub expected_dimension: usize,
    pub tree_dimension: i64,
    pub declared_dimension: usize,
    pub rows: Vec<RowReport>,
    pub equalities: Vec<EqualityReport>,
    pub equality_rank: usize,
    pub duplicates: Vec<(usize, usize)>,
    /// Pairs of distinct rows defining the same face modulo the equalities.
    pub equivalent: Vec<(usize, usize)>,
    pub hull: HullCheck,
}

impl VerificationReport {
    pub fn dimension_ok(&self) -> bool {
        self.tree_dimension == self.expected_dimension as i64
            && self.declared_dimension == self.expected_dimension
    }

    /// The equalities hold on every tree and cut out the affine hull.
    pub fn equalities_ok(&self) -> bool {
        self.equalities.iter().all(|e| e.valid)
            && self.equality_rank as i64 + self.tree_dimension == self.coordinates as i64
    }

    pub fn hull_ok(&self) -> bool {
        match &self.hull {
            HullCheck::Skipped(_) => true,
            HullCheck::Compared { missing, redundant } => missing.is_empty() && redundant.is_empty(),
        }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.valid && r.is_facet)
            && self.equalities_ok()
            && self.duplicates.is_empty()
            && self.equivalent.is_empty()
            && self.dimension_ok()
            && self.hull_ok()
    }

    pub fn render(&self, g: &Graph) -> String {
        let name = |e: usize| g.edge(e).label.clone();
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!(
            "spanning trees: {}; dimension {} (expected {}, declared {}) {}",
            self.tree_count,
            self.tree_dimension,
            self.expected_dimension,
            self.declared_dimension,
            ok(self.dimension_ok())
        ));
        for (i, e) in self.equalities.iter().enumerate() {
            line(format!("equality {i}: {} {}", e.row.render(name), ok(e.valid)));
        }
        line(format!(
            "equality rank {} + dimension {} vs {} coordinates {}",
            self.equality_rank,
            self.tree_dimension,
            self.coordinates,
            ok(self.equalities_ok())
        ));
        for (i, r) in self.rows.iter().enumerate() {
            let detail = if !r.valid {
                format!(
                    "INVALID, violated by tree {{{}}}",
                    g.edge_labels(r.violating_tree.clone().unwrap_or_default()).join(",")
                )
            } else {
                let face = r.face_dimension.map_or("-".to_string(), |d| d.to_string());
                format!(
                    "valid, {} tight trees, face dimension {face}, {}",
                    r.tight_trees,
                    if r.is_facet { "facet" } else { "NOT a facet" }
                )
            };
            line(format!("row {i}: {}: {detail}", r.row.render(name)));
        }
        for (i, j) in &self.duplicates {
            line(format!("duplicate rows {i} and {j}"));
        }
        for (i, j) in &self.equivalent {
            line(format!("rows {i} and {j} define the same face"));
        }
        match &self.hull {
            HullCheck::Skipped(why) => line(format!("hull comparison skipped: {why}")),
            HullCheck::Compared { missing, redundant } => {
                for q in missing {
                    line(format!("missing facet: {}", q.render(name)));
                }
                for &i in redundant {
                    line(format!("redundant row {i}: {}", self.rows[i].row.render(name)));
                }
                line(format!("hull comparison {}", ok(self.hull_ok())));
            }
        }
        line(format!("verdict: {}", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

/// Checks `sys` against the spanning trees of `g`.
pub fn verify_system(g: &Graph, sys: &ConstraintSystem, opts: &VerifyOptions) -> Result<VerificationReport> {
    let trees = spanning_trees_capped(g, opts.tree_limit)?;
    let decomposition = blocks(g)?;
    let expected_dimension = g.m() - decomposition.blocks.len();
    let tree_dimension = affine_rank(&trees);
    let dim = tree_dimension.max(0) as usize;

    let rows = sys
        .inequalities
        .iter()
        .map(|q| row_report(q, &trees, dim))
        .collect::<Result<Vec<_>>>()?;
    let equalities: Vec<EqualityReport> = sys
        .equalities
        .iter()
        .map(|q| EqualityReport {
            row: q.clone(),
            valid: trees.iter().all(|t| q.is_satisfied_by(&t.bits)),
        })
        .collect();
    let dense: Vec<Vec<i64>> = sys.equalities.iter().map(|q| q.dense(g.m())).collect();
    let equality_rank = linalg::rank_capped(dense.iter().map(Vec::as_slice), usize::MAX);
    let duplicates = sys.duplicate_rows();
    let equivalent = if equalities.iter().all(|e| e.valid) {
        equivalent_rows(sys, g.m(), &duplicates)?
    } else {
        Vec::new()
    };

    let hull = if !opts.compare_hull {
        HullCheck::Skipped("disabled".into())
    } else if g.m() > opts.hull.max_coordinates || trees.len() > opts.hull.max_points {
        HullCheck::Skipped(format!(
            "{} edges and {} trees exceed the hull bounds ({} edges, {} trees)",
            g.m(),
            trees.len(),
            opts.hull.max_coordinates,
            opts.hull.max_points
        ))
    } else {
        let points: Vec<Vec<i64>> = trees.iter().map(TreeVector::to_i64).collect();
        let h = hull_facets(&points, &opts.hull)?;
        compare_with_hull(sys, &h)
    };

    Ok(VerificationReport {
        coordinates: g.m(),
        tree_count: trees.len(),
        expected_dimension,
        tree_dimension,
        declared_dimension: sys.dimension,
        rows,
        equalities,
        equality_rank,
        duplicates,
        equivalent,
        hull,
    })
}

/// Row pairs that differ syntactically but agree modulo the system's own
/// equalities; exact duplicates are reported separately.
fn equivalent_rows(sys: &ConstraintSystem, m: usize, duplicates: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let space = AffineHull::from_equalities(m, &sys.equalities)?;
    let mut first: std::collections::BTreeMap<NormalForm, usize> = Default::default();
    let mut out = Vec::new();
    for (j, q) in sys.inequalities.iter().enumerate() {
        let Some(form) = space.normal_form(q) else { continue };
        match first.get(&form) {
            Some(&i) if !duplicates.contains(&(i, j)) => out.push((i, j)),
            Some(_) => {}
            None => {
                first.insert(form, j);
            }
        }
    }
    Ok(out)
}

/// Compares rows with hull facets modulo the hull's affine span.
pub fn compare_with_hull(sys: &ConstraintSystem, h: &HullDescription) -> HullCheck {
    let row_forms: Vec<Option<NormalForm>> =
        sys.inequalities.iter().map(|q| h.hull.normal_form(q)).collect();
    let hull_forms = h.facet_forms();
    let present: BTreeSet<&NormalForm> = row_forms.iter().flatten().collect();
    let missing = h
        .facets
        .iter()
        .filter(|f| {
            let form = h.hull.normal_form(f).expect("facets are not constant on the hull");
            !present.contains(&form)
        })
        .cloned()
        .collect();
    let redundant = row_forms
        .iter()
        .enumerate()
        .filter(|(_, f)| f.as_ref().is_none_or(|f| !hull_forms.contains(f)))
        .map(|(i, _)| i)
        .collect();
    HullCheck::Compared { missing, redundant }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} trees, dimension {}, {} rows, {}",
            self.tree_count,
            self.tree_dimension,
            self.rows.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
