//! Rank-oracle matroids and the definition-level ground truth.
//!
//! Everything here works straight from the rank function: 2-connectivity
//! by separator scan, closures from pairwise ranks, locked subsets by
//! exhaustive subset scan. It is exponential and meant for small ground
//! sets (a few dozen elements at most, usually under 16), where it serves
//! as the reference the graph-level code is checked against.

use std::fmt;

use crate::error::{input, Error, Result};
use crate::facets::{drop_equivalent_rows, ConstraintSystem, Inequality, Provenance, Sense};
use crate::graph::Graph;

/// A set of matroid elements `0..64` as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const MAX_ELEMENTS: usize = 64;

    pub const fn empty() -> Self {
        ElementSet(0)
    }

    /// `{0, .., k-1}`.
    pub fn full(k: usize) -> Self {
        assert!(k <= Self::MAX_ELEMENTS, "ElementSet holds at most 64 elements");
        if k == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << k) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        ElementSet(1u64 << e)
    }

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(e)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let all = self.0;
        let mut next = Some(all);
        std::iter::from_fn(move || {
            let cur = next?;
            next = (cur != 0).then(|| (cur - 1) & all);
            Some(ElementSet(cur))
        })
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::empty();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A matroid given by its ground set and an exact rank function.
///
/// `rank` is only ever called on subsets of `ground`.
pub trait Matroid {
    fn ground(&self) -> ElementSet;
    fn rank(&self, set: ElementSet) -> usize;

    fn full_rank(&self) -> usize {
        self.rank(self.ground())
    }
}

impl<M: Matroid + ?Sized> Matroid for &M {
    fn ground(&self) -> ElementSet {
        (**self).ground()
    }
    fn rank(&self, set: ElementSet) -> usize {
        (**self).rank(set)
    }
}

/// The cycle matroid M(G): rank(X) = |V(X)| − components of (V(X), X).
/// Elements are edge ids.
#[derive(Clone, Debug)]
pub struct GraphicMatroid {
    endpoints: Vec<(u8, u8)>,
}

impl GraphicMatroid {
    pub const MAX_VERTICES: usize = 256;

    pub fn new(g: &Graph) -> Result<Self> {
        if g.m() > ElementSet::MAX_ELEMENTS || g.n() > Self::MAX_VERTICES {
            return Err(Error::Capacity {
                what: format!("graphic matroid on {} vertices and {} edges", g.n(), g.m()),
                limit: ElementSet::MAX_ELEMENTS as u64,
                hint: "the rank oracle handles at most 64 edges and 256 vertices".into(),
            });
        }
        Ok(GraphicMatroid {
            endpoints: g.edges().iter().map(|e| (e.u as u8, e.v as u8)).collect(),
        })
    }
}

impl Matroid for GraphicMatroid {
    fn ground(&self) -> ElementSet {
        ElementSet::full(self.endpoints.len())
    }

    fn rank(&self, set: ElementSet) -> usize {
        let mut parent = [0u8; 256];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        fn find(p: &mut [u8; 256], mut x: u8) -> u8 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        let mut rank = 0;
        for e in set.iter() {
            let (u, v) = self.endpoints[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru as usize] = rv;
                rank += 1;
            }
        }
        rank
    }
}

/// U_{r,k}: every set of at most `r` of the `k` elements is independent.
#[derive(Clone, Copy, Debug)]
pub struct UniformMatroid {
    pub rank: usize,
    pub size: usize,
}

impl Matroid for UniformMatroid {
    fn ground(&self) -> ElementSet {
        ElementSet::full(self.size)
    }

    fn rank(&self, set: ElementSet) -> usize {
        set.len().min(self.rank)
    }
}

/// M ∖ D / C, keeping the base's element ids.
#[derive(Clone, Debug)]
pub struct MinorView<M> {
    base: M,
    deleted: ElementSet,
    contracted: ElementSet,
    contracted_rank: usize,
}

impl<M: Matroid> MinorView<M> {
    pub fn new(base: M, deleted: ElementSet, contracted: ElementSet) -> Result<Self> {
        if !deleted.intersection(contracted).is_empty() {
            return input("deleted and contracted sets overlap");
        }
        if !deleted.union(contracted).is_subset(base.ground()) {
            return input("minor removes elements outside the ground set");
        }
        let contracted_rank = base.rank(contracted);
        Ok(MinorView {
            base,
            deleted,
            contracted,
            contracted_rank,
        })
    }

    pub fn deletion(base: M, deleted: ElementSet) -> Result<Self> {
        Self::new(base, deleted, ElementSet::empty())
    }

    pub fn contraction(base: M, contracted: ElementSet) -> Result<Self> {
        Self::new(base, ElementSet::empty(), contracted)
    }

    /// M|X.
    pub fn restriction(base: M, keep: ElementSet) -> Result<Self> {
        let deleted = base.ground().difference(keep);
        Self::deletion(base, deleted)
    }
}

impl<M: Matroid> Matroid for MinorView<M> {
    fn ground(&self) -> ElementSet {
        self.base
            .ground()
            .difference(self.deleted)
            .difference(self.contracted)
    }

    fn rank(&self, set: ElementSet) -> usize {
        self.base.rank(set.union(self.contracted)) - self.contracted_rank
    }
}

/// The dual matroid M*, with rank r*(X) = |X| − r(E) + r(E∖X).
#[derive(Clone, Debug)]
pub struct DualView<M>(pub M);

impl<M: Matroid> Matroid for DualView<M> {
    fn ground(&self) -> ElementSet {
        self.0.ground()
    }

    fn rank(&self, set: ElementSet) -> usize {
        dual_rank(&self.0, set)
    }
}

/// r*(X) = |X| − r(E) + r(E∖X).
pub fn dual_rank<M: Matroid + ?Sized>(m: &M, x: ElementSet) -> usize {
    let ground = m.ground();
    x.len() + m.rank(ground.difference(x)) - m.full_rank()
}

/// True iff no proper nonempty X has r(X) + r(E∖X) = r(E). The empty
/// matroid is not 2-connected; a single element is (vacuously).
pub fn is_2connected_matroid<M: Matroid + ?Sized>(m: &M) -> bool {
    find_separator(m).is_none() && !m.ground().is_empty()
}

/// A proper nonempty separator X, if any. Only sets containing the
/// smallest element are scanned, since X and E∖X are interchangeable.
pub fn find_separator<M: Matroid + ?Sized>(m: &M) -> Option<ElementSet> {
    let ground = m.ground();
    let first = ElementSet::singleton(ground.first()?);
    let rest = ground.difference(first);
    let total = m.full_rank();
    rest.subsets()
        .filter(|&s| s != rest)
        .map(|s| s.union(first))
        .find(|&x| m.rank(x) + m.rank(ground.difference(x)) == total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosureKind {
    Parallel,
    Coparallel,
}

impl fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureKind::Parallel => "parallel",
            ClosureKind::Coparallel => "coparallel",
        })
    }
}

fn classes_by<F: Fn(ElementSet) -> usize>(ground: ElementSet, rank: F) -> Vec<ElementSet> {
    let mut classes: Vec<ElementSet> = Vec::new();
    for e in ground.iter() {
        let pair_rank_one = |c: &&mut ElementSet| {
            let rep = c.first().expect("classes are nonempty");
            rank(ElementSet::singleton(rep).union(ElementSet::singleton(e))) == 1
        };
        match classes.iter_mut().find(pair_rank_one) {
            Some(c) => c.insert(e),
            None => classes.push(ElementSet::singleton(e)),
        }
    }
    classes
}

/// Classes of e ~ f ⇔ r({e, f}) = 1, in order of smallest element.
pub fn parallel_classes<M: Matroid + ?Sized>(m: &M) -> Result<Vec<ElementSet>> {
    if let Some(e) = m.ground().iter().find(|&e| m.rank(ElementSet::singleton(e)) == 0) {
        return input(format!("element {e} is a loop"));
    }
    Ok(classes_by(m.ground(), |x| m.rank(x)))
}

/// Parallel classes of the dual: e ~ f ⇔ r*({e, f}) = 1.
pub fn coparallel_classes<M: Matroid + ?Sized>(m: &M) -> Result<Vec<ElementSet>> {
    if let Some(e) = m
        .ground()
        .iter()
        .find(|&e| dual_rank(m, ElementSet::singleton(e)) == 0)
    {
        return input(format!("element {e} is a coloop"));
    }
    Ok(classes_by(m.ground(), |x| dual_rank(m, x)))
}

pub fn closure_classes<M: Matroid + ?Sized>(m: &M, kind: ClosureKind) -> Result<Vec<ElementSet>> {
    match kind {
        ClosureKind::Parallel => parallel_classes(m),
        ClosureKind::Coparallel => coparallel_classes(m),
    }
}

/// Parallel closures are essential when M/P is 2-connected, coparallel
/// ones when M∖S is.
pub fn is_essential_closure<M: Matroid + ?Sized>(m: &M, class: ElementSet, kind: ClosureKind) -> bool {
    let minor = match kind {
        ClosureKind::Parallel => MinorView::contraction(m, class),
        ClosureKind::Coparallel => MinorView::deletion(m, class),
    };
    minor.is_ok_and(|minor| is_2connected_matroid(&minor))
}

/// r(L) ≥ max{2, 2 + r(E) − |E∖L|}, i.e. both r(L) and r*(E∖L) are at least 2.
fn locked_rank_condition<M: Matroid + ?Sized>(m: &M, l: ElementSet) -> bool {
    let r_l = m.rank(l) as i64;
    let outside = m.ground().difference(l).len() as i64;
    r_l >= 2 && r_l >= 2 + m.full_rank() as i64 - outside
}

/// Does `l` satisfy the locked-subset definition in `m`?
pub fn is_locked_subset<M: Matroid + ?Sized>(m: &M, l: ElementSet) -> bool {
    let ground = m.ground();
    if l.is_empty() || l == ground || !l.is_subset(ground) || !locked_rank_condition(m, l) {
        return false;
    }
    let restricted = MinorView::restriction(m, l).expect("l is inside the ground set");
    if !is_2connected_matroid(&restricted) {
        return false;
    }
    let contracted = MinorView::contraction(m, l).expect("l is inside the ground set");
    is_2connected_matroid(&contracted)
}

/// All locked subsets of a 2-connected matroid by exhaustive scan, sorted
/// by their element lists.
pub fn locked_subsets_bruteforce<M: Matroid + ?Sized>(m: &M) -> Result<Vec<ElementSet>> {
    if !is_2connected_matroid(m) {
        return Err(Error::NotBiconnected("locked subsets need a 2-connected matroid".into()));
    }
    let mut out: Vec<ElementSet> = m
        .ground()
        .subsets()
        .filter(|&l| is_locked_subset(m, l))
        .collect();
    out.sort_by_key(|s| s.to_vec());
    Ok(out)
}

/// Returns (r(E∖S), r(E) − |S| + 1); the two agree for every coparallel class S.
pub fn coparallel_rank_identity<M: Matroid + ?Sized>(m: &M, s: ElementSet) -> (i64, i64) {
    let rest = m.ground().difference(s);
    (
        m.rank(rest) as i64,
        m.full_rank() as i64 - s.len() as i64 + 1,
    )
}

/// Bases-polytope description of a 2-connected matroid: x(P) ≤ 1 per
/// essential parallel closure, x(S) ≥ |S| − 1 per essential coparallel
/// closure, x(L) ≤ r(L) per locked subset, and x(E) = r(E).
///
/// U_{1,2} is the one 2-connected matroid where both closure families
/// are the whole ground set and hence nonessential; its segment gets the
/// two bounds x(e) ≥ 0 instead.
pub fn bases_polytope_system<M: Matroid + ?Sized>(m: &M) -> Result<ConstraintSystem> {
    if !is_2connected_matroid(m) {
        return Err(Error::NotBiconnected(
            "the bases-polytope description is per 2-connected component".into(),
        ));
    }
    let ground = m.ground();
    let mut inequalities = Vec::new();
    if ground.len() == 2 {
        for e in ground.iter() {
            inequalities.push(Inequality::sum_over([e], Sense::Ge, 0, Provenance::Nonnegativity(e)));
        }
    } else {
        for p in parallel_classes(m)? {
            if is_essential_closure(m, p, ClosureKind::Parallel) {
                inequalities.push(Inequality::sum_over(
                    p.iter(),
                    Sense::Le,
                    1,
                    Provenance::ParallelClosure(p.to_vec()),
                ));
            }
        }
        for s in coparallel_classes(m)? {
            if is_essential_closure(m, s, ClosureKind::Coparallel) {
                inequalities.push(Inequality::sum_over(
                    s.iter(),
                    Sense::Ge,
                    s.len() as i64 - 1,
                    Provenance::CoparallelClosure(s.to_vec()),
                ));
            }
        }
        for l in locked_subsets_bruteforce(m)? {
            inequalities.push(Inequality::sum_over(
                l.iter(),
                Sense::Le,
                m.rank(l) as i64,
                Provenance::LockedSubset(l.to_vec()),
            ));
        }
    }
    let equalities = vec![Inequality::sum_over(
        ground.iter(),
        Sense::Eq,
        m.full_rank() as i64,
        Provenance::Cardinality,
    )];
    Ok(ConstraintSystem {
        inequalities: drop_equivalent_rows(inequalities, &equalities),
        equalities,
        dimension: ground.len() - 1,
    })
}
