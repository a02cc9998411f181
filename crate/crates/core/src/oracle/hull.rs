//! Exact facet enumeration of conv(points) by double description.
//!
//! The points are first projected onto a set of coordinates that is
//! affinely independent on their affine hull, which makes the polytope
//! full-dimensional there. Facets are the extreme rays of the cone
//! {(b, a) : b − a·q ≥ 0 for every projected point q}, computed by adding
//! one point constraint at a time with the combinatorial adjacency test.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::linalg::{primitive_integer, rank_capped, rref, to_rational};
use crate::error::{Error, Result};
use crate::facets::{canonicalize, Inequality, Provenance, RowKey, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HullLimits {
    pub max_coordinates: usize,
    pub max_points: usize,
}

impl Default for HullLimits {
    fn default() -> Self {
        HullLimits {
            max_coordinates: 10,
            max_points: 500,
        }
    }
}

/// Affine hull of a point set with the data to reduce rows modulo it.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub ambient: usize,
    pub dimension: usize,
    /// Coordinates that parametrize the hull.
    pub free_coordinates: Vec<usize>,
    /// Integer equalities spanning the hull's linear constraints.
    pub equalities: Vec<Inequality>,
    /// One rational equation per dependent coordinate `c`: the coefficient
    /// vector has a 1 at `c` and zeros at the other dependent coordinates.
    reducers: Vec<(usize, Vec<BigRational>, BigRational)>,
}

/// Row reduced modulo the affine hull and scaled to a primitive integer
/// vector; two valid rows define the same face iff their forms agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
}

impl AffineHull {
    pub fn of(points: &[Vec<i64>]) -> Result<Self> {
        let Some(base) = points.first() else {
            return Err(Error::Input("affine hull of an empty point set".into()));
        };
        let m = base.len();
        let diffs: Vec<Vec<BigRational>> = points[1..]
            .iter()
            .map(|p| to_rational(&p.iter().zip(base).map(|(x, y)| x - y).collect::<Vec<_>>()))
            .collect();
        let (r, pivots) = rref(diffs, m);
        let dependent: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
        let mut reducers = Vec::new();
        let mut equalities = Vec::new();
        for &c in &dependent {
            // a_c = 1, a_{p_k} = −r[k][c]: orthogonal to every difference
            let mut a = vec![BigRational::zero(); m];
            a[c] = BigRational::from_integer(1.into());
            for (k, &p) in pivots.iter().enumerate() {
                a[p] = -r[k][c].clone();
            }
            let rhs: BigRational = a
                .iter()
                .zip(base)
                .map(|(x, &y)| x * BigRational::from_integer(y.into()))
                .sum();
            let mut with_rhs = a.clone();
            with_rhs.push(rhs.clone());
            let ints = primitive_integer(&with_rhs);
            let coeffs = ints[..m]
                .iter()
                .enumerate()
                .map(|(k, x)| (k, x.to_i64().expect("hull equalities fit in i64")));
            let eq = Inequality::new(
                coeffs,
                Sense::Eq,
                ints[m].to_i64().expect("hull equalities fit in i64"),
                Provenance::External,
            );
            equalities.push(canonicalize(&eq)?);
            reducers.push((c, a, rhs));
        }
        Ok(AffineHull {
            ambient: m,
            dimension: pivots.len(),
            free_coordinates: pivots,
            equalities,
            reducers,
        })
    }

    /// The affine space {x : A x = b} cut out by `equalities` in `ambient`
    /// coordinates. Fails if the equalities are inconsistent.
    pub fn from_equalities(ambient: usize, equalities: &[Inequality]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = equalities
            .iter()
            .map(|q| {
                let mut row = q.dense(ambient);
                row.push(q.rhs);
                to_rational(&row)
            })
            .collect();
        let (r, pivots) = rref(rows, ambient + 1);
        if pivots.last() == Some(&ambient) {
            return Err(Error::Input("inconsistent equalities".into()));
        }
        let mut reducers = Vec::new();
        let mut canonical = Vec::new();
        for (k, &c) in pivots.iter().enumerate() {
            let a = r[k][..ambient].to_vec();
            let rhs = r[k][ambient].clone();
            let ints = primitive_integer(&r[k]);
            let coeffs = ints[..ambient]
                .iter()
                .enumerate()
                .map(|(j, x)| (j, x.to_i64().expect("equalities fit in i64")));
            let eq = Inequality::new(coeffs, Sense::Eq, ints[ambient].to_i64().expect("equalities fit in i64"), Provenance::External);
            canonical.push(canonicalize(&eq)?);
            reducers.push((c, a, rhs));
        }
        Ok(AffineHull {
            ambient,
            dimension: ambient - pivots.len(),
            free_coordinates: (0..ambient).filter(|c| !pivots.contains(c)).collect(),
            equalities: canonical,
            reducers,
        })
    }

    /// Normal form of a ≤/≥ row, or `None` if it is constant on the hull.
    pub fn normal_form(&self, q: &Inequality) -> Option<NormalForm> {
        let le = q.as_le();
        let mut a: Vec<BigRational> = to_rational(&le.dense(self.ambient));
        let mut b = BigRational::from_integer(le.rhs.into());
        for (c, row, rhs) in &self.reducers {
            let f = a[*c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in a.iter_mut().zip(row) {
                *x = &*x - &f * y;
            }
            b -= &f * rhs;
        }
        if a.iter().all(Zero::is_zero) {
            return None;
        }
        a.push(b);
        let mut ints = primitive_integer(&a);
        let rhs = ints.pop().expect("rhs was pushed");
        Some(NormalForm { coeffs: ints, rhs })
    }
}

#[derive(Clone, Debug)]
pub struct HullDescription {
    pub equalities: Vec<Inequality>,
    /// Canonical (≤) facet rows, each simplified modulo the equalities.
    pub facets: Vec<Inequality>,
    pub hull: AffineHull,
}

impl HullDescription {
    pub fn facet_forms(&self) -> BTreeSet<NormalForm> {
        self.facets
            .iter()
            .map(|f| self.hull.normal_form(f).expect("facets are not constant on the hull"))
            .collect()
    }
}

/// Facets and affine-hull equalities of conv(points).
pub fn hull_facets(points: &[Vec<i64>], limits: &HullLimits) -> Result<HullDescription> {
    let m = points.first().map_or(0, Vec::len);
    if m > limits.max_coordinates || points.len() > limits.max_points {
        return Err(Error::Capacity {
            what: format!("convex hull of {} points in dimension {m}", points.len()),
            limit: limits.max_points as u64,
            hint: format!(
                "hull computation is limited to {} coordinates and {} points",
                limits.max_coordinates, limits.max_points
            ),
        });
    }
    let hull = AffineHull::of(points)?;
    let d = hull.dimension;
    let mut facets = Vec::new();
    if d > 0 {
        let projected: Vec<Vec<i64>> = points
            .iter()
            .map(|p| hull.free_coordinates.iter().map(|&c| p[c]).collect())
            .collect();
        for ray in double_description(&projected)? {
            let coeffs = hull
                .free_coordinates
                .iter()
                .zip(&ray[1..])
                .map(|(&c, &a)| (c, to_i64(a)));
            let q = Inequality::new(coeffs, Sense::Le, to_i64(ray[0]), Provenance::External);
            facets.push(simplify(&canonicalize(&q)?, &hull.equalities));
        }
    }
    facets.sort_by_key(Inequality::key);
    Ok(HullDescription {
        equalities: hull.equalities.clone(),
        facets,
        hull,
    })
}

fn to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("facet coefficients fit in i64")
}

struct Ray {
    coords: Vec<i128>,
    zeros: Vec<u64>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot(row: &[i128], ray: &[i128]) -> Result<i128> {
    row.iter().zip(ray).try_fold(0i128, |acc, (a, b)| {
        a.checked_mul(*b)
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow("double description"))
    })
}

/// Extreme rays (b, a_1..a_d) of {y : y·(1, −q) ≥ 0 for all points q} for
/// full-dimensional point sets in Z^d.
fn double_description(points: &[Vec<i64>]) -> Result<Vec<Vec<i128>>> {
    let d = points[0].len();
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|q| std::iter::once(1).chain(q.iter().map(|&x| -(x as i128))).collect())
        .collect();
    let words = rows.len().div_ceil(64);

    // d + 1 independent rows seed the cone
    let mut initial = Vec::new();
    for (i, _) in rows.iter().enumerate() {
        let mut candidate: Vec<&[i64]> = Vec::new();
        let as_i64: Vec<Vec<i64>> = initial
            .iter()
            .chain(std::iter::once(&i))
            .map(|&k: &usize| rows[k].iter().map(|&x| x as i64).collect())
            .collect();
        candidate.extend(as_i64.iter().map(Vec::as_slice));
        if rank_capped(candidate.iter().copied(), usize::MAX) == initial.len() + 1 {
            initial.push(i);
            if initial.len() == d + 1 {
                break;
            }
        }
    }
    if initial.len() != d + 1 {
        return Err(Error::Input("point set is not full-dimensional after projection".into()));
    }

    // rays of the seed cone are the columns of the inverse of its rows
    let n0 = d + 1;
    let mut aug: Vec<Vec<BigRational>> = initial
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut r: Vec<BigRational> = rows[i]
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            r.extend((0..n0).map(|j| BigRational::from_integer(BigInt::from((j == k) as i64))));
            r
        })
        .collect();
    aug = rref(aug, 2 * n0).0;
    let mut rays: Vec<Ray> = Vec::new();
    for k in 0..n0 {
        let col: Vec<BigRational> = (0..n0).map(|r| aug[r][n0 + k].clone()).collect();
        let coords: Vec<i128> = primitive_integer(&col)
            .iter()
            .map(|x| x.to_i128().ok_or(Error::Overflow("double description")))
            .collect::<Result<_>>()?;
        let mut zeros = vec![0u64; words];
        for (j, &i) in initial.iter().enumerate() {
            if j != k {
                set_bit(&mut zeros, i);
            }
        }
        rays.push(Ray { coords, zeros });
    }

    let seeded: BTreeSet<usize> = initial.iter().copied().collect();
    for (i, row) in rows.iter().enumerate() {
        if seeded.contains(&i) {
            continue;
        }
        let values: Vec<i128> = rays.iter().map(|r| dot(row, &r.coords)).collect::<Result<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k] < 0).collect();
        if neg.is_empty() {
            for (k, ray) in rays.iter_mut().enumerate() {
                if values[k] == 0 {
                    set_bit(&mut ray.zeros, i);
                }
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<u64> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[n].zeros)
                    .map(|(a, b)| a & b)
                    .collect();
                let size: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (size as usize) + 1 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !is_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let (vp, vn) = (values[p], -values[n]);
                let mut coords = Vec::with_capacity(d + 1);
                for (x, y) in rays[n].coords.iter().zip(&rays[p].coords) {
                    let c = vp
                        .checked_mul(*x)
                        .zip(vn.checked_mul(*y))
                        .and_then(|(a, b)| a.checked_add(b))
                        .ok_or(Error::Overflow("double description"))?;
                    coords.push(c);
                }
                gcd_normalize(&mut coords);
                let mut zeros = common;
                set_bit(&mut zeros, i);
                created.push(Ray { coords, zeros });
            }
        }
        let mut kept = Vec::with_capacity(rays.len() + created.len());
        for (k, mut ray) in rays.into_iter().enumerate() {
            if values[k] < 0 {
                continue;
            }
            if values[k] == 0 {
                set_bit(&mut ray.zeros, i);
            }
            kept.push(ray);
        }
        kept.extend(created);
        rays = kept;
    }
    debug_assert!(rays.iter().all(|r| (0..rows.len()).all(|i| bit(&r.zeros, i) == (dot(&rows[i], &r.coords).unwrap() == 0))));
    Ok(rays.into_iter().map(|r| r.coords).collect())
}

/// Sort key preferring sparse, small, mostly-positive rows.
fn niceness(q: &Inequality) -> (usize, i64, usize, RowKey) {
    (
        q.coeffs.len(),
        q.coeffs.values().map(|c| c.abs()).sum(),
        q.coeffs.values().filter(|&&c| c < 0).count(),
        q.key(),
    )
}

/// Picks a sparse representative of a ≤ row modulo the equalities by
/// repeatedly cancelling one coordinate against one equality.
pub fn simplify(q: &Inequality, equalities: &[Inequality]) -> Inequality {
    let mut best = q.clone();
    for _ in 0..64 {
        let mut improved = false;
        for eq in equalities {
            for (&j, &cj) in &eq.coeffs {
                let Some(&aj) = best.coeffs.get(&j) else {
                    continue;
                };
                // |cj|·a − sign(cj)·aj·c keeps the direction of the row
                let (s, t) = (cj.abs(), cj.signum() * aj);
                let coeffs = best
                    .coeffs
                    .iter()
                    .map(|(&k, &c)| (k, s * c))
                    .chain(eq.coeffs.iter().map(|(&k, &c)| (k, -t * c)));
                let cand = Inequality::new(coeffs, Sense::Le, s * best.rhs - t * eq.rhs, best.provenance.clone());
                let Ok(cand) = canonicalize(&cand) else { continue };
                if niceness(&cand) < niceness(&best) {
                    best = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    best
}
